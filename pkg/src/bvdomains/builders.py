"""Constructors for the named triangle matrices and their basis columns.

The composed domain matrices (phi, gamma, sigma_riesz) are *defined* as
compose(delta(), mean) and never by printed closed forms; the closed forms are
provided separately as independent oracles (``*_closed_form``).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .core import (
    ONE,
    ZERO,
    InvalidWeightsError,
    Seq,
    Triangle,
    compose,
    invert,
    rat,
)


def delta() -> Triangle:
    """Backward difference matrix: 1 on the diagonal, -1 on the first subdiagonal."""
    return Triangle(
        lambda n, k: ONE if k == n else (-ONE if k == n - 1 else ZERO),
        diag_nonzero=True,
        label="delta",
    )


def sigma_sum() -> Triangle:
    """Partial-sum matrix (all ones on and below the diagonal); inverse of delta."""
    return Triangle(lambda n, k: ONE, diag_nonzero=True, label="sum")


def cesaro() -> Triangle:
    """Cesaro mean of order one: row n averages the first n+1 terms."""
    return Triangle(
        lambda n, k: Fraction(1, n + 1), diag_nonzero=True, label="cesaro"
    )


def cesaro_inverse() -> Triangle:
    """Closed-form inverse of the Cesaro mean: x_n = (n+1)y_n - n*y_{n-1}."""

    def entry(n, k):
        if k == n:
            return Fraction(n + 1)
        if k == n - 1:
            return Fraction(-n)
        return ZERO

    return Triangle(entry, diag_nonzero=True, label="cesaro_inv")


@dataclass(frozen=True)
class WeightPair:
    """Weights (u, v) for the generalized weighted mean; both nowhere zero.

    Validity is checked lazily at probe time, failing with the offending index.
    """

    u: Seq
    v: Seq

    def u_at(self, n: int) -> Fraction:
        value = self.u(n)
        if value == 0:
            raise InvalidWeightsError("u", n, value, "must be nonzero")
        return value

    def v_at(self, k: int) -> Fraction:
        value = self.v(k)
        if value == 0:
            raise InvalidWeightsError("v", k, value, "must be nonzero")
        return value


@dataclass
class RieszWeights:
    """Positive weights q with partial sums Q_n = q_0 + ... + q_n (Q_{-1} = 0)."""

    q: Seq
    _sums: list = field(default_factory=list, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def q_at(self, k: int) -> Fraction:
        value = self.q(k)
        if value <= 0:
            raise InvalidWeightsError("q", k, value, "must be positive")
        return value

    def big_q(self, n: int) -> Fraction:
        if n < 0:
            return ZERO
        with self._lock:
            while len(self._sums) <= n:
                m = len(self._sums)
                prev = self._sums[m - 1] if m else ZERO
                self._sums.append(prev + self.q_at(m))
            return self._sums[n]

    def as_weight_pair(self) -> WeightPair:
        """The substitution u_n = 1/Q_n, v_k = q_k that turns G(u,v) into R^q."""
        return WeightPair(
            u=Seq(lambda n: 1 / self.big_q(n), label="1/Q"),
            v=self.q,
        )


def weighted_mean(w: WeightPair) -> Triangle:
    """Generalized weighted (factorable) mean: entry(n,k) = u_n * v_k."""
    return Triangle(
        lambda n, k: w.u_at(n) * w.v_at(k), diag_nonzero=True, label="weighted"
    )


def riesz(r: RieszWeights) -> Triangle:
    """Riesz mean: entry(n,k) = q_k / Q_n."""
    return Triangle(
        lambda n, k: r.q_at(k) / r.big_q(n), diag_nonzero=True, label="riesz"
    )


def phi() -> Triangle:
    """Domain matrix of bv(C): delta composed after the Cesaro mean."""
    t = compose(delta(), cesaro())
    t.label = "phi"
    return t


def gamma(w: WeightPair) -> Triangle:
    """Domain matrix of bv(G): delta composed after the weighted mean."""
    t = compose(delta(), weighted_mean(w))
    t.label = "gamma"
    return t


def sigma_riesz(r: RieszWeights) -> Triangle:
    """Domain matrix of bv(R): delta composed after the Riesz mean."""
    t = compose(delta(), riesz(r))
    t.label = "sigma"
    return t


def phi_closed_form() -> Triangle:
    """Independent oracle: -1/(n(n+1)) below the diagonal, 1/(n+1) on it."""

    def entry(n, k):
        if n == 0:
            return ONE
        if k == n:
            return Fraction(1, n + 1)
        return Fraction(-1, n * (n + 1))

    return Triangle(entry, diag_nonzero=True, label="phi_closed")


def gamma_closed_form(w: WeightPair) -> Triangle:
    """Independent oracle: (u_n - u_{n-1}) v_k below the diagonal, u_n v_n on it."""

    def entry(n, k):
        if k == n:
            return w.u_at(n) * w.v_at(k)
        return (w.u_at(n) - w.u_at(n - 1)) * w.v_at(k)

    return Triangle(entry, diag_nonzero=True, label="gamma_closed")


def sigma_closed_form(r: RieszWeights) -> Triangle:
    """Independent oracle: (1/Q_n - 1/Q_{n-1}) q_k below the diagonal, q_n/Q_n on it."""

    def entry(n, k):
        if k == n:
            return r.q_at(n) / r.big_q(n)
        return (1 / r.big_q(n) - 1 / r.big_q(n - 1)) * r.q_at(k)

    return Triangle(entry, diag_nonzero=True, label="sigma_closed")


def basis_column(t: Triangle, k: int) -> Seq:
    """Column k of the inverse of t, as a Seq.

    These columns are the Schauder-basis elements of the matrix domain:
    applying t to the result reproduces the k-th coordinate sequence.
    """
    inv = invert(t)
    return Seq(lambda n: inv.entry(n, k), label=f"basis({t.label},{k})")


Weights = Union[WeightPair, RieszWeights, None]


@dataclass(frozen=True)
class Domain:
    """A bv matrix domain: label C/G/R, its triangle, and the weights used."""

    label: str  # "C", "G", or "R"
    matrix: Triangle
    weights: Weights = None


def cesaro_domain() -> Domain:
    return Domain("C", phi())


def weighted_domain(w: WeightPair) -> Domain:
    return Domain("G", gamma(w), w)


def riesz_domain(r: RieszWeights) -> Domain:
    return Domain("R", sigma_riesz(r), r)
