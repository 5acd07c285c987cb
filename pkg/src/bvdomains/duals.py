"""Associated matrices and truncation tests for the alpha/beta/gamma duals.

The alpha-dual matrix is diag(a) . inverse(domain); the beta/gamma matrix
accumulates b_nk = sum_{j=k}^{n} a_j * inverse(domain)_jk.
Each dual kind is decided (heuristically, at truncation) by the matrix-class
conditions for (l1:l1), (l1:c), (l1:linf) evaluated on the associated matrix.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .core import Seq, Triangle, ZERO, invert
from .builders import Domain, RieszWeights, WeightPair
from .spaces import classify_trend, fmt, policy_dict

# A beta-column is called convergent at truncation when its oscillation over
# the last window is at most this; policy, not a theorem.
OSCILLATION_TOL = Fraction(1, 10**6)

DUAL_KINDS = ("alpha", "beta", "gamma")


def alpha_assoc(domain_matrix: Triangle, a: Seq) -> Triangle:
    """Matrix sending y = (domain)x to the products (a_n x_n): diag(a) . inverse."""
    inv = invert(domain_matrix)
    return Triangle(
        lambda n, k: a(n) * inv.entry(n, k),
        label=f"alpha_assoc({domain_matrix.label})",
    )


def beta_assoc(domain_matrix: Triangle, a: Seq) -> Triangle:
    """Matrix of partial sums sum_{k<=n} a_k x_k in the y coordinates.

    entry(n,k) = sum_{j=k}^{n} a_j * inverse(domain)_jk, held as per-column
    running sums so deep probes stay linear instead of quadratic.
    """
    inv = invert(domain_matrix)
    columns: dict[int, list[Fraction]] = {}
    lock = threading.Lock()

    def entry(n: int, k: int) -> Fraction:
        with lock:
            col = columns.setdefault(k, [a(k) * inv.entry(k, k)])
            while len(col) <= n - k:
                j = k + len(col)
                col.append(col[-1] + a(j) * inv.entry(j, k))
            return col[n - k]

    return Triangle(entry, label=f"beta_assoc({domain_matrix.label})")


def closed_form_beta_matrix(weights: Union[WeightPair, RieszWeights], a: Seq) -> Triangle:
    """The same beta/gamma matrix built from the weight closed forms only.

    Column k carries a_k/(u_k v_k) on the diagonal plus the partial sums of
    c_j = (1/v_j)(1/u_j - 1/u_{j-1}) a_j below it; no inversion is involved,
    so this is an independent oracle for beta_assoc on bv(G)/bv(R).
    """
    w = weights.as_weight_pair() if isinstance(weights, RieszWeights) else weights

    def diag_term(k: int) -> Fraction:
        return a(k) / (w.u_at(k) * w.v_at(k))

    def step(j: int) -> Fraction:  # only probed for j >= 1
        return (1 / w.u_at(j) - 1 / w.u_at(j - 1)) * a(j) / w.v_at(j)

    # prefix[j] = step(1) + ... + step(j), so the below-diagonal partial sums
    # are differences of prefixes instead of per-entry loops
    prefix: list[Fraction] = [ZERO]
    lock = threading.Lock()

    def prefix_at(j: int) -> Fraction:
        with lock:
            while len(prefix) <= j:
                prefix.append(prefix[-1] + step(len(prefix)))
            return prefix[j]

    def entry(n: int, k: int) -> Fraction:
        return diag_term(k) + prefix_at(n) - prefix_at(k)

    return Triangle(entry, label="closed_form_beta")


def cond_l1_linf(m, n: int) -> tuple:
    """sup |entry| over the N/4, N/2, N leading squares (condition for (l1:linf))."""
    _check_n(n)
    out = []
    for size in (n // 4, n // 2, n):
        best = ZERO
        for row in range(size):
            for col in range(size):
                best = max(best, abs(m.entry(row, col)))
        out.append((size, best))
    return tuple(out)


def cond_l1_c(m, n: int) -> tuple:
    """Per-column limit diagnostics for the (l1:c) condition.

    For each column k < N/4: the oscillation of the entries over rows
    [N/2, N] and the entry at row N as the limit estimate.
    """
    _check_n(n)
    cols = []
    for k in range(n // 4):
        window = [m.entry(row, k) for row in range(n // 2, n + 1)]
        osc = max(window) - min(window)
        cols.append(
            {
                "k": k,
                "oscillation": osc,
                "limit_estimate": m.entry(n, k),
                "converged": osc <= OSCILLATION_TOL,
            }
        )
    return tuple(cols)


def cond_l1_l1(m, n: int) -> tuple:
    """max_k of column absolute sums over the three leading squares ((l1:l1))."""
    _check_n(n)
    out = []
    for size in (n // 4, n // 2, n):
        best = ZERO
        for col in range(size):
            acc = ZERO
            for row in range(size):
                acc += abs(m.entry(row, col))
            best = max(best, acc)
        out.append((size, best))
    return tuple(out)


def _check_n(n: int):
    if n < 8 or n % 4 != 0:
        raise ValueError(f"truncation must be a multiple of 4 and >= 8, got {n}")


def _stats_dict(stats: tuple) -> list:
    return [{"index": i, "value": fmt(v)} for i, v in stats]


def _columns_dict(cols: tuple) -> list:
    return [
        {
            "k": c["k"],
            "oscillation": fmt(c["oscillation"]),
            "limit_estimate": fmt(c["limit_estimate"]),
            "converged": c["converged"],
        }
        for c in cols
    ]


@dataclass(frozen=True)
class DualReport:
    kind: str
    n: int
    cond_sup_entry: Optional[tuple]  # sup-entry stats (beta, gamma)
    cond_column_limits: Optional[tuple]  # per-column limit diagnostics (beta)
    cond_column_l1: Optional[tuple]  # column l1-sum stats (alpha; auxiliary for beta)
    verdict: str
    cross_check: Optional[dict] = None

    def to_dict(self) -> dict:
        conditions: dict = {}
        if self.cond_sup_entry is not None:
            conditions["sup_entry"] = _stats_dict(self.cond_sup_entry)
        if self.cond_column_limits is not None:
            conditions["column_limits"] = _columns_dict(self.cond_column_limits)
        if self.cond_column_l1 is not None:
            key = "column_l1" if self.kind == "alpha" else "column_l1_aux"
            conditions[key] = _stats_dict(self.cond_column_l1)
        policy = policy_dict()
        policy["oscillation_tolerance"] = str(OSCILLATION_TOL)
        return {
            "kind": self.kind,
            "n": self.n,
            "conditions": conditions,
            "verdict": self.verdict,
            "cross_check": self.cross_check,
            "policy": policy,
        }


def _condition_stats(kind: str, m, n: int):
    """The condition statistics relevant to a dual kind, on matrix m."""
    sup_entry = column_limits = column_l1 = None
    if kind == "alpha":
        column_l1 = cond_l1_l1(m, n)
    elif kind == "beta":
        sup_entry = cond_l1_linf(m, n)
        column_limits = cond_l1_c(m, n)
        # column l1 sums are informative for beta as well, but only as
        # auxiliary data; the verdict rests on sup-entry and column limits
        column_l1 = cond_l1_l1(m, n)
    elif kind == "gamma":
        sup_entry = cond_l1_linf(m, n)
    else:
        raise ValueError(f"unknown dual kind {kind!r}")
    return sup_entry, column_limits, column_l1


def _condition_verdict(kind, sup_entry, column_limits, column_l1) -> str:
    if kind == "alpha":
        return classify_trend(*(v for _, v in column_l1))
    trend = classify_trend(*(v for _, v in sup_entry))
    if kind == "gamma":
        return trend
    if trend == "likely_out":
        return "likely_out"
    if trend == "likely_in" and all(c["converged"] for c in column_limits):
        return "likely_in"
    return "inconclusive"


def dual_test(
    domain: Union[Domain, Triangle], a: Seq, kind: str, n: int
) -> DualReport:
    """Evaluate whether a belongs to the given dual of the bv matrix domain.

    Accepts either a bare domain Triangle or a Domain; when a Domain with
    weights (G or R) is given and kind is beta/gamma, the report cross-checks
    the generic associated matrix against the weight-closed-form construction.
    """
    _check_n(n)
    if isinstance(domain, Domain):
        matrix, weights = domain.matrix, domain.weights
    else:
        matrix, weights = domain, None
    if kind not in DUAL_KINDS:
        raise ValueError(f"unknown dual kind {kind!r}")

    assoc = alpha_assoc(matrix, a) if kind == "alpha" else beta_assoc(matrix, a)
    sup_entry, column_limits, column_l1 = _condition_stats(kind, assoc, n)

    if a.support_bound is not None and a.support_bound <= n // 4:
        verdict = "certified_in"
    else:
        verdict = _condition_verdict(kind, sup_entry, column_limits, column_l1)

    cross_check = None
    if weights is not None and kind in ("beta", "gamma"):
        oracle = closed_form_beta_matrix(weights, a)
        o_sup, o_cols, o_l1 = _condition_stats(kind, oracle, n)
        cross_check = {
            "sup_entry": _stats_dict(o_sup),
            "match": o_sup == sup_entry and o_cols == column_limits,
        }
        if o_cols is not None:
            cross_check["column_limits"] = _columns_dict(o_cols)

    return DualReport(kind, n, sup_entry, column_limits, column_l1, verdict, cross_check)
