"""Exact lazy primitives: rational scalars, infinite sequences, triangle matrices.

Every scalar is a ``fractions.Fraction``, so all identities checked elsewhere in
the package are bit-exact rather than tolerance-based.  Sequences and matrices
are lazy (index -> value closures) with internally synchronized memoization, so
a single object may be shared across threads.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class SingularMatrixError(ArithmeticError):
    """Raised when forward substitution meets a zero diagonal entry."""

    def __init__(self, row: int):
        super().__init__(f"zero diagonal entry at row {row}; matrix is singular")
        self.row = row


class InvalidWeightsError(ValueError):
    """Raised when a weight sequence violates its validity contract."""

    def __init__(self, name: str, index: int, value: Fraction, requirement: str):
        super().__init__(
            f"invalid weight {name}[{index}] = {value}: {requirement}"
        )
        self.name = name
        self.index = index
        self.value = value


def rat(value) -> Fraction:
    """Coerce an int, Fraction, or exact literal like ``-3/7`` to a Fraction.

    Floats are rejected: they are not exact and would silently poison
    bit-exact identity checks.  A unicode minus sign is accepted in strings.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"not an exact rational: {value!r}")
    if isinstance(value, str):
        value = value.replace("−", "-").strip()
    return Fraction(value)


class Seq:
    """A lazily evaluated infinite sequence of rationals.

    ``support_bound``, when present, declares that every term beyond that index
    is zero; the accessor short-circuits without consulting the closure, which
    is what makes finite-support membership and dual verdicts decidable.
    """

    def __init__(
        self,
        eval_fn: Callable[[int], Fraction],
        support_bound: Optional[int] = None,
        label: str = "seq",
    ):
        self._eval = eval_fn
        self.support_bound = support_bound
        self.label = label
        self._cache: dict[int, Fraction] = {}
        self._lock = threading.RLock()

    def __call__(self, k: int) -> Fraction:
        if k < 0:
            raise IndexError(f"sequence index must be >= 0, got {k}")
        if self.support_bound is not None and k > self.support_bound:
            return ZERO
        with self._lock:
            value = self._cache.get(k)
            if value is None:
                value = rat(self._eval(k))
                self._cache[k] = value
            return value

    def __repr__(self):
        return f"Seq({self.label})"

    @staticmethod
    def from_values(values, label: str = "finite") -> "Seq":
        """Finitely supported sequence given by a prefix of literals."""
        terms = [rat(v) for v in values]
        return Seq(
            lambda k: terms[k] if k < len(terms) else ZERO,
            support_bound=max(len(terms) - 1, 0),
            label=label,
        )

    @staticmethod
    def constant(c, label: Optional[str] = None) -> "Seq":
        value = rat(c)
        return Seq(lambda k: value, label=label or f"const({value})")

    @staticmethod
    def unit(j: int) -> "Seq":
        """The coordinate sequence with a single 1 at index j."""
        return Seq(
            lambda k: ONE if k == j else ZERO,
            support_bound=j,
            label=f"e({j})",
        )


def seq_eval(x: Seq, k: int) -> Fraction:
    """Evaluate x at index k (honors the finite-support short-circuit)."""
    return x(k)


class Triangle:
    """A lazily evaluated infinite lower-triangular matrix.

    Entries above the diagonal are identically zero by construction: the
    accessor returns 0 for k > n without consulting the entry closure.
    ``diag_nonzero`` asserts every diagonal entry is nonzero, which is the
    precondition for forward-substitution inversion.
    """

    def __init__(
        self,
        entry_fn: Callable[[int, int], Fraction],
        diag_nonzero: bool = False,
        label: str = "triangle",
    ):
        self._entry = entry_fn
        self.diag_nonzero = diag_nonzero
        self.label = label
        self._cache: dict[tuple[int, int], Fraction] = {}
        self._lock = threading.RLock()
        self._inverse: Optional[Triangle] = None

    def entry(self, n: int, k: int) -> Fraction:
        if n < 0 or k < 0:
            raise IndexError(f"matrix indices must be >= 0, got ({n}, {k})")
        if k > n:
            return ZERO
        with self._lock:
            value = self._cache.get((n, k))
            if value is None:
                value = rat(self._entry(n, k))
                self._cache[(n, k)] = value
            return value

    def __repr__(self):
        return f"Triangle({self.label})"

    def inverse(self) -> "Triangle":
        """The forward-substitution inverse, computed and shared lazily."""
        with self._lock:
            if self._inverse is None:
                self._inverse = _build_inverse(self)
            return self._inverse


def identity() -> Triangle:
    return Triangle(
        lambda n, k: ONE if n == k else ZERO, diag_nonzero=True, label="identity"
    )


@dataclass(frozen=True)
class DenseTrunc:
    """The N x N leading principal submatrix of a Triangle, held exactly."""

    size: int
    values: tuple  # tuple of row tuples of Fraction

    def __getitem__(self, nk):
        n, k = nk
        return self.values[n][k]


def truncate(source, n_size: int) -> DenseTrunc:
    """Materialize the leading n_size x n_size block of any entry-addressable
    matrix (Triangle, BandedMatrix, ...)."""
    if n_size < 1:
        raise ValueError(f"truncation size must be >= 1, got {n_size}")
    rows = tuple(
        tuple(source.entry(n, k) for k in range(n_size)) for n in range(n_size)
    )
    return DenseTrunc(n_size, rows)


def dense_identity(n_size: int) -> DenseTrunc:
    rows = tuple(
        tuple(ONE if n == k else ZERO for k in range(n_size)) for n in range(n_size)
    )
    return DenseTrunc(n_size, rows)


def dense_mul(a: DenseTrunc, b: DenseTrunc) -> DenseTrunc:
    if a.size != b.size:
        raise ValueError(f"size mismatch: {a.size} vs {b.size}")
    n_size = a.size
    rows = []
    for n in range(n_size):
        arow = a.values[n]
        row = []
        for k in range(n_size):
            acc = ZERO
            for j in range(n_size):
                if arow[j]:
                    acc += arow[j] * b.values[j][k]
            row.append(acc)
        rows.append(tuple(row))
    return DenseTrunc(n_size, tuple(rows))


def apply(t: Triangle, x: Seq, n_size: int) -> list:
    """First n_size coordinates of the transform Tx.

    For a triangle each coordinate is the finite sum over k <= n, which is the
    full transform coordinate, not an approximation.
    """
    if n_size < 1:
        raise ValueError(f"transform length must be >= 1, got {n_size}")
    out = []
    for n in range(n_size):
        acc = ZERO
        for k in range(n + 1):
            c = t.entry(n, k)
            if c:
                acc += c * x(k)
        out.append(acc)
    return out


def transform_seq(t: Triangle, x: Seq) -> Seq:
    """The transform Tx as a lazy Seq."""

    def coord(n: int) -> Fraction:
        acc = ZERO
        for k in range(n + 1):
            c = t.entry(n, k)
            if c:
                acc += c * x(k)
        return acc

    return Seq(coord, label=f"{t.label}*{x.label}")


def compose(a: Triangle, b: Triangle) -> Triangle:
    """Matrix product A.B of triangles ("B first, then A"); again a triangle."""

    def entry(n: int, k: int) -> Fraction:
        acc = ZERO
        for j in range(k, n + 1):
            c = a.entry(n, j)
            if c:
                acc += c * b.entry(j, k)
        return acc

    return Triangle(
        entry,
        diag_nonzero=a.diag_nonzero and b.diag_nonzero,
        label=f"{a.label}.{b.label}",
    )


def _build_inverse(t: Triangle) -> Triangle:
    # Forward substitution, row by row; rows are cached in order so deep
    # compose/invert chains stay polynomial.
    rows: list[list[Fraction]] = []
    lock = threading.RLock()

    def ensure(n: int):
        with lock:
            while len(rows) <= n:
                m = len(rows)
                d = t.entry(m, m)
                if d == 0:
                    raise SingularMatrixError(m)
                row = []
                for k in range(m):
                    acc = ZERO
                    for j in range(k, m):
                        c = t.entry(m, j)
                        if c:
                            acc += c * rows[j][k]
                    row.append(-acc / d)
                row.append(ONE / d)
                rows.append(row)

    def entry(n: int, k: int) -> Fraction:
        ensure(n)
        return rows[n][k]

    return Triangle(entry, diag_nonzero=True, label=f"inverse({t.label})")


def invert(t: Triangle) -> Triangle:
    """Inverse of a triangle with nonzero diagonal.

    The result satisfies truncate(T,N) . truncate(invert(T),N) = I_N exactly
    for every N.  A zero diagonal entry found while probing raises
    SingularMatrixError naming the offending row.
    """
    if not t.diag_nonzero:
        raise ValueError(
            f"cannot invert {t.label}: diagonal is not declared nonzero"
        )
    return t.inverse()
