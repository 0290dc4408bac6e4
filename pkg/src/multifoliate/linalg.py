"""Exact linear algebra over the rationals.

Matrices hold :class:`fractions.Fraction` entries; subspaces are stored by
their reduced row-echelon basis, so two subspaces are equal exactly when their
representations are equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Iterable, Sequence

from .errors import DimensionMismatch, ShapeMismatch

ZERO = Fraction(0)
ONE = Fraction(1)


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and strings like ``"-3/4"`` to a Fraction.

    Floats are refused: nothing in this package is allowed to be inexact.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if hasattr(x, "numerator") and hasattr(x, "denominator") and not isinstance(x, float):
        return Fraction(int(x.numerator), int(x.denominator))
    raise TypeError(f"cannot use {type(x).__name__} {x!r} as an exact rational")


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class Matrix:
    """Immutable dense rational matrix."""

    __slots__ = ("rows", "cols", "entries", "_hash")

    def __init__(self, entries: Iterable[Iterable], cols: int | None = None):
        data = tuple(tuple(as_rational(x) for x in row) for row in entries)
        if cols is None:
            if not data:
                raise ValueError("column count required for a matrix with no rows")
            cols = len(data[0])
        for row in data:
            if len(row) != cols:
                raise ShapeMismatch(f"ragged matrix: expected {cols} columns, got {len(row)}")
        self.rows = len(data)
        self.cols = cols
        self.entries = data
        self._hash = None

    @classmethod
    def _raw(cls, data: tuple, cols: int) -> "Matrix":
        m = cls.__new__(cls)
        m.rows = len(data)
        m.cols = cols
        m.entries = data
        m._hash = None
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls._raw(tuple((ZERO,) * cols for _ in range(rows)), cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._raw(tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)), n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Matrix":
        return Matrix([[c[i] for c in columns] for i in range(rows)], cols=len(columns))

    @classmethod
    def coordinate_projection(cls, indices: Sequence[int], n: int) -> "Matrix":
        """Rows ``e_i`` for i in ``indices``: picks those coordinates out of Q^n."""
        return cls._raw(tuple(tuple(ONE if j == i else ZERO for j in range(n)) for i in indices), n)

    @classmethod
    def block_diag(cls, *blocks: "Matrix") -> "Matrix":
        cols = sum(b.cols for b in blocks)
        out = []
        offset = 0
        for b in blocks:
            for row in b.entries:
                out.append((ZERO,) * offset + row + (ZERO,) * (cols - offset - b.cols))
            offset += b.cols
        return cls._raw(tuple(out), cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.entries)

    @property
    def T(self) -> "Matrix":
        return Matrix._raw(tuple(self.column(j) for j in range(self.cols)), self.rows)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        ocols = other.cols
        oent = other.entries
        out = []
        for row in self.entries:
            acc = [ZERO] * ocols
            for k, a in enumerate(row):
                if a:
                    orow = oent[k]
                    for j in range(ocols):
                        b = orow[j]
                        if b:
                            acc[j] += a * b
            out.append(tuple(acc))
        return Matrix._raw(tuple(out), ocols)

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.cols:
            raise ShapeMismatch(f"vector of length {len(v)} for matrix {self.shape}")
        return tuple(sum((a * b for a, b in zip(row, v) if a and b), ZERO) for row in self.entries)

    def _check_same(self, other: "Matrix"):
        if self.shape != other.shape:
            raise ShapeMismatch(f"shape {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix._raw(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)),
            self.cols,
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix._raw(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)),
            self.cols,
        )

    def __neg__(self) -> "Matrix":
        return Matrix._raw(tuple(tuple(-a for a in r) for r in self.entries), self.cols)

    def scale(self, c) -> "Matrix":
        c = as_rational(c)
        return Matrix._raw(tuple(tuple(c * a for a in r) for r in self.entries), self.cols)

    def submatrix(self, rows: Sequence[int] | None = None, cols: Sequence[int] | None = None) -> "Matrix":
        rows = range(self.rows) if rows is None else rows
        cols = range(self.cols) if cols is None else list(cols)
        return Matrix._raw(tuple(tuple(self.entries[i][j] for j in cols) for i in rows), len(cols))

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise ShapeMismatch(f"hstack of {self.shape} and {other.shape}")
        return Matrix._raw(tuple(r + s for r, s in zip(self.entries, other.entries)), self.cols + other.cols)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise ShapeMismatch(f"vstack of {self.shape} and {other.shape}")
        return Matrix._raw(self.entries + other.entries, self.cols)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.cols == other.cols and self.entries == other.entries

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.cols, self.entries))
        return self._hash

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self.entries]

    def to_json(self) -> list[list[str]]:
        return [[format_rational(x) for x in r] for r in self.entries]

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(format_rational(x) for x in r) + "]" for r in self.entries)
        return f"Matrix([{body}], cols={self.cols})"


def _rref_rows(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    # Gauss-Jordan that only touches nonzero entries of the pivot row.
    rows = [list(r) for r in rows]
    nrows = len(rows)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        lead = pr[c]
        if lead != 1:
            pr = [x / lead if x else x for x in pr]
            rows[r] = pr
        nz = [j for j in range(c, ncols) if pr[j]]
        for i in range(nrows):
            if i == r:
                continue
            ri = rows[i]
            f = ri[c]
            if f:
                for j in nz:
                    ri[j] -= f * pr[j]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def rref(m: Matrix) -> Matrix:
    """Canonical reduced row-echelon form with zero rows dropped."""
    reduced, _ = _rref_rows(m.entries, m.cols)
    return Matrix._raw(tuple(tuple(r) for r in reduced), m.cols)


def _integer_rows(rows) -> list[list[int]]:
    # scaling a row by a nonzero constant keeps the rank
    out = []
    for r in rows:
        den = 1
        for x in r:
            if x.denominator != 1:
                den = lcm(den, x.denominator)
        out.append([int(x * den) for x in r])
    return out


def rank(m: Matrix) -> int:
    """Rank by fraction-free (Bareiss) elimination on integer rows."""
    rows = _integer_rows(m.entries)
    nrows, ncols = len(rows), m.cols
    r = 0
    prev = 1
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        lead = pr[c]
        for i in range(r + 1, nrows):
            ri = rows[i]
            f = ri[c]
            rows[i] = [(lead * ri[j] - f * pr[j]) // prev for j in range(ncols)]
        prev = lead
        r += 1
    return r


def kernel_vectors(m: Matrix) -> list[tuple]:
    """The standard null-space basis: one vector per free column of ``rref(m)``."""
    return nullspace(m)[0]


def nullspace(m: Matrix) -> tuple[list[tuple], list[int]]:
    """Null-space basis and the free columns; vector k is 1 at free column k and 0 at the others."""
    reduced, pivots = _rref_rows(m.entries, m.cols)
    pivot_set = set(pivots)
    free_cols = [c for c in range(m.cols) if c not in pivot_set]
    out = []
    for free in free_cols:
        v = [ZERO] * m.cols
        v[free] = ONE
        for row, p in zip(reduced, pivots):
            if row[free]:
                v[p] = -row[free]
        out.append(tuple(v))
    return out, free_cols


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^ambient_dim, stored as its RREF basis (rows)."""

    ambient_dim: int
    basis: Matrix

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        m = Matrix(list(vectors), cols=ambient_dim)
        return cls(ambient_dim, rref(m))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, Matrix.zeros(0, n))

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, Matrix.identity(n))

    @classmethod
    def coordinate(cls, indices: Iterable[int], n: int) -> "Subspace":
        return cls(n, Matrix.coordinate_projection(sorted(set(indices)), n))

    @property
    def dim(self) -> int:
        return self.basis.rows

    @property
    def codim(self) -> int:
        return self.ambient_dim - self.dim

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(r) if x) for r in self.basis.entries)

    def vectors(self) -> list[tuple]:
        return list(self.basis.entries)

    def reduce(self, v: Sequence) -> list[Fraction]:
        """Residual of ``v`` after eliminating the pivot coordinates."""
        out = [as_rational(x) for x in v]
        for row, p in zip(self.basis.entries, self.pivots):
            f = out[p]
            if f:
                for j in range(p, self.ambient_dim):
                    if row[j]:
                        out[j] -= f * row[j]
        return out

    def contains_vector(self, v: Sequence) -> bool:
        if len(v) != self.ambient_dim:
            raise DimensionMismatch(f"vector of length {len(v)} in Q^{self.ambient_dim}")
        return not any(self.reduce(v))

    def __contains__(self, v) -> bool:
        return self.contains_vector(v)

    def __le__(self, other: "Subspace") -> bool:
        _check_ambient(self, other)
        return self.dim <= other.dim and all(other.contains_vector(v) for v in self.basis.entries)

    def __ge__(self, other: "Subspace") -> bool:
        return other <= self

    def __lt__(self, other: "Subspace") -> bool:
        return self.dim < other.dim and self <= other

    def __gt__(self, other: "Subspace") -> bool:
        return other < self

    def to_json(self):
        return {"ambient_dim": self.ambient_dim, "basis": self.basis.to_json()}


def _check_ambient(s: Subspace, t: Subspace):
    if s.ambient_dim != t.ambient_dim:
        raise DimensionMismatch(f"subspaces of Q^{s.ambient_dim} and Q^{t.ambient_dim}")


def kernel(m: Matrix) -> Subspace:
    return Subspace.span(kernel_vectors(m), m.cols)


def image(m: Matrix) -> Subspace:
    """Column space of ``m`` inside Q^rows."""
    return Subspace(m.rows, rref(m.T))


def subspace_sum(s: Subspace, t: Subspace) -> Subspace:
    _check_ambient(s, t)
    return Subspace(s.ambient_dim, rref(s.basis.vstack(t.basis)))


def annihilator(s: Subspace) -> Subspace:
    """Covectors vanishing on ``s``, written in the dual standard basis."""
    return kernel(s.basis)


def intersect(s: Subspace, t: Subspace) -> Subspace:
    _check_ambient(s, t)
    if s.dim == s.ambient_dim:
        return t
    if t.dim == t.ambient_dim:
        return s
    return kernel(annihilator(s).basis.vstack(annihilator(t).basis))


def intersect_all(spaces: Iterable[Subspace], ambient_dim: int) -> Subspace:
    out = Subspace.full(ambient_dim)
    for s in spaces:
        out = intersect(out, s)
    return out


def quotient_map(ambient_dim: int, s: Subspace) -> Matrix:
    """Surjection Q^n -> Q^(n - dim s) whose kernel is exactly ``s``.

    Output coordinates are the non-pivot coordinates of ``s`` after
    subtracting the component of ``s`` fixed by the pivot coordinates.
    """
    if s.ambient_dim != ambient_dim:
        raise DimensionMismatch(f"subspace of Q^{s.ambient_dim} in Q^{ambient_dim}")
    pivots = set(s.pivots)
    free = [j for j in range(ambient_dim) if j not in pivots]
    out = []
    for j in free:
        row = [ZERO] * ambient_dim
        row[j] = ONE
        for brow, p in zip(s.basis.entries, s.pivots):
            if brow[j]:
                row[p] -= brow[j]
        out.append(tuple(row))
    return Matrix._raw(tuple(out), ambient_dim)


def quotient_section(ambient_dim: int, s: Subspace) -> Matrix:
    """Right inverse of :func:`quotient_map`: sends e_j to the j-th free coordinate vector."""
    pivots = set(s.pivots)
    free = [j for j in range(ambient_dim) if j not in pivots]
    return Matrix.coordinate_projection(free, ambient_dim).T


def extend_basis(s: Subspace, t: Subspace) -> list[tuple]:
    """Vectors B in ``t`` with t = (s ∩ t) ⊕ span B.

    Candidates are the RREF basis rows of ``t`` in order; a row is kept when it
    is independent of ``s`` plus the rows already kept.
    """
    _check_ambient(s, t)
    chosen: list[tuple] = []
    acc = s
    for v in t.basis.entries:
        if not acc.contains_vector(v):
            chosen.append(v)
            acc = Subspace(acc.ambient_dim, rref(acc.basis.vstack(Matrix._raw((v,), acc.ambient_dim))))
    return chosen


def is_epimorphism(m: Matrix) -> bool:
    return rank(m) == m.rows


def is_isomorphism(m: Matrix) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise ShapeMismatch(f"inverse of non-square {m.shape}")
    n = m.rows
    aug = m.hstack(Matrix.identity(n))
    reduced, pivots = _rref_rows(aug.entries, 2 * n)
    if len(pivots) < n or pivots[n - 1] >= n:
        raise ValueError("matrix is singular")
    return Matrix._raw(tuple(tuple(r[n:]) for r in reduced), n)


def right_inverse(m: Matrix) -> Matrix:
    """A matrix R with m @ R = identity; requires full row rank."""
    if not is_epimorphism(m):
        raise ValueError("right inverse needs a surjective matrix")
    return m.T @ inverse(m @ m.T)


def left_inverse(m: Matrix) -> Matrix:
    """A matrix L with L @ m = identity; requires full column rank."""
    if rank(m) != m.cols:
        raise ValueError("left inverse needs an injective matrix")
    return inverse(m.T @ m) @ m.T


def maps_into(m: Matrix, s: Subspace, t: Subspace) -> bool:
    """Whether ``m`` sends the subspace ``s`` into ``t``."""
    return all(t.contains_vector(m.apply(v)) for v in s.basis.entries)
