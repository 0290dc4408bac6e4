"""Weil algebras given by structure constants, and their homomorphisms."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from ..errors import (
    NotAssociative,
    NotCommutative,
    NotMultiplicative,
    NotNilpotent,
    NotUnital,
    ShapeMismatch,
)
from ..linalg import Matrix, Subspace, as_rational, format_rational

Element = tuple  # tuple of Fractions, one per basis index


class WeilAlgebra:
    """Finite-dimensional commutative unital algebra with nilpotent augmentation ideal.

    Basis index 0 is the unit; ``table[i][j]`` is the coordinate vector of
    ``e_i * e_j``. Build with :func:`validate_weil_algebra` or one of the
    constructors below.
    """

    def __init__(self, table, labels: Sequence[str] | None = None, monomials=None):
        self.table = tuple(tuple(tuple(as_rational(c) for c in v) for v in row) for row in table)
        self.dim = len(self.table)
        self.labels = tuple(labels) if labels is not None else tuple(f"e{i}" for i in range(self.dim))
        # exponent vectors when the algebra is a truncated polynomial algebra
        self.monomials = tuple(monomials) if monomials is not None else None
        self._terms = [
            (i, j, [(k, c) for k, c in enumerate(self.table[i][j]) if c])
            for i in range(self.dim)
            for j in range(self.dim)
        ]
        self._terms = [t for t in self._terms if t[2]]

    def __eq__(self, other) -> bool:
        return isinstance(other, WeilAlgebra) and self.table == other.table

    def __hash__(self) -> int:
        return hash(self.table)

    def __repr__(self) -> str:
        return f"WeilAlgebra(dim={self.dim}, labels={list(self.labels)})"

    def zero(self) -> Element:
        return (Fraction(0),) * self.dim

    def one(self) -> Element:
        return self.scalar(1)

    def scalar(self, c) -> Element:
        return (as_rational(c),) + (Fraction(0),) * (self.dim - 1)

    def basis(self, i: int) -> Element:
        return tuple(Fraction(int(k == i)) for k in range(self.dim))

    def add(self, x: Element, y: Element) -> Element:
        return tuple(a + b for a, b in zip(x, y))

    def sub(self, x: Element, y: Element) -> Element:
        return tuple(a - b for a, b in zip(x, y))

    def scale(self, c, x: Element) -> Element:
        c = as_rational(c)
        return tuple(c * a for a in x)

    def mul(self, x: Element, y: Element) -> Element:
        out = [Fraction(0)] * self.dim
        for i, j, terms in self._terms:
            a, b = x[i], y[j]
            if a and b:
                ab = a * b
                for k, c in terms:
                    out[k] += ab * c
        return tuple(out)

    def power(self, x: Element, k: int) -> Element:
        out = self.one()
        for _ in range(k):
            out = self.mul(out, x)
        return out

    def augmentation(self, x: Element) -> Fraction:
        """The real part: coefficient of the unit."""
        return x[0]

    def element(self, coords: Sequence) -> Element:
        if len(coords) != self.dim:
            raise ShapeMismatch(f"element with {len(coords)} coordinates in an algebra of dimension {self.dim}")
        return tuple(as_rational(c) for c in coords)

    def nilpotency_order(self) -> int:
        """Smallest k with (augmentation ideal)^k = 0."""
        n = self.dim
        ideal = [self.basis(i) for i in range(1, n)]
        power = Subspace.span(ideal, n) if ideal else Subspace.zero(n)
        k = 1
        while power.dim:
            if k > n:
                raise NotNilpotent("augmentation ideal is not nilpotent", witness={"power": k})
            nxt = [self.mul(v, e) for v in power.basis.entries for e in ideal]
            new = Subspace.span(nxt, n) if nxt else Subspace.zero(n)
            if new == power:
                raise NotNilpotent("augmentation ideal is not nilpotent", witness={"power": k})
            power = new
            k += 1
        return k

    def to_json(self) -> dict:
        out = {
            "dim": self.dim,
            "table": [[[format_rational(c) for c in v] for v in row] for row in self.table],
        }
        if self.labels != tuple(f"e{i}" for i in range(self.dim)):
            out["labels"] = list(self.labels)
        return out


def validate_weil_algebra(table, labels=None, monomials=None) -> WeilAlgebra:
    dim = len(table)
    if dim < 1:
        raise ShapeMismatch("a Weil algebra has dimension at least 1")
    for row in table:
        if len(row) != dim or any(len(v) != dim for v in row):
            raise ShapeMismatch(f"multiplication table must be {dim} x {dim} x {dim}")
    alg = WeilAlgebra(table, labels, monomials)
    t = alg.table
    for j in range(dim):
        e = alg.basis(j)
        if t[0][j] != e or t[j][0] != e:
            raise NotUnital(f"basis index 0 does not act as the unit on index {j}", witness={"index": j})
    for i in range(dim):
        for j in range(i + 1, dim):
            if t[i][j] != t[j][i]:
                raise NotCommutative(f"e{i} e{j} != e{j} e{i}", witness={"pair": [i, j]})
    for i, j, k in product(range(dim), repeat=3):
        left = alg.mul(t[i][j], alg.basis(k))
        right = alg.mul(alg.basis(i), t[j][k])
        if left != right:
            raise NotAssociative(f"(e{i} e{j}) e{k} != e{i} (e{j} e{k})", witness={"triple": [i, j, k]})
    alg.nilpotency_order()
    return alg


def real_line() -> WeilAlgebra:
    """Q itself; its Weil functor is the identity."""
    return validate_weil_algebra([[[1]]], labels=["1"], monomials=[(0,)])


def truncated_polynomial_algebra(order: int, nvars: int = 1) -> WeilAlgebra:
    """Q[x_1..x_v] modulo monomials of total degree > order (jets of that order)."""
    if order < 0 or nvars < 1:
        raise ValueError("order must be >= 0 and nvars >= 1")
    monos = [m for m in product(range(order + 1), repeat=nvars) if sum(m) <= order]
    monos.sort(key=lambda m: (sum(m), tuple(-e for e in m)))
    index = {m: i for i, m in enumerate(monos)}
    dim = len(monos)
    table = []
    for a in monos:
        row = []
        for b in monos:
            v = [0] * dim
            c = tuple(x + y for x, y in zip(a, b))
            if c in index:
                v[index[c]] = 1
            row.append(v)
        table.append(row)
    names = "txyzuvw"
    labels = []
    for m in monos:
        if not any(m):
            labels.append("1")
            continue
        parts = []
        for v, e in enumerate(m):
            if e:
                name = names[v] if nvars == 1 else (names[v + 1] if v + 1 < len(names) else f"x{v}")
                parts.append(name if e == 1 else f"{name}^{e}")
        labels.append("".join(parts))
    return validate_weil_algebra(table, labels=labels, monomials=monos)


def dual_numbers() -> WeilAlgebra:
    return truncated_polynomial_algebra(1)


def tensor_product(a: WeilAlgebra, b: WeilAlgebra) -> WeilAlgebra:
    """A ⊗ B with basis e_i ⊗ f_j in row-major order, so index 0 is the unit."""
    dim = a.dim * b.dim
    table = []
    for i1, j1 in product(range(a.dim), range(b.dim)):
        row = []
        for i2, j2 in product(range(a.dim), range(b.dim)):
            u, w = a.table[i1][i2], b.table[j1][j2]
            row.append([u[k] * w[l] for k, l in product(range(a.dim), range(b.dim))])
        table.append(row)
    labels = [
        (x if y == "1" else (y if x == "1" else f"{x}*{y}")) for x, y in product(a.labels, b.labels)
    ]
    return validate_weil_algebra(table, labels=labels)


@dataclass(frozen=True)
class AlgebraHom:
    """Linear map A -> B; column i is the image of basis element i of A."""

    source: WeilAlgebra = field(repr=False)
    target: WeilAlgebra = field(repr=False)
    matrix: Matrix

    def __call__(self, x: Element) -> Element:
        return self.matrix.apply(x)

    def then(self, other: "AlgebraHom") -> "AlgebraHom":
        """``other ∘ self``."""
        return AlgebraHom(self.source, other.target, other.matrix @ self.matrix)

    def __eq__(self, other) -> bool:
        return isinstance(other, AlgebraHom) and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)


def validate_hom(source: WeilAlgebra, target: WeilAlgebra, matrix: Matrix) -> AlgebraHom:
    if matrix.shape != (target.dim, source.dim):
        raise ShapeMismatch(f"homomorphism matrix has shape {matrix.shape}, expected {(target.dim, source.dim)}")
    hom = AlgebraHom(source, target, matrix)
    if hom(source.one()) != target.one():
        raise NotUnital("homomorphism does not send 1 to 1")
    images = [hom(source.basis(i)) for i in range(source.dim)]
    for i in range(source.dim):
        for j in range(i, source.dim):
            if hom(source.table[i][j]) != target.mul(images[i], images[j]):
                raise NotMultiplicative(
                    f"image of e{i} e{j} differs from the product of images", witness={"pair": [i, j]}
                )
    return hom


def identity_hom(a: WeilAlgebra) -> AlgebraHom:
    return AlgebraHom(a, a, Matrix.identity(a.dim))


def augmentation_hom(a: WeilAlgebra) -> AlgebraHom:
    """A -> Q keeping the real part."""
    return validate_hom(a, real_line(), Matrix([[1] + [0] * (a.dim - 1)]))


def unit_hom(a: WeilAlgebra) -> AlgebraHom:
    """Q -> A, c -> c * 1."""
    return validate_hom(real_line(), a, Matrix([[1]] + [[0]] * (a.dim - 1), cols=1))


def substitution_hom(source: WeilAlgebra, target: WeilAlgebra, images: Sequence[Element]) -> AlgebraHom:
    """Hom out of a truncated polynomial algebra fixed by the images of its variables.

    The images must be nilpotent; the result is validated.
    """
    if source.monomials is None:
        raise ValueError("substitution needs a truncated polynomial source algebra")
    nvars = len(source.monomials[0])
    if len(images) != nvars:
        raise ShapeMismatch(f"{len(images)} images for {nvars} variables")
    images = [target.element(v) for v in images]
    columns = []
    for mono in source.monomials:
        value = target.one()
        for img, e in zip(images, mono):
            value = target.mul(value, target.power(img, e))
        columns.append(value)
    return validate_hom(source, target, Matrix.from_columns(columns, target.dim))


def compose_matrices(lo_mid: Matrix, mid_hi: Matrix) -> Matrix:
    return mid_hi @ lo_mid
