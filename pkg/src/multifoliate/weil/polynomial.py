"""Polynomial maps Q^m -> Q^k with rational coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from ..errors import ArityMismatch, SchemaError
from ..linalg import Matrix, as_rational, format_rational

Exponents = tuple  # tuple[int, ...]


@dataclass(frozen=True)
class Polynomial:
    """Sparse polynomial: sorted ``(exponents, coefficient)`` terms, no zero coefficients."""

    nvars: int
    terms: tuple

    @classmethod
    def from_dict(cls, nvars: int, terms: Mapping[Exponents, object]) -> "Polynomial":
        clean = {}
        for exps, c in terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise ArityMismatch(f"exponent vector {exps} for {nvars} variables")
            c = as_rational(c)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
        return cls(nvars, tuple(sorted((e, c) for e, c in clean.items() if c)))

    @classmethod
    def constant(cls, nvars: int, c) -> "Polynomial":
        return cls.from_dict(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Polynomial":
        return cls.from_dict(nvars, {tuple(int(k == i) for k in range(nvars)): 1})

    def as_dict(self) -> dict:
        return dict(self.terms)

    @property
    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        d = self.as_dict()
        for e, c in other.terms:
            d[e] = d.get(e, Fraction(0)) + c
        return Polynomial.from_dict(self.nvars, d)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        d: dict = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                d[e] = d.get(e, Fraction(0)) + c1 * c2
        return Polynomial.from_dict(self.nvars, d)

    def scale(self, c) -> "Polynomial":
        c = as_rational(c)
        return Polynomial.from_dict(self.nvars, {e: c * v for e, v in self.terms})

    def evaluate(self, point: Sequence, one, add: Callable, mul: Callable, scale: Callable):
        """Evaluate in any commutative ring given by its operations."""
        if len(point) != self.nvars:
            raise ArityMismatch(f"{len(point)} arguments for a polynomial in {self.nvars} variables")
        powers: dict = {}

        def power(v: int, e: int):
            key = (v, e)
            if key not in powers:
                powers[key] = one if e == 0 else mul(power(v, e - 1), point[v])
            return powers[key]

        total = scale(0, one)
        for exps, c in self.terms:
            term = one
            for v, e in enumerate(exps):
                if e:
                    term = mul(term, power(v, e))
            total = add(total, scale(c, term))
        return total

    def __call__(self, *point):
        return self.evaluate(
            [as_rational(x) for x in point], Fraction(1), lambda a, b: a + b, lambda a, b: a * b, lambda c, a: c * a
        )

    def compose(self, inner: Sequence["Polynomial"], nvars: int | None = None) -> "Polynomial":
        """Substitute polynomials (in ``nvars`` variables) for the variables."""
        if len(inner) != self.nvars:
            raise ArityMismatch(f"{len(inner)} substitutions for {self.nvars} variables")
        m = nvars if nvars is not None else (inner[0].nvars if inner else 0)
        one = Polynomial.constant(m, 1)
        return self.evaluate(list(inner), one, lambda a, b: a + b, lambda a, b: a * b, lambda c, a: a.scale(c))

    def to_json(self) -> list:
        return [{"coeff": format_rational(c), "exponents": list(e)} for e, c in self.terms]


@dataclass(frozen=True)
class PolyMap:
    """Polynomial map Q^arity -> Q^len(components)."""

    arity: int
    components: tuple

    @property
    def out_dim(self) -> int:
        return len(self.components)

    @classmethod
    def identity(cls, m: int) -> "PolyMap":
        return cls(m, tuple(Polynomial.variable(m, i) for i in range(m)))

    @classmethod
    def from_linear(cls, matrix: Matrix) -> "PolyMap":
        return cls(
            matrix.cols,
            tuple(
                Polynomial.from_dict(matrix.cols, {tuple(int(k == j) for k in range(matrix.cols)): a for j, a in enumerate(row)})
                for row in matrix.entries
            ),
        )

    @classmethod
    def from_components(cls, arity: int, components: Sequence[Polynomial]) -> "PolyMap":
        for p in components:
            if p.nvars != arity:
                raise ArityMismatch(f"component in {p.nvars} variables for a map of arity {arity}")
        return cls(arity, tuple(components))

    def compose(self, inner: "PolyMap") -> "PolyMap":
        """``self ∘ inner``."""
        if inner.out_dim != self.arity:
            raise ArityMismatch(f"cannot compose arity {self.arity} after a map into Q^{inner.out_dim}")
        return PolyMap(inner.arity, tuple(p.compose(list(inner.components), inner.arity) for p in self.components))

    def __call__(self, *point):
        return tuple(p(*point) for p in self.components)

    def to_json(self) -> dict:
        return {"arity": self.arity, "components": [p.to_json() for p in self.components]}

    @classmethod
    def from_json(cls, data) -> "PolyMap":
        try:
            arity = int(data["arity"])
            comps = [
                Polynomial.from_dict(arity, _merge_terms(arity, comp))
                for comp in data["components"]
            ]
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad polynomial map: {exc}") from exc
        return cls(arity, tuple(comps))


def _merge_terms(arity: int, comp) -> dict:
    d: dict = {}
    for term in comp:
        e = tuple(int(x) for x in term["exponents"])
        if len(e) != arity:
            raise ArityMismatch(f"exponent vector {list(e)} for arity {arity}")
        d[e] = d.get(e, Fraction(0)) + as_rational(term["coeff"])
    return d
