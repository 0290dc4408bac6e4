"""Inductive systems of Weil algebras acting on Cartesian multifibered objects.

A Cartesian multifibered object is a projective system of spaces Q^{n_x}
with linear surjections; its total space is the limit. For an inductive
system mu = (A_x, mu^x_y) the fiber product collects tuples (v_x), v_x in
A_x^{n_x}, with pi^y_x applied to v_y equal to mu^x_y applied to v_x. All
conditions are linear, so the fiber product is a subspace.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

from .. import linalg
from ..diagram import synthesize
from ..errors import (
    ArityMismatch,
    CoherenceError,
    CompatibilityViolation,
    PosetMismatch,
    ShapeMismatch,
)
from ..linalg import Matrix
from ..poset import Poset
from ..projsys import ProjectiveSystem, product_system, validate_system
from ..structures import MultifoliateStructure, system_of
from .algebra import AlgebraHom, Element, WeilAlgebra, identity_hom, validate_hom
from .polynomial import PolyMap

Point = dict  # element -> tuple of algebra elements


# inductive systems ---------------------------------------------------------


@dataclass
class WeilSystem:
    """Algebras A_x with homomorphisms ``homs[(lo, hi)]: A_lo -> A_hi``."""

    poset: Poset
    algebras: dict[str, WeilAlgebra]
    homs: dict[tuple[str, str], AlgebraHom]

    def hom(self, lo: str, hi: str) -> AlgebraHom:
        return self.homs[(lo, hi)]


def validate_weil_system(
    poset: Poset, algebras: Mapping[str, WeilAlgebra], homs: Mapping[tuple[str, str], object]
) -> WeilSystem:
    """``homs`` maps ``(lo, hi)`` to an AlgebraHom or a matrix; covers are required."""
    for x in poset:
        if x not in algebras:
            raise ShapeMismatch(f"no algebra given for {x!r}", witness=x)
    mats = {}
    for (lo, hi), h in homs.items():
        m = h.matrix if isinstance(h, AlgebraHom) else h
        if lo in algebras and hi in algebras:
            validate_hom(algebras[lo], algebras[hi], m)
        mats[(lo, hi)] = m
    full = synthesize(
        poset, mats, lambda x: Matrix.identity(algebras[x].dim), lambda lo_mid, mid_hi: mid_hi @ lo_mid
    )
    out = {(lo, hi): AlgebraHom(algebras[lo], algebras[hi], m) for (lo, hi), m in full.items()}
    return WeilSystem(poset, dict(algebras), out)


def constant_weil_system(poset: Poset, algebra: WeilAlgebra) -> WeilSystem:
    return validate_weil_system(poset, {x: algebra for x in poset}, {c: identity_hom(algebra) for c in poset.covers()})


@dataclass
class MorphismCheck:
    ok: bool
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate_system_morphism(mu: WeilSystem, mubar: WeilSystem, nu: Mapping[str, object]) -> MorphismCheck:
    """Whether nu_x: A_x -> Abar_x are homomorphisms making every square commute."""
    if mu.poset != mubar.poset:
        raise PosetMismatch("morphism between inductive systems over different posets")
    homs = {}
    for x in mu.poset:
        m = nu[x].matrix if isinstance(nu[x], AlgebraHom) else nu[x]
        try:
            homs[x] = validate_hom(mu.algebras[x], mubar.algebras[x], m)
        except Exception as exc:  # reported, not raised
            return MorphismCheck(False, {"element": x, "reason": getattr(exc, "code", type(exc).__name__)})
    for lo, hi in mu.poset.strict_pairs():
        left = mubar.hom(lo, hi).matrix @ homs[lo].matrix
        right = homs[hi].matrix @ mu.hom(lo, hi).matrix
        if left != right:
            return MorphismCheck(False, {"lower": lo, "upper": hi, "reason": "square does not commute"})
    return MorphismCheck(True)


# Cartesian multifibered objects ---------------------------------------------


@dataclass
class CartesianMultifibered:
    """A projective system of Cartesian spaces Q^{n_x} and linear surjections.

    ``origin`` records how the object was built: ``("structure", S)``,
    ``("i_alpha", x, m)``, ``("product", left, right)`` or ``None``.
    """

    system: ProjectiveSystem
    origin: tuple | None = None

    @property
    def poset(self) -> Poset:
        return self.system.poset

    @property
    def dims(self) -> dict[str, int]:
        return self.system.dims

    @property
    def total_dim(self) -> int:
        return self.system.limit_dim

    def map(self, lo: str, hi: str) -> Matrix:
        return self.system.map(lo, hi)

    def is_i_alpha(self) -> bool:
        return bool(self.origin) and self.origin[0] == "i_alpha"


def cartesian_object(s: MultifoliateStructure) -> CartesianMultifibered:
    """M_x = Q^{H_x} with coordinate projections; the total space is Q^n."""
    return CartesianMultifibered(system_of(s), ("structure", s))


def i_alpha(poset: Poset, alpha: str, m: int) -> CartesianMultifibered:
    """X = Q^m placed at every level >= alpha, a point elsewhere."""
    poset.check(alpha)
    above = poset.up_set(alpha)
    dims = {x: (m if x in above else 0) for x in poset}
    maps = {}
    for lo, hi in poset.covers():
        if lo in above:
            maps[(lo, hi)] = Matrix.identity(m)
        else:
            maps[(lo, hi)] = Matrix.zeros(0, dims[hi])
    projections = {x: (Matrix.identity(m) if x in above else Matrix.zeros(0, m)) for x in poset}
    system = validate_system(poset, dims, maps, projections=projections, limit_dim=m)
    return CartesianMultifibered(system, ("i_alpha", alpha, m))


def product_object(left: CartesianMultifibered, right: CartesianMultifibered) -> CartesianMultifibered:
    return CartesianMultifibered(product_system(left.system, right.system), ("product", left, right))


# polynomial multifibered maps ---------------------------------------------


@dataclass
class PolyMultifiberedMap:
    source: CartesianMultifibered
    target: CartesianMultifibered
    components: dict[str, PolyMap]


def validate_multifibered_map(
    source: CartesianMultifibered, target: CartesianMultifibered, components: Mapping[str, PolyMap]
) -> PolyMultifiberedMap:
    """Check arities and that target projections commute with the components."""
    if source.poset != target.poset:
        raise PosetMismatch("multifibered map between objects over different posets")
    for x in source.poset:
        f = components[x]
        if f.arity != source.dims[x] or f.out_dim != target.dims[x]:
            raise ArityMismatch(
                f"component at {x} maps Q^{f.arity} -> Q^{f.out_dim}, expected "
                f"Q^{source.dims[x]} -> Q^{target.dims[x]}",
                witness={"element": x},
            )
    for lo, hi in source.poset.covers():
        left = PolyMap.from_linear(target.map(lo, hi)).compose(components[hi])
        right = components[lo].compose(PolyMap.from_linear(source.map(lo, hi)))
        if left != right:
            raise CoherenceError(f"square at {lo} <= {hi} does not commute", witness={"lower": lo, "upper": hi})
    return PolyMultifiberedMap(source, target, dict(components))


def lift_plain_map(poset: Poset, f: PolyMap, alpha: str, beta: str) -> PolyMultifiberedMap:
    """A map X -> Y viewed as i_alpha(X) -> i_beta(Y), alpha <= beta."""
    if not poset.leq(alpha, beta):
        raise PosetMismatch(f"lifting needs {alpha} <= {beta}")
    source = i_alpha(poset, alpha, f.arity)
    target = i_alpha(poset, beta, f.out_dim)
    comps = {}
    for x in poset:
        if target.dims[x]:
            comps[x] = f
        else:
            comps[x] = PolyMap(source.dims[x], ())
    return validate_multifibered_map(source, target, comps)


# Weil functor evaluation ------------------------------------------------------


def weil_apply(algebra: WeilAlgebra, f: PolyMap, point: Sequence[Element]) -> tuple:
    """Apply the Weil functor of ``algebra`` to ``f`` at an A-point of Q^m."""
    if len(point) != f.arity:
        raise ArityMismatch(f"{len(point)} algebra coordinates for a map of arity {f.arity}")
    pts = [algebra.element(v) for v in point]
    one = algebra.one()
    return tuple(
        p.evaluate(pts, one, algebra.add, algebra.mul, algebra.scale) for p in f.components
    )


# fiber products ---------------------------------------------------------------


@dataclass
class FiberProduct:
    """Compatible tuples for (mu, pi), with ``basis`` rows in the flat layout.

    Flat layout: for each element x (poset order) the n_x coordinates, each an
    A_x element of ``algebras[x].dim`` rationals.
    """

    mu: WeilSystem
    pi: CartesianMultifibered
    offsets: dict[str, int]
    total: int
    basis: Matrix
    free_cols: list[int]
    base_projection: Matrix = field(repr=False)

    @property
    def dim(self) -> int:
        return self.basis.rows

    def flatten(self, point: Mapping[str, Sequence[Element]]) -> tuple:
        out = [Fraction(0)] * self.total
        for x in self.pi.poset:
            a = self.mu.algebras[x]
            comps = point[x]
            if len(comps) != self.pi.dims[x]:
                raise ShapeMismatch(f"{len(comps)} coordinates at {x}, expected {self.pi.dims[x]}")
            for r, v in enumerate(comps):
                v = a.element(v)
                start = self.offsets[x] + r * a.dim
                out[start:start + a.dim] = v
        return tuple(out)

    def unflatten(self, vector: Sequence) -> Point:
        out = {}
        for x in self.pi.poset:
            a = self.mu.algebras[x]
            start = self.offsets[x]
            out[x] = tuple(
                tuple(vector[start + r * a.dim:start + (r + 1) * a.dim]) for r in range(self.pi.dims[x])
            )
        return out

    @cached_property
    def _space(self) -> linalg.Subspace:
        return linalg.Subspace(self.total, linalg.rref(self.basis))

    def contains(self, point: Mapping[str, Sequence[Element]]) -> bool:
        return self._space.contains_vector(self.flatten(point))

    def coordinates(self, point: Mapping[str, Sequence[Element]]) -> tuple:
        v = self.flatten(point)
        if not self._space.contains_vector(v):
            raise CompatibilityViolation("point is not in the fiber product")
        return tuple(v[c] for c in self.free_cols)

    def point(self, coords: Sequence) -> Point:
        coords = [linalg.as_rational(c) for c in coords]
        vec = [Fraction(0)] * self.total
        for c, row in zip(coords, self.basis.entries):
            if c:
                for j, b in enumerate(row):
                    if b:
                        vec[j] += c * b
        return self.unflatten(vec)

    def basis_points(self) -> list[Point]:
        return [self.unflatten(row) for row in self.basis.entries]

    def base_point(self, point: Mapping[str, Sequence[Element]]) -> tuple:
        """p_mu: the real parts, read as a point of the total space M."""
        return self.base_projection.apply(self.coordinates(point))

    def conditions_hold(self, point: Mapping[str, Sequence[Element]]) -> bool:
        """Check every comparable pair directly, without the stored basis."""
        return not _violations(self.mu, self.pi, point, self.pi.poset.strict_pairs())


def _violations(mu: WeilSystem, pi: CartesianMultifibered, point, pairs) -> list:
    bad = []
    for lo, hi in pairs:
        a_hi = mu.algebras[hi]
        proj = pi.map(lo, hi)
        hom = mu.hom(lo, hi)
        for r in range(pi.dims[lo]):
            pushed = a_hi.zero()
            for c, coef in enumerate(proj.row(r)):
                if coef:
                    pushed = a_hi.add(pushed, a_hi.scale(coef, point[hi][c]))
            if pushed != hom(point[lo][r]):
                bad.append({"lower": lo, "upper": hi, "row": r})
    return bad


def fiber_product(mu: WeilSystem, pi: CartesianMultifibered) -> FiberProduct:
    if mu.poset != pi.poset:
        raise PosetMismatch("inductive system and multifibered object over different posets")
    poset = pi.poset
    offsets = {}
    total = 0
    for x in poset.linear_extension():
        offsets[x] = total
        total += pi.dims[x] * mu.algebras[x].dim
    rows = []
    for lo, hi in poset.covers():
        a_lo, a_hi = mu.algebras[lo], mu.algebras[hi]
        proj = pi.map(lo, hi)
        hom = mu.hom(lo, hi).matrix
        for r in range(pi.dims[lo]):
            for k in range(a_hi.dim):
                row = [Fraction(0)] * total
                # component k of sum_c proj[r, c] * v_hi[c]
                for c in range(pi.dims[hi]):
                    if proj[r, c]:
                        row[offsets[hi] + c * a_hi.dim + k] += proj[r, c]
                # minus component k of mu(v_lo[r])
                for j in range(a_lo.dim):
                    if hom[k, j]:
                        row[offsets[lo] + r * a_lo.dim + j] -= hom[k, j]
                rows.append(row)
    basis, free_cols = linalg.nullspace(Matrix(rows, cols=total))
    basis_m = Matrix(basis, cols=total)

    # base projection in fiber-product coordinates
    embed_rows = []
    for x in poset.linear_extension():
        embed_rows.extend(pi.system.projections[x].entries)
    embed = Matrix(embed_rows, cols=pi.total_dim)
    back = linalg.left_inverse(embed) if pi.total_dim else Matrix.zeros(0, embed.rows)
    real_rows = []
    for x in poset.linear_extension():
        dim_a = mu.algebras[x].dim
        for r in range(pi.dims[x]):
            real_rows.append(basis_m.column(offsets[x] + r * dim_a))
    real = Matrix(real_rows, cols=basis_m.rows) if real_rows else Matrix.zeros(0, basis_m.rows)
    base_projection = back @ real
    return FiberProduct(mu, pi, offsets, total, basis_m, free_cols, base_projection)


def base_is_surjective(fp: FiberProduct) -> bool:
    return linalg.is_epimorphism(fp.base_projection)


def apply_fiber_product(mu: WeilSystem, f: PolyMultifiberedMap, point: Point) -> Point:
    """Componentwise Weil functor applied to a point of the source fiber product."""
    bad = _violations(mu, f.source, point, f.source.poset.covers())
    if bad:
        raise CompatibilityViolation("input is not in the source fiber product", witness=bad[0])
    out = {x: weil_apply(mu.algebras[x], f.components[x], point[x]) for x in f.source.poset}
    bad = _violations(mu, f.target, out, f.target.poset.covers())
    if bad:
        raise CompatibilityViolation("output left the target fiber product", witness=bad[0])
    return out


# T^mu and the identifications O_alpha ----------------------------------------


def o_alpha(pi: CartesianMultifibered, point: Point) -> tuple:
    """Restriction of the projection onto the alpha component, for pi = i_alpha(X)."""
    if not pi.is_i_alpha():
        raise ValueError("O_alpha is defined on objects of the form i_alpha(X)")
    return tuple(point[pi.origin[1]])


def o_alpha_inverse(mu: WeilSystem, pi: CartesianMultifibered, x: Sequence[Element]) -> Point:
    """The unique compatible tuple with alpha component ``x``."""
    if not pi.is_i_alpha():
        raise ValueError("O_alpha is defined on objects of the form i_alpha(X)")
    alpha, m = pi.origin[1], pi.origin[2]
    if len(x) != m:
        raise ArityMismatch(f"{len(x)} coordinates for X = Q^{m}")
    a = mu.algebras[alpha]
    x = tuple(a.element(v) for v in x)
    out = {}
    for g in pi.poset:
        if pi.poset.leq(alpha, g):
            hom = mu.hom(alpha, g)
            out[g] = tuple(hom(v) for v in x)
        else:
            out[g] = ()
    return out


def identify(mu: WeilSystem, pi: CartesianMultifibered, value) -> Point:
    """I_pi: T^mu(pi) -> fiber product."""
    return o_alpha_inverse(mu, pi, value) if pi.is_i_alpha() else value


def identify_inverse(mu: WeilSystem, pi: CartesianMultifibered, point: Point):
    return o_alpha(pi, point) if pi.is_i_alpha() else point


def t_mu_apply(mu: WeilSystem, f: PolyMultifiberedMap, value):
    """T^mu(f) = I_target^-1 ∘ (componentwise Weil functor) ∘ I_source.

    For i_alpha objects ``value`` is an A_alpha-point of X; otherwise it is
    a fiber product point.
    """
    return identify_inverse(mu, f.target, apply_fiber_product(mu, f, identify(mu, f.source, value)))


# product preservation -----------------------------------------------------------


@dataclass
class ProductReport:
    ok: bool
    dims: dict
    witnesses: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "dims": self.dims, "witnesses": self.witnesses}


def _split(point: Point, left: CartesianMultifibered) -> tuple[Point, Point]:
    first = {x: tuple(point[x][: left.dims[x]]) for x in point}
    second = {x: tuple(point[x][left.dims[x]:]) for x in point}
    return first, second


def product_preservation_check(
    mu: WeilSystem, left: CartesianMultifibered, right: CartesianMultifibered
) -> ProductReport:
    """Compare the fiber product over left x right with the two separate ones.

    The coordinate shuffle splitting each level's coordinates must be a linear
    isomorphism onto the product of the fiber products that commutes with
    the base projections.
    """
    prod = product_object(left, right)
    fp = fiber_product(mu, prod)
    fp1 = fiber_product(mu, left)
    fp2 = fiber_product(mu, right)
    dims = {"product": fp.dim, "left": fp1.dim, "right": fp2.dim}
    witnesses = []
    if fp.dim != fp1.dim + fp2.dim:
        witnesses.append({"reason": "dimensions do not add", **dims})
    columns = []
    for k, pt in enumerate(fp.basis_points()):
        p1, p2 = _split(pt, left)
        if not (fp1.contains(p1) and fp2.contains(p2)):
            witnesses.append({"reason": "shuffled basis vector is not compatible", "basis_index": k})
            continue
        columns.append(fp1.coordinates(p1) + fp2.coordinates(p2))
    if witnesses:
        return ProductReport(False, dims, witnesses)
    shuffle = Matrix.from_columns(columns, fp1.dim + fp2.dim) if columns else Matrix.zeros(fp1.dim + fp2.dim, 0)
    if not linalg.is_isomorphism(shuffle):
        witnesses.append({"reason": "shuffle map is not invertible"})
    elif fp.base_projection != Matrix.block_diag(fp1.base_projection, fp2.base_projection) @ shuffle:
        witnesses.append({"reason": "shuffle does not commute with the base projections"})
    if not base_is_surjective(fp):
        witnesses.append({"reason": "base projection of the product is not surjective"})
    return ProductReport(not witnesses, dims, witnesses)
