"""Finite projective systems of rational vector spaces and linear epimorphisms."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

from . import linalg
from .diagram import synthesize
from .errors import (
    DimensionMismatch,
    InvarianceFailure,
    NotEpimorphism,
    PosetMismatch,
    ShapeMismatch,
)
from .linalg import Matrix, Subspace
from .poset import Poset, iter_labeled_isomorphisms, validate_poset


class ProjectiveSystem:
    """Spaces Q^dims[x] over a poset with epimorphisms ``map(lo, hi): L_hi -> L_lo``.

    The limit is stored through its canonical projections ``projections[x]``
    (a ``dims[x] x limit_dim`` matrix); limit vectors are written in the
    coordinates those projections use. Build instances with
    :func:`validate_system`.
    """

    def __init__(self, poset: Poset, dims: Mapping[str, int], maps: Mapping, limit_dim: int, projections: Mapping):
        self.poset = poset
        self.dims = {x: dims[x] for x in poset}
        self.maps = dict(maps)
        self.limit_dim = limit_dim
        self.projections = {x: projections[x] for x in poset}

    def map(self, lo: str, hi: str) -> Matrix:
        return self.maps[(lo, hi)]

    def cover_maps(self) -> dict:
        return {pair: self.maps[pair] for pair in self.poset.covers()}

    @cached_property
    def kernels(self) -> dict[str, Subspace]:
        """K_x = ker of the canonical projection onto L_x, as subspaces of the limit."""
        return {x: linalg.kernel(self.projections[x]) for x in self.poset}

    @cached_property
    def _stabilizer(self) -> tuple:
        return tuple(_stabilizer_basis(self.limit_dim, _distinct_kernel_constraints(self)))

    @cached_property
    def _group_samples(self) -> tuple:
        return tuple(_group_samples(self.limit_dim, self._stabilizer, [k for _, k in _distinct_kernel_constraints(self)]))

    def __repr__(self) -> str:
        return f"ProjectiveSystem(dims={self.dims}, limit_dim={self.limit_dim})"


def limit(system: ProjectiveSystem) -> tuple[int, dict[str, Matrix]]:
    return system.limit_dim, dict(system.projections)


def kernel_family(system: ProjectiveSystem) -> dict[str, Subspace]:
    return dict(system.kernels)


def validate_system(
    poset: Poset,
    dims: Mapping[str, int],
    maps: Mapping[tuple[str, str], Matrix],
    projections: Mapping[str, Matrix] | None = None,
    limit_dim: int | None = None,
) -> ProjectiveSystem:
    """Check and complete a projective system.

    ``maps`` is keyed by ``(lo, hi)`` with ``lo <= hi`` and holds the matrix of
    L_hi -> L_lo; covering pairs are required, other pairs are synthesized and
    checked against any supplied value. ``projections`` optionally fixes the
    coordinates of the limit; it is verified against the computed limit.
    """
    for x in poset:
        if x not in dims:
            raise DimensionMismatch(f"no dimension given for {x!r}", witness=x)
        if not isinstance(dims[x], int) or dims[x] < 0:
            raise DimensionMismatch(f"dimension of {x!r} must be a non-negative integer", witness=x)
    for (lo, hi), m in maps.items():
        if lo in dims and hi in dims and m.shape != (dims[lo], dims[hi]):
            raise ShapeMismatch(
                f"map {hi} -> {lo} has shape {m.shape}, expected {(dims[lo], dims[hi])}",
                witness={"lower": lo, "upper": hi},
            )
    full = synthesize(poset, maps, lambda x: Matrix.identity(dims[x]), lambda a, b: a @ b)
    for lo, hi in poset.covers():
        if not linalg.is_epimorphism(full[(lo, hi)]):
            raise NotEpimorphism(f"map {hi} -> {lo} is not surjective", witness={"lower": lo, "upper": hi})

    computed_dim, computed = _compute_limit(poset, dims, full)
    if projections is None:
        limit_dim, projections = computed_dim, computed
    else:
        limit_dim = _check_projections(poset, dims, full, projections, computed_dim, limit_dim)
    for x in poset:
        if not linalg.is_epimorphism(projections[x]):
            raise NotEpimorphism(f"canonical projection onto {x} is not surjective", witness={"element": x})
    return ProjectiveSystem(poset, dims, full, limit_dim, projections)


def _blocks(poset: Poset, dims: Mapping[str, int]) -> tuple[list[str], dict[str, int], int]:
    order = poset.linear_extension()
    offsets = {}
    total = 0
    for x in order:
        offsets[x] = total
        total += dims[x]
    return order, offsets, total


def _compute_limit(poset: Poset, dims, maps) -> tuple[int, dict[str, Matrix]]:
    top = poset.greatest()
    if top is not None:
        return dims[top], {x: maps[(x, top)] for x in poset}
    # compatible tuples in the product, blocks ordered bottom-up so that the
    # free coordinates (the limit's coordinates) sit on the upper levels
    order, offsets, total = _blocks(poset, dims)
    rows = []
    for lo, hi in poset.covers():
        m = maps[(lo, hi)]
        for r in range(dims[lo]):
            row = [linalg.ZERO] * total
            for c in range(dims[hi]):
                row[offsets[hi] + c] = m[r, c]
            row[offsets[lo] + r] -= 1
            rows.append(row)
    constraints = Matrix(rows, cols=total)
    basis = linalg.kernel_vectors(constraints)
    embed = Matrix(basis, cols=total)
    projections = {
        x: embed.submatrix(cols=range(offsets[x], offsets[x] + dims[x])).T for x in poset
    }
    return len(basis), projections


def _check_projections(poset, dims, maps, projections, computed_dim, limit_dim) -> int:
    dims_seen = {m.cols for m in projections.values()}
    if limit_dim is None:
        limit_dim = dims_seen.pop() if len(dims_seen) == 1 else None
    if limit_dim is None or any(m.cols != limit_dim for m in projections.values()):
        raise ShapeMismatch("limit projections must share one source dimension")
    for x in poset:
        if x not in projections:
            raise ShapeMismatch(f"no limit projection for {x!r}", witness=x)
        if projections[x].rows != dims[x]:
            raise ShapeMismatch(f"limit projection onto {x} has {projections[x].rows} rows", witness=x)
    for lo, hi in poset.covers():
        if maps[(lo, hi)] @ projections[hi] != projections[lo]:
            raise NotEpimorphism(
                f"limit projections do not commute with {hi} -> {lo}", witness={"lower": lo, "upper": hi}
            )
    if limit_dim != computed_dim:
        raise DimensionMismatch(f"limit has dimension {computed_dim}, projections assume {limit_dim}")
    if poset.elements:
        stacked = projections[poset.elements[0]]
        for x in poset.elements[1:]:
            stacked = stacked.vstack(projections[x])
        if linalg.rank(stacked) != limit_dim:
            raise DimensionMismatch("limit projections are not jointly injective")
    elif limit_dim:
        raise DimensionMismatch("empty system has a zero-dimensional limit")
    return limit_dim


def _distinct_kernel_constraints(system: ProjectiveSystem) -> list[tuple[Matrix, Subspace]]:
    seen = {}
    for x in system.poset:
        k = system.kernels[x]
        if k not in seen and 0 < k.dim < system.limit_dim:
            seen[k] = system.projections[x]
    return [(proj, k) for k, proj in seen.items()]


def _preserving_constraints(n: int, pairs) -> Matrix:
    """Rows in the n*n entries of X (row-major) for: target_proj @ X @ k == 0."""
    rows = []
    for proj, k in pairs:
        for kv in k.basis.entries:
            nz = [(j, kj) for j, kj in enumerate(kv) if kj]
            for prow in proj.entries:
                row = [linalg.ZERO] * (n * n)
                for i, a in enumerate(prow):
                    if a:
                        for j, kj in nz:
                            row[i * n + j] += a * kj
                if any(row):
                    rows.append(row)
    return Matrix(rows, cols=n * n)


def _stabilizer_basis(n: int, pairs) -> list[Matrix]:
    vectors = linalg.kernel_vectors(_preserving_constraints(n, pairs))
    return [Matrix([v[i * n:(i + 1) * n] for i in range(n)], cols=n) for v in vectors]


def stabilizer_algebra(system: ProjectiveSystem) -> list[Matrix]:
    """Basis of {X in End(L) : X(K_x) ⊆ K_x for every x}.

    Its invertible elements are exactly the automorphisms of the limit that
    descend to every level.
    """
    return list(system._stabilizer)


def _group_samples(n: int, basis, kernels) -> list[Matrix]:
    rng = random.Random(0x5EED)
    samples = []
    for _ in range(3):
        rows = [[linalg.ONE if i == j else linalg.ZERO for j in range(n)] for i in range(n)]
        for x in basis:
            c = rng.randint(-3, 3)
            if c:
                for i, xrow in enumerate(x.entries):
                    for j, v in enumerate(xrow):
                        if v:
                            rows[i][j] += c * v
        g = Matrix(rows, cols=n)
        if linalg.is_isomorphism(g):
            samples.append(g)
    # flipping coordinate i is I - 2 E_ii, which preserves K exactly when
    # e_i is in K or every vector of K has a zero i-th coordinate
    for i in range(n):
        e_i = [linalg.ZERO] * n
        e_i[i] = linalg.ONE
        if all(k.contains_vector(e_i) or not any(v[i] for v in k.basis.entries) for k in kernels):
            samples.append(Matrix([[(-1 if r == c == i else (1 if r == c else 0)) for c in range(n)] for r in range(n)], cols=n))
    return samples


def is_invariant(system: ProjectiveSystem, k: Subspace) -> bool:
    """Whether every automorphism of the system maps ``k`` into itself."""
    if k.ambient_dim != system.limit_dim:
        raise DimensionMismatch(f"subspace of Q^{k.ambient_dim} in a limit of dimension {system.limit_dim}")
    for x in system._stabilizer:
        if not linalg.maps_into(x, k, k):
            return False
    for g in system._group_samples:
        if not linalg.maps_into(g, k, k):
            return False
    return True


def element_name(chain: tuple[str, ...]) -> str:
    return chain[0] if len(chain) == 1 else "{" + ",".join(chain) + "}"


@dataclass
class Completion:
    """Completed system plus bookkeeping.

    ``index_map`` sends each original element to the completion element with
    the same kernel (``None`` when that kernel is the whole limit);
    ``antichain`` records which antichain produced each new element.
    """

    system: ProjectiveSystem
    index_map: dict[str, str | None]
    antichain: dict[str, tuple[str, ...]] = field(default_factory=dict)
    kernels: dict[str, Subspace] = field(default_factory=dict)


def kernel_closure(system: ProjectiveSystem) -> dict[Subspace, tuple[str, ...]]:
    """Distinct proper intersections of kernels, each with its canonical antichain.

    Intersecting over any set of elements is the same as intersecting over its
    maximal elements, so closing the kernel family under pairwise intersection
    yields exactly the intersections over antichains. The antichain recorded
    for K is the set of maximal x with K_x ⊇ K.
    """
    n = system.limit_dim
    base = []
    for x in system.poset:
        k = system.kernels[x]
        if k.dim < n and k not in base:
            base.append(k)
    found = set(base)
    frontier = list(base)
    while frontier:
        fresh = []
        for s in frontier:
            for k in base:
                t = linalg.intersect(s, k)
                if t not in found:
                    found.add(t)
                    fresh.append(t)
        frontier = fresh
    out = {}
    for k in found:
        above = [x for x in system.poset if system.kernels[x] >= k]
        out[k] = tuple(x for x in above if not any(system.poset.lt(x, y) for y in above))
    return out


def completion(system: ProjectiveSystem) -> Completion:
    """Index the proper kernel intersections over all antichains.

    The new poset is ordered by reverse inclusion of kernels and the new
    spaces are quotients of the original limit, which therefore stays the
    limit of the completed system.
    """
    cached = system.__dict__.get("_completion")
    if cached is not None:
        return cached
    n = system.limit_dim
    by_space = kernel_closure(system)
    names: dict[str, Subspace] = {}
    antichain_of: dict[str, tuple[str, ...]] = {}
    for k, chain in sorted(by_space.items(), key=lambda item: (len(item[1]), tuple(reversed(item[1])))):
        name = element_name(chain)
        while name in names:
            name = name + "'"
        names[name] = k
        antichain_of[name] = chain

    for name, k in names.items():
        if not is_invariant(system, k):
            raise InvarianceFailure(
                f"kernel intersection {name} is not invariant", witness={"element": name, "subspace": k.to_json()}
            )

    elems = sorted(names)
    pairs = [(a, b) for a in elems for b in elems if a != b and names[a] >= names[b]]
    poset = validate_poset(elems, pairs)
    quotients = {a: linalg.quotient_map(n, names[a]) for a in elems}
    sections = {a: linalg.quotient_section(n, names[a]) for a in elems}
    dims = {a: quotients[a].rows for a in elems}
    maps = {(a, b): quotients[a] @ sections[b] for a, b in poset.pairs()}
    completed = validate_system(poset, dims, maps, projections=quotients, limit_dim=n)

    index_map: dict[str, str | None] = {}
    lookup = {k: name for name, k in names.items()}
    for x in system.poset:
        index_map[x] = lookup.get(system.kernels[x])
    result = Completion(completed, index_map, antichain_of, names)
    system._completion = result
    return result


def is_complete(system: ProjectiveSystem) -> bool:
    """Whether the completion adds nothing: x -> K_x is an order isomorphism onto it."""
    c = completion(system)
    image = list(c.index_map.values())
    if None in image or len(set(image)) != len(image) or len(image) != len(c.system.poset):
        return False
    target = c.system.poset
    return all(
        system.poset.leq(x, y) == target.leq(c.index_map[x], c.index_map[y])
        for x in system.poset
        for y in system.poset
    )


@dataclass
class SystemIsomorphism:
    omega: dict[str, str]
    psi: dict[str, Matrix]
    limit_map: Matrix


def _find_invertible(basis: list[Matrix], n: int, tries: int = 24) -> Matrix | None:
    # Schwartz-Zippel: a random point of the span avoids det = 0 with high
    # probability whenever some element of the span is invertible.
    if not basis:
        return Matrix.identity(0) if n == 0 else None
    total = basis[0]
    for b in basis[1:]:
        total = total + b
    if linalg.is_isomorphism(total):
        return total
    rng = random.Random(0xC0FFEE)
    for _ in range(tries):
        g = Matrix.zeros(n, n)
        for b in basis:
            g = g + b.scale(rng.randint(-1000, 1000))
        if linalg.is_isomorphism(g):
            return g
    return None


def system_isomorphic(xi: ProjectiveSystem, other: ProjectiveSystem) -> SystemIsomorphism | None:
    """Search for an isomorphism of projective systems.

    For each dimension-preserving poset isomorphism w, the level maps are
    induced by an invertible limit map psi with psi(K_x) ⊆ K'_w(x); such psi
    form a linear space, searched for an invertible member.
    """
    n = xi.limit_dim
    if n != other.limit_dim:
        return None
    sections = {x: linalg.right_inverse(xi.projections[x]) for x in xi.poset}
    for omega in iter_labeled_isomorphisms(xi.poset, other.poset, xi.dims, other.dims):
        pairs = []
        seen = set()
        for x in xi.poset:
            k = xi.kernels[x]
            key = (k, omega[x])
            if key in seen or k.dim == 0:
                continue
            seen.add(key)
            pairs.append((other.projections[omega[x]], k))
        basis = [
            Matrix([v[i * n:(i + 1) * n] for i in range(n)], cols=n)
            for v in linalg.kernel_vectors(_preserving_constraints(n, pairs))
        ]
        psi = _find_invertible(basis, n)
        if psi is None:
            continue
        levels = {x: other.projections[omega[x]] @ psi @ sections[x] for x in xi.poset}
        ok = all(linalg.is_isomorphism(levels[x]) for x in xi.poset) and all(
            other.map(omega[lo], omega[hi]) @ levels[hi] == levels[lo] @ xi.map(lo, hi)
            for lo, hi in xi.poset.pairs()
        )
        if ok:
            return SystemIsomorphism(dict(omega), levels, psi)
    return None


def product_system(xi: ProjectiveSystem, other: ProjectiveSystem) -> ProjectiveSystem:
    """Levelwise product with block-diagonal maps; the limit is L x L'."""
    if xi.poset != other.poset:
        raise PosetMismatch("product of systems over different posets")
    dims = {x: xi.dims[x] + other.dims[x] for x in xi.poset}
    maps = {pair: Matrix.block_diag(xi.maps[pair], other.maps[pair]) for pair in xi.poset.pairs()}
    projections = {x: Matrix.block_diag(xi.projections[x], other.projections[x]) for x in xi.poset}
    return validate_system(xi.poset, dims, maps, projections=projections, limit_dim=xi.limit_dim + other.limit_dim)


def limit_comparison(xi: ProjectiveSystem, comp: Completion) -> Matrix:
    """Map from the completion's limit to the original limit built from the index embedding.

    A completion vector is sent to the compatible tuple of its components at
    the embedded elements and read back in the original limit coordinates.
    """
    n = xi.limit_dim
    stacked_rows = []
    stacked_target = []
    for x in xi.poset:
        a = comp.index_map[x]
        # component at x of the tuple: identify L_x with the completion level a
        level_iso = xi.projections[x] @ linalg.quotient_section(n, comp.kernels[a]) if a else Matrix.zeros(xi.dims[x], 0)
        part = level_iso @ comp.system.projections[a] if a else Matrix.zeros(xi.dims[x], comp.system.limit_dim)
        stacked_rows.extend(part.entries)
        stacked_target.extend(xi.projections[x].entries)
    tuple_map = Matrix(stacked_rows, cols=comp.system.limit_dim)
    embed = Matrix(stacked_target, cols=n)
    return linalg.left_inverse(embed) @ tuple_map
