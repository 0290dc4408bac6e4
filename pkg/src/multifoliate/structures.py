"""Multifoliate structures (poset, surjective labeling of coordinates)."""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

from . import linalg
from .errors import BadIndex, NotSurjective, PosetMismatch, ShapeMismatch, SizeMismatch
from .linalg import Matrix
from .poset import Poset, iter_labeled_isomorphisms
from .projsys import ProjectiveSystem, validate_system


@dataclass(frozen=True)
class MultifoliateStructure:
    """Coordinates 1..n labeled by poset elements; ``labels[i - 1]`` is p(i)."""

    poset: Poset
    labels: tuple[str, ...]

    @property
    def n(self) -> int:
        return len(self.labels)

    def p(self, i: int) -> str:
        """Label of coordinate ``i`` (1-based)."""
        return self.labels[i - 1]

    def fiber(self, x: str) -> list[int]:
        """1-based coordinates labeled ``x``, ascending."""
        return [i + 1 for i, y in enumerate(self.labels) if y == x]

    def fiber_sizes(self) -> dict[str, int]:
        return {x: self.labels.count(x) for x in self.poset}

    def h_set(self, x: str) -> list[int]:
        """1-based coordinates whose label is <= ``x``."""
        return [i + 1 for i, y in enumerate(self.labels) if self.poset.leq(y, x)]

    @cached_property
    def pattern(self) -> "GLPattern":
        return gl_pattern(self)

    def permuted(self, sigma: Mapping[int, int] | Sequence[int]) -> "MultifoliateStructure":
        """The structure p∘sigma, i.e. coordinate i gets label p(sigma(i))."""
        if not isinstance(sigma, Mapping):
            sigma = {i + 1: s for i, s in enumerate(sigma)}
        return MultifoliateStructure(self.poset, tuple(self.p(sigma[i]) for i in range(1, self.n + 1)))

    def to_json(self) -> dict:
        return {
            "poset": self.poset.to_json(),
            "n": self.n,
            "p": {str(i + 1): x for i, x in enumerate(self.labels)},
        }


def validate_structure(poset: Poset, n: int, p) -> MultifoliateStructure:
    """``p`` is a sequence of n labels or a mapping {1..n -> label}."""
    if not isinstance(n, int) or n < 1:
        raise BadIndex(f"n must be a positive integer, got {n!r}", witness=n)
    if isinstance(p, Mapping):
        keys = {int(k) for k in p}
        if keys != set(range(1, n + 1)):
            bad = sorted(keys ^ set(range(1, n + 1)))
            raise BadIndex(f"labeling must cover exactly 1..{n}", witness=bad)
        labels = tuple(p[k] if k in p else p[str(k)] for k in range(1, n + 1))
    else:
        labels = tuple(p)
        if len(labels) != n:
            raise BadIndex(f"expected {n} labels, got {len(labels)}", witness=len(labels))
    for i, x in enumerate(labels):
        if x not in poset:
            raise BadIndex(f"label {x!r} of coordinate {i + 1} is not a poset element", witness=i + 1)
    missing = sorted(set(poset.elements) - set(labels))
    if missing:
        raise NotSurjective(f"no coordinate is labeled {missing}", witness=missing)
    return MultifoliateStructure(poset, labels)


@dataclass(frozen=True)
class GLPattern:
    """allowed[i][j] (0-based) is True iff p(i) >= p(j)."""

    allowed: tuple[tuple[bool, ...], ...]

    @property
    def n(self) -> int:
        return len(self.allowed)

    def count(self) -> int:
        return sum(sum(r) for r in self.allowed)

    def tolist(self) -> list[list[int]]:
        return [[int(a) for a in r] for r in self.allowed]


def gl_pattern(s: MultifoliateStructure) -> GLPattern:
    p = s.labels
    return GLPattern(tuple(tuple(s.poset.leq(p[j], p[i]) for j in range(s.n)) for i in range(s.n)))


def respects_pattern(pattern: GLPattern, m: Matrix) -> bool:
    return all(a or not m[i, j] for i, r in enumerate(pattern.allowed) for j, a in enumerate(r))


def pattern_member(pattern: GLPattern, m: Matrix) -> bool:
    """Invertible and zero wherever the pattern forbids an entry."""
    if m.shape != (pattern.n, pattern.n):
        return False
    return respects_pattern(pattern, m) and linalg.is_isomorphism(m)


def random_pattern_member(pattern: GLPattern, rng: random.Random, spread: int = 5) -> Matrix:
    """A pseudo-random invertible matrix supported on the pattern."""
    n = pattern.n
    while True:
        m = Matrix(
            [[rng.randint(-spread, spread) if a else 0 for a in row] for row in pattern.allowed],
            cols=n,
        )
        if linalg.is_isomorphism(m):
            return m


def jacobian_check(source: MultifoliateStructure, target: MultifoliateStructure, jac: Matrix) -> bool:
    """Whether d f^a / d x^i vanishes whenever p'(a) is not >= p(i)."""
    if source.poset != target.poset:
        raise PosetMismatch("Jacobian between structures over different posets")
    if jac.shape != (target.n, source.n):
        raise ShapeMismatch(f"Jacobian has shape {jac.shape}, expected {(target.n, source.n)}")
    leq = source.poset.leq
    return all(
        not jac[a, i] or leq(source.labels[i], target.labels[a])
        for a in range(target.n)
        for i in range(source.n)
    )


def system_of(s: MultifoliateStructure) -> ProjectiveSystem:
    """L_x = Q^{H_x} with coordinates in ascending order; the limit is Q^n."""
    h = {x: [i - 1 for i in s.h_set(x)] for x in s.poset}
    dims = {x: len(h[x]) for x in s.poset}
    maps = {}
    for lo, hi in s.poset.covers():
        pos = {c: k for k, c in enumerate(h[hi])}
        maps[(lo, hi)] = Matrix.coordinate_projection([pos[c] for c in h[lo]], dims[hi])
    projections = {x: Matrix.coordinate_projection(h[x], s.n) for x in s.poset}
    return validate_system(s.poset, dims, maps, projections=projections, limit_dim=s.n)


def product_structure(s1: MultifoliateStructure, s2: MultifoliateStructure) -> MultifoliateStructure:
    """Labels of s1 followed by labels of s2."""
    if s1.poset != s2.poset:
        raise PosetMismatch("product of structures over different posets")
    return MultifoliateStructure(s1.poset, s1.labels + s2.labels)


@dataclass(frozen=True)
class Equivalence:
    """omega: Λ -> Ω and sigma on 1..n with q(i) = omega(p(sigma(i)))."""

    omega: dict
    sigma: dict

    def permutation_matrix(self) -> Matrix:
        # (P x)_i = x_sigma(i)
        n = len(self.sigma)
        return Matrix([[1 if j + 1 == self.sigma[i + 1] else 0 for j in range(n)] for i in range(n)], cols=n)

    def to_json(self) -> dict:
        return {"omega": dict(sorted(self.omega.items())), "sigma": {str(i): self.sigma[i] for i in sorted(self.sigma)}}


def conjugation_check(s: MultifoliateStructure, t: MultifoliateStructure, eq: Equivalence, samples: int = 5) -> bool:
    """Exact pattern transport plus conjugation of sampled pattern members."""
    n = s.n
    sig = eq.sigma
    ps, pt = s.pattern.allowed, t.pattern.allowed
    if any(pt[i][j] != ps[sig[i + 1] - 1][sig[j + 1] - 1] for i in range(n) for j in range(n)):
        return False
    perm = eq.permutation_matrix()
    perm_inv = perm.T
    rng = random.Random(n * 7919 + len(s.poset))
    for _ in range(samples):
        m = random_pattern_member(s.pattern, rng)
        if not pattern_member(t.pattern, perm @ m @ perm_inv):
            return False
    return True


def equivalent(s: MultifoliateStructure, t: MultifoliateStructure) -> Equivalence | None:
    """Decide equivalence via a fiber-size preserving poset isomorphism.

    sigma matches the fibers p^-1(x) and q^-1(omega(x)) in ascending order.
    """
    if s.n != t.n:
        raise SizeMismatch(f"structures on {s.n} and {t.n} coordinates", witness=[s.n, t.n])
    for omega in iter_labeled_isomorphisms(s.poset, t.poset, s.fiber_sizes(), t.fiber_sizes()):
        sigma = {}
        for x in s.poset:
            for i, j in zip(t.fiber(omega[x]), s.fiber(x)):
                sigma[i] = j
        eq = Equivalence(dict(omega), dict(sorted(sigma.items())))
        if conjugation_check(s, t, eq):
            return eq
    return None
