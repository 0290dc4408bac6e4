"""Seeded random instances for property checks and the self-test."""

from __future__ import annotations

import random
from fractions import Fraction

from .poset import Poset, validate_poset
from .structures import MultifoliateStructure, validate_structure
from .weil.algebra import WeilAlgebra, substitution_hom, truncated_polynomial_algebra
from .weil.fiber import WeilSystem, validate_weil_system
from .weil.polynomial import PolyMap, Polynomial

NAMES = "abcdefghijklmnopqrstuvwxyz"


def random_poset(rng: random.Random, max_size: int = 5, density: float = 0.4) -> Poset:
    size = rng.randint(1, max_size)
    elements = list(NAMES[:size])
    pairs = [(elements[i], elements[j]) for i in range(size) for j in range(i + 1, size) if rng.random() < density]
    return validate_poset(elements, pairs)


def random_structure(
    rng: random.Random, max_poset: int = 5, max_n: int = 8, poset: Poset | None = None
) -> MultifoliateStructure:
    if poset is None:
        poset = random_poset(rng, min(max_poset, max_n))
    elements = list(poset)
    n = rng.randint(len(elements), max(len(elements), max_n))
    labels = elements + [rng.choice(elements) for _ in range(n - len(elements))]
    rng.shuffle(labels)
    return validate_structure(poset, n, labels)


def random_permutation(rng: random.Random, n: int) -> dict[int, int]:
    image = list(range(1, n + 1))
    rng.shuffle(image)
    return {i + 1: image[i] for i in range(n)}


def random_structure_pair_unmatched(rng: random.Random, max_n: int = 8) -> tuple[MultifoliateStructure, MultifoliateStructure]:
    """Two structures on the same n whose fiber-size profiles cannot match.

    Both live on the same poset and the multisets of fiber sizes differ, so no
    order isomorphism can carry one profile onto the other.
    """
    while True:
        s = random_structure(rng, max_n=max_n)
        if len(s.poset) < 2:
            continue
        sizes = s.fiber_sizes()
        donors = [x for x in s.poset if sizes[x] > 1]
        if not donors:
            continue
        donor = rng.choice(donors)
        targets = [x for x in s.poset if x != donor and sizes[x] != sizes[donor] - 1]
        if not targets:
            continue
        target = rng.choice(targets)
        labels = list(s.labels)
        labels[labels.index(donor)] = target
        t = validate_structure(s.poset, s.n, labels)
        if sorted(t.fiber_sizes().values()) != sorted(sizes.values()):
            return s, t


def random_weil_system(rng: random.Random, poset: Poset, max_order: int = 3, nvars: int | None = None) -> WeilSystem:
    """Truncated polynomial algebras whose order does not increase along the order.

    The transition maps scale every variable by c_hi / c_lo, which makes them
    coherent by construction.
    """
    if nvars is None:
        nvars = rng.choice([1, 1, 2])
    orders: dict[str, int] = {}
    scales: dict[str, Fraction] = {}
    for x in poset.linear_extension():
        lower = [orders[y] for y in poset.lower_covers(x)]
        orders[x] = rng.randint(0, min(lower) if lower else max_order)
        scales[x] = Fraction(rng.choice([1, 2, 3, -1, -2]), rng.choice([1, 2, 3]))
    algebras = {x: truncated_polynomial_algebra(orders[x], nvars) for x in poset}
    homs = {}
    for lo, hi in poset.covers():
        homs[(lo, hi)] = scaling_hom(algebras[lo], algebras[hi], scales[hi] / scales[lo])
    return validate_weil_system(poset, algebras, homs)


def scaling_hom(source: WeilAlgebra, target: WeilAlgebra, c):
    """x_i -> c x_i between truncated polynomial algebras (0 if the target has no x_i)."""
    nvars = len(source.monomials[0])
    images = []
    for v in range(nvars):
        mono = tuple(int(k == v) for k in range(nvars))
        if target.monomials and mono in target.monomials:
            images.append(target.scale(c, target.basis(target.monomials.index(mono))))
        else:
            images.append(target.zero())
    return substitution_hom(source, target, images)


def random_polynomial(rng: random.Random, nvars: int, max_degree: int = 3, max_terms: int = 4) -> Polynomial:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        degree = rng.randint(0, max_degree)
        exps = [0] * nvars
        for _ in range(degree):
            if nvars:
                exps[rng.randrange(nvars)] += 1
        terms[tuple(exps)] = Fraction(rng.randint(-4, 4), rng.choice([1, 1, 2, 3]))
    return Polynomial.from_dict(nvars, terms)


def random_polymap(rng: random.Random, arity: int, out_dim: int, max_degree: int = 3) -> PolyMap:
    return PolyMap(arity, tuple(random_polynomial(rng, arity, max_degree) for _ in range(out_dim)))


def random_algebra_point(rng: random.Random, algebra: WeilAlgebra, m: int) -> list[tuple]:
    return [tuple(Fraction(rng.randint(-5, 5), rng.choice([1, 2])) for _ in range(algebra.dim)) for _ in range(m)]
