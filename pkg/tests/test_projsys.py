from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from multifoliate import linalg
from multifoliate.errors import CoherenceError, MissingMap, NotEpimorphism, PosetMismatch
from multifoliate.linalg import Matrix, Subspace
from multifoliate.poset import Poset, validate_poset
from multifoliate.projsys import (
    completion,
    is_complete,
    is_invariant,
    kernel_family,
    limit,
    limit_comparison,
    product_system,
    stabilizer_algebra,
    system_isomorphic,
    validate_system,
)
from multifoliate.structures import system_of, validate_structure

from oracles import brute_antichains, closure
from strategies import structures

CHAIN = Poset.chain("a", "b")
ANTICHAIN = Poset.antichain("a", "b")


def chain_system(row=((1, 0),)):
    return validate_system(CHAIN, {"a": 1, "b": 2}, {("a", "b"): Matrix(row)})


def antichain_system():
    return validate_system(ANTICHAIN, {"a": 1, "b": 1}, {})


def test_validate_examples():
    assert chain_system().limit_dim == 2
    assert antichain_system().limit_dim == 2


def test_diamond_incoherent():
    p = validate_poset(["a", "b", "c", "d"], [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])
    dims = {"a": 1, "b": 2, "c": 2, "d": 2}
    maps = {
        ("a", "b"): Matrix([[1, 0]]),
        ("a", "c"): Matrix([[1, 0]]),
        ("b", "d"): Matrix.identity(2),
        ("c", "d"): Matrix([[0, 1], [1, 0]]),
    }
    # b-path gives [[1,0]], c-path gives [[0,1]]
    assert (maps[("a", "b")] @ maps[("b", "d")]) != (maps[("a", "c")] @ maps[("c", "d")])
    with pytest.raises(CoherenceError):
        validate_system(p, dims, maps)


def test_missing_and_non_epimorphic_maps():
    with pytest.raises(MissingMap):
        validate_system(CHAIN, {"a": 1, "b": 2}, {})
    with pytest.raises(NotEpimorphism):
        validate_system(CHAIN, {"a": 1, "b": 2}, {("a", "b"): Matrix([[0, 0]])})


def test_limit_examples():
    n, proj = limit(chain_system())
    assert n == 2 and proj["a"] == Matrix([[1, 0]]) and proj["b"] == Matrix.identity(2)
    n, proj = limit(antichain_system())
    assert n == 2
    assert {proj["a"], proj["b"]} == {Matrix([[1, 0]]), Matrix([[0, 1]])}
    three = validate_system(
        Poset.chain("a", "b", "c"),
        {"a": 1, "b": 2, "c": 3},
        {("a", "b"): Matrix([[1, 0]]), ("b", "c"): Matrix([[1, 0, 0], [0, 1, 0]])},
    )
    n, proj = limit(three)
    assert n == 3 and proj["a"] == Matrix([[1, 0, 0]])
    assert kernel_family(three)["a"] == Subspace.span([(0, 1, 0), (0, 0, 1)], 3)


def test_limit_without_greatest_element_is_compatible_tuples():
    # V shape: b and c over a common a, no top
    p = validate_poset(["a", "b", "c"], [("a", "b"), ("a", "c")])
    s = validate_system(p, {"a": 1, "b": 2, "c": 2}, {("a", "b"): Matrix([[1, 0]]), ("a", "c"): Matrix([[1, 1]])})
    assert s.limit_dim == 3
    stacked = s.projections["b"].vstack(s.projections["c"])
    assert linalg.rank(stacked) == 3
    assert s.map("a", "b") @ s.projections["b"] == s.map("a", "c") @ s.projections["c"]


def test_stabilizer_examples():
    assert len(stabilizer_algebra(system_of(validate_structure(CHAIN, 2, ["a", "b"])))) == 3
    assert len(stabilizer_algebra(system_of(validate_structure(ANTICHAIN, 2, ["a", "b"])))) == 2
    point = validate_system(Poset.chain("e"), {"e": 2}, {})
    assert len(stabilizer_algebra(point)) == 4


def test_invariance_examples():
    xi = chain_system()
    for k in xi.kernels.values():
        assert is_invariant(xi, k)
    assert is_invariant(xi, Subspace.zero(2))
    assert not is_invariant(antichain_system(), Subspace.span([(1, 1)], 2))


def test_completion_examples():
    c = completion(antichain_system())
    top = c.system.poset.greatest()
    assert len(c.system.poset) == 3 and top is not None
    assert c.system.dims[top] == 2
    assert c.antichain[top] == ("a", "b")
    assert c.index_map == {"a": "a", "b": "b"}

    c = completion(chain_system())
    assert c.system.poset == CHAIN and c.index_map == {"a": "a", "b": "b"}

    p = validate_poset(["a", "b", "c"], [("a", "c"), ("b", "c")])
    xi = validate_system(p, {"a": 1, "b": 1, "c": 2}, {("a", "c"): Matrix([[1, 0]]), ("b", "c"): Matrix([[0, 1]])})
    assert linalg.intersect(xi.kernels["a"], xi.kernels["b"]) == xi.kernels["c"]
    c = completion(xi)
    assert c.system.poset == p and c.system.poset.greatest() == "c"


def test_is_complete_examples():
    assert is_complete(chain_system())
    assert not is_complete(antichain_system())
    assert is_complete(completion(antichain_system()).system)


def test_system_isomorphic_examples():
    xi = chain_system()
    iso = system_isomorphic(xi, xi)
    assert iso is not None and iso.omega == {"a": "a", "b": "b"}
    other = chain_system(((0, 1),))
    iso = system_isomorphic(xi, other)
    assert iso is not None
    for lo, hi in CHAIN.pairs():
        assert other.map(lo, hi) @ iso.psi[hi] == iso.psi[lo] @ xi.map(lo, hi)
    swap = Matrix([[0, 1], [1, 0]])
    assert other.map("a", "b") @ swap == xi.map("a", "b")
    # dimension labels (1,2) against (2,2): no labeled poset isomorphism
    wide = validate_system(Poset.chain("a", "b"), {"a": 1, "b": 2}, {("a", "b"): Matrix([[1, 0]])})
    narrow = validate_system(Poset.chain("u", "v"), {"u": 2, "v": 2}, {("u", "v"): Matrix.identity(2)})
    assert system_isomorphic(wide, narrow) is None


def test_system_isomorphic_rejects_dimension_labels():
    p = validate_poset(["a", "b", "c"], [("a", "c"), ("b", "c")])
    one = validate_system(p, {"a": 1, "b": 2, "c": 3}, {("a", "c"): Matrix([[1, 0, 0]]), ("b", "c"): Matrix([[0, 1, 0], [0, 0, 1]])})
    two = validate_system(p, {"a": 2, "b": 1, "c": 3}, {("a", "c"): Matrix([[1, 0, 0], [0, 1, 0]]), ("b", "c"): Matrix([[0, 0, 1]])})
    iso = system_isomorphic(one, two)
    assert iso is not None and iso.omega == {"a": "b", "b": "a", "c": "c"}


def test_product_examples():
    xi = chain_system()
    zero = validate_system(CHAIN, {"a": 0, "b": 0}, {("a", "b"): Matrix.zeros(0, 0)})
    assert system_isomorphic(product_system(xi, zero), xi) is not None
    prod = product_system(antichain_system(), antichain_system())
    assert prod.dims == {"a": 2, "b": 2} and prod.limit_dim == 4
    with pytest.raises(PosetMismatch):
        product_system(xi, antichain_system())


def test_product_of_chains_is_shuffled_stack():
    s = validate_structure(CHAIN, 2, ["a", "b"])
    prod = product_system(system_of(s), system_of(s))
    stacked = system_of(validate_structure(CHAIN, 4, ["a", "a", "b", "b"]))
    assert system_isomorphic(prod, stacked) is not None


@settings(max_examples=40)
@given(structures())
def test_kernel_monotonicity(s):
    xi = system_of(s)
    for lo, hi in s.poset.pairs():
        assert xi.kernels[lo] >= xi.kernels[hi]


@settings(max_examples=25)
@given(structures(max_poset=4, max_n=6))
def test_completion_idempotent_and_complete(s):
    first = completion(system_of(s)).system
    assert is_complete(first)
    second = completion(first).system
    assert len(second.poset) == len(first.poset)
    assert system_isomorphic(second, first) is not None


@settings(max_examples=25)
@given(structures(max_poset=4, max_n=6))
def test_completion_poset_is_antichain_kernel_poset(s):
    # independent recomputation: kernels as coordinate sets, antichains by brute force
    elems = list(s.poset)
    leq = closure(elems, s.poset.pairs())
    kernel = {x: frozenset(i for i in range(s.n) if (s.labels[i], x) not in leq) for x in elems}
    spaces = set()
    for chain in brute_antichains(elems, leq):
        k = frozenset.intersection(*(kernel[x] for x in chain))
        if len(k) < s.n:
            spaces.add(k)
    comp = completion(system_of(s))
    got = set()
    for k in comp.kernels.values():
        coords = frozenset(i for i in range(s.n) if k.contains_vector([int(j == i) for j in range(s.n)]))
        assert len(coords) == k.dim  # a coordinate subspace
        got.add(coords)
    assert got == spaces
    for a in comp.system.poset:
        for b in comp.system.poset:
            assert comp.system.poset.leq(a, b) == (comp.kernels[a] >= comp.kernels[b])


@settings(max_examples=25)
@given(structures(max_poset=4, max_n=6), st.randoms(use_true_random=False))
def test_equivalent_structures_give_isomorphic_completions(s, rnd):
    perm = list(range(1, s.n + 1))
    rnd.shuffle(perm)
    t = s.permuted(perm)
    a = completion(system_of(s)).system
    b = completion(system_of(t)).system
    assert system_isomorphic(a, b) is not None


@settings(max_examples=25)
@given(structures(max_poset=4, max_n=6))
def test_limit_comparison_is_isomorphism(s):
    xi = system_of(s)
    comp = completion(xi)
    assert comp.system.limit_dim == xi.limit_dim
    assert linalg.is_isomorphism(limit_comparison(xi, comp))


@settings(max_examples=30)
@given(structures(max_poset=3, max_n=3))
def test_invariant_coordinate_subspaces_are_kernel_intersections(s):
    xi = system_of(s)
    n = s.n
    elems = list(s.poset)
    leq = closure(elems, s.poset.pairs())
    expected = set()
    for chain in brute_antichains(elems, leq):
        expected.add(frozenset(i for i in range(n) if all((s.labels[i], x) not in leq for x in chain)))
    passing = set()
    for k in range(n + 1):
        for coords in combinations(range(n), k):
            if is_invariant(xi, Subspace.coordinate(coords, n)):
                passing.add(frozenset(coords))
    assert passing - {frozenset(range(n))} == expected - {frozenset(range(n))}


def test_non_coordinate_system():
    xi = validate_system(CHAIN, {"a": 1, "b": 2}, {("a", "b"): Matrix([[1, 1]])})
    assert xi.kernels["a"] == Subspace.span([(1, -1)], 2)
    assert is_invariant(xi, xi.kernels["a"])
    assert not is_invariant(xi, Subspace.span([(1, 0)], 2))
    assert is_complete(xi)
