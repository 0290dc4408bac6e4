import random

import pytest
from hypothesis import given, settings, strategies as st

from multifoliate import linalg
from multifoliate.errors import BadIndex, NotSurjective, PosetMismatch, ShapeMismatch, SizeMismatch
from multifoliate.linalg import Matrix
from multifoliate.poset import Poset
from multifoliate.projsys import stabilizer_algebra
from multifoliate.structures import (
    MultifoliateStructure,
    equivalent,
    gl_pattern,
    jacobian_check,
    pattern_member,
    product_structure,
    random_pattern_member,
    system_of,
    validate_structure,
)

from strategies import structures

CHAIN = Poset.chain("a", "b")
ANTICHAIN = Poset.antichain("a", "b")


def test_validate_examples():
    assert validate_structure(CHAIN, 2, ["a", "b"]).labels == ("a", "b")
    with pytest.raises(NotSurjective):
        validate_structure(CHAIN, 1, ["a"])
    s = validate_structure(ANTICHAIN, 3, {1: "a", 2: "a", 3: "b"})
    assert s.fiber_sizes() == {"a": 2, "b": 1}
    with pytest.raises(BadIndex):
        validate_structure(CHAIN, 2, ["a", "z"])
    with pytest.raises(BadIndex):
        validate_structure(CHAIN, 2, {1: "a", 3: "b"})


def test_pattern_examples():
    assert gl_pattern(validate_structure(CHAIN, 2, ["a", "b"])).tolist() == [[1, 0], [1, 1]]
    assert gl_pattern(validate_structure(ANTICHAIN, 2, ["a", "b"])).tolist() == [[1, 0], [0, 1]]
    assert gl_pattern(validate_structure(Poset.chain("e"), 3, ["e"] * 3)).tolist() == [[1] * 3] * 3


def test_pattern_member_examples():
    pattern = gl_pattern(validate_structure(CHAIN, 2, ["a", "b"]))
    assert pattern_member(pattern, Matrix.identity(2))
    assert pattern_member(pattern, Matrix([[2, 0], [5, -1]]))
    assert not pattern_member(pattern, Matrix([[1, 1], [0, 1]]))
    assert not pattern_member(pattern, Matrix([[1, 0], [1, 0]]))


def test_jacobian_examples():
    s = validate_structure(CHAIN, 2, ["a", "b"])
    # the target labels only coordinate a, so it is built without the surjectivity check
    t = MultifoliateStructure(CHAIN, ("a",))
    assert jacobian_check(s, t, Matrix.zeros(1, 2))
    assert not jacobian_check(s, t, Matrix([[0, 1]]))
    assert jacobian_check(s, t, Matrix([[3, 0]]))
    point = validate_structure(Poset.chain("e"), 2, ["e", "e"])
    assert jacobian_check(point, point, Matrix([[1, 2], [3, 4]]))
    with pytest.raises(ShapeMismatch):
        jacobian_check(s, t, Matrix.zeros(2, 2))
    with pytest.raises(PosetMismatch):
        jacobian_check(s, point, Matrix.zeros(2, 2))


def test_system_of_examples():
    xi = system_of(validate_structure(CHAIN, 2, ["a", "b"]))
    assert xi.dims == {"a": 1, "b": 2} and xi.map("a", "b") == Matrix([[1, 0]])
    xi = system_of(validate_structure(ANTICHAIN, 2, ["a", "b"]))
    assert xi.dims == {"a": 1, "b": 1} and xi.poset.covers() == []
    xi = system_of(validate_structure(Poset.chain("e"), 3, ["e"] * 3))
    assert xi.dims == {"e": 3} and xi.limit_dim == 3


def test_product_examples():
    s = validate_structure(CHAIN, 2, ["a", "b"])
    prod = product_structure(s, s)
    assert prod.labels == ("a", "b", "a", "b")
    assert prod.fiber_sizes() == {x: 2 * k for x, k in s.fiber_sizes().items()}
    block = [row[:2] for row in gl_pattern(prod).tolist()[:2]]
    assert block == gl_pattern(s).tolist()
    with pytest.raises(PosetMismatch):
        product_structure(s, validate_structure(ANTICHAIN, 2, ["a", "b"]))


def test_equivalent_examples():
    s = validate_structure(CHAIN, 2, ["a", "b"])
    eq = equivalent(s, s)
    assert eq.omega == {"a": "a", "b": "b"} and eq.sigma == {1: 1, 2: 2}
    eq = equivalent(s, validate_structure(CHAIN, 2, ["b", "a"]))
    assert eq.sigma == {1: 2, 2: 1}
    assert equivalent(validate_structure(CHAIN, 3, ["a", "a", "b"]), validate_structure(CHAIN, 3, ["a", "b", "b"])) is None
    with pytest.raises(SizeMismatch):
        equivalent(s, validate_structure(CHAIN, 3, ["a", "b", "b"]))


def test_equivalent_across_posets():
    s = validate_structure(CHAIN, 3, ["a", "b", "a"])
    t = validate_structure(Poset.chain("u", "v"), 3, ["v", "u", "u"])
    eq = equivalent(s, t)
    assert eq.omega == {"a": "u", "b": "v"}
    assert all(t.p(i) == eq.omega[s.p(eq.sigma[i])] for i in range(1, 4))


@settings(max_examples=30)
@given(structures(), st.randoms(use_true_random=False))
def test_pattern_group_closure(s, rnd):
    pattern = gl_pattern(s)
    rng = random.Random(rnd.random())
    for _ in range(5):
        m, n = random_pattern_member(pattern, rng), random_pattern_member(pattern, rng)
        assert pattern_member(pattern, m @ n)
        assert pattern_member(pattern, linalg.inverse(m))


@settings(max_examples=40)
@given(structures())
def test_pattern_is_reflexive_and_transitive(s):
    a = gl_pattern(s).allowed
    n = s.n
    for i in range(n):
        assert a[i][i]
        for j in range(n):
            for k in range(n):
                if a[i][j] and a[j][k]:
                    assert a[i][k]


@settings(max_examples=40)
@given(structures())
def test_stabilizer_dimension_counts_pattern(s):
    count = sum(1 for i in range(s.n) for j in range(s.n) if s.poset.leq(s.labels[j], s.labels[i]))
    assert len(stabilizer_algebra(system_of(s))) == count == gl_pattern(s).count()


@settings(max_examples=40)
@given(structures())
def test_kernel_dictionary(s):
    xi = system_of(s)
    for x in s.poset:
        coords = [i for i in range(s.n) if not s.poset.leq(s.labels[i], x)]
        assert xi.kernels[x].dim == s.n - len(s.h_set(x)) == len(coords)
        for i in coords:
            assert xi.kernels[x].contains_vector([int(j == i) for j in range(s.n)])


@settings(max_examples=40)
@given(structures(), st.randoms(use_true_random=False))
def test_permuted_structure_is_equivalent(s, rnd):
    perm = list(range(1, s.n + 1))
    rnd.shuffle(perm)
    t = s.permuted(perm)
    eq = equivalent(s, t)
    assert eq is not None
    assert all(t.p(i) == eq.omega[s.p(eq.sigma[i])] for i in range(1, s.n + 1))


@settings(max_examples=20)
@given(structures(max_n=4))
def test_product_associative_up_to_relabeling(a):
    # b and c share a's poset, as products require
    b = validate_structure(a.poset, len(a.poset), list(a.poset))
    c = validate_structure(a.poset, a.n, list(reversed(a.labels)))
    left = product_structure(product_structure(a, b), c)
    right = product_structure(a, product_structure(b, c))
    assert equivalent(left, right) is not None
