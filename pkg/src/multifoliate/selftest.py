"""The acceptance checks as library functions, shared by the test suite and ``selftest``."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable

from . import linalg
from .classify import classify
from .generators import (
    random_algebra_point,
    random_permutation,
    random_polymap,
    random_polynomial,
    random_poset,
    random_structure,
    random_structure_pair_unmatched,
    random_weil_system,
)
from .linalg import Subspace
from .poset import Poset
from .projsys import completion, is_complete, is_invariant, stabilizer_algebra, system_isomorphic, validate_system
from .structures import (
    equivalent,
    pattern_member,
    random_pattern_member,
    system_of,
    validate_structure,
)
from .weil.algebra import WeilAlgebra, dual_numbers, real_line, truncated_polynomial_algebra, unit_hom
from .weil.fiber import (
    base_is_surjective,
    cartesian_object,
    fiber_product,
    i_alpha,
    o_alpha,
    o_alpha_inverse,
    product_preservation_check,
    validate_weil_system,
    weil_apply,
)
from .weil.polynomial import PolyMap, Polynomial

FAULTS = ("weil-table", "pattern")


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    seconds: float
    limit: float
    detail: str = ""
    cases: int = 0

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        text = f"[{verdict}] {self.number}. {self.name}: {self.cases} cases in {self.seconds:.2f}s (limit {self.limit:g}s)"
        return text + (f" -- {self.detail}" if self.detail else "")

    def to_json(self) -> dict:
        # timings are left out so that reports stay byte-stable
        return {"number": self.number, "name": self.name, "passed": self.passed, "cases": self.cases, "detail": self.detail}


@dataclass
class _Outcome:
    cases: int = 0
    failures: list = field(default_factory=list)

    def expect(self, ok: bool, what: str):
        self.cases += 1
        if not ok and len(self.failures) < 3:
            self.failures.append(what)


def _rng(seed: int, number: int) -> random.Random:
    return random.Random(seed * 1009 + number)


def random_structures(seed: int, count: int = 100):
    rng = _rng(seed, 1)
    return [random_structure(rng, max_poset=5, max_n=8) for _ in range(count)]


# 1
def check_round_trip(seed: int = 0, fault: str | None = None) -> _Outcome:
    out = _Outcome()
    for k, s in enumerate(random_structures(seed)):
        result = classify(system_of(s)).structure
        out.expect(equivalent(s, result) is not None, f"structure #{k} {s.labels} does not round-trip")
    return out


# 2
def check_antichain_completion(seed: int = 0, fault: str | None = None) -> _Outcome:
    out = _Outcome()
    poset = Poset.antichain("a", "b")
    xi = validate_system(poset, {"a": 1, "b": 1}, {})
    comp = completion(xi)
    top = comp.system.poset.greatest()
    out.expect(len(comp.system.poset) == 3, "completion does not have three elements")
    out.expect(top is not None and comp.system.dims[top] == 2, "no greatest element with a plane above it")
    n = xi.limit_dim
    coordinate = [Subspace.coordinate([i for i in range(n) if mask >> i & 1], n) for mask in range(2**n)]
    invariant = {s for s in coordinate if s.dim < n and is_invariant(xi, s)}
    out.expect(invariant == set(comp.kernels.values()), "invariant coordinate subspaces differ from kernel intersections")
    out.expect(not is_invariant(xi, Subspace.span([(1, 1)], 2)), "the diagonal line passes as invariant")
    return out


# 3
def check_completion_idempotent(seed: int = 0, fault: str | None = None) -> _Outcome:
    out = _Outcome()
    for k, s in enumerate(random_structures(seed)):
        first = completion(system_of(s)).system
        out.expect(is_complete(first), f"completion of #{k} is not complete")
        second = completion(first).system
        out.expect(system_isomorphic(second, first) is not None, f"second completion of #{k} differs")
    return out


def _pattern_structures(seed: int, count: int = 10):
    rng = _rng(seed, 4)
    return [random_structure(rng, max_poset=5, max_n=8) for _ in range(count)]


# 4
def check_pattern_group(seed: int = 0, fault: str | None = None, samples: int = 200) -> _Outcome:
    out = _Outcome()
    rng = _rng(seed, 40)
    for k, s in enumerate(_pattern_structures(seed)):
        pattern = s.pattern
        members = [random_pattern_member(pattern, rng) for _ in range(samples)]
        if fault == "pattern":
            # a forbidden entry, if there is one, breaks membership
            free = [(i, j) for i in range(s.n) for j in range(s.n) if not pattern.allowed[i][j]]
            if free:
                i, j = free[0]
                rows = [list(r) for r in members[0].entries]
                rows[i][j] += 1
                members[0] = linalg.Matrix(rows)
        for m, n_ in zip(members, members[1:] + members[:1]):
            out.expect(pattern_member(pattern, m @ n_), f"product leaves the pattern of #{k}")
            out.expect(pattern_member(pattern, linalg.inverse(m)), f"inverse leaves the pattern of #{k}")
    return out


def allowed_pair_count(s) -> int:
    """#{(i, j) : p(i) >= p(j)}, counted straight from the labels."""
    return sum(1 for a in s.labels for b in s.labels if s.poset.leq(b, a))


# 5
def check_stabilizer_dimension(seed: int = 0, fault: str | None = None) -> _Outcome:
    out = _Outcome()
    for k, s in enumerate(_pattern_structures(seed)):
        expected = allowed_pair_count(s)
        got = len(stabilizer_algebra(system_of(s)))
        out.expect(got == expected, f"#{k}: stabilizer dimension {got}, pattern count {expected}")
    return out


def _derivative(p: Polynomial) -> Polynomial:
    return Polynomial.from_dict(1, {(e[0] - 1,): c * e[0] for e, c in p.terms if e[0]})


def taylor_jet(p: Polynomial, a0, a1, order: int) -> tuple:
    """Coefficients of f(a0 + a1 t) mod t^(order+1) from derivatives at a0."""
    coeffs = []
    d = p
    for j in range(order + 1):
        coeffs.append(d(a0) * Fraction(a1) ** j / factorial(j))
        d = _derivative(d)
    return tuple(coeffs)


def _corrupt(a: WeilAlgebra) -> WeilAlgebra:
    # t * t = t: still commutative and associative, no longer nilpotent
    table = [[list(v) for v in row] for row in a.table]
    table[1][1] = [0, 1] + [0] * (a.dim - 2)
    return WeilAlgebra(table, a.labels, a.monomials)


# 6
def check_weil_functoriality(seed: int = 0, fault: str | None = None, count: int = 100) -> _Outcome:
    out = _Outcome()
    rng = _rng(seed, 6)
    for k in range(count):
        algebra = truncated_polynomial_algebra(rng.randint(1, 3), rng.choice([1, 1, 2]))
        m, mid, last = rng.randint(1, 3), rng.randint(1, 3), rng.randint(1, 3)
        f = random_polymap(rng, m, mid)
        g = random_polymap(rng, mid, last)
        x = random_algebra_point(rng, algebra, m)
        via_composite = weil_apply(algebra, g.compose(f), x)
        stepwise = weil_apply(algebra, g, weil_apply(algebra, f, x))
        out.expect(via_composite == stepwise, f"pair #{k}: composition law fails")
        out.expect(weil_apply(algebra, PolyMap.identity(m), x) == tuple(x), f"pair #{k}: identity law fails")
    for k in range(count // 4):
        order = rng.randint(1, 3)
        algebra = truncated_polynomial_algebra(order)
        if fault == "weil-table":
            algebra = _corrupt(algebra)
        p = random_polynomial(rng, 1, max_degree=4)
        a0, a1 = Fraction(rng.randint(-5, 5), rng.choice([1, 2, 3])), Fraction(rng.randint(-5, 5))
        point = [(a0, a1) + (0,) * (order - 1)]
        got = weil_apply(algebra, PolyMap(1, (p,)), point)[0]
        out.expect(got == taylor_jet(p, a0, a1, order), f"jet #{k}: disagrees with the Taylor expansion")
    return out


def chain_example():
    poset = Poset.chain("a", "b")
    s = validate_structure(poset, 2, ["a", "b"])
    d = dual_numbers()
    mu = validate_weil_system(poset, {"a": real_line(), "b": d}, {("a", "b"): unit_hom(d)})
    return mu, cartesian_object(s)


# 7
def check_fiber_products(seed: int = 0, fault: str | None = None, count: int = 20) -> _Outcome:
    out = _Outcome()
    mu, pi = chain_example()
    fp = fiber_product(mu, pi)
    out.expect(fp.dim == 3, f"chain example has dimension {fp.dim}")
    out.expect(base_is_surjective(fp), "base projection of the chain example is not onto")
    report = product_preservation_check(mu, pi, pi)
    out.expect(bool(report) and report.dims["product"] == 6, f"chain example squared: {report.to_json()}")
    rng = _rng(seed, 7)
    for k in range(count):
        poset = random_poset(rng, 4)
        left = cartesian_object(random_structure(rng, max_n=5, poset=poset))
        right = cartesian_object(random_structure(rng, max_n=5, poset=poset))
        mu = random_weil_system(rng, poset)
        report = product_preservation_check(mu, left, right)
        out.expect(bool(report), f"object #{k}: {report.witnesses[:1]}")
        fp = fiber_product(mu, left)
        out.expect(all(fp.conditions_hold(p) for p in fp.basis_points()), f"object #{k}: basis leaves the fiber product")
    return out


# 8
def check_i_alpha(seed: int = 0, fault: str | None = None, count: int = 10) -> _Outcome:
    out = _Outcome()
    rng = _rng(seed, 8)
    for k in range(count):
        poset = random_poset(rng, 4)
        mu = random_weil_system(rng, poset)
        for alpha in poset:
            for m in (1, 2):
                obj = i_alpha(poset, alpha, m)
                fp = fiber_product(mu, obj)
                a = mu.algebras[alpha]
                out.expect(fp.dim == a.dim * m, f"system #{k}, {alpha}, m={m}: dimension {fp.dim}")
                x = random_algebra_point(rng, a, m)
                tup = o_alpha_inverse(mu, obj, x)
                out.expect(fp.contains(tup) and o_alpha(obj, tup) == tuple(x), f"system #{k}, {alpha}: O_alpha round trip")
    return out


# 9
def check_equivalence(seed: int = 0, fault: str | None = None, count: int = 50) -> _Outcome:
    out = _Outcome()
    rng = _rng(seed, 9)
    for k in range(count):
        s = random_structure(rng, max_n=8)
        t = s.permuted(random_permutation(rng, s.n))
        eq = equivalent(s, t)
        ok = eq is not None and all(t.p(i) == eq.omega[s.p(eq.sigma[i])] for i in range(1, s.n + 1))
        ok = ok and all(eq.omega[x] == x for x in s.poset)
        out.expect(ok, f"pair #{k}: no sigma with q = p o sigma")
    for k in range(count):
        s, t = random_structure_pair_unmatched(rng)
        out.expect(equivalent(s, t) is None, f"unmatched pair #{k} reported equivalent")
    return out


CHECKS: list[tuple[int, str, float, Callable]] = [
    (1, "round-trip classification", 10, check_round_trip),
    (2, "antichain completion", 1, check_antichain_completion),
    (3, "completion idempotence", 20, check_completion_idempotent),
    (4, "GL pattern group laws", 5, check_pattern_group),
    (5, "stabilizer dimension", 5, check_stabilizer_dimension),
    (6, "Weil functoriality", 10, check_weil_functoriality),
    (7, "fiber products", 10, check_fiber_products),
    (8, "i_alpha identification", 5, check_i_alpha),
    (9, "equivalence decision", 5, check_equivalence),
]


def run_check(number: int, seed: int = 0, fault: str | None = None) -> CheckResult:
    _, name, limit, fn = CHECKS[number - 1]
    start = time.perf_counter()
    try:
        outcome = fn(seed=seed, fault=fault)
        detail = "; ".join(outcome.failures)
        ok = not outcome.failures
        cases = outcome.cases
    except Exception as exc:  # a crash is a failed property
        ok, detail, cases = False, f"{type(exc).__name__}: {exc}", 0
    seconds = time.perf_counter() - start
    if ok and seconds >= limit:
        ok, detail = False, f"took {seconds:.2f}s"
    return CheckResult(number, name, ok, seconds, limit, detail, cases)


def run_selftest(seed: int = 0, fault: str | None = None) -> list[CheckResult]:
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}; choose from {FAULTS}")
    return [run_check(number, seed, fault) for number, *_ in CHECKS]
