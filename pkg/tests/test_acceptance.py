"""The nine acceptance criteria, each at its stated time limit.

Every criterion prints one PASS/FAIL line as it runs and again in the
terminal summary.
"""

import random
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE_LINES
from oracles import taylor_coefficients
from multifoliate.generators import random_polynomial
from multifoliate.selftest import CHECKS, run_check
from multifoliate.weil import PolyMap, truncated_polynomial_algebra, weil_apply


def _record(result):
    line = result.line()
    ACCEPTANCE_LINES[result.number] = line
    print(line)
    return result


@pytest.mark.parametrize("number", [c[0] for c in CHECKS], ids=[f"{c[0]}-{c[1].replace(' ', '-')}" for c in CHECKS])
def test_criterion(number):
    result = _record(run_check(number))
    assert result.passed, result.detail
    assert result.seconds < result.limit


def test_criterion_6_symbolic_taylor_oracle():
    # the built-in check compares against derivatives; this one asks sympy
    rng = random.Random(606)
    for _ in range(100):
        order = rng.randint(1, 3)
        algebra = truncated_polynomial_algebra(order)
        p = random_polynomial(rng, 1, max_degree=5)
        a0, a1 = Fraction(rng.randint(-5, 5), rng.choice([1, 2, 3])), Fraction(rng.randint(-5, 5), rng.choice([1, 2]))
        got = weil_apply(algebra, PolyMap(1, (p,)), [(a0, a1) + (0,) * (order - 1)])[0]
        assert got == taylor_coefficients(p.terms, a0, a1, order)
