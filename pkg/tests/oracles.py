"""Independent brute-force oracles. Nothing here imports the package's algorithms."""

from fractions import Fraction
from itertools import combinations, permutations

import sympy


def closure(elements, pairs):
    leq = {(x, x) for x in elements} | set(pairs)
    changed = True
    while changed:
        changed = False
        for (a, b) in list(leq):
            for (c, d) in list(leq):
                if b == c and (a, d) not in leq:
                    leq.add((a, d))
                    changed = True
    return leq


def brute_antichains(elements, leq):
    out = []
    for k in range(1, len(elements) + 1):
        for sub in combinations(sorted(elements), k):
            if all((x, y) not in leq and (y, x) not in leq for x, y in combinations(sub, 2)):
                out.append(sub)
    return out


def brute_covers(elements, leq):
    strict = {(x, y) for (x, y) in leq if x != y}
    return {
        (x, y)
        for (x, y) in strict
        if not any((x, z) in strict and (z, y) in strict for z in elements)
    }


def brute_floor(elements, leq, x):
    cov = brute_covers(elements, leq)
    best = 1
    stack = [(x, 1)]
    while stack:
        y, length = stack.pop()
        best = max(best, length)
        stack.extend((z, length + 1) for (z, w) in cov if w == y)
    return best


def brute_isomorphisms(p_elems, p_leq, q_elems, q_leq, lp, lq):
    p_elems, q_elems = sorted(p_elems), sorted(q_elems)
    if len(p_elems) != len(q_elems):
        return []
    out = []
    for image in permutations(q_elems):
        w = dict(zip(p_elems, image))
        if any(lq[w[x]] != lp[x] for x in p_elems):
            continue
        if all(((x, y) in p_leq) == ((w[x], w[y]) in q_leq) for x in p_elems for y in p_elems):
            out.append(w)
    return out


def sym(m):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in m])


def sympy_rank(rows, cols):
    if not rows:
        return 0
    return sympy.Matrix(rows).rank() if cols else 0


def sympy_nullspace_dim(rows, cols):
    return cols - sympy_rank(rows, cols)


def in_span(vectors, v):
    """Whether v is a rational combination of vectors (sympy rank test)."""
    if not vectors:
        return all(x == 0 for x in v)
    base = sympy.Matrix([list(u) for u in vectors])
    return base.rank() == base.col_join(sympy.Matrix([list(v)])).rank()


def same_span(a, b):
    return all(in_span(a, v) for v in b) and all(in_span(b, v) for v in a) if (a or b) else True


def taylor_coefficients(poly_terms, a0, a1, order):
    """Coefficients of f(a0 + a1 t) truncated at t^order, via sympy series."""
    t, x = sympy.symbols("t x")
    f = sum((sympy.Rational(c.numerator, c.denominator) * x ** e[0] for e, c in poly_terms), sympy.Integer(0))
    expr = sympy.expand(f.subs(x, sympy.Rational(a0.numerator, a0.denominator) + sympy.Rational(a1.numerator, a1.denominator) * t))
    poly = sympy.Poly(expr, t)
    return tuple(Fraction(int(sympy.fraction(poly.coeff_monomial(t ** j))[0]), int(sympy.fraction(poly.coeff_monomial(t ** j))[1])) for j in range(order + 1))
