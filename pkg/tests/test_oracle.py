import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from robustrec.oracle import (SingularSystem, certified_interpolate, exact_interpolate,
                              exact_roots, exact_terms, iv_bounds, ultimate_positivity)

R = sympy.Rational


def test_exact_terms_examples():
    assert exact_terms([1, 1], [1, 1], 7) == [1, 1, 2, 3, 5, 8, 13]
    assert exact_terms([3, -3, 1], [3, 6, 3], 5) == [3, 6, 3, -6, -21]
    assert exact_terms([5, 7], [0, 0], 10) == [0] * 10


def test_exact_interpolate_examples():
    assert exact_interpolate({2: 1, -2: 1}, [1, 1]) == [[R(3, 8)], [R(-1, 8)]]
    assert exact_interpolate({1: 2}, [1, 1]) == [[1, 0]]
    assert exact_interpolate({1: 1}, [1]) == [[1]]
    with pytest.raises(SingularSystem):
        exact_interpolate({1: 1}, [1, 2])


def test_certified_fibonacci():
    roots = exact_roots([1, 1])
    g = certified_interpolate(roots, [1, 1])
    i = max(range(2), key=lambda j: roots[j].re[0])
    lo, hi = iv_bounds(g[i][0])
    # 1/sqrt(5) is in [lo, hi] iff 5 lo^2 <= 1 <= 5 hi^2 (both positive)
    assert 0 < lo and 5 * lo * lo <= 1 <= 5 * hi * hi and hi - lo < Fraction(1, 2 ** 200)


def test_ultimate_positivity_examples():
    assert ultimate_positivity([1], [1]) is True
    assert ultimate_positivity([1, 1], [1, 1]) is True
    assert ultimate_positivity([3, -3, 1], [3, 6, 3]) is False
    assert ultimate_positivity([0, 4], [1, 1]) is None


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_interpolation_reconstructs_terms(seed):
    rng = random.Random(seed)
    n_roots = rng.randint(1, 3)
    vals = rng.sample([R(a, 2) for a in range(-6, 7) if a], n_roots)
    roots = {v: rng.randint(1, 2) for v in vals}
    n = sum(roots.values())
    inits = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(n)]
    g = exact_interpolate(roots, inits)
    poly = sympy.Poly(sympy.prod([(sympy.Symbol("x") - v) ** m for v, m in roots.items()]))
    coeffs = [-c for c in poly.all_coeffs()[1:]]
    terms = exact_terms([Fraction(int(c.p), int(c.q)) for c in coeffs], inits, 2 * n)
    for k in range(1, 2 * n + 1):
        f = sum(gl * k ** l * v ** k for (v, _), gs in zip(roots.items(), g) for l, gl in enumerate(gs))
        assert sympy.simplify(f - R(terms[k - 1].numerator, terms[k - 1].denominator)) == 0
