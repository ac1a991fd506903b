import random
from fractions import Fraction

from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from helpers import exact_poly, known_roots, random_factored_poly
from robustrec.numeric import ComplexBox, Interval, Q
from robustrec.poly import (Clustering, IntervalPoly, compute_clustering, count_roots_in_box,
                            eval_poly, validate_clustering)


def box(a, b, c, d):
    return ComplexBox(Interval(Q(a), Q(b)), Interval(Q(c), Q(d)))


def test_eval_examples():
    assert eval_poly(IntervalPoly([-1, 0, 1]), ComplexBox.point(2)) == ComplexBox.point(3)
    assert eval_poly(IntervalPoly([1, 0, 1]), ComplexBox.point(0, 1)) == ComplexBox.point(0)


def test_eval_widened_contains_exact():
    wide = IntervalPoly([Interval(Q("-1.01"), Q("-0.99")), Interval(0), Interval(1)])
    z = box("1.9", "2.1", "-0.1", "0.1")
    assert eval_poly(wide, z).contains((3, 0))


def test_count_examples():
    assert count_roots_in_box(IntervalPoly([1, 0, 1]), box("-1/2", "1/2", "1/2", "3/2")) == 1
    cube = IntervalPoly([-1, 3, -3, 1])
    assert count_roots_in_box(cube, box("3/4", "5/4", "-1/4", "1/4")) == 3
    assert count_roots_in_box(IntervalPoly([-2, 0, 1]), box(0, 1, -1, 1)) == 0


def test_sqrt2_outside_by_exact_signs():
    # sqrt(2) lies in (1, 3/2): P(1) < 0 < P(3/2), so the unit box misses it
    P = [Fraction(-2), Fraction(0), Fraction(1)]
    assert sum(c for c in P) < 0 < sum(c * Fraction(3, 2) ** i for i, c in enumerate(P))


def test_cluster_triple_root():
    C = compute_clustering(IntervalPoly([-1, 3, -3, 1]), 4)
    assert C.real_count == 1 and len(C.clusters) == 1
    B, n = C.clusters[0]
    assert n == 3 and B.contains((1, 0)) and B.width <= mpq(1, 16)


def test_cluster_real_order():
    C = compute_clustering(IntervalPoly([-4, 0, 1]), 6)
    assert [n for _, n in C.clusters] == [1, 1]
    assert C.clusters[0][0].contains((2, 0)) and C.clusters[1][0].contains((-2, 0))


def test_cluster_conjugates():
    C = compute_clustering(IntervalPoly([1, 0, 1]), 6)
    assert (C.real_count, C.upper_count) == (0, 1)
    assert C.clusters[0][0].contains((0, 1)) and C.clusters[1][0].contains((0, -1))


def test_validator_catches_order_violation():
    P = IntervalPoly([-4, 0, 1])
    C = compute_clustering(P, 6)
    swapped = Clustering([C.clusters[1], C.clusters[0]], 2, 2)
    assert any(v.startswith("(6)") for v in validate_clustering(P, swapped))


def test_clustering_json_roundtrip():
    C = compute_clustering(IntervalPoly([1, 0, 1]), 6)
    again = Clustering.from_json(C.to_json())
    assert again.to_json() == C.to_json()


def test_interval_coefficients_cover_nearby_roots():
    P = IntervalPoly([Interval(Q("-2.001"), Q("-1.999")), Interval(0), Interval(1)])
    C = compute_clustering(P, 4, max_width=None)
    assert C is not None and not validate_clustering(P, C)
    assert sum(n for _, n in C.clusters) == 2


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_clustering_matches_known_roots(seed):
    coeffs, factors = random_factored_poly(random.Random(seed), max_degree=4)
    P = exact_poly(coeffs)
    C = compute_clustering(P, 5)
    assert C is not None
    assert validate_clustering(P, C) == []
    for (B, n) in C.clusters:
        assert B.width <= mpq(1, 32)
        inside = sum(m for pred, m in known_roots(factors) if pred(B))
        assert inside == n


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_count_additivity(seed):
    rng = random.Random(seed)
    coeffs, _ = random_factored_poly(rng, max_degree=4)
    P = exact_poly(coeffs)
    whole = box(-40, 40, -40, 40)
    # split line k/64 + 1/128 never meets a root of the generated factors
    s =Fraction(rng.randint(-400, 400), 64) + Fraction(1, 128)
    halves = [box(-40, s, -40, 40), box(s, 40, -40, 40)]
    total = count_roots_in_box(P, whole)
    parts = [count_roots_in_box(P, h) for h in halves]
    if total is None or None in parts:
        return
    assert total == P.degree == sum(parts)
