from functools import lru_cache

from hypothesis import given, strategies as st

from robustrec.configs import (ComplexVar, RealVar, RootConfiguration, associated_recurrence,
                               domain_system, enumerate_configurations, eval_univariate_real,
                               numerator_poly, real_cluster_options)
from robustrec.numeric import ComplexBox, Interval, Q
from robustrec.poly import Clustering
from robustrec.symbolic import SymbolicPoly

EPS = Q("1/64")
NEAR_ONE = ComplexBox(Interval(1 - EPS, 1 + EPS), Interval(-EPS, EPS))
V = SymbolicPoly.var


def single_real(N):
    return Clustering([(NEAR_ONE, N)], 1, 1)


@lru_cache(maxsize=None)
def count_real(N):
    """Independent recursive count: peel off a real root of mult m or a pair of mult m."""
    return sum(1 for _ in _shapes(N))


def _shapes(N):
    # (real multiplicity sequence, multiset of pair multiplicities)
    out = set()

    def rec(left, reals, pairs):
        if left == 0:
            out.add((tuple(reals), tuple(sorted(pairs, reverse=True))))
            return
        for m in range(1, left + 1):
            rec(left - m, reals + [m], pairs)
        for m in range(1, left // 2 + 1):
            rec(left - 2 * m, reals, pairs + [m])
    rec(N, [], [])
    return out


def test_counts_for_single_real_cluster():
    assert [len(enumerate_configurations(single_real(N))) for N in (1, 2, 3)] == [1, 3, 5]


@given(st.integers(1, 7))
def test_real_options_match_recursive_counter(N):
    assert len(real_cluster_options(N)) == count_real(N)


def test_complex_pair_cluster():
    up = ComplexBox(Interval(-EPS, EPS), Interval(1 - EPS, 1 + EPS))
    C = Clustering([(up, 2), (up.conj(), 2)], 0, 1)
    configs = enumerate_configurations(C)
    # one pair of multiplicity 2 or two simple pairs
    assert sorted(tuple(v.mult for v in R.complex_vars) for R in configs) == [(1, 1), (2,)]


def test_degree_bookkeeping():
    for R in enumerate_configurations(single_real(3)):
        assert R.degree == 3
        for reals, pairs in R.layout:
            assert sum(reals) + 2 * sum(pairs) == 3


def test_triple_root_recurrence():
    R = RootConfiguration([RealVar("r1", 3, 0)], [], [((3,), ())])
    _, c = associated_recurrence(R)
    rho = V("r1")
    assert c == [3 * rho, -3 * rho * rho, rho ** 3]


def test_real_plus_pair_recurrence():
    R = RootConfiguration([RealVar("r1", 1, 0)], [ComplexVar("x1", "y1", 1, 0)], [((1,), (1,))])
    _, c = associated_recurrence(R)
    assert c[0] == V("r1") + 2 * V("x1")
    assert c[2] == V("r1") * (V("x1") ** 2 + V("y1") ** 2)


def test_simple_root_recurrence():
    R = RootConfiguration([RealVar("r1", 1, 0)], [], [((1,), ())])
    assert associated_recurrence(R)[1] == [V("r1")]


def test_double_root_numerator():
    R = RootConfiguration([RealVar("r1", 2, 0), RealVar("r2", 1, 0)], [], [((2, 1), ())])
    val = eval_univariate_real(numerator_poly(R), "r1")
    r0, r1 = V("r1"), V("r2")
    assert val == V("u3") - (r0 + r1) * V("u2") + r0 * r1 * V("u1")


def test_domain_two_reals():
    R = RootConfiguration([RealVar("r1", 2, 0), RealVar("r2", 1, 0)], [], [((2, 1), ())])
    D = domain_system(R, single_real(3))
    assert D.bounds["r1"] == D.bounds["r2"] == NEAR_ONE.re
    assert (V("r1") - V("r2"), ">") in D.atoms


def test_domain_real_and_pair():
    R = RootConfiguration([RealVar("r1", 1, 0)], [ComplexVar("x1", "y1", 1, 0)], [((1,), (1,))])
    D = domain_system(R, single_real(3))
    assert D.bounds["x1"] == NEAR_ONE.re
    assert D.bounds["y1"] == Interval(0, EPS)
    assert (V("y1"), ">") in D.atoms


def test_domain_single_variable_is_box_only():
    R = RootConfiguration([RealVar("r1", 1, 0)], [], [((1,), ())])
    D = domain_system(R, single_real(1))
    assert D.atoms == [] and list(D.bounds) == ["r1"]


def test_json_roundtrip():
    for R in enumerate_configurations(single_real(3)):
        assert RootConfiguration.from_json(R.to_json()).to_json() == R.to_json()
