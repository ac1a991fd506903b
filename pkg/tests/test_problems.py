import copy
import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import rand_instance
from robustrec.linrec import LinRec
from robustrec.numeric import Interval, Q
from robustrec.oracle import exact_terms
from robustrec.problems import Fuel, Verdict, box_trichotomy, check_certificate, decide
from robustrec.realname import pi_multiple

ONES = LinRec.exact([1], [1])
FIB = LinRec.exact([1, 1], [1, 1])
DOUBLE_ONE = LinRec.exact([2, -1], [1, 1])
PLUS_MINUS_TWO = LinRec.exact([0, 4], [1, 1])
SMALL = Fuel(p_max=6, max_subdivisions=5000)


def pi_triple():
    return LinRec([3, -3, 1], [pi_multiple(1), pi_multiple(2), pi_multiple(1)])


@pytest.mark.parametrize("problem,r,answer", [
    ("positivity", ONES, 1),
    ("positivity", LinRec.exact([1], [-1]), 0),
    ("upp", FIB, 1),
    ("upp", ONES, 1),
    ("skolem", ONES, 0),
    ("skolem", PLUS_MINUS_TWO, 0),
])
def test_examples_halt_with_valid_certificates(problem, r, answer):
    v = decide(problem, r)
    assert v.answer == answer
    ok, reason = check_certificate(r, v)
    assert ok, reason


def test_negative_positivity_found_at_first_term():
    v = decide("positivity", LinRec.exact([1], [-1]))
    assert v.certificate["k"] == 1


def test_skolem_two_root_test():
    v = decide("skolem", PLUS_MINUS_TWO)
    assert v.certificate["test"] == "two-root"


@pytest.mark.parametrize("problem", ["positivity", "upp", "skolem"])
def test_double_root_instance_never_halts(problem):
    assert decide(problem, DOUBLE_ONE, SMALL).answer is None


def test_pi_triple_upp_negative():
    v = decide("upp", pi_triple(), Fuel(p_max=8))
    assert v.answer == 0 and v.certificate["kind"] == "upp-negative"
    assert len(v.certificate["configurations"]) == 5
    ok, reason = check_certificate(pi_triple(), v)
    assert ok, reason


def test_unknown_problem():
    with pytest.raises(ValueError):
        decide("halting", ONES)


def test_verdict_json_roundtrip():
    v = decide("positivity", FIB)
    assert Verdict.from_json(v.to_json()).to_json() == v.to_json()


def test_tampered_tail_index_rejected():
    v = decide("positivity", FIB)
    bad = copy.deepcopy(v)
    assert v.certificate["N"] > 1
    bad.certificate["N"] = 1
    assert not check_certificate(FIB, bad)[0]


def test_certificate_for_other_instance_rejected():
    # u = -1, 2, 1, 3, ... shares Fibonacci's roots but its prefix fails
    other = LinRec.exact([1, 1], [-1, 2])
    v = decide("positivity", FIB)
    assert not check_certificate(other, v)[0]


def test_clustering_order_violation_rejected():
    v = decide("positivity", FIB)
    bad = copy.deepcopy(v)
    cl = bad.certificate["dominant"]["clustering"]
    cl["clusters"] = cl["clusters"][::-1]
    ok, reason = check_certificate(FIB, bad)
    assert not ok and "clustering" in reason


def test_refutation_replay_rejects_missing_configuration():
    v = decide("upp", pi_triple(), Fuel(p_max=8))
    bad = copy.deepcopy(v)
    bad.certificate["configurations"] = bad.certificate["configurations"][1:]
    assert not check_certificate(pi_triple(), bad)[0]


def test_trichotomy_examples():
    band = Interval(Q("0.9"), Q("1.1"))
    assert box_trichotomy("positivity", [band, band]) == 1
    assert box_trichotomy("positivity", [band, Interval(Q("-0.1"), Q("0.1"))]) == -1
    assert box_trichotomy("skolem", [band, band]) == 0


def test_upp_trace_shows_both_recognizers_each_level():
    v = decide("upp", DOUBLE_ONE, SMALL)
    levels = [t["level"] for t in v.trace]
    assert levels == list(range(SMALL.p_min, SMALL.p_max + 1))
    assert all("positive" in t and "negative" in t for t in v.trace)


def test_positivity_trace_interleaves_and_grows():
    v = decide("positivity", DOUBLE_ONE, SMALL)
    assert all("positive" in t and "negative" in t for t in v.trace)
    budgets = [int(t["negative"].rsplit("=", 1)[1]) for t in v.trace]
    assert budgets == sorted(budgets) and budgets[-1] > budgets[0]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_fuel_monotonicity(seed):
    c, u = rand_instance(random.Random(seed))
    r = LinRec.exact(c, u)
    for problem in ("positivity", "upp", "skolem"):
        small = decide(problem, r, Fuel(p_max=3, k_max=100, max_subdivisions=2000))
        if small.halted:
            big = decide(problem, r, Fuel(p_max=5, k_max=300, max_subdivisions=8000))
            assert big.answer == small.answer


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_skolem_never_positive_and_sound(seed):
    c, u = rand_instance(random.Random(seed))
    v = decide("skolem", LinRec.exact(c, u), Fuel(p_max=4, max_subdivisions=2000))
    assert v.answer != 1
    if v.answer == 0:
        assert all(t != 0 for t in exact_terms(c, u, 300))
