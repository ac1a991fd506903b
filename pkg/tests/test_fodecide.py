import os
import random
import shutil
import stat

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from helpers import rand_rational, random_configuration, random_domain_point, sympy_roots
from robustrec.configs import RealVar, RootConfiguration, enumerate_configurations
from robustrec.fodecide import (Atom, ConstraintSystem, MalformedSolverOutput, SolverNotFound,
                                build_negated_sentence, emit_smtlib, external_solver_check,
                                lead_sign_poly, refute_by_subdivision)
from robustrec.numeric import ComplexBox, Interval, Q
from robustrec.oracle import exact_interpolate
from robustrec.poly import Clustering
from robustrec.realname import pi_multiple
from robustrec.symbolic import SymbolicPoly

Z3 = shutil.which("z3") or ("/usr/local/bin/z3" if os.path.exists("/usr/local/bin/z3") else None)
needs_z3 = pytest.mark.skipif(Z3 is None, reason="no SMT solver available")
X = SymbolicPoly.var("x")


def toy(lo, hi, poly, rel):
    return ConstraintSystem(["x"], {"x": Interval(Q(lo), Q(hi))}, [Atom(poly, rel)])


def pi_triple_double_simple(eps_bits=6):
    eps = Q(1) / (1 << eps_bits)
    C = Clustering([(ComplexBox(Interval(1 - eps, 1 + eps), Interval(-eps, eps)), 3)], 1, 1)
    R = RootConfiguration([RealVar("r1", 2, 0), RealVar("r2", 1, 0)], [], [((2, 1), ())])
    init = [pi_multiple(k).query(eps_bits + 2).inflate(eps / 2) for k in (1, 2, 1)]
    return build_negated_sentence(R, C, init, "cramer")


def test_toy_refutations():
    assert refute_by_subdivision(toy(0, 1, X * X, "<")).unsat
    assert not refute_by_subdivision(toy(-1, 1, X * X, ">="), fuel=5000).unsat


def test_order_one_sign_forced():
    C = Clustering([(ComplexBox(Interval(Q("0.9"), Q("1.1")), Interval(Q("-0.1"), Q("0.1"))), 1)], 1, 1)
    R = enumerate_configurations(C)[0]
    S = build_negated_sentence(R, C, [Interval(Q("-1.01"), Q("-0.99"))])
    assert refute_by_subdivision(S).unsat
    S = build_negated_sentence(R, C, [Interval(Q("0.99"), Q("1.01"))])
    assert not refute_by_subdivision(S, fuel=2000).unsat


def test_pi_triple_double_simple_refuted():
    assert refute_by_subdivision(pi_triple_double_simple(), fuel=200000).unsat


def test_all_real_negative_side_without_reals():
    eps = Q("1/64")
    up = ComplexBox(Interval(-eps, eps), Interval(1 - eps, 1 + eps))
    C = Clustering([(up, 1), (up.conj(), 1)], 0, 1)
    R = enumerate_configurations(C)[0]
    S = build_negated_sentence(R, C, [Interval(1), Interval(1)])
    # only "the pair's coefficient vanishes" remains, which the inits rule out
    assert S.clauses == [] and refute_by_subdivision(S).unsat


def test_existential_mode_is_unbounded():
    R = RootConfiguration([RealVar("r1", 1, 0)], [], [((1,), ())])
    C = Clustering([(ComplexBox(Interval(1, 2), Interval(-1, 1)), 1)], 1, 1)
    S = build_negated_sentence(R, C, [Interval(-2, -1)], "existentialCoeffs")
    assert refute_by_subdivision(S).status == "unknown"


def test_determinant_and_residue_lead_atoms_agree_in_sign():
    eps = Q("1/8")
    C = Clustering([(ComplexBox(Interval(1 - eps, 1 + eps), Interval(-eps, eps)), 3)], 1, 1)
    rng = random.Random(3)
    for R in enumerate_configurations(C):
        lead = {m: build_negated_sentence(R, C, [Interval(0)] * 3, m).atoms[-1]
                for m in ("cramer", "determinant")}
        for _ in range(20):
            pt = random_domain_point(rng, R)
            # keep the largest real root positive, as the domain boxes do
            shift = 1 - min(pt[v.name] for v in R.real_vars) if R.real_vars else 0
            for v in R.real_vars:
                pt[v.name] += shift
            for j in (1, 2, 3):
                pt[f"u{j}"] = rand_rational(rng)
            qpt = {k: Q(v) for k, v in pt.items()}
            a, b = (lead[m].poly.eval_exact(qpt) for m in ("cramer", "determinant"))
            assert (a > 0) == (b > 0) and (a == 0) == (b == 0)


def test_json_roundtrip_and_variables():
    S = pi_triple_double_simple()
    S.check_variables()
    again = ConstraintSystem.from_json(S.to_json())
    assert emit_smtlib(again) == emit_smtlib(S)


def test_smtlib_is_deterministic():
    a, b = emit_smtlib(pi_triple_double_simple()), emit_smtlib(pi_triple_double_simple())
    assert a == b and a.startswith("(set-logic QF_NRA)") and a.rstrip().endswith("(check-sat)")


@needs_z3
def test_z3_examples():
    assert external_solver_check(emit_smtlib(toy(0, 1, X * X, "<")), Z3) == "unsat"
    assert external_solver_check(emit_smtlib(toy(0, 2, X * X - 1, ">")), Z3) == "sat"
    assert external_solver_check(emit_smtlib(pi_triple_double_simple()), Z3) == "unsat"


@needs_z3
def test_timeout_zero_is_unknown():
    assert external_solver_check(emit_smtlib(toy(0, 1, X * X, "<")), Z3, timeout=0) == "unknown"


def test_solver_errors(tmp_path):
    with pytest.raises(SolverNotFound):
        external_solver_check("(check-sat)\n", str(tmp_path / "missing"))
    fake = tmp_path / "fake-solver"
    fake.write_text("#!/bin/sh\necho hello\n")
    fake.chmod(fake.stat().st_mode | stat.S_IEXEC)
    with pytest.raises(MalformedSolverOutput):
        external_solver_check("(check-sat)\n", str(fake))


# -- properties ------------------------------------------------------------------------

rels = st.sampled_from([">", ">=", "<", "<=", "="])
small = st.integers(-3, 3)
atoms = st.builds(lambda a, b, c, rel: Atom(Q(a) * X * X + Q(b) * X + Q(c), rel),
                  small, small, small, rels)


@settings(max_examples=80, deadline=None)
@given(st.lists(atoms, max_size=2),
       st.lists(st.lists(st.lists(atoms, min_size=1, max_size=2), min_size=1, max_size=3),
                max_size=2),
       st.fractions(min_value=-2, max_value=2, max_denominator=16))
def test_dnf_matches_cnf_of_terms(top, clauses, x):
    S = ConstraintSystem(["x"], {"x": Interval(-2, 2)}, top, clauses)
    pt = {"x": Q(x)}
    via_dnf = any(all(a.holds(a.poly.eval_exact(pt)) for a in branch) for branch in S.to_dnf())
    assert S.satisfied_by(pt) == via_dnf


@settings(max_examples=60, deadline=None)
@given(st.lists(atoms, min_size=1, max_size=3), st.integers(0, 10 ** 6))
def test_refutation_is_sound(top, seed):
    S = ConstraintSystem(["x"], {"x": Interval(-2, 2)}, top)
    if refute_by_subdivision(S, fuel=3000).unsat:
        rng = random.Random(seed)
        for _ in range(50):
            assert not S.satisfied_by({"x": Q(rng.randint(-256, 256)) / 128})
        # also the integer and half-integer points, where polynomial roots sit
        for k in range(-8, 9):
            assert not S.satisfied_by({"x": Q(k) / 4})


_LEAD_CACHE = {}


def lead_for(R):
    key = repr(R.to_json())
    if key not in _LEAD_CACHE:
        _LEAD_CACHE[key] = lead_sign_poly(R)
    return _LEAD_CACHE[key]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_cramer_sign_matches_exact_interpolation(seed):
    rng = random.Random(seed)
    R = random_configuration(rng, max_degree=3)
    pt = random_domain_point(rng, R)
    us = [rand_rational(rng) for _ in range(R.degree)]
    for j, u in enumerate(us, start=1):
        pt[f"u{j}"] = u
    val = lead_for(R).eval_exact({k: Q(v) for k, v in pt.items()})
    g = exact_interpolate(sympy_roots(R, pt), us)
    lead = sympy.re(sympy.expand(g[0][R.real_vars[0].mult - 1]))
    assert (val > 0) == (lead > 0) and (val == 0) == (lead == 0)
