from fractions import Fraction

from hypothesis import given, settings, strategies as st

from robustrec.numeric import Interval, Q
from robustrec.symbolic import ComplexPoly, SymbolicPoly

x, y = SymbolicPoly.var("x"), SymbolicPoly.var("y")
small = st.fractions(min_value=-3, max_value=3, max_denominator=8)


def test_arithmetic_and_diff():
    p = (x + 1) ** 2 - x * x
    assert p == 2 * x + 1
    assert ((x ** 3) * y).diff("x") == 3 * x * x * y
    assert (x * y + y).subs({"y": x}) == x * x + x


def test_complex_conj_norm():
    z = ComplexPoly(x, y)
    assert (z * z.conj()).re == z.norm_sq() == x * x + y * y
    assert (z * z.conj()).im.is_zero()


def test_json_and_smt():
    p = Q("1/2") * x * y - 3
    assert SymbolicPoly.from_json(p.to_json()) == p
    assert p.to_smt() == "(+ (- 3) (* (/ 1 2) x y))"


polys = st.lists(st.tuples(small, st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=5).map(
    lambda ts: sum((Q(c) * x ** a * y ** b for c, a, b in ts), SymbolicPoly()))


@settings(max_examples=60, deadline=None)
@given(polys, small, small, st.fractions(min_value=0, max_value=1, max_denominator=8),
       st.fractions(min_value=0, max_value=1, max_denominator=8))
def test_interval_evaluations_enclose(p, a, b, ta, tb):
    box = {"x": Interval(Q(a), Q(a) + 1), "y": Interval(Q(b), Q(b) + Q("1/2"))}
    pt = {"x": Q(a) + Q(ta), "y": Q(b) + Q(tb) / 2}
    v = p.eval_exact(pt)
    assert p.eval_interval(box).contains(v)
    assert p.eval_centered(box).contains(v)


@settings(max_examples=60, deadline=None)
@given(polys, polys, small, small)
def test_ring_homomorphism(p, q, a, b):
    pt = {"x": Q(a), "y": Q(b)}
    assert (p * q).eval_exact(pt) == p.eval_exact(pt) * q.eval_exact(pt)
    assert (p - q).eval_exact(pt) == p.eval_exact(pt) - q.eval_exact(pt)


def test_fraction_coefficients_accepted():
    assert SymbolicPoly.const(Fraction(1, 3)).eval_exact({}) == Q("1/3")
