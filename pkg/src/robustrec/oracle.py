"""Brute-force ground truth for exact rational instances (tests only).

Needs the ``test`` extra: sympy for exact factorisation and root isolation,
mpmath for interval solves of the confluent Vandermonde system.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
import sympy
from mpmath import iv

X = sympy.Symbol("x")


class SingularSystem(ValueError):
    pass


def F(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, sympy.Rational):
        return Fraction(int(x.p), int(x.q))
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return Fraction(int(x.numerator), int(x.denominator))
    return Fraction(x)


def exact_terms(coeffs, inits, K: int):
    """u_1..u_K exactly."""
    c = [F(x) for x in coeffs]
    u = [F(x) for x in inits][:K]
    n = len(c)
    while len(u) < K:
        k = len(u)
        u.append(sum(c[i] * u[k - 1 - i] for i in range(n)))
    return u


def char_poly(coeffs) -> sympy.Poly:
    n = len(coeffs)
    expr = X ** n - sum(sympy.Rational(F(c).numerator, F(c).denominator) * X ** (n - i)
                        for i, c in enumerate(coeffs, start=1))
    return sympy.Poly(expr, X)


@dataclass
class OracleRoot:
    re: tuple   # (lo, hi) Fractions
    im: tuple
    mult: int
    real: bool
    exact: object = None  # sympy number when rational

    def contains(self, x, y=0) -> bool:
        return self.re[0] <= x <= self.re[1] and self.im[0] <= y <= self.im[1]

    @property
    def modulus_bounds(self):
        def mag(a, b):
            return max(abs(a), abs(b))

        def mig(a, b):
            return Fraction(0) if a <= 0 <= b else min(abs(a), abs(b))
        hi2 = mag(*self.re) ** 2 + mag(*self.im) ** 2
        lo2 = mig(*self.re) ** 2 + mig(*self.im) ** 2
        return lo2, hi2


def exact_roots(coeffs, bits: int = 256):
    """All characteristic roots with exact multiplicities and boxes of width <= 2^-bits."""
    P = char_poly(coeffs)
    eps = sympy.Rational(1, 2 ** bits)
    out = []
    _, factors = sympy.sqf_list(P)
    for fac, mult in factors:
        fac = sympy.Poly(fac, X)
        if fac.degree() == 1:
            a, b = fac.all_coeffs()
            r = -b / a
            fr = F(sympy.Rational(r))
            out.append(OracleRoot((fr, fr), (Fraction(0), Fraction(0)), mult, True, sympy.Rational(r)))
            continue
        real_ivs, cplx = fac.intervals(all=True, eps=eps)
        for (a, b), _ in real_ivs:
            exact = sympy.Rational(a) if a == b else None
            out.append(OracleRoot((F(a), F(b)), (Fraction(0), Fraction(0)), mult, True, exact))
        for (lo, hi), _ in cplx:
            lre, lim = sympy.re(lo), sympy.im(lo)
            hre, him = sympy.re(hi), sympy.im(hi)
            out.append(OracleRoot((F(lre), F(hre)), (F(lim), F(him)), mult, False))
    return out


def _ivq(x: Fraction):
    return iv.mpf(x.numerator) / x.denominator


def _ivq_range(lo: Fraction, hi: Fraction):
    a, b = _ivq(lo), _ivq(hi)
    return iv.mpf([a.a, b.b])


def _mid_abs(x):
    re, im = x.real, x.imag
    return abs(float(re.mid)) + abs(float(im.mid))


def _iv_solve(A, b):
    """Interval Gaussian elimination, partial pivoting on midpoint magnitude."""
    n = len(A)
    A = [row[:] for row in A]
    b = b[:]
    for j in range(n):
        piv = max(range(j, n), key=lambda i: _mid_abs(A[i][j]))
        A[j], A[piv] = A[piv], A[j]
        b[j], b[piv] = b[piv], b[j]
        if not _iv_is_zero_free(A[j][j]):
            raise SingularSystem("pivot interval contains 0")
        for i in range(j + 1, n):
            f = A[i][j] / A[j][j]
            for k in range(j, n):
                A[i][k] = A[i][k] - f * A[j][k]
            b[i] = b[i] - f * b[j]
    x = [None] * n
    for i in range(n - 1, -1, -1):
        acc = b[i]
        for k in range(i + 1, n):
            acc = acc - A[i][k] * x[k]
        x[i] = acc / A[i][i]
    return x


def iv_bounds(x):
    """(lo, hi) Fractions of the real part of an mpmath interval (real or complex)."""
    re = x.real if hasattr(x, "imag") else x
    a, b = re._mpi_
    return _mpf_fraction(a), _mpf_fraction(b)


def _mpf_fraction(t) -> Fraction:
    sign, man, exp, _ = t
    v = Fraction(int(man) * 2 ** int(exp)) if exp >= 0 else Fraction(int(man), 2 ** int(-exp))
    return -v if sign else v


def certified_interpolate(roots, inits, prec: int = 600):
    """Interval enclosures of g_{mu,l} with u_k = sum g_{mu,l} k^l mu^k, per root."""
    n = sum(r.mult for r in roots)
    if n != len(inits):
        raise SingularSystem("multiplicities do not match the order")
    old = iv.prec
    iv.prec = prec
    try:
        mus = [iv.mpc(_ivq_range(*r.re), _ivq_range(*r.im)) for r in roots]
        cols = [(i, l) for i, r in enumerate(roots) for l in range(r.mult)]
        A = iv.matrix(n, n)
        for k in range(1, n + 1):
            for c, (i, l) in enumerate(cols):
                A[k - 1, c] = (mus[i] ** k) * (k ** l)
        b = [iv.mpf(F(u).numerator) / F(u).denominator for u in inits]
        sol = _iv_solve([[A[i, j] for j in range(n)] for i in range(n)], b)
        out = [[] for _ in roots]
        for c, (i, _) in enumerate(cols):
            out[i].append(sol[c])
        return out
    finally:
        iv.prec = old


def _sym(v):
    if isinstance(v, Fraction) or (hasattr(v, "numerator") and not isinstance(v, sympy.Basic)):
        f = F(v)
        return sympy.Rational(f.numerator, f.denominator)
    return sympy.sympify(v)


def exact_interpolate(roots, inits):
    """Exact solve for roots given as {sympy number: multiplicity} (rational or Gaussian)."""
    items = list(roots.items()) if isinstance(roots, dict) else list(roots)
    n = sum(m for _, m in items)
    if n != len(inits):
        raise SingularSystem("multiplicities do not match the order")
    vals = [_sym(v) for v, _ in items]
    if len(set(vals)) != len(vals):
        raise SingularSystem("repeated root")
    cols = [(i, l) for i, (_, m) in enumerate(items) for l in range(m)]
    A = sympy.Matrix(n, n, lambda k, c: vals[cols[c][0]] ** (k + 1) * (k + 1) ** cols[c][1])
    b = sympy.Matrix([_sym(u) for u in inits])
    if A.det() == 0:
        raise SingularSystem("singular confluent system")
    sol = A.LUsolve(b)
    out = [[] for _ in items]
    for c, (i, _) in enumerate(cols):
        out[i].append(sympy.simplify(sol[c]))
    return out


def _iv_is_zero_free(x) -> bool:
    if hasattr(x, "imag"):
        re, im = x.real, x.imag
        return not (re.a <= 0 <= re.b and im.a <= 0 <= im.b)
    return not (x.a <= 0 <= x.b)


def ultimate_positivity(coeffs, inits, bits: int = 256):
    """True/False when the dominant part decides ultimate positivity, None if ambiguous.

    Ambiguous: a coefficient that cannot be separated from zero, or a
    modulus tie between a positive real dominant root and another root.
    """
    roots = exact_roots(coeffs, bits)
    try:
        g = certified_interpolate(roots, inits, prec=2 * bits + 88)
    except SingularSystem:
        return None
    live = []
    for r, gs in zip(roots, g):
        nz = [l for l, x in enumerate(gs) if _iv_is_zero_free(x)]
        undecided = [l for l, x in enumerate(gs) if not _iv_is_zero_free(x)]
        if not nz:
            if undecided:
                return None  # cannot tell whether this root contributes
            continue
        top = max(nz)
        if any(l > top for l in undecided):
            return None
        live.append((r, top, gs[top]))
    if not live:
        return True  # the sequence is identically zero
    lo_hi = [(r.modulus_bounds, r, d, lead) for r, d, lead in live]
    best_lo = max(b[0][0] for b in lo_hi)
    # roots that might attain the maximal modulus
    cands = [b for b in lo_hi if b[0][1] >= best_lo]
    if len(cands) == 1:
        (_, r, d, lead) = cands[0]
        if r.real and r.re[0] > 0:
            return bool(lead.real.a > 0)
        return False
    # several roots share (or may share) the top modulus
    if any(r.real and r.re[1] >= 0 for _, r, _, _ in cands):
        return None
    return False


def mp_value(x) -> float:
    return float(mpmath.mpf(x.a + x.b) / 2)
