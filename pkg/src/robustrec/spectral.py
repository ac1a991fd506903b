"""Dominant roots, exponential-polynomial coefficients, and tail bounds.

The coefficient of a root mu of multiplicity m is read off from a basis of
C^n made of the derivative Jordan chain of the companion eigenvector
``(mu^{n-1}, ..., mu, 1)`` and n-m columns of ``(A - mu I)^m``.  The last
row of that basis is ``(1, 0, ..., 0 | *)`` on the chain block, so only the
solve ``T w = (u_n, ..., u_1)`` is needed.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial

import gmpy2
from gmpy2 import mpq

from .linrec import LinRec, char_poly, term_intervals
from .numeric import ComplexBox, DivisorStraddlesZero, Interval, Q, round_out
from .poly import (Clustering, IntervalPoly, compute_clustering, eval_real,
                   real_root_intervals)

__all__ = [
    "DominantRootCertificate", "dominant_simple_positive_root", "coefficient_of_root",
    "largest_simple_real_root", "tail_index", "dominant_from_clustering", "tail_index_general", "clustering_at",
    "modulus_upper", "sqrt_bounds", "refine_simple_real_root", "coeff_poly_at",
]


def sqrt_bounds(x, bits: int = 64):
    """Dyadic (lo, hi) with lo <= sqrt(x) <= hi, x >= 0."""
    x = Q(x)
    if x <= 0:
        return mpq(0), mpq(0)
    scale = 1 << (2 * bits)
    num = x * scale
    fl = int(gmpy2.f_div(num.numerator, num.denominator))
    lo = int(gmpy2.isqrt(fl))
    hi = lo if lo * lo * num.denominator == num.numerator else lo + 1
    return mpq(lo, 1 << bits), mpq(hi, 1 << bits)


def modulus_upper(box: ComplexBox, bits: int = 64) -> mpq:
    m = box.re.mag() ** 2 + box.im.mag() ** 2
    return sqrt_bounds(m, bits)[1]


def modulus_lower(box: ComplexBox, bits: int = 64) -> mpq:
    m = box.re.mig() ** 2 + box.im.mig() ** 2
    return sqrt_bounds(m, bits)[0]


def coeff_precision(r: LinRec, p: int) -> int:
    # multiple roots move like (coefficient error)^(1/m)
    return r.order * (p + 2) + 8


def clustering_at(r: LinRec, p: int, fuel: int = 200000):
    """(Clustering | None, IntervalPoly) at box width 2^-p."""
    P = char_poly(r, coeff_precision(r, p))
    # fixed-interval inputs bound the attainable box width from below
    width = None if r.has_fixed_inputs else p
    return compute_clustering(P, p, fuel, width), P


# -- real roots --------------------------------------------------------------------

def largest_simple_real_root(P: IntervalPoly, eps, fuel: int = 100000):
    """Enclosure of width <= eps of the largest real root if it is simple, else None.

    The answer is certified: P changes sign strictly across the interval and
    P' excludes 0 on it, for every consistent polynomial.
    """
    eps = Q(eps)
    dP = P.derivative()
    cur = eps
    while fuel > 0:
        ivs = real_root_intervals(P, cur, fuel)
        fuel -= 4 * P.degree * max(1, int(gmpy2.ceil(gmpy2.log2(1 / cur))))
        if ivs is None or not ivs:
            return None
        top = ivs[-1]
        lo_v = eval_real(P, Interval(top.lo))
        hi_v = eval_real(P, Interval(top.hi))
        s0, s1 = lo_v.sign(), hi_v.sign()
        if (top.width <= eps and s0 is not None and s1 is not None and s0 * s1 < 0
                and not eval_real(dP, top).contains_zero()):
            return top
        cur /= 2
    return None


def refine_simple_real_root(P: IntervalPoly, iv: Interval, eps, max_steps: int = 4096):
    """Bisect a certified sign-change interval down to width <= eps (or as far as P allows)."""
    eps = Q(eps)
    s_lo = eval_real(P, Interval(iv.lo)).sign()
    s_hi = eval_real(P, Interval(iv.hi)).sign()
    if s_lo is None or s_hi is None or s_lo * s_hi >= 0:
        return iv
    lo, hi = iv.lo, iv.hi
    steps = 0
    while hi - lo > eps and steps < max_steps:
        steps += 1
        m = (lo + hi) / 2
        s = eval_real(P, Interval(m)).sign()
        if s is None:
            # sign unresolved at this coefficient width: shrink from both sides
            a, b = (lo + m) / 2, (m + hi) / 2
            sa = eval_real(P, Interval(a)).sign()
            sb = eval_real(P, Interval(b)).sign()
            moved = False
            if sa == s_lo:
                lo, moved = a, True
            if sb == s_hi:
                hi, moved = b, True
            if not moved:
                break
        elif s == s_lo:
            lo = m
        else:
            hi = m
    return Interval(lo, hi)


# -- coefficient extraction -------------------------------------------------------------

_ZERO = Interval(0)
_CZERO = ComplexBox.point(0)
_CONE = ComplexBox.point(1)


def _cbox(iv: Interval) -> ComplexBox:
    return ComplexBox._raw(iv, _ZERO)


def _mid_mag(b: ComplexBox):
    return b.re.mid ** 2 + b.im.mid ** 2


def _chain(mu: ComplexBox, n: int, m: int):
    """Columns v_1..v_m: v_j = e^{(j-1)}(mu)/(j-1)!, e(x) = (x^{n-1}, ..., x, 1)."""
    powers = [_CONE]
    for _ in range(n):
        powers.append(powers[-1] * mu)
    cols = []
    for j in range(m):
        col = []
        for i in range(n):
            e = n - 1 - i
            col.append(powers[e - j] * comb(e, j) if e >= j else _CZERO)
        cols.append(col)
    return cols


def _matmul(A, B):
    n = len(A)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = A[i][0] * B[0][j]
            for k in range(1, n):
                acc = acc + A[i][k] * B[k][j]
            row.append(acc)
        out.append(row)
    return out


def _rnd(b: ComplexBox, bits: int) -> ComplexBox:
    return ComplexBox._raw(round_out(b.re, bits), round_out(b.im, bits))


def _select_and_solve(chain_cols, cand_cols, rhs, bits: int = 256):
    """Pick n-m candidate columns completing the chain to a basis and solve for rhs.

    Interval Gaussian elimination; chain columns are pivoted first, then full
    pivoting over the remaining candidate columns by midpoint magnitude.  A
    pivot is accepted only if its enclosure excludes 0.  Returns the chain
    coordinates of rhs, or None.
    """
    n = len(rhs)
    m = len(chain_cols)
    cols = chain_cols + cand_cols
    M = [[cols[c][r] for c in range(len(cols))] + [rhs[r]] for r in range(n)]
    rhs_col = len(cols)
    chosen = []
    used = set()
    for s in range(n):
        allowed = [s] if s < m else [c for c in range(m, len(cols)) if c not in used]
        best = None
        for r in range(s, n):
            for c in allowed:
                mm = _mid_mag(M[r][c])
                if best is None or mm > best[0]:
                    best = (mm, r, c)
        _, pr, pc = best
        piv = M[pr][pc]
        if piv.modulus_sq().lo <= 0:
            return None
        M[s], M[pr] = M[pr], M[s]
        chosen.append(pc)
        used.add(pc)
        for r in range(s + 1, n):
            f = _rnd(M[r][pc] / piv, bits)
            if f.re.is_point and f.im.is_point and f.re.lo == 0 and f.im.lo == 0:
                continue
            row_s = M[s]
            M[r] = [M[r][c] - f * row_s[c] if c != pc else _CZERO for c in range(len(cols) + 1)]
    w = [None] * n
    for s in range(n - 1, -1, -1):
        acc = M[s][rhs_col]
        for t in range(s + 1, n):
            acc = acc - M[s][chosen[t]] * w[t]
        w[s] = _rnd(acc / M[s][chosen[s]], bits)
    return w[:m]


def _binom_poly(d: int):
    """Coefficients (in k, ascending) of C(k-1, d) = (k-1)(k-2)...(k-d)/d!."""
    poly = [mpq(1)]
    for i in range(1, d + 1):
        nxt = [mpq(0)] * (len(poly) + 1)
        for j, a in enumerate(poly):
            nxt[j + 1] += a
            nxt[j] -= a * i
        poly = nxt
    f = factorial(d)
    return [a / f for a in poly]


def _coeffs_once(r: LinRec, mu: ComplexBox, m: int, q: int):
    n = r.order
    cs = [c.query(q) for c in r.coeffs]
    us = [u.query(q) for u in r.inits]
    A = [[_cbox(c) for c in cs]]
    for i in range(1, n):
        A.append([_CONE if j == i - 1 else _CZERO for j in range(n)])
    shifted = [[A[i][j] - mu if i == j else A[i][j] for j in range(n)] for i in range(n)]
    power = shifted
    for _ in range(m - 1):
        power = _matmul(power, shifted)
    cand = [[power[i][j] for i in range(n)] for j in range(n)]
    rhs = [_cbox(u) for u in reversed(us)]
    try:
        w = _select_and_solve(_chain(mu, n, m), cand, rhs, q + 16)
        if w is None:
            return None
        inv_mu = _rnd(_CONE / mu, q + 16)
    except DivisorStraddlesZero:
        return None
    out = [_CZERO] * m
    scale = inv_mu
    for d in range(m):
        term = w[d] * scale
        for j, b in enumerate(_binom_poly(d)):
            if b:
                out[j] = out[j] + term * b
        scale = scale * inv_mu
    return out


def _refine_mu(r: LinRec, mu: ComplexBox, m: int, level: int, fuel: int):
    """Shrink an isolating box for a root of multiplicity m using a finer clustering."""
    if m == 1 and mu.im.is_point and mu.im.lo == 0:
        P = char_poly(r, level + 8)
        iv = refine_simple_real_root(P, mu.re, mpq(1, 1 << level))
        if iv.width < mu.re.width:
            return ComplexBox._raw(iv, _ZERO)
    C, _ = clustering_at(r, level, fuel)
    if C is None:
        return None
    hits = [(b, k) for b, k in C.clusters if b.intersects(mu)]
    if len(hits) != 1 or hits[0][1] != m:
        return None
    b = hits[0][0]
    nb = ComplexBox._raw(b.re.intersect(mu.re), b.im.intersect(mu.im))
    if mu.im.is_point:
        nb = ComplexBox._raw(nb.re, mu.im)
    return nb


def coefficient_of_root(r: LinRec, mu_box: ComplexBox, m: int, p: int, fuel: int = 200000):
    """Enclosures [g_0, ..., g_{m-1}] with g(k) = sum g_j k^j the coefficient of mu^k.

    ``mu_box`` must isolate a single root of multiplicity m for every
    consistent instance; pass a zero-width imaginary part for a real root.
    Returns None when the elimination cannot be certified or the requested
    width 2^-p is out of reach within the fuel.
    """
    if mu_box.contains_zero():
        return None
    target = mpq(1, 1 << p)
    mu = mu_box
    q = p + 8
    level = max(p, 2)
    best = None
    for _ in range(64):
        out = _coeffs_once(r, mu, m, q)
        if out is not None:
            best = out
            if max(b.width for b in out) <= target:
                return out
        level += 4
        q += 8
        if r.has_fixed_inputs:
            # clusterings cannot get finer than the input intervals allow
            if m != 1 or not mu.im.is_point:
                return best
            P = char_poly(r, level)
            iv = refine_simple_real_root(P, mu.re, mpq(1, 1 << level))
            if iv.width >= mu.re.width:
                return best
            mu = ComplexBox._raw(iv, _ZERO)
            continue
        nxt = _refine_mu(r, mu, m, level, fuel)
        if nxt is None:
            return best
        mu = nxt
    return best


def coeff_poly_at(coeffs, k: int) -> ComplexBox:
    acc = _CZERO
    for j, g in enumerate(coeffs):
        acc = acc + g * mpq(k) ** j
    return acc


# -- dominant root ---------------------------------------------------------------

@dataclass
class DominantRootCertificate:
    root: Interval
    coeff: Interval
    separation: mpq  # |lambda| < separation < root.lo for every other root
    clustering: Clustering
    level: int

    def to_json(self):
        from .numeric import qstr
        return {"root": self.root.to_json(), "coeff": self.coeff.to_json(),
                "separation": qstr(self.separation), "clustering": self.clustering.to_json(),
                "level": self.level}

    @classmethod
    def from_json(cls, d):
        return cls(Interval.from_json(d["root"]), Interval.from_json(d["coeff"]),
                   Q(d["separation"]), Clustering.from_json(d["clustering"]), int(d["level"]))


def _separation(C: Clustering, idx: int, lower: mpq):
    """A rational M with every other cluster's modulus < M < lower, or None."""
    others = [modulus_upper(b) for i, (b, _) in enumerate(C.clusters) if i != idx]
    top = max(others, default=mpq(0))
    if top >= lower:
        return None
    return (top + lower) / 2


def dominant_from_clustering(r: LinRec, p: int, C, P, fuel: int = 200000,
                             coeff_width: int | None = None):
    """Certify a unique simple positive dominant root from a clustering, or None."""
    if C is None or C.real_count == 0:
        return None
    box, count = C.clusters[0]
    if count != 1 or box.re.lo <= 0:
        return None
    root = box.re
    M = _separation(C, 0, root.lo)
    if M is None:
        return None
    cw = p if coeff_width is None else coeff_width
    root = refine_simple_real_root(P, root, mpq(1, 1 << (cw + 4)))
    coeffs = coefficient_of_root(r, ComplexBox._raw(root, _ZERO), 1, cw, fuel)
    if coeffs is None:
        return None
    return DominantRootCertificate(root, coeffs[0].re, M, C, p)


def dominant_at_level(r: LinRec, p: int, fuel: int = 200000, coeff_width: int | None = None):
    C, P = clustering_at(r, p, fuel)
    return dominant_from_clustering(r, p, C, P, fuel, coeff_width)


def dominant_simple_positive_root(r: LinRec, fuel: int = 200000, p_max: int = 24,
                                  coeff_width: int | None = None):
    """Certificate for a unique simple positive dominant root, or None within the fuel."""
    for p in range(2, p_max + 1):
        cert = dominant_at_level(r, p, fuel, coeff_width)
        if cert is not None:
            return cert
    return None


# -- tail bound ------------------------------------------------------------------------

def _tail_power(ratio: mpq, d: int, limit: int = 1 << 16):
    """Smallest p with d * s (1 + s)^(d-1) < 1/2 where s = ratio^p."""
    s = ratio
    for p in range(1, limit):
        if d * s * (1 + s) ** (d - 1) < mpq(1, 2):
            return p
        s *= ratio
    return None


def tail_index_general(r: LinRec, scale: Interval, dominant, lower: mpq, d: int, M: mpq,
                       prec: int = 64, fuel: int = 1 << 20):
    """Index N with |u_k/scale^k - dominant(k)| < lower for every k >= N.

    ``dominant(k)`` returns an enclosure of the dominant part divided by
    scale^k; every other root (d of them with multiplicity) has modulus < M.
    """
    if d == 0:
        return 1
    if lower <= 0 or scale.lo <= 0 or M >= scale.lo:
        return None
    p = _tail_power(M / scale.lo, d)
    if p is None:
        return None
    K = p * (d + 1)
    terms, _ = term_intervals(r, K, prec)
    N = 0
    for q in range(p):
        window = mpq(0)
        for j in range(1, d + 1):
            k = p * j + q
            v = terms[k - 1] / (scale ** k) - dominant(k)
            window = max(window, v.mag())
        # |v_{d+k'}| <= 2^{-ceil(k'/d)} * window
        halvings = 0
        while window >= lower:
            window /= 2
            halvings += 1
            if halvings > fuel:
                return None
        kq = max(0, (halvings - 1) * d + 1) if halvings else 0
        N = max(N, p * (d + kq) + q)
    return max(N, 1)


def tail_index(r: LinRec, cert: DominantRootCertificate, prec: int = 64):
    """Index N with |a| rho^k > |u_k - a rho^k| for all k >= N."""
    if cert.coeff.contains_zero():
        return None
    a = cert.coeff
    return tail_index_general(r, cert.root, lambda k: a, a.mig(), r.order - 1,
                              cert.separation, prec)

