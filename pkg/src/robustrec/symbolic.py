"""Sparse multivariate polynomials with rational coefficients."""
from __future__ import annotations

from gmpy2 import mpq

from .numeric import Interval, Q, qstr


def _mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


class SymbolicPoly:
    """Canonical sparse form: {monomial: coefficient}, monomial = sorted ((var, exp), ...)."""

    __slots__ = ("terms", "_grad")

    def __init__(self, terms=None):
        self.terms = {m: c for m, c in (terms or {}).items() if c != 0}
        self._grad = None

    @classmethod
    def const(cls, c):
        return cls({(): Q(c)})

    @classmethod
    def var(cls, name: str):
        return cls({((name, 1),): mpq(1)})

    @staticmethod
    def _lift(x):
        return x if isinstance(x, SymbolicPoly) else SymbolicPoly.const(x)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def variables(self):
        return sorted({v for m in self.terms for v, _ in m})

    @property
    def degree(self) -> int:
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    def __add__(self, other):
        other = self._lift(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return SymbolicPoly(t)

    __radd__ = __add__

    def __neg__(self):
        return SymbolicPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        t: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                t[m] = t.get(m, 0) + c1 * c2
        return SymbolicPoly(t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = SymbolicPoly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        return isinstance(other, SymbolicPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def diff(self, var: str) -> "SymbolicPoly":
        t: dict = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(var, 0)
            if not e:
                continue
            if e == 1:
                del d[var]
            else:
                d[var] = e - 1
            mm = tuple(sorted(d.items()))
            t[mm] = t.get(mm, 0) + c * e
        return SymbolicPoly(t)

    def subs(self, values: dict) -> "SymbolicPoly":
        """Substitute exact values (or polynomials) for some variables."""
        out = SymbolicPoly()
        for m, c in self.terms.items():
            term = SymbolicPoly.const(c)
            rest = []
            for v, e in m:
                if v in values:
                    term = term * (self._lift(values[v]) ** e)
                else:
                    rest.append((v, e))
            out = out + term * SymbolicPoly({tuple(rest): mpq(1)})
        return out

    def eval_exact(self, values: dict):
        total = mpq(0)
        for m, c in self.terms.items():
            t = c
            for v, e in m:
                t *= values[v] ** e
            total += t
        return total

    def eval_interval(self, box: dict) -> Interval:
        """Natural interval extension over a dict var -> Interval."""
        powers: dict = {}
        lo = hi = mpq(0)
        for m, c in self.terms.items():
            acc = Interval._raw(c, c)
            for v, e in m:
                key = (v, e)
                pw = powers.get(key)
                if pw is None:
                    pw = box[v] ** e
                    powers[key] = pw
                acc = acc * pw
            lo += acc.lo
            hi += acc.hi
        return Interval._raw(lo, hi)

    def gradient(self):
        if self._grad is None:
            self._grad = {v: self.diff(v) for v in self.variables}
        return self._grad

    def eval_centered(self, box: dict) -> Interval:
        """Natural extension intersected with the mean-value form."""
        nat = self.eval_interval(box)
        if self.degree <= 1:
            return nat
        center = {}
        for v, iv in box.items():
            m = iv.mid
            center[v] = Interval._raw(m, m)
        acc = self.eval_interval(center)
        for v, g in self.gradient().items():
            iv = box[v]
            if iv.lo == iv.hi:
                continue
            h = (iv.hi - iv.lo) / 2
            acc = acc + g.eval_interval(box) * Interval._raw(-h, h)
        if acc.intersects(nat):
            return acc.intersect(nat)
        return nat

    def to_json(self):
        return [{"mono": [[v, e] for v, e in m], "coeff": qstr(c)}
                for m, c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, data):
        return cls({tuple(sorted((v, int(e)) for v, e in t["mono"])): Q(t["coeff"]) for t in data})

    def to_smt(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items()):
            factors = []
            if c != 1 or not m:
                factors.append(smt_rational(c))
            for v, e in m:
                factors.extend([v] * e)
            parts.append(factors[0] if len(factors) == 1 else "(* " + " ".join(factors) + ")")
        return parts[0] if len(parts) == 1 else "(+ " + " ".join(parts) + ")"

    def __repr__(self):
        if not self.terms:
            return "0"
        out = []
        for m, c in sorted(self.terms.items()):
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            out.append(f"{c}*{mono}" if mono else f"{c}")
        return " + ".join(out)


def smt_rational(c) -> str:
    c = Q(c)
    neg = c < 0
    a = abs(c)
    s = str(a.numerator) if a.denominator == 1 else f"(/ {a.numerator} {a.denominator})"
    return f"(- {s})" if neg else s


class ComplexPoly:
    """A pair (re, im) of real symbolic polynomials."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=None):
        self.re = SymbolicPoly._lift(re)
        self.im = SymbolicPoly._lift(0 if im is None else im)

    def __add__(self, o):
        o = _clift(o)
        return ComplexPoly(self.re + o.re, self.im + o.im)

    def __sub__(self, o):
        o = _clift(o)
        return ComplexPoly(self.re - o.re, self.im - o.im)

    def __neg__(self):
        return ComplexPoly(-self.re, -self.im)

    def __mul__(self, o):
        o = _clift(o)
        return ComplexPoly(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = ComplexPoly(1)
        for _ in range(k):
            out = out * self
        return out

    def conj(self):
        return ComplexPoly(self.re, -self.im)

    def norm_sq(self) -> SymbolicPoly:
        return self.re * self.re + self.im * self.im


def _clift(x):
    return x if isinstance(x, ComplexPoly) else ComplexPoly(x)
