"""Represented reals: a point is known through nested rational enclosures.

A :class:`RealName` answers ``query(p)`` with an :class:`Interval` of width
at most ``2^-p`` containing the point.  Names built from fixed input
intervals cannot refine forever; those answers carry an
``exhausted`` flag instead of meeting the width bound.
"""
from __future__ import annotations

import enum
from typing import NamedTuple

from gmpy2 import mpq

from .numeric import DivisorStraddlesZero, Interval, Q, qstr, round_out

__all__ = [
    "RealName", "ComplexName", "Approx", "Ordering", "ExhaustedInputAccuracy",
    "constant", "fixed_interval", "pi_multiple", "semi_compare",
    "name_from_json", "name_to_json", "name_arith",
]

DEFAULT_QUERY_FUEL = 1 << 14  # extra bits an arithmetic node may request


class ExhaustedInputAccuracy(ArithmeticError):
    """A name could not be refined to the requested width."""


class Approx(NamedTuple):
    interval: Interval
    exhausted: bool


class Ordering(enum.Enum):
    LESS = "less"
    GREATER = "greater"
    UNKNOWN = "unknown"


class RealName:
    """Base class; subclasses implement ``_compute``."""

    def __init__(self):
        self._memo: dict[int, Approx] = {}

    def _compute(self, p: int) -> Approx:
        raise NotImplementedError

    @property
    def exact(self):
        """The value as an mpq when the point is a known rational, else None."""
        return None

    @property
    def fixed(self) -> bool:
        """True if the name bottoms out in a fixed-width input interval."""
        return False

    def query_flagged(self, p: int) -> Approx:
        if p < 0:
            raise ValueError("precision must be non-negative")
        hit = self._memo.get(p)
        if hit is not None:
            return hit
        ans = self._compute(p)
        # running intersection with the nearest coarser answer keeps names nested
        coarser = [q for q in self._memo if q < p]
        if coarser:
            prev = self._memo[max(coarser)].interval
            iv = ans.interval
            if iv.intersects(prev):
                ans = Approx(iv.intersect(prev), ans.exhausted)
        self._memo[p] = ans
        return ans

    def query(self, p: int, strict: bool = False) -> Interval:
        ans = self.query_flagged(p)
        if strict and ans.exhausted:
            raise ExhaustedInputAccuracy(f"input accuracy exhausted below 2^-{p}")
        return ans.interval

    # arithmetic sugar
    def __add__(self, other):
        return name_arith("add", self, _as_name(other))

    def __radd__(self, other):
        return name_arith("add", _as_name(other), self)

    def __sub__(self, other):
        return name_arith("sub", self, _as_name(other))

    def __rsub__(self, other):
        return name_arith("sub", _as_name(other), self)

    def __mul__(self, other):
        return name_arith("mul", self, _as_name(other))

    def __rmul__(self, other):
        return name_arith("mul", _as_name(other), self)

    def __truediv__(self, other):
        return name_arith("div", self, _as_name(other))

    def __neg__(self):
        return name_arith("neg", self)


def _as_name(x) -> RealName:
    return x if isinstance(x, RealName) else constant(x)


class _Constant(RealName):
    def __init__(self, value):
        super().__init__()
        self.value = Q(value)
        self._iv = Interval(self.value)

    @property
    def exact(self):
        return self.value

    def _compute(self, p):
        return Approx(self._iv, False)

    def __repr__(self):
        return f"constant({self.value})"


class _FixedInterval(RealName):
    def __init__(self, lo, hi):
        super().__init__()
        self.iv = Interval(lo, hi)

    @property
    def fixed(self):
        return True

    @property
    def exact(self):
        return self.iv.lo if self.iv.is_point else None

    def _compute(self, p):
        exhausted = self.iv.width > mpq(1, 1 << p)
        return Approx(self.iv, exhausted)

    def __repr__(self):
        return f"fixed_interval({self.iv!r})"


def _arctan_inv_fixed(x: int, bits: int):
    """``2^bits * arctan(1/x)`` as (value, error bound), both integers."""
    one = 1 << bits
    total = 0
    power = one // x
    x2 = x * x
    k = 0
    terms = 0
    while power:
        term = power // (2 * k + 1)
        total += -term if k % 2 else term
        power //= x2
        k += 1
        terms += 1
    # power carries < 2 ulp error, each term < 3; the alternating tail is < 2 ulp
    return total, 3 * terms + 4


class _PiMultiple(RealName):
    """``q * pi`` via Machin's formula with rigorous fixed-point error bounds."""

    def __init__(self, q):
        super().__init__()
        self.q = Q(q)

    def _compute(self, p):
        if self.q == 0:
            return Approx(Interval(0), False)
        scale_bits = max(0, int(abs(self.q).numerator).bit_length()
                         - int(abs(self.q).denominator).bit_length() + 1)
        bits = p + scale_bits + 2 * (p + 16).bit_length() + 12
        a5, e5 = _arctan_inv_fixed(5, bits)
        a239, e239 = _arctan_inv_fixed(239, bits)
        val = 4 * (4 * a5 - a239)
        err = 4 * (4 * e5 + e239)
        den = 1 << bits
        pi_iv = Interval(mpq(val - err, den), mpq(val + err, den))
        return Approx(round_out(pi_iv * self.q, p + 2), False)

    def __repr__(self):
        return f"pi_multiple({self.q})"


_UNARY = {"neg", "abs", "sq"}


class _Arith(RealName):
    def __init__(self, op, a, b=None, fuel=DEFAULT_QUERY_FUEL):
        super().__init__()
        self.op, self.a, self.b, self.fuel = op, a, b, fuel
        ea = a.exact
        eb = b.exact if b is not None else None
        self._exact = None
        if ea is not None and (b is None or eb is not None):
            iv = _apply(op, Interval(ea), Interval(eb) if b is not None else None)
            if iv.is_point:
                self._exact = iv.lo

    @property
    def exact(self):
        return self._exact

    @property
    def fixed(self):
        return self.a.fixed or (self.b is not None and self.b.fixed)

    def _compute(self, p):
        if self._exact is not None:
            return Approx(Interval(self._exact), False)
        target = mpq(1, 1 << (p + 2))
        q = p + 4
        step = 4
        while True:
            xa = self.a.query_flagged(q)
            xb = self.b.query_flagged(q) if self.b is not None else None
            exhausted = xa.exhausted or (xb is not None and xb.exhausted)
            try:
                iv = _apply(self.op, xa.interval, xb.interval if xb else None)
            except DivisorStraddlesZero:
                if exhausted or q - p > self.fuel:
                    raise
                iv = None
            if iv is not None:
                if iv.width <= target:
                    return Approx(round_out(iv, p + 2), False)
                if exhausted or q - p > self.fuel:
                    return Approx(iv, True)
            q += step
            step *= 2


def _apply(op, a, b):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "neg":
        return -a
    if op == "abs":
        return abs(a)
    if op == "sq":
        return a.sq()
    raise ValueError(f"unknown op {op!r}")


def constant(x) -> RealName:
    return _Constant(x)


def fixed_interval(lo, hi) -> RealName:
    return _FixedInterval(lo, hi)


def pi_multiple(q) -> RealName:
    return _PiMultiple(q)


def name_arith(op: str, a: RealName, b: RealName | None = None, *, witness: int | None = None,
               fuel: int = DEFAULT_QUERY_FUEL) -> RealName:
    """Combine names.  For ``div`` a ``witness`` precision, if given, must show 0 not in b."""
    if (op in _UNARY) != (b is None):
        raise ValueError(f"operator {op!r} arity mismatch")
    if op == "div" and witness is not None and b.query(witness).contains_zero():
        raise DivisorStraddlesZero(f"witness precision {witness} does not separate divisor from 0")
    return _Arith(op, a, b, fuel)


def semi_compare(a: RealName, b: RealName, p: int) -> Ordering:
    x, y = a.query(p), b.query(p)
    if x.hi < y.lo:
        return Ordering.LESS
    if x.lo > y.hi:
        return Ordering.GREATER
    return Ordering.UNKNOWN


class ComplexName:
    """A complex point as a pair of real names."""

    def __init__(self, re: RealName, im: RealName | None = None):
        self.re = re
        self.im = im if im is not None else constant(0)

    def query(self, p: int):
        from .numeric import ComplexBox
        return ComplexBox(self.re.query(p), self.im.query(p))


def name_from_json(obj) -> RealName:
    if isinstance(obj, (int, str)) and not isinstance(obj, bool):
        return constant(Q(obj))
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ValueError(f"malformed real name: {obj!r}")
    (tag, val), = obj.items()
    if tag == "rational":
        return constant(Q(val))
    if tag == "interval":
        lo, hi = val
        return fixed_interval(Q(lo), Q(hi))
    if tag == "pi-multiple":
        return pi_multiple(Q(val))
    raise ValueError(f"unknown real name tag {tag!r}")


def name_to_json(name: RealName):
    if isinstance(name, _Constant):
        return {"rational": qstr(name.value)}
    if isinstance(name, _FixedInterval):
        return {"interval": name.iv.to_json()}
    if isinstance(name, _PiMultiple):
        return {"pi-multiple": qstr(name.q)}
    raise TypeError("only input names are serializable")
