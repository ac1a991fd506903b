"""Exact rational intervals and complex boxes.

All endpoints are ``gmpy2.mpq`` rationals, so no operation ever rounds.
The only place precision is lost on purpose is :func:`round_out`, which
widens an interval to dyadic endpoints to keep rational sizes bounded.
"""
from __future__ import annotations

from fractions import Fraction

from gmpy2 import mpq

__all__ = [
    "Q", "qstr", "Interval", "ComplexBox", "DivisorStraddlesZero",
    "round_out", "interval_arith", "complex_arith", "hull",
]

ZERO = mpq(0)
ONE = mpq(1)


class DivisorStraddlesZero(ZeroDivisionError):
    """Raised when an interval divisor contains zero."""


def Q(x) -> mpq:
    """Coerce ints, strings like ``"3/4"`` or ``"-1.25"``, Fractions and mpq to mpq."""
    if isinstance(x, mpq):
        return x
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, float):
        # floats are exact binary rationals; accepted only where callers insist
        return mpq(*x.as_integer_ratio())
    if isinstance(x, str):
        x = x.strip()
        if "/" in x:
            num, den = x.split("/")
            return mpq(int(num), int(den))
        return mpq(Fraction(x).numerator, Fraction(x).denominator)
    return mpq(x)


def qstr(x) -> str:
    x = Q(x)
    return f"{int(x.numerator)}/{int(x.denominator)}"


def _floor(x: mpq) -> int:
    return int(x.numerator) // int(x.denominator)


def _ceil(x: mpq) -> int:
    return -(int(-x.numerator) // int(x.denominator))


class Interval:
    """Closed interval ``[lo, hi]`` with rational endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = Q(lo)
        hi = lo if hi is None else Q(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    @classmethod
    def _raw(cls, lo: mpq, hi: mpq) -> "Interval":
        obj = cls.__new__(cls)
        obj.lo = lo
        obj.hi = hi
        return obj

    @classmethod
    def around(cls, x, radius) -> "Interval":
        x, radius = Q(x), Q(radius)
        return cls._raw(x - radius, x + radius)

    # -- structure -------------------------------------------------------
    @property
    def width(self) -> mpq:
        return self.hi - self.lo

    @property
    def mid(self) -> mpq:
        return (self.lo + self.hi) / 2

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def mag(self) -> mpq:
        """Upper bound of ``|x|`` over the interval."""
        return max(-self.lo, self.hi)

    def mig(self) -> mpq:
        """Lower bound of ``|x|`` over the interval."""
        if self.lo > 0:
            return self.lo
        if self.hi < 0:
            return -self.hi
        return ZERO

    def contains(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        x = Q(x)
        return self.lo <= x <= self.hi

    __contains__ = contains

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def intersects(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def intersect(self, other: "Interval") -> "Interval":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            raise ValueError("disjoint intervals")
        return Interval._raw(lo, hi)

    def hull(self, other: "Interval") -> "Interval":
        return Interval._raw(min(self.lo, other.lo), max(self.hi, other.hi))

    def inflate(self, r) -> "Interval":
        r = Q(r)
        return Interval._raw(self.lo - r, self.hi + r)

    def bisect(self):
        m = self.mid
        return Interval._raw(self.lo, m), Interval._raw(m, self.hi)

    def sign(self):
        """+1, -1 if the sign is certain, else None."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return None

    # -- arithmetic ------------------------------------------------------
    @staticmethod
    def _coerce(x) -> "Interval":
        if isinstance(x, Interval):
            return x
        x = Q(x)
        return Interval._raw(x, x)

    def __add__(self, other):
        if not isinstance(other, Interval):
            x = Q(other)
            return Interval._raw(self.lo + x, self.hi + x)
        return Interval._raw(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval._raw(-self.hi, -self.lo)

    def __sub__(self, other):
        if not isinstance(other, Interval):
            x = Q(other)
            return Interval._raw(self.lo - x, self.hi - x)
        return Interval._raw(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Interval):
            x = Q(other)
            if x >= 0:
                return Interval._raw(self.lo * x, self.hi * x)
            return Interval._raw(self.hi * x, self.lo * x)
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        if a >= 0:
            if c >= 0:
                return Interval._raw(a * c, b * d)
            if d <= 0:
                return Interval._raw(b * c, a * d)
            return Interval._raw(b * c, b * d)
        if b <= 0:
            if c >= 0:
                return Interval._raw(a * d, b * c)
            if d <= 0:
                return Interval._raw(b * d, a * c)
            return Interval._raw(a * d, a * c)
        if c >= 0:
            return Interval._raw(a * d, b * d)
        if d <= 0:
            return Interval._raw(b * c, a * c)
        return Interval._raw(min(a * d, b * c), max(a * c, b * d))

    __rmul__ = __mul__

    def sq(self) -> "Interval":
        a, b = self.lo, self.hi
        if a >= 0:
            return Interval._raw(a * a, b * b)
        if b <= 0:
            return Interval._raw(b * b, a * a)
        return Interval._raw(ZERO, max(a * a, b * b))

    def __abs__(self):
        return Interval._raw(self.mig(), self.mag())

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        if k == 0:
            return Interval._raw(ONE, ONE)
        if k % 2 == 0:
            return self.sq() ** (k // 2)
        lo, hi = self.lo, self.hi
        return Interval._raw(lo ** k, hi ** k)

    def reciprocal(self) -> "Interval":
        if self.lo <= 0 <= self.hi:
            raise DivisorStraddlesZero(f"divisor {self} contains 0")
        return Interval._raw(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        if not isinstance(other, Interval):
            x = Q(other)
            if x == 0:
                raise DivisorStraddlesZero("division by zero")
            return self * (1 / x)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return Interval._coerce(other) / self

    def __eq__(self, other):
        return isinstance(other, Interval) and self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        return f"[{self.lo}, {self.hi}]"

    def to_json(self):
        return [qstr(self.lo), qstr(self.hi)]

    @classmethod
    def from_json(cls, pair) -> "Interval":
        lo, hi = pair
        return cls(Q(lo), Q(hi))


def hull(items) -> Interval:
    items = list(items)
    return Interval._raw(min(i.lo for i in items), max(i.hi for i in items))


def round_out(iv: Interval, p: int) -> Interval:
    """Widen ``iv`` to endpoints on the grid ``2^-p``.

    The result contains ``iv`` and is at most ``2^(1-p)`` wider.
    """
    scale = 1 << p
    lo = _floor(iv.lo * scale)
    hi = _ceil(iv.hi * scale)
    return Interval._raw(mpq(lo, scale), mpq(hi, scale))


def interval_arith(op: str, a: Interval, b: Interval | None = None) -> Interval:
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
    raise ValueError(f"unknown interval op {op!r}")


class ComplexBox:
    """Axis-aligned rectangle ``re x im`` in the complex plane."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=None):
        self.re = Interval._coerce(re)
        self.im = Interval._coerce(0 if im is None else im)

    @classmethod
    def _raw(cls, re: Interval, im: Interval) -> "ComplexBox":
        obj = cls.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    @classmethod
    def point(cls, x, y=0) -> "ComplexBox":
        return cls(Interval(x), Interval(y))

    @property
    def width(self) -> mpq:
        return max(self.re.width, self.im.width)

    @property
    def center(self):
        return self.re.mid, self.im.mid

    def contains(self, other) -> bool:
        if isinstance(other, ComplexBox):
            return self.re.contains(other.re) and self.im.contains(other.im)
        x, y = other
        return x in self.re and y in self.im

    def contains_zero(self) -> bool:
        return self.re.contains_zero() and self.im.contains_zero()

    def intersects(self, other: "ComplexBox") -> bool:
        return self.re.intersects(other.re) and self.im.intersects(other.im)

    def meets_real_axis(self) -> bool:
        return self.im.contains_zero()

    def hull(self, other: "ComplexBox") -> "ComplexBox":
        return ComplexBox._raw(self.re.hull(other.re), self.im.hull(other.im))

    def inflate(self, r) -> "ComplexBox":
        return ComplexBox._raw(self.re.inflate(r), self.im.inflate(r))

    def quarter(self):
        r0, r1 = self.re.bisect()
        i0, i1 = self.im.bisect()
        return [ComplexBox._raw(r, i) for r in (r0, r1) for i in (i0, i1)]

    def __add__(self, other):
        if isinstance(other, ComplexBox):
            return ComplexBox._raw(self.re + other.re, self.im + other.im)
        return ComplexBox._raw(self.re + other, self.im)

    __radd__ = __add__

    def __neg__(self):
        return ComplexBox._raw(-self.re, -self.im)

    def __sub__(self, other):
        if isinstance(other, ComplexBox):
            return ComplexBox._raw(self.re - other.re, self.im - other.im)
        return ComplexBox._raw(self.re - other, self.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, ComplexBox):
            a, b, c, d = self.re, self.im, other.re, other.im
            return ComplexBox._raw(a * c - b * d, a * d + b * c)
        # real scalar or real interval
        return ComplexBox._raw(self.re * other, self.im * other)

    __rmul__ = __mul__

    def conj(self) -> "ComplexBox":
        return ComplexBox._raw(self.re, -self.im)

    def modulus_sq(self) -> Interval:
        return self.re.sq() + self.im.sq()

    def __truediv__(self, other):
        if not isinstance(other, ComplexBox):
            return ComplexBox._raw(self.re / other, self.im / other)
        den = other.modulus_sq()
        if den.lo <= 0:
            raise DivisorStraddlesZero(f"complex divisor {other} may vanish")
        num = self * other.conj()
        inv = den.reciprocal()
        return ComplexBox._raw(num.re * inv, num.im * inv)

    def __pow__(self, k: int):
        result = ComplexBox.point(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        return isinstance(other, ComplexBox) and self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"({self.re!r} + i{self.im!r})"

    def to_json(self):
        return {"re": self.re.to_json(), "im": self.im.to_json()}

    @classmethod
    def from_json(cls, obj) -> "ComplexBox":
        return cls(Interval.from_json(obj["re"]), Interval.from_json(obj["im"]))


def complex_arith(op: str, a: ComplexBox, b: ComplexBox | None = None):
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "conj":
        return a.conj()
    if op == "modulusSq":
        return a.modulus_sq()
    raise ValueError(f"unknown complex op {op!r}")
