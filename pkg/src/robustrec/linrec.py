"""Linear recurrences u_k = c_1 u_{k-1} + ... + c_n u_{k-n} over represented reals."""
from __future__ import annotations

import json

from gmpy2 import mpq

from .numeric import Interval, Q
from .poly import IntervalPoly
from .realname import (Approx, ExhaustedInputAccuracy, RealName, constant, fixed_interval,
                       name_from_json, name_to_json)

__all__ = ["LinRec", "char_poly", "companion_matrix", "eval_term", "term_intervals",
           "ExhaustedInputAccuracy"]

MAX_INPUT_PRECISION = 1 << 16


class LinRec:
    """Order-n recurrence with coefficients c_1..c_n and initial values u_1..u_n."""

    def __init__(self, coeffs, inits):
        if len(coeffs) != len(inits) or not coeffs:
            raise ValueError("coeffs and inits must be non-empty and of equal length")
        self.coeffs = [c if isinstance(c, RealName) else constant(c) for c in coeffs]
        self.inits = [u if isinstance(u, RealName) else constant(u) for u in inits]

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @classmethod
    def exact(cls, coeffs, inits) -> "LinRec":
        return cls([constant(Q(c)) for c in coeffs], [constant(Q(u)) for u in inits])

    @classmethod
    def from_box(cls, box) -> "LinRec":
        """Instance whose 2n coordinates (c then u) are fixed intervals."""
        box = [b if isinstance(b, Interval) else Interval(*b) for b in box]
        if len(box) % 2:
            raise ValueError("box must have an even number of coordinates")
        n = len(box) // 2
        names = [constant(b.lo) if b.is_point else fixed_interval(b.lo, b.hi) for b in box]
        return cls(names[:n], names[n:])

    def exact_values(self):
        """(coeffs, inits) as mpq lists when every input is a known rational, else None."""
        vals = [x.exact for x in self.coeffs + self.inits]
        if any(v is None for v in vals):
            return None
        n = self.order
        return vals[:n], vals[n:]

    @property
    def has_fixed_inputs(self) -> bool:
        return any(x.fixed for x in self.coeffs + self.inits)

    def to_json(self):
        return {"order": self.order,
                "coeffs": [name_to_json(c) for c in self.coeffs],
                "inits": [name_to_json(u) for u in self.inits]}

    @classmethod
    def from_json(cls, obj) -> "LinRec":
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            coeffs = [name_from_json(c) for c in obj["coeffs"]]
            inits = [name_from_json(u) for u in obj["inits"]]
            n = int(obj.get("order", len(coeffs)))
        except (KeyError, TypeError, AttributeError) as exc:
            raise ValueError(f"malformed instance: {exc}") from exc
        if len(coeffs) != n or len(inits) != n:
            raise ValueError("order does not match the number of coeffs/inits")
        if n < 1:
            raise ValueError("order must be positive")
        return cls(coeffs, inits)

    def __repr__(self):
        return f"LinRec(coeffs={self.coeffs!r}, inits={self.inits!r})"


def _inputs(r: LinRec, q: int):
    cs = [c.query_flagged(q) for c in r.coeffs]
    us = [u.query_flagged(q) for u in r.inits]
    exhausted = any(a.exhausted for a in cs + us)
    return [a.interval for a in cs], [a.interval for a in us], exhausted


def char_poly(r: LinRec, p: int) -> IntervalPoly:
    """Monic x^n - c_1 x^{n-1} - ... - c_n with coefficient widths <= 2^-p where inputs allow."""
    n = r.order
    cs = [c.query(p) for c in r.coeffs]
    coeffs = [Interval(0)] * (n + 1)
    coeffs[n] = Interval(1)
    for i, c in enumerate(cs, start=1):
        coeffs[n - i] = -c
    return IntervalPoly(coeffs)


def companion_matrix(r: LinRec, p: int):
    """Rows of interval entries: first row c_1..c_n, ones on the subdiagonal."""
    n = r.order
    zero, one = Interval(0), Interval(1)
    rows = [[c.query(p) for c in r.coeffs]]
    for i in range(1, n):
        rows.append([one if j == i - 1 else zero for j in range(n)])
    return rows


def _unroll(cs, us, K):
    n = len(cs)
    out = list(us[:K])
    while len(out) < K:
        k = len(out)
        acc = cs[0] * out[k - 1]
        for i in range(1, n):
            acc = acc + cs[i] * out[k - 1 - i]
        out.append(acc)
    return out


def term_intervals(r: LinRec, K: int, q: int):
    """Enclosures of u_1..u_K from inputs queried at precision q; returns (list, exhausted)."""
    ex = r.exact_values()
    if ex is not None:
        vals = _unroll(*ex, K)
        return [Interval(v) for v in vals], False
    cs, us, exhausted = _inputs(r, q)
    return _unroll(cs, us, K), exhausted


def exact_terms(r: LinRec, K: int):
    ex = r.exact_values()
    if ex is None:
        raise ValueError("instance is not exact")
    return _unroll(*ex, K)


def eval_term_flagged(r: LinRec, k: int, p: int) -> Approx:
    """Enclosure of u_k of width <= 2^-p, unless the input accuracy runs out."""
    if k < 1:
        raise ValueError("k must be >= 1")
    ex = r.exact_values()
    if ex is not None:
        return Approx(Interval(_unroll(*ex, k)[-1]), False)
    target = mpq(1, 1 << p)
    q = p + 4 + k.bit_length()
    while True:
        vals, exhausted = term_intervals(r, k, q)
        iv = vals[-1]
        if iv.width <= target:
            return Approx(iv, False)
        if exhausted or q > MAX_INPUT_PRECISION:
            return Approx(iv, True)
        q = q * 2


def eval_term(r: LinRec, k: int, p: int, strict: bool = False) -> Interval:
    ans = eval_term_flagged(r, k, p)
    if strict and ans.exhausted:
        raise ExhaustedInputAccuracy(f"u_{k} cannot be resolved to width 2^-{p}")
    return ans.interval
