"""Interval polynomials, certified root counting, and approximate root clusterings.

Root counting uses the argument principle on the boundary of a box.  Each
boundary segment is labelled by an open half-plane that contains the image
of the segment under every polynomial consistent with the coefficient
intervals; summing the quarter turns between consecutive labels yields the
winding number exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from .numeric import ComplexBox, Interval, Q, round_out

__all__ = [
    "IntervalPoly", "Clustering", "eval_poly", "eval_real", "count_roots_in_box",
    "compute_clustering", "validate_clustering", "real_root_intervals",
    "cauchy_bound",
]


class IntervalPoly:
    """Polynomial with interval coefficients, ``coeffs[i]`` multiplying ``x^i``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [c if isinstance(c, Interval) else Interval(Q(c)) for c in coeffs]
        while len(cs) > 1 and cs[-1].is_point and cs[-1].lo == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Interval:
        return self.coeffs[-1]

    def derivative(self) -> "IntervalPoly":
        if self.degree == 0:
            return IntervalPoly([0])
        return IntervalPoly([c * i for i, c in enumerate(self.coeffs) if i > 0])

    def is_exact(self) -> bool:
        return all(c.is_point for c in self.coeffs)

    def contains_poly(self, rationals) -> bool:
        return len(rationals) == len(self.coeffs) and all(
            Q(r) in c for r, c in zip(rationals, self.coeffs))

    def __repr__(self):
        return f"IntervalPoly({list(self.coeffs)!r})"

    def to_json(self):
        return [c.to_json() for c in self.coeffs]

    @classmethod
    def from_json(cls, data):
        return cls([Interval.from_json(c) for c in data])


def cauchy_bound(P: IntervalPoly) -> mpq:
    """Every root of every consistent polynomial has modulus below this."""
    lead = P.leading.mig()
    if lead == 0:
        raise ValueError("leading coefficient interval contains 0")
    return 1 + max((c.mag() for c in P.coeffs[:-1]), default=mpq(0)) / lead


# -- evaluation ----------------------------------------------------------------

def _taylor_at(P: IntervalPoly, c: ComplexBox):
    """Taylor coefficients ``P^(j)(c)/j!`` via repeated synthetic division."""
    work = [ComplexBox._raw(a, Interval._raw(mpq(0), mpq(0))) for a in P.coeffs]
    n = len(work)
    out = []
    for j in range(n):
        acc = work[n - 1]
        for i in range(n - 2, j - 1, -1):
            acc = work[i] + acc * c
            work[i] = acc
        out.append(work[j])
    return out


def _taylor_exact(P: IntervalPoly, cx: mpq, cy: mpq):
    """Same as ``_taylor_at`` for point coefficients, in exact complex arithmetic."""
    wr = [a.lo for a in P.coeffs]
    wi = [mpq(0)] * len(wr)
    n = len(wr)
    out = []
    for j in range(n):
        ar, ai = wr[n - 1], wi[n - 1]
        for i in range(n - 2, j - 1, -1):
            ar, ai = wr[i] + ar * cx - ai * cy, wi[i] + ar * cy + ai * cx
            wr[i], wi[i] = ar, ai
        out.append(ComplexBox._raw(Interval._raw(wr[j], wr[j]), Interval._raw(wi[j], wi[j])))
    return out


def _horner(coeffs, z):
    acc = coeffs[-1]
    for a in reversed(coeffs[:-1]):
        acc = acc * z + a
    return acc


def eval_poly(P: IntervalPoly, z: ComplexBox) -> ComplexBox:
    """Enclosure of ``Q(w)`` over ``w`` in ``z`` and all ``Q`` consistent with ``P``.

    Uses the centred (Taylor) form, which is tight on small boxes.
    """
    if P.degree == 0:
        return ComplexBox._raw(P.coeffs[0], Interval(0))
    cx, cy = z.center
    center = ComplexBox.point(cx, cy)
    if z.re.is_point and z.im.is_point:
        return _horner([ComplexBox._raw(a, Interval(0)) for a in P.coeffs], center)
    if P.is_exact():
        t = _taylor_exact(P, cx, cy)
    else:
        t = _taylor_at(P, center)
    h = z - center
    return _horner(t, h)


def _taylor_real(P: IntervalPoly, c: mpq):
    work = list(P.coeffs)
    n = len(work)
    out = []
    for j in range(n):
        acc = work[n - 1]
        for i in range(n - 2, j - 1, -1):
            acc = work[i] + acc * c
            work[i] = acc
        out.append(work[j])
    return out


def eval_real(P: IntervalPoly, x: Interval) -> Interval:
    """Real interval enclosure of ``P`` over ``x`` (centred form)."""
    if x.is_point or P.degree == 0:
        return _horner(list(P.coeffs), x)
    c = x.mid
    t = _taylor_real(P, c)
    return _horner(t, x - c)


# -- root counting -------------------------------------------------------------

_R, _U, _L, _D = 0, 1, 2, 3


def _label(F: ComplexBox):
    if F.re.lo > 0:
        return _R
    if F.re.hi < 0:
        return _L
    if F.im.lo > 0:
        return _U
    if F.im.hi < 0:
        return _D
    return None


class _Fuel:
    __slots__ = ("left",)

    def __init__(self, n):
        self.left = n

    def spend(self, k=1) -> bool:
        self.left -= k
        return self.left >= 0


def _edge_labels(P, start, end, fuel: _Fuel, out: list) -> bool:
    """Label the segment start->end (axis-parallel), appending labels in order."""
    stack = [(start, end)]
    while stack:
        a, b = stack.pop()
        if not fuel.spend():
            return False
        seg = ComplexBox._raw(
            Interval._raw(min(a[0], b[0]), max(a[0], b[0])),
            Interval._raw(min(a[1], b[1]), max(a[1], b[1])))
        lab = _label(eval_poly(P, seg))
        if lab is None:
            if a == b:
                return False
            m = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
            stack.append((m, b))
            stack.append((a, m))
        else:
            if not out or out[-1] != lab:
                out.append(lab)
    return True


def count_roots_in_box(P: IntervalPoly, B: ComplexBox, fuel: int = 20000):
    """Number of roots in ``B`` with multiplicity, or None if undecided.

    The answer holds for every polynomial consistent with ``P``.  Roots on
    (or too near) the boundary exhaust the fuel and give None.
    """
    if P.leading.contains_zero():
        return None
    x0, x1, y0, y1 = B.re.lo, B.re.hi, B.im.lo, B.im.hi
    corners = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
    tank = _Fuel(fuel)
    labels: list = []
    for i in range(4):
        if not _edge_labels(P, corners[i], corners[(i + 1) % 4], tank, labels):
            return None
    if len(labels) > 1 and labels[0] == labels[-1]:
        labels.pop()
    quarter = 0
    for i, a in enumerate(labels):
        d = (labels[(i + 1) % len(labels)] - a) % 4
        if d == 2:
            return None
        quarter += {0: 0, 1: 1, 3: -1}[d]
    if quarter % 4:
        return None
    return quarter // 4


# -- clustering ------------------------------------------------------------------

@dataclass
class Clustering:
    """Ordered clusters: real ones first (descending), then upper, then lower half-plane."""

    clusters: list = field(default_factory=list)  # (ComplexBox, count)
    real_count: int = 0
    upper_count: int = 0  # index b: clusters[real_count:upper_count] are in the upper half

    @property
    def real(self):
        return self.clusters[:self.real_count]

    @property
    def upper(self):
        return self.clusters[self.real_count:self.upper_count]

    @property
    def lower(self):
        return self.clusters[self.upper_count:]

    @property
    def total(self) -> int:
        return sum(n for _, n in self.clusters)

    @property
    def width(self):
        return max(b.width for b, _ in self.clusters)

    def all_simple(self) -> bool:
        return all(n == 1 for _, n in self.clusters)

    def to_json(self):
        return {
            "clusters": [{"box": b.to_json(), "count": n} for b, n in self.clusters],
            "real_count": self.real_count,
            "upper_count": self.upper_count,
        }

    @classmethod
    def from_json(cls, data):
        return cls([(ComplexBox.from_json(c["box"]), int(c["count"])) for c in data["clusters"]],
                   int(data["real_count"]), int(data["upper_count"]))


def _pow2_ceil(x: mpq) -> mpq:
    k = 0
    while mpq(1 << k) < x:
        k += 1
    return mpq(1 << k)


def _candidate_boxes(P, delta, fuel: _Fuel):
    """Leaves of width <= delta that may contain a root of some consistent polynomial."""
    R = _pow2_ceil(cauchy_bound(P))
    frontier = [ComplexBox(Interval(-R, R), Interval(-R, R))]
    leaves = []
    while frontier:
        nxt = []
        for box in frontier:
            if not fuel.spend():
                return None
            F = eval_poly(P, box)
            if not F.contains_zero():
                continue
            if box.width <= delta:
                leaves.append(box)
            else:
                nxt.extend(box.quarter())
        frontier = nxt
    return leaves


def _components(boxes, gap):
    """Group boxes whose ``gap``-inflations touch."""
    parent = list(range(len(boxes)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    infl = [b.inflate(gap / 2) for b in boxes]
    # sweep on the real axis to avoid all-pairs work
    order = sorted(range(len(boxes)), key=lambda i: infl[i].re.lo)
    active: list = []
    for i in order:
        active = [j for j in active if infl[j].re.hi >= infl[i].re.lo]
        for j in active:
            if infl[i].intersects(infl[j]):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
        active.append(i)
    groups: dict = {}
    for i in range(len(boxes)):
        groups.setdefault(find(i), []).append(boxes[i])
    return list(groups.values())


def _try_cluster(P, delta, target_width, fuel: _Fuel):
    leaves = _candidate_boxes(P, delta, fuel)
    if leaves is None:
        return None, True
    groups = _components(leaves, delta)
    boxes = []
    for g in groups:
        hb = g[0]
        for b in g[1:]:
            hb = hb.hull(b)
        boxes.append(hb.inflate(delta / 2))
    for i in range(len(boxes)):
        for j in range(i + 1, len(boxes)):
            if boxes[i].intersects(boxes[j]):
                return None, False
    counted = []
    for b in boxes:
        if target_width is not None and b.width > target_width:
            return None, False
        budget = min(fuel.left, 4000)
        if budget <= 0:
            return None, True
        n = count_roots_in_box(P, b, budget)
        fuel.spend(budget // 4)
        if n is None:
            return None, False
        if n > 0:
            counted.append((b, n))
    if sum(n for _, n in counted) != P.degree:
        return None, False
    real = [(b, n) for b, n in counted if b.meets_real_axis()]
    upper = [(b, n) for b, n in counted if b.im.lo > 0]
    lower = [(b, n) for b, n in counted if b.im.hi < 0]
    for b, _ in real:
        rb = b.conj()
        if any(o is not b and rb.intersects(o) for o, _ in counted):
            return None, False
    partner = {}
    for b, n in upper + lower:
        rb = b.conj()
        hits = [(o, m) for o, m in counted if o is not b and rb.intersects(o)]
        if len(hits) != 1 or hits[0][1] != n:
            return None, False
        partner[id(b)] = hits[0]
    real.sort(key=lambda c: c[0].re.lo, reverse=True)
    for (b0, _), (b1, _) in zip(real, real[1:]):
        if not b0.re.lo > b1.re.hi:
            return None, False
    upper.sort(key=lambda c: c[0].re.mid, reverse=True)
    lower = [partner[id(b)] for b, _ in upper]
    clusters = real + upper + lower
    return Clustering(clusters, len(real), len(real) + len(upper)), False


def compute_clustering(P: IntervalPoly, target_width: int, fuel: int = 200000,
                       max_width: int | None = -1):
    """Approximate root clustering with boxes of width <= 2^-target_width, or None.

    Places dyadic boxes of width delta over every possible root, merges
    touching groups, checks the reflection conditions and retries with
    delta/2 on failure until the fuel (box evaluations) runs out.  With
    ``max_width=None`` the width bound is dropped and only delta starts at
    the target scale (for coefficient intervals of fixed width).
    """
    if P.leading.contains_zero() or P.degree < 1:
        return None
    tank = _Fuel(fuel)
    delta = mpq(1, 1 << target_width) / 4
    if max_width is None:
        target = None
    else:
        target = mpq(1, 1 << (target_width if max_width == -1 else max_width))
    while tank.left > 0:
        result, exhausted = _try_cluster(P, delta, target, tank)
        if result is not None:
            return result
        if exhausted:
            return None
        delta /= 2
    return None


def validate_clustering(P: IntervalPoly, C: Clustering, fuel: int = 20000) -> list:
    """Re-test the seven clustering conditions; returns a list of violations."""
    problems = []
    cl = C.clusters
    a, b = C.real_count, C.upper_count
    if not (0 <= a <= b <= len(cl)):
        return ["indices a/b out of range"]
    for i, (B, n) in enumerate(cl):
        if n < 1:
            problems.append(f"cluster {i}: non-positive count")
    for i in range(len(cl)):
        for j in range(i + 1, len(cl)):
            if cl[i][0].intersects(cl[j][0]):
                problems.append(f"(1) boxes {i} and {j} overlap")
    for i, (B, n) in enumerate(cl):
        got = count_roots_in_box(P, B, fuel)
        if got != n:
            problems.append(f"(2) cluster {i}: counted {got}, claimed {n}")
    if sum(n for _, n in cl) != P.degree:
        problems.append("(1) counts do not account for every root")
    for i, (B, n) in enumerate(cl):
        rb = B.conj()
        others = [j for j, (O, _) in enumerate(cl) if j != i and rb.intersects(O)]
        if B.meets_real_axis():
            if others:
                problems.append(f"(3) reflection of real cluster {i} meets {others}")
        else:
            if len(others) != 1:
                problems.append(f"(4) complex cluster {i} has {len(others)} conjugate partners")
            elif cl[others[0]][1] != n:
                problems.append(f"(4) complex cluster {i}: partner count differs")
    for i, (B, _) in enumerate(cl):
        if (i < a) != B.meets_real_axis():
            problems.append(f"(5) cluster {i} on wrong side of index a={a}")
    for j in range(a - 1):
        if not cl[j][0].re.lo > cl[j + 1][0].re.hi:
            problems.append(f"(6) real clusters {j} and {j + 1} out of order")
    for i in range(a, len(cl)):
        B = cl[i][0]
        if i < b and not B.im.lo > 0:
            problems.append(f"(7) cluster {i} not in upper half-plane")
        if i >= b and not B.im.hi < 0:
            problems.append(f"(7) cluster {i} not in lower half-plane")
    return problems


def real_root_intervals(P: IntervalPoly, eps, fuel: int = 100000):
    """Intervals of width <= eps covering every real root of every consistent polynomial.

    Adjacent leaves are merged.  Returns a sorted list, or None on fuel exhaustion.
    """
    eps = Q(eps)
    R = _pow2_ceil(cauchy_bound(P))
    frontier = [Interval(-R, R)]
    leaves = []
    while frontier:
        nxt = []
        for iv in frontier:
            fuel -= 1
            if fuel < 0:
                return None
            if not eval_real(P, iv).contains_zero():
                continue
            if iv.width <= eps:
                leaves.append(iv)
            else:
                nxt.extend(iv.bisect())
        frontier = nxt
    leaves.sort(key=lambda iv: iv.lo)
    merged = []
    for iv in leaves:
        if merged and merged[-1].hi >= iv.lo:
            merged[-1] = merged[-1].hull(iv)
        else:
            merged.append(iv)
    return merged


def dyadic_poly(P: IntervalPoly, p: int) -> IntervalPoly:
    """Round every coefficient outward to the grid 2^-p (exact points stay exact)."""
    return IntervalPoly([c if c.is_point else round_out(c, p) for c in P.coeffs])
