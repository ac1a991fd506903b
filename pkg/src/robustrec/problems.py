"""Partial deciders for Positivity, Ultimate Positivity and Skolem, with certificates.

Every decider is a round-robin over precision levels p = p_min..p_max.  A
``Halted`` verdict is sound; running out of levels gives ``BudgetExhausted``
with a per-level trace of what each recognizer tried.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from gmpy2 import mpq

from . import spectral
from .configs import enumerate_configurations
from .fodecide import (build_negated_sentence, emit_smtlib, external_solver_check,
                       refute_by_subdivision)
from .linrec import LinRec, char_poly, term_intervals
from .numeric import ComplexBox, DivisorStraddlesZero, Interval, Q, qstr
from .poly import Clustering, IntervalPoly, eval_poly, eval_real, validate_clustering

__all__ = ["Fuel", "Verdict", "positivity_decide", "upp_decide", "skolem_decide",
           "decide", "box_trichotomy", "check_certificate", "LevelCache"]


@dataclass
class Fuel:
    p_min: int = 2
    p_max: int = 12
    k_max: int = 500
    max_subdivisions: int = 10 ** 6
    cluster_fuel: int = 200000
    solver_timeout: float = 30.0
    solver_path: str | None = None

    def to_json(self):
        return {"p_min": self.p_min, "p_max": self.p_max, "k_max": self.k_max,
                "max_subdivisions": self.max_subdivisions, "cluster_fuel": self.cluster_fuel,
                "solver_timeout": self.solver_timeout}


@dataclass
class Verdict:
    problem: str
    answer: int | None              # 1, 0, or None for BudgetExhausted
    certificate: dict | None = None
    trace: list = field(default_factory=list)

    @property
    def halted(self) -> bool:
        return self.answer is not None

    @property
    def outcome(self) -> str:
        return "halted" if self.halted else "budget-exhausted"

    def to_json(self):
        out = {"problem": self.problem, "outcome": self.outcome}
        if self.halted:
            out["answer"] = self.answer
            out["certificate"] = self.certificate
        out["trace"] = self.trace
        return out

    @classmethod
    def from_json(cls, d):
        return cls(d["problem"], d.get("answer"), d.get("certificate"), d.get("trace", []))


class LevelCache:
    """Clusterings per precision level, shared between recognizers of one instance."""

    def __init__(self, r: LinRec, fuel: Fuel):
        self.r = r
        self.fuel = fuel
        self._clusterings: dict = {}
        self._dominant: dict = {}

    def clustering(self, p: int):
        if p not in self._clusterings:
            self._clusterings[p] = spectral.clustering_at(self.r, p, self.fuel.cluster_fuel)
        return self._clusterings[p]

    def dominant(self, p: int):
        if p not in self._dominant:
            self._dominant[p] = spectral.dominant_from_clustering(self.r, p, *self.clustering(p),
                                                                  fuel=self.fuel.cluster_fuel)
        return self._dominant[p]


def _levels(fuel: Fuel):
    return range(fuel.p_min, fuel.p_max + 1)


def _prefix_budget(fuel: Fuel, p: int) -> int:
    return min(fuel.k_max, 4 << p)


# -- shared recognizers ----------------------------------------------------------------

def _negative_term(r: LinRec, p: int, fuel: Fuel):
    K = _prefix_budget(fuel, p)
    q = 8 + 2 * p
    terms, _ = term_intervals(r, K, q)
    for k, iv in enumerate(terms, start=1):
        if iv.hi < 0:
            return {"kind": "positivity-negative", "k": k, "precision": q,
                    "interval": iv.to_json()}
    return None


def _positive_dominant(r: LinRec, p: int, fuel: Fuel, cache: LevelCache, need_prefix: bool):
    cert = cache.dominant(p)
    if cert is None:
        return None, "no simple positive dominant root"
    if cert.coeff.lo <= 0:
        return None, "dominant coefficient not certified positive"
    body = {"dominant": cert.to_json()}
    if not need_prefix:
        return {"kind": "upp-positive", **body}, "ok"
    N = spectral.tail_index(r, cert, prec=8 + 2 * p)
    if N is None or N > fuel.k_max + 1:
        return None, f"tail index {N} beyond budget"
    q = 8 + 2 * p
    terms, _ = term_intervals(r, max(N - 1, 0), q)
    if any(iv.lo <= 0 for iv in terms):
        return None, "prefix sign not certified"
    return {"kind": "positivity-positive", **body, "N": N, "prefix_precision": q}, "ok"


# -- Positivity --------------------------------------------------------------------------

def positivity_decide(r: LinRec, fuel: Fuel | None = None, cache: LevelCache | None = None):
    fuel = fuel or Fuel()
    cache = cache or LevelCache(r, fuel)
    trace = []
    for p in _levels(fuel):
        neg = _negative_term(r, p, fuel)
        if neg is not None:
            trace.append({"level": p, "negative": "found"})
            return Verdict("positivity", 0, neg, trace)
        pos, why = _positive_dominant(r, p, fuel, cache, need_prefix=True)
        trace.append({"level": p, "negative": f"none up to k={_prefix_budget(fuel, p)}",
                      "positive": why})
        if pos is not None:
            return Verdict("positivity", 1, pos, trace)
    return Verdict("positivity", None, None, trace)


# -- Ultimate positivity ---------------------------------------------------------------

def _nonnegative_real_possible(box: ComplexBox) -> bool:
    return box.meets_real_axis() and box.re.hi >= 0


def _simple_fast_path(r: LinRec, p: int, C: Clustering, cache: LevelCache):
    if not C.all_simple():
        return None, "not all clusters simple"
    n_real = C.real_count
    if n_real:
        box = C.clusters[0][0]
        g = spectral.coefficient_of_root(r, ComplexBox._raw(box.re, Interval(0)), 1, p,
                                         cache.fuel.cluster_fuel)
        if g is not None and g[0].re.hi < 0:
            return {"kind": "upp-negative-simple", "level": p, "clustering": C.to_json(),
                    "condition": 1, "root_index": 0, "coeff": g[0].to_json()}, "ok"
    pos_bound = max((spectral.modulus_upper(b) for b, _ in C.real
                     if _nonnegative_real_possible(b)), default=mpq(-1))
    for i, (box, _) in enumerate(C.clusters[:C.upper_count]):
        if i < n_real and box.re.hi >= 0:
            continue
        if spectral.modulus_lower(box) <= pos_bound:
            continue
        mu = box if i >= n_real else ComplexBox._raw(box.re, Interval(0))
        g = spectral.coefficient_of_root(r, mu, 1, p, cache.fuel.cluster_fuel)
        if g is not None and g[0].modulus_sq().lo > 0:
            return {"kind": "upp-negative-simple", "level": p, "clustering": C.to_json(),
                    "condition": 2, "root_index": i, "coeff": g[0].to_json()}, "ok"
    return None, "conditions not certified"


def _init_box(r: LinRec, p: int):
    return [u.query(p) for u in r.inits]


def _refute_configs(C, configs, init_box, fuel: Fuel, per_config: int, mode: str = "cramer"):
    records = []
    for R in configs:
        S = build_negated_sentence(R, C, init_box, mode)
        res = refute_by_subdivision(S, per_config)
        rec = {"config": R.to_json(), "describe": R.describe(), "status": res.status,
               "backend": "internal", "boxes": res.trace.get("boxes", 0)}
        if not res.unsat and fuel.solver_path:
            verdict = external_solver_check(emit_smtlib(S), fuel.solver_path, fuel.solver_timeout)
            if verdict == "unsat":
                rec.update(status="unsat", backend="solver")
        records.append(rec)
        if rec["status"] != "unsat":
            return records, False
    return records, True


def upp_decide(r: LinRec, fuel: Fuel | None = None, cache: LevelCache | None = None):
    fuel = fuel or Fuel()
    cache = cache or LevelCache(r, fuel)
    trace = []
    levels = list(_levels(fuel))
    for p in levels:
        entry = {"level": p}
        trace.append(entry)
        pos, why = _positive_dominant(r, p, fuel, cache, need_prefix=False)
        entry["positive"] = why
        if pos is not None:
            return Verdict("upp", 1, pos, trace)
        C, _ = cache.clustering(p)
        if C is None:
            entry["negative"] = "no clustering"
            continue
        fast, why = _simple_fast_path(r, p, C, cache)
        entry["simple"] = why
        if fast is not None:
            return Verdict("upp", 0, fast, trace)
        configs = enumerate_configurations(C)
        # geometric share: the last level gets half the budget, the one before a quarter, ...
        share = fuel.max_subdivisions >> (fuel.p_max - p + 1)
        per_config = max(16, share // len(configs))
        init_box = _init_box(r, p)
        records, ok = _refute_configs(C, configs, init_box, fuel, per_config)
        entry["negative"] = f"{sum(x['status'] == 'unsat' for x in records)}/{len(configs)} refuted"
        if ok:
            return Verdict("upp", 0, {"kind": "upp-negative", "level": p, "mode": "cramer",
                                      "clustering": C.to_json(),
                                      "init_box": [iv.to_json() for iv in init_box],
                                      "configurations": records}, trace)
    return Verdict("upp", None, None, trace)


# -- Skolem ------------------------------------------------------------------------------

def _skolem_one_root(r: LinRec, p: int, C: Clustering, fuel: Fuel):
    mods = [(spectral.modulus_lower(b), i) for i, (b, _) in enumerate(C.clusters)]
    lo, idx = max(mods)
    box, count = C.clusters[idx]
    if idx >= C.real_count or count != 1 or lo <= 0:
        return None, "no simple real dominant root"
    M = spectral._separation(C, idx, lo)
    if M is None:
        return None, "dominant root not separated"
    sign = 1 if box.re.lo > 0 else -1
    g = spectral.coefficient_of_root(r, ComplexBox._raw(box.re, Interval(0)), 1, p,
                                     fuel.cluster_fuel)
    if g is None or g[0].re.contains_zero():
        return None, "coefficient not certified non-zero"
    a = g[0].re
    scale = abs(box.re)
    K = spectral.tail_index_general(r, scale, lambda k: a * (sign ** k), a.mig(), r.order - 1, M,
                                    prec=8 + 2 * p)
    return _skolem_finish(r, p, C, fuel, K, {"test": "one-root", "root_index": idx,
                                              "coeffs": [a.to_json()], "separation": qstr(M)})


def _exact_poly_gcd(a, b):
    """gcd of two univariate Fraction polynomials (ascending coefficients), monic."""
    def trim(p):
        while p and p[-1] == 0:
            p = p[:-1]
        return p
    a, b = trim(list(a)), trim(list(b))
    while b:
        while len(a) >= len(b) and a:
            f = a[-1] / b[-1]
            shift = len(a) - len(b)
            a = trim([x - f * (b[i - shift] if 0 <= i - shift < len(b) else 0)
                      for i, x in enumerate(a)])
        a, b = b, a
    return [x / a[-1] for x in a] if a else a


def _mirror_gcd(r: LinRec):
    ex = r.exact_values()
    if ex is None:
        return None
    c, _ = ex
    n = r.order
    P = [Fraction(0)] * (n + 1)
    P[n] = Fraction(1)
    for i, ci in enumerate(c, start=1):
        P[n - i] = -Fraction(int(ci.numerator), int(ci.denominator))
    Pm = [x * (-1) ** i for i, x in enumerate(P)]
    return _exact_poly_gcd(P, Pm)


def _eval_fraction_poly(coeffs, x):
    acc = Fraction(0)
    for a in reversed(coeffs):
        acc = acc * x + a
    return acc


def _to_fraction(q):
    return Fraction(int(q.numerator), int(q.denominator))


def _skolem_two_root(r: LinRec, p: int, C: Clustering, fuel: Fuel):
    if C.real_count < 2:
        return None, "fewer than two real clusters"
    (bp, np_), (bm, nm) = C.clusters[0], C.clusters[C.real_count - 1]
    if np_ != 1 or nm != 1 or bp.re.lo <= 0 or bm.re.hi >= 0:
        return None, "no simple +/- root pair"
    rho_lo = min(bp.re.lo, -bm.re.hi)
    others = [spectral.modulus_upper(b) for i, (b, _) in enumerate(C.clusters)
              if i not in (0, C.real_count - 1)]
    top = max(others, default=mpq(0))
    if top >= rho_lo:
        return None, "pair not dominant"
    G = _mirror_gcd(r)
    if G is None or len(G) < 2:
        return None, "mirror symmetry not certified"
    if _eval_fraction_poly(G, _to_fraction(bp.re.lo)) * _eval_fraction_poly(G, _to_fraction(bp.re.hi)) >= 0:
        return None, "mirror symmetry not certified"
    M = (top + rho_lo) / 2
    gp = spectral.coefficient_of_root(r, ComplexBox._raw(bp.re, Interval(0)), 1, p, fuel.cluster_fuel)
    gm = spectral.coefficient_of_root(r, ComplexBox._raw(bm.re, Interval(0)), 1, p, fuel.cluster_fuel)
    if gp is None or gm is None:
        return None, "coefficients not certified"
    ap, am = gp[0].re, gm[0].re
    lower = min((ap + am).mig(), (ap - am).mig())
    if lower <= 0:
        return None, "coefficient magnitudes not separated"
    # scale by an enclosure of rho valid for both boxes
    scale = bp.re.intersect(-bm.re) if bp.re.intersects(-bm.re) else None
    if scale is None:
        return None, "mirror boxes do not overlap"
    K = spectral.tail_index_general(r, scale, lambda k: ap + am * ((-1) ** k), lower,
                                    r.order - 2, M, prec=8 + 2 * p)
    return _skolem_finish(r, p, C, fuel, K, {"test": "two-root", "root_index": 0,
                                              "pair_index": C.real_count - 1,
                                              "coeffs": [ap.to_json(), am.to_json()],
                                              "separation": qstr(M)})


def _skolem_finish(r, p, C, fuel, K, body):
    if K is None or K > fuel.k_max + 1:
        return None, f"tail index {K} beyond budget"
    q = 8 + 2 * p
    terms, _ = term_intervals(r, max(K - 1, 0), q)
    if any(iv.contains_zero() for iv in terms):
        return None, "prefix non-vanishing not certified"
    return {"kind": "skolem-negative", "level": p, "clustering": C.to_json(), "K": K,
            "prefix_precision": q, **body}, "ok"


def skolem_decide(r: LinRec, fuel: Fuel | None = None, cache: LevelCache | None = None):
    """Never answers 1: no positive Skolem instance is robust."""
    fuel = fuel or Fuel()
    cache = cache or LevelCache(r, fuel)
    trace = []
    for p in _levels(fuel):
        entry = {"level": p}
        trace.append(entry)
        C, _ = cache.clustering(p)
        if C is None:
            entry["one-root"] = entry["two-root"] = "no clustering"
            continue
        for name, test in (("one-root", _skolem_one_root), ("two-root", _skolem_two_root)):
            cert, why = test(r, p, C, fuel)
            entry[name] = why
            if cert is not None:
                return Verdict("skolem", 0, cert, trace)
    return Verdict("skolem", None, None, trace)


DECIDERS = {"positivity": positivity_decide, "upp": upp_decide, "skolem": skolem_decide}


def decide(problem: str, r: LinRec, fuel: Fuel | None = None, cache: LevelCache | None = None):
    try:
        fn = DECIDERS[problem]
    except KeyError:
        raise ValueError(f"unknown problem {problem!r}") from None
    return fn(r, fuel, cache)


# -- box trichotomy ---------------------------------------------------------------------

def _split_widest(box):
    i = max(range(len(box)), key=lambda j: box[j].width)
    lo, hi = box[i].bisect()
    return [box[:i] + [lo] + box[i + 1:], box[:i] + [hi] + box[i + 1:]]


def box_trichotomy(problem: str, box, fuel: Fuel | None = None, max_boxes: int = 64):
    """1 or 0 if the whole box is certified; -1 if sub-boxes of both answers exist; else None."""
    fuel = fuel or Fuel(p_min=2, p_max=5, k_max=64)
    box = [b if isinstance(b, Interval) else Interval(*b) for b in box]
    v = decide(problem, LinRec.from_box(box), fuel)
    if v.halted:
        return v.answer
    found = set()
    queue = _split_widest(box)
    seen = 0
    while queue and seen < max_boxes:
        sub = queue.pop(0)
        seen += 1
        v = decide(problem, LinRec.from_box(sub), fuel)
        if v.halted:
            found.add(v.answer)
            if found == {0, 1}:
                return -1
        else:
            queue.extend(_split_widest(sub))
    return None


# -- certificate checking ---------------------------------------------------------------

class _Invalid(Exception):
    pass


def _need(cond, reason):
    if not cond:
        raise _Invalid(reason)


def _numerator_coeffs(r: LinRec, q: int):
    """Ascending interval coefficients of N(z) = sum_j b_j z^{n-j}."""
    n = r.order
    c = [x.query(q) for x in r.coeffs]
    u = [x.query(q) for x in r.inits]
    b = []
    for j in range(1, n + 1):
        acc = u[j - 1]
        for i in range(1, j):
            acc = acc - c[i - 1] * u[j - i - 1]
        b.append(acc)
    out = [None] * n
    for j in range(1, n + 1):
        out[n - j] = b[j - 1]
    return out


def _residue_coeff(r: LinRec, mu: ComplexBox, q: int) -> ComplexBox:
    """Coefficient of a simple root: N(mu) / (mu P'(mu)); independent of the Jordan route."""
    Np = IntervalPoly(_numerator_coeffs(r, q))
    P = char_poly(r, q)
    num = eval_poly(Np, mu)
    den = mu * eval_poly(P.derivative(), mu)
    return num / den


def _validated_clustering(r: LinRec, cert) -> Clustering:
    C = Clustering.from_json(cert["clustering"])
    P = char_poly(r, spectral.coeff_precision(r, int(cert["level"])))
    problems = validate_clustering(P, C)
    _need(not problems, "clustering: " + "; ".join(problems))
    return C


def _check_tail(r, scale: Interval, dominant, lower, d, M, N, prec):
    """Independent re-derivation of the tail inequality for index N."""
    if d == 0:
        return True
    _need(lower > 0 and M < scale.lo, "tail: separation or lower bound invalid")
    ratio = M / scale.lo
    s = ratio
    p = 1
    while not d * s * (1 + s) ** (d - 1) < mpq(1, 2):
        s *= ratio
        p += 1
        _need(p < (1 << 16), "tail: contraction power too large")
    terms, _ = term_intervals(r, p * (d + 1), prec)
    for q in range(p):
        W = max((terms[p * j + q - 1] / scale ** (p * j + q) - dominant(p * j + q)).mag()
                for j in range(1, d + 1))
        # v_{d+t} is bounded by W / 2^ceil(t/d)
        t = 0
        while W / mpq(2) ** (-(-t // d)) >= lower:
            t += 1
        _need(p * (d + t) + q <= N, f"tail: index {N} not justified for residue class {q}")
    return True


def _check_dominant(r: LinRec, cert: dict, need_sign: int):
    dom = spectral.DominantRootCertificate.from_json(cert["dominant"])
    dj = dict(cert["dominant"])
    C = _validated_clustering(r, dj)
    box, count = C.clusters[0]
    _need(C.real_count >= 1 and count == 1, "dominant: first cluster not a simple real root")
    _need(box.re.contains(dom.root), "dominant: root interval outside its cluster")
    _need(dom.root.lo > 0, "dominant: root not positive")
    for b, _ in C.clusters[1:]:
        _need(spectral.modulus_upper(b) < dom.separation, "dominant: separation violated")
    _need(dom.separation < dom.root.lo, "dominant: separation above root")
    P = char_poly(r, spectral.coeff_precision(r, dom.level))
    s0 = eval_real(P, Interval(dom.root.lo)).sign()
    s1 = eval_real(P, Interval(dom.root.hi)).sign()
    _need(s0 is not None and s1 is not None and s0 * s1 < 0, "dominant: no sign change")
    q = spectral.coeff_precision(r, dom.level)
    try:
        a = _residue_coeff(r, ComplexBox._raw(dom.root, Interval(0)), q).re
    except DivisorStraddlesZero:
        raise _Invalid("dominant: derivative may vanish")
    _need(a.intersects(dom.coeff), "dominant: coefficient disagrees with residue formula")
    if need_sign > 0:
        _need(a.lo > 0, "dominant: coefficient not positive")
    return dom, a


def _check_prefix(r, K, q, pred, what):
    terms, _ = term_intervals(r, max(K - 1, 0), q)
    for k, iv in enumerate(terms, start=1):
        _need(pred(iv), f"prefix: u_{k} not certified {what}")


def _check_refutations(r: LinRec, cert, fuel: Fuel):
    C = _validated_clustering(r, cert)
    p = int(cert["level"])
    init_box = [Interval.from_json(iv) for iv in cert["init_box"]]
    for u, iv in zip(r.inits, init_box):
        _need(iv.contains(u.query(p + 8)), "init box does not contain the initial values")
    configs = enumerate_configurations(C)
    recs = cert["configurations"]
    _need(len(recs) == len(configs), "configuration count mismatch")
    for R, rec in zip(configs, recs):
        _need(R.to_json() == rec["config"], "configuration list mismatch")
        S = build_negated_sentence(R, C, init_box, cert.get("mode", "cramer"))
        if rec.get("backend") == "solver":
            _need(fuel.solver_path is not None, "solver-backed record needs a solver to replay")
            _need(external_solver_check(emit_smtlib(S), fuel.solver_path, fuel.solver_timeout)
                  == "unsat", "solver replay not unsat")
        else:
            res = refute_by_subdivision(S, fuel.max_subdivisions)
            _need(res.unsat, f"refutation replay failed for {R.describe()}")


def _check_simple(r: LinRec, cert):
    C = _validated_clustering(r, cert)
    _need(C.all_simple(), "simple path: non-simple cluster")
    i = int(cert["root_index"])
    box = C.clusters[i][0]
    mu = box if i >= C.real_count else ComplexBox._raw(box.re, Interval(0))
    q = spectral.coeff_precision(r, int(cert["level"])) + 16
    g = _residue_coeff(r, mu, q)
    if int(cert["condition"]) == 1:
        _need(i == 0 and C.real_count >= 1, "condition 1 must use the largest real root")
        _need(g.re.hi < 0, "condition 1: coefficient not negative")
    else:
        _need(not (i < C.real_count and box.re.hi >= 0), "condition 2: root may be non-negative")
        pos = max((spectral.modulus_upper(b) for b, _ in C.real if _nonnegative_real_possible(b)),
                  default=mpq(-1))
        _need(spectral.modulus_lower(box) > pos, "condition 2: root not dominant")
        _need(g.modulus_sq().lo > 0, "condition 2: coefficient may vanish")


def _check_skolem(r: LinRec, cert):
    C = _validated_clustering(r, cert)
    M = Q(cert["separation"])
    K = int(cert["K"])
    q = spectral.coeff_precision(r, int(cert["level"])) + 16
    i = int(cert["root_index"])
    box = C.clusters[i][0]
    _need(i < C.real_count and C.clusters[i][1] == 1, "skolem: root cluster not simple real")
    mu = ComplexBox._raw(box.re, Interval(0))
    a = _residue_coeff(r, mu, q).re
    if cert["test"] == "one-root":
        for j, (b, _) in enumerate(C.clusters):
            if j != i:
                _need(spectral.modulus_upper(b) < M, "skolem: separation violated")
        _need(M < spectral.modulus_lower(box), "skolem: separation above root")
        _need(not a.contains_zero(), "skolem: coefficient may vanish")
        sign = 1 if box.re.lo > 0 else -1
        _check_tail(r, abs(box.re), lambda k: a * (sign ** k), a.mig(), r.order - 1, M, K, 64)
    else:
        j = int(cert["pair_index"])
        bm = C.clusters[j][0]
        _need(j < C.real_count and C.clusters[j][1] == 1, "skolem: mirror cluster not simple")
        _need(box.re.lo > 0 and bm.re.hi < 0, "skolem: pair signs wrong")
        G = _mirror_gcd(r)
        _need(G is not None and len(G) >= 2, "skolem: mirror root not certified")
        _need(_eval_fraction_poly(G, _to_fraction(box.re.lo))
              * _eval_fraction_poly(G, _to_fraction(box.re.hi)) < 0, "skolem: mirror root not certified")
        for t, (b, _) in enumerate(C.clusters):
            if t not in (i, j):
                _need(spectral.modulus_upper(b) < M, "skolem: separation violated")
        _need(box.re.intersects(-bm.re), "skolem: mirror boxes disjoint")
        scale = box.re.intersect(-bm.re)
        _need(M < scale.lo, "skolem: separation above root")
        am = _residue_coeff(r, ComplexBox._raw(bm.re, Interval(0)), q).re
        lower = min((a + am).mig(), (a - am).mig())
        _need(lower > 0, "skolem: coefficient magnitudes not separated")
        _check_tail(r, scale, lambda k: a + am * ((-1) ** k), lower, r.order - 2, M, K, 64)
    _check_prefix(r, K, int(cert["prefix_precision"]), lambda iv: not iv.contains_zero(), "non-zero")


def check_certificate(r: LinRec, v: Verdict, fuel: Fuel | None = None):
    """Replay every claim of a halted verdict; returns (valid, reason)."""
    fuel = fuel or Fuel()
    if not v.halted or v.certificate is None:
        return False, "verdict did not halt"
    cert = v.certificate
    kind = cert.get("kind")
    expected = {"positivity-negative": ("positivity", 0), "positivity-positive": ("positivity", 1),
                "upp-positive": ("upp", 1), "upp-negative": ("upp", 0),
                "upp-negative-simple": ("upp", 0), "skolem-negative": ("skolem", 0)}
    try:
        _need(kind in expected, f"unknown certificate kind {kind!r}")
        _need(expected[kind] == (v.problem, v.answer), "certificate kind does not match verdict")
        if kind == "positivity-negative":
            terms, _ = term_intervals(r, int(cert["k"]), int(cert["precision"]))
            _need(terms[-1].hi < 0, "negative term not reproduced")
        elif kind == "positivity-positive":
            dom, a = _check_dominant(r, cert, need_sign=1)
            N = int(cert["N"])
            _check_tail(r, dom.root, lambda k: a, a.mig(), r.order - 1, dom.separation, N, 64)
            _check_prefix(r, N, int(cert["prefix_precision"]), lambda iv: iv.lo > 0, "positive")
        elif kind == "upp-positive":
            _check_dominant(r, cert, need_sign=1)
        elif kind == "upp-negative":
            _check_refutations(r, cert, fuel)
        elif kind == "upp-negative-simple":
            _check_simple(r, cert)
        else:
            _check_skolem(r, cert)
    except _Invalid as exc:
        return False, str(exc)
    except (KeyError, ValueError, TypeError, IndexError) as exc:
        return False, f"malformed certificate: {exc}"
    return True, "valid"
