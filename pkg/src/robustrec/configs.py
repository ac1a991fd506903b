"""Possible root configurations of a clustering and their symbolic recurrences.

A real cluster of count N holds real variables with an ordered list of
multiplicities (declared descending in value) together with a multiset of
conjugate-pair multiplicities, r_1 + ... + 2(m_1 + ...) = N.  An
upper-half-plane cluster holds a multiset of complex variables; its mirror
image in the lower half-plane carries the conjugates and no new variables.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .numeric import Interval
from .poly import Clustering
from .symbolic import ComplexPoly, SymbolicPoly

__all__ = [
    "RealVar", "ComplexVar", "RootConfiguration", "DomainSystem", "compositions", "partitions",
    "enumerate_configurations", "associated_char_poly", "associated_recurrence",
    "numerator_poly", "domain_system", "init_vars",
]


def compositions(n: int):
    """Ordered tuples of positive integers summing to n (the empty tuple for n = 0)."""
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in compositions(n - first):
            yield (first,) + rest


def partitions(n: int, largest: int | None = None):
    """Non-increasing tuples of positive integers summing to n."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def real_cluster_options(N: int):
    out = []
    for pairs in range(N // 2 + 1):
        for reals in compositions(N - 2 * pairs):
            for cplx in partitions(pairs):
                out.append((reals, cplx))
    return out


@dataclass(frozen=True)
class RealVar:
    name: str
    mult: int
    cluster: int


@dataclass(frozen=True)
class ComplexVar:
    re: str
    im: str
    mult: int
    cluster: int


@dataclass
class RootConfiguration:
    real_vars: list = field(default_factory=list)     # global descending order
    complex_vars: list = field(default_factory=list)  # upper-half-plane representatives
    layout: list = field(default_factory=list)        # per cluster: (real mults, pair mults)

    @property
    def degree(self) -> int:
        return sum(v.mult for v in self.real_vars) + 2 * sum(v.mult for v in self.complex_vars)

    @property
    def root_variables(self):
        out = [v.name for v in self.real_vars]
        for v in self.complex_vars:
            out += [v.re, v.im]
        return out

    def describe(self) -> str:
        parts = [f"{v.name}^{v.mult}" for v in self.real_vars]
        parts += [f"({v.re}+i{v.im})^{v.mult}" for v in self.complex_vars]
        return " ".join(parts)

    def to_json(self):
        return {"real": [[v.name, v.mult, v.cluster] for v in self.real_vars],
                "complex": [[v.re, v.im, v.mult, v.cluster] for v in self.complex_vars],
                "layout": [[list(a), list(b)] for a, b in self.layout]}

    @classmethod
    def from_json(cls, d):
        return cls([RealVar(a, int(m), int(c)) for a, m, c in d["real"]],
                   [ComplexVar(a, b, int(m), int(c)) for a, b, m, c in d["complex"]],
                   [(tuple(a), tuple(b)) for a, b in d["layout"]])


def enumerate_configurations(C: Clustering):
    """All possible root configurations for the clustering, without renaming duplicates."""
    per_cluster = []
    for j, (_, N) in enumerate(C.clusters):
        if j < C.real_count:
            per_cluster.append(real_cluster_options(N))
        elif j < C.upper_count:
            per_cluster.append([((), p) for p in partitions(N)])
        else:
            per_cluster.append([((), ())])
    configs = []
    for choice in product(*per_cluster):
        R = RootConfiguration(layout=list(choice))
        ri = ci = 0
        for j, (reals, cplx) in enumerate(choice):
            for m in reals:
                ri += 1
                R.real_vars.append(RealVar(f"r{ri}", m, j))
            for m in cplx:
                ci += 1
                R.complex_vars.append(ComplexVar(f"x{ci}", f"y{ci}", m, j))
        configs.append(R)
    return configs


def init_vars(n: int):
    return [f"u{k}" for k in range(1, n + 1)]


def _poly_mul(a, b):
    out = [SymbolicPoly() for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def associated_char_poly(R: RootConfiguration):
    """Ascending coefficients (SymbolicPoly) of prod (X - r)^m prod (X^2 - 2xX + x^2 + y^2)^m."""
    coeffs = [SymbolicPoly.const(1)]
    for v in R.real_vars:
        lin = [-SymbolicPoly.var(v.name), SymbolicPoly.const(1)]
        for _ in range(v.mult):
            coeffs = _poly_mul(coeffs, lin)
    for v in R.complex_vars:
        x, y = SymbolicPoly.var(v.re), SymbolicPoly.var(v.im)
        quad = [x * x + y * y, x * (-2), SymbolicPoly.const(1)]
        for _ in range(v.mult):
            coeffs = _poly_mul(coeffs, quad)
    return coeffs


def associated_recurrence(R: RootConfiguration):
    """(ascending characteristic coefficients, [c_1, ..., c_n]) with P = X^n - c_1 X^{n-1} - ..."""
    P = associated_char_poly(R)
    n = len(P) - 1
    return P, [-P[n - i] for i in range(1, n + 1)]


def numerator_poly(R: RootConfiguration):
    """Ascending coefficients of N(z) = sum_j b_j z^{n-j}, b_j = u_j - sum_{i<j} c_i u_{j-i}.

    The coefficient of mu^k in the exponential solution is the residue of
    N(z) z^{k-1} / P(z) at mu.
    """
    _, c = associated_recurrence(R)
    n = len(c)
    u = [SymbolicPoly.var(name) for name in init_vars(n)]
    b = []
    for j in range(1, n + 1):
        acc = u[j - 1]
        for i in range(1, j):
            acc = acc - c[i - 1] * u[j - i - 1]
        b.append(acc)
    out = [SymbolicPoly() for _ in range(n)]
    for j in range(1, n + 1):
        out[n - j] = b[j - 1]
    return out


@dataclass
class DomainSystem:
    bounds: dict                                  # var -> Interval
    atoms: list = field(default_factory=list)     # (SymbolicPoly, rel) meaning poly rel 0


def domain_system(R: RootConfiguration, C: Clustering, init_box=None) -> DomainSystem:
    """Box memberships, the global real ordering, distinctness and Im > 0 constraints."""
    bounds: dict = {}
    atoms: list = []
    for v in R.real_vars:
        bounds[v.name] = C.clusters[v.cluster][0].re
    for v in R.complex_vars:
        box = C.clusters[v.cluster][0]
        bounds[v.re] = box.re
        if v.cluster < C.real_count:
            bounds[v.im] = Interval(0, max(box.im.hi, 0))
        else:
            bounds[v.im] = box.im
        atoms.append((SymbolicPoly.var(v.im), ">"))
    for a, b in zip(R.real_vars, R.real_vars[1:]):
        atoms.append((SymbolicPoly.var(a.name) - SymbolicPoly.var(b.name), ">"))
    cv = R.complex_vars
    for i in range(len(cv)):
        for j in range(i + 1, len(cv)):
            if cv[i].cluster != cv[j].cluster:
                continue  # disjoint boxes already separate them
            dx = SymbolicPoly.var(cv[i].re) - SymbolicPoly.var(cv[j].re)
            dy = SymbolicPoly.var(cv[i].im) - SymbolicPoly.var(cv[j].im)
            atoms.append((dx * dx + dy * dy, ">"))
    if init_box is not None:
        for name, iv in zip(init_vars(len(init_box)), init_box):
            bounds[name] = iv
    return DomainSystem(bounds, atoms)


def eval_univariate_complex(coeffs, re: str, im: str) -> ComplexPoly:
    z = ComplexPoly(SymbolicPoly.var(re), SymbolicPoly.var(im))
    acc = ComplexPoly(0)
    for c in reversed(coeffs):
        acc = acc * z + ComplexPoly(c)
    return acc


def eval_univariate_real(coeffs, name: str) -> SymbolicPoly:
    z = SymbolicPoly.var(name)
    acc = SymbolicPoly()
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def derivative_coeffs(coeffs):
    return [c * i for i, c in enumerate(coeffs)][1:]
