"""Negated ultimate-positivity sentences as polynomial constraint systems.

A system is a conjunction of atoms together with clauses; each clause is a
disjunction of conjunctive terms.  Distributing the clauses gives the flat
disjunctive normal form (``ConstraintSystem.to_dnf``).

Modes:

* ``cramer``: coefficient signs are expressed through the residue of
  N(z) z^{k-1} / P(z) with all positive factors cleared, so only the
  numerator polynomial N and the root variables appear.
* ``determinant``: literal Cramer determinants of the confluent
  interpolation system; exact but expensive, intended for small orders.
* ``existentialCoeffs``: fresh coefficient variables tied to the initial
  values by interpolation equalities; unbounded, so only useful for SMT.
"""
from __future__ import annotations

import os
import shutil
import subprocess
import tempfile
from dataclasses import dataclass, field
from itertools import permutations

from gmpy2 import mpq

from .configs import (RootConfiguration, derivative_coeffs, domain_system, eval_univariate_complex,
                      eval_univariate_real, init_vars, numerator_poly)
from .numeric import Interval
from .poly import Clustering
from .symbolic import ComplexPoly, SymbolicPoly, smt_rational

__all__ = [
    "Atom", "ConstraintSystem", "RefutationResult", "build_negated_sentence",
    "refute_by_subdivision", "emit_smtlib", "external_solver_check", "SolverNotFound",
    "MalformedSolverOutput", "cramer_polys", "lead_sign_poly", "DETERMINANT_MAX_ORDER",
]

DETERMINANT_MAX_ORDER = 6

_RELS = (">", ">=", "=", "<", "<=")


@dataclass(frozen=True)
class Atom:
    poly: SymbolicPoly
    rel: str  # poly rel 0

    def holds(self, value) -> bool:
        return {">": value > 0, ">=": value >= 0, "=": value == 0,
                "<": value < 0, "<=": value <= 0}[self.rel]

    def refuted_by(self, iv: Interval) -> bool:
        r = self.rel
        if r == ">":
            return iv.hi <= 0
        if r == ">=":
            return iv.hi < 0
        if r == "<":
            return iv.lo >= 0
        if r == "<=":
            return iv.lo > 0
        return iv.lo > 0 or iv.hi < 0

    def certain_on(self, iv: Interval) -> bool:
        r = self.rel
        if r == ">":
            return iv.lo > 0
        if r == ">=":
            return iv.lo >= 0
        if r == "<":
            return iv.hi < 0
        if r == "<=":
            return iv.hi <= 0
        return iv.lo == 0 and iv.hi == 0

    def to_smt(self) -> str:
        return f"({self.rel} {self.poly.to_smt()} 0)"

    def to_json(self):
        return {"poly": self.poly.to_json(), "rel": self.rel}

    @classmethod
    def from_json(cls, d):
        return cls(SymbolicPoly.from_json(d["poly"]), d["rel"])


@dataclass
class ConstraintSystem:
    variables: list
    bounds: dict                                   # var -> Interval | None
    atoms: list = field(default_factory=list)      # conjunction of Atom
    clauses: list = field(default_factory=list)    # each: list of terms, term: list of Atom
    label: str = ""

    def to_dnf(self):
        branches = [list(self.atoms)]
        for clause in self.clauses:
            branches = [b + list(t) for b in branches for t in clause]
        return branches

    def satisfied_by(self, point: dict) -> bool:
        for v, iv in self.bounds.items():
            if iv is not None and point[v] not in iv:
                return False
        if not all(a.holds(a.poly.eval_exact(point)) for a in self.atoms):
            return False
        return all(any(all(a.holds(a.poly.eval_exact(point)) for a in t) for t in c)
                   for c in self.clauses)

    def check_variables(self):
        declared = set(self.variables)
        for a in self._all_atoms():
            missing = set(a.poly.variables) - declared
            if missing:
                raise ValueError(f"undeclared variables {sorted(missing)}")

    def _all_atoms(self):
        yield from self.atoms
        for c in self.clauses:
            for t in c:
                yield from t

    def to_json(self):
        return {
            "label": self.label,
            "variables": list(self.variables),
            "bounds": {v: (iv.to_json() if iv is not None else None) for v, iv in self.bounds.items()},
            "atoms": [a.to_json() for a in self.atoms],
            "clauses": [[[a.to_json() for a in t] for t in c] for c in self.clauses],
        }

    @classmethod
    def from_json(cls, d):
        return cls(list(d["variables"]),
                   {v: (Interval.from_json(iv) if iv is not None else None)
                    for v, iv in d["bounds"].items()},
                   [Atom.from_json(a) for a in d["atoms"]],
                   [[[Atom.from_json(a) for a in t] for t in c] for c in d["clauses"]],
                   d.get("label", ""))


def _v(name):
    return SymbolicPoly.var(name)


# -- Cramer determinants -------------------------------------------------------------

def _basis_columns(R: RootConfiguration):
    """(key, root as ComplexPoly, power l) per column of the confluent system."""
    cols = []
    for v in R.real_vars:
        mu = ComplexPoly(_v(v.name))
        cols += [((v.name, l), mu, l) for l in range(v.mult)]
    for v in R.complex_vars:
        mu = ComplexPoly(_v(v.re), _v(v.im))
        cols += [((v.re, l), mu, l) for l in range(v.mult)]
        cols += [((v.re + "~", l), mu.conj(), l) for l in range(v.mult)]
    return cols


def _det(M):
    n = len(M)
    total = ComplexPoly(0)
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = ComplexPoly(-1 if inv % 2 else 1)
        for i, j in enumerate(perm):
            term = term * M[i][j]
        total = total + term
    return total


def cramer_polys(R: RootConfiguration):
    """(det, {column key: numerator determinant}) for f(k) = u_k, k = 1..n."""
    cols = _basis_columns(R)
    n = len(cols)
    pows = {}
    matrix = []
    for k in range(1, n + 1):
        row = []
        for key, mu, l in cols:
            base = key[0]
            if (base, k) not in pows:
                pows[(base, k)] = mu ** k
            row.append(pows[(base, k)] * mpq(k ** l))
        matrix.append(row)
    det = _det(matrix)
    u = [ComplexPoly(_v(name)) for name in init_vars(n)]
    nums = {}
    for c, (key, _, _) in enumerate(cols):
        M = [row[:c] + [u[i]] + row[c + 1:] for i, row in enumerate(matrix)]
        nums[key] = _det(M)
    return det, nums


def lead_sign_poly(R: RootConfiguration, det=None, nums=None) -> SymbolicPoly:
    """Re(det_num * conj(det)) for the leading coefficient of the largest real variable."""
    if det is None:
        det, nums = cramer_polys(R)
    v = R.real_vars[0]
    return (nums[(v.name, v.mult - 1)] * det.conj()).re


# -- sentence construction ----------------------------------------------------------

def _coeff_zero_real(Nc, name, mult) -> SymbolicPoly:
    acc = SymbolicPoly()
    d = Nc
    for _ in range(mult):
        val = eval_univariate_real(d, name)
        acc = acc + val * val
        d = derivative_coeffs(d)
    return acc


def _coeff_zero_complex(Nc, re, im, mult) -> SymbolicPoly:
    acc = SymbolicPoly()
    d = Nc
    for _ in range(mult):
        acc = acc + eval_univariate_complex(d, re, im).norm_sq()
        d = derivative_coeffs(d)
    return acc


def build_negated_sentence(R: RootConfiguration, C: Clustering, init_box, mode: str = "cramer"):
    """Constraint system satisfiable iff the robust-negativity sentence fails for (R, C, box).

    The sentence: on every domain point, the leading coefficient of the
    largest real root is negative, or some root outside [0, oo) that
    dominates every positive real root has a non-zero coefficient.
    """
    n = R.degree
    if mode == "determinant" and n > DETERMINANT_MAX_ORDER:
        mode = "existentialCoeffs"
    dom = domain_system(R, C, init_box)
    variables = R.root_variables + init_vars(n)
    bounds = dict(dom.bounds)
    atoms = [Atom(p, rel) for p, rel in dom.atoms]
    clauses = []

    if mode == "cramer":
        Nc = numerator_poly(R)

        def zero_real(v):
            return Atom(_coeff_zero_real(Nc, v.name, v.mult), "<=")

        def zero_complex(v):
            return Atom(_coeff_zero_complex(Nc, v.re, v.im, v.mult), "<=")

        def lead_nonneg(v):
            rho = _v(v.name)
            val = eval_univariate_real(Nc, v.name)
            # sign(a) = sign(N(rho) / rho^r); the other factors are positive on the domain
            return Atom(val * (rho if v.mult % 2 else rho * rho), ">=")
    elif mode == "determinant":
        det, nums = cramer_polys(R)

        def zero_real(v):
            acc = SymbolicPoly()
            for l in range(v.mult):
                acc = acc + nums[(v.name, l)].norm_sq()
            return Atom(acc, "<=")

        def zero_complex(v):
            acc = SymbolicPoly()
            for l in range(v.mult):
                acc = acc + nums[(v.re, l)].norm_sq()
            return Atom(acc, "<=")

        def lead_nonneg(v):
            return Atom(lead_sign_poly(R, det, nums), ">=")
    elif mode == "existentialCoeffs":
        eqs, gvars = _interpolation_equalities(R)
        variables += gvars
        for g in gvars:
            bounds[g] = None
        atoms += eqs

        def zero_real(v):
            acc = SymbolicPoly()
            for l in range(v.mult):
                acc = acc + _v(f"g_{v.name}_{l}") ** 2
            return Atom(acc, "<=")

        def zero_complex(v):
            acc = SymbolicPoly()
            for l in range(v.mult):
                acc = acc + _v(f"g_{v.re}_{l}_re") ** 2 + _v(f"g_{v.re}_{l}_im") ** 2
            return Atom(acc, "<=")

        def lead_nonneg(v):
            return Atom(_v(f"g_{v.name}_{v.mult - 1}"), ">=")
    else:
        raise ValueError(f"unknown mode {mode!r}")

    if R.real_vars:
        top = R.real_vars[0]
        rho1 = _v(top.name)
        atoms.append(lead_nonneg(top))
        for v in R.complex_vars:
            mod2 = _v(v.re) ** 2 + _v(v.im) ** 2
            clauses.append([[zero_complex(v)],
                            [Atom(rho1, ">"), Atom(mod2 - rho1 * rho1, "<=")]])
        for v in R.real_vars:
            rho = _v(v.name)
            clauses.append([[Atom(rho, ">=")], [zero_real(v)],
                            [Atom(rho1, ">"), Atom(rho * rho - rho1 * rho1, "<=")]])
    else:
        for v in R.complex_vars:
            atoms.append(zero_complex(v))

    S = ConstraintSystem(variables, {v: bounds.get(v) for v in variables}, atoms, clauses,
                         label=R.describe())
    return S


def _interpolation_equalities(R: RootConfiguration):
    n = R.degree
    gvars = []
    exprs = [SymbolicPoly() for _ in range(n)]
    for v in R.real_vars:
        rho = _v(v.name)
        for l in range(v.mult):
            g = f"g_{v.name}_{l}"
            gvars.append(g)
            for k in range(1, n + 1):
                exprs[k - 1] = exprs[k - 1] + _v(g) * (rho ** k) * (k ** l)
    for v in R.complex_vars:
        lam = ComplexPoly(_v(v.re), _v(v.im))
        for l in range(v.mult):
            gr, gi = f"g_{v.re}_{l}_re", f"g_{v.re}_{l}_im"
            gvars += [gr, gi]
            g = ComplexPoly(_v(gr), _v(gi))
            pw = ComplexPoly(1)
            for k in range(1, n + 1):
                pw = pw * lam
                exprs[k - 1] = exprs[k - 1] + (g * pw).re * (2 * k ** l)
    eqs = [Atom(e - _v(u), "=") for e, u in zip(exprs, init_vars(n))]
    return eqs, gvars


# -- refutation ------------------------------------------------------------------------

@dataclass
class RefutationResult:
    status: str  # "unsat" | "unknown"
    trace: dict = field(default_factory=dict)

    @property
    def unsat(self) -> bool:
        return self.status == "unsat"


def _prune(pending, box):
    """Evaluate the undecided part of the system on a box.

    ``pending`` is (atoms, clauses) where clauses are lists of terms and
    terms are lists of atoms.  Returns None if the box is refuted, else the
    still-undecided part (certain atoms and satisfied clauses dropped).
    """
    atoms, clauses = pending
    cache: dict = {}

    def enc(a: Atom):
        key = id(a)
        iv = cache.get(key)
        if iv is None:
            iv = cache[key] = a.poly.eval_centered(box)
        return iv

    keep_atoms = []
    for a in atoms:
        iv = enc(a)
        if a.refuted_by(iv):
            return None
        if not a.certain_on(iv):
            keep_atoms.append(a)
    keep_clauses = []
    for clause in clauses:
        terms = []
        satisfied = False
        for term in clause:
            rest = []
            dead = False
            for a in term:
                iv = enc(a)
                if a.refuted_by(iv):
                    dead = True
                    break
                if not a.certain_on(iv):
                    rest.append(a)
            if dead:
                continue
            if not rest:
                satisfied = True
                break
            terms.append(rest)
        if satisfied:
            continue
        if not terms:
            return None
        keep_clauses.append(terms)
    return keep_atoms, keep_clauses


def _live_vars(pending):
    atoms, clauses = pending
    out = set()
    for a in atoms:
        out.update(a.poly.variables)
    for c in clauses:
        for t in c:
            for a in t:
                out.update(a.poly.variables)
    return out


def refute_by_subdivision(S: ConstraintSystem, fuel: int = 100000) -> RefutationResult:
    """Unsat if every leaf of a subdivision of the variable box violates the system."""
    if any(S.bounds.get(v) is None for v in S.variables):
        return RefutationResult("unknown", {"reason": "unbounded variable", "boxes": 0})
    stack = [(dict(S.bounds), (list(S.atoms), [list(map(list, c)) for c in S.clauses]), 0)]
    boxes = 0
    depth = 0
    while stack:
        box, pending, d = stack.pop()
        boxes += 1
        depth = max(depth, d)
        if boxes > fuel:
            return RefutationResult("unknown", {"reason": "fuel", "boxes": boxes, "depth": depth})
        rest = _prune(pending, box)
        if rest is None:
            continue
        if not rest[0] and not rest[1]:
            return RefutationResult("unknown", {"reason": "box satisfies the system",
                                                "boxes": boxes, "depth": depth})
        live = _live_vars(rest)
        cands = [v for v in S.variables if v in live and not box[v].is_point]
        if not cands:
            return RefutationResult("unknown", {"reason": "point not refuted", "boxes": boxes,
                                                "depth": depth})
        var = max(cands, key=lambda v: box[v].width)
        lo, hi = box[var].bisect()
        for half in (hi, lo):
            nb = dict(box)
            nb[var] = half
            stack.append((nb, rest, d + 1))
    return RefutationResult("unsat", {"boxes": boxes, "depth": depth})


# -- SMT-LIB -------------------------------------------------------------------------

class SolverNotFound(RuntimeError):
    pass


class MalformedSolverOutput(RuntimeError):
    pass


def _conj(atoms):
    if not atoms:
        return "true"
    if len(atoms) == 1:
        return atoms[0].to_smt()
    return "(and " + " ".join(a.to_smt() for a in atoms) + ")"


def emit_smtlib(S: ConstraintSystem) -> str:
    lines = ["(set-logic QF_NRA)"]
    if S.label:
        lines.append(f"; {S.label}")
    for v in S.variables:
        lines.append(f"(declare-fun {v} () Real)")
    for v in S.variables:
        iv = S.bounds.get(v)
        if iv is not None:
            lines.append(f"(assert (<= {smt_rational(iv.lo)} {v}))")
            lines.append(f"(assert (<= {v} {smt_rational(iv.hi)}))")
    for a in S.atoms:
        lines.append(f"(assert {a.to_smt()})")
    for clause in S.clauses:
        terms = [_conj(t) for t in clause]
        body = terms[0] if len(terms) == 1 else "(or " + " ".join(terms) + ")"
        lines.append(f"(assert {body})")
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"


def external_solver_check(script: str, solver_path: str, timeout: float = 30.0) -> str:
    """Run ``<solver_path> <file>``; returns "sat", "unsat" or "unknown"."""
    exe = shutil.which(solver_path) or (solver_path if os.path.isfile(solver_path) else None)
    if exe is None or not os.access(exe, os.X_OK):
        raise SolverNotFound(solver_path)
    if timeout <= 0:
        return "unknown"
    with tempfile.NamedTemporaryFile("w", suffix=".smt2", delete=False) as fh:
        fh.write(script)
        path = fh.name
    try:
        proc = subprocess.run([exe, path], capture_output=True, text=True, timeout=timeout)
    except subprocess.TimeoutExpired:
        return "unknown"
    except OSError:
        return "unknown"
    finally:
        os.unlink(path)
    lines = [ln.strip() for ln in proc.stdout.splitlines() if ln.strip()]
    if lines and lines[0] in ("sat", "unsat", "unknown"):
        return lines[0]
    if proc.returncode != 0:
        return "unknown"
    raise MalformedSolverOutput(proc.stdout[:200])
