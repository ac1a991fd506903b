"""Command-line front end.

Exit codes: 0 = answer 1, 1 = answer 0, 2 = budget exhausted, 3 = input
error, 4 = solver misconfiguration.  ``check-cert`` exits 0 when the
certificate is valid and 1 otherwise.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import re
import sys
from fractions import Fraction

from .configs import enumerate_configurations
from .fodecide import SolverNotFound, build_negated_sentence, emit_smtlib
from .linrec import LinRec
from .numeric import Interval, Q
from .problems import Fuel, Verdict, box_trichotomy, check_certificate, decide
from .spectral import clustering_at

EXIT_ONE, EXIT_ZERO, EXIT_EXHAUSTED, EXIT_INPUT, EXIT_SOLVER = 0, 1, 2, 3, 4


class InputError(ValueError):
    pass


def _load_json(arg: str):
    try:
        if arg == "-":
            return json.load(sys.stdin)
        if os.path.exists(arg):
            with open(arg) as fh:
                return json.load(fh)
        return json.loads(arg)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON from {arg!r}: {exc}") from exc


def _load_instance(arg: str) -> LinRec:
    try:
        return LinRec.from_json(_load_json(arg))
    except (ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        raise InputError(str(exc)) from exc


_BOX_POWER = re.compile(r"^\s*\[([^,\]]+),([^\]]+)\]\s*\^\s*(\d+)\s*$")
_BOX_ITEM = re.compile(r"\[([^,\]]+),([^\]]+)\]")


def parse_box(text: str):
    """``[-2,2]^4``, ``[a,b]x[c,d]...`` or a JSON list of pairs."""
    try:
        m = _BOX_POWER.match(text)
        if m:
            return [Interval(Q(m.group(1).strip()), Q(m.group(2).strip()))] * int(m.group(3))
        if text.strip().startswith("[["):
            return [Interval(Q(str(a)), Q(str(b))) for a, b in json.loads(text)]
        items = _BOX_ITEM.findall(text)
        if not items:
            raise ValueError("no intervals found")
        return [Interval(Q(a.strip()), Q(b.strip())) for a, b in items]
    except (ValueError, TypeError, ZeroDivisionError, json.JSONDecodeError) as exc:
        raise InputError(f"malformed box {text!r}: {exc}") from exc


def _fuel(args) -> Fuel:
    solver = getattr(args, "solver", None)
    if getattr(args, "backend", "internal") == "smtlib" and not solver:
        raise SolverNotFound("backend smtlib requires --solver")
    if solver and not (os.path.isfile(solver) or _which(solver)):
        raise SolverNotFound(solver)
    return Fuel(p_min=args.p_min, p_max=args.p_max, k_max=args.k_max,
                max_subdivisions=args.max_subdivisions,
                solver_timeout=args.solver_timeout,
                solver_path=solver if args.backend == "smtlib" else None)


def _which(name):
    import shutil
    return shutil.which(name)


def _add_fuel_args(p, p_max=12):
    p.add_argument("--p-min", type=int, default=2)
    p.add_argument("--p-max", type=int, default=p_max)
    p.add_argument("--k-max", type=int, default=500)
    p.add_argument("--max-subdivisions", type=int, default=10 ** 6)
    p.add_argument("--backend", choices=["internal", "smtlib"], default="internal")
    p.add_argument("--solver", default=None, help="SMT solver binary invoked as <solver> <file>")
    p.add_argument("--solver-timeout", type=float, default=30.0)


def _dump(obj, out):
    text = json.dumps(obj, indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    print(text)


def _exit_for(v: Verdict) -> int:
    if not v.halted:
        return EXIT_EXHAUSTED
    return EXIT_ONE if v.answer == 1 else EXIT_ZERO


def cmd_decide(args) -> int:
    r = _load_instance(args.instance)
    v = decide(args.problem, r, _fuel(args))
    _dump(v.to_json(), args.out)
    return _exit_for(v)


def cmd_trichotomy(args) -> int:
    box = parse_box(args.box)
    if len(box) % 2:
        raise InputError("box needs 2n coordinates (coefficients then initial values)")
    fuel = Fuel(p_min=args.p_min, p_max=args.p_max, k_max=args.k_max,
                max_subdivisions=args.max_subdivisions)
    ans = box_trichotomy(args.problem, box, fuel, args.max_boxes)
    print("exhausted" if ans is None else ans)
    return {1: EXIT_ONE, 0: EXIT_ZERO, -1: 0, None: EXIT_EXHAUSTED}[ans]


def cmd_check(args) -> int:
    r = _load_instance(args.instance)
    try:
        v = Verdict.from_json(_load_json(args.certificate))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed verdict: {exc}") from exc
    fuel = Fuel(max_subdivisions=args.max_subdivisions, solver_path=args.solver)
    ok, reason = check_certificate(r, v, fuel)
    status = "valid" if ok else "invalid"
    print(status if reason == status else f"{status}: {reason}")
    return 0 if ok else 1


def cmd_emit(args) -> int:
    r = _load_instance(args.instance)
    C, _ = clustering_at(r, args.precision)
    if C is None:
        print(f"no clustering at precision {args.precision}", file=sys.stderr)
        return EXIT_EXHAUSTED
    init_box = [u.query(args.precision) for u in r.inits]
    os.makedirs(args.out_dir, exist_ok=True)
    for i, R in enumerate(enumerate_configurations(C), start=1):
        S = build_negated_sentence(R, C, init_box, args.mode)
        path = os.path.join(args.out_dir, f"config{i:03d}.smt2")
        with open(path, "w") as fh:
            fh.write(emit_smtlib(S))
        print(f"{path}\t{R.describe()}")
    return 0


def sample_instance(rng: random.Random, box, grid: int = 1024) -> LinRec:
    """Uniform point of the dyadic grid with spacing width/grid in every coordinate."""
    vals = [iv.lo + (iv.hi - iv.lo) * Q(Fraction(rng.randint(0, grid), grid)) for iv in box]
    n = len(vals) // 2
    return LinRec.exact(vals[:n], vals[n:])


def cmd_measure(args) -> int:
    box = parse_box(args.box)
    if len(box) != 2 * args.order:
        raise InputError(f"box must have {2 * args.order} coordinates")
    fuel = _fuel(args)
    rng = random.Random(args.seed)
    halted = 0
    answers = {0: 0, 1: 0}
    for _ in range(args.samples):
        r = sample_instance(rng, box)
        v = decide(args.problem, r, fuel)
        if v.halted:
            halted += 1
            answers[v.answer] += 1
    frac = Fraction(halted, args.samples) if args.samples else Fraction(0)
    _dump({"problem": args.problem, "order": args.order, "samples": args.samples,
           "seed": args.seed, "halted": halted, "answers": {str(k): v for k, v in answers.items()},
           "fraction": float(frac), "fraction_exact": f"{frac.numerator}/{frac.denominator}"},
          args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="robustrec", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    problems = ["positivity", "upp", "skolem"]

    p = sub.add_parser("decide", help="run a partial decider on an instance")
    p.add_argument("instance", help="instance JSON (file path, inline JSON or '-')")
    p.add_argument("--problem", choices=problems, required=True)
    p.add_argument("--out", default=None)
    _add_fuel_args(p)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("trichotomy", help="classify a rational box of instances")
    p.add_argument("--problem", choices=problems, required=True)
    p.add_argument("--box", required=True, help='e.g. "[0.9,1.1]x[0.9,1.1]"')
    p.add_argument("--max-boxes", type=int, default=64)
    p.add_argument("--p-min", type=int, default=2)
    p.add_argument("--p-max", type=int, default=5)
    p.add_argument("--k-max", type=int, default=64)
    p.add_argument("--max-subdivisions", type=int, default=10 ** 4)
    p.set_defaults(func=cmd_trichotomy)

    p = sub.add_parser("check-cert", help="replay the certificate of a verdict")
    p.add_argument("instance")
    p.add_argument("certificate", help="verdict JSON as printed by decide")
    p.add_argument("--max-subdivisions", type=int, default=10 ** 6)
    p.add_argument("--solver", default=None)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("emit-smt", help="write the negated sentences as SMT-LIB scripts")
    p.add_argument("instance")
    p.add_argument("--precision", type=int, required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--mode", choices=["cramer", "determinant", "existentialCoeffs"],
                   default="cramer")
    p.set_defaults(func=cmd_emit)

    p = sub.add_parser("measure", help="halting fraction on uniformly sampled instances")
    p.add_argument("--problem", choices=problems, required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--box", required=True, help='e.g. "[-2,2]^4"')
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    _add_fuel_args(p, p_max=6)
    p.set_defaults(func=cmd_measure)
    return ap


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SolverNotFound as exc:
        print(f"solver misconfiguration: {exc}", file=sys.stderr)
        return EXIT_SOLVER


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
