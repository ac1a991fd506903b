"""Random instance generators shared by the test modules."""
from fractions import Fraction

import sympy

from robustrec.configs import ComplexVar, RealVar, RootConfiguration, compositions, partitions
from robustrec.poly import IntervalPoly


def rand_rational(rng, bound=2, max_den=16):
    d = rng.randint(1, max_den)
    return Fraction(rng.randint(-bound * d, bound * d), d)


def rand_instance(rng, orders=(1, 2, 3)):
    n = rng.choice(orders)
    return [rand_rational(rng) for _ in range(n)], [rand_rational(rng) for _ in range(n)]


def poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def random_factored_poly(rng, max_degree=6):
    """(ascending Fraction coefficients, [(kind, data, mult)]) built from known factors.

    kinds: "rat" a -> (x - a); "cplx" (b, c) -> roots b +- ic; "surd" d -> roots +-sqrt(d).
    """
    coeffs = [Fraction(1)]
    factors = []
    used = set()
    while len(coeffs) - 1 < max_degree:
        room = max_degree - (len(coeffs) - 1)
        kind = rng.choice(["rat", "cplx", "surd"] if room >= 2 else ["rat"])
        mult = rng.randint(1, 3 if kind == "rat" else 1)
        deg = mult * (1 if kind == "rat" else 2)
        if deg > room:
            continue
        if kind == "rat":
            data = Fraction(rng.randint(-12, 12), rng.choice([1, 2, 4]))
            f = [-data, Fraction(1)]
        elif kind == "cplx":
            data = (Fraction(rng.randint(-8, 8), 4), Fraction(rng.randint(1, 8), 4))
            b, c = data
            f = [b * b + c * c, -2 * b, Fraction(1)]
        else:
            data = Fraction(rng.choice([2, 3, 5, 6, 7, 10]), rng.choice([1, 4]))
            f = [-data, Fraction(0), Fraction(1)]
        if (kind, data) in used:
            continue
        if kind == "rat" and any(k == "surd" and d == data * data for k, d in used):
            continue
        if kind == "surd" and any(k == "rat" and d * d == data for k, d in used):
            continue
        used.add((kind, data))
        for _ in range(mult):
            coeffs = poly_mul(coeffs, f)
        factors.append((kind, data, mult))
        if rng.random() < 0.35:
            break
    return coeffs, factors


def known_roots(factors):
    """[(contains(box) predicate, multiplicity)] for every distinct root."""
    out = []
    for kind, data, mult in factors:
        if kind == "rat":
            out.append((lambda B, a=data: B.contains((a, 0)), mult))
        elif kind == "cplx":
            b, c = data
            out.append((lambda B, b=b, c=c: B.contains((b, c)), mult))
            out.append((lambda B, b=b, c=c: B.contains((b, -c)), mult))
        else:
            for sgn in (1, -1):
                out.append((lambda B, d=data, s=sgn: _contains_surd(B, d, s), mult))
    return out


def _contains_surd(B, d, sgn):
    if not B.im.contains(0):
        return False
    lo, hi = B.re.lo, B.re.hi
    if sgn < 0:
        lo, hi = -hi, -lo
    below = lo <= 0 or lo * lo <= d
    above = hi >= 0 and hi * hi >= d
    return below and above


def exact_poly(coeffs) -> IntervalPoly:
    return IntervalPoly([c for c in coeffs])


def random_configuration(rng, max_degree=4) -> RootConfiguration:
    """Configuration with at least one real variable and total degree <= max_degree."""
    n = rng.randint(1, max_degree)
    pairs = rng.randint(0, (n - 1) // 2)
    cplx = rng.choice(list(partitions(pairs)))
    reals = rng.choice(list(compositions(n - 2 * pairs)))
    R = RootConfiguration(layout=[(reals, cplx)])
    for i, m in enumerate(reals, start=1):
        R.real_vars.append(RealVar(f"r{i}", m, 0))
    for i, m in enumerate(cplx, start=1):
        R.complex_vars.append(ComplexVar(f"x{i}", f"y{i}", m, 0))
    return R


def random_domain_point(rng, R: RootConfiguration):
    """Exact point with descending distinct non-zero reals, Im > 0 and distinct pairs."""
    point = {}
    grid = [a for a in range(-24, 25) if a]
    reals = sorted(rng.sample(grid, len(R.real_vars)), reverse=True)
    for v, a in zip(R.real_vars, reals):
        point[v.name] = Fraction(a, 8)
    seen = set()
    for v in R.complex_vars:
        while True:
            x, y = Fraction(rng.randint(-16, 16), 8), Fraction(rng.randint(1, 16), 8)
            if (x, y) not in seen:
                break
        seen.add((x, y))
        point[v.re], point[v.im] = x, y
    return point


def sympy_roots(R: RootConfiguration, point):
    """{sympy root: multiplicity} ordered as the confluent columns (real vars first)."""
    out = {}
    for v in R.real_vars:
        out[sympy.Rational(point[v.name].numerator, point[v.name].denominator)] = v.mult
    for v in R.complex_vars:
        x = sympy.Rational(point[v.re].numerator, point[v.re].denominator)
        y = sympy.Rational(point[v.im].numerator, point[v.im].denominator)
        out[x + sympy.I * y] = v.mult
        out[x - sympy.I * y] = v.mult
    return out


# acceptance report: criterion number -> one status line
ACCEPTANCE_LINES: dict = {}


def report_criterion(number: int, title: str, passed, detail: str = "") -> str:
    """passed=None records a skip."""
    status = "SKIP" if passed is None else ("PASS" if passed else "FAIL")
    line = f"criterion {number:2d} {status}  {title}"
    if detail:
        line += f"  [{detail}]"
    ACCEPTANCE_LINES[number] = line
    print(line)
    return line
