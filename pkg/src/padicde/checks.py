"""Built-in randomized property corpus, runnable from the command line.

Each check draws its own cases from a seeded generator and returns a
:class:`CheckResult`; nothing here depends on test frameworks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .coeff import CoeffField
from .laurent import LaurentSeries
from .ramification import (BreakData, artin_schreier_phi, compose, hasse_arf_polygon,
                           phi_from_lower, psi)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: int
    failed: int
    example: str | None = None       # first failing case, for diagnostics

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_json(self):
        out = {"name": self.name, "passed": self.passed, "failed": self.failed}
        if self.example is not None:
            out["example"] = self.example
        return out


def random_rational(rng: random.Random, p: int, content: int = 2) -> Fraction:
    num = rng.randint(-9, 9) or 1
    den = rng.randint(1, 9)
    return Fraction(num, den) * Fraction(p) ** rng.randint(-content, content)


def random_series(rng: random.Random, field: CoeffField, lo=-4, hi=4, density=0.5) -> LaurentSeries:
    terms = {}
    for k in range(lo, hi + 1):
        if rng.random() < density:
            terms[k] = field(random_rational(rng, field.p))
    if not terms:
        terms[rng.randint(lo, hi)] = field(1)
    return LaurentSeries(field, terms)


def random_s(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, 16), rng.choice([4, 8, 16]))


class _Tally:
    def __init__(self, name):
        self.name = name
        self.passed = 0
        self.failed = 0
        self.example = None

    def record(self, ok, case):
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if self.example is None:
                self.example = case

    def result(self):
        return CheckResult(self.name, self.passed, self.failed, self.example)


def _lam(x, s):
    return x.gauss_norm(s).lam


def check_ultrametric(cases=200, seed=1, p=2):
    field = CoeffField.rationals(p)
    rng = random.Random(seed)
    t = _Tally("gauss_norm ultrametric")
    for _ in range(cases):
        x, y, s = random_series(rng, field), random_series(rng, field), random_s(rng)
        lx, ly, lxy = _lam(x, s), _lam(y, s), _lam(x + y, s)
        ok = lxy >= min(lx, ly) and (lx == ly or lxy == min(lx, ly))
        t.record(ok, f"x={x}, y={y}, s={s}")
    return t.result()


def check_multiplicative(cases=200, seed=2, p=2):
    field = CoeffField.rationals(p)
    rng = random.Random(seed)
    t = _Tally("gauss_norm multiplicative")
    for _ in range(cases):
        x, y, s = random_series(rng, field), random_series(rng, field), random_s(rng)
        t.record(_lam(x * y, s) == _lam(x, s) + _lam(y, s), f"x={x}, y={y}, s={s}")
    return t.result()


def check_hadamard(cases=200, seed=3, p=2):
    """s ↦ λ_s(x) is concave (log |x|_ρ is convex in log ρ)."""
    field = CoeffField.rationals(p)
    rng = random.Random(seed)
    t = _Tally("Hadamard log-convexity")
    for _ in range(cases):
        x = random_series(rng, field)
        a = random_s(rng)
        b = a + random_s(rng)
        w = Fraction(rng.randint(1, 7), 8)
        mid = w * a + (1 - w) * b
        ok = _lam(x, mid) >= w * _lam(x, a) + (1 - w) * _lam(x, b)
        t.record(ok, f"x={x}, a={a}, b={b}, w={w}")
    return t.result()


def check_residue_of_derivative(cases=200, seed=4, p=2):
    field = CoeffField.rationals(p)
    rng = random.Random(seed)
    t = _Tally("residue of a derivative vanishes")
    for _ in range(cases):
        x = random_series(rng, field)
        t.record(x.derivative("d/dt").residue() == 0, f"x={x}")
    return t.result()


def check_substitution_homomorphism(cases=200, seed=5, p=2):
    field = CoeffField.rationals(p)
    rng = random.Random(seed)
    t = _Tally("substitute_power and frobenius_twist are ring maps")
    for _ in range(cases):
        x, y = random_series(rng, field), random_series(rng, field)
        n = rng.randint(1, 5)
        ok = ((x * y).substitute_power(n) == x.substitute_power(n) * y.substitute_power(n)
              and (x + y).substitute_power(n) == x.substitute_power(n) + y.substitute_power(n)
              and (x * y).frobenius_twist() == x.frobenius_twist() * y.frobenius_twist()
              and (x + y).frobenius_twist() == x.frobenius_twist() + y.frobenius_twist())
        s = random_s(rng)
        ok = ok and _lam(x.substitute_power(n), s / n) == _lam(x, s)
        t.record(ok, f"x={x}, y={y}, n={n}")
    return t.result()


def check_herbrand(points=20, seed=6):
    rng = random.Random(seed)
    t = _Tally("Herbrand: AS φ matches the lower filtration, ψ∘φ = id")
    for d, p in ((1, 2), (3, 2), (1, 3), (2, 3), (5, 2)):
        phi = artin_schreier_phi(d, p)
        t.record(phi == phi_from_lower([p] * (d + 1) + [1]), f"AS vs lower at d={d}, p={p}")
        inv = psi(phi)
        ident = compose(inv, phi)
        for _ in range(points):
            u = Fraction(rng.randint(0, 400), rng.randint(1, 40))
            t.record(inv(phi(u)) == u and ident(u) == u, f"d={d}, p={p}, u={u}")
    return t.result()


def check_hasse_arf(cases=50, seed=7):
    rng = random.Random(seed)
    t = _Tally("Hasse-Arf polygons of integral breaks are integral")
    for _ in range(cases):
        entries = [(rng.randint(0, 9), rng.randint(1, 3)) for _ in range(rng.randint(1, 4))]
        poly = hasse_arf_polygon(BreakData(entries))
        t.record(poly.integral, f"breaks={entries}")
    return t.result()


def check_radius_convexity(seed=8):
    """r(s) is convex in s on every sampled profile (three-point test)."""
    from .nabla.module import artin_schreier_module, exp_module, unipotent_from_nilpotent
    from .nabla.radius import generic_radius_profile
    q2 = CoeffField.rationals(2)
    modules = [artin_schreier_module(q2, 1, 1), artin_schreier_module(q2, 1, 3),
               exp_module(q2), unipotent_from_nilpotent(q2, [[0, 1], [0, 0]])]
    t = _Tally("generic radius is convex in s")
    for m in modules:
        s_list = [Fraction(1, 16), Fraction(1, 8), Fraction(1, 4)]
        prof = generic_radius_profile(m, s_list, 64)
        (a, ra), (b, rb), (c, rc) = [(x.s, x.r) for x in prof.samples]
        ok = rb <= ra + (rc - ra) * (b - a) / (c - a)
        ok = ok and all(x.r >= x.s for x in prof.samples)
        t.record(ok, f"module={m.matrix}")
    return t.result()


def check_unipotent_cohomology(cases=40, seed=9):
    from .matrix import rank
    from .nabla.module import h0_h1_dims_unipotent, jordan_block_sizes
    q2 = CoeffField.rationals(2)
    rng = random.Random(seed)
    t = _Tally("unipotent H0 = H1 = number of Jordan blocks")
    for _ in range(cases):
        sizes = []
        total = 0
        while total < 5:
            k = rng.randint(1, 3)
            sizes.append(k)
            total += k
        n = total
        C = [[Fraction(0)] * n for _ in range(n)]
        pos = 0
        for k in sizes:
            for i in range(k - 1):
                C[pos + i][pos + i + 1] = Fraction(1)
            pos += k
        h0, h1 = h0_h1_dims_unipotent(q2, C)
        kernel = n - rank(C)
        t.record(h0 == h1 == kernel == len(sizes)
                 and sorted(jordan_block_sizes(q2, C)) == sorted(sizes), f"blocks={sizes}")
    return t.result()


CHECKS = {
    "ultrametric": check_ultrametric,
    "multiplicative": check_multiplicative,
    "hadamard": check_hadamard,
    "residue": check_residue_of_derivative,
    "substitution": check_substitution_homomorphism,
    "herbrand": check_herbrand,
    "hasse-arf": check_hasse_arf,
    "convexity": check_radius_convexity,
    "unipotent": check_unipotent_cohomology,
}


def run_checks(names=None):
    names = list(CHECKS) if not names else names
    return [CHECKS[name]() for name in names]
