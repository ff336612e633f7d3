"""Bundled verification suites behind the CLI and the acceptance tests.

Each suite recomputes one family of claims from scratch (oracle against
engine, identity against definition, bound against sample) and returns a
SuiteResult whose `details` carry the measured numbers; `counterexample`
holds the first failing datum, if any.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt, log, pi, sqrt

import numpy as np

from .arith import (
    FormParameter,
    Sieve,
    chi,
    dirichlet_divisor_sum,
    divisors,
    kronecker,
    ramanujan_sum,
)
from .calibration import load_calibration
from .constants import l1_class_number_form, l_value, theorem_constants
from .expsums import geometric_sum_magnitude, growth_factors, sieve_bound_study
from .rho import (
    RhoTable,
    convolution_identity,
    error_band_constant,
    lattice_count_ellipse,
    norm_shell_count,
    rep_count,
    rep_count_by_character,
    rep_count_exceptional,
    rho_brute,
    rho_full,
    rho_prime_power,
)
from .roots import verify_bijection
from .sums import (
    EngineEnv,
    brute_force_prefix,
    brute_force_s,
    floor_b,
    hyperbola_s,
    residual_slope,
    residual_study,
)

THEOREM_FORMS = (2, 67, 163)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    counterexample: object = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extras = "  ".join(f"{k}={v}" for k, v in self.details.items())
        tail = f"  counterexample={self.counterexample}" if self.counterexample else ""
        return f"{status}  {self.name}  {extras}{tail}"


# ---------------------------------------------------------------------------

def suite_engines(x_max: int = 200, spot_checks: "dict[int, list[int]] | None" = None,
                  forms=THEOREM_FORMS) -> SuiteResult:
    """hyperbola_s == brute_force_s for every x <= x_max, plus spot checks."""
    if spot_checks is None:
        spot_checks = {2: [350, 500]}
    counter = None
    checked = 0
    for n in forms:
        param = FormParameter.make(n)
        prefix = brute_force_prefix(param, x_max)
        env = EngineEnv(param, floor_b(param, x_max))
        for x in range(1, x_max + 1):
            got = hyperbola_s(param, x, env=env).s_sum
            checked += 1
            if got != prefix[x]:
                counter = (n, x, got, prefix[x])
                break
        if counter:
            break
    if counter is None:
        for n, xs in spot_checks.items():
            param = FormParameter.make(n)
            for x in xs:
                got = hyperbola_s(param, x).s_sum
                want = brute_force_s(param, x)
                checked += 1
                if got != want:
                    counter = (n, x, got, want)
                    break
    return SuiteResult("engine-equivalence", counter is None,
                       {"checked": checked}, counter)


def suite_anchors() -> SuiteResult:
    """Hand-verified values: S_2(2) = 15 with (R,Q,T) = (10,1,4); S_163(1) = 6."""
    p2 = FormParameter.make(2)
    d = hyperbola_s(p2, 2)
    ok = (d.r_sum, d.q_sum, d.t_sum, d.s_sum) == (10, 1, 4, 15)
    ok &= brute_force_s(p2, 2) == 15
    ok163 = brute_force_s(FormParameter.make(163), 1) == 6
    ok163 &= hyperbola_s(FormParameter.make(163), 1).s_sum == 6
    return SuiteResult("worked-anchors", ok and ok163,
                       {"S_2(2)": d.s_sum, "decomposition": (d.r_sum, d.q_sum, d.t_sum)})


def suite_bijection(d_max: int = 10_000, d_max_even7: int = 512,
                    forms=THEOREM_FORMS) -> SuiteResult:
    """Both root enumerations agree on every branch modulus."""
    counter = None
    checked = 0
    sieve = Sieve(max(d_max, d_max_even7))
    for n in forms:
        rep = verify_bijection(FormParameter.make(n), d_max, sieve)
        checked += rep.checked
        if rep.mismatches:
            counter = (n, rep.mismatches[0])
            break
    if counter is None:
        rep = verify_bijection(FormParameter.make(7), d_max_even7, sieve)
        checked += rep.checked
        if rep.mismatches:
            counter = (7, rep.mismatches[0])
    return SuiteResult("root-bijection", counter is None,
                       {"checked": checked}, counter)


def suite_approx(d_max: int = 100_000, forms=(1, 2, 67, 163)) -> SuiteResult:
    """Every produced fraction passes the exact inequality; q/sqrt(d) floored."""
    from .approx import iter_approximations

    cal = load_calibration()
    floor = float(cal["approx"]["c1_floor"])
    counter = None
    details = {}
    sieve = Sieve(d_max)
    for n in forms:
        param = FormParameter.make(n)
        lo, hi = math.inf, 0.0
        count = fallbacks = 0
        for ap in iter_approximations(param, d_max, sieve):
            count += 1
            fallbacks += ap.fallback
            if abs(Fraction(ap.v, ap.d) - Fraction(ap.a, ap.q)) > Fraction(1, ap.q ** 2):
                counter = (n, ap)
                break
            ratio = ap.ratio
            lo, hi = min(lo, ratio), max(hi, ratio)
        details[f"N{n}"] = (round(lo, 4), round(hi, 4), count, fallbacks)
        if counter:
            break
        if not lo > floor:
            counter = (n, "c1", lo)
            break
    return SuiteResult("approximation-quality", counter is None, details, counter)


def suite_sieve_growth(d_min: int = 64, d_max: int = 16_384, h_max: int = 16,
                       forms=THEOREM_FORMS) -> SuiteResult:
    """Bound ratio growth per doubling stays under base*slack from growth_from_d."""
    cal = load_calibration()["sieve"]
    limit = float(cal["growth_base"]) * float(cal["growth_slack"])
    from_d = int(cal["growth_from_d"])
    counter = None
    details = {}
    grid = []
    d = d_min
    while d <= d_max:
        grid.append(d)
        d *= 2
    for n in forms:
        samples = sieve_bound_study(FormParameter.make(n), grid, h_max, "d")
        factors = growth_factors(samples)
        worst = max((f for d0, f in factors if d0 >= from_d), default=0.0)
        details[f"N{n}"] = round(worst, 4)
        if worst > limit:
            counter = (n, worst, limit)
            break
    details["limit"] = round(limit, 4)
    return SuiteResult("sieve-bound-growth", counter is None, details, counter)


def suite_rho(d_max_brute: int = 2000, k_max_conv: int = 10_000,
              n_max_dirichlet: int = 2000, forms=THEOREM_FORMS) -> SuiteResult:
    """Multiplicative values vs direct counts, convolution and series identities."""
    counter = None
    checked = 0
    sieve = Sieve(max(k_max_conv, n_max_dirichlet, d_max_brute))
    for n in forms:
        param = FormParameter.make(n)
        for d in range(1, d_max_brute + 1):
            checked += 1
            if rho_full(param, sieve.factored(d)) != rho_brute(param, d):
                counter = (n, "brute", d)
                break
        if counter:
            break
        for k in range(1, k_max_conv + 1):
            checked += 1
            if convolution_identity(param, k, sieve) != rho_full(param, sieve.factored(k)):
                counter = (n, "convolution", k)
                break
        if counter:
            break
        bad = _dirichlet_coefficient_check(param, n_max_dirichlet, sieve)
        checked += n_max_dirichlet
        if bad is not None:
            counter = (n, "dirichlet", bad)
            break
    return SuiteResult("rho-certification", counter is None,
                       {"checked": checked}, counter)


def _dirichlet_coefficient_check(param: FormParameter, limit: int,
                                 sieve: Sieve, rel_tol: float = 1e-9):
    """Coefficients of zeta * L * G against rho(n)/n up to `limit`."""
    g = np.zeros(limit + 1)
    g[1] = 1.0
    for d in range(2, limit + 1):
        fact = sieve.factorize(d)
        if len(fact) == 1:
            p, k = fact[0]
            if (2 * param.n) % p == 0:
                c = [rho_prime_power(param, p, j) / p ** j for j in range(k + 1)]
                cp = chi(param, p)
                g[d] = c[k] - (1 + cp) * (c[k - 1] if k >= 1 else 0.0) \
                    + cp * (c[k - 2] if k >= 2 else 0.0)
            else:
                g[d] = -chi(param, p) / p if k == 1 else 0.0
        else:
            parts = 1.0
            for p, k in fact:
                parts *= g[p ** k]
            g[d] = parts
    zl = np.zeros(limit + 1)
    for d in range(1, limit + 1):
        cd = chi(param, d)
        if cd:
            zl[d:: d] += cd  # zeta * L coefficients: sum of chi over divisors
    full = np.zeros(limit + 1)
    for d in range(1, limit + 1):
        if g[d]:
            full[d:: d] += g[d] * zl[np.arange(1, limit // d + 1)]
    for m in range(1, limit + 1):
        want = rho_full(param, sieve.factored(m)) / m
        if abs(full[m] - want) > rel_tol * max(1.0, abs(want)):
            return (m, full[m], want)
    return None


def suite_error_band(y_max: int = 100_000, forms=THEOREM_FORMS,
                     tables: "dict[int, RhoTable] | None" = None) -> SuiteResult:
    """|E(y)| within the frozen band; prefix of rho/d^2 converges to 2*EI + A."""
    from .constants import e_integral, g_euler

    cal = load_calibration()["rho"]
    counter = None
    details = {}
    for n in forms:
        param = FormParameter.make(n)
        table = tables.get(n) if tables else None
        if table is None or table.limit < y_max:
            table = RhoTable.build(param, y_max)
        a_const = l_value(param, 1) * g_euler(param, 1)[0] / 2
        c_emp = error_band_constant(table, a_const,
                                    int(cal["e_band_prefix"]),
                                    float(cal["e_band_safety"]))
        worst_y, worst_ratio = 0, 0.0
        for y in range(2, y_max + 1):
            band = y ** (4.0 / 3.0) * log(y) ** 2
            ratio = abs(table.e_value(y, a_const)) / (c_emp * band)
            if ratio > worst_ratio:
                worst_y, worst_ratio = y, ratio
        details[f"N{n}_band_use"] = round(worst_ratio, 4)
        if worst_ratio > 1.0:
            counter = (n, "band", worst_y)
            break
        ei, ei_hw = e_integral(param, y_max, table, a_const, c_emp)
        target = 2 * ei + a_const
        for y in (10_000, y_max):
            got = float(table.partial_rho_over_d2[y]) - 2 * a_const * log(y)
            # remainder bound: |E(y)|/y^2 + 2 * band tail, plus the EI tail
            big_l = log(y)
            allowance = (c_emp * y ** (-2 / 3) * big_l ** 2
                         + 2 * c_emp * y ** (-2 / 3)
                         * (1.5 * big_l ** 2 + 4.5 * big_l + 6.75)
                         + 2 * ei_hw)
            if abs(got - target) > allowance:
                counter = (n, "rho_over_d2", y, got, target, allowance)
                break
        if counter:
            break
        details[f"N{n}_d2_gap"] = round(abs(got - target), 6)
    return SuiteResult("error-band", counter is None, details, counter)


def suite_constants(tables: "dict[int, RhoTable] | None" = None,
                    forms=THEOREM_FORMS) -> SuiteResult:
    """L(1) against class-number closed forms; C2 stable across EI cutoffs."""
    counter = None
    details = {}
    for n in forms:
        param = FormParameter.make(n)
        got = l_value(param, 1)
        want = l1_class_number_form(param)
        details[f"L1_N{n}_err"] = f"{abs(got - want):.2e}"
        if abs(got - want) > 1e-10:
            counter = (n, "L1", got, want)
            break
    if counter is None:
        param = FormParameter.make(2)
        table = tables.get(2) if tables else None
        if table is None or table.limit < 400_000:
            table = RhoTable.build(param, 400_000)
        c_lo = theorem_constants(param, table, cutoff=100_000)
        c_hi = theorem_constants(param, table, cutoff=400_000)
        gap = abs(c_lo.c2 - c_hi.c2)
        allowed = c_lo.c2_halfwidth + c_hi.c2_halfwidth
        details["C2_cutoff_gap"] = f"{gap:.2e}"
        details["C2"] = round(c_hi.c2, 9)
        if gap > allowed:
            counter = (2, "C2-cutoffs", gap, allowed)
    return SuiteResult("asymptotic-constants", counter is None, details, counter)


def suite_residual(grid=(512, 1024, 2048, 4096),
                   table: "RhoTable | None" = None) -> SuiteResult:
    """Theorem shadow at N = 2: slope and end-to-end decay of residual/x^2."""
    cal = load_calibration()["residual"]
    param = FormParameter.make(2)
    if table is None or table.limit < 400_000:
        table = RhoTable.build(param, 400_000)
    constants = theorem_constants(param, table, cutoff=400_000)
    records = residual_study(param, list(grid), constants)
    slope = residual_slope(records)
    first, last = abs(records[0].residual_x2), abs(records[-1].residual_x2)
    decrease = first / last if last else math.inf
    ok_slope = slope <= float(cal["slope_max"])
    ok_decrease = decrease >= float(cal["x2_decrease_min"])
    details = {
        "slope": round(slope, 4),
        "x2_decrease": round(decrease, 4),
        "residual_x2": [round(r.residual_x2, 6) for r in records],
        "residual_x32": [round(r.residual_x32, 4) for r in records],
    }
    counter = None if (ok_slope and ok_decrease) else ("N=2", "slope/decrease")
    return SuiteResult("theorem-shadow", ok_slope and ok_decrease, details, counter)


def suite_identities(n_max: int = 10_000, forms=THEOREM_FORMS) -> SuiteResult:
    """Lattice/character/Ramanujan/geometric-sum identities at stated scales.

    The divisor-character count 2*sum_{d|m} chi(d) equals the number of
    ring-of-integers elements of norm m (norm_shell_count); this also equals
    the plain i^2 + N j^2 shell for N = 2, where the representation count
    r_N obeys the half-character identity off squares and doubled squares.
    """
    counter = None
    checked = 0
    sieve = Sieve(n_max)
    lattice_forms = tuple(forms) + ((7,) if 7 not in forms else ())
    for n in lattice_forms:
        param = FormParameter.make(n)
        prev = lattice_count_ellipse(param, Fraction(1, 2))
        for m in range(1, n_max + 1):
            want = 2 * sum(chi(param, d) for d in divisors(sieve.factored(m)))
            checked += 1
            if norm_shell_count(param, m) != want:
                counter = (n, "norm-shell", m, want)
                break
            if n == 2:
                # integral-form shell, via the ellipse prefix difference
                cur = lattice_count_ellipse(param, m)
                if cur - prev != want:
                    counter = (n, "lattice", m, cur - prev, want)
                    break
                prev = cur
        if counter:
            break
        if n == 2:
            for m in range(1, n_max + 1):
                if rep_count_exceptional(param, m):
                    continue
                checked += 1
                if Fraction(rep_count(param, m)) != rep_count_by_character(param, m, sieve):
                    counter = (n, "rep-count", m)
                    break
        if counter:
            break
    if counter is None:
        for d in range(1, 501):
            units = [u for u in range(1, d + 1) if gcd(u, d) == 1]
            angles = np.array(units, dtype=np.float64) * (2 * pi / d)
            for w in range(d):
                direct = float(np.cos(angles * w).sum())
                checked += 1
                if abs(direct - ramanujan_sum(w, d)) > 1e-9 * max(1.0, d):
                    counter = ("ramanujan", d, w)
                    break
            if counter:
                break
    if counter is None:
        rng = random.Random(20260810)
        for _ in range(1000):
            d = rng.randrange(1, 10_001)
            v = rng.randrange(0, d)
            h = rng.randrange(1, 64)
            m_len = rng.randrange(1, 10_001)
            got, _ = geometric_sum_magnitude(h, v, d, m_len)
            ns = np.arange(1, m_len + 1, dtype=np.float64)
            theta = 2 * pi * ((h * v) % d) / d
            direct = abs(np.exp(1j * theta * ns).sum())
            checked += 1
            if abs(got - direct) > 1e-8 * max(1.0, direct):
                counter = ("geometric", d, v, h, m_len, got, direct)
                break
    return SuiteResult("identity-suite", counter is None, {"checked": checked},
                       counter)


def suite_divisor_sum_band() -> SuiteResult:
    """Dirichlet's divisor prefix stays within 4*sqrt(x) of its main term."""
    band = float(load_calibration()["divisor_sum"]["band"])
    gamma0 = 0.5772156649015329
    counter = None
    xs = list(range(100, 2001, 7)) + [10 ** k for k in range(3, 7)]
    rng = random.Random(7)
    xs += [rng.randrange(100, 10 ** 6) for _ in range(200)]
    worst = 0.0
    for x in xs:
        err = abs(dirichlet_divisor_sum(x) - (x * log(x) + (2 * gamma0 - 1) * x))
        worst = max(worst, err / sqrt(x))
        if err > band * sqrt(x):
            counter = ("divisor-sum", x)
            break
    return SuiteResult("divisor-sum-band", counter is None,
                       {"worst": round(worst, 3), "band": band}, counter)


SUITES = {
    "engines": lambda: suite_engines(),
    "anchors": suite_anchors,
    "bijection": lambda: suite_bijection(),
    "approx": lambda: suite_approx(),
    "sieve": lambda: suite_sieve_growth(),
    "rho": lambda: suite_rho(),
    "error-band": lambda: suite_error_band(),
    "constants": lambda: suite_constants(),
    "residual": lambda: suite_residual(),
    "identities": lambda: suite_identities(),
    "divisor-sum": suite_divisor_sum_band,
}
