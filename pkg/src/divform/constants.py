"""L-values, the Euler correction factor, and the asymptotic coefficients.

The headline expansion is S_N(x) = C1*x^2*log(x) + C2*x^2 + O(x^(3/2+eps))
with

    C1 = 4*A,        A = L(1, chi) * G(2) / 2,

and C2 assembled from the exact decomposition S = 2R - Q - T of the divisor
sum: the three pieces contribute

    2R: 4*EI + 2*A*(log(N+1) + 1)            (EI = integral of E(t)/t^3)
    -Q: -(pi sqrt(N)/2) * A                   (over k <= N*x/sqrt(1+N);
          equals -pi^2/(8 L(2,chi)) for N = 2)
    -T: -(A/sqrt(N)) * [6 sqrt(N) - 3 sqrt(N-1) - N acos(sqrt(1-1/N))
          - 2N atan(1/sqrt(N)) - 2 atan(sqrt(N)) + 2 atan(sqrt(N-1))]

plus the boundary correction between the k-threshold that the closed forms
use (N*x/sqrt(1+N), where the inner count ranges over all n) and the exact
engine's box-constrained count:

    delta = (A/sqrt(N)) * [(N+2) atan(sqrt(N-1)) - 3 sqrt(N-1)].

The arctan terms telescope, leaving

    C2 = 4*EI + 2*A*(log(N+1)+1) - pi^2/(8*L2)
         - (A/sqrt(N)) * (6*sqrt(N) + 2*(N-1)*atan(sqrt(N)) - 3*pi*N/2).

L-values are computed independently of the closed forms they are tested
against: L(2, chi) by the Hurwitz-zeta decomposition over residue classes and
L(1, chi) by the digamma version of the same decomposition.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from math import atan, log, pi, sqrt

import numpy as np

from .arith import FormParameter, chi, primes_up_to
from .calibration import load_calibration
from .rho import RhoTable, error_band_constant, rho_prime_power

logger = logging.getLogger(__name__)

CONSTANT_FORMS = (1, 2, 67, 163)

# Bernoulli numbers B_2 .. B_16 for Euler-Maclaurin (8 correction terms).
_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6,
              -3617 / 510)
_EM_OFFSET = 24


def hurwitz_zeta(s: float, a: float) -> float:
    """zeta(s, a) = sum_{k>=0} (a+k)^-s by Euler-Maclaurin, s > 1, a > 0."""
    if s <= 1 or a <= 0:
        raise ValueError("need s > 1 and a > 0")
    head = sum((a + k) ** -s for k in range(_EM_OFFSET))
    z = a + _EM_OFFSET
    total = head + z ** (1 - s) / (s - 1) + 0.5 * z ** -s
    rising = s  # rising factorial s(s+1)...(s+2j-2)
    zpow = z ** (-s - 1)
    for j, b in enumerate(_BERNOULLI, start=1):
        total += b / math.factorial(2 * j) * rising * zpow
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        zpow /= z * z
    return total


def digamma(x: float) -> float:
    """psi(x) for x > 0 by Euler-Maclaurin with the same 8 terms."""
    if x <= 0:
        raise ValueError("need x > 0")
    head = sum(1.0 / (x + k) for k in range(_EM_OFFSET))
    z = x + _EM_OFFSET
    total = log(z) - 0.5 / z - head
    zpow = 1.0 / (z * z)
    for j, b in enumerate(_BERNOULLI, start=1):
        total -= b / (2 * j) * zpow
        zpow /= z * z
    return total


def l_value(param: FormParameter, s: int) -> float:
    """L(s, chi_N) for s in {1, 2} via the residue-class decomposition.

    s = 2 uses Hurwitz zeta directly; s = 1 uses the digamma limit of the
    same decomposition (the character sums to zero over a period, so the
    divergent parts cancel).
    """
    q = abs(param.discriminant)
    if s == 2:
        return sum(chi(param, a) * hurwitz_zeta(2, a / q)
                   for a in range(1, q + 1)) / (q * q)
    if s == 1:
        return -sum(chi(param, a) * digamma(a / q) for a in range(1, q)) / q
    raise ValueError("s must be 1 or 2")


def l1_class_number_form(param: FormParameter) -> float:
    """Closed form 2*pi*h / (w*sqrt(|disc|)) with h = 1."""
    return 2 * pi / (param.units * sqrt(abs(param.discriminant)))


# ---------------------------------------------------------------------------
# the Euler factor G(2)
# ---------------------------------------------------------------------------

def _local_ratio(param: FormParameter, p: int, alpha: int) -> float:
    return rho_prime_power(param, p, alpha) / p ** alpha


def bad_prime_g_factor(param: FormParameter, p: int, s: int = 1) -> float:
    """Local factor of G at p | 2N: F_p(s) * (1 - p^-s) * (1 - chi(p) p^-s).

    F_p(s) = sum_a (rho(p^a)/p^a) p^(-a s) is the local series of the
    Dirichlet coefficients rho(n)/n.  For ramified p (p | N odd, or p = 2
    with N = 2) rho(p^a) = p^a exactly, so F_p is geometric and the factor
    is 1.  At p = 2 with N odd the ratio sequence rho(2^a)/2^a settles into
    a step pattern (constant increment two apart); the series is summed with
    that tail in closed form.
    """
    n = param.n
    c = chi(param, p)
    if n % p == 0 or (p == 2 and n == 2):
        return 1.0
    x = float(p) ** -s
    depth = 14 if p == 2 else 8
    ratios = [1.0] + [_local_ratio(param, p, a) for a in range(1, depth + 1)]
    steps = [ratios[a] - ratios[a - 2] for a in range(2, depth + 1)]
    if not (len(steps) >= 4 and abs(steps[-1] - steps[-3]) < 1e-12
            and abs(steps[-2] - steps[-4]) < 1e-12):
        raise ArithmeticError(f"local series at p={p} did not stabilize")
    head = sum(ratios[a] * x ** a for a in range(depth + 1))
    # Tail: two interleaved arithmetic progressions in steps of p^-2s.
    y = x * x
    tail = 0.0
    for last, step in ((depth, steps[-1]), (depth - 1, steps[-2])):
        a0 = ratios[last]
        x0 = x ** last
        tail += x0 * (a0 * y / (1 - y) + step * y / (1 - y) ** 2)
    f_p = head + tail
    return f_p * (1 - x) * (1 - c * x)


def g_euler(param: FormParameter, s: int = 1,
            prime_cutoff: int = 100_000) -> tuple[float, float]:
    """(G(s) truncated at prime_cutoff, tail halfwidth).

    G is the correction factor in F(s) = zeta(s) L(s, chi) G(s) for the
    Dirichlet series of rho(n)/n; good primes contribute
    1 - chi(p)/p^(s+1).  The coefficient A of the prefix-sum asymptotics
    picks up the residue of F at its pole, i.e. G at s = 1 (factors
    1 - chi(p)/p^2).  The log-tail beyond the cutoff P is at most
    sum_{m>P} m^-(s+1) <= P^-s / s.
    """
    if s not in (1, 2):
        raise ValueError("s must be 1 or 2")
    n = param.n
    value = 1.0
    for p in primes_up_to(prime_cutoff):
        if (2 * n) % p == 0:
            value *= bad_prime_g_factor(param, p, s)
        else:
            value *= 1.0 - chi(param, p) / p ** (s + 1)
    halfwidth = abs(value) * math.expm1(float(prime_cutoff) ** -s / s)
    return value, halfwidth


# ---------------------------------------------------------------------------
# the error-function integral and the coefficients
# ---------------------------------------------------------------------------

def e_integral(param: FormParameter, cutoff: int, table: RhoTable,
               a_const: float, c_emp: float) -> tuple[float, float]:
    """(integral of E(t)/t^3 over [1, cutoff], tail halfwidth).

    The integrand is piecewise exact between integers (the prefix sum is a
    step function), so the finite part is a closed-form sum; the tail uses
    |E(t)| <= c_emp * t^(4/3) * log(t)^2.
    """
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    if cutoff > table.limit:
        raise ValueError(f"cutoff {cutoff} exceeds table limit {table.limit}")
    t = cutoff
    if t == 1:
        finite = 0.0
    else:
        d = np.arange(1, t, dtype=np.float64)
        steps = np.asarray(table.partial_rho[1:t], dtype=np.float64)
        weights = 0.5 / (d * d) - 0.5 / ((d + 1) * (d + 1))
        finite = float(steps @ weights) - a_const * log(t)
    big_l = log(t) if t > 1 else 0.0
    tail = c_emp * t ** (-2.0 / 3.0) * (1.5 * big_l ** 2 + 4.5 * big_l + 6.75)
    return finite, tail


@dataclass(frozen=True)
class AsymptoticConstants:
    n: int
    l1: float
    l2: float
    g_pole: float
    g_pole_halfwidth: float
    a: float
    e_integral: float
    e_integral_halfwidth: float
    e_band: float
    cutoff: int
    c1: float
    c2: float
    c2_halfwidth: float

    def as_dict(self) -> dict:
        return {
            "N": self.n,
            "L1": self.l1,
            "L2": self.l2,
            "G_pole": self.g_pole,
            "G_pole_halfwidth": self.g_pole_halfwidth,
            "A": self.a,
            "E_integral": self.e_integral,
            "E_integral_halfwidth": self.e_integral_halfwidth,
            "E_band_constant": self.e_band,
            "cutoff": self.cutoff,
            "C1": self.c1,
            "C2": self.c2,
            "C2_halfwidth": self.c2_halfwidth,
        }


def second_coefficient(n: int, a_const: float, ei: float) -> float:
    """C2 from its closed pieces (see module docstring).

    The Q piece is (pi sqrt(N)/2) * A.  For N = 2 this equals
    pi^2 / (8 L(2, chi)) through the class-number chain
    A = L(1,chi)/(2 L(2,chi)), L(1,chi) = pi/(2 sqrt(2)); for N = 3 (mod 4)
    the L2 form does not apply (the integral form i^2 + N j^2 is not the
    norm form of the ring of integers there), while the equidistribution
    form below always does.
    """
    bracket = 6 * sqrt(n) + 2 * (n - 1) * atan(sqrt(n)) - 1.5 * pi * n
    return (4 * ei + 2 * a_const * (log(n + 1) + 1)
            - pi * sqrt(n) / 2 * a_const - a_const / sqrt(n) * bracket)


def theorem_constants(param: FormParameter, table: RhoTable,
                      cutoff: "int | None" = None,
                      prime_cutoff: int = 100_000) -> AsymptoticConstants:
    """Assemble every coefficient with its uncertainty for one form.

    N = 1 is allowed for cross-checks but flagged: its extra units change the
    representation weight in the Q piece, so C2 is not certified there.
    """
    n = param.n
    if n not in CONSTANT_FORMS:
        raise ValueError(f"constants supported for N in {CONSTANT_FORMS}")
    if n == 1:
        logger.warning("N=1 constants are a cross-check only (unit group size 4)")
    cal = load_calibration()
    cutoff = cutoff if cutoff is not None else min(table.limit, 100_000)
    l1 = l_value(param, 1)
    l2 = l_value(param, 2)
    g_pole, g_hw = g_euler(param, 1, prime_cutoff)
    a_const = l1 * g_pole / 2
    c_emp = error_band_constant(table, a_const,
                                prefix=int(cal["rho"]["e_band_prefix"]),
                                safety=float(cal["rho"]["e_band_safety"]))
    ei, ei_hw = e_integral(param, cutoff, table, a_const, c_emp)
    c1 = 4 * a_const
    c2 = second_coefficient(n, a_const, ei)
    return AsymptoticConstants(
        n=n, l1=l1, l2=l2, g_pole=g_pole, g_pole_halfwidth=g_hw, a=a_const,
        e_integral=ei, e_integral_halfwidth=ei_hw, e_band=c_emp,
        cutoff=cutoff, c1=c1, c2=c2, c2_halfwidth=4 * ei_hw,
    )
