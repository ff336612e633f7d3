"""Exact evaluation of the large-sieve sum over roots of v^2 + N = 0 (mod d).

S(D, H, M; N) sums |sum_{n<=M} e(h n v / d)| / h over d in (D, 2D], roots v
mod d, and h <= H.  Each inner magnitude has the closed form
|sin(pi M t) / sin(pi t)| at t = h v / d, evaluated from the exactly reduced
rational angle, so the triple sum is deterministic to the last bit in serial
order (d, then v, then h ascending; accumulation via math.fsum).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .arith import FormParameter, Sieve
from .roots import roots_by_lifting

SIEVE_FORMS = (1, 2, 67, 163)


@dataclass(frozen=True)
class SieveSumSample:
    d_scale: int
    h_max: int
    m_len: int
    value: float
    bound_ratio: float


def geometric_sum_magnitude(h: int, v: int, d: int, m_len: int) -> tuple[float, float]:
    """(|sum_{n<=M} e(h n v/d)|, min(M, 1/(2||hv/d||))).

    The angle and its M-fold multiple are reduced mod 1 in exact integer
    arithmetic before any floating point enters.
    """
    if d < 1 or m_len < 1:
        raise ValueError("need d >= 1 and M >= 1")
    num = (h * v) % d
    if num == 0:
        return float(m_len), float(m_len)
    dist = min(num, d - num)  # ||hv/d|| = dist/d
    bound = min(float(m_len), d / (2 * dist))
    mnum = (m_len * num) % d
    if mnum == 0:
        return 0.0, bound
    mdist = min(mnum, d - mnum)
    value = abs(math.sin(math.pi * mdist / d) / math.sin(math.pi * dist / d))
    return value, bound


def large_sieve_sum(param: FormParameter, d_scale: int, h_max: int, m_len: int,
                    sieve: "Sieve | None" = None) -> SieveSumSample:
    """Exact S(D, H, M; N) with d ~ D fixed as the dyadic window (D, 2D]."""
    if param.n not in SIEVE_FORMS:
        raise ValueError(f"large-sieve study supports N in {SIEVE_FORMS}")
    if min(d_scale, h_max, m_len) < 1:
        raise ValueError("D, H, M must be positive")
    if sieve is None or sieve.limit < 2 * d_scale:
        sieve = Sieve(2 * d_scale)
    terms = []
    for d in range(d_scale + 1, 2 * d_scale + 1):
        roots = roots_by_lifting(param, sieve.factored(d)).roots
        for v in roots:
            for h in range(1, h_max + 1):
                value, _ = geometric_sum_magnitude(h, v, d, m_len)
                terms.append(value / h)
    total = math.fsum(terms)
    ratio = total / ((d_scale + m_len) * math.sqrt(d_scale))
    return SieveSumSample(d_scale, h_max, m_len, total, ratio)


def bound_proxy_sum(param: FormParameter, d_scale: int, h_max: int, m_len: int,
                    sieve: "Sieve | None" = None) -> float:
    """Same triple sum with each magnitude replaced by min(M, 1/(2||t||)).

    Unlike the exact sum, this majorant is monotone nondecreasing in M.
    """
    if sieve is None or sieve.limit < 2 * d_scale:
        sieve = Sieve(2 * d_scale)
    terms = []
    for d in range(d_scale + 1, 2 * d_scale + 1):
        for v in roots_by_lifting(param, sieve.factored(d)).roots:
            for h in range(1, h_max + 1):
                _, bound = geometric_sum_magnitude(h, v, d, m_len)
                terms.append(bound / h)
    return math.fsum(terms)


M_RULES = {
    "d": lambda d: d,
    "sqrt-d": lambda d: max(1, math.isqrt(d)),
    "d-squared": lambda d: d * d,
}


def sieve_bound_study(param: FormParameter, d_grid: "list[int]", h_max: int,
                      m_rule: str = "d") -> list[SieveSumSample]:
    """Samples across a grid of D values with M tied to D by `m_rule`."""
    if not d_grid:
        raise ValueError("grid must be nonempty")
    if m_rule not in M_RULES:
        raise ValueError(f"m_rule must be one of {sorted(M_RULES)}")
    rule = M_RULES[m_rule]
    top = 2 * max(d_grid)
    sieve = Sieve(top)
    return [large_sieve_sum(param, d, h_max, rule(d), sieve) for d in d_grid]


def growth_factors(samples: "list[SieveSumSample]") -> list[tuple[int, float]]:
    """(D, ratio(2D)/ratio(D)) for consecutive dyadic samples."""
    out = []
    for a, b in zip(samples, samples[1:]):
        if b.d_scale == 2 * a.d_scale and a.bound_ratio > 0:
            out.append((a.d_scale, b.bound_ratio / a.bound_ratio))
    return out


def dyadic_grid(d_min: int, d_max: int) -> list[int]:
    out = []
    d = d_min
    while d <= d_max:
        out.append(d)
        d *= 2
    return out
