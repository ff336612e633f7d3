"""Rational approximations a/q to v/d with q of size sqrt(d).

For each root v of v^2 + N = 0 (mod d) there is a fraction a/q with
|v/d - a/q| <= 1/q^2 and q comparable to sqrt(d); the denominator comes from
the norm representation attached to v (q = |s| or q = |r|), from the inverse
correspondence when N | d (q = |r| or q = N|s| at the level of d/N), and from
a 2-power dilation when d is even.  Every produced fraction is verified by
exact integer cross-multiplication; if the constructed candidates miss, an
exhaustive denominator search takes over (and is logged as a finding).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import gcd, isqrt

from .arith import FactoredInteger, FormParameter
from .calibration import load_calibration
from .roots import representations_of, roots_by_lifting

log = logging.getLogger(__name__)

APPROX_FORMS = (1, 2, 67, 163)

BRANCH_S = "s_denominator"
BRANCH_R = "r_denominator"
BRANCH_N_DIV = "n_divides_d"
BRANCH_EVEN = "even_d"


@dataclass(frozen=True)
class RationalApprox:
    a: int
    q: int
    v: int
    d: int
    branch: str
    fallback: bool = False

    @property
    def ratio(self) -> float:
        return self.q / self.d ** 0.5


def _well_approx(v: int, d: int, a: int, q: int) -> bool:
    """|v/d - a/q| <= 1/q^2, exactly."""
    return abs(v * q - a * d) * q <= d


def _nearest(v: int, d: int, q: int) -> int:
    """Integer nearest to q*v/d (v, d, q > 0)."""
    return (2 * v * q + d) // (2 * d)


def _reduced(v: int, d: int, q: int, branch: str) -> tuple[int, int, str]:
    a = _nearest(v, d, q)
    g = gcd(a, q) if a else q
    return a // (g or 1), q // (g or 1), branch


def _half_normalized(rep) -> tuple[int, int]:
    """(r, s) with both odd and r^2 + N s^2 = 4d (halve a gcd-2 pair)."""
    r, s = rep.r, rep.s
    if r % 2 == 0 and s % 2 == 0:
        r, s = r // 2, s // 2
    return r, s


def _match_root(param: FormParameter, d: int, target: int):
    """The signed representation (r, s) whose root +-r*s^{-1} equals target."""
    n = param.n
    for rep in representations_of(param, d):
        cands = [_half_normalized(rep)] if rep.kind == "half_integral" and n not in (1, 2) \
            else [(rep.r, rep.s)]
        if rep.kind == "half_integral" and n in (1, 2):
            cands = [(rep.r, rep.s)]
        if n == 1:
            # Extra unit i identifies (r, s) with (s, -r); try the twist too.
            cands = cands + [(cands[0][1], cands[0][0])]
        out = []
        for r, s in cands:
            if r % 2 == 0 and s % 2 == 0:
                r, s = r // 2, s // 2
            for sg in (1, -1):
                ss = sg * s
                if ss == 0 or gcd(ss % d, d) != 1:
                    continue
                if r * pow(ss, -1, d) % d == target % d:
                    return r, ss
    return None


def _core_candidates(param: FormParameter, d: int, residue: int,
                     inverse: bool) -> list[tuple[int, str]]:
    """Denominator candidates for residue/d, d odd and coprime to N.

    For a root v = r*s^{-1}: q = |s| when |s| >= |r|/(2*sqrt(N)) else q = |r|.
    For an inverse root (N | d reduction): q = N|s| when its exact validity
    r*N*|s| <= d holds, else q = |r|.
    """
    n = param.n
    if inverse:
        root = pow(residue, -1, d)
    else:
        root = residue % d
    match = _match_root(param, d, root)
    if match is None:
        raise ValueError(f"{residue} is not attached to a representation mod {d}")
    r, s = match
    r, s = abs(r), abs(s)
    if not inverse:
        if 4 * n * s * s >= r * r:
            return [(s, BRANCH_S), (r, BRANCH_R)]
        return [(r, BRANCH_R), (s, BRANCH_S)]
    if r * n * s <= d:
        return [(n * s, BRANCH_S), (r, BRANCH_R)]
    return [(r, BRANCH_R), (n * s, BRANCH_S)]


def _candidates(param: FormParameter, d: int, residue: int,
                inverse: bool = False) -> list[tuple[int, int, str]]:
    """(a, q, branch) candidates for the rational residue/d, best first."""
    n = param.n
    if d == 1:
        return [(0, 1, BRANCH_S)]
    if n > 1 and d % n == 0:
        d1 = d // n
        if d1 % n == 0:
            raise ValueError(f"no roots mod {d}")
        if inverse:
            raise ValueError("nested N|d reduction cannot occur")
        if d1 == 1:
            return [(0, 1, BRANCH_N_DIV)]
        # v = N * v1^{-1}, so v/d equals (v/N)/d1 with v/N an inverse root.
        w = residue // n
        subs = _candidates(param, d1, w, inverse=True)
        return [(a, q, BRANCH_N_DIV) for a, q, _ in subs]
    if d % 2 == 0:
        two = (d & -d).bit_length() - 1
        d1 = d >> two
        v1 = residue % d1
        j = (residue - v1) // d1
        out = []
        for a1, q1, _ in _candidates(param, d1, v1, inverse=inverse):
            num, den = a1 + j * q1, (1 << two) * q1
            g = gcd(num, den) or 1
            out.append((num // g, den // g, BRANCH_EVEN))
        return out
    out = []
    for q, branch in _core_candidates(param, d, residue, inverse):
        out.append(_reduced(residue, d, q, branch))
    return out


def _fallback_search(v: int, d: int, gate_den: int) -> tuple[int, int]:
    """Largest q <= 2*sqrt(d) whose nearest fraction passes, preferring
    denominators above the size gate q^2 * gate_den >= d."""
    cap = 2 * isqrt(d) + 1
    best = None
    for q in range(min(cap, d), 0, -1):
        a = _nearest(v, d, q)
        g = gcd(a, q) if a else q
        ar, qr = a // (g or 1), q // (g or 1)
        if not _well_approx(v, d, ar, qr):
            continue
        if qr * qr * gate_den >= d:
            return ar, qr
        if best is None:
            best = (ar, qr)
    assert best is not None  # q = 1 always passes
    return best


def approximate(param: FormParameter, d: int, v: int) -> RationalApprox:
    """The fraction a/q attached to root v of v^2 + N = 0 (mod d)."""
    n = param.n
    if n not in APPROX_FORMS:
        raise ValueError(f"approximation construction supports N in {APPROX_FORMS}")
    if (v * v + n) % d != 0:
        raise ValueError(f"{v} is not a root mod {d}")
    v %= d
    cal = load_calibration()
    gate_den = int(cal["approx"]["denominator_gate_inv_sq"])
    for a, q, branch in _candidates(param, d, v):
        if q > 0 and _well_approx(v, d, a, q) and q * q * gate_den >= d:
            return RationalApprox(a, q, v, d, branch)
    a, q = _fallback_search(v, d, gate_den)
    log.info("approximation fallback at N=%d d=%d v=%d -> q=%d", n, d, v, q)
    return RationalApprox(a, q, v, d, BRANCH_R, fallback=True)


def iter_approximations(param: FormParameter, d_max: int, sieve=None):
    """Yield the approximation of every root for every d <= d_max."""
    for d in range(1, d_max + 1):
        fi = sieve.factored(d) if sieve is not None else FactoredInteger.of(d)
        for v in roots_by_lifting(param, fi).roots:
            yield approximate(param, d, v)


def denominator_statistics(param: FormParameter, d_max: int,
                           sieve=None) -> tuple[float, float]:
    """(min, max) of q / sqrt(d) over every root with d <= d_max."""
    lo, hi = float("inf"), 0.0
    for ap in iter_approximations(param, d_max, sieve):
        ratio = ap.ratio
        lo = min(lo, ratio)
        hi = max(hi, ratio)
    return lo, hi
