"""The counting functions rho0, rho, representation and lattice counts.

rho0(d) counts roots of v^2 + N = 0 (mod d); rho(d) counts pairs (u, v) in
(0, d]^2 with u^2 + N v^2 = 0 (mod d).  Both are multiplicative.  At primes
coprime to 2N, rho(p^a) follows the closed form

    rho(p^a) = ceil(a/2) * phi(p^a) * rho0(p) + p^(a - (a odd))

while at primes dividing 2N the value is counted directly (one pass over v
with an exact square-root count per residue), never trusted to the formula.

The module also builds prefix tables of rho up to a limit, from which the
error function E(t) = sum_{d<=t} rho(d) - A*t^2 and its empirical band
constant are derived.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt, log

import numpy as np

from .arith import (
    FactoredInteger,
    FormParameter,
    Sieve,
    chi,
    divisors,
    euler_phi,
    mobius,
)
from .roots import rho0_of, roots_by_lifting

rho0 = rho0_of


def count_sqrt_mod_prime_power(c: int, p: int, k: int) -> int:
    """Number of x (mod p^k) with x^2 = c (mod p^k)."""
    if k == 0:
        return 1
    pk = p ** k
    c %= pk
    if c == 0:
        return p ** (k // 2)
    e = 0
    while c % p == 0:
        c //= p
        e += 1
    if e % 2:
        return 0
    j = k - e
    scale = p ** (e // 2)
    if p != 2:
        return scale * (2 if pow(c, (p - 1) // 2, p) == 1 else 0)
    if j == 1:
        return scale
    if j == 2:
        return 2 * scale if c % 4 == 1 else 0
    return 4 * scale if c % 8 == 1 else 0


_bad_cache: dict[tuple[int, int, int], int] = {}


def rho_prime_power(param: FormParameter, p: int, alpha: int) -> int:
    """rho(p^alpha); closed form at good primes, direct count at p | 2N."""
    n = param.n
    if alpha == 0:
        return 1
    if (2 * n) % p == 0:
        key = (n, p, alpha)
        if key not in _bad_cache:
            pk = p ** alpha
            total = 0
            for v in range(1, pk + 1):
                total += count_sqrt_mod_prime_power(-n * v * v, p, alpha)
            _bad_cache[key] = total
        return _bad_cache[key]
    rho0_p = 1 + chi(param, p)
    pa = p ** alpha
    terms = (alpha + 1) // 2 if alpha % 2 else alpha // 2
    tail = pa if alpha % 2 == 0 else pa // p
    return terms * (pa - pa // p) * rho0_p + tail


def rho_full(param: FormParameter, d: "int | FactoredInteger") -> int:
    fi = FactoredInteger.of(d)
    out = 1
    for p, e in fi.factors:
        out *= rho_prime_power(param, p, e)
    return out


def rho_brute(param: FormParameter, d: int) -> int:
    """Direct count of pairs (u, v) in (0, d]^2 with u^2 + N v^2 = 0 (mod d).

    Enumerates every residue through a table of square counts, so it is an
    oracle independent of multiplicativity and of the prime-power formula.
    """
    n = param.n
    squares = np.bincount(np.arange(1, d + 1, dtype=np.int64) ** 2 % d,
                          minlength=d)
    targets = (-n * np.arange(1, d + 1, dtype=np.int64) ** 2) % d
    return int(squares[targets].sum())


def convolution_identity(param: FormParameter, k: int, sieve: "Sieve | None" = None) -> int:
    """sum over a*b^2*d = k, a squarefree, gcd(a, d) = 1 of
    b^2 * rho0(d) * phi(d); contractually equal to rho(k)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    fact = sieve.factored if sieve is not None else FactoredInteger.of
    total = 0
    b = 1
    while b * b <= k:
        if k % (b * b) == 0:
            m = k // (b * b)
            for d in divisors(fact(m)):
                a = m // d
                if mobius(fact(a)) == 0 or gcd(a, d) != 1:
                    continue
                fd = fact(d)
                total += b * b * rho0_of(param, fd) * euler_phi(fd)
        b += 1
    return total


def rep_count(param: FormParameter, k: int) -> int:
    """r_N(k): representations k = n^2 + N m^2 with n, m >= 0 (brute force)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    n = param.n
    count = 0
    m = 0
    while n * m * m <= k:
        rem = k - n * m * m
        r = isqrt(rem)
        if r * r == rem:
            count += 1
        m += 1
    return count


def rep_count_exceptional(param: FormParameter, k: int) -> bool:
    """k is a perfect square or N times one (character identity excluded)."""
    r = isqrt(k)
    if r * r == k:
        return True
    if k % param.n == 0:
        r = isqrt(k // param.n)
        return r * r == k // param.n
    return False


def rep_count_by_character(param: FormParameter, k: int,
                           sieve: "Sieve | None" = None) -> Fraction:
    """(1/2) sum over d | k of chi(d); equals r_N(k) off the exceptional set."""
    fact = sieve.factored if sieve is not None else FactoredInteger.of
    return Fraction(sum(chi(param, d) for d in divisors(fact(k))), 2)


def norm_shell_count(param: FormParameter, k: int) -> int:
    """#{(r, s) in Z^2 : r^2 + N s^2 = 4k, r = s (mod 2)}.

    This is the number of ring-of-integers elements of norm k, which equals
    2 * sum_{d | k} chi(d) whenever the unit group is {+-1}.  For N = 1, 2
    the even-parity constraint forces (r, s) = 2*(i, j), recovering the
    integral form i^2 + N j^2 = k.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    n = param.n
    total = 0
    s = 0
    while n * s * s <= 4 * k:
        rem = 4 * k - n * s * s
        r = isqrt(rem)
        if r * r == rem and (r - s) % 2 == 0:
            if r == 0 and s == 0:
                pass
            elif r == 0 or s == 0:
                total += 2
            else:
                total += 4
        s += 1
    return total


def lattice_count_ellipse(param: FormParameter, x_bound) -> int:
    """Exact #{(i, j) in Z^2 : i^2 + N j^2 <= X} (origin included)."""
    xf = Fraction(x_bound)
    if xf < 0:
        raise ValueError("X must be >= 0")
    n = param.n
    floor_x = int(xf)
    total = 0
    j = 0
    while n * j * j <= xf:
        row_cap = floor_x - n * j * j
        row = 2 * isqrt(row_cap) + 1
        total += row if j == 0 else 2 * row
        j += 1
    return total


# ---------------------------------------------------------------------------
# prefix tables
# ---------------------------------------------------------------------------

@dataclass
class RhoTable:
    """rho0, rho and their prefix sums up to `limit` for one form."""

    param: FormParameter
    limit: int
    rho0: np.ndarray          # int64, index d
    rho: np.ndarray           # int64, index d
    partial_rho: np.ndarray   # int64 prefix sums of rho
    partial_rho_over_d: np.ndarray    # float64, Kahan-accumulated
    partial_rho_over_d2: np.ndarray   # float64, Kahan-accumulated

    @classmethod
    def build(cls, param: FormParameter, limit: int,
              sieve: "Sieve | None" = None) -> "RhoTable":
        if limit < 1:
            raise ValueError("limit must be >= 1")
        if sieve is None or sieve.limit < limit:
            sieve = Sieve(limit)
        spf = sieve.spf
        r0 = np.zeros(limit + 1, dtype=np.int64)
        rh = np.zeros(limit + 1, dtype=np.int64)
        r0[1] = rh[1] = 1
        pp_r0: dict[tuple[int, int], int] = {}
        pp_rh: dict[tuple[int, int], int] = {}
        for d in range(2, limit + 1):
            m = d
            a0 = a1 = 1
            while m > 1:
                p = int(spf[m])
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                key = (p, e)
                if key not in pp_rh:
                    pp_r0[key] = _rho0_local_count(param, p, e)
                    pp_rh[key] = rho_prime_power(param, p, e)
                a0 *= pp_r0[key]
                a1 *= pp_rh[key]
            r0[d] = a0
            rh[d] = a1
        prefix = np.cumsum(rh)
        over_d = np.zeros(limit + 1)
        over_d2 = np.zeros(limit + 1)
        s1 = c1 = s2 = c2 = 0.0  # Kahan-compensated running sums
        for d in range(1, limit + 1):
            val = float(rh[d])
            y = val / d - c1
            t = s1 + y
            c1 = (t - s1) - y
            s1 = t
            y = val / (d * d) - c2
            t = s2 + y
            c2 = (t - s2) - y
            s2 = t
            over_d[d] = s1
            over_d2[d] = s2
        return cls(param, limit, r0, rh, prefix, over_d, over_d2)

    def e_value(self, y: int, a_const: float) -> float:
        """E(y) = sum_{d<=y} rho(d) - A*y^2."""
        if not 1 <= y <= self.limit:
            raise ValueError(f"y outside table range [1, {self.limit}]")
        return float(self.partial_rho[y]) - a_const * y * y


def _rho0_local_count(param: FormParameter, p: int, e: int) -> int:
    from .roots import _rho0_local
    return _rho0_local(param, p, e)


def partial_sums(param: FormParameter, y: int, table: RhoTable,
                 a_const: float) -> tuple[int, float, float, float]:
    """(sum rho, sum rho/d, sum rho/d^2, E(y)) for d <= y."""
    if y > table.limit:
        raise ValueError(f"y={y} exceeds table limit {table.limit}")
    return (
        int(table.partial_rho[y]),
        float(table.partial_rho_over_d[y]),
        float(table.partial_rho_over_d2[y]),
        table.e_value(y, a_const),
    )


def error_band_constant(table: RhoTable, a_const: float,
                        prefix: int = 1000, safety: float = 2.0) -> float:
    """safety * max_{2<=y<=prefix} |E(y)| / (y^(4/3) log(y)^2), frozen later."""
    top = min(prefix, table.limit)
    best = 0.0
    for y in range(2, top + 1):
        band = y ** (4.0 / 3.0) * log(y) ** 2
        best = max(best, abs(table.e_value(y, a_const)) / band)
    return safety * best
