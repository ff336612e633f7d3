"""Roots of v^2 + N = 0 (mod d) by two independent algorithms.

`roots_by_lifting` works locally: square roots mod p, Hensel steps up the
prime power, direct 2-adic enumeration, then a CRT product.

`roots_from_representations` goes through norm representations of d by the
form r^2 + N*s^2 (integral for N in {1, 2}, scaled by 4 otherwise): one
generator per split prime power comes out of a Euclid descent on a lifted
square root of -N, all conjugate combinations are multiplied out in the ring
of integers, and each representation is mapped to the root pair
v = +-r * s^{-1} (mod d).  Verifying that both enumerations agree is the
finite-scale content of the root/representation bijection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import gcd, isqrt

from .arith import (
    FactoredInteger,
    FormParameter,
    chi,
    crt_combine,
    hensel_lift,
    sqrt_mod,
)

BRANCH_COPRIME = "coprime"
BRANCH_EVEN7 = "even7"
BRANCH_N_DIVIDES = "n_divides"


@dataclass(frozen=True)
class RootSet:
    """Sorted solutions v in [0, d) of v^2 + N = 0 (mod d)."""

    d: int
    roots: tuple[int, ...]

    def __post_init__(self) -> None:
        if list(self.roots) != sorted(set(self.roots)):
            raise ValueError("roots must be strictly increasing")
        if any(not 0 <= v < self.d for v in self.roots):
            raise ValueError("roots must lie in [0, d)")


@dataclass(frozen=True)
class NormRepresentation:
    """(r, s) with d = r^2 + N*s^2 (integral) or 4d = r^2 + N*s^2 (half)."""

    r: int
    s: int
    kind: str  # "integral" | "half_integral"


# ---------------------------------------------------------------------------
# algorithm 1: local square roots + Hensel + CRT
# ---------------------------------------------------------------------------

def _local_roots(param: FormParameter, p: int, e: int) -> list[int]:
    """All v (mod p^e) with v^2 + N = 0."""
    n = param.n
    if n % p == 0:
        # Ramified prime: v is forced to 0 and the congruence dies at e >= 2
        # (N is squarefree).
        return [0] if e == 1 else []
    if p == 2:
        # Direct enumeration mod 2, then candidate-doubling up to 2^e; a root
        # mod 2^j extends to r or r + 2^(j-1) mod 2^j, if at all.
        sols = [v for v in range(2) if (v * v + n) % 2 == 0]
        mod = 2
        for _ in range(e - 1):
            mod *= 2
            sols = [v for r in sols for v in (r, r + mod // 2)
                    if (v * v + n) % mod == 0]
        return sorted(sols)
    a = (-n) % p
    base = sqrt_mod(a, p)
    if not base:
        return []
    return sorted(hensel_lift(r, -n, p, e) for r in base)


def roots_by_lifting(param: FormParameter, d: "int | FactoredInteger") -> RootSet:
    """The complete root set mod d, assembled prime power by prime power."""
    fi = FactoredInteger.of(d)
    if fi.value == 1:
        return RootSet(1, (0,))
    locals_: list[list[tuple[int, int]]] = []
    for p, e in fi.factors:
        pe = p ** e
        rs = _local_roots(param, p, e)
        if not rs:
            return RootSet(fi.value, ())
        locals_.append([(v, pe) for v in rs])
    combined = [(0, 1)]
    for options in locals_:
        combined = [crt_combine([acc, opt])
                    for acc in [(v, m) for v, m in combined]
                    for opt in options]
    return RootSet(fi.value, tuple(sorted(v for v, _ in combined)))


def rho0_of(param: FormParameter, d: "int | FactoredInteger") -> int:
    """Number of roots mod d (the local-count product, no enumeration)."""
    fi = FactoredInteger.of(d)
    count = 1
    for p, e in fi.factors:
        count *= _rho0_local(param, p, e)
        if count == 0:
            return 0
    return count


def _rho0_local(param: FormParameter, p: int, e: int) -> int:
    n = param.n
    if n % p == 0:
        return 1 if e == 1 else 0
    if p == 2:
        if e == 1:
            return 1
        if e == 2:
            return 2 if n % 4 == 3 else 0
        return 4 if n % 8 == 7 else 0
    return 2 if chi(param, p) == 1 else 0


# ---------------------------------------------------------------------------
# quadratic integer helpers: pairs (r, s) meaning r + s*sqrt(-N), scaled by
# 1/2 in the half-integral case
# ---------------------------------------------------------------------------

def _mul(e1: tuple[int, int], e2: tuple[int, int], n: int, half: bool) -> tuple[int, int]:
    r1, s1 = e1
    r2, s2 = e2
    r = r1 * r2 - n * s1 * s2
    s = r1 * s2 + s1 * r2
    if half:
        assert r % 2 == 0 and s % 2 == 0, "product left the ring of integers"
        return r // 2, s // 2
    return r, s


def _power(e: tuple[int, int], k: int, n: int, half: bool) -> tuple[int, int]:
    out = (2, 0) if half else (1, 0)
    for _ in range(k):
        out = _mul(out, e, n, half)
    return out


def _norm(e: tuple[int, int], n: int, half: bool) -> int:
    q = e[0] * e[0] + n * e[1] * e[1]
    return q // 4 if half else q


def _conj(e: tuple[int, int]) -> tuple[int, int]:
    return (e[0], -e[1])


def cornacchia_prime(param: FormParameter, p: int) -> tuple[int, int]:
    """A generator (r, s) of norm p: r^2 + N*s^2 = p (N in {1,2}) or = 4p.

    Euclid descent on (p, t) with t a square root of -N mod p; the classic
    algorithm for the integral case, the 4p variant with the parity fix for
    the half-integral one.  Requires chi_N(p) = 1.
    """
    n = param.n
    half = n not in (1, 2)
    if p == 2:
        # Only reachable when 2 splits, i.e. -N = 1 (mod 8): N = 7 here.
        if n % 8 != 7:
            raise ValueError("2 does not split for this form")
        return (1, 1)
    a = (-n) % p
    pair = sqrt_mod(a, p)
    if not pair:
        raise ValueError(f"{p} does not split for N={n}")
    if not half:
        t = max(pair)
        x, y = p, t
        lim = isqrt(p)
        while y > lim:
            x, y = y, x % y
        r = y
        rem = p - r * r
        if rem % n:
            raise ArithmeticError(f"descent failed at p={p}, N={n}")
        s = isqrt(rem // n)
        if n * s * s != rem:
            raise ArithmeticError(f"descent failed at p={p}, N={n}")
        out = (r, s)
    else:
        t = pair[0] if pair[0] % 2 == 1 else pair[1]
        if t % 2 == 0:
            t = p - t
        x, y = 2 * p, t
        lim = isqrt(4 * p)
        while y > lim:
            x, y = y, x % y
        r = y
        rem = 4 * p - r * r
        if rem % n:
            raise ArithmeticError(f"descent failed at p={p}, N={n}")
        s = isqrt(rem // n)
        if n * s * s != rem:
            raise ArithmeticError(f"descent failed at p={p}, N={n}")
        out = (r, s)
    assert _norm(out, n, half) == p
    return out


def _canonical(e: tuple[int, int]) -> tuple[int, int]:
    r, s = e
    if r < 0 or (r == 0 and s < 0):
        r, s = -r, -s
    return r, abs(s)


# ---------------------------------------------------------------------------
# algorithm 2: representations and the map v = +-r * s^{-1}
# ---------------------------------------------------------------------------

def representations_of(param: FormParameter,
                       d: "int | FactoredInteger") -> list[NormRepresentation]:
    """All representations of d per the bijection, up to the sign of s.

    Covers d coprime to 2N, and for N = 7 the even branch 8 | d (where the
    representations of d with gcd(r,s) = 2 and of 2d with gcd(r,s) = 1 are
    returned together).  Moduli outside these branches yield [].
    """
    n = param.n
    if n == 3:
        raise ValueError("representation branch disabled for N=3 (extra units)")
    fi = FactoredInteger.of(d)
    dv = fi.value
    half = n not in (1, 2)
    kind = "half_integral" if half else "integral"
    if dv == 1:
        return [NormRepresentation(2 if half else 1, 0, kind)]
    if gcd(dv, 2 * n) == 1:
        gens = []
        for p, e in fi.factors:
            if chi(param, p) != 1:
                return []
            gens.append(_power(cornacchia_prime(param, p), e, n, half))
        reps = set()
        for mask in range(1 << len(gens)):
            acc = (2, 0) if half else (1, 0)
            for i, g in enumerate(gens):
                acc = _mul(acc, g if not (mask >> i) & 1 else _conj(g), n, half)
            assert _norm(acc, n, half) == dv
            reps.add(_canonical(acc))
        return [NormRepresentation(r, s, kind) for r, s in sorted(reps)]
    if n == 7 and dv % 8 == 0 and dv % 7 != 0:
        k = (dv & -dv).bit_length() - 1
        m = dv >> k
        odd_gens = []
        for p, e in FactoredInteger.of(m).factors:
            if chi(param, p) != 1:
                return []
            odd_gens.append(_power(cornacchia_prime(param, p), e, n, True))
        pi2 = (1, 1)
        reps = set()
        # gcd(r,s) = 2 family: 2 * pi2^(k-2) * (odd part), norm d.
        # gcd(r,s) = 1 family: pi2^(k+1) * (odd part), norm 2d.
        for two_part, target in (
            (_mul((4, 0), _power(pi2, k - 2, n, True), n, True), dv),
            (_power(pi2, k + 1, n, True), 2 * dv),
        ):
            for base in (two_part, _conj(two_part)):
                for mask in range(1 << len(odd_gens)):
                    acc = base
                    for i, g in enumerate(odd_gens):
                        acc = _mul(acc, g if not (mask >> i) & 1 else _conj(g), n, True)
                    assert _norm(acc, n, True) == target
                    reps.add(_canonical(acc))
        return [NormRepresentation(r, s, kind) for r, s in sorted(reps)]
    return []


def _rep_roots(param: FormParameter, dv: int, rep: NormRepresentation) -> set[int]:
    """The +- root pair of a representation, halving (r, s) when gcd = 2."""
    r, s = rep.r, rep.s
    if r % 2 == 0 and s % 2 == 0:
        r, s = r // 2, s // 2
    sbar = pow(s, -1, dv)
    v = r * sbar % dv
    return {v, (-v) % dv}


def roots_from_representations(param: FormParameter,
                               d: "int | FactoredInteger") -> RootSet:
    """Root set reconstructed from norm representations.

    Handles, besides the representation branches, d = N*d1 via the inverse
    correspondence v = N * v1^{-1} (mod d).  Moduli in no branch yield an
    empty set (see `bijection_branch`).
    """
    n = param.n
    fi = FactoredInteger.of(d)
    dv = fi.value
    if dv == 1:
        return RootSet(1, (0,))
    if n > 1 and dv % n == 0:
        d1 = dv // n
        if d1 % n == 0:
            return RootSet(dv, ())
        inner = roots_from_representations(param, d1)
        if d1 == 1:
            return RootSet(dv, (0,))
        roots = sorted(n * pow(v1, -1, d1) for v1 in inner.roots)
        return RootSet(dv, tuple(roots))
    reps = representations_of(param, fi)
    if not reps:
        return RootSet(dv, ())
    out: set[int] = set()
    for rep in reps:
        out |= _rep_roots(param, dv, rep)
    return RootSet(dv, tuple(sorted(out)))


def bijection_branch(param: FormParameter, d: int) -> "str | None":
    """Which bijection branch covers modulus d, or None."""
    n = param.n
    if d == 1:
        return BRANCH_COPRIME
    if gcd(d, 2 * n) == 1:
        return BRANCH_COPRIME
    if n > 1 and d % n == 0:
        d1 = d // n
        if d1 % n == 0:
            return BRANCH_N_DIVIDES  # stated unsolvable case, both sides empty
        sub = bijection_branch(param, d1)
        return BRANCH_N_DIVIDES if sub is not None else None
    if n == 7 and d % 8 == 0:
        return BRANCH_EVEN7
    return None


@dataclass
class BijectionReport:
    n: int
    d_max: int
    checked: int = 0
    by_branch: dict = field(default_factory=dict)
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def verify_bijection(param: FormParameter, d_max: int,
                     sieve=None) -> BijectionReport:
    """Compare both root enumerations on every d <= d_max in a branch.

    Also asserts the counting side: two roots per representation (up to the
    sign of s) on the representation branches.
    """
    if param.units != 2:
        raise ValueError("bijection verification assumes unit group {+-1}")
    report = BijectionReport(param.n, d_max)
    for d in range(1, d_max + 1):
        branch = bijection_branch(param, d)
        if branch is None:
            continue
        fi = sieve.factored(d) if sieve is not None else FactoredInteger.of(d)
        lifted = roots_by_lifting(param, fi)
        mapped = roots_from_representations(param, fi)
        report.checked += 1
        report.by_branch[branch] = report.by_branch.get(branch, 0) + 1
        if lifted.roots != mapped.roots:
            report.mismatches.append((d, lifted.roots, mapped.roots))
            continue
        if branch in (BRANCH_COPRIME, BRANCH_EVEN7) and d > 1:
            reps = representations_of(param, fi)
            if 2 * len(reps) != len(lifted.roots):
                report.mismatches.append((d, lifted.roots, f"{len(reps)} reps"))
    return report
