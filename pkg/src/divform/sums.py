"""Two independent exact engines for S_N(x) = sum_{m,n<=x} d(n^2 + N m^2).

`brute_force_s` factors every value and adds up divisor counts: the oracle.

`hyperbola_s` counts divisor pairs (k, l) of each value by the split at
B = sqrt(1+N)*x: every value has a divisor on each side of B, so

    S = 2R - (pairs with both k, l <= B),      R = sum_{k<=B} #{k | n^2+Nm^2}

and the subtracted term is split at a threshold k0 into Q (k <= k0, where
the bound n^2+Nm^2 <= k*B already forces m, n <= x) and T (the remaining k,
where the box constraints stay active).  The exact engine uses
k0 = x/sqrt(1+N), which keeps k*B <= x^2 and hence the implication valid;
the classical threshold k0 = N*x/sqrt(1+N) (with the inner count
unconstrained) is available as a diagnostic and differs from the exact
decomposition by a boundary term of size ~ x^2.

All range comparisons against irrational endpoints are exact integer tests
on squared quantities.  Congruence classes are counted through the
stratification k = a*b^2*d (a squarefree, gcd(a,d) = 1, pairs divisible by
a*b), with per-root progression counts by floor division.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import acos, gcd, isqrt, log, pi, sqrt

import numpy as np

from .arith import FactoredInteger, FormParameter, Sieve, divisor_count, factor
from .constants import AsymptoticConstants
from .roots import roots_by_lifting

BRUTE_FORCE_LIMIT = 2000


@dataclass(frozen=True)
class DecomposedSum:
    n: int
    x: int
    r_sum: int
    q_sum: int
    t_sum: int
    s_sum: int
    threshold: int

    def __post_init__(self) -> None:
        assert self.s_sum == 2 * self.r_sum - self.q_sum - self.t_sum


@dataclass(frozen=True)
class ResidualRecord:
    x: int
    s_sum: int
    main_term: float
    residual: float
    residual_x32: float
    residual_x2: float


# ---------------------------------------------------------------------------
# oracle engine
# ---------------------------------------------------------------------------

def brute_force_s(param: FormParameter, x: int) -> int:
    """Exact S_N(x) by per-value factorization; oracle scale x <= 2000."""
    if not 1 <= x <= BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force supports 1 <= x <= {BRUTE_FORCE_LIMIT}")
    return brute_force_prefix(param, x)[x]


def brute_force_prefix(param: FormParameter, x: int) -> "list[int]":
    """S_N(t) for every t <= x in one pass (bucketed by max(m, n))."""
    if not 1 <= x <= BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force supports 1 <= x <= {BRUTE_FORCE_LIMIT}")
    n_form = param.n
    buckets = [0] * (x + 1)
    for m in range(1, x + 1):
        nm2 = n_form * m * m
        for n in range(1, x + 1):
            buckets[max(m, n)] += divisor_count(factor(n * n + nm2))
    out = [0] * (x + 1)
    acc = 0
    for t in range(1, x + 1):
        acc += buckets[t]
        out[t] = acc
    return out


# ---------------------------------------------------------------------------
# exact thresholds (integer comparisons on squares)
# ---------------------------------------------------------------------------

def floor_b(param: FormParameter, x: int) -> int:
    """floor(sqrt(1+N) * x)."""
    return isqrt((1 + param.n) * x * x)


def floor_k0_exact(param: FormParameter, x: int) -> int:
    """floor(x / sqrt(1+N)): largest k with k^2 (1+N) <= x^2."""
    return isqrt(x * x // (1 + param.n))


def floor_k0_classical(param: FormParameter, x: int) -> int:
    """floor(N x / sqrt(1+N)): largest k with k^2 (1+N) <= N^2 x^2."""
    return isqrt(param.n * param.n * x * x // (1 + param.n))


# ---------------------------------------------------------------------------
# stratification k = a b^2 d and shared caches
# ---------------------------------------------------------------------------

class EngineEnv:
    """Shared sieve, root sets and residue machinery for one (N, x) run."""

    def __init__(self, param: FormParameter, limit: int):
        self.param = param
        self.sieve = Sieve(max(limit, 4))
        self._roots: dict[int, tuple[int, ...]] = {}
        self._phi: dict[int, int] = {}
        self._primes_of: dict[int, tuple[int, ...]] = {}

    def roots(self, d: int) -> tuple[int, ...]:
        got = self._roots.get(d)
        if got is None:
            got = roots_by_lifting(self.param, self.sieve.factored(d)).roots
            self._roots[d] = got
        return got

    def primes_of(self, d: int) -> tuple[int, ...]:
        got = self._primes_of.get(d)
        if got is None:
            got = tuple(p for p, _ in self.sieve.factorize(d))
            self._primes_of[d] = got
        return got

    def phi(self, d: int) -> int:
        got = self._phi.get(d)
        if got is None:
            out = d
            for p in self.primes_of(d):
                out -= out // p
            self._phi[d] = out
            got = out
        return got

    def coprime_residues(self, d: int) -> np.ndarray:
        """Ascending residues in [1, d] coprime to d (not cached; O(d))."""
        mask = np.ones(d + 1, dtype=bool)
        mask[0] = False
        for p in self.primes_of(d):
            mask[p::p] = False
        mask[d] = d == 1
        return np.nonzero(mask)[0].astype(np.int64)

    def coprime_count_upto(self, d: int, r: int) -> int:
        """#{u <= r : gcd(u, d) = 1} by inclusion-exclusion."""
        if r <= 0:
            return 0
        primes = self.primes_of(d)
        subsets = [1]
        for p in primes:
            subsets += [-s * p for s in subsets]
        return sum((r // abs(s)) * (1 if s > 0 else -1) for s in subsets)


def strata(fi: FactoredInteger) -> "list[tuple[int, int, int]]":
    """All (a, b, d) with a*b^2*d = k, a squarefree, gcd(a, d) = 1."""
    out = [(1, 1, 1)]
    for p, e in fi.factors:
        nxt = []
        choices = []
        if e % 2 == 1:
            choices.append((p, p ** ((e - 1) // 2), 1))
        for beta in range(e // 2 + 1):
            delta = e - 2 * beta
            choices.append((1, p ** beta, p ** delta))
        for a, b, d in out:
            for pa, pb, pd in choices:
                nxt.append((a * pa, b * pb, d * pd))
        out = nxt
    return out


# ---------------------------------------------------------------------------
# R: pairs in the full box divisible by k
# ---------------------------------------------------------------------------

def _box_count_stratum(env: EngineEnv, a: int, b: int, d: int, x: int) -> int:
    """#{m, n <= x : ab | m, ab | n, (m/ab, d) = 1, (n/ab)^2+N(m/ab)^2 = 0 mod d}."""
    m_top = x // (a * b)
    if m_top <= 0:
        return 0
    if d == 1:
        return m_top * m_top
    roots = env.roots(d)
    if not roots:
        return 0
    q0, r0 = divmod(m_top, d)
    phi_d = env.phi(d)
    c1 = env.coprime_count_upto(d, r0)
    total = len(roots) * (q0 * q0 * phi_d + q0 * c1)
    units = env.coprime_residues(d)
    prefix = units[:c1]
    for w in roots:
        if gcd(w, d) == 1:
            arr = (prefix * w) % d
            t_w = int(np.count_nonzero((arr != 0) & (arr <= r0)))
            c2 = c1
        else:
            arr_full = (units * w) % d
            arr_full[arr_full == 0] = d
            inside = arr_full <= r0
            c2 = int(np.count_nonzero(inside))
            t_w = int(np.count_nonzero(inside[:c1]))
        total += q0 * c2 + t_w
    return total


def count_pairs_divisible_by(param: FormParameter, k: int, x: int,
                             env: "EngineEnv | None" = None) -> int:
    """Exact #{1 <= m, n <= x : n^2 + N m^2 = 0 (mod k)}."""
    if k < 1 or x < 1:
        raise ValueError("k and x must be positive")
    if env is None:
        env = EngineEnv(param, k)
    fi = env.sieve.factored(k)
    return sum(_box_count_stratum(env, a, b, d, x) for a, b, d in strata(fi))


def _isqrt_vec(vals: np.ndarray) -> np.ndarray:
    r = np.sqrt(vals.astype(np.float64)).astype(np.int64)
    r -= r * r > vals
    r += (r + 1) * (r + 1) <= vals
    return r


def _ellipse_count_stratum(env: EngineEnv, a: int, b: int, d: int, x: int,
                           cap: bool) -> int:
    """Pairs in the stratum with n^2 + N m^2 <= k x sqrt(1+N).

    After dividing out (ab)^2 the bound becomes V' <= d x sqrt(1+N) / a,
    compared exactly via (a V')^2 <= (1+N) d^2 x^2.  With `cap` the box
    constraints m', n' <= x/(ab) apply as well.
    """
    n_form = env.param.n
    v_top = isqrt((1 + n_form) * d * d * x * x) // a
    if v_top <= n_form:
        return 0
    roots = env.roots(d)
    if not roots:
        return 0
    m_top = isqrt((v_top - 1) // n_form)
    box = x // (a * b)
    if cap:
        m_top = min(m_top, box)
    if m_top <= 0:
        return 0
    m_arr = np.arange(1, m_top + 1, dtype=np.int64)
    if d > 1:
        base = np.ones(d, dtype=bool)  # coprimality pattern, index = residue mod d
        for p in env.primes_of(d):
            base[::p] = False
        reps = int(np.ceil((m_top + 1) / d))
        mask = np.tile(base, reps)[1:m_top + 1]
        m_arr = m_arr[mask]
        if m_arr.size == 0:
            return 0
    n_max = _isqrt_vec(v_top - n_form * m_arr * m_arr)
    if cap:
        np.minimum(n_max, box, out=n_max)
    total = 0
    for w in roots:
        v0 = (m_arr * w) % d
        v0[v0 == 0] = d
        cnt = (n_max - v0) // d + 1
        total += int(cnt[cnt > 0].sum())
    return total


def _ellipse_congruence_count(param: FormParameter, k: int, x: int, cap: bool,
                              env: EngineEnv) -> int:
    fi = env.sieve.factored(k)
    return sum(_ellipse_count_stratum(env, a, b, d, x, cap)
               for a, b, d in strata(fi))


# ---------------------------------------------------------------------------
# the decomposition engine
# ---------------------------------------------------------------------------

def hyperbola_s(param: FormParameter, x: int,
                classical_threshold: bool = False,
                env: "EngineEnv | None" = None) -> DecomposedSum:
    """Exact S = 2R - Q - T.

    With the default threshold the decomposition is exact.  With
    `classical_threshold` the Q piece uses k <= N x / sqrt(1+N) and drops the
    box constraints (the form the closed-form asymptotics evaluate); the
    result then differs from S by the boundary overcount.
    """
    if x < 1:
        raise ValueError("x must be >= 1")
    b_top = floor_b(param, x)
    if env is None:
        env = EngineEnv(param, b_top)
    k0 = (floor_k0_classical if classical_threshold else floor_k0_exact)(param, x)
    r_sum = q_sum = t_sum = 0
    for k in range(1, b_top + 1):
        r_sum += count_pairs_divisible_by(param, k, x, env)
        if k <= k0:
            q_sum += _ellipse_congruence_count(param, k, x, cap=False, env=env)
        else:
            t_sum += _ellipse_congruence_count(param, k, x, cap=True, env=env)
    return DecomposedSum(param.n, x, r_sum, q_sum, t_sum,
                         2 * r_sum - q_sum - t_sum, k0)


def decomposition_discrepancy(param: FormParameter, x: int) -> dict:
    """Exact vs classical-threshold decomposition, with their difference."""
    env = EngineEnv(param, floor_b(param, x))
    exact = hyperbola_s(param, x, env=env)
    classical = hyperbola_s(param, x, classical_threshold=True, env=env)
    return {
        "exact": exact,
        "classical": classical,
        "s_difference": exact.s_sum - classical.s_sum,
    }


# ---------------------------------------------------------------------------
# the plain constrained lattice count and its closed-form approximation
# ---------------------------------------------------------------------------

def lattice_count_constrained(param: FormParameter, k: int, x: int) -> tuple[int, float]:
    """(#{m, n <= x : n^2 + N m^2 <= k x sqrt(1+N)}, smooth approximation).

    Valid for N x / sqrt(1+N) < k <= sqrt(1+N) x, where the ellipse actually
    cuts the box.  The approximation is the area term
    (k x sqrt(1+N) / (2 sqrt(N))) * (acos-acos) + the two square-root strips.
    """
    n = param.n
    if not (n * n * x * x < k * k * (1 + n) and k * k <= (1 + n) * x * x):
        raise ValueError("k outside (N x/sqrt(1+N), sqrt(1+N) x]")
    cap_sq = (1 + n) * k * k * x * x  # (n^2+Nm^2)^2 <= cap_sq
    total = 0
    for m in range(1, x + 1):
        nm2 = n * m * m
        # largest t with (t^2 + nm2)^2 <= cap_sq and t <= x
        t = isqrt(isqrt(cap_sq) - nm2) if isqrt(cap_sq) >= nm2 else -1
        while t >= 0 and (t * t + nm2) ** 2 > cap_sq:
            t -= 1
        total += max(0, min(t, x))
    kb = k * x * sqrt(1 + n)
    def _clamped_acos(u: float) -> float:
        return acos(min(1.0, max(-1.0, u)))
    approx = (kb / (2 * sqrt(n))
              * (_clamped_acos(sqrt(max(0.0, 1 - x / (k * sqrt(1 + n)))))
                 - _clamped_acos(sqrt(min(1.0, n * x / (k * sqrt(1 + n)))))))
    approx += 0.5 * x * sqrt(max(0.0, (kb - x * x) / n))
    approx += 0.5 * x * sqrt(max(0.0, kb - n * x * x))
    return total, approx


# ---------------------------------------------------------------------------
# the residual study
# ---------------------------------------------------------------------------

def residual_study(param: FormParameter, xs: "list[int]",
                   constants: AsymptoticConstants) -> "list[ResidualRecord]":
    out = []
    for x in xs:
        s_val = hyperbola_s(param, x).s_sum
        main = constants.c1 * x * x * log(x) + constants.c2 * x * x
        resid = s_val - main
        out.append(ResidualRecord(x, s_val, main, resid,
                                  resid / x ** 1.5, resid / x ** 2))
    return out


def residual_slope(records: "list[ResidualRecord]") -> float:
    """Least-squares slope of log|residual| against log x."""
    pts = [(log(r.x), log(abs(r.residual))) for r in records if r.residual != 0]
    if len(pts) < 2:
        raise ValueError("need at least two points with nonzero residual")
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    return float(np.polyfit(xs, ys, 1)[0])
