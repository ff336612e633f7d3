import cmath
import random
from math import isqrt, sqrt

import pytest

from divform.arith import FormParameter, Sieve
from divform.expsums import (
    bound_proxy_sum,
    dyadic_grid,
    geometric_sum_magnitude,
    growth_factors,
    large_sieve_sum,
    sieve_bound_study,
)
from divform.roots import roots_by_lifting, rho0_of


def direct_magnitude(h, v, d, m):
    return abs(sum(cmath.exp(2j * cmath.pi * h * n * v / d) for n in range(1, m + 1)))


def test_geometric_examples():
    assert geometric_sum_magnitude(1, 0, 5, 7)[0] == 7.0  # integer angle
    assert geometric_sum_magnitude(1, 1, 2, 2)[0] == pytest.approx(0.0, abs=1e-12)
    assert geometric_sum_magnitude(1, 1, 4, 4)[0] == pytest.approx(0.0, abs=1e-12)


def test_geometric_closed_form_random():
    rng = random.Random(99)
    for _ in range(300):
        d = rng.randrange(1, 2000)
        v = rng.randrange(0, d)
        h = rng.randrange(1, 50)
        m = rng.randrange(1, 2000)
        got, bound = geometric_sum_magnitude(h, v, d, m)
        want = direct_magnitude(h, v, d, m)
        assert got == pytest.approx(want, rel=1e-8, abs=1e-8)
        assert got <= bound + 1e-9


def test_sieve_sum_brute(params):
    p2 = params[2]
    sample = large_sieve_sum(p2, 2, 4, 4)
    want = 0.0
    for d in (3, 4):
        for v in roots_by_lifting(p2, d).roots:
            for h in range(1, 5):
                want += direct_magnitude(h, v, d, 4) / h
    assert sample.value == pytest.approx(want, rel=1e-12)


def test_sieve_sum_h1_m1(params):
    for n in (2, 67):
        param = params[n]
        sample = large_sieve_sum(param, 16, 1, 1)
        want = sum(rho0_of(param, d) for d in range(17, 33))
        assert sample.value == pytest.approx(float(want), rel=1e-12)


def test_monotone_in_h(params):
    p2 = params[2]
    values = [large_sieve_sum(p2, 8, h, 8).value for h in range(1, 6)]
    assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))


def test_bound_proxy_monotone_in_m(params):
    """The exact sum oscillates in M; the min(M, 1/2||t||) majorant does not."""
    p2 = params[2]
    values = [bound_proxy_sum(p2, 8, 4, m) for m in range(1, 12)]
    assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))


def test_exact_sum_not_monotone_in_m(params):
    p2 = params[2]
    v2 = large_sieve_sum(p2, 2, 1, 2).value
    v3 = large_sieve_sum(p2, 2, 1, 3).value
    assert v3 < v2  # cancellation at the full period


def test_study_and_growth(params):
    samples = sieve_bound_study(params[2], dyadic_grid(64, 512), 8, "d")
    assert len(samples) == 4
    factors = growth_factors(samples)
    assert len(factors) == 3
    assert all(f > 0 for _, f in factors)
    with pytest.raises(ValueError):
        sieve_bound_study(params[2], [], 8, "d")
    with pytest.raises(ValueError):
        sieve_bound_study(params[2], [64], 8, "bogus")


def test_rejects_unsupported_form(params):
    with pytest.raises(ValueError):
        large_sieve_sum(params[7], 8, 2, 2)
