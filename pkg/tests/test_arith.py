import random
from fractions import Fraction
from math import gcd, isqrt, log

import pytest

from divform.arith import (
    FactoredInteger,
    FormParameter,
    Sieve,
    chi,
    crt_combine,
    dirichlet_divisor_sum,
    divisor_count,
    divisors,
    euler_phi,
    factor,
    hensel_lift,
    is_prime,
    kronecker,
    mobius,
    ramanujan_sum,
    sqrt_mod,
)

EULER_GAMMA = 0.5772156649015329


def test_factor_examples():
    assert factor(1).factors == ()
    assert factor(164).factors == ((2, 2), (41, 1))
    p = 10 ** 9 + 7
    assert is_prime(p)  # independent primality oracle for the example below
    assert factor(p).factors == ((p, 1),)
    with pytest.raises(ValueError):
        factor(0)


def test_factor_large_and_roundtrip():
    rng = random.Random(11)
    for _ in range(25):
        n = rng.randrange(2, 2 ** 60)
        fi = factor(n)
        prod = 1
        for p, e in fi.factors:
            assert is_prime(p)
            prod *= p ** e
        assert prod == n


def test_factored_integer_validation():
    with pytest.raises(ValueError):
        FactoredInteger(12, ((4, 1), (3, 1)))  # 4 not prime
    with pytest.raises(ValueError):
        FactoredInteger(12, ((2, 1), (3, 1)))  # product mismatch


def test_kronecker_examples():
    assert kronecker(-8, 3) == 1
    assert kronecker(-8, 5) == -1
    for a in (-5, -1, 0, 3, 17):
        assert kronecker(a, 1) == 1
    # conventions at 2 and -1
    assert kronecker(7, 2) == 1
    assert kronecker(3, 2) == -1
    assert kronecker(6, 2) == 0
    assert kronecker(-3, -1) == -1
    assert kronecker(3, -1) == 1


def test_kronecker_multiplicative():
    # completely multiplicative in each slot (away from the degenerate 0)
    rng = random.Random(2024)
    for _ in range(10_000):
        a = rng.randrange(-60, 61) or 1
        b = rng.randrange(-60, 61) or 1
        m = rng.randrange(-40, 41) or 1
        n = rng.randrange(-40, 41) or 1
        assert kronecker(a, m * n) == kronecker(a, m) * kronecker(a, n)
        assert kronecker(a * b, m) == kronecker(a, m) * kronecker(b, m)


def test_kronecker_matches_legendre():
    for p in (3, 5, 7, 11, 97, 9973):
        for a in range(1, p):
            want = pow(a, (p - 1) // 2, p)
            want = -1 if want == p - 1 else want
            assert kronecker(a, p) == want


def test_chi_examples(params):
    p2 = params[2]
    assert chi(p2, 3) == 1
    assert chi(p2, 5) == -1
    assert chi(p2, 2) == 0
    # discriminant conventions at 2
    assert chi(params[7], 2) == 1
    assert chi(params[67], 2) == -1
    assert chi(params[1], 2) == 0


def test_sqrt_mod_examples():
    assert sqrt_mod(-2, 17) == (7, 10)
    assert sqrt_mod(1, 5) == (1, 4)
    assert sqrt_mod(3, 5) == ()
    assert sqrt_mod(0, 7) == (0,)
    with pytest.raises(ValueError):
        sqrt_mod(3, 9)
    with pytest.raises(ValueError):
        sqrt_mod(3, 2)


def test_sqrt_mod_against_character():
    from divform.arith import primes_up_to
    for p in primes_up_to(10_000):
        if p == 2:
            continue
        for a in (2, 5, -1, -11):
            if a % p == 0:
                continue
            roots = sqrt_mod(a, p)
            assert bool(roots) == (kronecker(a % p, p) == 1)
            for r in roots:
                assert (r * r - a) % p == 0


def test_hensel_examples():
    assert hensel_lift(1, -2, 3, 2) == 4
    assert hensel_lift(7, -2, 17, 1) == 7
    assert hensel_lift(4, -2, 3, 3) == 22


def test_hensel_property():
    from divform.arith import primes_up_to
    for p in primes_up_to(100):
        if p == 2:
            continue
        for a in range(1, p):
            roots = sqrt_mod(a, p)
            for r in roots:
                if r == 0:
                    continue
                for k in range(1, 7):
                    w = hensel_lift(r, a, p, k)
                    assert (w * w - a) % p ** k == 0
                    assert w % p == r


def test_crt_examples():
    assert crt_combine([(1, 3), (2, 5)]) == (7, 15)
    assert crt_combine([(0, 7)]) == (0, 7)
    assert crt_combine([(4, 9), (7, 17)]) == (58, 153)
    with pytest.raises(ValueError):
        crt_combine([(1, 6), (2, 4)])


def test_multiplicative_functions():
    assert divisor_count(factor(12)) == 6
    assert mobius(4) == 0 and mobius(6) == 1 and mobius(1) == 1
    assert euler_phi(9) == 6
    assert divisors(12) == [1, 2, 3, 4, 6, 12]


def test_ramanujan_examples():
    assert ramanujan_sum(0, 6) == euler_phi(6)
    assert ramanujan_sum(1, 6) == mobius(6)
    assert ramanujan_sum(2, 4) == -2


def test_dirichlet_divisor_sum():
    assert dirichlet_divisor_sum(1) == 1
    assert dirichlet_divisor_sum(10) == 27
    brute = sum(divisor_count(factor(n)) for n in range(1, 101))
    assert dirichlet_divisor_sum(100) == brute
    with pytest.raises(ValueError):
        dirichlet_divisor_sum(0)


def test_divisor_sum_band():
    for x in [100, 316, 1000, 31623, 10 ** 6]:
        err = dirichlet_divisor_sum(x) - (x * log(x) + (2 * EULER_GAMMA - 1) * x)
        assert abs(err) <= 4 * x ** 0.5


def test_form_parameter():
    with pytest.raises(ValueError):
        FormParameter.make(5)
    assert FormParameter.make(2).discriminant == -8
    assert FormParameter.make(7).discriminant == -7
    assert FormParameter.make(1).units == 4
    assert FormParameter.make(3).units == 6
    assert FormParameter.make(163).units == 2


def test_sieve_matches_factor():
    sv = Sieve(5000)
    for n in range(1, 5001):
        assert sv.factored(n).factors == factor(n).factors
