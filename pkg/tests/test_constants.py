import math

import pytest

from divform.arith import FormParameter, chi, primes_up_to
from divform.constants import (
    bad_prime_g_factor,
    digamma,
    e_integral,
    g_euler,
    hurwitz_zeta,
    l1_class_number_form,
    l_value,
    second_coefficient,
    theorem_constants,
)
from divform.rho import RhoTable, error_band_constant, rho_prime_power

EULER_GAMMA = 0.5772156649015329


def test_hurwitz_zeta():
    assert hurwitz_zeta(2, 1.0) == pytest.approx(math.pi ** 2 / 6, abs=1e-13)
    assert hurwitz_zeta(2, 0.5) == pytest.approx(math.pi ** 2 / 2, abs=1e-12)
    # shift identity zeta(s, a) = zeta(s, a+1) + a^-s
    assert hurwitz_zeta(2, 0.25) == pytest.approx(hurwitz_zeta(2, 1.25) + 16, abs=1e-11)


def test_digamma():
    assert digamma(1.0) == pytest.approx(-EULER_GAMMA, abs=1e-13)
    assert digamma(0.5) == pytest.approx(-EULER_GAMMA - 2 * math.log(2), abs=1e-12)
    # recurrence psi(x+1) = psi(x) + 1/x
    assert digamma(1.75) == pytest.approx(digamma(0.75) + 1 / 0.75, abs=1e-12)


def test_l1_class_number_forms(params):
    # pi/(2 sqrt(2)), pi/sqrt(67), pi/sqrt(163) and the rest of the family
    for n in (1, 2, 3, 7, 11, 19, 43, 67, 163):
        got = l_value(params[n], 1)
        assert got == pytest.approx(l1_class_number_form(params[n]), abs=1e-10)
    assert l_value(params[2], 1) == pytest.approx(math.pi / (2 * math.sqrt(2)), abs=1e-12)
    assert l_value(params[67], 1) == pytest.approx(math.pi / math.sqrt(67), abs=1e-12)
    assert l_value(params[163], 1) == pytest.approx(math.pi / math.sqrt(163), abs=1e-12)


def test_l2_against_direct_series(params):
    for n in (2, 67):
        param = params[n]
        direct = sum(chi(param, m) / m ** 2 for m in range(1, 200_001))
        assert l_value(param, 2) == pytest.approx(direct, abs=1e-9)


def test_l2_sanity_window(params):
    l2 = l_value(params[2], 2)
    assert 0.8 < l2 < 1.2
    q_const = math.pi ** 2 / (8 * l2)
    assert 0.8 < q_const < 1.4


def test_bad_prime_factors(params):
    # ramified primes contribute 1 exactly
    assert bad_prime_g_factor(params[2], 2) == 1.0
    assert bad_prime_g_factor(params[67], 67) == 1.0
    # p = 2 for N = 3 (mod 8): ratio pattern 1,2 alternating
    # F(s) = (1+x+x^2)/(1-x^2) at x = 1/2 gives 7/3; factor = 7/3 * 1/2 * 3/2
    assert bad_prime_g_factor(params[67], 2, 1) == pytest.approx(1.75, abs=1e-12)
    # p = 2 for N = 7: split-like drift, F = 1 + x/(1-x)^2
    x = 0.5
    want = (1 + x / (1 - x) ** 2) * (1 - x) * (1 - x)
    assert bad_prime_g_factor(params[7], 2, 1) == pytest.approx(want, abs=1e-12)


def test_g_euler_pole_value_matches_table(params, rho_tables):
    """L1 * G(1) / 2 is the quadratic growth rate of the rho prefix sums."""
    for n in (2, 67, 163):
        a_const = l_value(params[n], 1) * g_euler(params[n], 1)[0] / 2
        table = rho_tables[n]
        y = table.limit
        assert table.partial_rho[y] / y / y == pytest.approx(a_const, rel=2e-3)


def test_g_euler_truncation(params):
    for n in (2, 163):
        v1, hw1 = g_euler(params[n], 1, 1000)
        v2, hw2 = g_euler(params[n], 1, 100_000)
        assert abs(v1 - v2) <= hw1 + hw2
        assert abs(v1 - v2) < 2e-5
        assert hw2 < hw1


def test_g_euler_s2_examples(params):
    """At s = 2 the good factors are 1 -+ p^-3 per the character sign."""
    p2 = params[2]
    assert chi(p2, 3) == 1 and chi(p2, 5) == -1
    base = 1.0
    for p in primes_up_to(10_000):
        if p == 2:
            continue
        base *= 1 - chi(p2, p) / p ** 3
    got, _ = g_euler(p2, 2, 10_000)
    assert got == pytest.approx(base, rel=1e-12)  # bad factor at 2 is 1


def test_e_integral(params, rho_tables):
    p2 = params[2]
    table = rho_tables[2]
    a_const = l_value(p2, 1) * g_euler(p2, 1)[0] / 2
    c_emp = error_band_constant(table, a_const)
    v0, hw0 = e_integral(p2, 1, table, a_const, c_emp)
    assert v0 == 0.0 and hw0 > 0
    v1, hw1 = e_integral(p2, 100_000, table, a_const, c_emp)
    v2, hw2 = e_integral(p2, 400_000, table, a_const, c_emp)
    assert hw2 < hw1
    assert abs(v1 - v2) <= hw1 + hw2
    with pytest.raises(ValueError):
        e_integral(p2, 0, table, a_const, c_emp)
    with pytest.raises(ValueError):
        e_integral(p2, table.limit + 1, table, a_const, c_emp)


def test_theorem_constants(params, rho_tables):
    tc = theorem_constants(params[2], rho_tables[2], cutoff=100_000)
    assert tc.c1 == pytest.approx(4 * tc.a, rel=1e-15)
    assert tc.a == pytest.approx(tc.l1 * tc.g_pole / 2, rel=1e-15)
    assert tc.c2 == pytest.approx(second_coefficient(2, tc.a, tc.e_integral), rel=1e-15)
    assert tc.c2_halfwidth == pytest.approx(4 * tc.e_integral_halfwidth, rel=1e-12)
    # for N = 2 the Q piece equals the classical pi^2/(8 L2) form
    assert math.pi * math.sqrt(2) / 2 * tc.a == pytest.approx(
        math.pi ** 2 / (8 * tc.l2), rel=1e-7)
    with pytest.raises(ValueError):
        theorem_constants(params[7], rho_tables[2])


def test_constants_unsupported_s(params):
    with pytest.raises(ValueError):
        l_value(params[2], 3)
    with pytest.raises(ValueError):
        g_euler(params[2], 5)
