import math

import pytest

from divform.arith import FormParameter
from divform.constants import theorem_constants
from divform.sums import (
    EngineEnv,
    brute_force_prefix,
    brute_force_s,
    count_pairs_divisible_by,
    decomposition_discrepancy,
    floor_b,
    floor_k0_classical,
    floor_k0_exact,
    hyperbola_s,
    lattice_count_constrained,
    residual_slope,
    residual_study,
)


def test_brute_examples(params):
    assert brute_force_s(params[2], 1) == 2
    assert brute_force_s(params[2], 2) == 15
    assert brute_force_s(params[163], 1) == 6
    with pytest.raises(ValueError):
        brute_force_s(params[2], 2001)


def test_anchor_decomposition(params):
    d = hyperbola_s(params[2], 2)
    assert (d.r_sum, d.q_sum, d.t_sum, d.s_sum) == (10, 1, 4, 15)
    assert d.threshold == floor_k0_exact(params[2], 2) == 1
    d1 = hyperbola_s(params[2], 1)
    assert d1.s_sum == 2 and d1.r_sum == 1


def test_thresholds_exact(params):
    p2 = params[2]
    for x in (1, 2, 10, 137, 4096):
        b = floor_b(p2, x)
        assert b * b <= 3 * x * x < (b + 1) * (b + 1)
        k0 = floor_k0_exact(p2, x)
        assert 3 * k0 * k0 <= x * x < 3 * (k0 + 1) * (k0 + 1)
        kc = floor_k0_classical(p2, x)
        assert 3 * kc * kc <= 4 * x * x < 3 * (kc + 1) * (kc + 1)


def test_count_pairs_examples(params):
    p2 = params[2]
    assert count_pairs_divisible_by(p2, 1, 5) == 25
    assert count_pairs_divisible_by(p2, 3, 2) == 4
    assert count_pairs_divisible_by(p2, 2, 2) == 2


def test_count_pairs_brute(params):
    for n in (2, 67, 163):
        param = params[n]
        env = EngineEnv(param, 40)
        for k in range(1, 41):
            for x in (1, 3, 7, 20):
                want = sum((i * i + n * j * j) % k == 0
                           for i in range(1, x + 1) for j in range(1, x + 1))
                got = count_pairs_divisible_by(param, k, x, env)
                assert got == want, (n, k, x)


def test_count_pairs_sums_to_r(params):
    p2 = params[2]
    x = 37
    env = EngineEnv(p2, floor_b(p2, x))
    total = sum(count_pairs_divisible_by(p2, k, x, env)
                for k in range(1, floor_b(p2, x) + 1))
    assert total == hyperbola_s(p2, x).r_sum


def test_engine_equivalence_small(params):
    for n in (2, 67, 163):
        param = params[n]
        prefix = brute_force_prefix(param, 50)
        env = EngineEnv(param, floor_b(param, 50))
        for x in range(1, 51):
            assert hyperbola_s(param, x, env=env).s_sum == prefix[x], (n, x)


def test_partition_independence(params):
    """R is identical no matter how the k-range is partitioned or ordered."""
    p2 = params[2]
    x = 29
    env = EngineEnv(p2, floor_b(p2, x))
    ks = list(range(1, floor_b(p2, x) + 1))
    forward = sum(count_pairs_divisible_by(p2, k, x, env) for k in ks)
    backward = sum(count_pairs_divisible_by(p2, k, x, env) for k in reversed(ks))
    assert forward == backward == hyperbola_s(p2, x).r_sum


def test_classical_threshold_diagnostic(params):
    """The classical threshold drops box constraints; the overcount is the
    boundary term, visibly nonzero for N > 1 at moderate x."""
    d = decomposition_discrepancy(params[2], 64)
    assert d["exact"].s_sum == brute_force_s(params[2], 64)
    assert d["s_difference"] > 0
    # and the exact engine's threshold keeps the decomposition an identity
    assert d["exact"].s_sum == 2 * d["exact"].r_sum - d["exact"].q_sum - d["exact"].t_sum


def test_lattice_constrained(params):
    p2 = params[2]
    exact, approx = lattice_count_constrained(p2, 15, 10)
    want = sum((i * i + 2 * j * j) ** 2 <= 3 * (15 * 10) ** 2
               for i in range(1, 11) for j in range(1, 11))
    assert exact == want
    assert abs(approx - exact) < 6.0 * 10  # perimeter-order agreement
    with pytest.raises(ValueError):
        lattice_count_constrained(p2, 4, 10)  # below the valid k range


def test_lattice_constrained_band(params):
    from divform.calibration import load_calibration
    band = load_calibration()["lattice"]["constrained_band"]
    p2 = params[2]
    for x in (40, 100):
        lo = floor_k0_classical(p2, x)
        hi = floor_b(p2, x)
        for k in range(lo + 1, hi + 1, max(1, (hi - lo) // 5)):
            exact, approx = lattice_count_constrained(p2, k, x)
            assert abs(approx - exact) <= band * x, (k, x)


def test_boundary_k_at_b(params):
    """At the top divisor bound the ellipse covers the box except one corner."""
    p2 = params[2]
    x = 10
    b = floor_b(p2, x)
    exact, _ = lattice_count_constrained(p2, b, x)
    full = x * x
    assert 0 <= full - exact <= x  # a thin corner sliver at most


def test_closed_form_shadows(params, rho_tables):
    """Two-point decrease of the R, Q, T pieces toward their limits (N = 2).

    Q and T use the classical-threshold decomposition (the one the closed
    forms evaluate); their limits are (pi sqrt(N)/2) A (equal to
    pi^2/(8 L2) at N = 2) and the bracket combining the ellipse-sector and
    strip areas.  R's limit is 2A x^2 log x.
    """
    p2 = params[2]
    tc = theorem_constants(p2, rho_tables[2], cutoff=100_000)
    q_target = math.pi ** 2 / (8 * tc.l2)
    t_target = tc.a / math.sqrt(2) * (
        6 * math.sqrt(2) - 3 - 2 * math.acos(math.sqrt(0.5))
        - 4 * math.atan(1 / math.sqrt(2)) - 2 * math.atan(math.sqrt(2))
        + 2 * math.atan(1.0))
    gaps = {}
    for x in (512, 4096):
        d = decomposition_discrepancy(p2, x)
        cl = d["classical"]
        gaps[x] = (
            abs(cl.q_sum / x ** 2 - q_target),
            abs(cl.t_sum / x ** 2 - t_target),
            abs(d["exact"].r_sum / (x * x * math.log(x)) - 2 * tc.a),
        )
    for i, label in enumerate(("Q", "T", "R")):
        assert gaps[4096][i] < gaps[512][i], (label, gaps)


def test_residual_study(params, rho_tables):
    tc = theorem_constants(params[2], rho_tables[2], cutoff=100_000)
    records = residual_study(params[2], [64, 128], tc)
    assert [r.x for r in records] == [64, 128]
    for r in records:
        assert r.s_sum == brute_force_s(params[2], r.x)
        assert r.residual == pytest.approx(r.s_sum - r.main_term)
        assert r.residual_x2 == pytest.approx(r.residual / r.x ** 2)
    single = residual_study(params[2], [64], tc)
    with pytest.raises(ValueError):
        residual_slope(single)
