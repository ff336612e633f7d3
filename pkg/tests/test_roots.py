from math import gcd

import pytest

from divform.arith import FormParameter, Sieve, chi
from divform.roots import (
    NormRepresentation,
    cornacchia_prime,
    bijection_branch,
    representations_of,
    roots_by_lifting,
    roots_from_representations,
    rho0_of,
    verify_bijection,
)


def brute_roots(n, d):
    return tuple(v for v in range(d) if (v * v + n) % d == 0)


def test_lifting_examples(params):
    p2 = params[2]
    assert roots_by_lifting(p2, 9).roots == (4, 5)
    assert roots_by_lifting(p2, 5).roots == ()
    assert roots_by_lifting(p2, 1).roots == (0,)


def test_lifting_brute(params):
    for n in (2, 7, 67, 163):
        param = params[n]
        for d in range(1, 400):
            assert roots_by_lifting(param, d).roots == brute_roots(n, d), (n, d)


def test_root_count_multiplicative(params):
    sv = Sieve(10_000)
    for n in (2, 67):
        param = params[n]
        for d in range(1, 10_001):
            if gcd(d, 2 * n) != 1:
                continue
            count = 1
            for p, _ in sv.factorize(d):
                count *= 1 + chi(param, p)
                if not count:
                    break
            assert rho0_of(param, sv.factored(d)) == count


def test_representations_examples(params):
    p2 = params[2]
    assert [(r.r, r.s) for r in representations_of(p2, 9)] == [(1, 2)]
    assert [(r.r, r.s) for r in representations_of(p2, 17)] == [(3, 2)]
    # the half-integral example: brute-force search fixes (4, 2) as the truth
    reps67 = representations_of(params[67], 71)
    assert [(r.r, r.s, r.kind) for r in reps67] == [(4, 2, "half_integral")]
    assert 4 * 4 + 67 * 4 == 4 * 71


def test_representations_brute(params):
    """Every (drepn) solution up to the sign of s is produced, and no more."""
    for n in (2, 67, 163):
        param = params[n]
        half = n != 2
        for d in range(1, 300):
            if gcd(d, 2 * n) != 1:
                continue
            target = 4 * d if half else d
            want = set()
            s = 0
            while n * s * s <= target:
                rr = target - n * s * s
                r = int(rr ** 0.5)
                while r * r < rr:
                    r += 1
                if r * r == rr and r > 0 and gcd(r, s) <= (2 if half else 1):
                    if not half or (r - s) % 2 == 0:
                        want.add((r, s))
                s += 1
            got = {(rep.r, rep.s) for rep in representations_of(param, d)}
            assert got == want, (n, d)


def test_roots_from_representations_examples(params):
    p2 = params[2]
    assert roots_from_representations(p2, 9).roots == (4, 5)
    assert roots_from_representations(p2, 17).roots == (7, 10)
    assert roots_from_representations(p2, 3).roots == (1, 2)


def test_n_divides_branch(params):
    for n in (2, 67, 163):
        param = params[n]
        for d1 in (1, 3, 9, 17, 19, 59):
            d = n * d1
            got = roots_from_representations(param, d)
            assert got.roots == brute_roots(n, d), (n, d)
    # N^2 | d is unsolvable
    assert roots_from_representations(params[67], 67 * 67).roots == ()


def test_even7_branch(params):
    p7 = params[7]
    for d in (8, 16, 24, 32, 64, 72, 88, 104, 128, 184, 256):
        assert bijection_branch(p7, d) == "even7"
        assert roots_from_representations(p7, d).roots == brute_roots(7, d), d


def test_bijection_sweep(params):
    for n in (2, 163):
        rep = verify_bijection(params[n], 500)
        assert rep.ok, rep.mismatches[:3]
        assert rep.checked > 0
    rep = verify_bijection(params[7], 512)
    assert rep.ok and rep.by_branch.get("even7", 0) > 0


def test_bijection_excluded_units(params):
    with pytest.raises(ValueError):
        verify_bijection(params[3], 100)
    with pytest.raises(ValueError):
        representations_of(params[3], 7)


def test_distinct_representations_distinct_roots(params):
    """Distinct (r, s) pairs (up to sign of s) land on distinct root pairs."""
    for n in (2, 67, 163):
        param = params[n]
        for d in range(3, 2000):
            if gcd(d, 2 * n) != 1:
                continue
            reps = representations_of(param, d)
            if len(reps) < 2:
                continue
            seen = set()
            for rep in reps:
                r, s = rep.r, rep.s
                if r % 2 == 0 and s % 2 == 0:
                    r, s = r // 2, s // 2
                v = r * pow(s, -1, d) % d
                pair = frozenset((v, (-v) % d))
                assert pair not in seen, (n, d)
                seen.add(pair)


def test_cornacchia_norms(params):
    for n in (2, 67, 163):
        param = params[n]
        half = n != 2
        from divform.arith import primes_up_to
        for p in primes_up_to(3000):
            if chi(param, p) != 1:
                continue
            r, s = cornacchia_prime(param, p)
            assert r * r + n * s * s == (4 * p if half else p)


def test_bijection_branch(params):
    p67 = params[67]
    assert bijection_branch(p67, 1) == "coprime"
    assert bijection_branch(p67, 9) == "coprime"
    assert bijection_branch(p67, 67 * 3) == "n_divides"
    assert bijection_branch(p67, 6) is None
    p7 = params[7]
    assert bijection_branch(p7, 24) == "even7"
    assert bijection_branch(p7, 12) is None
    assert bijection_branch(p7, 7 * 8) == "n_divides"
