import itertools
import math
import random
from math import isqrt

import pytest

from disclab.core import QuadSeq, discriminator_oracle
from disclab.errors import PreconditionViolated, SearchExhausted
from disclab.primes import (
    PrimeSearchSpec,
    ZCounterInput,
    counterexample_qp,
    find_digit_prime,
    is_prime,
    primes_in_window,
    sieve,
    zcounter,
)


def trial(n):
    if n < 2:
        return False
    return all(n % d for d in range(2, isqrt(n) + 1))


@pytest.mark.parametrize("n, want", [(61, True), (1, False), (509, True), (0, False), (2, True)])
def test_is_prime_examples(n, want):
    assert is_prime(n) is want


def test_is_prime_vs_trial_division():
    for n in range(100_000):
        assert is_prime(n) == trial(n), n


def test_is_prime_exhaustive_to_1e7():
    flags = sieve(10**7).tolist()
    assert flags[:100_000] == [trial(n) for n in range(100_000)]
    bad = [n for n in range(10**7 + 1) if is_prime(n) != flags[n]]
    assert bad == []


@pytest.mark.parametrize("n", [
    2047, 1_373_653, 25_326_001, 3_215_031_751, 2_152_302_898_747,
    3_474_749_660_383, 341_550_071_728_321, 3_825_123_056_546_413_051,
    561, 41041, 318_665_857_834_031_151_167_461,
])
def test_strong_pseudoprimes_rejected(n):
    if n >= 1 << 64:
        with pytest.raises(PreconditionViolated):
            is_prime(n)
    else:
        assert not is_prime(n)


@pytest.mark.parametrize("n", [2**61 - 1, 2**64 - 59, 1_000_000_007, 4_294_967_291])
def test_large_primes(n):
    assert is_prime(n)


@pytest.mark.parametrize("lo, hi, want", [
    (6, 9, [7]),
    (18, 27, [19, 23]),
    (54, 81, [59, 61, 67, 71, 73, 79]),
])
def test_windows(lo, hi, want):
    assert primes_in_window(lo, hi) == want


def test_segmented_window_matches_trial():
    lo, hi = 10**9, 10**9 + 5000
    got = primes_in_window(lo, hi, segment=777)
    assert got == [n for n in range(lo + 1, hi) if is_prime(n)]


# --- zcounter


def test_zcounter_examples():
    assert zcounter(ZCounterInput(5, 1, 1, 19)) == 15
    assert zcounter(ZCounterInput(3, 2, 1, 17)) == 15


def linear_z(p, k, b, r):
    pk = p**k
    return next(z for z in range(r) if (pk * z + b) % r == 0)


def random_zinput(rng):
    while True:
        p = rng.choice([3, 5, 7, 11, 13])
        k = rng.randint(1, 3)
        pk = p**k
        if pk < 5:
            continue
        b = rng.randint(-200, 200)
        if b % p == 0:
            continue
        # r prime, r = -b mod p^k, r > |b|, leading base-p^k digit p^k - 1
        u = rng.randint(0, 2)
        lo, hi = (pk - 1) * pk**u, pk ** (u + 1)
        if hi > 200_000:
            continue
        stream = (r for r in range(lo + (-b - lo) % pk, hi, pk) if r > abs(b) and is_prime(r))
        cands = list(itertools.islice(stream, 20))
        if cands:
            return p, k, b, rng.choice(cands)


def run_zcounter_minimality(count=500, seed=11):
    rng = random.Random(seed)
    mismatches = []
    for _ in range(count):
        p, k, b, r = random_zinput(rng)
        if zcounter(ZCounterInput(p, k, b, r)) != linear_z(p, k, b, r):
            mismatches.append((p, k, b, r))
    return mismatches


def test_zcounter_minimality():
    assert run_zcounter_minimality(200, seed=3) == []


# --- digit-constrained primes


@pytest.mark.parametrize("base, residue, want", [(9, 8, (683, 2)), (5, 4, (109, 2))])
def test_find_digit_prime_examples(base, residue, want):
    assert tuple(find_digit_prime(PrimeSearchSpec(base, residue))) == want


def test_find_digit_prime_base25():
    r, u = find_digit_prime(PrimeSearchSpec(25, 24))
    assert is_prime(r) and r % 25 == 24
    assert 24 * 25**u <= r < 25 ** (u + 1)
    # nothing smaller qualifies
    for v in range(u + 1):
        for cand in range(24 * 25**v, min(r, 25 ** (v + 1))):
            assert not (cand % 25 == 24 and is_prime(cand))


def test_find_digit_prime_brute_force():
    rng = random.Random(5)
    for _ in range(100):
        base = rng.randint(3, 30)
        residue = rng.choice([x for x in range(base) if math.gcd(x, base) == 1])
        digit = rng.randint(1, base - 1)
        floor = rng.randint(1, 500)
        r, u = find_digit_prime(PrimeSearchSpec(base, residue, floor, digit, 8))
        want = next(x for x in range(floor + 1, 10**9) if is_prime(x) and x % base == residue
                    and any(digit * base**v <= x < (digit + 1) * base**v for v in range(12)))
        assert r == want


def test_search_exhausted():
    with pytest.raises(SearchExhausted):
        find_digit_prime(PrimeSearchSpec(9, 8, min_value=10**6, max_digits=2))


def test_bad_residue():
    with pytest.raises(PreconditionViolated):
        PrimeSearchSpec(9, 3)


# --- p^k >= 5 counterexamples


def test_counterexample_p5():
    cx = counterexample_qp(5, 1, 1, 1)
    assert (cx.r, cx.n) == (109, 26) and cx.exhaustive and cx.holds()
    q = QuadSeq.from_coeffs(5, 1)
    assert discriminator_oracle(q.terms(26)) <= 109 < 125


def test_counterexample_p3_k2():
    cx = counterexample_qp(3, 2, 1, 1)
    assert (cx.r, cx.n) == (683, 244) and cx.holds()


def test_counterexample_p7():
    cx = counterexample_qp(7, 1, 2, 1)
    assert cx.r % 7 == 5 and cx.holds()
    assert (cx.r, cx.n) == (47, 8)


def test_counterexample_sampled_branch():
    cx = counterexample_qp(13, 2, -6, 1)
    assert not cx.exhaustive and cx.r < 13 ** 6
    assert cx.n > 200_000


def test_counterexample_half():
    cx = counterexample_qp(3, 2, 1, 1, half=True)
    assert cx.seq == QuadSeq(9, 1) and cx.holds()
