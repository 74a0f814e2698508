"""Primality, windowed sieving, digit-constrained prime search and the
counterexample generator for sequences c(p^k n^2 + b n) with p^k >= 5."""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import gcd, isqrt
from typing import NamedTuple

import numpy as np

from .arith import valuation
from .core import (
    Counterexample,
    CounterexampleKind,
    QuadSeq,
    _residues_distinct,
    pair_difference,
)
from .errors import PreconditionViolated, SearchExhausted

_U64 = 1 << 64
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

# (bound, bases): strong-probable-prime tests with these bases have no
# composite pseudoprimes below bound.  The last row covers all of u64.
_MR_TIERS = (
    (2_047, (2,)),
    (1_373_653, (2, 3)),
    (25_326_001, (2, 3, 5)),
    (3_215_031_751, (2, 3, 5, 7)),
    (2_152_302_898_747, (2, 3, 5, 7, 11)),
    (3_474_749_660_383, (2, 3, 5, 7, 11, 13)),
    (341_550_071_728_321, (2, 3, 5, 7, 11, 13, 17)),
    (3_825_123_056_546_413_051, (2, 3, 5, 7, 11, 13, 17, 19, 23)),
    (_U64, _SMALL_PRIMES),
)


def is_prime(n: int) -> bool:
    """Deterministic primality for 0 <= n < 2^64."""
    if not 0 <= n < _U64:
        raise PreconditionViolated(f"is_prime covers 0 <= n < 2^64, got {n}")
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n < 41 * 41:
        return True
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = next(bases for bound, bases in _MR_TIERS if n < bound)
    for a in bases:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def sieve(limit: int) -> np.ndarray:
    """Boolean array flags[0..limit], True at primes."""
    flags = np.ones(limit + 1, dtype=bool)
    flags[: min(2, limit + 1)] = False
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return flags


def primes_in_window(lo: int, hi: int, segment: int = 1 << 20) -> list:
    """All primes p with lo < p < hi, ascending (segmented sieve)."""
    if lo >= hi:
        raise PreconditionViolated(f"empty window ({lo}, {hi})")
    start = max(lo + 1, 2)
    if start >= hi:
        return []
    base = np.flatnonzero(sieve(isqrt(hi - 1) + 1))
    out = []
    for seg_lo in range(start, hi, segment):
        seg_hi = min(seg_lo + segment, hi)
        flags = np.ones(seg_hi - seg_lo, dtype=bool)
        for p in base.tolist():
            if p * p >= seg_hi:
                break
            first = max(p * p, -(-seg_lo // p) * p)
            flags[first - seg_lo :: p] = False
        out.extend((np.flatnonzero(flags) + seg_lo).tolist())
    return out


@dataclass(frozen=True)
class PrimeSearchSpec:
    """Primes r > min_value whose leading base-``base`` digit is fixed and
    whose residue mod ``base`` is prescribed."""

    base: int
    residue: int
    min_value: int = 1
    leading_digit: int = -1
    max_digits: int = 8

    def __post_init__(self):
        if self.leading_digit == -1:
            object.__setattr__(self, "leading_digit", self.base - 1)
        if self.base < 2:
            raise PreconditionViolated("base must be >= 2")
        if not 0 <= self.residue < self.base:
            raise PreconditionViolated(f"residue must lie in [0, {self.base})")
        if not 1 <= self.leading_digit < self.base:
            raise PreconditionViolated("leading digit must be a nonzero base digit")
        if gcd(self.residue, self.base) != 1:
            raise PreconditionViolated(
                f"residue {self.residue} shares a factor with base {self.base}; no primes qualify"
            )
        if self.max_digits < 0:
            raise PreconditionViolated("max_digits must be >= 0")


class DigitPrime(NamedTuple):
    r: int
    u: int


def find_digit_prime(spec: PrimeSearchSpec) -> DigitPrime:
    """Least prime r > min_value in some window
    [d * base^u, (d + 1) * base^u) with u <= max_digits and r = residue mod base."""
    base, d = spec.base, spec.leading_digit
    for u in range(spec.max_digits + 1):
        w_lo, w_hi = d * base**u, (d + 1) * base**u
        if w_hi > _U64:
            raise PreconditionViolated("search window leaves the 64-bit range")
        lo = max(w_lo, spec.min_value + 1)
        r = lo + (spec.residue - lo) % base
        while r < w_hi:
            if is_prime(r):
                found = DigitPrime(r, u)
                _check_digit_prime(spec, found)
                return found
            r += base
    raise SearchExhausted(spec.max_digits)


def _check_digit_prime(spec, found):
    r, u = found
    d, base = spec.leading_digit, spec.base
    assert is_prime(r)
    assert d * base**u <= r < (d + 1) * base**u
    assert r % base == spec.residue and r > spec.min_value


@dataclass(frozen=True)
class ZCounterInput:
    p: int
    k: int
    b: int
    r: int

    def __post_init__(self):
        pk = self.pk
        if not (self.p >= 3 and is_prime(self.p)):
            raise PreconditionViolated("p must be a prime >= 3")
        if self.k < 1 or pk < 5:
            raise PreconditionViolated("need k >= 1 and p^k >= 5")
        if gcd(self.p, self.b) != 1:
            raise PreconditionViolated("need gcd(p, b) = 1")
        if not is_prime(self.r) or self.r <= abs(self.b):
            raise PreconditionViolated("r must be a prime exceeding |b|")

    @property
    def pk(self):
        return self.p**self.k


def zcounter(inp: ZCounterInput) -> int:
    """z = ((p^k - 1) r - b) / p^k, the least z >= 0 with p^k z + b = 0 (mod r)."""
    pk = inp.pk
    num = (pk - 1) * inp.r - inp.b
    if num % pk:
        raise PreconditionViolated(f"r = {inp.r} is not congruent to -b mod {pk}")
    return num // pk


# Terms checked residue-by-residue before switching to the inequality chain.
EXACT_VERIFY_TERMS = 200_000
SAMPLED_PAIRS = 20_000


def counterexample_qp(p, k, b, c, half=False, max_digits=8, seed=0) -> Counterexample:
    """Smaller-discriminator counterexample for c(p^k n^2 + b n), halved when
    ``half`` is set (the odd-coefficient case with p odd).

    r is the least prime above max(|b|, |c|) whose leading base-p^k digit is
    p^k - 1 and which is congruent to -b mod p^k; then r discriminates the
    first p^l + 1 terms with l = k(u + 1) - 1 while r < p^(l + 1).
    """
    pk = p**k
    if not (p >= 3 and is_prime(p)):
        raise PreconditionViolated("p must be a prime >= 3")
    if k < 1 or pk < 5:
        raise PreconditionViolated("need k >= 1 and p^k >= 5")
    if b % p == 0 or c == 0:
        raise PreconditionViolated("need gcd(p, b) = 1 and c != 0")
    a2, b2 = c * pk, c * b
    if not half:
        a2, b2 = 2 * a2, 2 * b2
    q = QuadSeq(a2, b2)
    spec = PrimeSearchSpec(base=pk, residue=(-b) % pk, min_value=max(abs(b), abs(c)),
                           max_digits=max_digits)
    r, u = find_digit_prime(spec)
    ell = k * (u + 1) - 1
    n = p**ell + 1
    target = p ** (ell + 1)
    # chain: (p^k - 1) p^(l - k + 1) <= r < p^(l + 1)
    assert (pk - 1) * p ** (ell - k + 1) <= r < target
    if n <= EXACT_VERIFY_TERMS:
        if not _residues_distinct(q.terms(n), n, r):
            raise AssertionError(f"r = {r} fails to discriminate {n} terms of {q}")
        exhaustive = True
    else:
        rng = random.Random(seed)
        for _ in range(SAMPLED_PAIRS):
            i, j = sorted(rng.sample(range(n), 2))
            if pair_difference(q, i, j) % r == 0:
                raise AssertionError(f"r = {r} divides q({j}) - q({i})")
        exhaustive = False
    return Counterexample(
        seq=q, p=p, n=n, kind=CounterexampleKind.SMALLER_DISCRIMINATOR_EXISTS,
        r=r, exhaustive=exhaustive, note=f"u={u} l={ell}",
    )


def split_qp(alpha, beta, p):
    """Write alpha n^2 + beta n as c(p^k n^2 + b n); return (k, b, c) or None."""
    k, c = valuation(alpha, p)
    if k == 0 or beta % c:
        return None
    return k, beta // c, c
