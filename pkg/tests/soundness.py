"""Randomized driver shared by the witness tests and the acceptance run.

Every construction is called with random valid arguments and its output is
re-checked here from raw term values, without going through ``.holds()``.
"""

import random
from collections import Counter

from disclab.core import CounterexampleKind, PairWitness, QuadSeq, failure_witness
from disclab.errors import NoPrimeWitness, NotApplicable
from disclab.primes import counterexample_qp
from disclab.witness import (
    Verdict,
    lemma2_witness,
    p2_half_counterexample,
    p2_lower_witness,
    qr_not_disc_check,
    qt_lower_witness,
    sufficient_p3,
    tr_lower_witness,
)

_QT_PASSING = None


def qt_passing():
    global _QT_PASSING
    if _QT_PASSING is None:
        _QT_PASSING = [(b, c) for b in range(-2, 41) for c in range(-40, 41)
                       if b and c and sufficient_p3(b, c).verdict is Verdict.CHARACTERIZED]
    return _QT_PASSING


def power_ceiling(p, n):
    t = 1
    while t < n:
        t *= p
    return t


def pair_ok(w: PairWitness, q: QuadSeq) -> bool:
    if not (w.m >= 1 and 0 <= w.i < w.j <= w.bound):
        return False
    vals = q.terms(w.j + 1)
    return (vals[w.j] - vals[w.i]) % w.m == 0


def counterexample_ok(cx) -> bool:
    target = power_ceiling(cx.p, cx.n)
    if cx.kind is CounterexampleKind.COLLISION_AT_PRIME_POWER:
        w = cx.witness
        return w.m == target and w.j < cx.n and pair_ok(w, cx.seq)
    vals = cx.seq.terms(cx.n)
    return 1 <= cx.r < target and len({v % cx.r for v in vals}) == cx.n


def _odd(rng, lo, hi):
    return rng.randrange(lo | 1, hi + 1, 2)


def _nonzero(rng, lo, hi):
    while True:
        v = rng.randint(lo, hi)
        if v:
            return v


def _p2lower(rng):
    t, b, k = rng.randint(1, 5), _odd(rng, -31, 31), rng.randint(0, 8)
    m = rng.randrange(1, 1 << (k + 1))
    return pair_ok(p2_lower_witness(t, b, k, m), QuadSeq.from_coeffs(1 << t, b))


def _trlower(rng):
    k = rng.randint(0, 10)
    m = rng.randrange(1, 1 << (k + 1))
    return pair_ok(tr_lower_witness(k, m), QuadSeq(1, 1))


def _p2half(rng):
    while True:
        a, b = _odd(rng, -63, 63), _odd(rng, -63, 63)
        if abs(a) != abs(b):
            return counterexample_ok(p2_half_counterexample(a, b))


def _general2(rng):
    while True:
        p = rng.choice([2, 3, 5, 7, 11])
        q = QuadSeq.from_coeffs(_nonzero(rng, -60, 60), rng.randint(-60, 60))
        try:
            cx = lemma2_witness(p, q, rng.randint(2, 4))
        except (NotApplicable, NoPrimeWitness):
            continue
        return counterexample_ok(cx)


def _qrnotdisc(rng):
    while True:
        p = rng.choice([3, 5, 7])
        a, b = _odd(rng, -45, 45), _odd(rng, -45, 45)
        try:
            _, cx = qr_not_disc_check(p, a, b, materialize=True)
        except (NotApplicable, NoPrimeWitness):
            continue
        if cx is not None and cx.n <= 20000:
            return counterexample_ok(cx)


def _notqp(rng):
    while True:
        p = rng.choice([3, 5, 7])
        k = 2 if p == 3 else rng.choice([1, 1, 2])
        b = _nonzero(rng, -30, 30)
        if b % p == 0 or p**k > 49:
            continue
        return counterexample_ok(counterexample_qp(p, k, b, _nonzero(rng, -9, 9)))


def _qtlower(rng):
    b, c = rng.choice(qt_passing())
    k = rng.randint(0, 6)
    m = rng.randrange(1, 3 ** (k + 1))
    return pair_ok(qt_lower_witness(b, c, k, m), QuadSeq.from_coeffs(3 * c, b * c))


def _failure(rng):
    while True:
        q = QuadSeq.from_coeffs(_nonzero(rng, -20, 20), rng.randint(-20, 20))
        n, m = rng.randint(2, 60), rng.randint(1, 80)
        w = failure_witness(q, n, m)
        if w is not None:
            return pair_ok(w, q) and w.j < n


CONSTRUCTIONS = {
    "p2lower": _p2lower,
    "trlower": _trlower,
    "p2half": _p2half,
    "general2": _general2,
    "qrnotdisc": _qrnotdisc,
    "notqp": _notqp,
    "qtlower": _qtlower,
    "failure": _failure,
}


def run_soundness(total=10_000, seed=2024):
    """Return (per-construction call counts, list of failing (name, index))."""
    rng = random.Random(seed)
    names = sorted(CONSTRUCTIONS)
    counts, failures = Counter(), []
    for idx in range(total):
        name = names[idx % len(names)]
        counts[name] += 1
        if not CONSTRUCTIONS[name](rng):
            failures.append((name, idx))
    return counts, failures
