"""Coefficient classifiers and constructive witnesses for prime-power
discriminators.

Every construction reproduces an explicit (i, j) choice rather than
searching, and every returned object is re-verified through ``core`` before
it leaves this module.  A witness that fails verification raises
:class:`InternalContradiction`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from .arith import divisors, factorize, is_power_of, modinv, prime_power_ceiling, valuation
from .core import (
    Counterexample,
    CounterexampleKind,
    FactoredModulus,
    PairWitness,
    QuadSeq,
    checked,
    evaluate,
    pair_difference,
)
from .errors import (
    InternalContradiction,
    NoPrimeWitness,
    NotApplicable,
    OutOfRange,
    PreconditionViolated,
)
from .primes import counterexample_qp, is_prime, primes_in_window, split_qp


@dataclass(frozen=True)
class PrimePowerTarget:
    p: int
    k: int = 1

    def __post_init__(self):
        if self.p < 2 or not is_prime(self.p):
            raise PreconditionViolated(f"{self.p} is not prime")
        if self.k < 1:
            raise PreconditionViolated("exponent must be >= 1")
        checked(self.p**self.k)

    @property
    def value(self):
        return self.p**self.k


class Verdict(str, enum.Enum):
    CHARACTERIZED = "Characterized"
    VIOLATES = "Violates"
    UNDECIDED = "Undecided"


@dataclass(frozen=True)
class Condition:
    id: int
    holds: bool
    detail: str


@dataclass(frozen=True)
class Classification:
    """Outcome of a coefficient predicate.

    ``verdict`` is VIOLATES exactly when some listed condition fails, and
    ``violated`` names the first such condition.  When every condition
    holds the verdict is CHARACTERIZED if the conditions are known to be
    sufficient and UNDECIDED otherwise.
    """

    target: object
    verdict: Verdict
    conditions: tuple
    derived: dict = field(default_factory=dict)
    violated: Optional[int] = None
    note: str = ""

    @property
    def holds(self):
        return all(c.holds for c in self.conditions)

    def __str__(self):
        head = self.verdict.value
        if self.violated is not None:
            head += f"({self.violated})"
        return head


def _classify(target, conds, derived=None, sufficient=True, note=""):
    conds = tuple(Condition(i, bool(h), d) for i, h, d in conds)
    failed = [c.id for c in conds if not c.holds]
    if failed:
        verdict, violated = Verdict.VIOLATES, failed[0]
    else:
        verdict = Verdict.CHARACTERIZED if sufficient else Verdict.UNDECIDED
        violated = None
    return Classification(target, verdict, conds, derived or {}, violated, note)


def _verify(w: PairWitness, q: QuadSeq) -> PairWitness:
    if not w.holds(q):
        diff = pair_difference(q, w.i, w.j) if w.i != w.j else 0
        raise InternalContradiction(
            f"witness (m={w.m}, i={w.i}, j={w.j}, bound={w.bound}) fails for {q}: difference {diff}"
        )
    return w


def _verify_cx(cx: Counterexample) -> Counterexample:
    if not cx.holds():
        raise InternalContradiction(f"counterexample failed re-verification: {cx}")
    return cx


# ---------------------------------------------------------------- p = 2


def classify_p2_integer(alpha: int, beta: int) -> Classification:
    """alpha = 2^t r (t >= 1, r odd), beta odd, r | beta."""
    if alpha == 0:
        raise PreconditionViolated("alpha must be nonzero")
    t, r = valuation(alpha, 2)
    conds = [
        (1, t >= 1, f"alpha = 2^{t} * {r}" + ("" if t >= 1 else ", alpha is odd")),
        (2, beta % 2 == 1, f"beta = {beta} is {'odd' if beta % 2 else 'even'}"),
        (3, beta % r == 0, f"r = {r} {'divides' if beta % r == 0 else 'does not divide'} beta = {beta}"),
    ]
    return _classify(PrimePowerTarget(2), conds, {"t": t, "r": r})


def classify_p2_half(a_odd: int, b_odd: int) -> Classification:
    """(a'/2) n^2 + (b'/2) n with a', b' odd: characterized iff a' == b'."""
    if a_odd % 2 == 0 or b_odd % 2 == 0:
        raise PreconditionViolated("both coefficients must be odd")
    note = ""
    if a_odd == -b_odd:
        note = "degenerate: q(0) == q(1), the sequence cannot be discriminated"
    conds = [(1, a_odd == b_odd, f"a' = {a_odd}, b' = {b_odd}")]
    return _classify(PrimePowerTarget(2), conds, note=note)


def p2_half_counterexample(a_odd: int, b_odd: int, gamma: int = 0) -> Counterexample:
    """Collision at n = 2^k for odd a' != +-b', with 2^k > |a'|, |b'|."""
    if a_odd % 2 == 0 or b_odd % 2 == 0:
        raise PreconditionViolated("both coefficients must be odd")
    if abs(a_odd) == abs(b_odd):
        raise NotApplicable("needs |a'| != |b'|")
    q = QuadSeq(a_odd, b_odd, gamma)
    k = max(abs(a_odd), abs(b_odd)).bit_length()
    two_k = 1 << k
    x = (-b_odd * modinv(a_odd, 2 * two_k)) % (2 * two_k)
    if x < two_k:
        i, j = 0, x
    else:
        j = two_k - 1
        i = x - j
    w = _verify(PairWitness(two_k, i, j, two_k - 1, q), q)
    return _verify_cx(Counterexample(q, 2, two_k, CounterexampleKind.COLLISION_AT_PRIME_POWER, w))


def shift(q: QuadSeq, c: int) -> QuadSeq:
    """The sequence n -> q(n + c)."""
    return QuadSeq(q.a2, checked(q.b2 + 2 * q.a2 * c), evaluate(q, c))


def p2_lower_witness(t: int, b: int, k: int, m: int) -> PairWitness:
    """m | q(j) - q(i) for q = 2^t n^2 + b n, some 0 <= i < j <= 2^k."""
    if t < 1 or b % 2 == 0 or k < 0:
        raise PreconditionViolated("need t >= 1, b odd, k >= 0")
    if not 1 <= m < 1 << (k + 1):
        raise OutOfRange(f"m = {m} outside [1, 2^{k + 1})")
    q = QuadSeq.from_coeffs(1 << t, b)
    top = 1 << k
    if is_power_of(m, 2):
        i, j = 0, m
    elif m % 2:
        x = (-b * modinv(1 << t, m)) % m
        if x == 0:
            # m | b: i + j = m works just as well and keeps i < j
            x = m
        i, j = (0, x) if x <= top else (x - top, top)
    else:
        ell, r = valuation(m, 2)
        x = (-b * modinv(1 << (t + 1), r)) % r
        i = (x - (1 << (ell - 1))) % r
        j = i + (1 << ell)
    return _verify(PairWitness(m, i, j, top, q), q)


def tr_lower_witness(k: int, m: int) -> PairWitness:
    """m | tr(j) - tr(i) for triangular numbers, some 0 <= i < j <= 2^k."""
    if k < 0:
        raise PreconditionViolated("k must be >= 0")
    if not 1 <= m < 1 << (k + 1):
        raise OutOfRange(f"m = {m} outside [1, 2^{k + 1})")
    q = QuadSeq(1, 1, label="triangular")
    if is_power_of(m, 2):
        i, j = m - 1, m
    elif m % 2:
        i, j = m // 2 - 1, (m + 1) // 2
    else:
        ell, odd = valuation(m, 2)
        r, p2 = odd // 2, 1 << ell
        i, j = (r - p2, r + p2) if r >= p2 else (p2 - r - 1, r + p2)
    w = _verify(PairWitness(m, i, j, 1 << k, q), q)
    if m > 1 and pair_difference(q, i, j) != m:
        raise InternalContradiction(f"expected tr({j}) - tr({i}) == {m}")
    return w


def upper_bound_check(q: QuadSeq, p: int, k: int) -> bool:
    """True iff p^(k+1) divides no q(j) - q(i) with 0 <= i < j < p^(k+1)."""
    top = p ** (k + 1)
    residues = set()
    for v in q.terms(top):
        r = v % top
        if r in residues:
            return False
        residues.add(r)
    return True


def upper_bound_check_p2(q: QuadSeq, k: int) -> bool:
    return upper_bound_check(q, 2, k)


# ------------------------------------------------------- general p


def lemma2_witness(p: int, q: QuadSeq, ell: int = 2) -> Counterexample:
    """Counterexample for integer alpha, beta failing one of: p | alpha,
    p does not divide beta, (alpha = p^k c with c | beta).

    Collisions at n = p^ell (cases 1 and 2) or a prime r | c with
    r not dividing beta that discriminates the first r terms (case 3).
    """
    if not q.integral:
        raise PreconditionViolated("lemma2_witness needs integer coefficients")
    if not is_prime(p):
        raise PreconditionViolated(f"{p} is not prime")
    if ell < 2:
        raise PreconditionViolated("ell must be >= 2")
    alpha, beta = q.a2 // 2, q.b2 // 2
    return _lemma2_on(p, q, alpha, beta, ell)


def _lemma2_on(p, q, alpha, beta, ell):
    """Shared by the integer and odd-coefficient cases; (alpha, beta) is the
    pair whose conditions are tested, q is the sequence the evidence is for."""
    pl = checked(p**ell)
    collision = CounterexampleKind.COLLISION_AT_PRIME_POWER
    if alpha % p:
        j = (-beta * modinv(alpha, pl)) % pl
        if j == 0:
            # p^ell | beta makes i = j = 0; p^(ell-1) collides instead
            j = pl // p
        w = _verify(PairWitness(pl, 0, j, pl - 1, q), q)
        return _verify_cx(Counterexample(q, p, pl, collision, w, note="case 1: p does not divide alpha"))
    if beta % p == 0:
        w = _verify(PairWitness(pl, 0, pl // p, pl - 1, q), q)
        return _verify_cx(Counterexample(q, p, pl, collision, w, note="case 2: p divides alpha and beta"))
    _, c = valuation(alpha, p)
    if beta % c == 0:
        raise NotApplicable(f"p = {p} divides alpha, not beta, and c = {c} divides beta")
    primes = [r for r in sorted(factorize(c)) if beta % r]
    if not primes:
        raise NoPrimeWitness(
            f"c = {c} does not divide beta = {beta}, but every prime factor of c does"
        )
    r = primes[0]
    cx = Counterexample(q, p, r, CounterexampleKind.SMALLER_DISCRIMINATOR_EXISTS, r=r,
                        note=f"case 3: prime {r} | c = {c}, {r} does not divide beta")
    return _verify_cx(cx)


def qr_not_disc_check(p: int, a_odd: int, b_odd: int, materialize: bool = False):
    """Which obstruction applies to (a'/2) n^2 + (b'/2) n for an odd prime p.

    Condition i holds when obstruction i is absent.  Returns the
    Classification, and with ``materialize`` also a Counterexample (or None
    when undecided).
    """
    if p < 3 or not is_prime(p):
        raise PreconditionViolated("p must be an odd prime")
    if a_odd % 2 == 0 or b_odd % 2 == 0:
        raise PreconditionViolated("both coefficients must be odd")
    k, c = valuation(a_odd, p)
    conds = [
        (1, a_odd != b_odd, "a' == b'" if a_odd == b_odd else "a' != b'"),
        (2, k >= 1, f"p^{k} || a'"),
        (3, b_odd % p != 0, f"p {'divides' if b_odd % p == 0 else 'does not divide'} b'"),
        (4, k == 0 or b_odd % c == 0, f"c = {c} {'divides' if b_odd % c == 0 else 'does not divide'} b'"),
        (5, not (k >= 1 and b_odd % c == 0 and p**k >= 5), f"p^k = {p**k}"),
    ]
    cls = _classify(PrimePowerTarget(p), conds, {"k": k, "c": c}, sufficient=False,
                    note="open case: alpha' = 3c, c | beta'" if p == 3 else "")
    if not materialize:
        return cls
    q = QuadSeq(a_odd, b_odd)
    v = cls.violated
    if v is None:
        return cls, None
    if v == 1:
        cx = Counterexample(q, p, 2, CounterexampleKind.SMALLER_DISCRIMINATOR_EXISTS, r=2,
                            note="a' == b': D(2) == 2")
        return cls, _verify_cx(cx)
    if v in (2, 3, 4):
        return cls, _lemma2_on(p, q, a_odd, b_odd, 2)
    return cls, counterexample_qp(p, k, b_odd // c, c, half=True)


# ---------------------------------------------------------------- p = 3


def necessary_p3(alpha: int, beta: int) -> Classification:
    """alpha = 3c, beta = bc, 3 does not divide bc, b even implies c even."""
    if alpha == 0:
        raise PreconditionViolated("alpha must be nonzero")
    c = alpha // 3 if alpha % 3 == 0 else None
    b = beta // c if c is not None and beta % c == 0 else None
    ok1 = c is not None and c % 3 != 0
    ok2 = b is not None
    ok3 = ok2 and (b * c) % 3 != 0
    ok4 = ok2 and (b % 2 != 0 or c % 2 == 0)
    conds = [
        (1, ok1, f"alpha = {alpha}" + (f" = 3 * {c}" if ok1 else " is not 3c with 3 not dividing c")),
        (2, ok2, f"c {'divides' if ok2 else 'does not divide'} beta = {beta}" if c else "no c"),
        (3, ok3, f"bc = {beta}" + ("" if ok3 else ", divisible by 3")),
        (4, ok4, "b odd or c even" if ok4 else "b even with c odd"),
    ]
    derived = {"b": b, "c": c} if ok2 else {}
    return _classify(PrimePowerTarget(3), conds, derived, sufficient=False)


def _window_moduli(b):
    """Yield (k, m) for powers of two and primes m in (2*3^k, 3^(k+1)), m <= |b|."""
    k = 1
    while 2 * 3**k < abs(b):
        lo, hi = 2 * 3**k, 3 ** (k + 1)
        for x in range(lo.bit_length(), hi.bit_length() + 1):
            if lo < 1 << x < hi and 1 << x <= abs(b):
                yield k, 1 << x
        for prime in primes_in_window(lo, min(hi, abs(b) + 1)):
            yield k, prime
        k += 1


@lru_cache(maxsize=4096)
def sufficient_p3(b: int, c: int) -> Classification:
    """Five sufficient conditions for 3c n^2 + bc n to have D(n) = 3^ceil(log_3 n)."""
    if b == 0 or c == 0:
        raise PreconditionViolated("b and c must be nonzero")
    pow2_triggers, prime_triggers = [], []
    for k, m in _window_moduli(b):
        if (b % m) % 3 != 0:
            continue
        if m & (m - 1) == 0:
            if b % 2:
                pow2_triggers.append((k, m))
        else:
            prime_triggers.append((k, m))
    bad4 = [m for _, m in pow2_triggers if c % 2]
    bad5 = [m for _, m in prime_triggers if c % m]
    conds = [
        (1, b >= -2, f"b = {b}"),
        (2, (b * c) % 3 != 0, f"bc = {b * c}"),
        (3, b % 2 == 1 or c % 2 == 0, f"b {'odd' if b % 2 else 'even'}, c {'odd' if c % 2 else 'even'}"),
        (4, not bad4, f"power-of-two triggers {[m for _, m in pow2_triggers]}"
            + (f"; c odd fails at {bad4}" if bad4 else "")),
        (5, not bad5, f"prime triggers {[m for _, m in prime_triggers]}"
            + (f"; not dividing c: {bad5}" if bad5 else "")),
    ]
    return _classify(PrimePowerTarget(3), conds, {"b": b, "c": c})


def eyejayell(ell: int, k: int) -> tuple:
    """(i, j) with i + j == ell and 0 <= i < j <= 3^k, for 0 < ell < 2*3^k."""
    top = 3**k
    if not 0 < ell < 2 * top:
        raise OutOfRange(f"ell = {ell} outside (0, {2 * top})")
    return (0, ell) if ell <= top else (ell - top, top)


def youvee_check(u: int, v: int, k: int) -> bool:
    """Whether u + v - 1 <= 3^k, for u >= 3, odd v >= 5, 3^k <= uv < 3^(k+1)."""
    if u < 3 or v < 5 or v % 2 == 0 or k < 2:
        raise PreconditionViolated("need u >= 3, odd v >= 5, k >= 2")
    if not 3**k <= u * v < 3 ** (k + 1):
        raise PreconditionViolated(f"uv = {u * v} outside [3^{k}, 3^{k + 1})")
    return u + v - 1 <= 3**k


def split_uv(m):
    """m = u v with u >= 3, v >= 5, gcd(v, 6) = 1; v as large as possible."""
    for v in reversed(divisors(m)):
        if v >= 5 and v % 2 and v % 3 and m // v >= 3:
            return m // v, v
    raise PreconditionViolated(f"{m} has no split u >= 3, v >= 5 coprime to 6")


def _ell_pair(ell, fallback, k):
    return eyejayell(ell if ell else fallback, k)


def _qt_case(b, c, k, m):
    """Return (i, j, case-label) for 3c n^2 + bc n; see qt_lower_witness."""
    top = 3**k
    if m <= top:
        return 0, m, "1"
    f = FactoredModulus.of(m)
    if f.y == 0 and f.r == 1:
        x = f.x
        if m < 2 * top:
            ell = (-b * modinv(3, m)) % m
            return (*_ell_pair(ell, m, k), "2a")
        if c % 2 == 0:
            if m == 2:
                return 0, 1, "2b"
            half = m // 2
            ell = (-b * modinv(3, half)) % half
            return (*_ell_pair(ell, half, k), "2b")
        if m == 2:
            return 0, 1, "2c"
        z = b if b < 0 else b % m
        if z % 3 == 0:
            raise PreconditionViolated(f"case 2c needs z = {z} not divisible by 3 (condition 4)")
        ell = (m - z) // 3 if (m - z) % 3 == 0 else (2 * m - z) // 3
        return (*eyejayell(ell, k), "2c")
    if f.r > 1 and is_prime(f.r) and f.r >= 5 and f.y == 0 and f.x <= 1:
        prime = f.r
        if f.x == 0 and m < 2 * top:
            ell = (-b * modinv(3, m)) % m
            return (*_ell_pair(ell, m, k), "3a")
        if f.x == 0:
            if (b % m) % 3 == 0 and c % m == 0:
                return 0, 1, "3b"
            z = b if b < 0 else b % m
            if z % 3 == 0:
                raise PreconditionViolated(f"case 3b needs z = {z} not divisible by 3 (condition 5)")
            ell = (m - z) // 3 if (m - z) % 3 == 0 else (2 * m - z) // 3
            return (*eyejayell(ell, k), "3b")
        ell = (-b * modinv(3, prime)) % prime
        return (*_ell_pair(ell, prime, k), "3c")
    if f.r == 1:
        x, y = f.x, f.y
        if x <= 1:
            return 0, 3**y, "4a"
        if x == 2 and b % 2 == 0:
            return 0, 2 * 3**y, "4b"
        if b % 2 == 0:
            return 0, m // 4, "4c"
        p2 = 1 << x
        ell = (-b * modinv(3, p2) - 3**y) % p2
        i = p2 // 2 if ell == 0 else ell // 2
        return i, i + 3**y, "4d"
    u, v = split_uv(m)
    ell = (-b * modinv(3, v) - u) % v
    i = ell // 2 if ell % 2 == 0 else (ell + v) // 2
    return i, i + u, "5"


def qt_lower_witness(b: int, c: int, k: int, m: int, check_conditions: bool = True) -> PairWitness:
    """m | q(j) - q(i) for q = 3c n^2 + bc n with 0 <= i < j <= 3^k.

    Dispatches on the shape of m: m <= 3^k; powers of two; primes >= 5 and
    their doubles; moduli 2^x 3^y; everything else split as m = uv.
    """
    if k < 0:
        raise PreconditionViolated("k must be >= 0")
    if not 1 <= m < 3 ** (k + 1):
        raise OutOfRange(f"m = {m} outside [1, 3^{k + 1})")
    if check_conditions:
        cls = sufficient_p3(b, c)
        if cls.verdict is not Verdict.CHARACTERIZED:
            raise PreconditionViolated(f"(b={b}, c={c}) fails condition {cls.violated}")
    q = QuadSeq.from_coeffs(3 * c, b * c)
    i, j, _ = _qt_case(b, c, k, m)
    return _verify(PairWitness(m, i, j, 3**k, q), q)


def qt_case_label(b, c, k, m):
    """Which branch of the construction handles m (for diagnostics and tests)."""
    return _qt_case(b, c, k, m)[2]


def is_lemma2_exempt(p, alpha, beta):
    """True when none of the three obstruction conditions applies."""
    return alpha % p == 0 and beta % p != 0 and split_qp(alpha, beta, p) is not None


__all__ = [
    "PrimePowerTarget", "Verdict", "Condition", "Classification",
    "classify_p2_integer", "classify_p2_half", "p2_half_counterexample", "shift",
    "p2_lower_witness", "tr_lower_witness", "upper_bound_check", "upper_bound_check_p2",
    "lemma2_witness", "qr_not_disc_check", "necessary_p3", "sufficient_p3",
    "eyejayell", "youvee_check", "split_uv", "qt_lower_witness", "qt_case_label",
]
