"""Quadratic sequences, pairwise differences and the discriminator engine.

A sequence is stored in doubled form ``(a2, b2, gamma)`` and evaluates as
``(a2*n**2 + b2*n) / 2 + gamma``.  Integer coefficients have ``a2``, ``b2``
both even; the half-integer case has both odd.  Every public operation
checks its inputs against a signed 31-bit bound and its results against a
signed 128-bit word, raising :class:`WidthOverflow` instead of silently
growing.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .arith import prime_power_ceiling
from .errors import DuplicateTerm, PreconditionViolated, WidthOverflow

INPUT_BITS = 31
WORD_BITS = 128
_INPUT_LIMIT = 1 << INPUT_BITS
_WORD_LIMIT = 1 << (WORD_BITS - 1)


def _check_input(name, value):
    if not isinstance(value, int) or isinstance(value, bool):
        raise TypeError(f"{name} must be an int, got {type(value).__name__}")
    if not -_INPUT_LIMIT < value < _INPUT_LIMIT:
        raise WidthOverflow(f"|{name}| = {abs(value)} exceeds 2^{INPUT_BITS}")


def checked(value):
    """Return value unchanged if it fits a signed 128-bit word."""
    if not -_WORD_LIMIT <= value < _WORD_LIMIT:
        raise WidthOverflow(f"intermediate value {value} exceeds the {WORD_BITS}-bit word")
    return value


def _fmt_coeff(doubled, power):
    """Render one term of the canonical text form, or '' for a zero term."""
    if doubled == 0:
        return ""
    var = {2: "n^2", 1: "n", 0: ""}[power]
    sign = "-" if doubled < 0 else "+"
    mag = abs(doubled)
    if power == 0:
        return f"{sign}{mag // 2}"
    if mag % 2:
        return f"{sign}({mag}/2){var}"
    mag //= 2
    return f"{sign}{'' if mag == 1 else mag}{var}"


@dataclass(frozen=True)
class QuadSeq:
    """Integer-valued quadratic ``n -> (a2 n^2 + b2 n)/2 + gamma``."""

    a2: int
    b2: int
    gamma: int = 0
    label: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        for name in ("a2", "b2", "gamma"):
            _check_input(name, getattr(self, name))
        if self.a2 == 0:
            raise PreconditionViolated("a2 must be nonzero (sequence must be quadratic)")
        if (self.a2 - self.b2) % 2:
            raise PreconditionViolated(
                f"a2={self.a2} and b2={self.b2} differ in parity; sequence is not integer-valued"
            )

    @classmethod
    def from_coeffs(cls, alpha, beta, gamma=0, label=None):
        """Integer-coefficient sequence alpha n^2 + beta n + gamma."""
        return cls(2 * alpha, 2 * beta, gamma, label)

    @property
    def integral(self):
        """True when alpha and beta are integers."""
        return self.a2 % 2 == 0

    @property
    def alpha(self):
        return Fraction(self.a2, 2)

    @property
    def beta(self):
        return Fraction(self.b2, 2)

    def __call__(self, n):
        return evaluate(self, n)

    def terms(self, count):
        """The first ``count`` terms q(0), ..., q(count - 1)."""
        _check_input("count", count)
        a2, b2, g = self.a2, self.b2, self.gamma
        return [(a2 * n * n + b2 * n) // 2 + g for n in range(count)]

    def with_gamma(self, gamma):
        return QuadSeq(self.a2, self.b2, gamma, self.label)

    def __str__(self):
        text = _fmt_coeff(self.a2, 2) + _fmt_coeff(self.b2, 1) + _fmt_coeff(2 * self.gamma, 0)
        return text.lstrip("+")


def evaluate(q: QuadSeq, n: int) -> int:
    _check_input("n", n)
    return checked((q.a2 * n * n + q.b2 * n) // 2 + q.gamma)


def pair_difference(q: QuadSeq, i: int, j: int) -> int:
    """q(j) - q(i) computed as (j - i)(a2 (i + j) + b2) / 2."""
    if i == j:
        raise PreconditionViolated("pair_difference needs i != j")
    _check_input("i", i)
    _check_input("j", j)
    return checked((j - i) * checked(q.a2 * (i + j) + q.b2) // 2)


def _first_duplicate(values):
    seen = {}
    for idx, v in enumerate(values):
        if v in seen:
            return seen[v], idx
        seen[v] = idx
    return None


def _require_distinct(values):
    dup = _first_duplicate(values)
    if dup is not None:
        raise DuplicateTerm(*dup)


def discriminates(values: Sequence[int], m: int) -> bool:
    """True iff the values have pairwise distinct residues modulo m."""
    if m < 1:
        raise PreconditionViolated(f"modulus must be >= 1, got {m}")
    _require_distinct(values)
    return _residues_distinct(values, len(values), m)


def _residues_distinct(values, n, m):
    if m < n:
        return False
    seen = set()
    for t in range(n):
        r = values[t] % m
        if r in seen:
            return False
        seen.add(r)
    return True


def discriminator_oracle(values: Sequence[int]) -> int:
    """Least m >= 1 discriminating ``values``, by a plain ascending scan."""
    if not values:
        raise PreconditionViolated("discriminator of an empty set is undefined")
    _require_distinct(values)
    bound = max(values) - min(values) + 1
    m = 1
    while not _residues_distinct(values, len(values), m):
        m += 1
        if m > bound:
            raise AssertionError(f"scan passed the span bound {bound}")
    return m


class Method(str, enum.Enum):
    ORACLE = "oracle"
    INCREMENTAL = "incremental"


@dataclass(frozen=True)
class DiscriminatorTable:
    seq: object
    entries: tuple
    method: Method = Method.INCREMENTAL

    def __post_init__(self):
        ns = [n for n, _ in self.entries]
        ds = [d for _, d in self.entries]
        assert ns == list(range(1, len(ns) + 1)), "entries must cover n = 1..N"
        assert all(x <= y for x, y in zip(ds, ds[1:])), "discriminator must be non-decreasing"
        assert not ds or ds[0] == 1

    def __getitem__(self, n):
        return self.entries[n - 1][1]

    def __len__(self):
        return len(self.entries)

    @property
    def values(self):
        return [d for _, d in self.entries]

    def first_divergence(self, p):
        """Smallest n with D(n) != p^ceil(log_p n), or None."""
        for n, d in self.entries:
            if d != prime_power_ceiling(p, n):
                return n
        return None

    def matches_prime_power(self, p):
        return self.first_divergence(p) is None


def _values_of(seq, count):
    if isinstance(seq, QuadSeq):
        return seq.terms(count)
    values = list(seq)
    if len(values) < count:
        raise PreconditionViolated(f"need {count} values, got {len(values)}")
    return values[:count]


def discriminator_stream(seq, count: int) -> Iterator[tuple]:
    """Yield (n, D(n)) for n = 1..count, incrementally.

    The candidate for D(n) starts at max(D(n-1), n).  While the current
    modulus keeps working, each new term costs one residue lookup; when it
    fails, candidates are rescanned over the whole prefix with early exit.
    DuplicateTerm is raised as soon as a repeated term enters the prefix.
    """
    values = _values_of(seq, count)
    index_of = {}
    m = 1
    residues = set()
    for n in range(1, count + 1):
        v = values[n - 1]
        if v in index_of:
            raise DuplicateTerm(index_of[v], n - 1)
        index_of[v] = n - 1
        r = v % m
        if m >= n and r not in residues:
            residues.add(r)
        else:
            m = max(m + 1, n)
            while not _residues_distinct(values, n, m):
                m += 1
            residues = {values[t] % m for t in range(n)}
        yield n, m


def discriminator_table(seq, count: int, method: Method = Method.INCREMENTAL) -> DiscriminatorTable:
    """D(n) for n = 1..count of a QuadSeq or an explicit value list."""
    if count < 1:
        raise PreconditionViolated("table needs count >= 1")
    method = Method(method)
    if method is Method.ORACLE:
        values = _values_of(seq, count)
        _require_distinct(values)
        entries = tuple((n, discriminator_oracle(values[:n])) for n in range(1, count + 1))
    else:
        entries = tuple(discriminator_stream(seq, count))
    return DiscriminatorTable(seq, entries, method)


def first_divergence(seq, p: int, horizon: int) -> Optional[tuple]:
    """First (n, D(n)) with D(n) != p^ceil(log_p n) for n <= horizon, or None.

    Stops as soon as the divergence is seen, so cheap for sequences that
    fail early.
    """
    for n, d in discriminator_stream(seq, horizon):
        if d != prime_power_ceiling(p, n):
            return n, d
    return None


@dataclass(frozen=True)
class PairWitness:
    """Certificate that m divides q(j) - q(i), with 0 <= i < j <= bound."""

    m: int
    i: int
    j: int
    bound: int
    seq: Optional[QuadSeq] = None

    def describe_bound(self):
        return f"0 <= i < j <= {self.bound}"

    def holds(self, q: Optional[QuadSeq] = None) -> bool:
        q = q if q is not None else self.seq
        if q is None:
            raise PreconditionViolated("witness carries no sequence to check against")
        if not (self.m >= 1 and 0 <= self.i < self.j <= self.bound):
            return False
        return pair_difference(q, self.i, self.j) % self.m == 0


def failure_witness(q: QuadSeq, n: int, m: int) -> Optional[PairWitness]:
    """A collision (m, i, j) among the first n terms, smallest j then i."""
    if n < 2:
        raise PreconditionViolated("failure_witness needs n >= 2")
    if m < 1:
        raise PreconditionViolated("modulus must be >= 1")
    first_at = {}
    for j, v in enumerate(q.terms(n)):
        r = v % m
        if r in first_at:
            return PairWitness(m, first_at[r], j, n - 1, q)
        first_at[r] = j
    return None


class CounterexampleKind(str, enum.Enum):
    COLLISION_AT_PRIME_POWER = "CollisionAtPrimePower"
    SMALLER_DISCRIMINATOR_EXISTS = "SmallerDiscriminatorExists"


@dataclass(frozen=True)
class Counterexample:
    """Evidence that D(n) != p^ceil(log_p n) at a specific n.

    Collision evidence is a PairWitness at modulus p^ceil(log_p n).  The
    smaller-discriminator kind carries a modulus r below that power which
    discriminates the first n terms; ``exhaustive`` records whether that was
    checked over the whole prefix.
    """

    seq: QuadSeq
    p: int
    n: int
    kind: CounterexampleKind
    witness: Optional[PairWitness] = None
    r: Optional[int] = None
    exhaustive: bool = True
    note: str = ""

    def holds(self) -> bool:
        target = prime_power_ceiling(self.p, self.n)
        if self.kind is CounterexampleKind.COLLISION_AT_PRIME_POWER:
            w = self.witness
            return (
                w is not None
                and w.m == target
                and w.j < self.n
                and w.holds(self.seq)
            )
        if self.r is None or not 1 <= self.r < target:
            return False
        if not self.exhaustive:
            return True
        return _residues_distinct(self.seq.terms(self.n), self.n, self.r)


@dataclass(frozen=True)
class FactoredModulus:
    """m = 2^x * 3^y * r with gcd(r, 6) == 1."""

    m: int
    x: int
    y: int
    r: int

    @classmethod
    def of(cls, m):
        if m < 1:
            raise PreconditionViolated("modulus must be positive")
        rest, x, y = m, 0, 0
        while rest % 2 == 0:
            rest //= 2
            x += 1
        while rest % 3 == 0:
            rest //= 3
            y += 1
        return cls(m, x, y, rest)

    def __post_init__(self):
        assert self.m == (1 << self.x) * 3 ** self.y * self.r
        assert self.r % 2 and self.r % 3
