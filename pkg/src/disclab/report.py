"""Single-line witness records and lossless JSON output.

Witness lines are whitespace-separated ``key=value`` tokens after a tag::

    PAIR seq=3n^2+7n m=6 i=0 j=4 bound=3
    CX kind=CollisionAtPrimePower seq=(3/2)n^2+(5/2)n p=2 n=8 m=8 i=2 j=7
    CX kind=SmallerDiscriminatorExists seq=5n^2+n p=5 n=26 r=109

Every line carries enough to be re-checked from scratch by ``verify_line``.
"""

import json

from .core import Counterexample, CounterexampleKind, PairWitness
from .errors import ParseError
from .grammar import parse_sequence

SAFE_INT = 1 << 53


def witness_line(w: PairWitness) -> str:
    return f"PAIR seq={w.seq} m={w.m} i={w.i} j={w.j} bound={w.bound}"


def counterexample_line(cx: Counterexample) -> str:
    head = f"CX kind={cx.kind.value} seq={cx.seq} p={cx.p} n={cx.n}"
    if cx.kind is CounterexampleKind.COLLISION_AT_PRIME_POWER:
        w = cx.witness
        return f"{head} m={w.m} i={w.i} j={w.j}"
    return f"{head} r={cx.r}"


def parse_line(line: str):
    """Rebuild the PairWitness or Counterexample a line describes."""
    tokens = line.split()
    if not tokens or tokens[0] not in ("PAIR", "CX"):
        raise ParseError(f"unrecognised witness line: {line!r}")
    fields = {}
    for tok in tokens[1:]:
        key, sep, value = tok.partition("=")
        if not sep:
            raise ParseError(f"bad token {tok!r}")
        fields[key] = value
    try:
        q = parse_sequence(fields["seq"])
        if tokens[0] == "PAIR":
            return PairWitness(int(fields["m"]), int(fields["i"]), int(fields["j"]),
                               int(fields["bound"]), q)
        kind = CounterexampleKind(fields["kind"])
        p, n = int(fields["p"]), int(fields["n"])
        if kind is CounterexampleKind.COLLISION_AT_PRIME_POWER:
            w = PairWitness(int(fields["m"]), int(fields["i"]), int(fields["j"]), n - 1, q)
            return Counterexample(q, p, n, kind, witness=w)
        return Counterexample(q, p, n, kind, r=int(fields["r"]))
    except KeyError as exc:
        raise ParseError(f"missing field {exc} in {line!r}") from None
    except ValueError as exc:
        raise ParseError(f"{exc} in {line!r}") from None


def verify_line(line: str) -> bool:
    return parse_line(line).holds()


def render_line(obj) -> str:
    if isinstance(obj, PairWitness):
        return witness_line(obj)
    return counterexample_line(obj)


def _lossless(obj):
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) >= SAFE_INT else obj
    if isinstance(obj, dict):
        return {str(k): _lossless(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_lossless(v) for v in obj]
    return obj


def dumps(obj) -> str:
    """Deterministic JSON; integers beyond 2^53 become decimal strings."""
    return json.dumps(_lossless(obj), sort_keys=True, indent=2) + "\n"
