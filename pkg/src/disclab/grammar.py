"""Text form of quadratic sequences.

Accepted: ``A n^2 + B n + C`` where each coefficient is an integer or a
half-integer written ``(P/2)``; whitespace and ``*`` are ignored, signs
attach to the following term, like terms are summed.  Examples::

    3n^2+7n        (1/2)n^2+(1/2)n        -n^2 + 3*n - 4        (-3/2)n^2+(5/2)n
"""

import re

from .core import QuadSeq
from .errors import ParseError

_TERM = re.compile(
    r"""(?P<sign>[+-])?
        (?P<coef>\((?P<num>[+-]?\d+)/(?P<den>\d+)\)|\d+)?
        (?P<var>n(?:\^(?P<pow>\d+))?)?""",
    re.VERBOSE,
)


def parse_sequence(text: str) -> QuadSeq:
    s = re.sub(r"[\s*]", "", text)
    if not s:
        raise ParseError("empty sequence")
    doubled = {0: 0, 1: 0, 2: 0}
    pos = 0
    while pos < len(s):
        mt = _TERM.match(s, pos)
        if mt is None or mt.end() == pos or (mt["coef"] is None and mt["var"] is None):
            raise ParseError(f"cannot parse {text!r} at offset {pos}")
        if pos > 0 and mt["sign"] is None:
            raise ParseError(f"missing sign before term at offset {pos} in {text!r}")
        if mt["num"] is not None:
            if mt["den"] not in ("1", "2"):
                raise ParseError(f"only halves are allowed, got /{mt['den']}")
            value = int(mt["num"]) * (2 // int(mt["den"]))
        elif mt["coef"] is not None:
            value = 2 * int(mt["coef"])
        else:
            value = 2
        if mt["sign"] == "-":
            value = -value
        power = 0 if mt["var"] is None else int(mt["pow"] or 1)
        if power not in doubled:
            raise ParseError(f"power n^{power} is not quadratic")
        doubled[power] += value
        pos = mt.end()
    if doubled[0] % 2:
        raise ParseError("constant term must be an integer")
    try:
        return QuadSeq(doubled[2], doubled[1], doubled[0] // 2, label=text.strip())
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
