"""Exception hierarchy shared by every disclab module."""


class DisclabError(Exception):
    """Base class for all library errors."""


class WidthOverflow(DisclabError, OverflowError):
    """An input or intermediate product left the supported integer width."""


class DuplicateTerm(DisclabError, ValueError):
    """Two terms of a prefix are equal, so no modulus can discriminate it."""

    def __init__(self, i, j):
        super().__init__(f"terms {i} and {j} are equal")
        self.i = i
        self.j = j


class PreconditionViolated(DisclabError, ValueError):
    pass


class OutOfRange(PreconditionViolated):
    pass


class NotApplicable(DisclabError):
    """A construction was asked for on a sequence outside its hypotheses."""


class NoPrimeWitness(NotApplicable):
    """No prime r | c with r not dividing beta exists for the c-does-not-divide-beta case."""


class InternalContradiction(DisclabError, RuntimeError):
    """A proof construction produced a witness that failed re-verification."""


class SearchExhausted(DisclabError):
    def __init__(self, max_digits):
        super().__init__(f"no qualifying prime with at most {max_digits + 1} digits")
        self.max_digits = max_digits


class ParseError(DisclabError, ValueError):
    pass
