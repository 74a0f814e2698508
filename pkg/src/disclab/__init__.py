"""disclab: discriminators of quadratic integer sequences."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    Counterexample,
    CounterexampleKind,
    DiscriminatorTable,
    Method,
    PairWitness,
    QuadSeq,
    discriminates,
    discriminator_oracle,
    discriminator_table,
    evaluate,
    failure_witness,
    first_divergence,
    pair_difference,
)
from .errors import (  # noqa: E402
    DisclabError,
    DuplicateTerm,
    InternalContradiction,
    NoPrimeWitness,
    NotApplicable,
    OutOfRange,
    ParseError,
    PreconditionViolated,
    SearchExhausted,
    WidthOverflow,
)
from .grammar import parse_sequence  # noqa: E402
