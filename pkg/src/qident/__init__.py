"""Arbitrary-precision q-series and the identities built from them.

The layers, bottom up: :mod:`numeric` (precision contexts, tail-bounded
products and sums), :mod:`kernel` (q-integers, shifted factorials, q-gamma,
sin_q, pi_q), :mod:`hyper` (basic hypergeometric series and the summation
templates), :mod:`forms` and :mod:`catalog` (the identity records),
:mod:`verify` and :mod:`report` (grid checks, limit studies, reports).
"""

from .catalog import ClassicalTarget, Form, IdentityRecord, builtin_catalog, lookup, parse_catalog
from .errors import DomainError, InvalidParams, NonConvergence, ParseError, PoleError, QIdentError
from .kernel import (
    pi_q,
    poch_finite,
    poch_general,
    poch_infinite,
    q_factorial,
    q_gamma,
    q_int,
    reflection_residual,
    sin_q,
)
from .numeric import DEFAULT_CONTEXT, BigReal, PrecisionContext, SumResult
from .outcome import Status, VerificationOutcome
from .verify import limit_study, verify, verify_grid

__version__ = "0.1.0"
