"""Per-(identity, q) verification outcomes."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from mpmath import mp, mpf

from .numeric import PrecisionContext, SumResult


class Status(str, enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    SKIPPED_POLE = "SKIPPED_POLE"
    NONCONVERGED = "NONCONVERGED"


@dataclass(frozen=True)
class VerificationOutcome:
    identity_id: str
    q: mpf
    lhs: Optional[mpf]
    rhs: Optional[mpf]
    abs_err: Optional[mpf]
    rel_err: Optional[mpf]
    terms_used: int
    status: Status
    tail_bound: Optional[mpf] = None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status is Status.PASS


def evaluation_context(ctx: PrecisionContext) -> PrecisionContext:
    """Context used to evaluate the two sides of an identity.

    Sides are products of up to a dozen truncated factors, so they are
    computed to a tighter tolerance than the one they are judged against.
    """
    return ctx.tightened(64)


def compare(identity_id, q, lhs: SumResult, rhs, ctx: PrecisionContext) -> VerificationOutcome:
    with mp.workprec(ctx.working_prec):
        floor = mpf(2) ** (-ctx.precision_bits)
        abs_err = abs(lhs.value - rhs)
        rel_err = abs_err / max(abs(rhs), floor)
        ok = lhs.converged and rel_err <= ctx.rel_tol
        return VerificationOutcome(
            identity_id=identity_id,
            q=q,
            lhs=lhs.value,
            rhs=rhs,
            abs_err=abs_err,
            rel_err=rel_err,
            terms_used=lhs.terms_used,
            status=Status.PASS if ok else Status.FAIL,
            tail_bound=lhs.tail_bound,
        )


def not_evaluated(identity_id, q, status: Status, detail: str, terms_used: int = 0):
    return VerificationOutcome(
        identity_id=identity_id,
        q=q,
        lhs=None,
        rhs=None,
        abs_err=None,
        rel_err=None,
        terms_used=terms_used,
        status=status,
        detail=detail,
    )
