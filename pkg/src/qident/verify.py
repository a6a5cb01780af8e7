"""Grid verification of catalog records and q -> 1 limit studies."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
import dataclasses
from dataclasses import dataclass
from typing import Optional, Sequence

import mpmath
from mpmath import mp, mpf

from .catalog import Form, IdentityRecord, lookup
from .errors import DomainError, NonConvergence, PoleError
from .forms import Q_FACTORS, RHS_VARIANTS, literal_lhs, literal_rhs
from .hyper import gauss_check, phi65_check, t1_lhs, t1_rhs, t2_lhs, t2_rhs, t2s_lhs, t2s_rhs
from .kernel import check_base, pi_q, sin_q
from .numeric import DEFAULT_CONTEXT, PrecisionContext, SumResult, to_big
from .outcome import Status, VerificationOutcome, compare, evaluation_context, not_evaluated

__all__ = [
    "DEFAULT_GRID",
    "verify",
    "verify_grid",
    "literal_equivalence",
    "template_lhs",
    "LimitPoint",
    "LimitStudy",
    "limit_study",
    "limit_context",
]

DEFAULT_GRID = ("0.1", "0.3", "0.5", "0.7", "0.9")

_SIDES = {
    Form.TEMPLATE_T1: (t1_lhs, t1_rhs),
    Form.TEMPLATE_T2: (t2_lhs, t2_rhs),
    Form.TEMPLATE_T2S: (t2s_lhs, t2s_rhs),
}


def template_lhs(record: IdentityRecord, q, ctx: PrecisionContext) -> SumResult:
    return _SIDES[record.form][0](record.template_params(), q, ctx)


def _template_rhs(record: IdentityRecord, q, ctx):
    p = record.template_params()
    if record.rhs_variant:
        with mp.workprec(ctx.working_prec):
            return RHS_VARIANTS[record.rhs_variant](p, check_base(q), ctx)
    return _SIDES[record.form][1](p, q, ctx)


def _evaluate(record: IdentityRecord, q: mpf, ctx: PrecisionContext) -> VerificationOutcome:
    ectx = evaluation_context(ctx)
    form = record.form
    if form.is_template:
        lhs = template_lhs(record, q, ectx)
        rhs = _template_rhs(record, q, ectx)
        return compare(record.id, q, lhs, rhs, ctx)
    if form is Form.LITERAL:
        lhs = literal_lhs(record.literal_key, q, ectx)
        rhs = literal_rhs(record.literal_key, q, ectx)
        return compare(record.id, q, lhs, rhs, ctx)
    p = record.param_dict
    if form is Form.GAUSS:
        out = gauss_check(p["a"], p["b"], p["c"], q, ctx)
    elif form is Form.PHI65:
        out = phi65_check(p["a"], p["b"], p["c"], p["d"], q, ctx)
    else:
        raise ValueError(f"{record.id}: records of form {form.value} are not verifiable identities")
    return dataclasses.replace(out, identity_id=record.id)


def _guarded(identity_id, q, ctx, fn) -> VerificationOutcome:
    try:
        with mp.workprec(ctx.working_prec):
            return fn()
    except PoleError as exc:
        return not_evaluated(identity_id, q, Status.SKIPPED_POLE, str(exc))
    except NonConvergence as exc:
        return not_evaluated(identity_id, q, Status.NONCONVERGED, str(exc), exc.terms_used)
    except DomainError as exc:
        # a vanishing or negative product factor is a singular configuration too
        return not_evaluated(identity_id, q, Status.SKIPPED_POLE, str(exc))


def verify(record: IdentityRecord, q, ctx: PrecisionContext = DEFAULT_CONTEXT) -> VerificationOutcome:
    """Evaluate both sides of ``record`` at ``q``; failures are reported in ``status``.

    Raises DomainError only when ``q`` itself lies outside (0, 1).
    """
    with mp.workprec(ctx.working_prec):
        qv = check_base(q)
    return _guarded(record.id, qv, ctx, lambda: _evaluate(record, qv, ctx))


def literal_equivalence(record: IdentityRecord, q, ctx: PrecisionContext = DEFAULT_CONTEXT,
                        records=None) -> VerificationOutcome:
    """Compare a LITERAL record's left side with factor(q) times its sibling template's left side."""
    if record.form is not Form.LITERAL or not record.sibling:
        raise ValueError(f"{record.id} is not a literal record with a template sibling")
    sibling = lookup(record.sibling, records)
    if sibling is None:
        raise ValueError(f"{record.id}: sibling {record.sibling} not found")
    with mp.workprec(ctx.working_prec):
        qv = check_base(q)
    label = f"{record.id}~{sibling.id}"

    def run():
        ectx = evaluation_context(ctx)
        lit = literal_lhs(record.literal_key, qv, ectx)
        tmpl = template_lhs(sibling, qv, ectx)
        factor = Q_FACTORS[record.sibling_factor](qv) if record.sibling_factor else mpf(1)
        return compare(label, qv, lit, factor * tmpl.value, ctx)

    return _guarded(label, qv, ctx, run)


def _cell(args):
    record, q, ctx = args
    return verify(record, q, ctx)


def verify_grid(records: Sequence[IdentityRecord], grid, ctx: PrecisionContext = DEFAULT_CONTEXT,
                jobs: int = 1) -> list:
    """All (record, q) cells in record-major order, whatever ``jobs`` is."""
    with mp.workprec(ctx.working_prec):
        qs = [check_base(q) for q in grid]
    cells = [(r, q, ctx) for r in records for q in qs]
    if jobs <= 1 or len(cells) <= 1:
        return [_cell(c) for c in cells]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_cell, cells, chunksize=1))


# ---------------------------------------------------------------------------
# limit studies


@dataclass(frozen=True)
class LimitPoint:
    k: int
    q: mpf
    value: Optional[mpf]
    error: Optional[mpf]
    rel_error: Optional[mpf]
    terms_used: int = 0
    detail: str = ""


@dataclass(frozen=True)
class LimitStudy:
    identity_id: str
    target: mpf
    target_text: str
    points: tuple
    resolution: mpf = mpf(0)

    @property
    def errors(self) -> list:
        return [p.error for p in self.points]

    @property
    def failures(self) -> list:
        """Reasons the study does not show convergence; empty when it does."""
        reasons = [f"k={p.k}: {p.detail}" for p in self.points if p.value is None]
        if reasons:
            return reasons
        if not self.points:
            return ["no points"]
        # relative errors at or below the evaluation resolution are all "zero"
        floor = self.resolution
        errs = [max(p.rel_error, floor) for p in self.points]
        drops = [
            i for i in range(1, len(errs))
            if not (errs[i] < errs[i - 1] or errs[i] == errs[i - 1] == floor)
        ]
        first_k = self.points[0].k
        if drops and (len(drops) > 1 or drops[0] != 1 or first_k != 2):
            reasons.append(
                "errors not strictly decreasing at k = "
                + ", ".join(str(self.points[i].k) for i in drops)
            )
        final = self.points[-1].rel_error
        if not final < mpf("1e-2"):
            reasons.append(f"final relative error {mpmath.nstr(final, 5)} >= 1e-2")
        return reasons

    @property
    def passed(self) -> bool:
        return not self.failures


def limit_context(ctx: PrecisionContext) -> PrecisionContext:
    """At least 512 bits and 10^6 terms, as q_k -> 1 needs."""
    return ctx.replace(
        precision_bits=max(ctx.precision_bits, 512),
        max_terms=max(ctx.max_terms, 1_000_000),
    )


def _limit_quantity(record: IdentityRecord, q: mpf, ctx) -> SumResult:
    if record.form is Form.FUNCTION:
        if record.id == "PI_Q":
            return SumResult(pi_q(q, ctx), 0, mpf(0))
        if record.id == "SIN_Q":
            return SumResult(sin_q(to_big(record.param_dict["x"]), q, ctx), 0, mpf(0))
        raise ValueError(f"unknown function record {record.id}")
    if record.form is Form.LITERAL:
        res = literal_lhs(record.literal_key, q, ctx)
    elif record.form.is_template:
        res = template_lhs(record, q, ctx)
    else:
        raise ValueError(f"{record.id}: no limit quantity for form {record.form.value}")
    scale = to_big(record.limit_scale)
    if record.limit_qfactor:
        scale *= Q_FACTORS[record.limit_qfactor](q)
    return SumResult(res.value * scale, res.terms_used, res.tail_bound * abs(scale), res.converged)


def limit_study(record, k_range=(2, 8), ctx: PrecisionContext = DEFAULT_CONTEXT) -> LimitStudy:
    """Evaluate the record's normalised quantity at q_k = 1 - 2^-k for k in ``k_range`` (inclusive)."""
    if isinstance(record, str):
        found = lookup(record)
        if found is None:
            raise ValueError(f"unknown identity id {record!r}")
        record = found
    if record.limit_target is None:
        raise ValueError(f"{record.id} has no classical limit target")
    lo, hi = k_range
    if not 1 <= lo <= hi:
        raise ValueError(f"bad k range {lo}..{hi}")
    lctx = limit_context(ctx)
    points = []
    with mp.workprec(lctx.working_prec):
        target = record.limit_target.value()
        for k in range(lo, hi + 1):
            q = 1 - mpf(2) ** -k
            try:
                res = _limit_quantity(record, q, lctx)
            except (NonConvergence, DomainError) as exc:
                used = getattr(exc, "terms_used", 0)
                points.append(LimitPoint(k, q, None, None, None, used, str(exc)))
                continue
            err = abs(res.value - target)
            points.append(LimitPoint(k, q, res.value, err, err / abs(target), res.terms_used))
    return LimitStudy(record.id, target, str(record.limit_target), tuple(points), 16 * lctx.rel_tol)
