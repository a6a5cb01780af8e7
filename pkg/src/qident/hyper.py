"""Basic hypergeometric series and the two master summation templates.

``phi_series`` sums an r+1 phi r series by its term-ratio recurrence.  The
templates ``t1_*``, ``t2_*`` and ``t2s_*`` evaluate both sides of the
q-Gauss-derived and very-well-poised-derived expansions over base q^2; the
``q`` passed in is always the undeformed q, squared once here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
from mpmath import mp, mpf

from .errors import DomainError, InvalidParams, PoleError
from .kernel import (
    check_base,
    pi_q,
    poch_finite,
    poch_general,
    poch_general_result,
    poch_infinite,
    pole_index,
    q_gamma,
    q_gamma_result,
    sin_q,
)
from .numeric import (
    DEFAULT_CONTEXT,
    PrecisionContext,
    SumResult,
    combine,
    log_error,
    parse_exact,
    tail_bounded_sum,
    to_big,
)
from .outcome import VerificationOutcome, compare, evaluation_context

__all__ = [
    "PhiSeriesSpec",
    "T1Params",
    "T2Params",
    "phi_series",
    "phi_term_naive",
    "phi_terms",
    "gauss_check",
    "phi65_check",
    "t1_lhs",
    "t1_terms",
    "t1_rhs",
    "t2_lhs",
    "t2_rhs",
    "t2s_lhs",
    "t2s_rhs",
]


# ---------------------------------------------------------------------------
# generic r+1 phi r


@dataclass(frozen=True)
class PhiSeriesSpec:
    """Parameters of an r+1 phi r series, given as values (not exponents).

    ``well_poised`` = a multiplies term n by (1 - a q^(2n)) / (1 - a), which
    is what the pair q a^(1/2), -q a^(1/2) over a^(1/2), -a^(1/2) reduces to.
    """

    numerator_params: tuple
    denominator_params: tuple
    base: object
    argument: object
    well_poised: Optional[object] = None

    def __post_init__(self):
        object.__setattr__(self, "numerator_params", tuple(self.numerator_params))
        object.__setattr__(self, "denominator_params", tuple(self.denominator_params))
        if len(self.numerator_params) != len(self.denominator_params) + 1:
            raise ValueError("need exactly one more numerator than denominator parameter")


def _resolved(spec: PhiSeriesSpec, ctx):
    q = check_base(spec.base)
    nums = [to_big(a) for a in spec.numerator_params]
    dens = [to_big(b) for b in spec.denominator_params]
    z = to_big(spec.argument)
    wp = None if spec.well_poised is None else to_big(spec.well_poised)
    for b in dens:
        if b > 0 and pole_index(mpmath.log(b) / mpmath.log(q), ctx) is not None:
            raise DomainError(f"denominator parameter {mpmath.nstr(b, 10)} is a non-positive power of q")
    if wp is not None and wp == 1:
        raise DomainError("well-poised parameter a = 1 divides by zero")
    return q, nums, dens, z, wp


class _PhiRecurrence:
    """Terms of an r+1 phi r by the ratio recurrence, with a rigorous ratio bound."""

    def __init__(self, spec: PhiSeriesSpec, ctx):
        self.q, self.nums, self.dens, self.z, self.wp = _resolved(spec, ctx)
        self._core = mpf(1)
        self._qn = mpf(1)  # q^n for the last term produced
        self._next = 0

    def term(self, n: int):
        if n != self._next:
            raise ValueError("terms must be requested in order")
        if n > 0:
            qn = self._qn  # q^(n-1)
            ratio = self.z / (1 - qn * self.q)
            for a in self.nums:
                ratio *= 1 - a * qn
            for b in self.dens:
                d = 1 - b * qn
                if d == 0:
                    raise DomainError(f"term denominator vanishes at n = {n}")
                ratio /= d
            self._core *= ratio
            self._qn = qn * self.q
        self._next = n + 1
        t = self._core
        if self.wp is not None:
            t = t * (1 - self.wp * self._qn**2) / (1 - self.wp)
        return t

    def ratio_bound(self, n: int):
        q = self.q
        qn = q**n
        rho = abs(self.z) / (1 - qn * q)
        for a in self.nums:
            rho *= 1 + abs(a) * qn
        for b in self.dens:
            d = 1 - abs(b) * qn
            if d <= 0:
                return None
            rho /= d
        if self.wp is not None:
            w = abs(self.wp)
            d = 1 - w * qn**2
            if d <= 0:
                return None
            rho *= (1 + w * qn**2 * q**2) / d
        return rho


def phi_series(spec: PhiSeriesSpec, ctx: PrecisionContext = DEFAULT_CONTEXT) -> SumResult:
    with mp.workprec(ctx.working_prec):
        rec = _PhiRecurrence(spec, ctx)
        if not abs(rec.z) < 1:
            raise DomainError(f"series argument must satisfy |z| < 1, got {rec.z}")
        return tail_bounded_sum(rec.term, rec.ratio_bound, ctx)


def phi_terms(spec: PhiSeriesSpec, count: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> list:
    """The first ``count`` terms exactly as :func:`phi_series` generates them."""
    with mp.workprec(ctx.working_prec):
        rec = _PhiRecurrence(spec, ctx)
        return [rec.term(n) for n in range(count)]


def phi_term_naive(spec: PhiSeriesSpec, n: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """Term n evaluated directly from finite q-shifted factorials."""
    with mp.workprec(ctx.working_prec):
        q, nums, dens, z, wp = _resolved(spec, ctx)
        t = z**n / poch_finite(q, q, n, ctx)
        for a in nums:
            t *= poch_finite(a, q, n, ctx)
        for b in dens:
            t /= poch_finite(b, q, n, ctx)
        if wp is not None:
            t *= (1 - wp * q ** (2 * n)) / (1 - wp)
        return t


def gauss_check(a_exp, b_exp, c_exp, q, ctx: PrecisionContext = DEFAULT_CONTEXT) -> VerificationOutcome:
    """Both sides of the q-Gauss sum with a = q^a_exp, b = q^b_exp, c = q^c_exp."""
    with mp.workprec(ctx.working_prec):
        q = check_base(q)
        a_exp, b_exp, c_exp = to_big(a_exp), to_big(b_exp), to_big(c_exp)
        if not c_exp - a_exp - b_exp > 0:
            raise InvalidParams("c_exp - a_exp - b_exp must be positive")
        ectx = evaluation_context(ctx)
        a, b, c = q**a_exp, q**b_exp, q**c_exp
        lhs = phi_series(PhiSeriesSpec((a, b), (c,), q, c / (a * b)), ectx)
        rhs = (
            poch_infinite(c / a, q, ectx).value
            * poch_infinite(c / b, q, ectx).value
            / (poch_infinite(c, q, ectx).value * poch_infinite(c / (a * b), q, ectx).value)
        )
        return compare("GAUSS_CHK", q, lhs, rhs, ctx)


def phi65_check(a_exp, b_exp, c_exp, d_exp, q, ctx: PrecisionContext = DEFAULT_CONTEXT) -> VerificationOutcome:
    """Both sides of the very-well-poised 6phi5 summation with parameters q^exp."""
    with mp.workprec(ctx.working_prec):
        q = check_base(q)
        ea, eb, ec, ed = (to_big(v) for v in (a_exp, b_exp, c_exp, d_exp))
        if not 1 + ea - eb - ec - ed > 0:
            raise InvalidParams("1 + a_exp - b_exp - c_exp - d_exp must be positive")
        ectx = evaluation_context(ctx)
        a, b, c, d = q**ea, q**eb, q**ec, q**ed
        aq = a * q
        spec = PhiSeriesSpec(
            (a, b, c, d), (aq / b, aq / c, aq / d), q, aq / (b * c * d), well_poised=a
        )
        lhs = phi_series(spec, ectx)
        top = [aq, aq / (b * c), aq / (b * d), aq / (c * d)]
        bottom = [aq / b, aq / c, aq / d, aq / (b * c * d)]
        rhs = mpf(1)
        for z in top:
            rhs *= poch_infinite(z, q, ectx).value
        for z in bottom:
            rhs /= poch_infinite(z, q, ectx).value
        return compare("PHI65_CHK", q, lhs, rhs, ctx)


# ---------------------------------------------------------------------------
# parameter records


def _exact(v):
    if isinstance(v, (str, float, int)):
        return parse_exact(v)
    return v


@dataclass(frozen=True)
class T1Params:
    alpha: object
    a: object
    b: object
    c: object

    def __post_init__(self):
        for name in ("alpha", "a", "b", "c"):
            object.__setattr__(self, name, _exact(getattr(self, name)))
        if not self.c - self.a - self.b > 0:
            raise InvalidParams("c-a-b must be positive")


_T2_NAMES = ("alpha", "beta", "gamma", "delta", "a", "b", "c", "d")


@dataclass(frozen=True)
class T2Params:
    alpha: object
    beta: object
    gamma: object
    delta: object
    a: object
    b: object
    c: object
    d: object

    def __post_init__(self):
        for name in _T2_NAMES:
            object.__setattr__(self, name, _exact(getattr(self, name)))
        if not self.excess > 0:
            raise InvalidParams("a+b+c+d+1+alpha-beta-gamma-delta must be positive")

    @property
    def excess(self):
        return (
            self.a + self.b + self.c + self.d + 1
            + self.alpha - self.beta - self.gamma - self.delta
        )

    @property
    def A(self):
        return 2 * self.excess


# ---------------------------------------------------------------------------
# shifted-factorial series engine


class _QTermSeries:
    """Terms t(n) = [2n+s]_Q * core(n) with a rational-in-Q^n core ratio.

    core(n+1)/core(n) = weight * prod [u+n]_Q / prod [v+n]_Q over the
    numerator shifts u and denominator shifts v; the well-poised factor
    [2n+s]_Q is present only when ``wp_shift`` is given.
    """

    def __init__(self, Q, head, num_shifts, den_shifts, weight, wp_shift=None):
        self.Q = Q
        self.lnQ = mpmath.log(Q)
        self.num = list(num_shifts)
        self.den = list(den_shifts)
        self.weight = weight
        self.wp_shift = wp_shift
        self._core = head
        self._num_pow = [mpmath.exp(u * self.lnQ) for u in self.num]
        self._den_pow = [mpmath.exp(v * self.lnQ) for v in self.den]
        self._next = 0
        self._scale = (1 - Q) ** (len(self.den) - len(self.num))

    def term(self, n: int):
        if n != self._next:
            raise ValueError("terms must be requested in order")
        if n > 0:
            ratio = self.weight * self._scale
            for i, p in enumerate(self._num_pow):
                ratio *= 1 - p
                self._num_pow[i] = p * self.Q
            for i, p in enumerate(self._den_pow):
                ratio /= 1 - p
                self._den_pow[i] = p * self.Q
            self._core *= ratio
        self._next = n + 1
        t = self._core
        if self.wp_shift is not None:
            t = t * -mpmath.expm1((2 * n + self.wp_shift) * self.lnQ) / (1 - self.Q)
        return t

    def ratio_bound(self, n: int):
        if any(u + n < 0 for u in self.num) or any(v + n <= 0 for v in self.den):
            return None
        rho = abs(self.weight) * self._scale
        for v in self.den:
            rho /= -mpmath.expm1((v + n) * self.lnQ)
        if self.wp_shift is not None:
            if 2 * n + self.wp_shift <= 0:
                return None
            rho /= -mpmath.expm1((2 * n + self.wp_shift) * self.lnQ)
        return rho


def _screen_factor(x, k, label, ctx):
    """Reject (x|Q)_{k+n} if Gamma_Q(x) or any Gamma_Q(x+k+n), n >= 0, is a pole."""
    if pole_index(x, ctx) is not None:
        raise PoleError(f"{label}: Gamma pole at base argument {mpmath.nstr(x, 10)}", argument=x)
    if pole_index(x + k, ctx) is not None:
        raise PoleError(
            f"{label}: Gamma pole at {mpmath.nstr(x + k, 10)} + n for some n >= 0",
            argument=x + k,
        )


def _screen_gamma(x, label, ctx):
    if pole_index(x, ctx) is not None:
        raise PoleError(f"{label}: Gamma_(q^2) pole at argument {mpmath.nstr(x, 10)}", argument=x)


def _with_head_error(res: SumResult, head: SumResult) -> SumResult:
    """Widen a series' tail bound by the relative error of its common factor."""
    h = log_error(head)
    if h == 0:
        return res
    rel = mpmath.expm1(h)
    bound = res.tail_bound * (1 + rel) + abs(res.value) * rel
    return SumResult(res.value, res.terms_used + head.terms_used, bound, res.converged)


def _big_params(p, names):
    return [to_big(getattr(p, n)) for n in names]


# ---------------------------------------------------------------------------
# first template (from q-Gauss)


def _t1_series(p: T1Params, q, ctx):
    q = check_base(q)
    Q = q * q
    al, a, b, c = _big_params(p, ("alpha", "a", "b", "c"))
    _screen_factor(al, a, "(alpha|q^2)_(a+n)", ctx)
    _screen_factor(1 - al, b, "(1-alpha|q^2)_(b+n)", ctx)
    _screen_gamma(c + 1, "Gamma(c+n+1)", ctx)
    parts = [
        poch_general_result(al, a, Q, ctx),
        poch_general_result(1 - al, b, Q, ctx),
        q_gamma_result(c + 1, Q, ctx),
    ]
    head = combine(parts[0].value * parts[1].value / parts[2].value, parts, [1, 1, -1])
    series = _QTermSeries(Q, head.value, [al + a, 1 - al + b], [1, c + 1], Q ** (c - a - b))
    return series, head


def t1_lhs(p: T1Params, q, ctx: PrecisionContext = DEFAULT_CONTEXT) -> SumResult:
    with mp.workprec(ctx.working_prec):
        series, head = _t1_series(p, q, ctx)
        return _with_head_error(tail_bounded_sum(series.term, series.ratio_bound, ctx), head)


def t1_terms(p: T1Params, q, count: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> list:
    """The first ``count`` terms of the first template's left side."""
    with mp.workprec(ctx.working_prec):
        series, _ = _t1_series(p, q, ctx)
        return [series.term(n) for n in range(count)]


def t1_rhs(p: T1Params, q, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    with mp.workprec(ctx.working_prec):
        q = check_base(q)
        Q = q * q
        al, a, b, c = _big_params(p, ("alpha", "a", "b", "c"))
        _screen_gamma(c - a - b, "Gamma(c-a-b)", ctx)
        val = (
            poch_general(al, a, Q, ctx)
            * poch_general(1 - al, b, Q, ctx)
            * q_gamma(c - a - b, Q, ctx)
            / (poch_general(1 - al, c - a, Q, ctx) * poch_general(al, c - b, Q, ctx))
        )
        return val * q ** (-al * (al - 1)) * sin_q(al, q, ctx) / pi_q(q, ctx)


# ---------------------------------------------------------------------------
# second template (from the very-well-poised 6phi5) and its shifted form


def _t2_series(p: T2Params, q, ctx, shifted: bool) -> SumResult:
    with mp.workprec(ctx.working_prec):
        q = check_base(q)
        Q = q * q
        al, be, ga, de, a, b, c, d = _big_params(p, _T2_NAMES)
        if shifted:
            first = (al + 1, a - 1, "(alpha+1|q^2)_(a+n-1)")
        else:
            first = (al, a, "(alpha|q^2)_(a+n)")
        nums = [first, (be, -b, "(beta|q^2)_(n-b)"), (ga, -c, "(gamma|q^2)_(n-c)"), (de, -d, "(delta|q^2)_(n-d)")]
        dens = [
            (1 + al - be, a + b, "(1+alpha-beta|q^2)_(a+b+n)"),
            (1 + al - ga, a + c, "(1+alpha-gamma|q^2)_(a+c+n)"),
            (1 + al - de, a + d, "(1+alpha-delta|q^2)_(a+d+n)"),
        ]
        for x, k, label in nums + dens:
            _screen_factor(x, k, label, ctx)
        parts = [poch_general_result(x, k, Q, ctx) for x, k, _ in nums + dens]
        value = mpf(1)
        for r in parts[: len(nums)]:
            value *= r.value
        for r in parts[len(nums):]:
            value /= r.value
        head = combine(value, parts, [1] * len(nums) + [-1] * len(dens))
        series = _QTermSeries(
            Q,
            head.value,
            [x + k for x, k, _ in nums],
            [1] + [x + k for x, k, _ in dens],
            q ** (2 * to_big(p.excess)),
            wp_shift=a + al,
        )
        return _with_head_error(tail_bounded_sum(series.term, series.ratio_bound, ctx), head)


def _t2_closed_form(p: T2Params, q, ctx, shifted: bool) -> mpf:
    with mp.workprec(ctx.working_prec):
        q = check_base(q)
        Q = q * q
        al, be, ga, de, a, b, c, d = _big_params(p, _T2_NAMES)
        lift = 1 if shifted else 0
        gammas_top = [1 + al - be, 1 + al - ga, 1 + al - de, 2 + al - be - ga - de]
        gammas_bottom = [
            al + lift,
            1 + lift + al - be - ga,
            1 + lift + al - be - de,
            1 + lift + al - ga - de,
        ]
        for x in gammas_top + gammas_bottom:
            _screen_gamma(x, "closed form", ctx)
        val = mpf(1)
        for x in gammas_top:
            val *= q_gamma(x, Q, ctx)
        for x in gammas_bottom:
            val /= q_gamma(x, Q, ctx)
        val *= (
            poch_general(be, -b, Q, ctx)
            * poch_general(ga, -c, Q, ctx)
            * poch_general(de, -d, Q, ctx)
            * poch_general(2 + al - be - ga - de, a + b + c + d - 1, Q, ctx)
        )
        val /= (
            poch_general(1 + lift + al - be - ga, a + b + c - lift, Q, ctx)
            * poch_general(1 + lift + al - be - de, a + b + d - lift, Q, ctx)
            * poch_general(1 + lift + al - ga - de, a + c + d - lift, Q, ctx)
        )
        return val


def t2_lhs(p: T2Params, q, ctx: PrecisionContext = DEFAULT_CONTEXT) -> SumResult:
    return _t2_series(p, q, ctx, shifted=False)


def t2_rhs(p: T2Params, q, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    return _t2_closed_form(p, q, ctx, shifted=False)


def t2s_lhs(p: T2Params, q, ctx: PrecisionContext = DEFAULT_CONTEXT) -> SumResult:
    """Left side of the template with (alpha+1|q^2)_(a+n-1) in place of (alpha|q^2)_(a+n)."""
    return _t2_series(p, q, ctx, shifted=True)


def t2s_rhs(p: T2Params, q, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    return _t2_closed_form(p, q, ctx, shifted=True)
