"""Printed series as they stand, and closed forms specialised to fixed parameters.

Literal series are written term by term from the definitions
((x|q)_n as a running product of q-integers, [n]_q! likewise, explicit
powers of q), deliberately sharing no code with the template engine in
:mod:`qident.hyper`.  The two are compared against each other by the
catalog's sibling checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Optional

import mpmath
from mpmath import mp, mpf

from .kernel import check_base, pi_q, poch_general, poch_infinite, q_gamma, q_int
from .numeric import DEFAULT_CONTEXT, PrecisionContext, SumResult, tail_bounded_sum, to_big

__all__ = [
    "LiteralForm",
    "LITERALS",
    "Q_FACTORS",
    "RHS_VARIANTS",
    "literal_lhs",
    "literal_rhs",
    "corollary_closed_form",
]

HALF = mpf(1) / 2


@dataclass(frozen=True)
class LiteralForm:
    """``head(q) + prefactor(q) * sum_{n >= start} term_n(q)  =  rhs(q)``.

    ``terms`` yields term_start, term_start+1, ...; ``ratio_bound(n, q)``
    bounds |term_(m+1) / term_m| for all m >= n (None if not yet valid).
    """

    key: str
    terms: Callable[[mpf, PrecisionContext], Iterator[mpf]]
    ratio_bound: Callable[[int, mpf], Optional[mpf]]
    rhs: Callable[[mpf, PrecisionContext], mpf]
    head: Optional[Callable[[mpf, PrecisionContext], mpf]] = None
    prefactor: Optional[Callable[[mpf], mpf]] = None
    start: int = 0


def _qint_at(Q, ctx):
    return lambda x: q_int(x, Q, ctx)


# --- q-analogues of series for 1/pi from the q-Gauss template ------------


def _cor_example_terms(l):
    # sum_n (1/2|Q)_n^2 / ([n]! [n+l]!) q^(2 l n)
    def terms(q, ctx):
        Q = q * q
        qi = _qint_at(Q, ctx)
        half_n = mpf(1)
        fact_n = mpf(1)
        fact_nl = mpf(1)
        for k in range(1, l + 1):
            fact_nl *= qi(k)
        step = q ** (2 * l)
        power = mpf(1)
        n = 0
        while True:
            yield half_n**2 / (fact_n * fact_nl) * power
            half_n *= qi(HALF + n)
            fact_n *= qi(n + 1)
            fact_nl *= qi(n + l + 1)
            power *= step
            n += 1

    return terms


def _cor_l1_rhs(q, ctx):
    return (1 + q) ** 2 * mpmath.root(q, 4) / pi_q(q, ctx)


def _cor_l2_rhs(q, ctx):
    return (1 + q) ** 4 * mpmath.root(q, 4) / (pi_q(q, ctx) * (1 + q + q * q) ** 2)


def _neg_terms(l):
    # sum_{n>=1} (1/2|Q)_n^2 / ([n+1]! [n+l+1]!) q^(2(l+2)(n+1))
    def terms(q, ctx):
        Q = q * q
        qi = _qint_at(Q, ctx)
        half_n = qi(HALF)
        fact_a = qi(1) * qi(2)
        fact_b = mpf(1)
        for k in range(1, l + 3):
            fact_b *= qi(k)
        step = q ** (2 * (l + 2))
        power = step**2
        n = 1
        while True:
            yield half_n**2 / (fact_a * fact_b) * power
            half_n *= qi(HALF + n)
            fact_a *= qi(n + 2)
            fact_b *= qi(n + l + 2)
            power *= step
            n += 1

    return terms


def _lit_l0_head(q, ctx):
    return q**2 * (1 + q) ** 2 + q**4


def _lit_l0_rhs(q, ctx):
    return (1 + q) ** 4 / pi_q(q, ctx) * q ** (mpf(9) / 4)


def _lit_l1_head(q, ctx):
    return q**2 * (1 + q) ** 2 * (1 + q**2) + q**6


def _lit_l1_rhs(q, ctx):
    return (
        (1 + q) ** 6 * (1 + q**2) ** 2
        / (pi_q(q, ctx) * (1 + q + q**2) ** 2)
        * q ** (mpf(9) / 4)
    )


def _const_ratio(power):
    def bound(n, q):
        return q**power

    return bound


# --- q-analogues of series for 1/pi from the 6phi5 template -------------


def _sixth_ratio(q, ctx):
    """[1/6]_{q^2} (q^(4/3), q^(2/3); q^2)_inf / (q^(1/3), q^(5/3); q^2)_inf."""
    Q = q * q
    third = mpf(1) / 3
    num = poch_infinite(q ** (4 * third), Q, ctx).value * poch_infinite(q ** (2 * third), Q, ctx).value
    den = poch_infinite(q**third, Q, ctx).value * poch_infinite(q ** (5 * third), Q, ctx).value
    return q_int(mpf(1) / 6, Q, ctx) * num / den


def _t31_ex1_terms(q, ctx):
    Q = q * q
    qi = _qint_at(Q, ctx)
    third = mpf(1) / 3
    half_n = mpf(1)
    third_n = mpf(1)
    two_third_n = mpf(1)
    fact_n = mpf(1)
    seven_sixth = qi(mpf(7) / 6)  # (7/6|Q)_(n+1) at n = 0
    five_sixth = qi(mpf(5) / 6)
    n = 0
    while True:
        yield (
            (1 - q ** (4 * n + 3)) * (1 - q ** (2 * n + 1)) * half_n**2 * third_n * two_third_n
            / ((1 - q**2) * (1 - q ** (2 * n + 2)) * fact_n**2 * seven_sixth * five_sixth)
            * q ** (2 * n)
        )
        half_n *= qi(HALF + n)
        third_n *= qi(third + n)
        two_third_n *= qi(2 * third + n)
        fact_n *= qi(n + 1)
        seven_sixth *= qi(mpf(7) / 6 + n + 1)
        five_sixth *= qi(mpf(5) / 6 + n + 1)
        n += 1


def _t31_ex1_bound(n, q):
    return q**2 / ((1 - q ** (4 * n + 3)) * (1 - q ** (2 * n + 1)))


def _t31_ex1_rhs(q, ctx):
    Q = q * q
    third = mpf(1) / 3
    return (
        _sixth_ratio(q, ctx) * mpmath.root(q, 4)
        / (q_int(third, Q, ctx) * q_int(2 * third, Q, ctx) * q_int(HALF, Q, ctx) * pi_q(q, ctx))
    )


def _t31_ex2_head(q, ctx):
    Q = q * q
    return q ** (mpf(2) / 3) / ((1 + q) * q_int(mpf(1) / 3, Q, ctx) * q_int(mpf(5) / 6, Q, ctx))


def _t31_ex2_terms(q, ctx):
    # n >= 1: (1-q^(4n+1)) (1/2)_n^2 (1/3)_n (2/3)_(n-1) / ((1-q^2) [n]!^2 (7/6)_n (5/6)_(n+1)) q^(2n)
    Q = q * q
    qi = _qint_at(Q, ctx)
    third = mpf(1) / 3
    half_n = qi(HALF)
    third_n = qi(third)
    two_third_nm1 = mpf(1)
    fact_n = mpf(1)
    seven_sixth_n = qi(mpf(7) / 6)
    five_sixth_n1 = qi(mpf(5) / 6) * qi(mpf(11) / 6)
    n = 1
    while True:
        yield (
            (1 - q ** (4 * n + 1)) * half_n**2 * third_n * two_third_nm1
            / ((1 - q**2) * fact_n**2 * seven_sixth_n * five_sixth_n1)
            * q ** (2 * n)
        )
        half_n *= qi(HALF + n)
        third_n *= qi(third + n)
        two_third_nm1 *= qi(2 * third + n - 1)
        fact_n *= qi(n + 1)
        seven_sixth_n *= qi(mpf(7) / 6 + n)
        five_sixth_n1 *= qi(mpf(5) / 6 + n + 1)
        n += 1


def _t31_ex2_bound(n, q):
    if n < 1:
        return None
    return q**2 / (1 - q ** (4 * n + 1))


def _t31_ex2_rhs(q, ctx):
    Q = q * q
    third = mpf(1) / 3
    return (
        _sixth_ratio(q, ctx) * q ** (mpf(11) / 12)
        / (q_int(third, Q, ctx) ** 2 * q_int(HALF, Q, ctx) * pi_q(q, ctx))
    )


# --- q-analogues of series for pi^2 --------------------------------------


def _odd_terms(power, exps, start):
    """sum (1+q^(2n+1)) q^(power n) / prod_j (1 - q^(2n+j))^(e_j), j in exps."""

    def terms(q, ctx):
        n = start
        while True:
            den = mpf(1)
            for shift, e in exps:
                den *= (1 - q ** (2 * n + shift)) ** e
            yield (1 + q ** (2 * n + 1)) * q ** (power * n) / den
            n += 1

    return terms


def _pi2_ex1_rhs(q, ctx):
    return pi_q(q, ctx) ** 2 / ((1 - q**2) ** 2 * mpmath.sqrt(q))


def _pi2_ex2_bound(n, q):
    if n < 1:
        return None
    return q**5


def _pi2_ex2_rhs(q, ctx):
    return (
        pi_q(q, ctx) ** 2 * (1 + q + q**2) * q ** (mpf(3) / 2)
        / ((1 + q**2) * (1 - q**2) ** 6)
    )


def _pi2_ex3_head(q, ctx):
    return (1 + q) * q**3 / ((1 - q) ** 5 * (1 - q**3) ** 3)


def _pi2_ex3_rhs(q, ctx):
    return (
        pi_q(q, ctx) ** 2 * (1 + q + q**2) * (1 + q + q**2 + q**3 + q**4) * q ** (mpf(5) / 2)
        / ((1 + q**2) ** 3 * (1 - q**2) ** 8)
    )


def _neg_one(q):
    return mpf(-1)


LITERALS = {
    "cor_l1": LiteralForm("cor_l1", _cor_example_terms(1), _const_ratio(2), _cor_l1_rhs),
    "cor_l2": LiteralForm("cor_l2", _cor_example_terms(2), _const_ratio(4), _cor_l2_rhs),
    "neg_l0": LiteralForm(
        "neg_l0", _neg_terms(0), _const_ratio(4), _lit_l0_rhs, head=_lit_l0_head, start=1
    ),
    "neg_l1": LiteralForm(
        "neg_l1",
        _neg_terms(1),
        _const_ratio(6),
        _lit_l1_rhs,
        head=_lit_l1_head,
        prefactor=lambda q: 1 + q**2,
        start=1,
    ),
    "t31_ex1": LiteralForm("t31_ex1", _t31_ex1_terms, _t31_ex1_bound, _t31_ex1_rhs),
    "t31_ex2": LiteralForm(
        "t31_ex2",
        _t31_ex2_terms,
        _t31_ex2_bound,
        _t31_ex2_rhs,
        head=_t31_ex2_head,
        prefactor=_neg_one,
        start=1,
    ),
    "pi2_ex1": LiteralForm("pi2_ex1", _odd_terms(1, [(1, 2)], 0), _const_ratio(1), _pi2_ex1_rhs),
    "pi2_ex2": LiteralForm(
        "pi2_ex2", _odd_terms(5, [(-1, 2), (1, 2), (3, 2)], 0), _pi2_ex2_bound, _pi2_ex2_rhs
    ),
    "pi2_ex3": LiteralForm(
        "pi2_ex3",
        _odd_terms(7, [(-1, 3), (1, 2), (3, 3)], 1),
        _const_ratio(7),
        _pi2_ex3_rhs,
        head=_pi2_ex3_head,
        prefactor=_neg_one,
        start=1,
    ),
}


def literal_lhs(key: str, q, ctx: PrecisionContext = DEFAULT_CONTEXT) -> SumResult:
    """Head plus (prefactor times) the printed series; tail bound scaled to match."""
    form = LITERALS[key]
    with mp.workprec(ctx.working_prec):
        q = check_base(q)
        it = form.terms(q, ctx)
        series = tail_bounded_sum(
            lambda i: next(it), lambda i: form.ratio_bound(form.start + i, q), ctx
        )
        pref = form.prefactor(q) if form.prefactor else mpf(1)
        head = form.head(q, ctx) if form.head else mpf(0)
        return SumResult(
            head + pref * series.value,
            series.terms_used,
            abs(pref) * series.tail_bound,
            series.converged,
        )


def literal_rhs(key: str, q, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    with mp.workprec(ctx.working_prec):
        return LITERALS[key].rhs(check_base(q), ctx)


# --- closed forms of the templates at fixed (alpha, beta, gamma, delta) ----


def _thm3_rhs(p, q, ctx):
    """Right side at alpha = 1/2, where q^(-alpha(alpha-1)) sin_q(pi/2) = q^(1/4)."""
    Q = q * q
    a, b, c = (to_big(v) for v in (p.a, p.b, p.c))
    val = (
        poch_general(HALF, a, Q, ctx) * poch_general(HALF, b, Q, ctx) * q_gamma(c - a - b, Q, ctx)
        / (poch_general(HALF, c - a, Q, ctx) * poch_general(HALF, c - b, Q, ctx))
    )
    return val * mpmath.root(q, 4) / pi_q(q, ctx)


def _thm31_rhs(p, q, ctx):
    """Right side at (alpha, beta, gamma, delta) = (1/2, 1/2, 1/3, 2/3)."""
    Q = q * q
    third = mpf(1) / 3
    a, b, c, d = (to_big(v) for v in (p.a, p.b, p.c, p.d))
    val = (
        poch_general(HALF, -b, Q, ctx)
        * poch_general(third, -c, Q, ctx)
        * poch_general(2 * third, -d, Q, ctx)
        * poch_general(1, a + b + c + d - 1, Q, ctx)
        / (
            poch_general(third, a + b + d, Q, ctx)
            * poch_general(2 * third, a + b + c, Q, ctx)
            * poch_general(HALF, a + c + d, Q, ctx)
        )
    )
    return val * _sixth_ratio(q, ctx) * mpmath.root(q, 4) / pi_q(q, ctx)


def _thm41_rhs(p, q, ctx):
    """Shifted right side at (alpha, beta, gamma, delta) = (0, 1/2, 1/2, 1/2)."""
    Q = q * q
    a, b, c, d = (to_big(v) for v in (p.a, p.b, p.c, p.d))
    val = (
        pi_q(q, ctx) ** 2
        * poch_general(HALF, -b, Q, ctx)
        * poch_general(HALF, -c, Q, ctx)
        * poch_general(HALF, -d, Q, ctx)
        * poch_general(HALF, a + b + c + d - 1, Q, ctx)
        / (
            poch_general(1, a + b + c - 1, Q, ctx)
            * poch_general(1, a + b + d - 1, Q, ctx)
            * poch_general(1, a + c + d - 1, Q, ctx)
        )
    )
    return val / mpmath.sqrt(q)


RHS_VARIANTS = {
    "thm3": _thm3_rhs,
    "thm31": _thm31_rhs,
    "thm41": _thm41_rhs,
}


def corollary_closed_form(l: int, q, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """Value of sum_n (1/2|q^2)_n^2 / ([n]_{q^2}! (l|q^2)_{n+1}) q^(2ln).

    Equals Gamma_{q^2}(l)^2 q^(1/4) / (pi_q (1/2|q^2)_l^2); the factor
    Gamma_{q^2}(l)^2 = ([l-1]_{q^2}!)^2 is 1 only for l = 1, 2.
    """
    with mp.workprec(ctx.working_prec):
        q = check_base(q)
        Q = q * q
        return (
            q_gamma(l, Q, ctx) ** 2 * mpmath.root(q, 4)
            / (pi_q(q, ctx) * poch_general(HALF, l, Q, ctx) ** 2)
        )


# --- q-dependent multipliers referenced by name from catalog records -----

Q_FACTORS: dict = {
    "one_plus_q2": lambda q: 1 + q**2,
    "minus_one": _neg_one,
    "inv_1mq2_pow2": lambda q: 1 / (1 - q**2) ** 2,
    "inv_1mq2_pow6": lambda q: 1 / (1 - q**2) ** 6,
    "minus_inv_1mq2_pow8": lambda q: -1 / (1 - q**2) ** 8,
    "odd_sq_pow2": lambda q: (1 - q) ** 2 / (1 + q),
    "odd_sq_pow6": lambda q: (1 - q) ** 6 / (1 + q),
    "odd_sq_pow8": lambda q: (1 - q) ** 8 / (1 + q),
    "inv_1pq_pow7": lambda q: 1 / (1 + q) ** 7,
    # reciprocals of the elementary prefactors on the 1/pi_q right sides,
    # scaled so that the normalised left side equals c / pi_q exactly
    "strip_cor_l1": lambda q: 4 / ((1 + q) ** 2 * mpmath.root(q, 4)),
    "strip_cor_l2": lambda q: (
        mpf(16) / 9 * (1 + q + q**2) ** 2 / ((1 + q) ** 4 * mpmath.root(q, 4))
    ),
    "strip_neg_l0": lambda q: 16 / ((1 + q) ** 4 * q ** (mpf(9) / 4)),
    "strip_neg_l1": lambda q: (
        mpf(256) / 9 * (1 + q + q**2) ** 2 / ((1 + q) ** 6 * (1 + q**2) ** 2 * q ** (mpf(9) / 4))
    ),
    "strip_neg_l1_template": lambda q: (
        mpf(256) / 9 * (1 + q + q**2) ** 2 / ((1 + q) ** 6 * (1 + q**2) * q ** (mpf(9) / 4))
    ),
}
