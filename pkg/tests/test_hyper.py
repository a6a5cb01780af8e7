from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from mpmath import mp, mpf

from conftest import GRID, big, rel
from qident.errors import DomainError, InvalidParams, PoleError
from qident.forms import RHS_VARIANTS
from qident.hyper import (
    PhiSeriesSpec,
    T1Params,
    T2Params,
    gauss_check,
    phi65_check,
    phi_series,
    phi_term_naive,
    phi_terms,
    t1_lhs,
    t1_rhs,
    t1_terms,
    t2_lhs,
    t2_rhs,
    t2s_lhs,
    t2s_rhs,
)
from qident.kernel import pi_q, poch_general, poch_infinite, q_gamma
from qident.numeric import DEFAULT_CONTEXT, PrecisionContext
from qident.outcome import Status

TOL = DEFAULT_CONTEXT.rel_tol
WP = DEFAULT_CONTEXT.working_prec
F = Fraction


def test_spec_shape():
    with pytest.raises(ValueError):
        PhiSeriesSpec((1, 2), (3, 4), "0.5", "0.1")


def test_argument_outside_unit_disc():
    with pytest.raises(DomainError):
        phi_series(PhiSeriesSpec(("0.5",), (), "0.5", "1.5"))


def test_denominator_hitting_nonpositive_power():
    # b = q^-2 makes (b; q)_n vanish at n = 3
    with pytest.raises(DomainError):
        phi_series(PhiSeriesSpec(("0.1", "0.2"), (4,), "0.5", "0.1"))


@pytest.mark.parametrize("q", GRID)
def test_q_binomial_theorem(q):
    # sum (a;q)_n / (q;q)_n z^n = (az; q)_inf / (z; q)_inf
    with mp.workprec(WP):
        a, z = big("0.3"), big("0.6")
        lhs = phi_series(PhiSeriesSpec((a,), (), q, z)).value
        rhs = poch_infinite(a * z, q).value / poch_infinite(z, q).value
    assert rel(lhs, rhs) < TOL


@given(
    nums=st.lists(st.fractions(min_value=-2, max_value=2, max_denominator=20), min_size=1, max_size=4),
    q=st.sampled_from(GRID),
    z=st.fractions(min_value=F(-9, 10), max_value=F(9, 10), max_denominator=20),
    wp=st.one_of(st.none(), st.fractions(min_value=F(1, 10), max_value=F(9, 10), max_denominator=10)),
)
def test_recurrence_terms_match_direct_terms(nums, q, z, wp):
    dens = [F(1, 3) + k * F(1, 7) for k in range(len(nums) - 1)]
    spec = PhiSeriesSpec(tuple(map(big, nums)), tuple(map(big, dens)), q, big(z),
                         None if wp is None else big(wp))
    fast = phi_terms(spec, 30)
    for n, t in enumerate(fast):
        slow = phi_term_naive(spec, n)
        with mp.workprec(WP):
            assert abs(t - slow) <= TOL * max(abs(slow), mpf(2) ** -200)


@pytest.mark.parametrize("q", GRID)
def test_gauss_sum(q):
    out = gauss_check("3/5", "4/5", 2, q)
    assert out.status is Status.PASS and out.rel_err <= TOL


def test_gauss_sum_needs_convergent_argument():
    with pytest.raises(InvalidParams, match="c_exp - a_exp - b_exp must be positive"):
        gauss_check(1, 1, 2, "0.5")


@pytest.mark.parametrize("q", GRID)
@pytest.mark.parametrize("exps", [(1, "0.3", "0.4", "0.5"), (2, "0.5", "0.5", 1)])
def test_very_well_poised_sum(exps, q):
    out = phi65_check(*exps, q)
    assert out.status is Status.PASS and out.rel_err <= TOL


def test_very_well_poised_divergent_exponents_rejected():
    # q^(1+a-b-c-d) = q^(-0.4) > 1: the series does not converge
    with pytest.raises(InvalidParams):
        phi65_check(1, "0.7", "0.8", "0.9", "0.5")


def test_parameter_validation():
    with pytest.raises(InvalidParams, match="c-a-b must be positive"):
        T1Params("1/2", 1, 1, 2)
    with pytest.raises(InvalidParams, match="a\\+b\\+c\\+d\\+1\\+alpha-beta-gamma-delta"):
        T2Params(0, "1/2", "1/2", "1/2", 0, 0, 0, "1/2")
    p = T2Params("1/2", "1/2", "1/3", "2/3", 1, 0, 0, 0)
    assert p.excess == 1 and p.A == 2
    assert T1Params(0.5, "0", 0, "3").alpha == F(1, 2)


T1_SETS = [
    T1Params(F(1, 3), F(1, 5), F(-1, 10), F(3, 2)),
    T1Params(F(1, 2), 0, 0, 3),
    T1Params(F(1, 2), -1, -1, 0),
    T1Params(F(2, 7), F(3, 2), F(1, 4), F(19, 5)),
]
T2_SETS = [
    T2Params(F(7, 10), F(3, 10), F(2, 5), F(9, 20), F(1, 5), F(1, 10), 0, F(3, 10)),
    T2Params(F(1, 2), F(1, 2), F(1, 3), F(2, 3), 1, 1, 0, 1),
    T2Params(F(3, 4), F(1, 5), F(1, 6), F(1, 7), 0, 0, 0, 0),
]
T2S_SETS = [
    T2Params(F(1, 4), F(1, 2), F(1, 3), F(2, 5), 1, 0, F(1, 2), F(1, 5)),
    T2Params(0, F(1, 2), F(1, 2), F(1, 2), 2, 1, 0, 1),
    T2Params(0, F(1, 2), F(1, 2), F(1, 2), 1, 1, 1, 0),
]


@pytest.mark.parametrize("q", GRID)
@pytest.mark.parametrize(
    "lhs, rhs, p",
    [(t1_lhs, t1_rhs, p) for p in T1_SETS]
    + [(t2_lhs, t2_rhs, p) for p in T2_SETS]
    + [(t2s_lhs, t2s_rhs, p) for p in T2S_SETS],
)
def test_template_equality(lhs, rhs, p, q):
    ctx = DEFAULT_CONTEXT.tightened(64)
    assert rel(lhs(p, q, ctx).value, rhs(p, q, ctx)) <= TOL


@given(
    alpha=st.fractions(min_value=F(1, 20), max_value=F(19, 20), max_denominator=20),
    a=st.fractions(min_value=-2, max_value=2, max_denominator=10),
    b=st.fractions(min_value=-2, max_value=2, max_denominator=10),
    gap=st.fractions(min_value=F(1, 4), max_value=4, max_denominator=10),
    q=st.sampled_from(GRID[:4]),
)
def test_first_template_random(alpha, a, b, gap, q):
    p = T1Params(alpha, a, b, a + b + gap)
    ctx = DEFAULT_CONTEXT.tightened(64)
    try:
        lhs = t1_lhs(p, q, ctx).value
        rhs = t1_rhs(p, q, ctx)
    except PoleError:
        assume(False)
    assert rel(lhs, rhs) <= TOL or abs(lhs - rhs) <= TOL * mpf(2) ** -100


@pytest.mark.parametrize("q", GRID)
@pytest.mark.parametrize("p", T1_SETS)
def test_first_template_is_gauss_sum_rescaled(p, q):
    # substitute a -> q^(2(a+alpha)), b -> q^(2(b+1-alpha)), c -> q^(2(c+1)) over base q^2
    ctx = DEFAULT_CONTEXT.tightened(64)
    with mp.workprec(ctx.working_prec):
        Q = big(q) ** 2
        al, a, b, c = (big(v) for v in (p.alpha, p.a, p.b, p.c))
        A, B, C = Q ** (a + al), Q ** (b + 1 - al), Q ** (c + 1)
        gauss = (
            poch_infinite(C / A, Q, ctx).value * poch_infinite(C / B, Q, ctx).value
            / (poch_infinite(C, Q, ctx).value * poch_infinite(C / (A * B), Q, ctx).value)
        )
        head = poch_general(al, a, Q, ctx) * poch_general(1 - al, b, Q, ctx) / q_gamma(c + 1, Q, ctx)
        assert rel(head * gauss, t1_rhs(p, q, ctx)) <= TOL


@pytest.mark.parametrize("q", GRID)
@pytest.mark.parametrize(
    "variant, general, p",
    [("thm3", t1_rhs, T1Params(F(1, 2), a, b, c)) for a, b, c in [(0, 0, 1), (0, 0, 4), (-1, -1, 2), (F(1, 3), 0, 2)]]
    + [("thm31", t2_rhs, T2Params(F(1, 2), F(1, 2), F(1, 3), F(2, 3), *abcd))
       for abcd in [(1, 1, 0, 1), (1, 0, 0, 0), (0, 0, 0, 1), (F(1, 2), F(1, 4), 0, 0)]]
    + [("thm41", t2s_rhs, T2Params(0, F(1, 2), F(1, 2), F(1, 2), *abcd))
       for abcd in [(2, 1, 0, 1), (1, 0, 0, 0), (1, 1, 1, 1), (F(3, 4), 0, 0, F(1, 4))]],
)
def test_reduced_closed_forms(variant, general, p, q):
    ctx = DEFAULT_CONTEXT.tightened(64)
    with mp.workprec(ctx.working_prec):
        reduced = RHS_VARIANTS[variant](p, big(q), ctx)
    assert rel(reduced, general(p, q, ctx)) <= TOL


def test_unshifted_template_at_alpha_zero_hits_gamma_pole():
    p = T2Params(0, F(1, 2), F(1, 2), F(1, 2), 1, 0, 0, 0)
    with pytest.raises(PoleError):
        t2_rhs(p, "0.5")


def test_shifted_template_sun_case():
    p = T2Params(0, F(1, 2), F(1, 2), F(1, 2), 1, 0, 0, 0)
    with mp.workprec(WP):
        q = big("0.5")
        expected = pi_q(q) ** 2 / mpmath.sqrt(q)
        assert rel(t2s_lhs(p, q).value, expected) <= TOL
        assert rel(t2s_rhs(p, q), expected) <= TOL


@given(
    alpha=st.fractions(min_value=F(1, 10), max_value=F(9, 10), max_denominator=10),
    gap=st.fractions(min_value=F(1, 2), max_value=3, max_denominator=4),
    q=st.sampled_from(GRID),
)
def test_truncation_is_honest(alpha, gap, q):
    # a = b = 0 and 0 < alpha < 1: every term is positive
    p = T1Params(alpha, 0, 0, gap)
    coarse = t1_lhs(p, q, PrecisionContext(rel_tol=mpf("1e-8")))
    fine = t1_lhs(p, q)
    terms = t1_terms(p, q, fine.terms_used)
    with mp.workprec(WP):
        assert abs(coarse.value - fine.value) <= coarse.tail_bound
        assert coarse.terms_used <= fine.terms_used
        partial = mpf(0)
        for t in terms:
            assert t > 0
            partial += t
            assert partial <= fine.value + fine.tail_bound


def test_pole_screening_reports_argument():
    with pytest.raises(PoleError) as info:
        t1_lhs(T1Params(0, 0, 0, 1), "0.5")
    assert info.value.argument == 0
