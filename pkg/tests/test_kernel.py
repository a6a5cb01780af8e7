from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st
from mpmath import mp, mpf

from conftest import GRID, big, rel
from qident.errors import DomainError, PoleError
from qident.kernel import (
    pi_q,
    pi_q_result,
    poch_finite,
    poch_general,
    poch_infinite,
    pole_index,
    q_factorial,
    q_gamma,
    q_int,
    reflection_residual,
    sin_q,
)
from qident.numeric import DEFAULT_CONTEXT, PrecisionContext

TOL = DEFAULT_CONTEXT.rel_tol
qs = st.sampled_from(GRID)


def test_q_int_values():
    assert rel(q_int(3, "0.5"), "1.75") < TOL
    assert q_int(0, "0.3") == 0
    # [1/2]_q = 1/(1 + q^(1/2))
    with mp.workprec(300):
        assert rel(q_int("1/2", "0.49"), 1 / mpf("1.7")) < TOL


def test_q_factorial_exact():
    with mp.workprec(300):
        assert q_factorial(3, "1/2") == mpf(21) / 8
        assert q_factorial(0, "0.9") == 1
    with pytest.raises(DomainError):
        q_factorial(-1, "0.5")


def test_poch_finite_small_cases():
    with mp.workprec(300):
        assert poch_finite("0.5", "0.5", 0) == 1
        assert poch_finite("0.5", "0.5", 2) == mpf(1) / 2 * mpf(3) / 4
        assert poch_finite(1, "0.3", 4) == 0


def test_poch_infinite_against_independent_product():
    with mp.workprec(400):
        for z, q in [("0.5", "0.5"), ("-2", "0.3"), ("0.99", "0.9")]:
            assert rel(poch_infinite(z, q).value, mpmath.qp(mpf(z), mpf(q))) < TOL


def test_q_gamma_values():
    assert rel(q_gamma(1, "0.7"), 1) < TOL
    assert rel(q_gamma(2, "0.7"), 1) < TOL
    assert rel(q_gamma(4, "0.5"), q_factorial(3, "0.5")) < TOL
    # independent evaluations of Gamma_q
    assert rel(q_gamma("2.5", "0.3"), "1.1239476292023018109731280592667692") < TOL
    assert rel(q_gamma("0.5", "0.49"), "1.5670089275545414597198431843475611") < TOL


@pytest.mark.parametrize("x", [0, -1, -4])
def test_q_gamma_poles(x):
    with pytest.raises(PoleError):
        q_gamma(x, "0.5")


def test_q_gamma_negative_non_integer():
    # Gamma_q(x) = Gamma_q(x + 1) / [x]_q continues below zero
    with mp.workprec(DEFAULT_CONTEXT.working_prec):
        for x in ("-0.5", "-2.25"):
            assert rel(q_gamma(x, "0.6"), q_gamma(big(x) + 1, "0.6") / q_int(x, "0.6")) < TOL


def test_pole_index():
    assert pole_index(mpf(-3)) == 3
    assert pole_index(mpf(0)) == 0
    assert pole_index(mpf("-2.5")) is None
    assert pole_index(mpf(1)) is None
    assert pole_index(-3 + mpf(2) ** -200) == 3


@pytest.mark.parametrize("q", GRID)
@pytest.mark.parametrize("x", ["0.3", "1.1", "2.5"])
def test_shift_law(x, q):
    with mp.workprec(DEFAULT_CONTEXT.working_prec):
        assert rel(q_gamma(big(x) + 1, q), q_int(x, q) * q_gamma(x, q)) < TOL


@pytest.mark.parametrize("q", GRID)
@pytest.mark.parametrize("x", ["0.5", "1.25"])
@pytest.mark.parametrize("n", [1, 2, 5])
def test_finite_factorial_matches_gamma_ratio(x, n, q):
    with mp.workprec(DEFAULT_CONTEXT.working_prec):
        qv, xv = big(q), big(x)
        lhs = poch_finite(qv**xv, qv, n) / (1 - qv) ** n
        rhs = q_gamma(xv + n, qv) / q_gamma(xv, qv)
    assert rel(lhs, rhs) < TOL


@given(
    x=st.fractions(min_value=Fraction(-5), max_value=Fraction(5), max_denominator=97),
    n=st.integers(min_value=0, max_value=6),
    q=qs,
)
def test_poch_inverse_law(x, n, q):
    with mp.workprec(DEFAULT_CONTEXT.working_prec):
        xv = big(x)
        try:
            prod = poch_general(xv, -n, q) * poch_general(xv - n, n, q)
        except PoleError:
            return
    assert rel(prod, 1) < TOL


@given(
    x=st.fractions(min_value=Fraction(1, 10), max_value=Fraction(6), max_denominator=50),
    n=st.integers(min_value=0, max_value=8),
    q=qs,
)
def test_poch_integer_path_matches_gamma_ratio(x, n, q):
    with mp.workprec(DEFAULT_CONTEXT.working_prec):
        xv = mpf(x.numerator) / x.denominator
        explicit = mpf(1)
        for k in range(n):
            explicit *= q_int(xv + k, q)
        ratio = q_gamma(xv + n, q) / q_gamma(xv, q)
        fast = poch_general(xv, n, q)
    assert rel(fast, explicit) < TOL
    assert rel(fast, ratio) < TOL


def test_poch_general_pole_handling():
    # 1/Gamma vanishes at the base pole while Gamma(x + alpha) is finite
    assert poch_general(0, "0.5", "0.5") == 0
    with pytest.raises(PoleError):
        poch_general("0.5", "-0.5", "0.5")
    assert poch_general(-1, "-1.5", "0.5") == 0
    with pytest.raises(PoleError):
        poch_general(1, -1, "0.5")  # 1 / [0]_q
    # integer orders pass straight through cancelling poles
    with mp.workprec(300):
        assert rel(poch_general(-3, 2, "0.5"), 84) < TOL  # [-3]_q [-2]_q at q = 1/2


@pytest.mark.parametrize("q", GRID)
def test_sin_q_half_is_one(q):
    assert rel(sin_q("1/2", q), 1) < TOL


@pytest.mark.parametrize("q", GRID)
@pytest.mark.parametrize("x", ["0.1", "1/6", "1/3", "0.45"])
def test_sin_q_symmetry(x, q):
    with mp.workprec(DEFAULT_CONTEXT.working_prec):
        assert rel(sin_q(x, q), sin_q(1 - big(x), q)) < TOL


@pytest.mark.parametrize("x", [0, 1, "1.5", "-0.2"])
def test_sin_q_domain(x):
    with pytest.raises(DomainError):
        sin_q(x, "0.5")


@pytest.mark.parametrize("q", [0, 1, "1.5", "-0.5"])
def test_base_domain(q):
    with pytest.raises(DomainError):
        pi_q(q)
    with pytest.raises(DomainError):
        q_gamma("0.5", q)


def test_pi_q_value():
    assert rel(pi_q("0.5"), "1.6996350531822820939173388395374808") < TOL
    res = pi_q_result("0.5")
    assert res.tail_bound > 0 and res.terms_used > 0


@pytest.mark.parametrize("q", GRID)
@pytest.mark.parametrize("x", ["0.1", "1/3", "1/2", "2/3", "0.9"])
def test_reflection_formula(x, q):
    with mp.workprec(DEFAULT_CONTEXT.working_prec):
        xv = big(x)
        scale = abs(q_gamma(xv, big(q) ** 2) * q_gamma(1 - xv, big(q) ** 2))
        residual = abs(reflection_residual(xv, q))
    assert residual <= TOL * scale


def test_half_reflection_gives_gamma_half_squared():
    # Gamma_{q^2}(1/2)^2 = pi_q q^(-1/4)
    with mp.workprec(DEFAULT_CONTEXT.working_prec):
        q = big("0.3")
        assert rel(q_gamma("0.5", q * q) ** 2, pi_q(q) / mpmath.root(q, 4)) < TOL


def test_classical_limits():
    ctx = PrecisionContext(precision_bits=512, max_terms=1_000_000)
    with mp.workprec(ctx.working_prec):
        errs = [abs(pi_q(1 - mpf(2) ** -k, ctx) - mpmath.pi) for k in range(2, 10)]
        assert all(b < a for a, b in zip(errs, errs[1:]))
        # relative error is under 1e-2 by k = 8; the absolute error only by k = 9
        assert errs[6] / mpmath.pi < mpf("1e-2")
        assert rel(errs[6], "0.012263856823894481941") < mpf("1e-18")
        assert errs[7] < mpf("1e-2")
        # sin_q approaches sin faster than any power of 1 - q: already tiny at k = 2
        assert abs(sin_q(mpf(1) / 3, mpf("0.75"), ctx) - mpmath.sqrt(3) / 2) < mpf("1e-25")


def test_precision_setting_is_restored():
    before = mp.prec
    pi_q("0.7", PrecisionContext(precision_bits=512))
    assert mp.prec == before
