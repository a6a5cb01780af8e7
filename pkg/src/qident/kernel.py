"""q-integers, q-shifted factorials, the q-gamma function, sin_q and pi_q.

The base is always an explicit argument.  Identities written over base q^2
call these functions with ``q**2``; nothing here squares a base on the
caller's behalf, except ``sin_q`` and ``pi_q`` whose definitions are
themselves products over base q^2.

Each composite function has a ``*_result`` twin returning a
:class:`~qident.numeric.SumResult` whose ``tail_bound`` accumulates the
truncation bounds of the infinite products it used.
"""

from __future__ import annotations

from functools import lru_cache

import mpmath
from mpmath import mp, mpf

from .errors import DomainError, PoleError
from .numeric import (
    DEFAULT_CONTEXT,
    PrecisionContext,
    SumResult,
    combine,
    tail_bounded_product,
    to_big,
)

__all__ = [
    "q_int",
    "q_factorial",
    "poch_finite",
    "poch_infinite",
    "q_gamma",
    "q_gamma_result",
    "poch_general",
    "poch_general_result",
    "sin_q",
    "sin_q_result",
    "pi_q",
    "pi_q_result",
    "reflection_residual",
    "check_base",
    "pole_index",
]


def check_base(q) -> mpf:
    q = to_big(q)
    if not 0 < q < 1:
        raise DomainError(f"base must lie in (0, 1), got {q}")
    return q


def _qpow(q, x):
    return mpmath.exp(x * mpmath.log(q))


def _one_minus_qpow(q, x):
    # 1 - q^x without cancellation for small |x|
    return -mpmath.expm1(x * mpmath.log(q))


def pole_index(x, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Return m >= 0 if x is within the pole threshold of -m, else None."""
    m = mpmath.nint(x)
    if m <= 0 and abs(x - m) <= ctx.pole_threshold:
        return int(-m)
    return None


def q_int(z, q, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """[z]_q = (1 - q^z) / (1 - q)."""
    with mp.workprec(ctx.working_prec):
        q = check_base(q)
        z = to_big(z)
        return _one_minus_qpow(q, z) / (1 - q)


def q_factorial(n: int, q, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    if n < 0:
        raise DomainError(f"q-factorial needs n >= 0, got {n}")
    with mp.workprec(ctx.working_prec):
        q = check_base(q)
        out = mpf(1)
        qk = mpf(1)
        for _ in range(n):
            qk *= q
            out *= (1 - qk) / (1 - q)
        return out


def poch_finite(z, q, n: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """(z; q)_n, the product of (1 - z q^k) for k < n."""
    if n < 0:
        raise DomainError(f"finite q-shifted factorial needs n >= 0, got {n}")
    with mp.workprec(ctx.working_prec):
        q = check_base(q)
        z = to_big(z)
        out = mpf(1)
        zq = z
        for _ in range(n):
            out *= 1 - zq
            zq *= q
        return out


@lru_cache(maxsize=8192)
def _cached_product(z: mpf, r: mpf, ctx: PrecisionContext) -> SumResult:
    return tail_bounded_product(z, r, ctx)


def poch_infinite(z, q, ctx: PrecisionContext = DEFAULT_CONTEXT) -> SumResult:
    """(z; q)_inf; every factor 1 - z q^k must be positive."""
    with mp.workprec(ctx.working_prec):
        return _cached_product(to_big(z), check_base(q), ctx)


def _q_gamma(x: mpf, q: mpf, ctx: PrecisionContext) -> SumResult:
    m = pole_index(x, ctx)
    if m is not None:
        raise PoleError(f"q-gamma has a pole at x = {-m}", argument=-m)
    # shift into x > 0 so (q^x; q)_inf has positive factors
    divisor = mpf(1)
    while x <= 0:
        divisor *= _one_minus_qpow(q, x) / (1 - q)
        x += 1
    num = poch_infinite(q, q, ctx)
    den = poch_infinite(_qpow(q, x), q, ctx)
    value = num.value / den.value * _qpow(1 - q, 1 - x) / divisor
    return combine(value, [num, den], [1, -1])


def q_gamma_result(x, q, ctx: PrecisionContext = DEFAULT_CONTEXT) -> SumResult:
    with mp.workprec(ctx.working_prec):
        return _q_gamma(to_big(x), check_base(q), ctx)


def q_gamma(x, q, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """Gamma_q(x) = (q;q)_inf / (q^x;q)_inf * (1-q)^(1-x)."""
    return q_gamma_result(x, q, ctx).value


def _is_integer(x: mpf) -> bool:
    return mpmath.isint(x)


def poch_general_result(x, alpha, q, ctx: PrecisionContext = DEFAULT_CONTEXT) -> SumResult:
    with mp.workprec(ctx.working_prec):
        q = check_base(q)
        x = to_big(x)
        alpha = to_big(alpha)
        if _is_integer(alpha):
            n = int(alpha)
            if n >= 0:
                value = mpf(1)
                for k in range(n):
                    value *= _one_minus_qpow(q, x + k) / (1 - q)
                return SumResult(value, 0, mpf(0), True)
            n = -n
            den = mpf(1)
            for k in range(n):
                if pole_index(x - n + k, ctx) == 0:
                    raise PoleError(
                        f"(x|q)_{-n} is singular at x = {mpmath.nstr(x, 10)}",
                        argument=x - n + k,
                    )
                den *= _one_minus_qpow(q, x - n + k)
            return SumResult((1 - q) ** n / den, 0, mpf(0), True)
        top = x + alpha
        top_pole = pole_index(top, ctx)
        if pole_index(x, ctx) is not None:
            if top_pole is not None:
                raise PoleError("both gamma arguments sit on poles", argument=top)
            # 1/Gamma_q(x) vanishes at a pole
            return SumResult(mpf(0), 0, mpf(0), True)
        if top_pole is not None:
            raise PoleError(
                f"Gamma_q pole at x + alpha = {-top_pole}", argument=-top_pole
            )
        g_top = _q_gamma(top, q, ctx)
        g_bot = _q_gamma(x, q, ctx)
        return combine(g_top.value / g_bot.value, [g_top, g_bot], [1, -1])


def poch_general(x, alpha, q, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """(x|q)_alpha = Gamma_q(x + alpha) / Gamma_q(x).

    Integer orders take exact finite-product routes, which stay valid where
    the gamma ratio has cancelling poles.
    """
    return poch_general_result(x, alpha, q, ctx).value


def sin_q_result(x, q, ctx: PrecisionContext = DEFAULT_CONTEXT) -> SumResult:
    with mp.workprec(ctx.working_prec):
        q = check_base(q)
        x = to_big(x)
        if not 0 < x < 1:
            raise DomainError(f"sin_q is implemented for 0 < x < 1, got {x}")
        q2 = q * q
        a = poch_infinite(_qpow(q, 2 - 2 * x), q2, ctx)
        b = poch_infinite(_qpow(q, 2 * x), q2, ctx)
        c = poch_infinite(q, q2, ctx)
        value = _qpow(q, (x - mpf(1) / 2) ** 2) * a.value * b.value / c.value**2
        return combine(value, [a, b, c], [1, 1, -2])


def sin_q(x, q, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """Gosper's q-sine, returning sin_q(pi x) for 0 < x < 1."""
    return sin_q_result(x, q, ctx).value


def pi_q_result(q, ctx: PrecisionContext = DEFAULT_CONTEXT) -> SumResult:
    with mp.workprec(ctx.working_prec):
        q = check_base(q)
        q2 = q * q
        even = poch_infinite(q2, q2, ctx)
        odd = poch_infinite(q, q2, ctx)
        value = (1 - q2) * mpmath.root(q, 4) * even.value**2 / odd.value**2
        return combine(value, [even, odd], [2, -2])


def pi_q(q, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """Gosper's q-analogue of pi."""
    return pi_q_result(q, ctx).value


def reflection_residual(x, q, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """Gamma_{q^2}(x) Gamma_{q^2}(1-x) - pi_q / sin_q(pi x) * q^(x(x-1))."""
    with mp.workprec(ctx.working_prec):
        q = check_base(q)
        x = to_big(x)
        q2 = q * q
        lhs = q_gamma(x, q2, ctx) * q_gamma(1 - x, q2, ctx)
        rhs = pi_q(q, ctx) / sin_q(x, q, ctx) * _qpow(q, x * (x - 1))
        return lhs - rhs
