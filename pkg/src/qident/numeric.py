"""Arbitrary-precision scalars and tail-bounded infinite products and sums.

Every real quantity in the package is an :class:`mpmath.mpf` (aliased
``BigReal``).  Precision is carried explicitly by a :class:`PrecisionContext`
and applied with ``mp.workprec`` around each public evaluation, so callers
never need to touch ``mp.prec`` themselves.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import mpmath
from mpmath import mp, mpf

from .errors import DomainError, NonConvergence

BigReal = mpf

__all__ = [
    "BigReal",
    "PrecisionContext",
    "SumResult",
    "DEFAULT_CONTEXT",
    "to_big",
    "parse_exact",
    "tail_bounded_product",
    "tail_bounded_sum",
    "log_error",
    "combine",
]


def parse_exact(text) -> Fraction:
    """Parse an integer, decimal or ``p/q`` literal into an exact Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        return Fraction(repr(text))
    s = str(text).strip()
    if not s:
        raise ValueError("empty numeric literal")
    try:
        if "/" in s:
            num, den = s.split("/", 1)
            return Fraction(int(num.strip()), int(den.strip()))
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational or decimal literal: {text!r}") from exc


def to_big(x) -> mpf:
    """Convert to ``mpf`` at the current working precision.

    Strings and floats are read as the decimal they spell, so ``0.3`` means
    3/10 rather than the nearest binary double.
    """
    if isinstance(x, mpf):
        return x
    if isinstance(x, int):
        return mpf(x)
    frac = parse_exact(x)
    return mpf(frac.numerator) / frac.denominator


@dataclass(frozen=True)
class PrecisionContext:
    precision_bits: int = 256
    rel_tol: mpf = mpf("1e-30")
    max_terms: int = 100_000
    guard_bits: int = 32

    def __post_init__(self):
        if int(self.precision_bits) != self.precision_bits or self.precision_bits < 64:
            raise ValueError("precision_bits must be an integer >= 64")
        if self.max_terms < 16:
            raise ValueError("max_terms must be >= 16")
        if self.guard_bits < 0:
            raise ValueError("guard_bits must be non-negative")
        with mp.workprec(self.precision_bits + self.guard_bits):
            tol = to_big(self.rel_tol)
            if not tol > 0:
                raise ValueError("rel_tol must be positive")
            if tol < mpf(2) ** (-self.precision_bits + 8):
                raise ValueError(
                    f"rel_tol {mpmath.nstr(tol, 5)} is finer than "
                    f"{self.precision_bits}-bit precision can deliver"
                )
        object.__setattr__(self, "rel_tol", tol)

    @property
    def working_prec(self) -> int:
        return self.precision_bits + self.guard_bits

    @property
    def pole_threshold(self) -> mpf:
        return mpf(2) ** (-(self.precision_bits // 2))

    def replace(self, **changes) -> "PrecisionContext":
        return dataclasses.replace(self, **changes)

    def tightened(self, factor: int = 64) -> "PrecisionContext":
        """Same context with ``rel_tol / factor``, floored at what precision allows."""
        floor = mpf(2) ** (-self.precision_bits + 8)
        return self.replace(rel_tol=max(self.rel_tol / factor, floor))


DEFAULT_CONTEXT = PrecisionContext()


@dataclass(frozen=True)
class SumResult:
    """Value of a truncated infinite evaluation with a bound on what was dropped."""

    value: mpf
    terms_used: int
    tail_bound: mpf
    converged: bool = True


def log_error(res: SumResult) -> mpf:
    """Relative error of ``res`` expressed as a bound on |ln(true/value)|."""
    if res.tail_bound == 0:
        return mpf(0)
    if res.value == 0:
        return mpmath.inf
    ratio = res.tail_bound / abs(res.value)
    if ratio >= 1:
        return mpmath.inf
    # |true - v| <= t  =>  |ln(true/v)| <= -ln(1 - t/|v|)
    return -mpmath.log1p(-ratio)


def combine(value, parts, exponents=None, extra_terms=0) -> SumResult:
    """Wrap ``value`` built multiplicatively from ``parts`` with a combined bound.

    ``exponents[i]`` is the power with which ``parts[i]`` enters ``value``
    (negative for divisors).  Log-errors add with absolute exponents.
    """
    if exponents is None:
        exponents = [1] * len(parts)
    total = mpf(0)
    terms = extra_terms
    for part, e in zip(parts, exponents):
        total += abs(e) * log_error(part)
        terms += part.terms_used
    return SumResult(value, terms, abs(value) * mpmath.expm1(total), True)


def tail_bounded_product(z, r, ctx: PrecisionContext = DEFAULT_CONTEXT) -> SumResult:
    """Evaluate prod_{n>=0} (1 - z r^n) with a rigorous remainder bound.

    Truncates at the first N with |z| r^N < 1 and
    ``sum_{n>=N} |z| r^n / (1 - |z| r^N) <= rel_tol / 4``; that sum bounds
    |ln prod_{n>=N}(1 - z r^n)|, and ``tail_bound`` is the matching bound on
    |true - partial|.  Every factor up to N must be positive.
    """
    with mp.workprec(ctx.working_prec):
        z = to_big(z)
        r = to_big(r)
        absr = abs(r)
        if not absr < 1:
            raise DomainError(f"product ratio must satisfy |r| < 1, got {r}")
        eps = ctx.rel_tol / 4
        prod = mpf(1)
        zr = z
        n = 0
        while True:
            a = abs(zr)
            if a < 1:
                log_bound = a / ((1 - absr) * (1 - a))
                if log_bound <= eps:
                    rel = mpmath.expm1(log_bound)
                    if rel <= eps:
                        return SumResult(+prod, n, abs(prod) * rel, True)
            if n >= ctx.max_terms:
                raise NonConvergence(
                    f"product (z={mpmath.nstr(z, 8)}, r={mpmath.nstr(r, 8)}) not within "
                    f"tolerance after {n} factors",
                    terms_used=n,
                )
            factor = 1 - zr
            if factor <= 0:
                raise DomainError(
                    f"factor {n} of the product is {mpmath.nstr(factor, 8)} <= 0 "
                    f"(z={mpmath.nstr(z, 8)}, r={mpmath.nstr(r, 8)})"
                )
            prod *= factor
            zr *= r
            n += 1


def tail_bounded_sum(
    term: Callable[[int], mpf],
    ratio_bound: Callable[[int], Optional[mpf]],
    ctx: PrecisionContext = DEFAULT_CONTEXT,
) -> SumResult:
    """Sum ``term(0) + term(1) + ...`` with a geometric majorant on the tail.

    ``ratio_bound(n)`` must bound |term(m+1)/term(m)| for every m >= n, or
    return None where no such bound is available yet.  Summation stops after
    term N once ``|term(N)| rho / (1 - rho) <= rel_tol/4 * |partial sum|``.
    Terms are requested in ascending order, exactly once each.
    """
    with mp.workprec(ctx.working_prec):
        eps = ctx.rel_tol / 4
        total = mpf(0)
        for n in range(ctx.max_terms):
            t = term(n)
            if not mpmath.isfinite(t):
                raise DomainError(f"term {n} is not finite: {t}")
            total += t
            rho = ratio_bound(n)
            if rho is None or not rho < 1:
                continue
            tail = abs(t) * rho / (1 - rho)
            if tail == 0 or tail <= eps * abs(total):
                return SumResult(+total, n + 1, tail, True)
        raise NonConvergence(
            f"series not within tolerance after {ctx.max_terms} terms",
            terms_used=ctx.max_terms,
        )
