"""Matveev's explicit lower bound for linear forms in logarithms, and the step constant C."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from fibpow.precision import DEFAULT_PRECISION, BigReal, eval_log, log_alpha

# 2.1e15, the uniform constant used in every step
STEP_CONSTANT = 21 * 10**14
MATVEEV_FLOOR = Fraction(16, 100)

HeightLike = Union[int, Fraction, BigReal]


@dataclass(frozen=True)
class MatveevParams:
    """t logarithms in a field of degree D; coefficient bound B; height bounds A_i."""

    t: int
    D: int
    B: Fraction
    A: tuple

    def __post_init__(self) -> None:
        if self.t < 1:
            raise ValueError("Matveev's bound needs t >= 1 logarithms")
        if self.D < 1:
            raise ValueError("field degree D must be >= 1")
        object.__setattr__(self, "B", Fraction(self.B))
        if self.B < 1:
            raise ValueError("coefficient bound B must be >= 1")
        a = tuple(self.A)
        if len(a) != self.t:
            raise ValueError(f"expected {self.t} height bounds, got {len(a)}")
        for ai in a:
            low = ai.lower if isinstance(ai, BigReal) else Fraction(ai)
            if low < MATVEEV_FLOOR:
                raise ValueError(f"height bound {ai!r} is below the 0.16 floor")
        object.__setattr__(self, "A", a)


def _as_real(x: HeightLike, prec: int) -> BigReal:
    if isinstance(x, BigReal):
        return x
    return BigReal.exact(Fraction(x), prec)


def _one_plus_log(x: Fraction, prec: int) -> BigReal:
    if x == 1:
        return BigReal.exact(1, prec)
    return 1 + eval_log(Fraction(x), prec)


def matveev_factor(params: MatveevParams, prec: int = DEFAULT_PRECISION) -> BigReal:
    """1.4 * 30^(t+3) * t^4.5 * D^2 (1 + log D)(1 + log B) * A_1 ... A_t (positive)."""
    w = prec + 16
    t = params.t
    out = BigReal.exact(Fraction(14, 10) * 30 ** (t + 3) * t**4 * params.D**2, w)
    out = out * BigReal.exact(t, w).sqrt()
    out = out * _one_plus_log(Fraction(params.D), w)
    out = out * _one_plus_log(params.B, w)
    for ai in params.A:
        out = out * _as_real(ai, w)
    return out.with_prec(prec)


def matveev_lower(params: MatveevParams, prec: int = DEFAULT_PRECISION) -> BigReal:
    """Enclosure of Matveev's lower bound for log|Lambda| (a negative number).

    Only meaningful once Lambda is known to be non-zero.
    """
    return -matveev_factor(params, prec)


def step_instance(n: int, k: int, t_k, s, prec: int = DEFAULT_PRECISION) -> MatveevParams:
    """The four-logarithm instance used for the B-column forms."""
    w = prec + 16
    return MatveevParams(
        t=4,
        D=2,
        B=Fraction(n) ** 2,
        A=(eval_log(5, w), log_alpha(w), Fraction(2 * k) * Fraction(t_k), 2 * Fraction(s)),
    )


def step_constant_product(prec: int = DEFAULT_PRECISION) -> BigReal:
    """1.4 * 30^7 * 4^4.5 * 2^2 (1 + log 2) * 3 * log 5 * 2 * 2."""
    w = prec + 16
    integer_part = Fraction(14, 10) * 30**7 * 2**9 * 2**2 * 3 * 2 * 2
    out = BigReal.exact(integer_part, w)
    out = out * (1 + eval_log(2, w))
    out = out * eval_log(5, w)
    return out.with_prec(prec)


@dataclass(frozen=True)
class StepConstantCertificate:
    C: int
    product: BigReal
    holds: bool

    def __bool__(self) -> bool:
        return self.holds


def step_constant(C: int = STEP_CONSTANT, prec: int = 128, strict: bool = False) -> StepConstantCertificate:
    """Return C together with a certified check that the displayed product is <= C.

    With ``strict`` a failing certificate raises instead of being returned.
    """
    product = step_constant_product(prec)
    holds = product.certainly_le(C)
    if strict and not holds:
        raise ArithmeticError(f"step constant {C} does not dominate product {product!r}")
    return StepConstantCertificate(C=C, product=product, holds=holds)


def step_lower_bound(n: int, k: int, t_k, s, C: int = STEP_CONSTANT, prec: int = DEFAULT_PRECISION) -> BigReal:
    """-C * log n * log alpha * k * T_k * S, the simplified step lower bound."""
    w = prec + 16
    out = BigReal.exact(Fraction(C) * k * Fraction(t_k) * Fraction(s), w)
    out = out * eval_log(n, w) * log_alpha(w)
    return (-out).with_prec(prec)


def sharper_lower(
    coefficients: Sequence[int],
    heights: Sequence[HeightLike],
    D: int = 2,
    prec: int = DEFAULT_PRECISION,
) -> BigReal:
    """Diagnostic: Matveev's bound for a form with the given actual coefficients and heights.

    For two- or three-logarithm forms this is much stronger than the uniform
    step constant. Not used by the certified pipeline.
    """
    B = max(1, max(abs(b) for b in coefficients))
    params = MatveevParams(t=len(heights), D=D, B=Fraction(B), A=tuple(heights))
    return matveev_lower(params, prec)


__all__ = [
    "MATVEEV_FLOOR",
    "MatveevParams",
    "STEP_CONSTANT",
    "StepConstantCertificate",
    "matveev_factor",
    "matveev_lower",
    "step_instance",
    "sharper_lower",
    "step_constant",
    "step_constant_product",
    "step_lower_bound",
]
