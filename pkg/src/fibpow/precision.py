"""Rigorous real arithmetic on enclosures.

A :class:`BigReal` is a closed interval ``[lo, hi]`` of binary floating point
numbers guaranteed to contain the true value. Every operation rounds outward
(via mpmath's interval kernels), so results stay enclosures. Precision is an
explicit per-value parameter; there is no global precision state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Union

from mpmath.libmp import (
    fone,
    from_int,
    from_rational,
    fzero,
    mpf_cmp,
    mpf_sub,
    round_ceiling,
    round_floor,
    to_int,
    to_man_exp,
    to_str,
)
from mpmath.libmp import libmpi

DEFAULT_PRECISION = 64
PRECISION_CAP = 1 << 16

Number = Union[int, Fraction]


class PreconditionError(ValueError):
    """An enclosure could not certify a required precondition."""


def _mpf_to_fraction(x) -> Fraction:
    # to_man_exp drops the sign, so take it from the raw tuple
    man, exp = to_man_exp(x)
    if x[0]:
        man = -man
    if exp >= 0:
        return Fraction(man << exp)
    return Fraction(man, 1 << -exp)


def _rational_interval(value: Number, prec: int):
    value = Fraction(value)
    if value.denominator == 1:
        lo = from_int(value.numerator, prec, round_floor)
        hi = from_int(value.numerator, prec, round_ceiling)
    else:
        lo = from_rational(value.numerator, value.denominator, prec, round_floor)
        hi = from_rational(value.numerator, value.denominator, prec, round_ceiling)
    return lo, hi


@dataclass(frozen=True)
class BigReal:
    """Certified enclosure ``[lo, hi]`` at ``prec`` bits of working precision."""

    lo: tuple
    hi: tuple
    prec: int = DEFAULT_PRECISION

    # construction -------------------------------------------------------

    @classmethod
    def exact(cls, value: Number, prec: int = DEFAULT_PRECISION) -> "BigReal":
        lo, hi = _rational_interval(value, prec)
        return cls(lo, hi, prec)

    @classmethod
    def from_bounds(cls, lo: Number, hi: Number, prec: int = DEFAULT_PRECISION) -> "BigReal":
        if Fraction(lo) > Fraction(hi):
            raise ValueError("lower bound exceeds upper bound")
        return cls(_rational_interval(lo, prec)[0], _rational_interval(hi, prec)[1], prec)

    def _coerce(self, other) -> "BigReal":
        if isinstance(other, BigReal):
            return other
        if isinstance(other, (int, Fraction)):
            return BigReal.exact(other, self.prec)
        return NotImplemented

    def _wrap(self, iv, other: Optional["BigReal"] = None) -> "BigReal":
        prec = self.prec if other is None else max(self.prec, other.prec)
        return BigReal(iv[0], iv[1], prec)

    @property
    def _iv(self):
        return (self.lo, self.hi)

    # arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prec = max(self.prec, other.prec)
        return self._wrap(libmpi.mpi_add(self._iv, other._iv, prec), other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prec = max(self.prec, other.prec)
        return self._wrap(libmpi.mpi_sub(self._iv, other._iv, prec), other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prec = max(self.prec, other.prec)
        return self._wrap(libmpi.mpi_mul(self._iv, other._iv, prec), other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.excludes_zero():
            raise ZeroDivisionError("divisor enclosure contains 0")
        prec = max(self.prec, other.prec)
        return self._wrap(libmpi.mpi_div(self._iv, other._iv, prec), other)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __neg__(self) -> "BigReal":
        return BigReal(libmpi.mpi_neg(self._iv)[0], libmpi.mpi_neg(self._iv)[1], self.prec)

    def __abs__(self) -> "BigReal":
        lo, hi = libmpi.mpi_abs(self._iv)
        return BigReal(lo, hi, self.prec)

    def __pow__(self, n: int) -> "BigReal":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return 1 / (self ** (-n))
        return self._wrap(libmpi.mpi_pow_int(self._iv, n, self.prec))

    def log(self) -> "BigReal":
        if mpf_cmp(self.lo, fzero) <= 0:
            raise ValueError("log of an enclosure not certified positive")
        return self._wrap(libmpi.mpi_log(self._iv, self.prec))

    def exp(self) -> "BigReal":
        return self._wrap(libmpi.mpi_exp(self._iv, self.prec))

    def sqrt(self) -> "BigReal":
        if mpf_cmp(self.lo, fzero) < 0:
            raise ValueError("sqrt of an enclosure not certified non-negative")
        return self._wrap(libmpi.mpi_sqrt(self._iv, self.prec))

    def with_prec(self, prec: int) -> "BigReal":
        return BigReal(self.lo, self.hi, prec)

    def hull(self, other: "BigReal") -> "BigReal":
        lo = self.lo if mpf_cmp(self.lo, other.lo) <= 0 else other.lo
        hi = self.hi if mpf_cmp(self.hi, other.hi) >= 0 else other.hi
        return BigReal(lo, hi, max(self.prec, other.prec))

    def max(self, other: "BigReal") -> "BigReal":
        lo = self.lo if mpf_cmp(self.lo, other.lo) >= 0 else other.lo
        hi = self.hi if mpf_cmp(self.hi, other.hi) >= 0 else other.hi
        return BigReal(lo, hi, max(self.prec, other.prec))

    # queries ------------------------------------------------------------

    @property
    def lower(self) -> Fraction:
        return _mpf_to_fraction(self.lo)

    @property
    def upper(self) -> Fraction:
        return _mpf_to_fraction(self.hi)

    @property
    def mid(self) -> Fraction:
        return (self.lower + self.upper) / 2

    @property
    def rad(self) -> Fraction:
        return (self.upper - self.lower) / 2

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def width_log2(self) -> float:
        """log2 of the enclosure width (-inf for a point)."""
        w = mpf_sub(self.hi, self.lo, 64, round_ceiling)
        if w == fzero:
            return -math.inf
        man, exp = to_man_exp(w)
        return math.log2(man) + exp

    def contains(self, value: Number) -> bool:
        v = BigReal.exact(value, max(self.prec, 2 * DEFAULT_PRECISION))
        if v.lo == v.hi:
            return mpf_cmp(self.lo, v.lo) <= 0 and mpf_cmp(v.hi, self.hi) <= 0
        return self.lower <= Fraction(value) <= self.upper

    def overlaps(self, other: "BigReal") -> bool:
        return mpf_cmp(self.lo, other.hi) <= 0 and mpf_cmp(other.lo, self.hi) <= 0

    def excludes_zero(self) -> bool:
        return mpf_cmp(self.lo, fzero) > 0 or mpf_cmp(self.hi, fzero) < 0

    def certainly_le(self, other) -> bool:
        other = self._coerce(other)
        return mpf_cmp(self.hi, other.lo) <= 0

    def certainly_lt(self, other) -> bool:
        other = self._coerce(other)
        return mpf_cmp(self.hi, other.lo) < 0

    def is_positive(self) -> bool:
        return mpf_cmp(self.lo, fzero) > 0

    def floor(self) -> int:
        return int(to_int(self.lo, round_floor))

    def ceil(self) -> int:
        return int(to_int(self.hi, round_ceiling))

    def __float__(self) -> float:
        return float(self.mid)

    def log10_upper(self) -> float:
        """A float close to (and typically just above) log10 of the upper end."""
        if mpf_cmp(self.hi, fzero) <= 0:
            raise ValueError("log10 of a non-positive upper bound")
        return float(self.with_prec(max(self.prec, 64)).log().upper) / math.log(10)

    def to_str(self, digits: int = 20) -> str:
        mid = libmpi.mpi_mid(self._iv, self.prec + 8)
        return to_str(mid, digits)

    def __repr__(self) -> str:
        return f"BigReal({to_str(self.lo, 20)}, {to_str(self.hi, 20)}, prec={self.prec})"


RealExpr = Callable[[int], BigReal]


def as_expr(x) -> RealExpr:
    """Turn a constant (int, Fraction, BigReal) or callable into a precision -> BigReal map."""
    if callable(x):
        return x
    if isinstance(x, BigReal):
        return lambda prec: x
    value = Fraction(x)
    return lambda prec: BigReal.exact(value, prec)


# constants ----------------------------------------------------------------


@lru_cache(maxsize=64)
def sqrt5(prec: int = DEFAULT_PRECISION) -> BigReal:
    return BigReal.exact(5, prec).sqrt()


@lru_cache(maxsize=64)
def alpha(prec: int = DEFAULT_PRECISION) -> BigReal:
    """The golden ratio (1 + sqrt 5) / 2."""
    return (sqrt5(prec) + 1) / 2


@lru_cache(maxsize=64)
def log_alpha(prec: int = DEFAULT_PRECISION) -> BigReal:
    return alpha(prec + 16).log().with_prec(prec)


@lru_cache(maxsize=64)
def log_sqrt5(prec: int = DEFAULT_PRECISION) -> BigReal:
    return BigReal.exact(5, prec + 8).log().with_prec(prec) / 2


def _embed_quad(p: int, q: int, prec: int) -> BigReal:
    return BigReal.exact(p, prec) + BigReal.exact(q, prec) * alpha(prec)


def _quad_sign(p: int, q: int) -> int:
    # sign of p + q(1 + sqrt5)/2, i.e. of (2p + q) + q sqrt5, exactly
    u, v = 2 * p + q, q
    if v == 0:
        return (u > 0) - (u < 0)
    if u == 0:
        return (v > 0) - (v < 0)
    if (u > 0) == (v > 0):
        return 1 if u > 0 else -1
    # opposite signs: compare u^2 with 5 v^2
    if u * u > 5 * v * v:
        return 1 if u > 0 else -1
    return 1 if v > 0 else -1


def embed(x, prec: int = DEFAULT_PRECISION) -> BigReal:
    """Real enclosure of an int, Fraction, BigReal or QuadInt (alpha -> (1+sqrt5)/2)."""
    if isinstance(x, BigReal):
        return x
    if isinstance(x, (int, Fraction)):
        return BigReal.exact(x, prec)
    if hasattr(x, "p") and hasattr(x, "q"):
        return _embed_quad(int(x.p), int(x.q), prec)
    raise TypeError(f"cannot embed {type(x).__name__}")


def _magnitude_bits(x) -> int:
    # rough bit size of |log x|, used to budget the working precision
    if isinstance(x, (int, Fraction)):
        f = Fraction(x)
        b = max(f.numerator.bit_length(), f.denominator.bit_length())
    else:
        b = max(abs(int(x.p)).bit_length(), abs(int(x.q)).bit_length()) + 1
    return max(1, b).bit_length() + 1


def eval_log(x, prec: int = DEFAULT_PRECISION) -> BigReal:
    """Enclosure of log x with width at most 2**(4 - prec).

    ``x`` may be a positive int, Fraction or QuadInt (embedded through
    alpha -> (1 + sqrt 5)/2). Working precision escalates until the width
    target is met.
    """
    if isinstance(x, BigReal):
        raise TypeError("eval_log takes exact inputs; use BigReal.log() for enclosures")
    if isinstance(x, (int, Fraction)):
        if Fraction(x) <= 0:
            raise ValueError(f"log of non-positive value {x}")
    else:
        if _quad_sign(int(x.p), int(x.q)) <= 0:
            raise ValueError(f"log of non-positive value {x}")
    target = 4 - prec
    work = prec + 8 + _magnitude_bits(x)
    while True:
        v = embed(x, work)
        if v.is_positive():
            out = v.log()
            if out.width_log2() <= target:
                return out.with_prec(prec)
        work *= 2
        if work > 64 * PRECISION_CAP:
            raise ArithmeticError("eval_log: precision escalation did not converge")


def decide_leq(a, b, p_max: int = PRECISION_CAP, p_start: int = DEFAULT_PRECISION) -> Optional[bool]:
    """Decide a <= b for two real expressions by precision escalation.

    Returns True or False once the enclosures separate, None (undecided) if
    the precision cap is reached first. Equal values generally never separate.
    """
    fa, fb = as_expr(a), as_expr(b)
    prec = p_start
    while prec <= p_max:
        va, vb = fa(prec), fb(prec)
        if va.certainly_le(vb):
            return True
        if vb.certainly_lt(va):
            return False
        prec *= 2
    return None


@dataclass(frozen=True)
class LinearisationResult:
    abs_log: BigReal
    bound: BigReal
    certified: bool


def _g_lower(e, prec: int) -> BigReal:
    # 2|e - 1| - |log e| on a point e (raw mpf)
    pt = BigReal(e, e, prec)
    return 2 * abs(pt - 1) - abs(pt.log())


def linearisation_check(x, p_max: int = PRECISION_CAP) -> LinearisationResult:
    """Certify |log x| <= 2|x - 1| given |x - 1| <= 1/2.

    ``x`` is a BigReal or an exact rational. The function
    g(x) = 2|x-1| - |log x| is decreasing on [1/2, 1] and increasing on
    [1, 3/2] with g(1) = 0, so its minimum over the enclosure sits at the
    endpoint nearest 1 (or is 0 when 1 is inside).
    """
    if not isinstance(x, BigReal):
        x = BigReal.exact(x, DEFAULT_PRECISION)
    if not (x.lower >= Fraction(1, 2) and x.upper <= Fraction(3, 2)):
        raise PreconditionError(f"cannot certify |x - 1| <= 0.5 for {x!r}")
    abs_log = abs(x.log())
    bound = 2 * abs(x - 1)
    if x.lower <= 1 <= x.upper:
        return LinearisationResult(abs_log, bound, True)
    nearest = x.lo if mpf_cmp(x.lo, fone) > 0 else x.hi
    prec = max(x.prec, DEFAULT_PRECISION)
    while prec <= p_max:
        g = _g_lower(nearest, prec)
        if mpf_cmp(g.lo, fzero) >= 0:
            return LinearisationResult(abs_log, bound, True)
        if mpf_cmp(g.hi, fzero) < 0:
            return LinearisationResult(abs_log, bound, False)
        prec *= 2
    return LinearisationResult(abs_log, bound, False)


def rational_power_upper(base: Fraction, num: int, den: int, prec: int = DEFAULT_PRECISION) -> BigReal:
    """Enclosure of base ** (num/den) for base > 0."""
    b = BigReal.exact(base, prec + 16)
    return (b.log() * Fraction(num, den)).exp().with_prec(prec)


__all__ = [
    "BigReal",
    "DEFAULT_PRECISION",
    "PRECISION_CAP",
    "PreconditionError",
    "LinearisationResult",
    "alpha",
    "as_expr",
    "decide_leq",
    "embed",
    "eval_log",
    "linearisation_check",
    "log_alpha",
    "log_sqrt5",
    "sqrt5",
]
