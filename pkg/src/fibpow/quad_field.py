"""Exact arithmetic in Z[alpha], alpha = (1 + sqrt 5)/2.

Elements are stored as ``p + q*alpha`` with integer coordinates. The ring is
the full ring of integers of Q(sqrt 5), alpha is a unit and
sqrt5 = 2*alpha - 1 generates the ramified prime above 5.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from fibpow.fib_core import fib


@dataclass(frozen=True)
class QuadInt:
    """p + q*alpha with alpha**2 = alpha + 1."""

    p: int
    q: int = 0

    @staticmethod
    def _lift(other) -> "QuadInt":
        if isinstance(other, QuadInt):
            return other
        if isinstance(other, int):
            return QuadInt(other, 0)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return QuadInt(self.p + other.p, self.q + other.q)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return QuadInt(self.p - other.p, self.q - other.q)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self) -> "QuadInt":
        return QuadInt(-self.p, -self.q)

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        p1, q1, p2, q2 = self.p, self.q, other.p, other.q
        qq = q1 * q2
        return QuadInt(p1 * p2 + qq, p1 * q2 + p2 * q1 + qq)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "QuadInt":
        if e < 0:
            inv = self.unit_inverse()
            return inv ** (-e)
        result, base = ONE, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conjugate(self) -> "QuadInt":
        """Image under alpha -> beta = 1 - alpha."""
        return QuadInt(self.p + self.q, -self.q)

    def norm(self) -> int:
        return norm(self)

    def trace(self) -> int:
        return 2 * self.p + self.q

    def is_zero(self) -> bool:
        return self.p == 0 and self.q == 0

    def unit_inverse(self) -> "QuadInt":
        n = self.norm()
        if n not in (1, -1):
            raise ValueError(f"{self} is not a unit (norm {n})")
        c = self.conjugate()
        return QuadInt(c.p * n, c.q * n)

    def exact_div(self, other: "QuadInt") -> Optional["QuadInt"]:
        """self / other if the quotient lies in Z[alpha], else None."""
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Z[alpha]")
        t = self * other.conjugate()
        if t.p % n or t.q % n:
            return None
        return QuadInt(t.p // n, t.q // n)

    def __str__(self) -> str:
        sign = "-" if self.q < 0 else "+"
        return f"{self.p} {sign} {abs(self.q)}*alpha"


ZERO = QuadInt(0, 0)
ONE = QuadInt(1, 0)
ALPHA = QuadInt(0, 1)
BETA = QuadInt(1, -1)
ALPHA_INV = QuadInt(-1, 1)
SQRT5 = QuadInt(-1, 2)


def alpha_pow(x: int) -> QuadInt:
    """alpha**x exactly; alpha**x = F_{x-1} + F_x alpha for x >= 1.

    Negative exponents are accepted (alpha is a unit).
    """
    if x >= 1:
        return QuadInt(fib(x - 1), fib(x))
    if x == 0:
        return ONE
    return ALPHA_INV ** (-x)


def norm(z: QuadInt) -> int:
    """N(p + q alpha) = (p + q alpha)(p + q beta) = p^2 + pq - q^2."""
    return z.p * z.p + z.p * z.q - z.q * z.q


def _v5(n: int) -> int:
    e = 0
    while n % 5 == 0:
        n //= 5
        e += 1
    return e


def v_sqrt5(z: QuadInt) -> int:
    """Exponent of the prime sqrt5 in z, normalised by v(sqrt5) = 1."""
    if z.is_zero():
        raise ValueError("v_sqrt5 of zero is undefined")
    e = 0
    w = z
    while True:
        nxt = w.exact_div(SQRT5)
        if nxt is None:
            break
        w = nxt
        e += 1
    # (sqrt5) is the only prime over 5 and has residue degree 1
    assert e == _v5(abs(norm(z))), "sqrt5 valuation disagrees with the norm"
    return e


# non-vanishing of the eliminated forms --------------------------------------


@dataclass(frozen=True)
class NonvanishingCertificate:
    """Why a*Lambda_A - Lambda_B cannot vanish.

    The coefficient of log sqrt5 is a - 1; the only logarithm whose argument
    may be divisible by sqrt5 carries coefficient -a, so cancelling sqrt5
    would need (a - 1) = a*v for an integer v, impossible since
    (a - 1) mod a != 0.
    """

    ell: int
    a: int
    residue: int  # (a - 1) mod a
    eta4_unit_at_sqrt5: Optional[bool] = None
    eta3_valuation: Optional[int] = None
    reason: str = ""

    @property
    def valid(self) -> bool:
        ok = self.residue != 0
        if self.eta4_unit_at_sqrt5 is not None:
            ok = ok and self.eta4_unit_at_sqrt5
        if self.eta3_valuation is not None:
            ok = ok and (self.a - 1) - self.a * self.eta3_valuation != 0
        return ok


@dataclass(frozen=True)
class ParityBranch:
    """n - m even: the form is not handled by valuation; n <= 36 holds by Luca-Patel."""

    ell: int
    a: int
    n: Optional[int] = None
    luca_patel_limit: int = 36

    @property
    def consistent(self) -> Optional[bool]:
        if self.n is None:
            return None
        return self.n <= self.luca_patel_limit


def nonvanishing_certificate(
    ell: int,
    a: int,
    parity_nm: Union[str, int],
    with_eta4: bool = True,
    n_minus_m: Optional[int] = None,
    indices: Optional[tuple[int, ...]] = None,
    n: Optional[int] = None,
) -> Union[NonvanishingCertificate, ParityBranch]:
    """Certificate that Lambda*_{A ell} / Lambda*_{B ell} is non-zero, or the parity branch.

    ``parity_nm`` is "odd"/"even" (or the integer n - m). ``with_eta4`` is
    False for the A-column forms, which carry no log(alpha^(n-m) + 1) term.
    When concrete ``n_minus_m`` / ``indices`` are given the valuations are
    computed, not just argued.
    """
    if a < 2:
        raise ValueError("exponent a must be >= 2")
    if isinstance(parity_nm, int):
        odd = parity_nm % 2 == 1
    else:
        if parity_nm not in ("odd", "even"):
            raise ValueError(f"parity must be 'odd' or 'even', got {parity_nm!r}")
        odd = parity_nm == "odd"
    if with_eta4 and not odd:
        return ParityBranch(ell=ell, a=a, n=n)
    eta4_unit = None
    if with_eta4 and n_minus_m is not None:
        eta4_unit = v_sqrt5(alpha_pow(n_minus_m) + 1) == 0
    eta3_val = None
    if indices is not None:
        eta3_val = v_sqrt5(eta3(indices, ell))
    reason = "(a-1) log sqrt5 cannot cancel: (a-1) mod a != 0"
    if with_eta4:
        reason += "; alpha^(n-m)+1 is prime to sqrt5 for odd n-m (norm is a Lucas number)"
    return NonvanishingCertificate(
        ell=ell,
        a=a,
        residue=(a - 1) % a,
        eta4_unit_at_sqrt5=eta4_unit,
        eta3_valuation=eta3_val,
        reason=reason,
    )


def eta3(indices, ell: int) -> QuadInt:
    """1 + alpha^(n_2 - n_1) + ... + alpha^(n_ell - n_1) as an element of Z[alpha]."""
    n1 = indices[0]
    total = ONE
    for ni in indices[1:ell]:
        total = total + alpha_pow(ni - n1)
    return total


def eta4(n_minus_m: int) -> QuadInt:
    return alpha_pow(n_minus_m) + 1


# heights ----------------------------------------------------------------------


@dataclass(frozen=True)
class HeightBound:
    """Certified upper bound for an absolute logarithmic height (natural log)."""

    value: Fraction
    matveev_a: Fraction = field(default=Fraction(0))

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", Fraction(self.value))
        object.__setattr__(self, "matveev_a", Fraction(self.matveev_a))
        if self.value < 0:
            raise ValueError("height bound must be non-negative")


def height_bound_eta3(k: int, t_k) -> HeightBound:
    """h(1 + alpha^(n_2-n_1) + ... + alpha^(n_k-n_1)) <= k*T_k; Matveev A_3 = 2 k T_k."""
    t_k = Fraction(t_k)
    if k < 1 or t_k < 1:
        raise ValueError("need k >= 1 and T_k >= 1")
    value = k * t_k
    return HeightBound(value, 2 * value)


def height_bound_eta4(s) -> HeightBound:
    """h(alpha^(n-m) + 1) <= S for S >= n - m; Matveev A_4 = 2 S."""
    s = Fraction(s)
    if s < 0:
        raise ValueError("S must be non-negative")
    return HeightBound(s, 2 * s)


__all__ = [
    "ALPHA",
    "BETA",
    "HeightBound",
    "NonvanishingCertificate",
    "ONE",
    "ParityBranch",
    "QuadInt",
    "SQRT5",
    "alpha_pow",
    "eta3",
    "eta4",
    "height_bound_eta3",
    "height_bound_eta4",
    "nonvanishing_certificate",
    "norm",
    "v_sqrt5",
]
