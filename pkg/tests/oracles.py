"""Independent reference implementations used only by the tests.

Nothing here imports fibpow's arithmetic: Fibonacci numbers come from plain
iteration, logarithms and roots from mpmath at generous precision, minimal
polynomials from sympy.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import mpmath
import sympy


@lru_cache(maxsize=None)
def fib_list(limit: int) -> tuple[int, ...]:
    out = [0, 1]
    while len(out) <= limit:
        out.append(out[-1] + out[-2])
    return tuple(out[: limit + 1])


def fib_iter(n: int) -> int:
    return fib_list(n)[n]


def lucas_iter(n: int) -> int:
    a, b = 2, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def greedy_zeckendorf(y: int) -> list[int]:
    fibs = fib_list(100)
    out = []
    i = max(j for j in range(2, 101) if fibs[j] <= y)
    while y:
        while fibs[i] > y:
            i -= 1
        out.append(i)
        y -= fibs[i]
        i -= 1
    return out


def min_fib_terms(limit: int) -> list[int]:
    """Fewest Fibonacci numbers (index >= 2, repetition allowed) summing to each value."""
    coins = [f for f in fib_list(40)[2:] if f <= limit]
    best = [0] + [limit + 1] * limit
    for v in range(1, limit + 1):
        best[v] = 1 + min(best[v - c] for c in coins if c <= v)
    return best


def mp_log(x, dps: int = 60):
    with mpmath.workdps(dps):
        if isinstance(x, Fraction):
            return mpmath.log(mpmath.mpf(x.numerator) / x.denominator)
        return mpmath.log(x)


def to_fraction(v) -> Fraction:
    """Exact value of an mpf."""
    sign, man, exp, _ = v._mpf_
    value = Fraction(int(man)) * Fraction(2) ** exp
    return -value if sign else value


def quad_value(p: int, q: int, dps: int = 60):
    with mpmath.workdps(dps):
        return p + q * (1 + mpmath.sqrt(5)) / 2


def exact_height(expr: sympy.Expr, dps: int = 80):
    """Absolute logarithmic height from the minimal polynomial over Q."""
    x = sympy.Symbol("x")
    expr = sympy.radsimp(sympy.expand(expr))
    poly = sympy.Poly(sympy.minimal_polynomial(expr, x), x)
    coeffs = [int(c) for c in poly.all_coeffs()]
    with mpmath.workdps(dps):
        roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=4 * dps)
        total = mpmath.log(abs(coeffs[0]))
        for r in roots:
            total += mpmath.log(max(1, abs(r)))
        return total / poly.degree()


def golden():
    return (1 + sympy.sqrt(5)) / 2


def plain_fixed_point(kebli: int, candidates, n0: int = 10, dps: int = 3000, cap: int = 10_000) -> tuple[int, int]:
    """Iterate n <- ceil(kebli * max_i (c_i (log n)^x_i)^4) from n0 until it stops moving.

    Returns (n, steps). ``candidates`` holds (c, x) pairs.
    """
    n = n0
    with mpmath.workdps(dps):
        for step in range(1, cap + 1):
            ln = mpmath.log(n)
            inner = max(mpmath.mpf(int(c)) * ln**x for c, x in candidates)
            nxt = int(mpmath.ceil(kebli * inner**4))
            if nxt == n:
                return n, step
            n = nxt
    raise RuntimeError("no fixed point within the cap")


def exhaustive_powers(max_n: int) -> list[tuple[int, int, int, int]]:
    """(n, m, y, a) with F_n + F_m = y^a, a maximal, by trying every base."""
    fibs = fib_list(max_n)
    out = []
    for n in range(max_n + 1):
        for m in range(n + 1):
            s = fibs[n] + fibs[m]
            if s < 2:
                out.append((n, m, s, 2))
                continue
            for a in range(s.bit_length(), 1, -1):
                y, exact = sympy.integer_nthroot(s, a)
                if exact:
                    out.append((n, m, int(y), a))
                    break
    return out
