"""Exact Fibonacci/Lucas arithmetic, Zeckendorf encoding and perfect-power detection."""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence


def _fib_pair(n: int) -> tuple[int, int]:
    # fast doubling: returns (F_n, F_{n+1})
    if n == 0:
        return 0, 1
    a, b = _fib_pair(n >> 1)
    c = a * (2 * b - a)
    d = a * a + b * b
    if n & 1:
        return d, c + d
    return c, d


def fib(n: int) -> int:
    """Return F_n with F_0 = 0, F_1 = 1."""
    if n < 0:
        raise ValueError(f"fib: index must be non-negative, got {n}")
    return _fib_pair(n)[0]


def lucas(n: int) -> int:
    """Return L_n with L_0 = 2, L_1 = 1."""
    if n < 0:
        raise ValueError(f"lucas: index must be non-negative, got {n}")
    f, g = _fib_pair(n)
    # L_n = F_{n-1} + F_{n+1} = 2 F_{n+1} - F_n
    return 2 * g - f


@lru_cache(maxsize=None)
def _fib_table(limit_bits: int) -> tuple[int, ...]:
    # F_0 .. first index whose value exceeds 2**limit_bits
    table = [0, 1]
    bound = 1 << limit_bits
    while table[-1] <= bound:
        table.append(table[-1] + table[-2])
    return tuple(table)


@dataclass(frozen=True)
class ZeckendorfRep:
    """Strictly decreasing Fibonacci indices with gaps >= 2 and minimum index >= 2."""

    indices: tuple[int, ...]

    def __post_init__(self) -> None:
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        if not idx:
            raise ValueError("ZeckendorfRep needs at least one index")
        if idx[-1] < 2:
            raise ValueError(f"smallest index must be >= 2, got {idx[-1]}")
        for hi, lo in zip(idx, idx[1:]):
            if hi - lo < 2:
                raise ValueError(f"indices {hi}, {lo} are not separated by a gap >= 2")

    @property
    def k(self) -> int:
        return len(self.indices)

    @property
    def n1(self) -> int:
        return self.indices[0]

    def decode(self) -> int:
        return decode(self.indices)

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)


def decode(indices: Sequence[int]) -> int:
    """Sum of F_i over the given indices (no Zeckendorf constraints checked)."""
    small = _fib_table(64)
    return sum(small[i] if 0 <= i < len(small) else fib(i) for i in indices)


def zeckendorf(y: int) -> ZeckendorfRep:
    """Greedy Zeckendorf representation of y >= 1."""
    if y <= 0:
        raise ValueError(f"zeckendorf: y must be >= 1, got {y}")
    table = _fib_table(max(64, y.bit_length() + 2))
    i = bisect_right(table, y) - 1
    out = []
    rest = y
    while rest:
        while table[i] > rest:
            i -= 1
        out.append(i)
        rest -= table[i]
        # the next index can't be adjacent
        i -= 2
    return ZeckendorfRep(tuple(out))


def hamming_weight(y: int) -> int:
    """Number of terms in the Zeckendorf representation of y."""
    return len(zeckendorf(y).indices)


def iroot(s: int, a: int) -> int:
    """floor(s ** (1/a)) for s >= 0, a >= 1, by integer Newton iteration."""
    if s < 0 or a < 1:
        raise ValueError("iroot needs s >= 0 and a >= 1")
    if a == 1 or s < 2:
        return s
    if a == 2:
        return math.isqrt(s)
    bits = s.bit_length()
    if a >= bits:
        return 1
    # seed from above: 2^ceil(bits/a) > s^(1/a)
    x = 1 << -(-bits // a)
    while True:
        y = ((a - 1) * x + s // x ** (a - 1)) // a
        if y >= x:
            return x
        x = y


def _small_primes(limit: int) -> list[int]:
    if limit < 2:
        return []
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [p for p in range(limit + 1) if sieve[p]]


# quadratic residues mod 64/63/65/11 reject most non-squares cheaply
_SQ64 = frozenset(x * x % 64 for x in range(64))
_SQ63 = frozenset(x * x % 63 for x in range(63))
_SQ65 = frozenset(x * x % 65 for x in range(65))
_SQ11 = frozenset(x * x % 11 for x in range(11))


def _is_square_candidate(s: int) -> bool:
    return s % 64 in _SQ64 and s % 63 in _SQ63 and s % 65 in _SQ65 and s % 11 in _SQ11


def _prime_power_root(s: int) -> Optional[tuple[int, int]]:
    # some (r, p) with p prime and r**p == s, trying p in increasing order
    for p in _small_primes(s.bit_length()):
        if p == 2 and not _is_square_candidate(s):
            continue
        r = iroot(s, p)
        if r ** p == s:
            return r, p
    return None


def perfect_power(s: int) -> Optional[tuple[int, int]]:
    """Return (y, a) with y**a == s and a >= 2 maximal, or None.

    0 and 1 are powers with every exponent; they are reported as (0, 2) and (1, 2).
    """
    if s < 0:
        raise ValueError(f"perfect_power: s must be >= 0, got {s}")
    if s < 2:
        return s, 2
    found = _prime_power_root(s)
    if found is None:
        return None
    r, p = found
    a = p
    # r**p == s; keep extracting prime roots of r so the exponent is maximal
    while r >= 4:
        nxt = _prime_power_root(r)
        if nxt is None:
            break
        r, q = nxt
        a *= q
    return r, a
