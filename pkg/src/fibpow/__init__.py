"""Explicit bounds for perfect powers that are sums of two Fibonacci numbers.

The bound depends only on the Zeckendorf Hamming weight of the base.
"""

from fibpow.fib_core import (
    ZeckendorfRep,
    fib,
    hamming_weight,
    lucas,
    perfect_power,
    zeckendorf,
)

__all__ = [
    "ZeckendorfRep",
    "fib",
    "hamming_weight",
    "lucas",
    "perfect_power",
    "zeckendorf",
]

__version__ = "0.1.0"
