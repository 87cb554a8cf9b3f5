"""Brute-force enumeration of F_n + F_m = y^a at desk scale, and the solution census."""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from fibpow.fib_core import fib, hamming_weight, perfect_power, zeckendorf
from fibpow.linforms import InstanceAB
from fibpow.precision import BigReal, eval_log

KNOWN_CENSUS = 18
KEBLI_CONSTANT = 6 * 10**29
LUCA_PATEL_LIMIT = 36


@dataclass(frozen=True, order=True)
class Solution:
    n: int
    m: int
    y: int
    a: int
    value: int

    def __post_init__(self) -> None:
        if not self.n >= self.m >= 0:
            raise ValueError("expected n >= m >= 0")
        if self.a < 2:
            raise ValueError("expected a >= 2")

    @property
    def parity_nm(self) -> str:
        return "even" if (self.n - self.m) % 2 == 0 else "odd"

    @property
    def k(self) -> Optional[int]:
        return hamming_weight(self.y) if self.y >= 1 else None

    def reverify(self) -> bool:
        """Recheck F_n + F_m = y^a by plain exponentiation and iterative Fibonacci."""
        a, b = 0, 1
        fibs = {}
        for i in range(self.n + 1):
            fibs[i] = a
            a, b = b, a + b
        return fibs[self.n] + fibs[self.m] == pow(self.y, self.a) == self.value

    def record(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "y": str(self.y),
            "a": self.a,
            "value": str(self.value),
            "k": self.k,
            "parity": self.parity_nm,
        }


def _shard(n: int) -> list[Solution]:
    fn = fib(n)
    out = []
    for m in range(n + 1):
        s = fn + fib(m)
        pp = perfect_power(s)
        if pp is not None:
            out.append(Solution(n, m, pp[0], pp[1], s))
    return out


def enumerate_solutions(
    max_n: int,
    workers: int = 1,
    checkpoint: Optional[os.PathLike] = None,
) -> list[Solution]:
    """All n >= m >= 0 with n <= max_n and F_n + F_m a perfect power, sorted by (n, m).

    Sharded by n. With ``workers > 1`` shards run in a process pool. A
    ``checkpoint`` file lets an interrupted run resume (see :func:`load_checkpoint`).
    """
    if max_n < 0:
        raise ValueError("max_n must be >= 0")
    done: dict[int, list[Solution]] = {}
    start = 0
    if checkpoint is not None:
        last, sols = load_checkpoint(checkpoint)
        for s in sols:
            if s.n <= max_n:
                done.setdefault(s.n, []).append(s)
        start = last + 1
    todo = list(range(start, max_n + 1))
    if workers > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_shard, todo, chunksize=max(1, len(todo) // (4 * workers)))
            for n, sols in zip(todo, results):
                done[n] = sols
                if checkpoint is not None:
                    _append_checkpoint(checkpoint, n, sols)
    else:
        for n in todo:
            done[n] = _shard(n)
            if checkpoint is not None:
                _append_checkpoint(checkpoint, n, done[n])
    return sorted(itertools.chain.from_iterable(done.values()))


# Solution lists are small; the checkpoint is a plain text log of finished shards.
#   shard <n>
#   sol <n> <m>
def load_checkpoint(path: os.PathLike) -> tuple[int, list[Solution]]:
    p = Path(path)
    if not p.exists():
        return -1, []
    last = -1
    pending: list[Solution] = []
    confirmed: list[Solution] = []
    for line in p.read_text().splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "sol":
            n, m = int(parts[1]), int(parts[2])
            s = fib(n) + fib(m)
            y, a = perfect_power(s)
            pending.append(Solution(n, m, y, a, s))
        elif parts[0] == "shard":
            n = int(parts[1])
            if n != last + 1:
                break
            confirmed += [s for s in pending if s.n == n]
            pending = []
            last = n
    return last, confirmed


def _append_checkpoint(path: os.PathLike, n: int, sols: list[Solution]) -> None:
    with open(path, "a") as fh:
        for s in sols:
            fh.write(f"sol {s.n} {s.m}\n")
        fh.write(f"shard {n}\n")


def enumerate_exhaustive(max_n: int) -> list[Solution]:
    """Second oracle: test each F_n + F_m against every y <= sqrt(s) and a <= log2(s)."""
    out = []
    for n in range(max_n + 1):
        for m in range(n + 1):
            s = fib(n) + fib(m)
            if s < 2:
                out.append(Solution(n, m, s, 2, s))
                continue
            best = None
            for y in range(2, math.isqrt(s) + 1):
                a, power = 1, y
                while power < s:
                    power *= y
                    a += 1
                if power == s:
                    best = (y, a)
                    break  # smallest base has the largest exponent
            if best is not None:
                out.append(Solution(n, m, best[0], best[1], s))
    return sorted(out)


# census --------------------------------------------------------------------------


@dataclass(frozen=True)
class Convention:
    """Which degenerate solutions are counted."""

    include_y01: bool  # y in {0, 1}
    include_n_eq_m: bool
    distinct_values: bool  # count distinct y^a instead of (n, m) pairs

    def admits(self, s: Solution) -> bool:
        if not self.include_y01 and s.y < 2:
            return False
        if not self.include_n_eq_m and s.n == s.m:
            return False
        return True

    def count(self, sols: Iterable[Solution]) -> int:
        kept = [s for s in sols if self.admits(s)]
        if self.distinct_values:
            return len({s.value for s in kept})
        return len(kept)

    def label(self) -> str:
        return (
            f"y01={'yes' if self.include_y01 else 'no'},"
            f"n=m={'yes' if self.include_n_eq_m else 'no'},"
            f"count={'values' if self.distinct_values else 'pairs'}"
        )


CONVENTIONS = tuple(
    Convention(y01, eq, dv) for y01, eq, dv in itertools.product((True, False), repeat=3)
)


@dataclass
class CensusReport:
    max_n: int
    solutions: list
    counts: dict
    matching: list
    parity_ok: bool
    parity_violations: list
    kebli_ok: bool
    kebli_violations: list

    @property
    def census_ok(self) -> bool:
        return bool(self.matching)

    def to_json(self) -> dict:
        return {
            "max_n": self.max_n,
            "solutions": [s.record() for s in self.solutions],
            "counts": self.counts,
            "conventions_matching_18": self.matching,
            "parity_ok": self.parity_ok,
            "kebli_ok": self.kebli_ok,
        }


def kebli_holds(s: Solution, prec: int = 64) -> bool:
    """a < n < 6e29 (log y)^4, certified, for y >= 2."""
    if s.y < 2:
        return True
    if not s.a < s.n:
        return False
    rhs = KEBLI_CONSTANT * eval_log(s.y, prec) ** 4
    return BigReal.exact(s.n, prec).certainly_lt(rhs)


def census_check(max_n: int = 60, solutions: Optional[list[Solution]] = None, workers: int = 1) -> CensusReport:
    """Count solutions under every convention and compare against the 18 known ones."""
    if max_n < LUCA_PATEL_LIMIT:
        raise ValueError("the census needs max_n >= 36")
    sols = solutions if solutions is not None else enumerate_solutions(max_n, workers=workers)
    counts = {conv.label(): conv.count(sols) for conv in CONVENTIONS}
    matching = [label for label, c in counts.items() if c == KNOWN_CENSUS]
    parity_bad = [s for s in sols if s.parity_nm == "even" and s.n > LUCA_PATEL_LIMIT]
    kebli_bad = [s for s in sols if not kebli_holds(s)]
    return CensusReport(
        max_n=max_n,
        solutions=sols,
        counts=counts,
        matching=matching,
        parity_ok=not parity_bad,
        parity_violations=parity_bad,
        kebli_ok=not kebli_bad,
        kebli_violations=kebli_bad,
    )


def instance_of(sol: Solution) -> InstanceAB:
    if sol.y <= 1:
        raise ValueError("linear forms need y >= 2")
    return InstanceAB(y=sol.y, a=sol.a, rep=zeckendorf(sol.y), n=sol.n, m=sol.m)


__all__ = [
    "CONVENTIONS",
    "CensusReport",
    "Convention",
    "KNOWN_CENSUS",
    "Solution",
    "census_check",
    "enumerate_exhaustive",
    "enumerate_solutions",
    "instance_of",
    "kebli_holds",
    "load_checkpoint",
]
