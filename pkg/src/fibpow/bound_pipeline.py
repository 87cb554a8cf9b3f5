"""Step walking over bounds c*(log n)^x and the final numeric solve for n.

Every step of the walk turns previously known bounds into a new bound of the
shape ``c * (log n)**x``. The A-column steps produce R_{l+1} = C l R_l log n;
a crossover at l0 produces S_{l0} and then the B-column steps produce
T_{l+1} = C l S T_l log n. The final bound for n_1 is combined with
n < 6e29 (log y)^4 and log y < n_1 into n < 6e29 * T_{k+1}(log n)^4, which is
then solved for n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

from fibpow.matveev import STEP_CONSTANT
from fibpow.precision import (
    DEFAULT_PRECISION,
    PRECISION_CAP,
    BigReal,
    decide_leq,
    eval_log,
    log_alpha,
)

C = Fraction(STEP_CONSTANT)
KEBLI_CONSTANT = 6 * 10**29
LUCA_PATEL_LIMIT = 36
ITERATION_CAP = 1000


@dataclass(frozen=True)
class BoundExpr:
    """The function n -> c * (log n)**x with exact c > 0 and integer x >= 0."""

    c: Fraction
    x: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", Fraction(self.c))
        if self.c <= 0:
            raise ValueError("BoundExpr coefficient must be positive")
        if self.x < 0 or int(self.x) != self.x:
            raise ValueError("BoundExpr exponent must be a non-negative integer")
        object.__setattr__(self, "x", int(self.x))

    def __mul__(self, other: "BoundExpr") -> "BoundExpr":
        return BoundExpr(self.c * other.c, self.x + other.x)

    def evaluate(self, log_n: BigReal) -> BigReal:
        return self.c * log_n**self.x if self.x else BigReal.exact(self.c, log_n.prec)

    def dominates(self, other: "BoundExpr") -> bool:
        """self >= other for every n with log n >= 1."""
        return self.c >= other.c and self.x >= other.x

    def leq_at(self, other: "BoundExpr", n: int, p_max: int = PRECISION_CAP) -> Optional[bool]:
        return decide_leq(
            lambda p: self.evaluate(eval_log(n, p)),
            lambda p: other.evaluate(eval_log(n, p)),
            p_max=p_max,
        )

    def c_log10(self) -> float:
        return _log10_fraction(self.c)

    def __str__(self) -> str:
        return f"{self.c_str()} * (log n)^{self.x}"

    def c_str(self) -> str:
        if self.c.denominator == 1:
            return str(self.c.numerator)
        return f"{self.c.numerator}/{self.c.denominator}"


ONE = BoundExpr(Fraction(1), 0)
LOG_N = BoundExpr(Fraction(1), 1)


def _log10_fraction(f: Fraction) -> float:
    return _log10_int(f.numerator) - _log10_int(f.denominator)


def _log10_int(n: int) -> float:
    b = n.bit_length()
    if b <= 1000:
        return math.log10(n)
    shift = b - 64
    return math.log10(n >> shift) + shift * math.log10(2)


# single steps ----------------------------------------------------------------


def step_A(ell: int, r_ell: BoundExpr, C: Fraction = C) -> BoundExpr:
    """min{n_1 - n_{l+1}, n - m} <= C * l * R_l * log n."""
    if ell < 1:
        raise ValueError("step index must be >= 1")
    return BoundExpr(C * ell * r_ell.c, r_ell.x + 1)


def step_B(ell: int, s: BoundExpr, t_ell: BoundExpr, C: Fraction = C) -> BoundExpr:
    """n_1 - n_{l+1} <= C * l * S * T_l * log n (n_1 <= ... when l = k)."""
    if ell < 1:
        raise ValueError("step index must be >= 1")
    return BoundExpr(C * ell * s.c * t_ell.c, s.x + t_ell.x + 1)


@dataclass(frozen=True)
class WalkOutcome:
    case: str  # "case1" or "case2"
    l0: Optional[int]
    trace: tuple  # ((step name, bound name, BoundExpr), ...)
    final: BoundExpr

    @property
    def steps(self) -> int:
        return len(self.trace)


def walk_case1(k: int, C: Fraction = C) -> WalkOutcome:
    """n_1 < n - m: Steps A1 .. Ak, ending with R_{k+1} = C^k k! (log n)^k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    r = ONE
    trace = []
    for ell in range(1, k + 1):
        r = step_A(ell, r, C)
        trace.append((f"A{ell}", f"R{ell + 1}", r))
    return WalkOutcome("case1", None, tuple(trace), r)


def walk_case2(k: int, l0: int, C: Fraction = C) -> WalkOutcome:
    """Cross from Step A(l0) to Step B(l0), then walk B(l0) .. Bk."""
    if not 1 <= l0 <= k:
        raise ValueError(f"crossover index must satisfy 1 <= l0 <= k, got l0={l0}, k={k}")
    r = ONE
    trace = []
    for ell in range(1, l0):
        r = step_A(ell, r, C)
        trace.append((f"A{ell}", f"R{ell + 1}", r))
    s = step_A(l0, r, C)
    trace.append((f"A{l0}", f"S{l0}", s))
    t = r  # the bound for n_1 - n_{l0} known so far
    for ell in range(l0, k + 1):
        t = step_B(ell, s, t, C)
        trace.append((f"B{ell}", f"T{ell + 1}", t))
    return WalkOutcome("case2", l0, tuple(trace), t)


def case2_closed_form(k: int, l0: int, C: Fraction = C) -> BoundExpr:
    """k! C^((l0+1)(k-l0) + 2 l0) (l0!)^(k-l0+1) (log n)^((l0+1)(k-l0) + 2 l0)."""
    x = (l0 + 1) * (k - l0) + 2 * l0
    c = math.factorial(k) * C**x * math.factorial(l0) ** (k - l0 + 1)
    return BoundExpr(c, x)


def case1_closed_form(k: int, C: Fraction = C) -> BoundExpr:
    return BoundExpr(C**k * math.factorial(k), k)


def path_candidates(k: int, C: Fraction = C) -> list[WalkOutcome]:
    """All possible final bounds for n_1: Case 1 and Case 2 for each l0."""
    return [walk_case1(k, C)] + [walk_case2(k, l0, C) for l0 in range(1, k + 1)]


def max_over_paths(k: int, C: Fraction = C) -> BoundExpr:
    """The candidate that dominates all others for log n >= 1.

    Raises if no single candidate dominates; callers then have to compare
    pointwise (see :func:`rhs`).
    """
    finals = [w.final for w in path_candidates(k, C)]
    best = max(finals, key=lambda b: (b.x, b.c))
    if not all(best.dominates(f) for f in finals):
        raise ArithmeticError(f"no symbolically dominant path for k={k}")
    return best


def exponent_law(k: int, l0: int) -> int:
    return k + l0 * (k + 1 - l0)


# the printed simplified form -----------------------------------------------


@dataclass(frozen=True)
class SimplifiedBound:
    """C^{e_C} * k^{e_k} * (log n)^{e_x} with rational exponents.

    ``e_k`` is the exponent on k as printed; ``e_k_recomputed`` is what
    k^k * k^((k^2+2k+1)/4) actually simplifies to. They differ by k - 1.
    """

    k: int
    e_C: Fraction
    e_k: Fraction
    e_x: Fraction
    e_k_recomputed: Fraction

    @property
    def discrepancy(self) -> Fraction:
        return self.e_k_recomputed - self.e_k

    def coefficient_upper(self, corrected: bool = False, prec: int = DEFAULT_PRECISION) -> BigReal:
        e_k = self.e_k_recomputed if corrected else self.e_k
        w = prec + 32
        val = (self.e_C * BigReal.exact(C, w).log() + e_k * BigReal.exact(self.k, w).log()).exp()
        return val.with_prec(prec)

    def evaluate(self, log_n: BigReal, corrected: bool = False) -> BigReal:
        coef = self.coefficient_upper(corrected, log_n.prec)
        return coef * (log_n.log() * self.e_x).exp()

    def as_bound_expr(self, corrected: bool = True) -> BoundExpr:
        """Round to an integer exponent and rational coefficient, valid for log n >= 1."""
        coef = self.coefficient_upper(corrected, 128)
        return BoundExpr(Fraction(coef.ceil()), math.ceil(self.e_x))


def simplified_n1_bound(k: int) -> SimplifiedBound:
    """n_1 <= C^((k^2+6k+1)/4) k^((k^2+2k+5)/4) (log n)^((k^2+6k+1)/4), as printed."""
    if k < 1:
        raise ValueError("k must be >= 1")
    e = Fraction(k * k + 6 * k + 1, 4)
    return SimplifiedBound(
        k=k,
        e_C=e,
        e_k=Fraction(k * k + 2 * k + 5, 4),
        e_x=e,
        e_k_recomputed=k + Fraction(k * k + 2 * k + 1, 4),
    )


def finish_chain_exponents(k: int) -> dict:
    """Exponents of n < C^(k^2+6k+3) k^(k^2+2k+5) (log n)^(k^2+6k+1)."""
    s = simplified_n1_bound(k)
    return {
        "C": 4 * s.e_C + 2,  # 6e29 <= C^2
        "k": 4 * s.e_k,
        "log_n": 4 * s.e_x,
    }


def theorem1_shape_log(k: int, eps: Fraction) -> float:
    """log of k^((3+eps) k^2); the asymptotic shape only, without any constant."""
    return float((3 + Fraction(eps)) * k * k) * math.log(k) if k > 1 else 0.0


# solving n < c (log n)^x -------------------------------------------------------


@dataclass(frozen=True)
class FinalInequality:
    """n < kebli * max_i (c_i (log n)^x_i)^4."""

    candidates: tuple  # BoundExprs for n_1
    kebli: int = KEBLI_CONSTANT

    def rhs(self, n: int, prec: int) -> BigReal:
        log_n = eval_log(n, prec)
        best = None
        for cand in self.candidates:
            v = cand.evaluate(log_n)
            best = v if best is None else best.max(v)
        return self.kebli * best**4

    def log_rhs(self, log_n: BigReal) -> BigReal:
        """log of the right-hand side as a function of log n (pointwise max)."""
        ll = log_n.log()
        best = None
        for cand in self.candidates:
            v = BigReal.exact(cand.c, log_n.prec).log() + cand.x * ll
            best = v if best is None else best.max(v)
        return BigReal.exact(self.kebli, log_n.prec).log() + 4 * best

    def dominant(self) -> BoundExpr:
        best = max(self.candidates, key=lambda b: (b.x, b.c))
        return best

    @property
    def max_x(self) -> int:
        return 4 * max(c.x for c in self.candidates)

    def as_single(self) -> BoundExpr:
        """One c (log n)^x dominating the max for log n >= 1."""
        c_max = max(c.c for c in self.candidates)
        return BoundExpr(self.kebli * c_max**4, self.max_x)


@dataclass(frozen=True)
class FinalBound:
    k: int
    method: str
    n_bound: Optional[int]
    log10_n_bound: float
    log_ya_bound: BigReal
    delta: Optional[Fraction] = None
    iterations: int = 0
    tight: Optional[bool] = None
    inequality: Optional[BoundExpr] = None
    fixed_point_bound: Optional[int] = None
    trace: tuple = field(default=())


def _prec_for(n: int) -> int:
    return n.bit_length() + DEFAULT_PRECISION


def _satisfies(ineq: FinalInequality, n: int, p_max: int = PRECISION_CAP) -> Optional[bool]:
    """n < RHS(n), decided with escalating precision."""
    start = _prec_for(n)

    def lhs(p):
        return BigReal.exact(n, p)

    def rhs(p):
        return ineq.rhs(n, p)

    le = decide_leq(rhs, lhs, p_max=max(p_max, 4 * start), p_start=start)
    if le is None:
        return None
    return not le


def solve_fixed_point(ineq: FinalInequality, n0: int = 10, cap: int = ITERATION_CAP) -> tuple[int, int, bool]:
    """Largest-integer bound for n < RHS(n) by fixed-point iteration.

    Returns (n_bound, iterations, tight): RHS(n_bound) <= n_bound is certified,
    and for n > n_bound the ratio RHS(n)/n keeps decreasing, so no larger n
    satisfies the inequality. ``tight`` records that n_bound - 1 still satisfies
    it, i.e. the bound cannot be lowered by one.

    The iteration runs on L = log n: plain steps L <- log RHS(e^L) until L is
    well past the exponent, then Newton steps on L - log RHS(e^L).
    """
    if _satisfies(ineq, n0) is not True:
        raise ArithmeticError("RHS(n0) must exceed n0 to start the iteration")
    x_max = ineq.max_x
    prec = 128
    L = eval_log(n0, prec)
    iterations = 0

    def advance(L: BigReal) -> BigReal:
        if L.lower < 2 * x_max + 2:
            nxt = ineq.log_rhs(L)
        else:
            dom = _active(ineq, L)
            h = L - ineq.log_rhs(L)
            nxt = L - h / (1 - BigReal.exact(4 * dom.x, L.prec) / L)
        return BigReal.exact(nxt.mid, L.prec)

    # coarse phase at 128 bits, then Newton polish at the precision n needs
    for target in (None, "fine"):
        if target == "fine":
            prec = int(float(L.mid) / math.log(2)) + 2 * DEFAULT_PRECISION
            L = BigReal.exact(L.mid, prec)
        tol = Fraction(1, 1 << (prec - 24))
        while True:
            iterations += 1
            if iterations > cap:
                raise ArithmeticError("fixed-point iteration did not converge")
            L_new = advance(L)
            step = abs(L_new.mid - L.mid)
            L = L_new
            if step < tol:
                break
    n = (L.with_prec(prec)).exp().ceil()
    # integer polish: smallest n with RHS(n) <= n, certified
    while _satisfies(ineq, n) is not False:
        n += 1
    while n > n0 and _satisfies(ineq, n - 1) is False:
        n -= 1
    tight = _satisfies(ineq, n - 1) is True
    if not eval_log(n, 64).lower > x_max:
        raise ArithmeticError("fixed point lies below the monotonicity threshold log n > x")
    return n, iterations, tight


def _active(ineq: FinalInequality, L: BigReal) -> BoundExpr:
    ll = L.log()
    best, best_val = None, None
    for cand in ineq.candidates:
        v = BigReal.exact(cand.c, L.prec).log() + cand.x * ll
        if best is None or v.mid > best_val.mid:
            best, best_val = cand, v
    return best


def lemma10_log_bound(c, x, delta, prec: int = DEFAULT_PRECISION) -> tuple[BigReal, int]:
    """Enclosure of the log of max{exp(exp((1+1/delta)^2)), 2^x c (log c)^x, (2x)^((1+delta)x) c}.

    Returns the enclosure and the index (1, 2, 3) of the branch attaining the maximum.
    """
    c, x, delta = Fraction(c), Fraction(x), Fraction(delta)
    if c < 1 or x < 1 or delta <= 0:
        raise ValueError("need c >= 1, x >= 1, delta > 0")
    w = prec + 16
    b1 = BigReal.exact((1 + 1 / delta) ** 2, w).exp()
    log_c = eval_log(c, w) if c != 1 else None
    branches = [b1]
    if log_c is not None:
        b2 = x * eval_log(2, w) + log_c + x * log_c.log()
        branches.append(b2)
    else:
        branches.append(None)  # branch value 0
    b3 = (1 + delta) * x * eval_log(2 * x, w)
    if log_c is not None:
        b3 = b3 + log_c
    branches.append(b3)
    best, idx = None, 0
    for i, b in enumerate(branches, start=1):
        if b is None:
            continue
        if best is None:
            best, idx = b, i
            continue
        if b.upper > best.upper:
            idx = i
        best = best.max(b)
    return best.with_prec(prec), idx


def lemma10_bound(c, x, delta, prec: int = DEFAULT_PRECISION) -> BigReal:
    """Enclosure of the explicit bound for n <= c (log n)^x."""
    log_b, _ = lemma10_log_bound(c, x, delta, prec)
    return log_b.exp()


def finish(
    k: int,
    method: str = "iteration",
    delta=Fraction(1, 2),
    C: Fraction = C,
    max_digits: int = 10**6,
) -> FinalBound:
    """Concrete upper bound for n, and for log y^a, at Hamming weight k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    walks = path_candidates(k, C)
    ineq = FinalInequality(tuple(w.final for w in walks))
    single = ineq.as_single()
    trace = tuple(
        (w.case, w.l0, w.final.x) for w in walks
    )
    if method == "iteration":
        try:
            fp, iterations, tight = solve_fixed_point(ineq)
        except ArithmeticError:
            # no certified fixed point within the iteration cap
            fb = finish(k, "lemma10", delta, C, max_digits)
            return replace(fb, method="lemma10-fallback")
        n_bound = max(LUCA_PATEL_LIMIT, fp)
        log10 = _log10_int(n_bound)
        return FinalBound(
            k=k,
            method=method,
            n_bound=n_bound,
            log10_n_bound=log10,
            log_ya_bound=_log_ya(n_bound),
            iterations=iterations,
            tight=tight,
            inequality=single,
            fixed_point_bound=fp,
            trace=trace,
        )
    if method == "lemma10":
        delta = Fraction(delta)
        if not 0 < delta:
            raise ValueError("delta must be positive")
        log_b, _ = lemma10_log_bound(single.c, single.x, delta, 128)
        log10 = float(log_b.upper) / math.log(10)
        n_bound = None
        if log10 <= max_digits:
            prec = int(log10 * 3.33) + 128
            n_bound = max(LUCA_PATEL_LIMIT, log_b.with_prec(prec).exp().ceil())
            log_ya = _log_ya(n_bound)
        else:
            log_ya = eval_log(2, 128) + log_b.exp() * log_alpha(128)
        return FinalBound(
            k=k,
            method=method,
            n_bound=n_bound,
            log10_n_bound=log10,
            log_ya_bound=log_ya,
            delta=delta,
            inequality=single,
            trace=trace,
        )
    raise ValueError(f"unknown method {method!r}; expected 'iteration' or 'lemma10'")


def _log_ya(n_bound: int) -> BigReal:
    # log y^a < log 2 + n log alpha
    prec = _prec_for(n_bound)
    return eval_log(2, prec) + BigReal.exact(n_bound, prec) * log_alpha(prec)


def per_l0_table(k: int, C: Fraction = C) -> list[dict]:
    rows = []
    for w in path_candidates(k, C):
        rows.append(
            {
                "case": w.case,
                "l0": w.l0,
                "c": w.final.c_str(),
                "c_log10": w.final.c_log10(),
                "x": w.final.x,
            }
        )
    return rows


__all__ = [
    "BoundExpr",
    "C",
    "FinalBound",
    "FinalInequality",
    "KEBLI_CONSTANT",
    "SimplifiedBound",
    "WalkOutcome",
    "case1_closed_form",
    "case2_closed_form",
    "exponent_law",
    "finish",
    "finish_chain_exponents",
    "lemma10_bound",
    "lemma10_log_bound",
    "max_over_paths",
    "path_candidates",
    "per_l0_table",
    "simplified_n1_bound",
    "solve_fixed_point",
    "step_A",
    "step_B",
    "theorem1_shape_log",
    "walk_case1",
    "walk_case2",
]
