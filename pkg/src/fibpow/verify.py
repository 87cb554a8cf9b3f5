"""The invariant battery behind ``fibpow verify``.

Each suite checks one lemma or inequality family and returns a
:class:`SuiteResult`. Suites are pure functions of a :class:`VerifyConfig`.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from fibpow import bound_pipeline as bp
from fibpow.fib_core import fib, lucas, zeckendorf
from fibpow.linforms import (
    InstanceAB,
    alpha_sum_bound,
    basic_forms,
    coefficient_bound_ok,
    all_forms,
    verify_nonzero,
)
from fibpow.matveev import STEP_CONSTANT, matveev_lower, step_instance, step_constant, step_lower_bound
from fibpow.precision import alpha, eval_log, linearisation_check, sqrt5
from fibpow.quad_field import ALPHA, alpha_pow, norm, v_sqrt5
from fibpow.search import census_check, enumerate_solutions, instance_of


@dataclass
class VerifyConfig:
    max_x: int = 100_000  # Lucas mod 5 range
    identity_max: int = 1000
    zeck_max: int = 10_000
    linform_max_y: int = 10_000
    lemma10_samples: int = 1000
    max_n: int = 200
    step_constant: int = STEP_CONSTANT
    seed: int = 20221
    precision: int = 64


@dataclass
class SuiteResult:
    name: str
    ref: str
    passed: bool
    detail: str = ""
    checked: int = 0

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "ref": self.ref,
            "passed": self.passed,
            "checked": self.checked,
            "detail": self.detail,
        }


def lucas_mod5(cfg: VerifyConfig) -> SuiteResult:
    a, b = 2, 1
    cycle = (2, 1, 3, 4)
    for x in range(cfg.max_x + 1):
        if a == 0 or a != cycle[x % 4]:
            return SuiteResult("lucas-mod5", "no Lucas number is divisible by 5", False, f"x={x}: L_x = {a} mod 5", x)
        a, b = b, (a + b) % 5
    return SuiteResult("lucas-mod5", "no Lucas number is divisible by 5", True, "cycle (2,1,3,4)", cfg.max_x + 1)


def norm_identity(cfg: VerifyConfig) -> SuiteResult:
    ref = "N(alpha^x + 1) = (-1)^x + L_x + 1, = L_x for odd x; sqrt5 does not divide it for odd x"
    for x in range(cfg.identity_max + 1):
        z = alpha_pow(x) + 1
        nz = norm(z)
        if nz != (-1) ** x + lucas(x) + 1:
            return SuiteResult("norm-identity", ref, False, f"x={x}", x)
        if x % 2 == 1 and (nz != lucas(x) or v_sqrt5(z) != 0):
            return SuiteResult("norm-identity", ref, False, f"odd x={x}", x)
    return SuiteResult("norm-identity", ref, True, "", cfg.identity_max + 1)


def alpha_powers(cfg: VerifyConfig) -> SuiteResult:
    ref = "alpha^x = F_(x-1) + F_x alpha"
    for x in range(1, cfg.identity_max + 1):
        z = alpha_pow(x)
        if (z.p, z.q) != (fib(x - 1), fib(x)):
            return SuiteResult("alpha-powers", ref, False, f"x={x}", x)
    # independent repeated multiplication
    z = alpha_pow(0)

    for x in range(1, 201):
        z = z * ALPHA
        if z != alpha_pow(x):
            return SuiteResult("alpha-powers", ref, False, f"multiplication mismatch at x={x}", x)
    return SuiteResult("alpha-powers", ref, True, "", cfg.identity_max)


def binet(cfg: VerifyConfig) -> SuiteResult:
    ref = "Binet formula F_n = (alpha^n - beta^n)/sqrt5"
    prec = 256
    a = alpha(prec)
    b = 1 - a
    s5 = sqrt5(prec)
    for n in range(201):
        v = (a**n - b**n) / s5
        if not (v.contains(fib(n)) and v.width < 1):
            return SuiteResult("binet", ref, False, f"n={n}", n)
    return SuiteResult("binet", ref, True, "", 201)


def zeckendorf_suite(cfg: VerifyConfig) -> SuiteResult:
    ref = "Zeckendorf representation: round trip and minimality"
    limit = cfg.zeck_max
    fibs = [fib(i) for i in range(2, 40) if fib(i) <= limit]
    best = [0] + [math.inf] * limit
    for v in range(1, limit + 1):
        best[v] = 1 + min(best[v - f] for f in fibs if f <= v)
    for y in range(1, limit + 1):
        rep = zeckendorf(y)
        if rep.decode() != y:
            return SuiteResult("zeckendorf", ref, False, f"round trip y={y}", y)
        if best[y] < rep.k:
            return SuiteResult("zeckendorf", ref, False, f"y={y} has a shorter Fibonacci sum", y)
    return SuiteResult("zeckendorf", ref, True, "", limit)


def log_y_below_n1(cfg: VerifyConfig) -> SuiteResult:
    ref = "log y < n_1 for the Zeckendorf leading index"
    for y in range(1, cfg.zeck_max + 1):
        n1 = zeckendorf(y).n1
        if not eval_log(y, 64).certainly_lt(n1):
            return SuiteResult("log-y-below-n1", ref, False, f"y={y}", y)
    return SuiteResult("log-y-below-n1", ref, True, "", cfg.zeck_max)


def alpha_sums(cfg: VerifyConfig) -> SuiteResult:
    ref = "sum alpha^(-n_i) < 3 and |sum beta^(n_i)| < 3"
    rng = random.Random(cfg.seed)
    for trial in range(1000):
        k = rng.randint(1, 30)
        idx = sorted(rng.sample(range(0, 200), k), reverse=True)
        sa, sb = alpha_sum_bound(idx)
        if not (sa.certainly_lt(3) and sb.certainly_lt(3)):
            return SuiteResult("alpha-sums", ref, False, f"indices {idx}", trial)
    # the worst case: every index from 0 up
    sa, sb = alpha_sum_bound(list(range(199, -1, -1)))
    ok = sa.certainly_lt(3) and sb.certainly_lt(3)
    return SuiteResult("alpha-sums", ref, ok, "", 1001)


def n1_and_a_below_n(cfg: VerifyConfig) -> SuiteResult:
    ref = "n_1 < n and a < n for reduced solutions"
    sols = enumerate_solutions(min(cfg.max_n, 60))
    checked = 0
    for s in sols:
        if s.y < 2:
            continue
        inst = instance_of(s)
        if not inst.reduced:
            continue
        checked += 1
        if not (inst.indices[0] < s.n and s.a < s.n and coefficient_bound_ok(inst)):
            return SuiteResult("n1-a-below-n", ref, False, f"solution {s}", checked)
    return SuiteResult("n1-a-below-n", ref, True, "", checked)


def log_linearisation(cfg: VerifyConfig) -> SuiteResult:
    ref = "|x - 1| <= 1/2 implies |log x| <= 2|x - 1|"
    n = 10_000
    for i in range(n + 1):
        x = Fraction(1, 2) + Fraction(i, n)
        if not linearisation_check(x).certified:
            return SuiteResult("log-linearisation", ref, False, f"x={x}", i)
    return SuiteResult("log-linearisation", ref, True, "grid of 10001 points on [1/2, 3/2]", n + 1)


def lemma10_implication(cfg: VerifyConfig) -> SuiteResult:
    ref = "n <= c (log n)^x implies the explicit three-branch bound"
    rng = random.Random(cfg.seed + 1)
    checked = 0
    for trial in range(cfg.lemma10_samples):
        c = Fraction(rng.randint(1, 10**12))
        x = Fraction(rng.randint(100, 5000), 100)
        delta = Fraction(rng.randint(1, 999), 1000)
        log_bound, _ = bp.lemma10_log_bound(c, x, delta)
        for _ in range(5):
            n = rng.randint(3, 10**9)
            ln = math.log(n)
            if math.log(float(c)) + float(x) * math.log(ln) < ln:
                continue  # n does not satisfy the hypothesis
            checked += 1
            if not eval_log(n, 64).certainly_le(log_bound):
                return SuiteResult("lemma10", ref, False, f"c={c}, x={x}, delta={delta}, n={n}", checked)
    return SuiteResult("lemma10", ref, True, "", checked)


def step_constant_suite(cfg: VerifyConfig) -> SuiteResult:
    cert = step_constant(cfg.step_constant, prec=128)
    ref = "Matveev step constant C dominates 1.4*30^7*4^4.5*2^2(1+log 2)*3*log 5*2*2"
    detail = f"C={cfg.step_constant}, product={cert.product.to_str(18)}"
    return SuiteResult("step-constant", ref, cert.holds, detail, 1)


def matveev_instance(cfg: VerifyConfig) -> SuiteResult:
    ref = "Matveev with t=4, D=2, B=n^2 is at least -C log n log alpha k T_k S"
    checked = 0
    for n in (10, 100, 1000, 10**4, 10**5, 10**6):
        for k in range(1, 9):
            for t in (1, 10, 1000):
                for s in (1, 10, 1000):
                    low = matveev_lower(step_instance(n, k, t, s))
                    simple = step_lower_bound(n, k, t, s, C=cfg.step_constant)
                    checked += 1
                    if not simple.certainly_le(low):
                        return SuiteResult("matveev-instance", ref, False, f"n={n}, k={k}, T={t}, S={s}", checked)
    return SuiteResult("matveev-instance", ref, True, "", checked)


def linear_forms(cfg: VerifyConfig) -> SuiteResult:
    ref = "basic forms bounded by 12 alpha^(-X), eliminated forms by 18 a alpha^(-X), X >= 6"
    known = InstanceAB.from_y(3864, 2, 36, 12)
    checked = 0
    for fv in all_forms(known):
        if fv.applicable:
            checked += 1
            if fv.verdict is not True:
                return SuiteResult("linear-forms", ref, False, f"known solution, form {fv.tag}", checked)
    for y in range(2, cfg.linform_max_y + 1):
        inst = InstanceAB.from_y(y)
        for fv in basic_forms(inst):
            if fv.applicable:
                checked += 1
                if fv.verdict is not True:
                    return SuiteResult("linear-forms", ref, False, f"y={y}, form {fv.tag}", checked)
    return SuiteResult("linear-forms", ref, True, "", checked)


def nonvanishing(cfg: VerifyConfig) -> SuiteResult:
    ref = "eliminated forms are non-zero (sqrt5 valuation, or Luca-Patel when n - m is even)"
    checked = 0
    for s in enumerate_solutions(min(cfg.max_n, 60)):
        if s.y < 2:
            continue
        inst = instance_of(s)
        if not inst.reduced:
            continue
        for ell in range(1, inst.k + 1):
            for col in ("A*", "B*"):
                rep = verify_nonzero(inst, f"{col}{ell}")
                checked += 1
                arg = rep.argument
                if hasattr(arg, "consistent") and arg.consistent is False:
                    return SuiteResult("nonvanishing", ref, False, f"{s}: parity branch with n > 36", checked)
                if not rep.nonzero:
                    return SuiteResult("nonvanishing", ref, False, f"{s}: {col}{ell}", checked)
    return SuiteResult("nonvanishing", ref, True, "", checked)


def step_algebra(cfg: VerifyConfig) -> SuiteResult:
    ref = "step walking: recursion equals the closed form, exponent k + l0(k+1-l0) <= (k^2+6k+1)/4"
    C = Fraction(cfg.step_constant)
    checked = 0
    for k in range(1, 11):
        if bp.walk_case1(k, C).final != bp.case1_closed_form(k, C):
            return SuiteResult("step-algebra", ref, False, f"case 1, k={k}", checked)
        for l0 in range(1, k + 1):
            checked += 1
            w = bp.walk_case2(k, l0, C).final
            if w != bp.case2_closed_form(k, l0, C):
                return SuiteResult("step-algebra", ref, False, f"k={k}, l0={l0}", checked)
            if w.x != bp.exponent_law(k, l0) or 4 * w.x > k * k + 6 * k + 1:
                return SuiteResult("step-algebra", ref, False, f"exponent at k={k}, l0={l0}", checked)
    return SuiteResult("step-algebra", ref, True, "", checked)


def parity_theorem(cfg: VerifyConfig) -> SuiteResult:
    ref = "Luca-Patel: n = m mod 2 implies n <= 36"
    sols = enumerate_solutions(cfg.max_n)
    bad = [s for s in sols if s.parity_nm == "even" and s.n > 36]
    return SuiteResult("luca-patel", ref, not bad, f"max_n={cfg.max_n}, {len(sols)} solutions", len(sols))


def census(cfg: VerifyConfig) -> SuiteResult:
    ref = "18 known solutions with n >= m >= 0; Kebli et al. a < n < 6e29 (log y)^4"
    rep = census_check(60)
    ok = rep.census_ok and rep.kebli_ok and all(s.reverify() for s in rep.solutions)
    return SuiteResult("census", ref, ok, f"matching conventions: {rep.matching}", len(rep.solutions))


SUITES: dict[str, Callable[[VerifyConfig], SuiteResult]] = {
    "lucas-mod5": lucas_mod5,
    "norm-identity": norm_identity,
    "alpha-powers": alpha_powers,
    "binet": binet,
    "zeckendorf": zeckendorf_suite,
    "log-y-below-n1": log_y_below_n1,
    "alpha-sums": alpha_sums,
    "n1-a-below-n": n1_and_a_below_n,
    "log-linearisation": log_linearisation,
    "lemma10": lemma10_implication,
    "step-constant": step_constant_suite,
    "matveev-instance": matveev_instance,
    "linear-forms": linear_forms,
    "nonvanishing": nonvanishing,
    "step-algebra": step_algebra,
    "luca-patel": parity_theorem,
    "census": census,
}

# names used on the command line for the numbered lemmas
ALIASES = {
    "lemma3": "log-y-below-n1",
    "lemma4": "alpha-sums",
    "lemma5": "n1-a-below-n",
    "lemma6": "log-linearisation",
    "lemma9": "lucas-mod5",
    "lemma10": "lemma10",
    "matveev": "step-constant",
    "linforms": "linear-forms",
    "steps": "step-algebra",
}


def resolve(names) -> list[str]:
    out = []
    for name in names:
        key = ALIASES.get(name, name)
        if key not in SUITES:
            raise KeyError(name)
        out.append(key)
    return out


def run_suites(cfg: VerifyConfig, only=None) -> list[SuiteResult]:
    names = resolve(only) if only else list(SUITES)
    return [SUITES[name](cfg) for name in names]
