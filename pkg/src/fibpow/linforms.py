"""The basic linear forms in logarithms and their y-free eliminations, certified numerically.

Forms are evaluated as integer combinations of log y, log sqrt5, log alpha,
log(1 + alpha^(n_2-n_1) + ... ) and log(alpha^(n-m) + 1), never as differences
of big numbers, so interval width alone controls cancellation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from fibpow.fib_core import ZeckendorfRep, fib, zeckendorf
from fibpow.precision import (
    DEFAULT_PRECISION,
    PRECISION_CAP,
    BigReal,
    eval_log,
    log_alpha,
    log_sqrt5,
)
from fibpow.quad_field import (
    NonvanishingCertificate,
    ParityBranch,
    eta3,
    eta4,
    nonvanishing_certificate,
)

APPLICABILITY_THRESHOLD = 6


@dataclass(frozen=True)
class InstanceAB:
    """y = F_{n_1} + ... + F_{n_k}, optionally with y^a = F_n + F_m."""

    y: int
    a: int
    rep: ZeckendorfRep
    n: Optional[int] = None
    m: Optional[int] = None

    def __post_init__(self) -> None:
        if not isinstance(self.rep, ZeckendorfRep):
            object.__setattr__(self, "rep", ZeckendorfRep(tuple(self.rep)))
        if self.rep.decode() != self.y:
            raise ValueError(f"indices {self.rep.indices} do not sum to y = {self.y}")
        if (self.n is None) != (self.m is None):
            raise ValueError("n and m must be given together")
        if self.n is not None:
            if self.a < 2:
                raise ValueError("exponent a must be >= 2")
            if self.n < self.m:
                raise ValueError("expected n >= m")
            if self.y**self.a != fib(self.n) + fib(self.m):
                raise ValueError(f"{self.y}^{self.a} != F_{self.n} + F_{self.m}")

    @classmethod
    def from_y(cls, y: int, a: int = 2, n: Optional[int] = None, m: Optional[int] = None) -> "InstanceAB":
        return cls(y=y, a=a, rep=zeckendorf(y), n=n, m=m)

    @property
    def has_b(self) -> bool:
        return self.n is not None

    @property
    def reduced(self) -> bool:
        """n - 2 >= m >= 2, the standing assumption behind the B-side estimates."""
        return self.has_b and self.n - 2 >= self.m >= 2

    @property
    def k(self) -> int:
        return self.rep.k

    @property
    def indices(self) -> tuple[int, ...]:
        return self.rep.indices

    def x_a(self, ell: int) -> int:
        """Exponent in the bound for Lambda_{A ell}: n_1 - n_{ell+1}, or n_1 when ell = k."""
        idx = self.indices
        if ell == self.k:
            return idx[0]
        return idx[0] - idx[ell]


@dataclass(frozen=True)
class LinearForm:
    """Integer combination of logarithms with a claimed bound factor * alpha^(-X)."""

    tag: str
    coefficients: tuple  # ((coefficient, argument), ...); argument int or QuadInt or "sqrt5"/"alpha"
    factor: int
    exponent: int

    @property
    def applicable(self) -> bool:
        return self.exponent >= APPLICABILITY_THRESHOLD

    def evaluate(self, prec: int) -> BigReal:
        w = prec + 16
        total = BigReal.exact(0, w)
        for coef, arg in self.coefficients:
            if coef == 0:
                continue
            total = total + coef * _log_of(arg, w)
        return total.with_prec(prec)

    def bound(self, prec: int) -> BigReal:
        w = prec + 16
        return (self.factor * (-self.exponent * log_alpha(w)).exp()).with_prec(prec)

    def coefficient_of(self, name: str) -> int:
        return sum(c for c, arg in self.coefficients if arg == name)


def _log_of(arg, prec: int) -> BigReal:
    if arg == "sqrt5":
        return log_sqrt5(prec)
    if arg == "alpha":
        return log_alpha(prec)
    return eval_log(arg, prec)


@dataclass(frozen=True)
class LinearFormValue:
    tag: str
    value: BigReal
    claimed_bound: BigReal
    exponent: int
    applicable: bool
    verdict: Optional[bool]  # True certified, False refuted, None undecided or not applicable
    coefficients: tuple = field(default=())

    def to_json(self) -> dict:
        return {
            "tag": self.tag,
            "midpoint": self.value.to_str(25),
            "radius": _short(self.value.rad),
            "bound": self.claimed_bound.to_str(25),
            "exponent": self.exponent,
            "applicable": self.applicable,
            "verdict": _verdict_str(self.verdict, self.applicable),
            "coefficients": [[c, str(arg)] for c, arg in self.coefficients],
        }


def _short(f: Fraction) -> str:
    return f"{float(f):.3e}"


def _verdict_str(verdict: Optional[bool], applicable: bool) -> str:
    if not applicable:
        return "skipped"
    return {True: "certified", False: "violated", None: "undecided"}[verdict]


def _certify(form: LinearForm, prec: int, p_max: int) -> LinearFormValue:
    p = prec
    value = form.evaluate(p)
    bound = form.bound(p)
    verdict = None
    if form.applicable:
        while True:
            if abs(value).certainly_le(bound):
                verdict = True
                break
            if bound.certainly_lt(abs(value)):
                verdict = False
                break
            if 2 * p > p_max:
                break
            p *= 2
            value, bound = form.evaluate(p), form.bound(p)
    return LinearFormValue(
        tag=form.tag,
        value=value,
        claimed_bound=bound,
        exponent=form.exponent,
        applicable=form.applicable,
        verdict=verdict,
        coefficients=form.coefficients,
    )


# construction -----------------------------------------------------------------


def basic_form_defs(inst: InstanceAB) -> list[LinearForm]:
    """Lambda_{A1} .. Lambda_{Ak}, and Lambda_{B1}, Lambda_{B2} when y^a = F_n + F_m is known."""
    idx = inst.indices
    n1 = idx[0]
    forms = []
    for ell in range(1, inst.k + 1):
        coeffs = [(1, inst.y), (1, "sqrt5"), (-n1, "alpha")]
        if ell > 1:
            coeffs.append((-1, eta3(idx, ell)))
        forms.append(LinearForm(f"A{ell}", tuple(coeffs), 12, inst.x_a(ell)))
    if inst.has_b:
        n, m, a = inst.n, inst.m, inst.a
        forms.append(LinearForm("B1", ((a, inst.y), (1, "sqrt5"), (-n, "alpha")), 12, n - m))
        forms.append(
            LinearForm(
                "B2",
                ((a, inst.y), (1, "sqrt5"), (-m, "alpha"), (-1, eta4(n - m))),
                12,
                n,
            )
        )
    return forms


def eliminated_form_defs(inst: InstanceAB) -> list[LinearForm]:
    """Lambda*_{A ell} = a Lambda_{A ell} - Lambda_{B1}, Lambda*_{B ell} = a Lambda_{A ell} - Lambda_{B2}."""
    if not inst.has_b:
        raise ValueError("eliminated forms need y^a = F_n + F_m")
    idx = inst.indices
    n1 = idx[0]
    n, m, a = inst.n, inst.m, inst.a
    forms = []
    for ell in range(1, inst.k + 1):
        coeffs = [(a - 1, "sqrt5"), (n - a * n1, "alpha")]
        if ell > 1:
            coeffs.append((-a, eta3(idx, ell)))
        forms.append(
            LinearForm(f"A*{ell}", tuple(coeffs), 18 * a, min(inst.x_a(ell), n - m))
        )
    for ell in range(1, inst.k + 1):
        coeffs = [(a - 1, "sqrt5"), (m - a * n1, "alpha")]
        if ell > 1:
            coeffs.append((-a, eta3(idx, ell)))
        coeffs.append((1, eta4(n - m)))
        forms.append(LinearForm(f"B*{ell}", tuple(coeffs), 18 * a, inst.x_a(ell)))
    return forms


def basic_forms(inst: InstanceAB, p: int = DEFAULT_PRECISION, p_max: int = PRECISION_CAP) -> list[LinearFormValue]:
    return [_certify(f, p, p_max) for f in basic_form_defs(inst)]


def eliminated_forms(inst: InstanceAB, p: int = DEFAULT_PRECISION, p_max: int = PRECISION_CAP) -> list[LinearFormValue]:
    return [_certify(f, p, p_max) for f in eliminated_form_defs(inst)]


def all_forms(inst: InstanceAB, p: int = DEFAULT_PRECISION, p_max: int = PRECISION_CAP) -> list[LinearFormValue]:
    out = basic_forms(inst, p, p_max)
    if inst.has_b:
        out += eliminated_forms(inst, p, p_max)
    return out


def form_by_tag(inst: InstanceAB, tag: str) -> LinearForm:
    defs = basic_form_defs(inst) + (eliminated_form_defs(inst) if inst.has_b else [])
    for f in defs:
        if f.tag == tag:
            return f
    raise KeyError(f"no form {tag!r} for this instance")


# non-vanishing ------------------------------------------------------------------


@dataclass(frozen=True)
class NonzeroReport:
    tag: str
    argument: Union[NonvanishingCertificate, ParityBranch]
    witness: Optional[BigReal]

    @property
    def nonzero(self) -> bool:
        if isinstance(self.argument, NonvanishingCertificate) and self.argument.valid:
            return True
        return self.witness is not None


def verify_nonzero(inst: InstanceAB, form_tag: str, p: int = DEFAULT_PRECISION, p_max: int = 1024) -> NonzeroReport:
    """Valuation certificate (odd n - m), or the parity branch, plus a numeric witness if one is found."""
    if not inst.has_b:
        raise ValueError("non-vanishing is checked for eliminated forms of a full instance")
    if not (form_tag.startswith("A*") or form_tag.startswith("B*")):
        raise ValueError(f"{form_tag!r} is not an eliminated form")
    ell = int(form_tag[2:])
    with_eta4 = form_tag.startswith("B*")
    arg = nonvanishing_certificate(
        ell,
        inst.a,
        inst.n - inst.m,
        with_eta4=with_eta4,
        n_minus_m=inst.n - inst.m if with_eta4 else None,
        indices=inst.indices,
        n=inst.n,
    )
    form = form_by_tag(inst, form_tag)
    witness = None
    prec = p
    while prec <= p_max:
        v = form.evaluate(prec)
        if v.excludes_zero():
            witness = v
            break
        prec *= 2
    return NonzeroReport(form_tag, arg, witness)


# numerical lemmas ------------------------------------------------------------------


def alpha_sum_bound(indices: Sequence[int], prec: int = DEFAULT_PRECISION) -> tuple[BigReal, BigReal]:
    """Enclosures of sum alpha^(-n_i) and |sum beta^(n_i)|."""
    log_a = log_alpha(prec + 16)
    s_alpha = BigReal.exact(0, prec + 16)
    s_beta = BigReal.exact(0, prec + 16)
    for ni in indices:
        t = (-ni * log_a).exp()
        s_alpha = s_alpha + t
        s_beta = s_beta + (t if ni % 2 == 0 else -t)  # beta = -1/alpha
    return s_alpha.with_prec(prec), abs(s_beta).with_prec(prec)


def coefficient_bound_ok(inst: InstanceAB) -> bool:
    """max{|a-1|, |n - a n_1|, |m - a n_1|, a, 1} <= n^2."""
    n1 = inst.indices[0]
    coeffs = [abs(inst.a - 1), abs(inst.n - inst.a * n1), abs(inst.m - inst.a * n1), inst.a, 1]
    return max(coeffs) <= inst.n**2


# JSON lines batch interface ---------------------------------------------------------


def instance_from_json(obj: dict) -> InstanceAB:
    y = int(obj["y"])
    a = int(obj.get("a", 2))
    indices = obj.get("indices")
    rep = ZeckendorfRep(tuple(indices)) if indices is not None else zeckendorf(y)
    n = obj.get("n")
    m = obj.get("m")
    return InstanceAB(y=y, a=a, rep=rep, n=None if n is None else int(n), m=None if m is None else int(m))


def run_batch(lines: Iterable[str], p: int = DEFAULT_PRECISION, p_max: int = PRECISION_CAP) -> Iterable[dict]:
    """One JSON record per form for each instance line; blank lines are skipped."""
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        inst = instance_from_json(json.loads(line))
        for fv in all_forms(inst, p, p_max):
            rec = {"line": lineno, "y": str(inst.y)}
            rec.update(fv.to_json())
            yield rec


__all__ = [
    "APPLICABILITY_THRESHOLD",
    "InstanceAB",
    "LinearForm",
    "LinearFormValue",
    "NonzeroReport",
    "all_forms",
    "alpha_sum_bound",
    "basic_form_defs",
    "basic_forms",
    "coefficient_bound_ok",
    "eliminated_form_defs",
    "eliminated_forms",
    "form_by_tag",
    "instance_from_json",
    "run_batch",
    "verify_nonzero",
]
