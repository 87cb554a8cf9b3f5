import json
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fibpow.fib_core import fib, zeckendorf
from fibpow.linforms import (
    InstanceAB,
    alpha_sum_bound,
    all_forms,
    basic_forms,
    coefficient_bound_ok,
    eliminated_forms,
    form_by_tag,
    instance_from_json,
    run_batch,
    verify_nonzero,
)
from fibpow.quad_field import NonvanishingCertificate, ParityBranch
from fibpow.search import enumerate_solutions, instance_of
from oracles import to_fraction

KNOWN = InstanceAB.from_y(3864, 2, 36, 12)


def by_tag(values):
    return {v.tag: v for v in values}


def test_known_instance_shape():
    assert KNOWN.indices == (18, 16, 13, 10, 5)
    assert KNOWN.k == 5 and KNOWN.reduced


def test_known_basic_forms():
    forms = by_tag(basic_forms(KNOWN))
    b1 = forms["B1"]
    assert b1.exponent == 24 and b1.applicable and b1.verdict is True
    assert forms["B2"].exponent == 36 and forms["B2"].verdict is True
    assert forms["A5"].exponent == 18 and forms["A5"].verdict is True
    a1 = forms["A1"]
    assert a1.exponent == 2 and not a1.applicable and a1.verdict is None


def test_every_applicable_form_at_the_known_solution_is_certified():
    values = all_forms(KNOWN)
    applicable = [v.tag for v in values if v.applicable]
    assert set(applicable) == {"A3", "A4", "A5", "B1", "B2", "A*3", "A*4", "A*5", "B*3", "B*4", "B*5"}
    assert all(v.verdict is True for v in values if v.applicable)


def test_eliminated_form_examples():
    forms = by_tag(eliminated_forms(KNOWN))
    b5 = forms["B*5"]
    assert b5.verdict is True and b5.exponent == 18
    assert form_by_tag(KNOWN, "B*5").factor == 36
    a1 = form_by_tag(KNOWN, "A*1")
    assert a1.factor == 36 and a1.exponent == 2 and not a1.applicable
    assert a1.coefficient_of("sqrt5") == 1 and a1.coefficient_of("alpha") == 0


def test_single_term_instance_without_b():
    inst = InstanceAB.from_y(fib(10))
    forms = basic_forms(inst)
    assert [f.tag for f in forms] == ["A1"]
    a1 = forms[0]
    assert a1.exponent == 10 and a1.verdict is True
    with mpmath.workdps(60):
        phi = (1 + mpmath.sqrt(5)) / 2
        ref = mpmath.log(55) + mpmath.log(mpmath.sqrt(5)) - 10 * mpmath.log(phi)
    assert a1.value.contains(to_fraction(ref))


def test_elimination_identity():
    a = KNOWN.a
    for ell in range(1, KNOWN.k + 1):
        A = form_by_tag(KNOWN, f"A{ell}").evaluate(128)
        B1 = form_by_tag(KNOWN, "B1").evaluate(128)
        B2 = form_by_tag(KNOWN, "B2").evaluate(128)
        assert (a * A - B1).overlaps(form_by_tag(KNOWN, f"A*{ell}").evaluate(128))
        assert (a * A - B2).overlaps(form_by_tag(KNOWN, f"B*{ell}").evaluate(128))


def test_nonvanishing_at_the_known_solution():
    rep = verify_nonzero(KNOWN, "B*1")
    assert isinstance(rep.argument, ParityBranch) and rep.argument.consistent is True
    assert rep.witness is not None and rep.witness.excludes_zero()
    assert rep.nonzero
    assert isinstance(verify_nonzero(KNOWN, "A*3").argument, NonvanishingCertificate)


def test_nonvanishing_for_odd_parity():
    inst = InstanceAB.from_y(40, 2, 17, 4)  # n - m = 13
    for ell in range(1, inst.k + 1):
        rep = verify_nonzero(inst, f"B*{ell}")
        assert isinstance(rep.argument, NonvanishingCertificate) and rep.argument.valid


def test_verify_nonzero_rejects_basic_forms():
    with pytest.raises(ValueError):
        verify_nonzero(KNOWN, "A1")
    with pytest.raises(ValueError):
        verify_nonzero(InstanceAB.from_y(10), "A*1")


@given(st.integers(2, 10**12))
def test_a_side_forms_hold_for_any_y(y):
    for v in basic_forms(InstanceAB.from_y(y)):
        assert v.verdict is True or not v.applicable


def test_a_side_forms_hold_for_small_y():
    for y in range(2, 2001):
        for v in basic_forms(InstanceAB.from_y(y)):
            assert v.verdict is True or not v.applicable


def test_instance_validation():
    with pytest.raises(ValueError):
        InstanceAB(y=10, a=2, rep=zeckendorf(11))
    with pytest.raises(ValueError):
        InstanceAB.from_y(3864, 2, 36, 11)
    with pytest.raises(ValueError):
        InstanceAB.from_y(3864, 2, 36, None)


def test_alpha_sums_random_tuples():
    rng = random.Random(4)
    for _ in range(1000):
        k = rng.randint(1, 40)
        idx = sorted(rng.sample(range(0, 300), k), reverse=True)
        sa, sb = alpha_sum_bound(idx)
        assert sa.certainly_lt(3) and sb.certainly_lt(3)


def test_alpha_sum_worst_case_approaches_limit():
    sa, _ = alpha_sum_bound(list(range(400, -1, -1)))
    # sum_{i >= 0} alpha^-i = alpha^2 ~ 2.618
    assert sa.certainly_lt(Fraction(2619, 1000)) and Fraction(2617, 1000) < sa.lower


def test_lemma5_on_enumerated_solutions():
    for s in enumerate_solutions(60):
        if s.y < 2:
            continue
        inst = instance_of(s)
        if inst.reduced:
            assert inst.indices[0] < s.n and s.a < s.n
            assert coefficient_bound_ok(inst)


def test_batch_interface():
    lines = [json.dumps({"y": 3864, "a": 2, "n": 36, "m": 12}), "", json.dumps({"y": 55})]
    records = list(run_batch(lines))
    assert {r["line"] for r in records} == {1, 3}
    b1 = next(r for r in records if r["tag"] == "B1")
    assert b1["verdict"] == "certified" and b1["exponent"] == 24
    a1 = next(r for r in records if r["tag"] == "A*1")
    assert a1["verdict"] == "skipped" and a1["coefficients"][:2] == [[1, "sqrt5"], [0, "alpha"]]
    json.dumps(records)


def test_instance_from_json_with_indices():
    inst = instance_from_json({"y": 100, "indices": [11, 6, 4]})
    assert inst.indices == (11, 6, 4)
    with pytest.raises(ValueError):
        instance_from_json({"y": 100, "indices": [11, 6]})
