import json
import warnings

import pytest

from evomonad.catalog import amplifier, maintainer, sig, thermostat
from evomonad.combinators import copy, kleisli_compose, lift
from evomonad.laws import (
    GROUPS,
    EqConfig,
    ToleranceWarning,
    build_laws,
    component_approx_eq,
    reports_to_json,
    reports_to_text,
    run_law_suite,
)
from evomonad.spaces import Product, Real

FAST = EqConfig(input_samples=16, time_grid=64)


def test_reflexive_with_zero_deviation():
    rep = component_approx_eq(thermostat(), thermostat())
    assert rep.status == "pass" and rep.worst_deviation == 0.0 and rep.witness is None


@pytest.mark.parametrize("c", [thermostat(), maintainer(), amplifier(), sig(3.0, 2.0)])
def test_copy_is_a_left_unit(c):
    assert component_approx_eq(kleisli_compose(copy(), c), c).passed


def test_amplifier_is_not_copy():
    rep = component_approx_eq(amplifier(), copy(Real(-5, 25)))
    assert rep.status == "fail"
    x, t = rep.witness
    assert rep.worst_deviation == pytest.approx(abs(x))


def test_space_mismatch_is_a_failure_with_reason():
    rep = component_approx_eq(thermostat(), lift(lambda p: p, Product(Real(), Real())))
    assert rep.status == "fail" and "space mismatch" in rep.witness[0]


def test_nothing_comparable_is_skipped():
    from evomonad.combinators import strict_pair

    bad = strict_pair(thermostat(), maintainer())
    rep = component_approx_eq(bad, bad, inputs=[1.0, 2.0])
    assert rep.status.startswith("skipped(")


def test_config_validation():
    for kw in ({"input_samples": 0}, {"horizon": float("inf")}, {"tol": -1.0}):
        with pytest.raises(ValueError):
            EqConfig(**kw)


def test_law_catalogue():
    laws = build_laws()
    ids = [law.law_id for law in laws]
    assert len(ids) == len(set(ids)) == 44
    assert {law.group for law in laws} == set(GROUPS)
    assert [law.law_id for law in laws if not law.expect_equal] == ["commutativity.counterexample"]


@pytest.mark.parametrize("group", GROUPS)
def test_each_group_passes(group):
    reports = run_law_suite(FAST, [group])
    assert reports
    for r in reports:
        assert r.status == "pass", r.line()


def test_only_monad_gives_three_reports():
    assert len(run_law_suite(FAST, ["monad"])) == 3


def test_unknown_group_is_rejected():
    with pytest.raises(ValueError):
        run_law_suite(FAST, ["nope"])


def test_counterexample_reports_the_inequality():
    (rep,) = run_law_suite(FAST, ["commutativity"])
    assert rep.passed and rep.worst_deviation > 0.5 and rep.witness is not None


def test_zero_tolerance_warns():
    with pytest.warns(ToleranceWarning):
        run_law_suite(EqConfig(input_samples=4, time_grid=8, tol=0.0), ["monad"])


def test_suite_is_deterministic_and_serialisable():
    a = reports_to_json(run_law_suite(EqConfig(seed=7, input_samples=8), ["product", "commutativity"]))
    b = reports_to_json(run_law_suite(EqConfig(seed=7, input_samples=8), ["product", "commutativity"]))
    assert a == b
    rows = json.loads(a)
    assert set(rows[0]) == {"law_id", "status", "worst_deviation", "witness"}
    text = reports_to_text(run_law_suite(FAST, ["em"]))
    assert text.endswith("2/2 laws passed\n")


def test_seed_changes_samples():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        r0 = run_law_suite(EqConfig(seed=0, input_samples=4), ["commutativity"])[0]
        r1 = run_law_suite(EqConfig(seed=1, input_samples=4), ["commutativity"])[0]
    assert r0.witness != r1.witness
