import math
import pickle
import random

import pytest

from evomonad.evolution import Evolution
from evomonad.spaces import (
    STAR,
    UNIT,
    AnySpace,
    Evolutions,
    Finite,
    Product,
    Real,
    SpaceMismatch,
    StateSpace,
    Sum,
    Tagged,
    approx_eq,
    compatible,
    distance,
    flatten,
    inl,
    inr,
    unify,
)


def test_star_is_a_singleton():
    assert pickle.loads(pickle.dumps(STAR)) is STAR
    assert repr(STAR) == "*"
    assert UNIT.contains(STAR)


def test_tags_are_checked():
    with pytest.raises(ValueError):
        Tagged("middle", 1)
    assert inl(1) != inr(1)


def test_real_ranges_do_not_affect_equality():
    assert Real(0, 1) == Real(-5, 25)
    assert unify(Real(0, 1), AnySpace()) == Real(0, 1)


def test_unify_reports_mismatch():
    with pytest.raises(SpaceMismatch):
        unify(Real(), Product(Real(), Real()))
    assert compatible(Sum(Real(), UNIT), Sum(Real(), UNIT))
    assert not compatible(Finite((True, False)), Real())


def test_sampling_stays_in_the_space():
    rng = random.Random(1)
    space = Product(StateSpace(Finite((True, False)), True), Sum(Real(0, 2), UNIT))
    for _ in range(50):
        assert space.contains(space.sample(rng))


def test_coerce_fills_hybrid_state():
    space = Product(StateSpace(Finite((True, False)), True), Product(Real(), Real()))
    assert space.coerce((0, 1)) == (True, (0.0, 1.0))
    assert space.coerce((False, (0, 1))) == (False, (0.0, 1.0))
    with pytest.raises(ValueError):
        Real().coerce("x")
    with pytest.raises(ValueError):
        Sum(Real(), Real()).coerce(3.0)


def test_distance_is_a_sup_metric():
    assert distance((1.0, (2.0, 3.0)), (1.5, (2.0, 1.0))) == 2.0
    assert distance(inl(1.0), inr(1.0)) == math.inf
    assert distance(True, False) == math.inf
    assert distance(STAR, STAR) == 0.0
    a = Evolution(lambda t: t, 1.0)
    assert distance(a, Evolution(lambda t: t + 0.25, 1.0)) == pytest.approx(0.25)
    assert approx_eq(1.0, 1.0 + 1e-12, 1e-9)
    assert Evolutions(Real()).contains(a)


def test_flatten_names_columns():
    assert flatten(((1, 2), 3)) == [("y_0_0", 1), ("y_0_1", 2), ("y_1", 3)]
    assert flatten(inl(4.0)) == [("y_tag", "left"), ("y_val", 4.0)]
