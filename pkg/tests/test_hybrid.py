import math

import pytest

from evomonad.catalog import MOON_G, ball, default_registry, maintainer, thermostat
from evomonad.combinators import FeedbackConfig, NotPreDynamical, copy_delay, feedback, iterate, kleisli_compose, lift
from evomonad.combinators import strict_product
from evomonad.evolution import Evolution
from evomonad.hybrid import (
    HybridComponent,
    WATER_H_IN,
    WATER_H_OUT,
    bouncing_ball,
    lift_hybrid,
    observe,
    pos,
    sequencing_counterexample,
    strength_left,
    strength_right,
    vel,
    water_h,
    water_outflow,
    water_pump,
    zpos,
)
from evomonad.spaces import STAR, Product, Real, StateSpace
from evomonad.time_core import INF


def test_strength_pairs_a_constant():
    ev = Evolution(lambda t: t, 2.0)
    assert strength_right("s", ev)(1.0) == ("s", 1.0)
    assert strength_left(ev, "s")(5.0) == (2.0, "s")
    assert strength_right("s", ev).dur == 2.0


def test_closed_forms():
    assert pos(9.8, 0.0, 5.0, 1.0) == pytest.approx(0.1)
    assert vel(9.8, 2.0, 1.0) == pytest.approx(-7.8)
    assert zpos(9.8, 0.0, 5.0) == pytest.approx(math.sqrt(98) / 9.8)
    assert zpos(9.8, 4.9, 0.0) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        zpos(0.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        zpos(9.8, 1.0, -1.0)


def _arc_oracle(g, v, p, arcs):
    total, speeds = 0.0, []
    for _ in range(arcs):
        t = zpos(g, v, p)
        total += t
        v, p = -0.5 * vel(g, v, t), 0.0
        speeds.append(v)
    return total, speeds


def test_ball_arcs():
    b = ball()
    first = b((0.0, 5.0))
    assert first.dur == pytest.approx(1.0101525, abs=1e-6)
    assert first(first.dur)[0] == pytest.approx(4.949747, abs=1e-6)
    b3 = iterate(b, 3)((0.0, 5.0))
    total, speeds = _arc_oracle(9.8, 0.0, 5.0, 3)
    assert b3.dur == pytest.approx(total, abs=1e-9)
    assert speeds[:2] == pytest.approx([4.949747, 2.474874], abs=1e-6)
    assert all(b3(i * 0.01)[1] >= 0 for i in range(253))


def test_moon_ball_is_slower():
    moon = iterate(ball(MOON_G), 2)((0.0, 5.0))
    total, speeds = _arc_oracle(MOON_G, 0.0, 5.0, 2)
    assert moon.dur == pytest.approx(total)
    assert speeds[0] == pytest.approx(math.sqrt(2 * MOON_G * 5) / 2)


def test_ball_zeno_limit_needs_lax_feedback():
    with pytest.raises(NotPreDynamical):
        feedback(ball())((0.0, 5.0))
    ev = feedback(ball(), FeedbackConfig(lax=True))((0.0, 5.0))
    t0 = math.sqrt(98) / 9.8
    v1 = 9.8 * t0 / 2
    assert ev.dur == pytest.approx(t0 + (2 * v1 / 9.8) / (1 - 0.5), abs=1e-6)
    assert ev(ev.dur)[1] == pytest.approx(0.0, abs=1e-9)


def test_observe_drops_state():
    ev = observe(ball())((0.0, 5.0))
    assert ev(0.0) == 5.0


def test_water_pump_alternates():
    w3 = iterate(lift_hybrid(water_pump()), 3)((True, (0.0, 0.0)))
    assert [w3(t)[1] for t in (10, 20, 30)] == [(10.0, 0.0), (10.0, 10.0), (20.0, 10.0)]
    delayed = iterate(kleisli_compose(copy_delay(10.0), lift_hybrid(water_pump())), 3)((True, (0.0, 0.0)))
    assert delayed.dur == 60.0 and delayed(60)[1] == (20.0, 10.0)
    assert delayed(15)[1] == (10.0, 0.0)


def test_water_with_outflow_peaks_at_five():
    hz = kleisli_compose(
        lift(water_h, WATER_H_IN, WATER_H_OUT),
        strict_product(lift_hybrid(water_pump()), lift_hybrid(water_outflow())),
    )
    assert hz.input_space == hz.output_space
    ev = iterate(hz, 3)(((True, (0.0, 0.0)), (STAR, STAR)))
    levels = [ev(i * 0.1)[0][1] for i in range(301)]
    assert max(l1 for l1, _ in levels) == pytest.approx(5.0, abs=1e-9)
    assert max(l2 for _, l2 in levels) == pytest.approx(5.0, abs=1e-9)
    assert ev(5.0)[0][1] == pytest.approx((2.5, 0.0))


def test_water_h_clamps_at_zero():
    assert water_h(((True, (1.0, 4.0)), (STAR, (3.0, 1.0)))) == ((True, (0.0, 3.0)), (STAR, STAR))


def test_sequencing_orders_differ():
    a, b = sequencing_counterexample(thermostat(), maintainer(), 18.0)
    assert a.dur == INF and b.dur == INF
    assert abs(a(1.0)[1] - b(1.0)[1]) > 0.5


def test_hybrid_spaces_carry_the_initial_state():
    c = lift_hybrid(water_pump())
    assert isinstance(c.input_space.left, StateSpace)
    assert c.input_space.coerce((0.0, 0.0)) == (True, (0.0, 0.0))
    h = HybridComponent.from_parts(
        lambda s, i: s + 1, lambda s, i: Evolution(lambda t: i + t, 1.0), Real(), Real(), Real(), 0
    )
    ev = lift_hybrid(h)((0, 2.0))
    assert ev(0.5) == (1, 2.5)
    assert bouncing_ball().initial_state == 0.0


def test_registry_listing_mentions_defaults():
    text = default_registry().listing()
    for needle in ("thermostat", "ball_moon g=1.622", "delay", "water_h"):
        assert needle in text
    assert Product(Real(), Real()) == default_registry().function("add").input_space
