import math

import pytest
from hypothesis import given, strategies as st

from evomonad.evolution import (
    Evolution,
    concat,
    eta,
    evolution_distance,
    fmap,
    is_predynamical,
    jumps,
    mu,
    theta,
    time_grid,
)
from evomonad.time_core import INF

reals = st.floats(-50, 50)
finite_durs = st.floats(0, 20)
durs = st.one_of(finite_durs, st.just(INF))
times = st.floats(0, 60)


def ramp(x, rate, d):
    return Evolution(lambda t: x + rate * t, d)


def wave(x, d):
    return Evolution(lambda t: x + math.sin(t), d)


def close(a, b, tol=1e-9):
    return evolution_distance(a, b, n=64, horizon=60) <= tol


def test_truncation_holds_the_endpoint():
    ev = ramp(1.0, 2.0, 3.0)
    assert ev(10.0) == ev(3.0) == 7.0
    assert ev.at(1.0) == 3.0
    with pytest.raises(ValueError):
        ev(-1.0)


def test_evolution_is_immutable():
    ev = eta(1)
    with pytest.raises(AttributeError):
        ev.dur = 5


@given(reals)
def test_eta_is_a_point(x):
    ev = eta(x)
    assert ev.dur == 0 and ev(0) == x and ev(100) == x and theta(ev) == x


@given(reals, reals, durs, times)
def test_fmap_keeps_duration(x, r, d, t):
    ev = fmap(lambda v: 2 * v, ramp(x, r, d))
    assert ev.dur == d
    assert ev(t) == 2 * ramp(x, r, d)(t)


@given(reals, finite_durs, durs)
def test_concat_shifts_the_second(x, d, e):
    a, b = ramp(x, 1.0, d), wave(x + d, e)
    c = concat(a, b)
    assert c.dur == d + e
    assert c(d / 2) == a(d / 2)
    assert c(d + 0.5) == pytest.approx(b(0.5))


def test_concat_after_infinite_is_an_error():
    with pytest.raises(ValueError):
        concat(ramp(0, 1, INF), eta(0))


@given(reals, durs)
def test_monad_unit_laws(x, d):
    ev = ramp(x, 0.5, d)
    assert close(mu(eta(ev)), ev)
    assert close(mu(fmap(eta, ev)), ev)


@given(reals, finite_durs, finite_durs, durs)
def test_monad_associativity(x, d1, d2, d3):
    # an evolution of evolutions of evolutions with input-dependent durations
    nest = Evolution(
        lambda s: Evolution(lambda u: wave(x + s + u, d3), d2 + s / 10), d1
    )
    assert close(mu(mu(nest)), mu(fmap(mu, nest)))


@given(reals, durs, st.floats(-3, 3))
def test_naturality_of_eta_and_mu(x, d, k):
    g = lambda v: k * v + 1  # noqa: E731
    assert close(fmap(g, eta(x)), eta(g(x)))
    nest = Evolution(lambda s: ramp(x + s, 1.0, 2.0), 1.0)
    assert close(fmap(g, mu(nest)), mu(fmap(lambda e: fmap(g, e), nest)))


def test_mu_with_infinite_outer_follows_heads():
    nest = Evolution(lambda s: ramp(s, 5.0, 1.0), INF)
    flat = mu(nest)
    assert flat.dur == INF
    assert flat(7.0) == 7.0


def test_time_grid_includes_endpoints():
    g = time_grid(2.0, 5)
    assert g[0] == 0.0 and g[-1] == 2.0 and len(g) == 5
    assert time_grid(INF, 3, horizon=10) == [0.0, 5.0, 10.0]
    assert time_grid(0.0) == [0.0]


def test_distance_flags_infinite_vs_finite():
    assert evolution_distance(ramp(0, 1, INF), ramp(0, 1, 5)) == INF
    assert evolution_distance(ramp(0, 1, 5), ramp(0, 1, 5)) == 0.0


def test_predynamical_check():
    assert is_predynamical(lambda x: wave(x, 1.0), [0.0, 1.0, -2.0])
    rep = is_predynamical(lambda x: eta(2 * x), [0.0, 3.0])
    assert not rep and rep.checked == 2 and rep.violations == [(3.0, 6.0)]


def test_jumps_finds_discontinuities():
    step = Evolution(lambda t: 0.0 if t < 1 else 10.0, 2.0)
    found = jumps(step, bound=100.0, grid=[0.0, 0.5, 0.999, 1.0, 2.0])
    assert [(a, b) for a, b, _ in found] == [(0.999, 1.0)]
    assert jumps(wave(0, 5), bound=1.01) == []
