"""Tensorial strength and hybrid components ``S x I -> S x H O``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable

from .combinators import Component, kleisli_compose, lift
from .evolution import Evolution
from .spaces import STAR, UNIT, Evolutions, Finite, Product, Real, Space, StateSpace
from .time_core import monus


def strength_right(x, ev: Evolution) -> Evolution:
    """Pair a constant ``x`` in front of an evolution."""
    return Evolution(lambda t: (x, ev(t)), ev.dur)


def strength_left(ev: Evolution, x) -> Evolution:
    return Evolution(lambda t: (ev(t), x), ev.dur)


@dataclass(frozen=True)
class HybridComponent:
    """A stateful component: ``step(s, i)`` returns the next state and an output evolution."""

    step: Callable[[Any, Any], tuple[Any, Evolution]]
    state_space: Space
    input_space: Space
    output_space: Space
    initial_state: Any
    name: str = "hybrid"

    @classmethod
    def from_parts(cls, discrete, continuous, state_space, input_space, output_space, initial_state, name="hybrid"):
        """Build from a discrete update ``(s, i) -> s'`` and a continuous part ``(s, i) -> H O``."""
        return cls(
            lambda s, i: (discrete(s, i), continuous(s, i)),
            state_space,
            input_space,
            output_space,
            initial_state,
            name,
        )


def lift_hybrid(h: HybridComponent) -> Component:
    """Turn a hybrid component into a Kleisli arrow on ``S x I``.

    The next state rides along as a constant coordinate, so iterating the
    result threads the state through each hand-off.
    """
    state = StateSpace(h.state_space, h.initial_state)
    step = h.step

    def run(si):
        s2, ev = step(si[0], si[1])
        return strength_right(s2, ev)

    return Component(run, Product(state, h.input_space), Product(state, h.output_space), h.name)


def observe(c: Component) -> Component:
    """Drop the state coordinate of a lifted hybrid component."""
    out = c.output_space.right if isinstance(c.output_space, Product) else c.output_space
    return kleisli_compose(lift(lambda sv: sv[1], c.output_space, out, "snd"), c)


def _tau() -> Component:
    return Component(lambda p: strength_right(p[0], p[1]), name="tau")


def _tau_l() -> Component:
    return Component(lambda p: strength_left(p[0], p[1]), name="tau_l")


def left_first() -> Component:
    """``tau . tau_l`` on pairs of evolutions: the left evolution runs first."""
    return kleisli_compose(_tau(), _tau_l())


def right_first() -> Component:
    return kleisli_compose(_tau_l(), _tau())


def sequencing_counterexample(c1: Component, c2: Component, x) -> tuple[Evolution, Evolution]:
    """Apply both orders of strength to ``(c1 x, c2 x)``; the results differ in general."""
    pair = (c1(x), c2(x))
    return left_first()(pair), right_first()(pair)


# -- Newtonian ball ------------------------------------------------------------


def pos(a: float, v: float, p: float, t: float) -> float:
    return p + v * t - 0.5 * a * t * t


def vel(a: float, v: float, t: float) -> float:
    return v - a * t


def zpos(a: float, v: float, p: float) -> float:
    """Time for a body at height ``p`` with upward speed ``v`` to reach the ground."""
    if not a > 0:
        raise ValueError(f"acceleration must be positive, got {a!r}")
    if p < 0:
        raise ValueError(f"height must be non-negative, got {p!r}")
    disc = 2 * a * p + v * v
    if disc < 0:
        raise ValueError("negative discriminant")
    return (math.sqrt(disc) + v) / a


def bouncing_ball(g: float = 9.8, damping: float = 0.5, name: str = "ball") -> HybridComponent:
    """State is the take-off velocity, input and output the height."""

    def step(v, p):
        # landing heights come back as tiny negative rounding residue
        p = max(p, 0.0)
        t_hit = zpos(g, v, p)
        v2 = vel(g, v, t_hit) * -damping
        return v2, Evolution(lambda t: pos(g, v, p, t), t_hit)

    return HybridComponent(step, Real(-10, 10), Real(0, 10), Real(0, 10), 0.0, name)


# -- alternating water pump ----------------------------------------------------

TOP, BOTTOM = True, False
PUMP_STATES = Finite((TOP, BOTTOM), name="{T,F}")
LEVELS = Product(Real(0, 20), Real(0, 20))


def water_pump(period: float = 10.0) -> HybridComponent:
    """Fill tank 1 in state TOP and tank 2 in state BOTTOM, flipping each cycle."""

    def step(s, levels):
        l1, l2 = levels
        if s:
            ev = Evolution(lambda t: (l1 + t, l2), period)
        else:
            ev = Evolution(lambda t: (l1, l2 + t), period)
        return (not s), ev

    return HybridComponent(step, PUMP_STATES, LEVELS, LEVELS, TOP, "water")


def water_outflow(period: float = 10.0) -> HybridComponent:
    """Trivial-state clock running at half speed: both outflows grow as t/2."""

    def step(s, _):
        return s, Evolution(lambda t: (t / 2, t / 2), period)

    return HybridComponent(step, UNIT, UNIT, LEVELS, STAR, "water_z")


def water_h(v):
    """Subtract the outflow from the tank levels, clamping at zero."""
    (s, (l1, l2)), (star, (x, y)) = v
    return (s, (monus(l1, x), monus(l2, y))), (star, STAR)


WATER_H_IN = Product(Product(StateSpace(PUMP_STATES, TOP), LEVELS), Product(StateSpace(UNIT, STAR), LEVELS))
WATER_H_OUT = Product(Product(StateSpace(PUMP_STATES, TOP), LEVELS), Product(StateSpace(UNIT, STAR), UNIT))


def evolution_pairs(space: Space = Real()) -> Space:
    return Product(Evolutions(space), Evolutions(space))
