"""Named example systems and liftable functions, shared by the DSL and the CLI."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .combinators import ANY, Component, copy, copy_delay, lift
from .evolution import Evolution
from .hybrid import (
    WATER_H_IN,
    WATER_H_OUT,
    bouncing_ball,
    lift_hybrid,
    water_h,
    water_outflow,
    water_pump,
)
from .spaces import Product, Real
from .time_core import INF, monus

R = Real(-5.0, 25.0)
EARTH_G = 9.8
MOON_G = 1.622


def thermostat(target: float = 20.0) -> Component:
    return Component(lambda x: Evolution(lambda t: x + t, monus(target, x)), R, R, "thermostat")


def maintainer() -> Component:
    return Component(lambda x: Evolution(lambda t: x + math.sin(t), INF), R, R, "maintainer")


def supervisor(limit: float = 20.5) -> Component:
    return Component(lambda x: Evolution(lambda t: x if x <= limit else limit, 0.0), R, R, "supervisor")


def amplifier(gain: float = 2.0) -> Component:
    return Component(lambda x: Evolution(lambda t: x * gain, 0.0), R, R, "amplifier")


def sig(freq: float = 1.0, dur: float = INF) -> Component:
    """Signal generator ``x + sin(freq * t)``."""
    return Component(
        lambda x: Evolution(lambda t: x + math.sin(freq * t), dur), R, R, f"sig({freq:g}, {dur:g})"
    )


def ball(g: float = EARTH_G, damping: float = 0.5) -> Component:
    return lift_hybrid(bouncing_ball(g, damping, f"ball(g={g:g})"))


@dataclass(frozen=True)
class Primitive:
    factory: Callable[..., Component]
    params: tuple[tuple[str, float], ...] = ()
    doc: str = ""

    def build(self, *args: float) -> Component:
        if len(args) > len(self.params):
            raise TypeError(f"expected at most {len(self.params)} arguments, got {len(args)}")
        return self.factory(*args)

    def signature(self, name: str) -> str:
        if not self.params:
            return name
        return name + " " + " ".join(f"{k}={_num(v)}" for k, v in self.params)


@dataclass(frozen=True)
class LiftFn:
    fn: Callable
    input_space: object = ANY
    output_space: object = ANY
    doc: str = ""


def _num(v: float) -> str:
    return "inf" if v == INF else f"{v:g}"


@dataclass
class Registry:
    primitives: dict[str, Primitive] = field(default_factory=dict)
    functions: dict[str, LiftFn] = field(default_factory=dict)

    def primitive(self, name: str, *args: float) -> Component:
        if name not in self.primitives:
            raise KeyError(name)
        comp = self.primitives[name].build(*args)
        return comp

    def function(self, name: str) -> Component:
        f = self.functions[name]
        return lift(f.fn, f.input_space, f.output_space, name)

    def listing(self) -> str:
        lines = ["primitives:"]
        for name in sorted(self.primitives):
            p = self.primitives[name]
            lines.append(f"  {p.signature(name):<36} {p.doc}")
        lines.append("  delay d                              copy that holds its input for d time units")
        lines.append("liftable functions (use as lift(name)):")
        for name in sorted(self.functions):
            lines.append(f"  {name:<36} {self.functions[name].doc}")
        return "\n".join(lines)


RR = Product(Real(), Real())


def default_registry() -> Registry:
    prims = {
        "thermostat": Primitive(thermostat, (("target", 20.0),), "raise x linearly to target, duration target - x"),
        "maintainer": Primitive(maintainer, (), "x + sin t forever"),
        "supervisor": Primitive(supervisor, (("limit", 20.5),), "clamp at limit, duration 0"),
        "amplifier": Primitive(amplifier, (("gain", 2.0),), "constant gain * x, duration 0"),
        "sig": Primitive(sig, (("freq", 1.0), ("dur", INF)), "signal generator x + sin(freq t)"),
        "fm1": Primitive(lambda: sig(1.0, 3 * math.pi), (), "x + sin t for 3 pi"),
        "fm2": Primitive(lambda: sig(3.0, 3 * math.pi), (), "x + sin 3t for 3 pi"),
        "ball": Primitive(ball, (("g", EARTH_G), ("damping", 0.5)), "bouncing ball on (velocity, height)"),
        "ball_earth": Primitive(lambda: ball(EARTH_G), (("g", EARTH_G),), "ball with Earth gravity"),
        "ball_moon": Primitive(lambda: ball(MOON_G), (("g", MOON_G),), "ball with Moon gravity"),
        "water": Primitive(lambda period=10.0: lift_hybrid(water_pump(period)), (("period", 10.0),),
                           "alternating pump on (state, (l1, l2))"),
        "water_z": Primitive(lambda period=10.0: lift_hybrid(water_outflow(period)), (("period", 10.0),),
                             "outflow clock (t/2, t/2)"),
        "copy": Primitive(copy, (), "identity, duration 0"),
        "copy_delay": Primitive(copy_delay, (("d", 10.0),), "identity held for d"),
    }
    funcs = {
        "id": LiftFn(lambda x: x, doc="identity"),
        "add": LiftFn(lambda p: p[0] + p[1], RR, Real(), "(a, b) -> a + b"),
        "sub": LiftFn(lambda p: p[0] - p[1], RR, Real(), "(a, b) -> a - b"),
        "mul": LiftFn(lambda p: p[0] * p[1], RR, Real(), "(a, b) -> a * b"),
        "neg": LiftFn(lambda x: -x, Real(), Real(), "x -> -x"),
        "double": LiftFn(lambda x: 2 * x, Real(), Real(), "x -> 2x"),
        "half": LiftFn(lambda x: x / 2, Real(), Real(), "x -> x/2"),
        "fst": LiftFn(lambda p: p[0], doc="(a, b) -> a"),
        "snd": LiftFn(lambda p: p[1], doc="(a, b) -> b"),
        "swap": LiftFn(lambda p: (p[1], p[0]), doc="(a, b) -> (b, a)"),
        "diag": LiftFn(lambda x: (x, x), doc="x -> (x, x)"),
        "assoc": LiftFn(lambda p: (p[0][0], (p[0][1], p[1])), doc="((a, b), c) -> (a, (b, c))"),
        "water_h": LiftFn(water_h, WATER_H_IN, WATER_H_OUT, "subtract outflow from tank levels"),
    }
    return Registry(prims, funcs)
