"""Components (Kleisli arrows I -> H O) and their composition operators."""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Any, Callable

from .evolution import Evolution, eta, fmap, mu, theta
from .spaces import (
    AnySpace,
    Product,
    Space,
    SpaceMismatch,
    Sum,
    Tagged,
    distance,
    inl,
    inr,
    unify,
)
from .time_core import INF, as_duration, dur_max

ANY = AnySpace()


class CompatibilityError(ValueError):
    """Strict parallel composition met two evolutions of different duration."""

    def __init__(self, x, d1: float, d2: float):
        self.x, self.d1, self.d2 = x, d1, d2
        super().__init__(f"incompatible durations for input {x!r}: {d1!r} vs {d2!r}")


class NonConvergent(RuntimeError):
    """Feedback could not reach the requested time within its iteration budget."""

    def __init__(self, message: str, partial_sum: float, iterations: int):
        self.partial_sum = partial_sum
        self.iterations = iterations
        super().__init__(f"{message} (partial duration {partial_sum!r} after {iterations} iterations)")


class NotPreDynamical(ValueError):
    pass


class Component:
    """A continuous system: a total map from inputs to evolutions."""

    __slots__ = ("fn", "input_space", "output_space", "name")

    def __init__(
        self,
        fn: Callable[[Any], Evolution],
        input_space: Space = ANY,
        output_space: Space = ANY,
        name: str = "component",
    ):
        self.fn = fn
        self.input_space = input_space
        self.output_space = output_space
        self.name = name

    def __call__(self, x) -> Evolution:
        return self.fn(x)

    def __matmul__(self, other: "Component") -> "Component":
        return kleisli_compose(self, other)

    def __repr__(self) -> str:
        return f"<{self.name}: {self.input_space} -> {self.output_space}>"


def _join(a: Space, b: Space, what: str) -> Space:
    try:
        return unify(a, b)
    except SpaceMismatch as e:
        raise SpaceMismatch(f"{what}: {e}") from None


def kleisli_compose(c2: Component, c1: Component) -> Component:
    """``c2 . c1``: run ``c1``, then hand its endpoint to ``c2``."""
    _join(c1.output_space, c2.input_space, f"cannot compose {c2.name} after {c1.name}")
    f1, f2 = c1.fn, c2.fn
    return Component(
        lambda x: mu(fmap(f2, f1(x))),
        c1.input_space,
        c2.output_space,
        f"({c2.name} . {c1.name})",
    )


def copy(space: Space = ANY) -> Component:
    return Component(eta, space, space, "copy")


def copy_delay(d: float, space: Space = ANY) -> Component:
    d = as_duration(d)
    return Component(lambda x: Evolution(lambda t: x, d), space, space, f"delay({d:g})")


def lift(f: Callable, input_space: Space = ANY, output_space: Space = ANY, name: str | None = None) -> Component:
    """Embed a plain function as a zero-duration component."""
    return Component(lambda x: eta(f(x)), input_space, output_space, f"lift({name or getattr(f, '__name__', 'f')})")


def choice(c1: Component, c2: Component) -> Component:
    out = _join(c1.output_space, c2.output_space, "choice branches disagree on output")
    f1, f2 = c1.fn, c2.fn

    def run(v: Tagged) -> Evolution:
        return f1(v.payload) if v.tag == "left" else f2(v.payload)

    return Component(run, Sum(c1.input_space, c2.input_space), out, f"choice({c1.name}, {c2.name})")


def sum_(c1: Component, c2: Component) -> Component:
    """Coproduct functor: route tagged inputs and tag the outputs on the same side."""
    f1, f2 = c1.fn, c2.fn

    def run(v: Tagged) -> Evolution:
        if v.tag == "left":
            return fmap(inl, f1(v.payload))
        return fmap(inr, f2(v.payload))

    return Component(
        run,
        Sum(c1.input_space, c2.input_space),
        Sum(c1.output_space, c2.output_space),
        f"sum({c1.name}, {c2.name})",
    )


def _gamma(x, a: Evolution, b: Evolution, eps_dur: float) -> Evolution:
    d, e = a.dur, b.dur
    if d == INF or e == INF:
        ok = d == e
    else:
        ok = abs(d - e) <= eps_dur
    if not ok:
        raise CompatibilityError(x, d, e)
    return Evolution(lambda t: (a(t), b(t)), d)


def strict_pair(c1: Component, c2: Component, eps_dur: float = 1e-9) -> Component:
    """Parallel composition of compatible components (equal durations required)."""
    inp = _join(c1.input_space, c2.input_space, "strict pair needs a shared input")
    f1, f2 = c1.fn, c2.fn
    return Component(
        lambda x: _gamma(x, f1(x), f2(x), eps_dur),
        inp,
        Product(c1.output_space, c2.output_space),
        f"pair<<{c1.name}, {c2.name}>>",
    )


def strict_product(c1: Component, c2: Component, eps_dur: float = 1e-9) -> Component:
    f1, f2 = c1.fn, c2.fn
    return Component(
        lambda xy: _gamma(xy, f1(xy[0]), f2(xy[1]), eps_dur),
        Product(c1.input_space, c2.input_space),
        Product(c1.output_space, c2.output_space),
        f"({c1.name} [x] {c2.name})",
    )


def delta(a: Evolution, b: Evolution) -> Evolution:
    """Pair two evolutions; the shorter one stalls at its endpoint until the longer ends."""
    return Evolution(lambda t: (a(t), b(t)), dur_max(a.dur, b.dur))


def sync_pair(c1: Component, c2: Component) -> Component:
    inp = _join(c1.input_space, c2.input_space, "sync pair needs a shared input")
    f1, f2 = c1.fn, c2.fn
    return Component(
        lambda x: delta(f1(x), f2(x)),
        inp,
        Product(c1.output_space, c2.output_space),
        f"sync({c1.name}, {c2.name})",
    )


def sync_product(c1: Component, c2: Component) -> Component:
    f1, f2 = c1.fn, c2.fn
    return Component(
        lambda xy: delta(f1(xy[0]), f2(xy[1])),
        Product(c1.input_space, c2.input_space),
        Product(c1.output_space, c2.output_space),
        f"({c1.name} [s] {c2.name})",
    )


def _require_endo(c: Component, what: str) -> Space:
    try:
        return unify(c.input_space, c.output_space)
    except SpaceMismatch:
        raise SpaceMismatch(
            f"{what} needs an endo component, {c.name} maps {c.input_space} to {c.output_space}"
        ) from None


def iterate(c: Component, n: int) -> Component:
    """n-fold Kleisli self-composition; ``iterate(c, 0)`` is copy."""
    if n < 0:
        raise ValueError("iteration count must be non-negative")
    space = _require_endo(c, "iterate")
    result = copy(space)
    for _ in range(n):
        result = kleisli_compose(result, c)
    result.name = f"iterate({c.name}, {n})"
    result.input_space = c.input_space
    result.output_space = c.output_space
    return result


@dataclass(frozen=True)
class FeedbackConfig:
    eps_dur: float = 1e-12
    eps_val: float = 1e-9
    max_iter: int = 10_000
    # consecutive sub-eps_dur increments required before declaring Zeno convergence
    window: int = 3
    cauchy_grid: int = 128
    # permit components whose evolutions do not start at their input
    lax: bool = False
    predyn_tol: float = 1e-9

    def __post_init__(self):
        if not (self.eps_dur > 0 and self.eps_val > 0):
            raise ValueError("eps_dur and eps_val must be positive")
        if self.max_iter < 1 or self.window < 1:
            raise ValueError("max_iter and window must be at least 1")


@dataclass
class FeedbackTrace:
    """Outcome of unrolling ``c`` from one input.

    ``status`` is ``"zeno"`` (durations converged), ``"infinite"`` (some
    iterate has infinite duration) or ``"divergent"`` (budget spent while the
    partial sums kept growing).
    """

    status: str
    sums: list[float]
    inputs: list[Any]
    segments: list[Evolution] = field(repr=False)
    cauchy: float = math.nan

    @property
    def iterations(self) -> int:
        return len(self.segments)

    @property
    def duration(self) -> float:
        return self.sums[-1] if self.status == "zeno" else INF


def _theta_step(fn, y, times: int):
    for _ in range(times):
        y = theta(fn(y))
    return y


def _cauchy_distance(fn, tr_sums, inputs, segments, lax: bool, n: int) -> float:
    """Sampled sup distance between the last two iterates f_{K-1} and f_K."""
    K = len(segments)
    if K < 2:
        return 0.0
    total = tr_sums[-1]
    ts = {total * i / (n - 1) for i in range(n)} if total > 0 else {0.0}
    for j in range(max(0, K - 4), K):
        a, b = tr_sums[j], tr_sums[j + 1]
        ts.update(a + (b - a) * i / 7 for i in range(8))
    worst = 0.0
    for t in sorted(ts):
        if t <= 0:
            continue
        j = bisect.bisect_left(tr_sums, t) - 1
        j = min(max(j, 0), K - 1)
        y = segments[j](t - tr_sums[j])
        if j == K - 1:
            prev, cur = inputs[K - 1], y
        elif lax:
            prev = _theta_step(fn, y, K - 2 - j)
            cur = _theta_step(fn, prev, 1)
        else:
            continue
        worst = max(worst, distance(prev, cur))
    return max(worst, distance(inputs[K - 1], inputs[K]))


def unroll(c: Component, x, cfg: FeedbackConfig = FeedbackConfig()) -> FeedbackTrace:
    """Iterate ``c`` from ``x``, recording the partial duration sums and hand-off points."""
    fn = c.fn
    sums = [0.0]
    inputs = [x]
    segments: list[Evolution] = []
    small = 0
    cauchy = math.nan
    for _ in range(cfg.max_iter):
        y = inputs[-1]
        ev = fn(y)
        if not cfg.lax:
            gap = distance(theta(ev), y)
            if gap > cfg.predyn_tol:
                raise NotPreDynamical(
                    f"{c.name} is not pre-dynamical at {y!r} (starts at {theta(ev)!r}); "
                    "use a lax feedback configuration to waive this"
                )
        segments.append(ev)
        d = ev.dur
        if d == INF:
            sums.append(INF)
            return FeedbackTrace("infinite", sums, inputs, segments)
        sums.append(sums[-1] + d)
        inputs.append(ev(d))
        small = small + 1 if d < cfg.eps_dur else 0
        if small >= cfg.window:
            cauchy = _cauchy_distance(fn, sums, inputs, segments, cfg.lax, cfg.cauchy_grid)
            if cauchy < cfg.eps_val:
                return FeedbackTrace("zeno", sums, inputs, segments, cauchy)
    if small >= cfg.window:
        raise NonConvergent("durations converged but iterates are not Cauchy", sums[-1], len(segments))
    return FeedbackTrace("divergent", sums, inputs, segments, cauchy)


def _feedback_evolution(tr: FeedbackTrace) -> Evolution:
    sums, segments, x = tr.sums, tr.segments, tr.inputs[0]
    reach = sums[-1]
    K = len(segments)

    def traj(t: float):
        if t <= 0:
            return x
        if t > reach:
            raise NonConvergent(f"time {t!r} is beyond the unrolled iterates", reach, K)
        j = bisect.bisect_left(sums, t) - 1
        return segments[j](t - sums[j])

    return Evolution(traj, tr.duration)


def feedback(c: Component, cfg: FeedbackConfig | None = None) -> Component:
    """Infinite iteration of an endo component, detecting Zeno limits.

    The duration is the limit of the partial sums when they converge and
    ``inf`` otherwise.  Evaluating at ``t`` reads the first iterate whose
    accumulated duration reaches ``t``.
    """
    cfg = cfg or FeedbackConfig()
    space = _require_endo(c, "feedback")
    comp = Component(
        lambda x: _feedback_evolution(unroll(c, x, cfg)),
        space,
        space,
        f"feedback({c.name})",
    )
    return comp
