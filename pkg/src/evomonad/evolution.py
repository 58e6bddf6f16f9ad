"""Evolutions: trajectories paired with a duration, constant after that duration.

An :class:`Evolution` stores a callable and a duration and always evaluates
the callable at ``min(t, dur)``, so the truncation invariant holds however
the evolution was built.  Nested evolutions (H H X) are simply evolutions
whose values are evolutions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

from .time_core import INF, as_duration, dur_add

DEFAULT_GRID = 256
DEFAULT_HORIZON = 100.0


class Evolution:
    """A value of H X: ``traj`` is total on [0, inf) and read only up to ``dur``."""

    __slots__ = ("_f", "dur")

    def __init__(self, f: Callable[[float], Any], dur: float):
        object.__setattr__(self, "dur", as_duration(dur))
        object.__setattr__(self, "_f", f)

    def __setattr__(self, name, value):
        raise AttributeError("Evolution is immutable")

    def __call__(self, t: float):
        if t < 0:
            raise ValueError(f"evolutions are defined for t >= 0, got {t!r}")
        return self._f(t if t <= self.dur else self.dur)

    at = __call__

    def __repr__(self) -> str:
        return f"Evolution(start={self._f(0.0)!r}, dur={self.dur!r})"


def make_evolution(f: Callable[[float], Any], d: float) -> Evolution:
    return Evolution(f, d)


def evaluate(ev: Evolution, t: float):
    return ev(t)


def theta(ev: Evolution):
    """The starting point of an evolution."""
    return ev(0.0)


def eta(x) -> Evolution:
    """The trivial evolution: constant at ``x`` with duration zero."""
    return Evolution(lambda t: x, 0.0)


def fmap(g: Callable, ev: Evolution) -> Evolution:
    """Functor action of H: post-compose the trajectory, keep the duration."""
    f = ev._f
    return Evolution(lambda t: g(f(t)), ev.dur)


def concat(a: Evolution, b: Evolution) -> Evolution:
    """Run ``a`` for its duration, then ``b`` shifted to start at ``a.dur``."""
    d = a.dur
    if d == INF:
        raise ValueError("cannot concatenate after an evolution of infinite duration")
    fa, fb = a._f, b._f
    return Evolution(lambda t: fa(t) if t <= d else fb(t - d), dur_add(d, b.dur))


def mu(nested: Evolution) -> Evolution:
    """Flatten an evolution of evolutions.

    Up to the outer duration ``d`` the result follows the starting points of
    the inner evolutions; afterwards it follows the inner evolution found at
    ``d``.  With ``d = inf`` there is no second phase.
    """
    d = nested.dur
    f = nested._f
    heads = Evolution(lambda t: f(t)(0.0), d)
    if d == INF:
        return heads
    return concat(heads, f(d))


def time_grid(dur: float, n: int = DEFAULT_GRID, horizon: float = DEFAULT_HORIZON) -> list[float]:
    """Uniform grid on [0, min(dur, horizon)], including 0 and ``dur`` when finite."""
    end = min(dur, horizon)
    if end <= 0:
        return [0.0]
    pts = [end * i / (n - 1) for i in range(n)] if n > 1 else [0.0, end]
    if dur != INF and pts[-1] != dur and dur <= horizon:
        pts.append(dur)
    return pts


def evolution_distance(
    a: Evolution, b: Evolution, n: int = DEFAULT_GRID, horizon: float = DEFAULT_HORIZON
) -> float:
    """Sampled sup distance between two evolutions; ``inf`` if durations disagree."""
    from .spaces import distance

    if (a.dur == INF) != (b.dur == INF):
        return INF
    worst = 0.0 if a.dur == b.dur else abs(a.dur - b.dur)
    grid = sorted(set(time_grid(a.dur, n, horizon)) | set(time_grid(b.dur, n, horizon)))
    for t in grid:
        worst = max(worst, distance(a(t), b(t)))
    return worst


def evolutions_close(a: Evolution, b: Evolution, tol: float = 1e-9, **grid) -> bool:
    return evolution_distance(a, b, **grid) <= tol


@dataclass
class PredynamicalReport:
    ok: bool
    checked: int
    violations: list[tuple[Any, Any]] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def is_predynamical(c: Callable[[Any], Evolution], inputs: Iterable, tol: float = 1e-9) -> PredynamicalReport:
    """Check that ``c(x)`` starts at ``x`` for every sampled input."""
    from .spaces import distance

    violations = []
    n = 0
    for x in inputs:
        n += 1
        start = theta(c(x))
        if distance(start, x) > tol:
            violations.append((x, start))
    return PredynamicalReport(not violations, n, violations)


def jumps(ev: Evolution, bound: float, grid: Sequence[float] | None = None) -> list[tuple[float, float, float]]:
    """Continuity diagnostic: adjacent grid samples whose slope exceeds ``bound``.

    Returns ``(t0, t1, slope)`` triples.  Only scalar-or-tuple values are supported.
    """
    from .spaces import distance

    if grid is None:
        grid = time_grid(ev.dur)
    out = []
    prev_t, prev_v = grid[0], ev(grid[0])
    for t in grid[1:]:
        v = ev(t)
        dt = t - prev_t
        if dt > 0:
            slope = distance(prev_v, v) / dt
            if slope > bound or math.isinf(slope):
                out.append((prev_t, t, slope))
        prev_t, prev_v = t, v
    return out
