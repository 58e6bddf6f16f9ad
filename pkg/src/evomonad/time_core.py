"""Extended time arithmetic over [0, inf].

Times are finite non-negative floats; durations may also be ``math.inf``.
NaN is rejected wherever a duration or time is validated.
"""

from __future__ import annotations

import math

INF = math.inf

Time = float
Duration = float


def as_duration(d: float) -> Duration:
    """Validate and normalise a duration; ``inf`` is allowed, NaN and negatives are not."""
    d = float(d)
    if math.isnan(d):
        raise ValueError("duration must not be NaN")
    if d < 0:
        raise ValueError(f"duration must be non-negative, got {d!r}")
    return d


def as_time(t: float) -> Time:
    t = float(t)
    if math.isnan(t) or math.isinf(t):
        raise ValueError(f"time must be finite, got {t!r}")
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t!r}")
    return t


def dur_add(a: Duration, b: Duration) -> Duration:
    # float addition already absorbs inf; this only guards inf - inf style misuse
    return as_duration(a) + as_duration(b)


def time_min(t: Time, d: Duration) -> Time:
    return t if t <= d else d


def dur_max(d: Duration, e: Duration) -> Duration:
    return d if d >= e else e


def trunc_sub(t: Time, d: Duration) -> Time:
    """Truncated subtraction on times: ``t - d`` when ``t > d``, else 0."""
    return t - d if t > d else 0.0


def monus(a: float, b: float) -> float:
    """Clamped subtraction over the reals (the thermostat's ``20 - r`` floored at 0)."""
    return a - b if a > b else 0.0


def is_finite(d: Duration) -> bool:
    return d != INF


def format_duration(d: Duration, precision: int = 6) -> str:
    return "inf" if d == INF else f"{d:.{precision}f}"
