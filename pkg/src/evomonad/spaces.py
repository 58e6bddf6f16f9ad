"""Value spaces: descriptors used for type checking, input sampling and distances.

Values are plain Python data: floats for reals, 2-tuples for products,
:class:`Tagged` for coproducts, ``STAR`` for the single element of the unit
space, and arbitrary hashables for finite state spaces.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Any as AnyValue
from typing import Hashable


class _Star:
    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "*"

    def __reduce__(self):
        return (_Star, ())


STAR = _Star()


@dataclass(frozen=True)
class Tagged:
    """A coproduct element: ``tag`` is ``"left"`` or ``"right"``."""

    tag: str
    payload: AnyValue

    def __post_init__(self):
        if self.tag not in ("left", "right"):
            raise ValueError(f"tag must be 'left' or 'right', got {self.tag!r}")


def inl(x) -> Tagged:
    return Tagged("left", x)


def inr(y) -> Tagged:
    return Tagged("right", y)


class SpaceMismatch(TypeError):
    """Two components were wired through incompatible spaces."""


class Space:
    """Base class of space descriptors."""

    def contains(self, v) -> bool:
        raise NotImplementedError

    def sample(self, rng: random.Random):
        raise NotImplementedError

    def coerce(self, v):
        if self.contains(v):
            return v
        raise ValueError(f"{v!r} is not an element of {self}")


@dataclass(frozen=True)
class AnySpace(Space):
    """Wildcard used by polymorphic components such as ``copy``."""

    def contains(self, v) -> bool:
        return True

    def sample(self, rng):
        return rng.uniform(-10.0, 10.0)

    def __str__(self) -> str:
        return "?"


@dataclass(frozen=True)
class Real(Space):
    # sampling range only; two Real spaces are the same space regardless of it
    lo: float = field(default=-10.0, compare=False)
    hi: float = field(default=10.0, compare=False)

    def contains(self, v) -> bool:
        return isinstance(v, (int, float)) and not isinstance(v, bool) and not math.isnan(v)

    def sample(self, rng):
        return rng.uniform(self.lo, self.hi)

    def coerce(self, v):
        if self.contains(v):
            return float(v)
        raise ValueError(f"{v!r} is not a real number")

    def __str__(self) -> str:
        return "R"


@dataclass(frozen=True)
class Finite(Space):
    values: tuple[Hashable, ...]
    name: str = field(default="", compare=False)

    def contains(self, v) -> bool:
        return any(v == x and type(v) is type(x) for x in self.values)

    def sample(self, rng):
        return self.values[rng.randrange(len(self.values))]

    def __str__(self) -> str:
        return self.name or "{" + ",".join(map(repr, self.values)) + "}"


UNIT = Finite((STAR,), name="1")


@dataclass(frozen=True)
class Product(Space):
    left: Space
    right: Space

    def contains(self, v) -> bool:
        return (
            isinstance(v, tuple)
            and len(v) == 2
            and self.left.contains(v[0])
            and self.right.contains(v[1])
        )

    def sample(self, rng):
        return (self.left.sample(rng), self.right.sample(rng))

    def coerce(self, v):
        if isinstance(v, tuple) and len(v) == 2:
            try:
                return (self.left.coerce(v[0]), self.right.coerce(v[1]))
            except ValueError:
                pass
        # a bare observable is paired with the initial state of a hybrid component
        if isinstance(self.left, StateSpace):
            return (self.left.initial, self.right.coerce(v))
        raise ValueError(f"{v!r} is not an element of {self}")

    def __str__(self) -> str:
        return f"({self.left} x {self.right})"


@dataclass(frozen=True)
class Sum(Space):
    left: Space
    right: Space

    def contains(self, v) -> bool:
        if not isinstance(v, Tagged):
            return False
        side = self.left if v.tag == "left" else self.right
        return side.contains(v.payload)

    def sample(self, rng):
        if rng.random() < 0.5:
            return inl(self.left.sample(rng))
        return inr(self.right.sample(rng))

    def coerce(self, v):
        if isinstance(v, Tagged):
            side = self.left if v.tag == "left" else self.right
            return Tagged(v.tag, side.coerce(v.payload))
        raise ValueError(f"{v!r} is not an element of {self}")

    def __str__(self) -> str:
        return f"({self.left} + {self.right})"


@dataclass(frozen=True)
class StateSpace(Space):
    """Internal state space of a hybrid component, carrying its initial state."""

    inner: Space
    initial: AnyValue

    def contains(self, v) -> bool:
        return self.inner.contains(v)

    def sample(self, rng):
        return self.inner.sample(rng)

    def coerce(self, v):
        return self.inner.coerce(v)

    def __str__(self) -> str:
        return f"S[{self.inner}]"


@dataclass(frozen=True)
class Evolutions(Space):
    """The space H X, for components whose values are themselves evolutions."""

    inner: Space

    def contains(self, v) -> bool:
        from .evolution import Evolution

        return isinstance(v, Evolution)

    def sample(self, rng):
        from .evolution import Evolution

        a, b = self.inner.sample(rng), rng.uniform(0.0, 5.0)
        return Evolution(lambda t: a, b)

    def __str__(self) -> str:
        return f"H{self.inner}"


def unify(a: Space, b: Space) -> Space:
    """Return the common space of ``a`` and ``b``; raise SpaceMismatch otherwise."""
    if isinstance(a, AnySpace):
        return b
    if isinstance(b, AnySpace):
        return a
    if isinstance(a, StateSpace) and not isinstance(b, StateSpace):
        return StateSpace(unify(a.inner, b), a.initial)
    if isinstance(b, StateSpace) and not isinstance(a, StateSpace):
        return StateSpace(unify(a, b.inner), b.initial)
    if type(a) is not type(b):
        raise SpaceMismatch(f"{a} does not match {b}")
    if isinstance(a, (Product, Sum)):
        return type(a)(unify(a.left, b.left), unify(a.right, b.right))
    if isinstance(a, StateSpace):
        return StateSpace(unify(a.inner, b.inner), a.initial)
    if isinstance(a, Evolutions):
        return Evolutions(unify(a.inner, b.inner))
    if a != b:
        raise SpaceMismatch(f"{a} does not match {b}")
    return a


def compatible(a: Space, b: Space) -> bool:
    try:
        unify(a, b)
    except SpaceMismatch:
        return False
    return True


def distance(a, b) -> float:
    """Sup-style distance between two values: max over coordinates, inf on shape mismatch."""
    from .evolution import Evolution, evolution_distance

    if isinstance(a, bool) or isinstance(b, bool):
        return 0.0 if a == b else math.inf
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        if a == b:
            return 0.0
        return abs(a - b)
    if isinstance(a, tuple) and isinstance(b, tuple):
        if len(a) != len(b):
            return math.inf
        return max((distance(x, y) for x, y in zip(a, b)), default=0.0)
    if isinstance(a, Tagged) and isinstance(b, Tagged):
        if a.tag != b.tag:
            return math.inf
        return distance(a.payload, b.payload)
    if isinstance(a, Evolution) and isinstance(b, Evolution):
        return evolution_distance(a, b)
    return 0.0 if a == b else math.inf


def approx_eq(a, b, tol: float) -> bool:
    return distance(a, b) <= tol


def flatten(v, prefix: str = "y") -> list[tuple[str, AnyValue]]:
    """Flatten a value into named scalar columns, e.g. ``((1, 2), 3)`` -> y_0_0, y_0_1, y_1."""
    if isinstance(v, tuple):
        out = []
        for i, x in enumerate(v):
            out.extend(flatten(x, f"{prefix}_{i}"))
        return out
    if isinstance(v, Tagged):
        return [(f"{prefix}_tag", v.tag)] + flatten(v.payload, f"{prefix}_val")
    return [(prefix, v)]
