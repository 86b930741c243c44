"""Univariate convex objectives, evaluated pointwise on integers.

Every kind is O(1) per evaluation except the piecewise-linear table,
which is O(log k) in the number of breakpoints.  Integer-parameter
kinds evaluate in exact integer arithmetic.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

from .errors import DomainError, InputError


class ConvexFn:
    """Base class for pointwise-evaluated univariate convex functions."""

    kind = "abstract"

    def __call__(self, z: int) -> int | float:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def __repr__(self) -> str:
        items = ", ".join(f"{k}={v!r}" for k, v in self.to_json().items() if k != "kind")
        return f"{type(self).__name__}({items})"


@dataclass(frozen=True, repr=False)
class Zero(ConvexFn):
    kind = "zero"

    def __call__(self, z):
        return 0

    def to_json(self):
        return {"kind": "zero"}


@dataclass(frozen=True, repr=False)
class Quadratic(ConvexFn):
    """a*z**2 + b*z + c with a >= 0."""

    a: int | float
    b: int | float = 0
    c: int | float = 0
    kind = "quadratic"

    def __post_init__(self):
        if self.a < 0:
            raise InputError(f"quadratic needs a >= 0, got a={self.a}")

    def __call__(self, z):
        return (self.a * z + self.b) * z + self.c

    def to_json(self):
        return {"kind": "quadratic", "a": self.a, "b": self.b, "c": self.c}


@dataclass(frozen=True, repr=False)
class AbsDev(ConvexFn):
    """|z - b|."""

    b: int | float = 0
    kind = "abs"

    def __call__(self, z):
        return abs(z - self.b)

    def to_json(self):
        return {"kind": "abs", "b": self.b}


@dataclass(frozen=True, repr=False)
class Reciprocal(ConvexFn):
    """c/z with c > 0, defined on z >= 1."""

    c: int | float
    kind = "reciprocal"

    def __post_init__(self):
        if not self.c > 0:
            raise InputError(f"reciprocal needs c > 0, got c={self.c}")

    def __call__(self, z):
        if z < 1:
            raise DomainError(f"reciprocal undefined at z={z}")
        return self.c / z

    def to_json(self):
        return {"kind": "reciprocal", "c": self.c}


class PiecewiseLinear(ConvexFn):
    """Convex piecewise-linear interpolation of (x, y) breakpoints.

    Between breakpoints the value is linearly interpolated; outside the
    table the first/last slope is extended.  A single breakpoint means a
    constant function.  Slopes must be non-decreasing.
    """

    kind = "pwl"

    def __init__(self, points):
        pts = [(x, y) for x, y in points]
        if not pts:
            raise InputError("pwl needs at least one breakpoint")
        if any(pts[i][0] >= pts[i + 1][0] for i in range(len(pts) - 1)):
            raise InputError("pwl breakpoints must have strictly increasing x")
        slopes = [
            (pts[i + 1][1] - pts[i][1]) / (pts[i + 1][0] - pts[i][0])
            for i in range(len(pts) - 1)
        ]
        if any(slopes[i] > slopes[i + 1] for i in range(len(slopes) - 1)):
            raise InputError("pwl breakpoints are not convex (decreasing slope)")
        self.xs = tuple(p[0] for p in pts)
        self.ys = tuple(p[1] for p in pts)
        self._slopes = tuple(slopes)

    def __call__(self, z):
        xs, ys = self.xs, self.ys
        if len(xs) == 1:
            return ys[0]
        if z <= xs[0]:
            return ys[0] + self._slopes[0] * (z - xs[0])
        if z >= xs[-1]:
            return ys[-1] + self._slopes[-1] * (z - xs[-1])
        k = bisect_right(xs, z) - 1
        return ys[k] + self._slopes[k] * (z - xs[k])

    def to_json(self):
        return {"kind": "pwl", "points": [list(p) for p in zip(self.xs, self.ys)]}

    def __eq__(self, other):
        return (
            isinstance(other, PiecewiseLinear)
            and self.xs == other.xs
            and self.ys == other.ys
        )

    def __hash__(self):
        return hash((self.xs, self.ys))


ZERO = Zero()


def objective_from_json(obj: dict | None) -> ConvexFn:
    """Decode an objective from its JSON dict; None means the zero function."""
    if obj is None:
        return ZERO
    kind = obj.get("kind")
    if kind == "zero":
        return ZERO
    if kind == "quadratic":
        return Quadratic(obj["a"], obj.get("b", 0), obj.get("c", 0))
    if kind == "abs":
        return AbsDev(obj.get("b", 0))
    if kind == "reciprocal":
        return Reciprocal(obj["c"])
    if kind == "pwl":
        return PiecewiseLinear(obj["points"])
    raise InputError(f"unknown objective kind: {kind!r}")
