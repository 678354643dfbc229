"""Primitive objects and operations in the complex plane.

Points are plain ``complex`` numbers. Lines are anchored at a fixed point and
parameterized by a unit direction; semi-lines trace ``anchor + t**2 * direction``
so the parameter sweep never leaves the forward ray. Circles through the origin
come from reciprocal images of lines, which is where most of the interesting
geometry in this package lives.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

_UNIT_TOL = 1e-12
# relative threshold deciding when three points are too collinear to fit a circle
_DEGENERATE_TOL = 1e-12


class DegenerateCircle(ValueError):
    """Raised when a circle fit collapses (infinite radius)."""


class ReciprocalPole(ZeroDivisionError):
    """Raised on reciprocal of (numerical) zero."""


@dataclass(frozen=True)
class Line:
    """Line ``fixed_point + t * direction`` with ``|direction| == 1``."""

    fixed_point: complex
    direction: complex

    def __post_init__(self):
        if abs(abs(self.direction) - 1.0) > _UNIT_TOL:
            raise ValueError("line direction must have unit modulus")

    def at(self, t: float) -> complex:
        return self.fixed_point + t * self.direction


@dataclass(frozen=True)
class SemiLine:
    """Ray ``anchor + t**2 * direction``; direction need not be unit."""

    anchor: complex
    direction: complex

    def at(self, t: float) -> complex:
        return self.anchor + (t * t) * self.direction


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float


@dataclass(frozen=True)
class IntersectionPair:
    """Ray/circle intersection with arc-length parameters ``t1 <= t2``.

    ``i1`` always carries the negative-radical solution. ``relevance`` counts
    how many of the two parameters are >= 0, i.e. how many intersection points
    lie on the forward ray: 0 (miss or both behind), 1 (only ``i2`` ahead),
    2 (both ahead; tangential contact reports the same point twice).
    """

    i1: complex | None
    i2: complex | None
    t1: float | None
    t2: float | None
    relevance: int


def mobius_reciprocal(z: complex) -> complex:
    """Image of ``z`` under w = 1/z.

    Raises
    ------
    ReciprocalPole
        If ``z`` is zero.
    """
    if z == 0:
        raise ReciprocalPole("reciprocal of zero")
    return 1.0 / z


def complex_sqrt_pair(a: complex) -> tuple[complex, complex]:
    """Both square roots of ``a``, principal first.

    The principal root has argument in (-pi/2, pi/2]; squaring it returns
    ``a`` to machine precision. A negative-zero imaginary part is treated as
    +0 so negative reals stay on the +i branch.
    """
    a = complex(a.real, a.imag + 0.0)
    r = cmath.sqrt(a)
    return r, -r


def derived_semiline(line: Line) -> SemiLine:
    """Semi-line swept by ``line.at(-t) * line.at(t)``.

    The product (p - t v)(p + t v) = p^2 - t^2 v^2 traces the ray anchored at
    p^2 with direction -v^2 as t runs over the reals.
    """
    p = line.fixed_point
    v = line.direction
    return SemiLine(p * p, -(v * v))


def circle_through_origin(p1: complex, p2: complex) -> Circle:
    """Circle through the origin and two further points.

    Raises
    ------
    DegenerateCircle
        If the three points are (numerically) collinear, i.e. the fit has
        infinite radius.
    """
    x1, y1 = p1.real, p1.imag
    x2, y2 = p2.real, p2.imag
    den = 2.0 * (x1 * y2 - y1 * x2)
    scale = max(abs(p1), abs(p2)) ** 2
    if scale == 0.0 or abs(den) < _DEGENERATE_TOL * scale:
        raise DegenerateCircle("infinite radius / degenerate z-circumference")
    q1 = x1 * x1 + y1 * y1
    q2 = x2 * x2 + y2 * y2
    h = (y2 * q1 - y1 * q2) / den
    k = (x1 * q2 - x2 * q1) / den
    center = complex(h, k)
    return Circle(center, abs(center))


def intersect_ray_circle(anchor: complex, direction: complex,
                         circle: Circle) -> IntersectionPair:
    """Intersect the ray ``anchor + t * direction`` (t real) with a circle.

    ``direction`` is renormalized, so ``t1``/``t2`` are signed arc lengths
    from the anchor. Points are populated whenever the supporting line meets
    the circle; ``relevance`` alone decides how many lie on the forward ray.
    """
    v = direction / abs(direction)
    d = circle.center - anchor
    dot = d.real * v.real + d.imag * v.imag
    disc = dot * dot - (d.real * d.real + d.imag * d.imag) + circle.radius ** 2
    if disc < 0.0:
        return IntersectionPair(None, None, None, None, 0)
    s = math.sqrt(disc)
    t1 = dot - s
    t2 = dot + s
    if t1 >= 0.0:
        relevance = 2
    elif t2 >= 0.0:
        relevance = 1
    else:
        relevance = 0
    return IntersectionPair(anchor + t1 * v, anchor + t2 * v, t1, t2, relevance)
