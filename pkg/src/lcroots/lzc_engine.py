"""Per-angle geometric machinery of the LC method.

For a monic polynomial p and an angle theta, the construction hangs off the
fixed point P1 = -C1/2 and the unit direction v = e^(i theta):

* the base line  l1(t) = P1 + t v,
* the z-circumference zC, the reciprocal-type image (-1)^n Cn / l1(t),
  a circle through the origin,
* the terminal curve tC(t), a polynomial combination of l1 samples that
  collapses onto a terminal semi-line tL once t is pinned at a minimizer
  of the squared distance |tC - zC|^2 (the DSD),
* projections of the tL/zC intersections back onto l1, whose weighted
  signed error e crosses zero exactly when the ray points at a root.

Degree 2 is closed form, degree 3 skips the optimizer entirely (tL is
theta-determined), degree >= 4 needs a DSD minimizer t* per angle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .complex_geometry import (
    Circle,
    DegenerateCircle,
    IntersectionPair,
    ReciprocalPole,
    SemiLine,
    circle_through_origin,
    intersect_ray_circle,
)
from .polynomial import MonicPolynomial

_TAU = 2.0 * math.pi
_POLE_EPS = 1e-300


def normalize_theta(theta: float) -> float:
    """Reduce to [-pi, pi) with the exact IEEE remainder (+pi maps to -pi)."""
    th = math.remainder(theta, _TAU)
    if th == math.pi:
        th = -math.pi
    return th


def unit_direction(theta: float) -> complex:
    return complex(math.cos(theta), math.sin(theta))


def _sign(x: float) -> float:
    if x > 0.0:
        return 1.0
    if x < 0.0:
        return -1.0
    return 0.0


@dataclass(frozen=True)
class QuadraticSolution:
    r1: complex
    r2: complex
    v: complex


@dataclass(frozen=True)
class LzCFrame:
    """Everything the method knows about one polynomial at one angle.

    Optional fields are None when undefined: for degree >= 4 every field
    past rx stays None when no admissible minimizer t_star was supplied, and
    a degenerate z-circumference leaves zc, the intersections, projections
    and errors None. proj_i0/proj_c0 hold the (negative-radical,
    positive-radical) branch pair.
    """

    theta: float
    p1: complex
    v_theta: complex
    t_star: float | None
    min_d2: float | None
    rx: complex | None
    anchor_point: complex | None
    v_tl: complex | None
    zc: Circle | None
    intersections: IntersectionPair | None
    proj_i0: tuple[complex | None, complex | None]
    proj_c0: tuple[complex | None, complex | None]
    e_a: float | None
    e_b: float | None


def quadratic_theta_star(p: MonicPolynomial) -> float:
    """Root direction angle for degree 2: half the argument of P1^2 - C2.

    atan2(0, 0) is taken as 0, so the doubly degenerate case (both roots at
    P1) reports angle 0.
    """
    if p.degree != 2:
        raise ValueError("quadratic path requires degree 2")
    c1, c2 = p.coeffs
    w = 0.25 * c1 * c1 - c2
    return 0.5 * math.atan2(w.imag, w.real)


def solve_quadratic(p: MonicPolynomial) -> QuadraticSolution:
    """Both roots of a degree-2 polynomial, closed form on the root line.

    r_{1,2} = P1 -/+ sqrt(|C2 - P1^2|) e^(i theta*); the midpoint of the two
    roots is P1.
    """
    if p.degree != 2:
        raise ValueError("quadratic path requires degree 2")
    _, c2 = p.coeffs
    p1 = p.fixed_point
    th = quadratic_theta_star(p)
    v = unit_direction(th)
    m = math.sqrt(abs(c2 - p1 * p1))
    return QuadraticSolution(p1 - m * v, p1 + m * v, v)


def terminal_curve_point(p: MonicPolynomial, theta: float, t: float) -> complex:
    """tC(theta, t) for degree >= 4.

    With Z = P1 + t v:
        tC = (-1)^(n+1) [ sum_{j=2}^{n-1} C_j Z^(n-1-j) - (P1 - t v) Z^(n-2) ]
    The value at Z = 0 is finite (for n = 4 it is -C3).
    """
    n = p.degree
    if n < 4:
        raise ValueError("use cubic/quadratic path")
    th = normalize_theta(theta)
    v = unit_direction(th)
    p1 = p.fixed_point
    z = p1 + t * v
    c = p.coeffs
    acc = c[1]
    for j in range(2, n - 1):
        acc = acc * z + c[j]
    zp = 1.0 + 0.0j
    for _ in range(n - 2):
        zp *= z
    val = acc - (p1 - t * v) * zp
    if (n + 1) % 2 == 1:
        val = -val
    return val


def zc_point(p: MonicPolynomial, theta: float, t: float) -> complex:
    """zC(theta, t) = (-1)^n Cn / (P1 + t v); the line's reciprocal-type image.

    Raises
    ------
    ReciprocalPole
        When the line sample lands on (or numerically at) the origin.
    """
    th = normalize_theta(theta)
    v = unit_direction(th)
    z = p.fixed_point + t * v
    if abs(z) < _POLE_EPS:
        raise ReciprocalPole("pole")
    cn = p.coeffs[-1]
    if p.degree % 2 == 1:
        cn = -cn
    return cn / z


def zc_circle(p: MonicPolynomial, theta: float) -> Circle:
    """The z-circumference: circle through the origin and two zC samples.

    Degenerates to a line (infinite radius) exactly when the base line
    passes through the origin.

    Raises
    ------
    DegenerateCircle
    """
    th = normalize_theta(theta)
    v = unit_direction(th)
    p1 = p.fixed_point
    if abs(p1) < _POLE_EPS or abs(p1 + v) < _POLE_EPS:
        raise DegenerateCircle("infinite radius / degenerate z-circumference")
    cn = p.coeffs[-1]
    if p.degree % 2 == 1:
        cn = -cn
    return circle_through_origin(cn / p1, cn / (p1 + v))


def dsd(p: MonicPolynomial, theta: float, t: float) -> float:
    """Discrete squared distance d^2_theta(t) = |tC - zC|^2, degree >= 4."""
    if p.degree < 4:
        raise ValueError("use cubic/quadratic path")
    d = terminal_curve_point(p, theta, t) - zc_point(p, theta, t)
    return d.real * d.real + d.imag * d.imag


def best_estimate(p: MonicPolynomial, theta: float, t_star: float) -> complex:
    """Root estimate Rx = P1 + t* v for an admissible (non-negative) t*."""
    if t_star < 0.0:
        raise ValueError("negative minimizer")
    th = normalize_theta(theta)
    return p.fixed_point + t_star * unit_direction(th)


def terminal_semiline(p: MonicPolynomial, theta: float,
                      rx: complex | None = None) -> SemiLine:
    """Terminal semi-line tL at this angle.

    For degree 3 it is fully theta-determined: anchor C2 - P1^2, direction
    v^2. For degree >= 4 it hangs off the estimate point Rx = P1 + t* v:

        anchor    = (-1)^(n+1) [ sum_{i=1}^{n-3} C_{n-i} Rx^(i-1)
                                 + Rx^(n-3) (C2 - P1^2) ]
        direction = (-1)^(n+1) Rx^(n-3) v^2
    """
    n = p.degree
    if n < 3:
        raise ValueError("use cubic/quadratic path")
    th = normalize_theta(theta)
    v = unit_direction(th)
    p1 = p.fixed_point
    c = p.coeffs
    base = c[1] - p1 * p1
    if n == 3:
        return SemiLine(base, v * v)
    if rx is None:
        raise ValueError("degree >= 4 terminal semi-line needs the estimate point")
    acc = c[2]
    for j in range(3, n - 1):
        acc = acc * rx + c[j]
    rp = 1.0 + 0.0j
    for _ in range(n - 3):
        rp *= rx
    anchor = acc + rp * base
    direction = rp * v * v
    if (n + 1) % 2 == 1:
        anchor = -anchor
        direction = -direction
    return SemiLine(anchor, direction)


def projections(p: MonicPolynomial, theta: float, intersection: complex,
                tl: SemiLine) -> tuple[complex, complex]:
    """Project one tL/zC intersection point back onto the base line.

    i0 recovers the line point through the semi-line parameter: the ratio
    (I - anchor)/direction is t^2 up to rounding, and i0 = P1 + sqrt(.) v
    standardizes on the real part clamped at zero (tiny negative real parts
    occur at near-tangential contact). c0 is the reciprocal-type preimage
    (-1)^n Cn / I.

    Raises
    ------
    ReciprocalPole
        If the intersection sits at the origin ("projection pole").
    """
    th = normalize_theta(theta)
    v = unit_direction(th)
    if intersection == 0:
        raise ReciprocalPole("projection pole")
    ratio = (intersection - tl.anchor) / tl.direction
    i0 = p.fixed_point + math.sqrt(max(ratio.real, 0.0)) * v
    cn = p.coeffs[-1]
    if p.degree % 2 == 1:
        cn = -cn
    c0 = cn / intersection
    return i0, c0


def weighted_error(p1: complex, v: complex, i0: complex, c0: complex) -> float:
    """Signed relative separation of the two projections, in (-1, 1].

    e = sign(Re((i0 - c0)/v)) |i0 - c0| / (|i0 - P1| + |c0 - P1|)

    Raises
    ------
    ValueError
        If both projections coincide with P1 ("degenerate projections").
    """
    den = abs(i0 - p1) + abs(c0 - p1)
    if den == 0.0:
        raise ValueError("degenerate projections")
    w = (i0 - c0) / v
    # the triangle inequality bounds the magnitude by 1; clamp the one-ulp
    # overshoot that occurs when i0 and c0 straddle P1 exactly
    return _sign(w.real) * min(1.0, abs(i0 - c0) / den)


def build_frame(p: MonicPolynomial, theta: float,
                t_star: float | None = None,
                min_d2: float | None = None) -> LzCFrame:
    """Assemble the full frame at one angle; degree >= 3.

    For degree >= 4 the caller supplies the DSD minimizer t_star (and its
    value); without one the frame keeps every field past rx undefined. A
    degenerate z-circumference leaves zc, intersections, projections and
    both errors undefined but still returns the frame.
    """
    n = p.degree
    if n < 3:
        raise ValueError("use cubic/quadratic path")
    th = normalize_theta(theta)
    v = unit_direction(th)
    p1 = p.fixed_point

    rx: complex | None = None
    if n >= 4:
        if t_star is None:
            return LzCFrame(th, p1, v, None, None, None, None, None, None,
                            None, (None, None), (None, None), None, None)
        if t_star < 0.0:
            raise ValueError("negative minimizer")
        rx = p1 + t_star * v
        tl = terminal_semiline(p, th, rx)
    else:
        tl = terminal_semiline(p, th)

    try:
        zc = zc_circle(p, th)
    except DegenerateCircle:
        return LzCFrame(th, p1, v, t_star, min_d2, rx, tl.anchor, tl.direction,
                        None, None, (None, None), (None, None), None, None)

    inter = intersect_ray_circle(tl.anchor, tl.direction, zc)

    i0a = c0a = i0b = c0b = None
    e_a = e_b = None
    if inter.relevance == 2 and inter.i1 is not None:
        try:
            i0a, c0a = projections(p, th, inter.i1, tl)
            e_a = weighted_error(p1, v, i0a, c0a)
        except (ReciprocalPole, ValueError):
            i0a = c0a = None
            e_a = None
    if inter.relevance >= 1 and inter.i2 is not None:
        try:
            i0b, c0b = projections(p, th, inter.i2, tl)
            e_b = weighted_error(p1, v, i0b, c0b)
        except (ReciprocalPole, ValueError):
            i0b = c0b = None
            e_b = None

    return LzCFrame(th, p1, v, t_star, min_d2, rx, tl.anchor, tl.direction,
                    zc, inter, (i0a, i0b), (c0a, c0b), e_a, e_b)
