"""Upper half-plane numerics: distances, Buseman functions, horoballs.

Everything is double precision with natural logs.  The preferred boundary
point is infinity; mobius_to_infinity normalizes any real boundary point
to it, so horoballs only ever need the form {y > h}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_EPS = 1e-12


@dataclass(frozen=True)
class HPoint:
    x: float
    y: float

    def __post_init__(self):
        if not self.y > _EPS:
            raise ValueError(f"point must lie strictly above the axis: y={self.y}")


@dataclass(frozen=True)
class Horoball:
    """Horoball based at infinity: the region y > height."""
    height: float

    def __post_init__(self):
        if not self.height > 0:
            raise ValueError("horoball height must be positive")

    def contains(self, p: HPoint) -> bool:
        return p.y > self.height


def h_distance(p: HPoint, q: HPoint) -> float:
    arg = 1.0 + ((p.x - q.x) ** 2 + (p.y - q.y) ** 2) / (2.0 * p.y * q.y)
    return math.acosh(arg)


def buseman_infinity(p: HPoint) -> float:
    """Buseman function of the upward ray, zero on the horosphere y = 1."""
    return -math.log(p.y)


def geodesic_apex(p: HPoint, q: HPoint) -> float:
    """Deepest Buseman value on the full geodesic through p and q.

    Non-vertical geodesics are semicircles centered on the axis; the
    deepest point is the top, at height R, so the value is -ln R.  The
    vertical geodesic never leaves the endpoints' column and the arc
    minimum is at its higher endpoint.
    """
    if abs(p.x - q.x) <= _EPS:
        return min(buseman_infinity(p), buseman_infinity(q))
    c = (q.x ** 2 + q.y ** 2 - p.x ** 2 - p.y ** 2) / (2.0 * (q.x - p.x))
    radius = math.hypot(p.x - c, p.y)
    return -math.log(radius)


def ideal_midpoint_check(ell: float, big_c: float) -> bool:
    """Two points at distance ell on the unit horosphere: once ell passes
    2C + ln 16 the connecting geodesic's midpoint descends below -C.
    Returns True exactly on the guaranteed region (short ell is vacuous).
    """
    if ell <= 0 or big_c <= 0:
        raise ValueError("need positive length and depth")
    if ell < 2.0 * big_c + math.log(16.0):
        return True
    midpoint_value = -math.log(math.cosh(ell / 2.0))
    return midpoint_value <= -big_c


def right_triangle_gap(u: float, theta: float):
    """Right triangle with legs meeting at angle theta opposite side t.

    Solves sinh t = sinh u / sin theta (hyperbolic law of sines with the
    right angle opposite t) and checks t - u >= ln(1/(2 sin theta)).
    """
    if u <= 1:
        raise ValueError("leg length must exceed 1")
    if not 0 < theta <= math.pi / 2:
        raise ValueError("angle must be in (0, pi/2]")
    t = math.asinh(math.sinh(u) / math.sin(theta))
    bound = math.log(1.0 / (2.0 * math.sin(theta)))
    return t, (t - u) >= bound - 1e-9


def ideal_isosceles_angle(ell: float):
    """Base angle of the isosceles triangle with apex at infinity and base
    length ell: sin^2 theta = 2/(cosh ell + 1), which decays like 4e^-ell.
    """
    if ell <= 0:
        raise ValueError("need a positive base length")
    s2 = 2.0 / (math.cosh(ell) + 1.0)
    theta = math.asin(math.sqrt(s2))
    return theta, s2 <= 4.0 * math.exp(-ell) + _EPS


def tangent_projection_diameter(h: float, e1: float, e2: float) -> float:
    """Horospherical distance on y = h between the projections of the two
    ideal endpoints of a geodesic tangent to the horoball from below."""
    if h <= 0:
        raise ValueError("horoball height must be positive")
    if e1 == e2:
        return 0.0
    if abs(abs(e1 - e2) / 2.0 - h) > 1e-9:
        raise ValueError("geodesic is not tangent to the horoball")
    return abs(e1 - e2) / h


def mobius_to_infinity(b: float):
    """Isometry of the half-plane sending the boundary point b to infinity
    (z -> -1/(z - b)).  Returns a function on points."""
    def apply(p: HPoint) -> HPoint:
        dx = p.x - b
        d = dx * dx + p.y * p.y
        return HPoint(-dx / d, p.y / d)
    return apply
