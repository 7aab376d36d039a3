"""Planar primitives: bearings, view triangles, convex clipping, weighted quadrature.

All angles are degrees. Coordinates are plain floats in whatever unit the
caller works in (field meters or the projected unit-circle frame); nothing
here assumes field bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Polygons whose area falls below this are collapsed to the empty polygon,
# which removes floating-point ties from touching/degenerate intersections.
AREA_EPS = 1e-12

# Relative convergence target and refinement cap for integrate_pair_weights.
QUAD_REL_TOL = 1e-4
QUAD_MAX_LEVELS = 6


class GeometryError(ValueError):
    """Raised for degenerate geometric input (coincident points, bad angles)."""


@dataclass(frozen=True)
class Point2:
    """A point in the 2D plane."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise GeometryError(f"non-finite point ({self.x}, {self.y})")

    def distance_to(self, other: "Point2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class FieldSpec:
    """Pitch dimensions plus the attack direction of the offensive team.

    Distances are normalized by the pitch diagonal, so the maximum distance
    in the field is 1.
    """

    length: float
    width: float
    attack_direction: str = "+x"  # "+x" or "-x"

    def __post_init__(self) -> None:
        if not (self.length > 0 and self.width > 0):
            raise GeometryError("field length and width must be positive")
        if self.attack_direction not in ("+x", "-x"):
            raise GeometryError(
                f"attack_direction must be '+x' or '-x', got {self.attack_direction!r}")

    @property
    def diagonal(self) -> float:
        return math.hypot(self.length, self.width)

    def normalized_distance(self, a: Point2, b: Point2) -> float:
        return a.distance_to(b) / self.diagonal


def wrap_degrees(angle: float) -> float:
    """Reduce to [0, 360). Plain % can round a tiny negative up to 360.0."""
    wrapped = angle % 360.0
    return wrapped if wrapped < 360.0 else 0.0


def angle_of(origin: Point2, target: Point2) -> float:
    """Bearing from origin to target, degrees in [0, 360), CCW from +x.

    Raises GeometryError for coincident points (the direction is undefined).
    """
    dx = target.x - origin.x
    dy = target.y - origin.y
    if dx == 0.0 and dy == 0.0:
        raise GeometryError("degenerate direction: coincident points")
    return wrap_degrees(math.degrees(math.atan2(dy, dx)))


def angular_diff(a: float, b: float) -> float:
    """Smallest separation between two bearings, degrees in [0, 180]."""
    d = abs(a - b) % 360.0
    return min(d, 360.0 - d)


def point_segment_distance(p: Point2, a: Point2, b: Point2) -> float:
    """Euclidean distance from p to the segment a-b."""
    ax, ay = b.x - a.x, b.y - a.y
    seg_len2 = ax * ax + ay * ay
    if seg_len2 == 0.0:
        return p.distance_to(a)
    t = ((p.x - a.x) * ax + (p.y - a.y) * ay) / seg_len2
    t = min(1.0, max(0.0, t))
    return math.hypot(p.x - (a.x + t * ax), p.y - (a.y + t * ay))


def _signed_area(vertices: tuple[Point2, ...]) -> float:
    total = 0.0
    n = len(vertices)
    for i in range(n):
        p, q = vertices[i], vertices[(i + 1) % n]
        total += p.x * q.y - q.x * p.y
    return 0.5 * total


@dataclass(frozen=True)
class ConvexPolygon:
    """Convex polygon with CCW vertices; an empty vertex tuple is the empty region."""

    vertices: tuple[Point2, ...]

    def __post_init__(self) -> None:
        verts = tuple(self.vertices)
        object.__setattr__(self, "vertices", verts)
        n = len(verts)
        if n in (1, 2):
            raise GeometryError("a polygon needs 0 or >= 3 vertices")
        if n == 0:
            return
        if _signed_area(verts) < 0:
            raise GeometryError("vertices must be in CCW order")
        for i in range(n):
            a, b, c = verts[i], verts[(i + 1) % n], verts[(i + 2) % n]
            e1x, e1y = b.x - a.x, b.y - a.y
            e2x, e2y = c.x - b.x, c.y - b.y
            cross = e1x * e2y - e1y * e2x
            # scale-aware tolerance: clipping emits near-collinear triples
            eps = 1e-9 * max(1.0, abs(e1x) + abs(e1y)) * max(1.0, abs(e2x) + abs(e2y))
            if cross < -eps:
                raise GeometryError("polygon is not convex")

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @property
    def coords(self) -> tuple[tuple[float, float], ...]:
        """Vertices as plain (x, y) tuples, handy for serialization."""
        return tuple((v.x, v.y) for v in self.vertices)

    @property
    def area(self) -> float:
        if not self.vertices:
            return 0.0
        return _signed_area(self.vertices)

    def contains(self, p: Point2, eps: float = 1e-12) -> bool:
        """True if p lies inside or on the boundary."""
        n = len(self.vertices)
        if n == 0:
            return False
        for i in range(n):
            a, b = self.vertices[i], self.vertices[(i + 1) % n]
            cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x)
            if cross < -eps:
                return False
        return True


EMPTY_POLYGON = ConvexPolygon(())


@dataclass(frozen=True)
class ViewTriangle:
    """Isosceles field-of-view triangle: apex plus two equal sides of
    side_length along orientation +/- half_angle."""

    apex: Point2
    orientation: float
    half_angle: float
    side_length: float

    def __post_init__(self) -> None:
        if not (0.0 < self.half_angle < 90.0):
            raise GeometryError(f"half_angle must be in (0, 90), got {self.half_angle}")
        if not self.side_length > 0.0:
            raise GeometryError(f"side_length must be positive, got {self.side_length}")

    def as_polygon(self) -> ConvexPolygon:
        """Vertices (apex, lower side endpoint, upper side endpoint), CCW."""
        lo = math.radians(self.orientation - self.half_angle)
        hi = math.radians(self.orientation + self.half_angle)
        L = self.side_length
        a = self.apex
        return ConvexPolygon((
            a,
            Point2(a.x + L * math.cos(lo), a.y + L * math.sin(lo)),
            Point2(a.x + L * math.cos(hi), a.y + L * math.sin(hi)),
        ))


def build_view_triangle(apex: Point2, orientation: float, half_angle: float,
                        side_length: float) -> ViewTriangle:
    """Construct a view triangle, validating the ViewTriangle invariants."""
    return ViewTriangle(apex, orientation, half_angle, side_length)


def intersect_convex(a: ConvexPolygon, b: ConvexPolygon) -> ConvexPolygon:
    """Intersection of two convex polygons (Sutherland-Hodgman clipping).

    Returns the empty polygon when disjoint or when the overlap degenerates
    to a sliver of area < AREA_EPS.
    """
    if a.is_empty or b.is_empty:
        return EMPTY_POLYGON

    output: list[tuple[float, float]] = [(p.x, p.y) for p in a.vertices]
    clip = [(p.x, p.y) for p in b.vertices]

    for i in range(len(clip)):
        cx1, cy1 = clip[i]
        cx2, cy2 = clip[(i + 1) % len(clip)]
        ex, ey = cx2 - cx1, cy2 - cy1
        if not output:
            return EMPTY_POLYGON
        subject = output
        output = []
        sx, sy = subject[-1]
        s_in = (ex * (sy - cy1) - ey * (sx - cx1)) >= 0.0  # left-of/on the CCW clip edge
        for px, py in subject:
            p_in = (ex * (py - cy1) - ey * (px - cx1)) >= 0.0
            if p_in != s_in:
                # segment crosses the clip line; solve for the crossing point
                dx, dy = px - sx, py - sy
                denom = ex * dy - ey * dx
                if denom != 0.0:
                    t = (ex * (cy1 - sy) - ey * (cx1 - sx)) / denom
                    output.append((sx + t * dx, sy + t * dy))
            if p_in:
                output.append((px, py))
            sx, sy, s_in = px, py, p_in

    # drop near-duplicate consecutive vertices left by grazing intersections
    cleaned: list[tuple[float, float]] = []
    for v in output:
        if not cleaned or math.hypot(v[0] - cleaned[-1][0], v[1] - cleaned[-1][1]) > 1e-12:
            cleaned.append(v)
    if len(cleaned) >= 2 and math.hypot(cleaned[0][0] - cleaned[-1][0],
                                        cleaned[0][1] - cleaned[-1][1]) <= 1e-12:
        cleaned.pop()
    if len(cleaned) < 3:
        return EMPTY_POLYGON

    pts = tuple(Point2(x, y) for x, y in cleaned)
    if _signed_area(pts) < 0:
        pts = pts[::-1]
    if _signed_area(pts) < AREA_EPS:
        return EMPTY_POLYGON
    return ConvexPolygon(pts)


# Symmetric 7-point degree-5 quadrature rule on the triangle
# (barycentric coordinates; weights sum to 1).
_B1 = 0.059715871789770
_B2 = 0.470142064105115
_B3 = 0.797426985353087
_B4 = 0.101286507323456
_RULE_BARY = np.array([
    (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0),
    (_B1, _B2, _B2), (_B2, _B1, _B2), (_B2, _B2, _B1),
    (_B3, _B4, _B4), (_B4, _B3, _B4), (_B4, _B4, _B3),
])
_RULE_W = np.array([
    0.225,
    0.132394152788506, 0.132394152788506, 0.132394152788506,
    0.125939180544827, 0.125939180544827, 0.125939180544827,
])


def _rule_sum(tris: np.ndarray, px: float, py: float, rx: float, ry: float,
              inv_scale: float) -> float:
    """Apply the 7-point rule to every triangle in tris (n, 3, 2); return the total."""
    # quadrature points: (n, 7, 2)
    pts = np.einsum("qb,nbc->nqc", _RULE_BARY, tris)
    d_p = np.hypot(pts[:, :, 0] - px, pts[:, :, 1] - py)
    d_r = np.hypot(pts[:, :, 0] - rx, pts[:, :, 1] - ry)
    vals = np.exp(-d_p * inv_scale) + np.exp(-d_r * inv_scale)
    e1 = tris[:, 1] - tris[:, 0]
    e2 = tris[:, 2] - tris[:, 0]
    areas = 0.5 * np.abs(e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])
    return float(np.dot(areas, vals @ _RULE_W))


def _split4(tris: np.ndarray) -> np.ndarray:
    """Split every triangle into its 4 midpoint sub-triangles: (n,3,2) -> (4n,3,2)."""
    v0, v1, v2 = tris[:, 0], tris[:, 1], tris[:, 2]
    m01 = 0.5 * (v0 + v1)
    m12 = 0.5 * (v1 + v2)
    m20 = 0.5 * (v2 + v0)
    out = np.empty((4 * len(tris), 3, 2))
    out[0::4] = np.stack([v0, m01, m20], axis=1)
    out[1::4] = np.stack([m01, v1, m12], axis=1)
    out[2::4] = np.stack([m20, m12, v2], axis=1)
    out[3::4] = np.stack([m01, m12, m20], axis=1)
    return out


def integrate_pair_weights(region: ConvexPolygon, p: Point2, r: Point2,
                           dist_scale: float) -> float:
    """Integral of exp(-d(p,x)/dist_scale) + exp(-d(r,x)/dist_scale) over region.

    The region is fan-triangulated from its centroid and each triangle is
    integrated with a degree-5 rule; all triangles are 4-way subdivided until
    two successive refinements agree to QUAD_REL_TOL relative (at most
    QUAD_MAX_LEVELS rounds). Deterministic: identical inputs give identical
    output bits. Returns 0.0 for the empty region.
    """
    if dist_scale <= 0.0:
        raise ValueError("dist_scale must be positive")
    if region.is_empty or region.area < AREA_EPS:
        return 0.0

    verts = np.array([(v.x, v.y) for v in region.vertices])
    centroid = verts.mean(axis=0)
    n = len(verts)
    tris = np.empty((n, 3, 2))
    tris[:, 0] = centroid
    tris[:, 1] = verts
    tris[:, 2] = np.roll(verts, -1, axis=0)

    inv_scale = 1.0 / dist_scale
    estimate = _rule_sum(tris, p.x, p.y, r.x, r.y, inv_scale)
    for _ in range(QUAD_MAX_LEVELS):
        tris = _split4(tris)
        refined = _rule_sum(tris, p.x, p.y, r.x, r.y, inv_scale)
        if abs(refined - estimate) <= QUAD_REL_TOL * max(abs(refined), AREA_EPS):
            return refined
        estimate = refined
    return estimate
