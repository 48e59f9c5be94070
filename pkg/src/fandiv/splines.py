"""Circular-spline divisions of planar measures.

Planar measures are lifted to the paraboloid z = x^2 + y^2; a curtain
halving the three lifted measures in space cuts the paraboloid in a curve
whose vertical projection is a *circular spline*: circle arcs where a wall
cell's plane is slanted, straight pieces where it is vertical.  The side a
planar point falls on is decided by classifying its lift, never by the
projected curve itself; a parity test along the spline is kept as a
cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateProjection, UnsupportedVariant
from .geometry import Curtain, classify_points, face_fan
from .measures import BodyUnion, Measure, PointCloud, PolytopeBody, point_cloud
from .solver import Instance, Solution, SolverConfig, make_instance, solve_curtain

PLANE_TOL = 1e-9
CHAIN_RTOL = 1e-7
FULL_TURN = 2.0 * math.pi


def lift_points(points: np.ndarray) -> np.ndarray:
    """(x, y) -> (x, y, x^2 + y^2)."""
    p = np.atleast_2d(np.asarray(points, float))
    if p.shape[1] != 2:
        raise UnsupportedVariant("the paraboloid lift takes planar points")
    return np.column_stack([p, (p * p).sum(axis=1)])


def _subdivided_triangles(tri: np.ndarray, k: int):
    """Centroids and areas of the k^2 congruent subtriangles of ``tri``."""
    a, b, c = tri
    u, v = b - a, c - a
    area = abs(u[0] * v[1] - u[1] * v[0]) / 2.0 / (k * k)
    cents = []
    for i in range(k):
        for j in range(k - i):
            p = a + (b - a) * (i / k) + (c - a) * (j / k)
            cents.append(p + ((b - a) + (c - a)) / (3.0 * k))
            if i + j < k - 1:  # the downward companion triangle
                cents.append(p + 2.0 * ((b - a) + (c - a)) / (3.0 * k))
    return np.array(cents), area


def lift_measure(measure: Measure, *, body_resolution: int = 12) -> PointCloud:
    """Lift a planar measure to a weighted cloud on the paraboloid.

    Clouds lift exactly (atom for atom).  Bodies are replaced by the
    centroid cloud of a fan triangulation subdivided ``body_resolution``
    times per edge, which preserves the total mass exactly but turns the
    solve into a discrete one (the residual bottoms out at half the largest
    cell weight).
    """
    if isinstance(measure, PointCloud):
        return point_cloud(lift_points(measure.points), measure.weights)
    if isinstance(measure, BodyUnion):
        lifted = [lift_measure(p, body_resolution=body_resolution) for p in measure.parts]
        pts = np.concatenate([c.points for c in lifted])
        w = np.concatenate([c.weights for c in lifted])
        return point_cloud(pts, w)
    if isinstance(measure, PolytopeBody):
        if measure.dim != 2:
            raise UnsupportedVariant("only planar bodies can be lifted")
        verts = measure.vertices
        center = verts.mean(axis=0)
        pts, ws = [], []
        for i in range(len(verts)):
            tri = np.array([center, verts[i], verts[(i + 1) % len(verts)]])
            cents, area = _subdivided_triangles(tri, body_resolution)
            pts.append(cents)
            ws.append(np.full(len(cents), area))
        cloud = np.concatenate(pts)
        return point_cloud(lift_points(cloud), np.concatenate(ws))
    raise UnsupportedVariant(f"cannot lift {type(measure).__name__}")


# ---------------------------------------------------------------------------
# spline pieces


@dataclass(frozen=True)
class ArcPiece:
    """Counterclockwise circle arc from angle ``phi0`` to ``phi1``."""

    center: np.ndarray
    radius: float
    phi0: float
    phi1: float
    pair: tuple[int, int]

    def point(self, t: float) -> np.ndarray:
        phi = self.phi0 + (self.phi1 - self.phi0) * t
        return self.center + self.radius * np.array([math.cos(phi), math.sin(phi)])

    @property
    def endpoints(self) -> tuple[np.ndarray, np.ndarray]:
        return self.point(0.0), self.point(1.0)

    def to_dict(self) -> dict:
        return {
            "type": "arc",
            "center": self.center.tolist(),
            "radius": self.radius,
            "phi0": self.phi0,
            "phi1": self.phi1,
            "pair": list(self.pair),
        }


@dataclass(frozen=True)
class SegmentPiece:
    """Straight piece ``origin + lam * direction``; lambda bounds may be infinite."""

    origin: np.ndarray
    direction: np.ndarray
    lam0: float
    lam1: float
    pair: tuple[int, int]

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.lam0) and math.isfinite(self.lam1)

    def point(self, t: float) -> np.ndarray:
        if not self.bounded:
            raise DegenerateProjection("unbounded piece needs clipping before sampling")
        lam = self.lam0 + (self.lam1 - self.lam0) * t
        return self.origin + lam * self.direction

    def clipped(self, lo: float, hi: float) -> "SegmentPiece":
        return SegmentPiece(self.origin, self.direction,
                            max(self.lam0, lo), min(self.lam1, hi), self.pair)

    @property
    def endpoints(self) -> tuple[np.ndarray | None, np.ndarray | None]:
        p0 = self.origin + self.lam0 * self.direction if math.isfinite(self.lam0) else None
        p1 = self.origin + self.lam1 * self.direction if math.isfinite(self.lam1) else None
        return p0, p1

    def to_dict(self) -> dict:
        return {
            "type": "segment",
            "origin": self.origin.tolist(),
            "direction": self.direction.tolist(),
            "lam0": self.lam0,
            "lam1": self.lam1,
            "pair": list(self.pair),
        }


@dataclass(frozen=True)
class CircularSpline:
    pieces: tuple
    closed: bool
    scale: float

    def to_dict(self) -> dict:
        return {
            "closed": self.closed,
            "pieces": [p.to_dict() for p in self.pieces],
        }


# ---------------------------------------------------------------------------
# wall-cell sections


def _angular_interval(a: float, b: float, c: float, tol: float):
    """Solutions of a + b cos(phi) + c sin(phi) >= -tol as (start, length)."""
    r = math.hypot(b, c)
    if r <= tol:
        return (0.0, FULL_TURN) if a >= -tol else None
    h = (-tol - a) / r
    if h <= -1.0:
        return (0.0, FULL_TURN)
    if h >= 1.0:
        return None
    psi = math.atan2(c, b)
    theta = math.acos(max(-1.0, min(1.0, h)))
    return ((psi - theta) % FULL_TURN, 2.0 * theta)


def _intersect_angular(first, second):
    """Intersection of two circular intervals, as a list of (start, length)."""
    if first is None or second is None:
        return []
    if first[1] >= FULL_TURN - 1e-15:
        return [second]
    if second[1] >= FULL_TURN - 1e-15:
        return [first]
    s1, l1 = first
    out = []
    for shift in (-FULL_TURN, 0.0, FULL_TURN):
        s2 = second[0] + shift
        lo, hi = max(s1, s2), min(s1 + l1, s2 + second[1])
        if hi - lo > 1e-12:
            out.append((lo, hi - lo))
    return out


def _quadratic_intervals(c0: float, c1: float, c2: float, tol: float):
    """Solutions of c0 + c1 x + c2 x^2 >= -tol as sorted (lo, hi) pairs."""
    c0 = c0 + tol
    scale = max(abs(c0), abs(c1), abs(c2), 1.0)
    if abs(c2) <= 1e-14 * scale:
        if abs(c1) <= 1e-14 * scale:
            return [(-math.inf, math.inf)] if c0 >= 0 else []
        x = -c0 / c1
        return [(x, math.inf)] if c1 > 0 else [(-math.inf, x)]
    disc = c1 * c1 - 4.0 * c2 * c0
    if disc <= 0:
        return [(-math.inf, math.inf)] if c2 > 0 else []
    sq = math.sqrt(disc)
    r1, r2 = sorted([(-c1 - sq) / (2 * c2), (-c1 + sq) / (2 * c2)])
    if c2 > 0:
        return [(-math.inf, r1), (r2, math.inf)]
    return [(r1, r2)]


def _intersect_intervals(first, second):
    out = []
    for lo1, hi1 in first:
        for lo2, hi2 in second:
            lo, hi = max(lo1, lo2), min(hi1, hi2)
            if hi - lo > 1e-12:
                out.append((lo, hi))
    return sorted(out)


def _cell_section(apex: np.ndarray, gens: np.ndarray, pair, scale: float):
    """Pieces of one wall cell: its plane cut with the paraboloid, projected.

    The cell is apex + cone(g1, g2).  A slanted plane meets the paraboloid
    in a circle; cone coordinates along that circle are linear in
    (1, cos, sin), so the feasible angles form at most two arcs.  A vertical
    plane projects to a line; cone coordinates are quadratic in arclength.
    """
    g1, g2 = gens
    n = np.cross(g1, g2)
    norm = np.linalg.norm(n)
    if norm <= 1e-14 * scale * scale:
        raise DegenerateProjection("wall cell generators are collinear")
    e = float(n @ apex)
    a, b, c = n
    pinv = np.linalg.pinv(np.column_stack([g1, g2]))  # (2, 3)
    tol = PLANE_TOL * max(1.0, scale)

    if abs(c) <= 1e-12 * norm:
        # vertical plane: the projection is the line a x + b y = e
        h2 = a * a + b * b
        origin = np.array([a, b]) * e / h2
        direction = np.array([-b, a]) / math.sqrt(h2)
        q0 = np.array([*origin, origin @ origin]) - apex
        q1 = np.array([*direction, 2.0 * (origin @ direction)])
        q2 = np.array([0.0, 0.0, 1.0])
        w0, w1, w2 = pinv @ q0, pinv @ q1, pinv @ q2
        feas = _intersect_intervals(
            _quadratic_intervals(w0[0], w1[0], w2[0], tol),
            _quadratic_intervals(w0[1], w1[1], w2[1], tol),
        )
        return [
            SegmentPiece(origin, direction, lo, hi, pair)
            for lo, hi in feas
            if hi - lo > 1e-12
        ]

    center = np.array([-a, -b]) / (2.0 * c)
    r2 = e / c + (a * a + b * b) / (4.0 * c * c)
    if r2 <= 0.0:
        return []  # the plane misses the paraboloid
    r = math.sqrt(r2)
    z_center = (e - a * center[0] - b * center[1]) / c
    u0 = np.array([center[0], center[1], z_center]) - apex
    u1 = np.array([r, 0.0, -a * r / c])
    u2 = np.array([0.0, r, -b * r / c])
    w0, w1, w2 = pinv @ u0, pinv @ u1, pinv @ u2
    pieces = []
    for start, length in _intersect_angular(
        _angular_interval(w0[0], w1[0], w2[0], tol),
        _angular_interval(w0[1], w1[1], w2[1], tol),
    ):
        pieces.append(ArcPiece(center, r, start, start + length, pair))
    return pieces


def _chain_endpoints(pieces, scale: float):
    """(open_end_count, all matched) for the endpoint matching graph."""
    tol = CHAIN_RTOL * max(1.0, scale)
    ends = []
    unbounded = 0
    for p in pieces:
        for q in p.endpoints:
            if q is None:
                unbounded += 1
            else:
                ends.append(q)
    ends = np.array(ends) if ends else np.zeros((0, 2))
    unmatched = 0
    used = np.zeros(len(ends), bool)
    for i in range(len(ends)):
        if used[i]:
            continue
        d = np.linalg.norm(ends - ends[i], axis=1)
        d[i] = np.inf
        d[used] = np.inf
        j = int(d.argmin()) if len(ends) > 1 else -1
        if j >= 0 and d[j] <= tol:
            used[i] = used[j] = True
        else:
            used[i] = True
            unmatched += 1
    return unbounded + unmatched, unbounded == 0 and unmatched == 0


def curtain_to_spline(curtain: Curtain, *, scale: float | None = None) -> CircularSpline:
    """Project the curtain wall's paraboloid section down to the plane."""
    if curtain.simplex.dim != 3:
        raise UnsupportedVariant("spline projection expects a spatial curtain")
    scale = float(scale if scale is not None else 1.0 + np.abs(curtain.apex).max())
    pieces = []
    for pair, cell in zip(curtain.pairs, curtain.wall_cells):
        pieces.extend(_cell_section(cell.apex, cell.generators, pair, scale))
    _, closed = _chain_endpoints(pieces, scale)
    return CircularSpline(tuple(pieces), closed, scale)


# ---------------------------------------------------------------------------
# planar side tests


def side_of_points(solution: Solution, instance: Instance, points) -> np.ndarray:
    """+1/-1 side of planar points, decided on the lifted classification."""
    lifted = lift_points(points)
    fan = face_fan(instance.simplex, apex=solution.x)
    labels = classify_points(fan, lifted)
    alloc = np.asarray(solution.allocation)
    return np.where(alloc[labels] == 1, 1, -1)


def _ray_arc_crossings(p, u, arc: ArcPiece):
    f = p - arc.center
    b = 2.0 * float(f @ u)
    c = float(f @ f) - arc.radius**2
    disc = b * b - 4.0 * c
    if disc <= 0:
        return 0
    sq = math.sqrt(disc)
    count = 0
    lo, hi = arc.phi0, arc.phi1
    for t in ((-b - sq) / 2.0, (-b + sq) / 2.0):
        if t <= 0:
            continue
        q = p + t * u - arc.center
        phi = math.atan2(q[1], q[0])
        while phi < lo:
            phi += FULL_TURN
        if phi <= hi:
            count += 1
    return count


def _ray_segment_crossings(p, u, seg: SegmentPiece):
    mat = np.column_stack([u, -seg.direction])
    det = np.linalg.det(mat)
    if abs(det) < 1e-14:
        return 0
    t, lam = np.linalg.solve(mat, seg.origin - p)
    return int(t > 0 and seg.lam0 <= lam <= seg.lam1)


def side_by_parity(spline: CircularSpline, point, far_side: int,
                   angle: float = 0.7453) -> int:
    """Cross-check side test: parity of spline crossings along a fixed ray.

    ``far_side`` is the authoritative side of a point far along the ray;
    each crossing flips it.  Only meaningful for generic rays (no tangency,
    no endpoint hits) — the caller picks the angle.
    """
    p = np.asarray(point, float)
    u = np.array([math.cos(angle), math.sin(angle)])
    crossings = 0
    for piece in spline.pieces:
        if isinstance(piece, ArcPiece):
            crossings += _ray_arc_crossings(p, u, piece)
        else:
            crossings += _ray_segment_crossings(p, u, piece)
    return far_side * (-1) ** (crossings % 2)


def distance_to_spline(spline: CircularSpline, point) -> float:
    p = np.asarray(point, float)
    best = math.inf
    for piece in spline.pieces:
        if isinstance(piece, ArcPiece):
            q = p - piece.center
            rho = np.linalg.norm(q)
            phi = math.atan2(q[1], q[0])
            while phi < piece.phi0:
                phi += FULL_TURN
            if phi <= piece.phi1:
                best = min(best, abs(rho - piece.radius))
            else:
                for end in piece.endpoints:
                    best = min(best, float(np.linalg.norm(p - end)))
        else:
            lam = float((p - piece.origin) @ piece.direction)
            lam = max(piece.lam0, min(piece.lam1, lam))
            best = min(best, float(np.linalg.norm(p - piece.origin - lam * piece.direction)))
    return best


# ---------------------------------------------------------------------------
# end-to-end solve


@dataclass(frozen=True)
class SplineDivision:
    solution: Solution
    spline: CircularSpline
    instance: Instance
    planar_measures: tuple


def solve_circular_spline(measures, cfg: SolverConfig | None = None,
                          *, body_resolution: int = 12) -> SplineDivision:
    """Halve three planar measures by one circular spline.

    The measures are lifted to the paraboloid, a spatial curtain solve
    splits the lifts, and the curtain wall is projected back to the plane.
    """
    measures = tuple(measures)
    if len(measures) != 3:
        raise UnsupportedVariant("spline bisection takes exactly three planar measures")
    if any(m.dim != 2 for m in measures):
        raise UnsupportedVariant("spline bisection expects planar measures")
    lifted = [lift_measure(m, body_resolution=body_resolution) for m in measures]
    inst = make_instance(lifted, q=2)
    sol = solve_curtain(inst, cfg)
    spline = curtain_to_spline(sol.curtain, scale=float(inst.scale))
    return SplineDivision(sol, spline, inst, measures)
