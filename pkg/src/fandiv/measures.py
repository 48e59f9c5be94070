"""Mass distributions and cone masses.

Three concrete distribution kinds: weighted point clouds, uniform-density
convex polytope bodies, and unions of pairwise-disjoint bodies.  All masses
over polyhedral regions in d <= 3 are exact (polygon clipping / hull
volumes); d >= 4 bodies fall back to counter-based Monte Carlo and report a
standard error alongside the estimate.

Cone masses for a *fan* use the classification rule (ties to the lowest
cone index) so the d+1 cone masses always partition the total exactly.
Standalone cones use inclusive half-space membership instead.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .errors import DegenerateCone, DimensionTooLarge, EmptyMeasure, PointOutside
from .geometry import (
    DeltaZonotope,
    Fan,
    HalfSpace,
    SimplicialCone,
    classify_points,
    cone_halfspaces,
    face_fan,
)

CLIP_TOL = 1e-12
MC_SAMPLES = 200_000


@dataclass(frozen=True)
class RegionMass:
    """Mass of a region; ``stderr`` is one standard error (0 when exact)."""

    mass: float
    method: str  # "exact" | "sampled"
    stderr: float = 0.0


# ---------------------------------------------------------------------------
# distributions


@dataclass(frozen=True, eq=False)
class PointCloud:
    points: np.ndarray  # (N, d)
    weights: np.ndarray  # (N,)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())

    @property
    def support_points(self) -> np.ndarray:
        return self.points

    @property
    def max_weight(self) -> float:
        return float(self.weights.max())


@dataclass(frozen=True, eq=False)
class PolytopeBody:
    """Uniform-density convex body stored by its hull vertices.

    d = 2 vertices are kept in counterclockwise order so polygon clipping
    can run directly on them.
    """

    vertices: np.ndarray  # (V, d), hull vertices
    density: float
    volume: float

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def total_mass(self) -> float:
        return self.density * self.volume

    @property
    def support_points(self) -> np.ndarray:
        return self.vertices


@dataclass(frozen=True, eq=False)
class BodyUnion:
    """Union of pairwise-disjoint bodies (disjointness is the caller's contract)."""

    bodies: tuple[PolytopeBody, ...]

    @property
    def dim(self) -> int:
        return self.bodies[0].dim

    @property
    def total_mass(self) -> float:
        return sum(b.total_mass for b in self.bodies)

    @property
    def support_points(self) -> np.ndarray:
        return np.concatenate([b.vertices for b in self.bodies])


Measure = PointCloud | PolytopeBody | BodyUnion


def point_cloud(points, weights=None) -> PointCloud:
    pts = np.atleast_2d(np.asarray(points, float))
    w = np.ones(len(pts)) if weights is None else np.asarray(weights, float)
    if len(w) != len(pts):
        raise EmptyMeasure(f"{len(pts)} points but {len(w)} weights")
    if w.min() < 0 or w.sum() <= 0:
        raise EmptyMeasure("weights must be nonnegative with positive total")
    pts.setflags(write=False)
    w.setflags(write=False)
    return PointCloud(pts, w)


def polytope_body(vertices, density: float = 1.0) -> PolytopeBody:
    v = np.atleast_2d(np.asarray(vertices, float))
    if density <= 0:
        raise EmptyMeasure("density must be positive")
    d = v.shape[1]
    if d == 1:
        verts = np.array([[v.min()], [v.max()]])
        vol = float(v.max() - v.min())
    else:
        try:
            hull = ConvexHull(v)
        except QhullError as exc:
            raise EmptyMeasure("body vertices are degenerate") from exc
        verts = v[hull.vertices]  # qhull returns ccw order for d = 2
        vol = float(hull.volume)
    if vol <= 0:
        raise EmptyMeasure("body has zero volume")
    verts.setflags(write=False)
    return PolytopeBody(verts, float(density), vol)


def body_union(bodies) -> BodyUnion:
    bodies = tuple(bodies)
    if not bodies:
        raise EmptyMeasure("union needs at least one body")
    if len({b.dim for b in bodies}) != 1:
        raise EmptyMeasure("union members must share a dimension")
    return BodyUnion(bodies)


def disc_body(center, radius: float, segments: int = 48, density: float = 1.0) -> PolytopeBody:
    """Regular-polygon approximation of a disc (planar only)."""
    c = np.asarray(center, float)
    ang = 2 * np.pi * np.arange(segments) / segments
    verts = c + radius * np.stack([np.cos(ang), np.sin(ang)], axis=1)
    return polytope_body(verts, density)


def total_mass(measure: Measure) -> float:
    return measure.total_mass


def support_radius(measure: Measure) -> float:
    return float(np.linalg.norm(measure.support_points, axis=1).max())


def cloud_from_csv(path, dim: int | None = None) -> PointCloud:
    """Load ``x_1, ..., x_d, weight`` rows; a non-numeric first row is a header."""
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.reader(fh):
            if not rec:
                continue
            try:
                rows.append([float(c) for c in rec])
            except ValueError:
                if rows:
                    raise
    if not rows:
        raise EmptyMeasure(f"no data rows in {path}")
    arr = np.array(rows)
    d = dim if dim is not None else arr.shape[1] - 1
    if arr.shape[1] != d + 1:
        raise EmptyMeasure(f"expected {d + 1} columns, got {arr.shape[1]}")
    return point_cloud(arr[:, :d], arr[:, d])


# ---------------------------------------------------------------------------
# clipping primitives


def polygon_area(vertices: np.ndarray) -> float:
    """Shoelace area of an ordered planar polygon."""
    if len(vertices) < 3:
        return 0.0
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def clip_polygon(vertices: np.ndarray, hs: HalfSpace, tol: float = CLIP_TOL) -> np.ndarray:
    """Sutherland-Hodgman clip of an ordered polygon by one half-space."""
    if len(vertices) == 0:
        return vertices
    dist = vertices @ hs.normal - hs.offset
    scale = tol * (1.0 + np.abs(vertices).max())
    out: list[np.ndarray] = []
    n = len(vertices)
    for i in range(n):
        j = (i + 1) % n
        di, dj = dist[i], dist[j]
        if di <= scale:
            out.append(vertices[i])
        if (di > scale) != (dj > scale) and abs(di - dj) > 0:
            s = di / (di - dj)
            if 0.0 < s < 1.0:
                out.append(vertices[i] + s * (vertices[j] - vertices[i]))
    return np.array(out) if out else np.empty((0, vertices.shape[1]))


def _hull_reduce(pts: np.ndarray) -> np.ndarray:
    """Drop interior candidate points; keeps clipping output sizes bounded."""
    if len(pts) <= pts.shape[1] + 1:
        return pts
    try:
        hull = ConvexHull(pts)
    except QhullError:
        # flat set: all further volumes vanish, a rounded dedupe is enough
        return np.unique(np.round(pts, 12), axis=0)
    return pts[hull.vertices]


def clip_points(vertices: np.ndarray, halfspaces, tol: float = CLIP_TOL) -> np.ndarray:
    """Clip a convex vertex set (any dimension, no ordering needed).

    Keeps inside vertices and adds every crossing of a kept/cut vertex
    pair.  Pairs that are chords rather than edges only contribute interior
    points, which cannot change the hull or its volume; the hull reduction
    after each half-space discards them so the candidate set stays small.
    """
    pts = np.asarray(vertices, float)
    for hs in halfspaces:
        if len(pts) == 0:
            break
        dist = pts @ hs.normal - hs.offset
        scale = tol * (1.0 + np.abs(pts).max())
        inside = dist <= scale
        new = [pts[inside]]
        ins, outs = np.flatnonzero(inside & (dist < -scale)), np.flatnonzero(~inside)
        if len(ins) and len(outs):
            di, dj = dist[ins][:, None], dist[outs][None, :]
            frac = (di / (di - dj))[..., None]
            seg = pts[ins][:, None, :] + frac * (pts[outs][None, :, :] - pts[ins][:, None, :])
            new.append(seg.reshape(-1, pts.shape[1]))
        pts = np.concatenate(new) if new else np.empty((0, pts.shape[1]))
        pts = _hull_reduce(pts)
    return pts


def polytope_volume(vertices: np.ndarray) -> float:
    """Volume of the hull of a point set: centroid fan over hull facets."""
    pts = np.asarray(vertices, float)
    d = pts.shape[1] if pts.ndim == 2 else 0
    if len(pts) <= d:
        return 0.0
    if d == 1:
        return float(pts.max() - pts.min())
    try:
        hull = ConvexHull(pts)
    except QhullError:
        return 0.0  # flat or degenerate region carries no d-volume
    center = pts.mean(axis=0)
    fact = math.factorial(d)
    vol = 0.0
    for facet in hull.simplices:
        vol += abs(np.linalg.det(pts[facet] - center)) / fact
    return vol


def _interval_clip(lo: float, hi: float, halfspaces) -> float:
    for hs in halfspaces:
        n, off = float(hs.normal[0]), hs.offset
        if n > 0:
            hi = min(hi, off / n)
        elif n < 0:
            lo = max(lo, off / n)
        elif off < 0:
            return 0.0
    return max(0.0, hi - lo)


def _body_region_volume(body: PolytopeBody, halfspaces) -> float:
    d = body.dim
    if d == 1:
        return _interval_clip(float(body.vertices.min()), float(body.vertices.max()), halfspaces)
    if d == 2:
        poly = body.vertices
        for hs in halfspaces:
            poly = clip_polygon(poly, hs)
            if len(poly) == 0:
                return 0.0
        return polygon_area(poly)
    return polytope_volume(clip_points(body.vertices, halfspaces))


# ---------------------------------------------------------------------------
# cone masses


def _sampled_region_mass(
    body: PolytopeBody, halfspaces, seed: int, samples: int
) -> RegionMass:
    # counter-based generator: one stream per (seed, body extent) call site
    rng = np.random.Generator(np.random.Philox(key=seed))
    lo, hi = body.vertices.min(axis=0), body.vertices.max(axis=0)
    box_vol = float(np.prod(hi - lo))
    pts = rng.uniform(lo, hi, size=(samples, body.dim))
    ok = np.ones(samples, bool)
    try:
        body_hull = ConvexHull(body.vertices)
    except QhullError as exc:
        raise EmptyMeasure("degenerate body") from exc
    eqs = body_hull.equations
    ok &= (pts @ eqs[:, :-1].T + eqs[:, -1] <= 1e-12).all(axis=1)
    for hs in halfspaces:
        ok &= hs.contains(pts, tol=0.0)
    frac = ok.mean()
    mass = body.density * box_vol * frac
    stderr = body.density * box_vol * math.sqrt(frac * (1 - frac) / samples)
    return RegionMass(float(mass), "sampled", float(stderr))


def mass_in_cone(
    measure: Measure,
    cone: SimplicialCone,
    *,
    seed: int = 0,
    samples: int = MC_SAMPLES,
) -> RegionMass:
    """Mass of the cone, with inclusive boundaries.

    Point clouds count every point satisfying the cone half-spaces (points
    on shared fan boundaries are counted by *each* adjacent cone here; use
    :func:`fan_masses` for the partition semantics).  Bodies are exact for
    d <= 3 and Monte Carlo with a reported standard error for d >= 4.
    """
    if not cone.is_full:
        raise DegenerateCone("mass_in_cone needs a full-dimensional cone")
    hs = cone_halfspaces(cone)
    if isinstance(measure, PointCloud):
        ok = np.ones(len(measure.points), bool)
        for h in hs:
            ok &= h.contains(measure.points, tol=1e-9 * (1 + np.abs(cone.apex).max()))
        return RegionMass(float(measure.weights[ok].sum()), "exact")
    if isinstance(measure, BodyUnion):
        parts = [mass_in_cone(b, cone, seed=seed + 7 * i, samples=samples)
                 for i, b in enumerate(measure.bodies)]
        err = math.sqrt(sum(p.stderr**2 for p in parts))
        method = "sampled" if err > 0 else "exact"
        return RegionMass(sum(p.mass for p in parts), method, err)
    if measure.dim <= 3:
        return RegionMass(measure.density * _body_region_volume(measure, hs), "exact")
    return _sampled_region_mass(measure, hs, seed, samples)


def fan_masses(measure: Measure, fan: Fan, *, seed: int = 0, samples: int = MC_SAMPLES) -> np.ndarray:
    """Masses of the d+1 fan cones; always sums to the total mass.

    Cloud points are assigned by the classification rule (boundary ties to
    the lowest cone index); bodies are clipped per cone (their shared
    boundaries carry no volume).
    """
    d = fan.dim
    if isinstance(measure, PointCloud):
        labels = classify_points(fan, measure.points)
        return np.bincount(labels, weights=measure.weights, minlength=d + 1)
    if isinstance(measure, BodyUnion):
        out = np.zeros(d + 1)
        for i, b in enumerate(measure.bodies):
            out += fan_masses(b, fan, seed=seed + 7 * i, samples=samples)
        return out
    return np.array(
        [mass_in_cone(measure, cone, seed=seed + 13 * k, samples=samples).mass
         for k, cone in enumerate(fan.cones)]
    )


def alpha_vector(zonotope: DeltaZonotope, x) -> np.ndarray:
    """Illumination vector: alpha_i = vol((x + cone_i) cap zonotope).

    Always exact (polytope clipping); the components sum to the zonotope
    volume for every interior x because the translated fan cones cover
    space with null pairwise overlaps inside the zonotope.
    """
    x = np.asarray(x, float)
    d = zonotope.dim
    if d > 3:
        raise DimensionTooLarge("alpha_vector is exact and supports d <= 3")
    if not zonotope.contains(x):
        raise PointOutside("alpha_vector needs x inside the zonotope")
    fan = face_fan(zonotope.simplex, apex=x)
    out = np.empty(d + 1)
    for i, cone in enumerate(fan.cones):
        hs = cone_halfspaces(cone)
        if d == 1:
            out[i] = _interval_clip(
                float(zonotope.vertices.min()), float(zonotope.vertices.max()), hs
            )
        elif d == 2:
            poly = zonotope.vertices
            for h in hs:
                poly = clip_polygon(poly, h)
                if len(poly) == 0:
                    break
            out[i] = polygon_area(poly) if len(poly) else 0.0
        else:
            out[i] = polytope_volume(clip_points(zonotope.vertices, hs))
    return out
