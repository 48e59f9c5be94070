"""Simplices, face fans, centered zonotopes, cubulations and curtains.

Conventions used throughout:

* a simplex in R^d is stored as a ``(d+1, d)`` vertex matrix whose rows sum
  to zero (barycenter at the origin);
* the face fan assigns to each vertex index ``i`` the cone spanned by the
  *other* d vertices, so cone ``i`` "omits" generator ``a_i``;
* the zonotope ``R = [0, a_0] + ... + [0, a_d]`` is centrally symmetric and
  tiled by the d+1 parallelotope cells ``C_i`` spanned by ``{a_j : j != i}``;
* half-spaces are written ``normal . x <= offset`` with unit normals.

All objects are immutable after construction; every function is pure.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import ConvexHull, HalfspaceIntersection, QhullError

from .errors import (
    DegenerateCone,
    DegenerateSimplex,
    DimensionTooLarge,
    InvalidBarycentric,
    NotRegular,
    OffCenter,
    PointOutside,
    TrivialPartition,
)

# scale-relative tolerances; every comparison multiplies by (1 + scale)
BARYCENTER_RTOL = 1e-12
DEGENERACY_RTOL = 1e-12
TIE_RTOL = 1e-10
REGULARITY_RTOL = 1e-9
MEMBERSHIP_TOL = 1e-9
BARYCENTRIC_SUM_TOL = 1e-9
BARYCENTRIC_NEG_TOL = 1e-12

MAX_EXACT_DIM = 6


@dataclass(frozen=True, eq=False)
class HalfSpace:
    """Closed half-space ``{x : normal . x <= offset}`` with unit normal."""

    normal: np.ndarray
    offset: float

    def contains(self, points: np.ndarray, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
        pts = np.atleast_2d(points)
        return pts @ self.normal <= self.offset + tol

    def signed_distance(self, points: np.ndarray) -> np.ndarray:
        """Positive outside, negative inside (normal is unit length)."""
        return np.atleast_2d(points) @ self.normal - self.offset


def _as_halfspace(normal: np.ndarray, offset: float) -> HalfSpace:
    nrm = np.linalg.norm(normal)
    return HalfSpace(np.asarray(normal, float) / nrm, float(offset) / nrm)


# ---------------------------------------------------------------------------
# simplices


@dataclass(frozen=True, eq=False)
class Simplex:
    """Nondegenerate simplex with its barycenter at the origin."""

    vertices: np.ndarray  # (d+1, d)

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def edge_matrix(self) -> np.ndarray:
        """Columns ``a_1 .. a_d`` (a basis of R^d; a_0 = -sum of the rest)."""
        return self.vertices[1:].T

    @property
    def volume(self) -> float:
        return abs(np.linalg.det(self.vertices[1:] - self.vertices[0])) / math.factorial(self.dim)

    @property
    def diameter(self) -> float:
        d = self.vertices[:, None, :] - self.vertices[None, :, :]
        return float(np.sqrt((d * d).sum(-1)).max())

    @property
    def scale(self) -> float:
        return float(np.abs(self.vertices).max())

    @property
    def inradius_origin(self) -> float:
        """Distance from the origin to the nearest facet plane."""
        return min(h.offset for h in self.halfspaces())

    def halfspaces(self) -> list[HalfSpace]:
        out = []
        for i in range(self.dim + 1):
            rest = np.delete(self.vertices, i, axis=0)
            # facet plane through `rest`; normal points away from vertex i
            base = rest[0]
            span = rest[1:] - base
            normal = _plane_normal(span, self.dim)
            if normal @ (self.vertices[i] - base) > 0:
                normal = -normal
            out.append(_as_halfspace(normal, normal @ base))
        return out

    def barycentric(self, points: np.ndarray) -> np.ndarray:
        """Barycentric coordinates, shape (N, d+1) for (N, d) input."""
        pts = np.atleast_2d(np.asarray(points, float))
        system = np.vstack([self.vertices.T, np.ones(self.dim + 1)])
        rhs = np.vstack([pts.T, np.ones(len(pts))])
        sol = np.linalg.solve(system, rhs).T
        return sol if np.asarray(points).ndim > 1 else sol[0]

    def from_barycentric(self, weights: np.ndarray) -> np.ndarray:
        return np.asarray(weights, float) @ self.vertices

    def contains(self, points: np.ndarray, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
        b = np.atleast_2d(self.barycentric(points))
        ok = b.min(axis=1) >= -tol
        return ok if np.asarray(points).ndim > 1 else bool(ok[0])

    def is_regular(self, rtol: float = REGULARITY_RTOL) -> bool:
        d2 = _pairwise_sq_dists(self.vertices)
        return d2.max() - d2.min() <= rtol * d2.max()

    def scaled(self, factor: float) -> "Simplex":
        return Simplex(self.vertices * float(factor))


def _plane_normal(span: np.ndarray, dim: int) -> np.ndarray:
    if dim == 1:
        return np.array([1.0])
    u, s, vt = np.linalg.svd(span)
    return vt[-1]


def _pairwise_sq_dists(v: np.ndarray) -> np.ndarray:
    diff = v[:, None, :] - v[None, :, :]
    d2 = (diff * diff).sum(-1)
    return d2[np.triu_indices(len(v), 1)]


def new_simplex(vertices, recenter: bool = False) -> Simplex:
    """Validate a (d+1, d) vertex matrix and build a :class:`Simplex`.

    The barycenter must be at the origin (scale-relative tolerance) unless
    ``recenter=True``, in which case the mean is subtracted exactly.
    """
    v = np.array(vertices, dtype=float)
    if v.ndim != 2 or v.shape[0] != v.shape[1] + 1:
        raise DegenerateSimplex(f"expected (d+1, d) vertex matrix, got {v.shape}")
    d = v.shape[1]
    if recenter:
        v = v - v.mean(axis=0)
    scale = np.abs(v).max()
    if np.abs(v.sum(axis=0)).max() > BARYCENTER_RTOL * (1.0 + scale) * (d + 1):
        raise OffCenter("vertex barycenter is not at the origin (pass recenter=True)")
    det = np.linalg.det(v[1:] - v[0])
    if abs(det) <= DEGENERACY_RTOL * (1.0 + scale) ** d:
        raise DegenerateSimplex("vertices are affinely dependent")
    v.setflags(write=False)
    return Simplex(v)


def regular_simplex(d: int) -> Simplex:
    """Regular d-simplex with circumradius 1 and barycenter at the origin.

    Built recursively: the plane through the lower facet carries a scaled
    regular (d-1)-simplex, the last vertex sits at (0, ..., 0, 1).
    For d = 2 this is the triangle (0, 1), (-sqrt3/2, -1/2), (sqrt3/2, -1/2).
    """
    if d < 1:
        raise DimensionTooLarge("dimension must be >= 1")
    if d == 1:
        return new_simplex([[1.0], [-1.0]])
    base = regular_simplex(d - 1).vertices
    r = math.sqrt(1.0 - 1.0 / d**2)
    lower = np.hstack([base * r, np.full((d, 1), -1.0 / d)])
    top = np.zeros((1, d))
    top[0, -1] = 1.0
    return new_simplex(np.vstack([top, lower]))


# ---------------------------------------------------------------------------
# cones and fans


@dataclass(frozen=True, eq=False)
class SimplicialCone:
    """Cone ``apex + {sum s_j g_j : s_j >= 0}`` over the generator rows."""

    apex: np.ndarray
    generators: np.ndarray  # (k, d) rows
    index: int | None = None  # omitted vertex index when part of a fan

    @property
    def dim(self) -> int:
        return self.generators.shape[1]

    @property
    def is_full(self) -> bool:
        g = self.generators
        return g.shape[0] == g.shape[1] and abs(np.linalg.det(g)) > DEGENERACY_RTOL * (
            1.0 + np.abs(g).max()
        ) ** g.shape[1]

    def coefficients(self, points: np.ndarray) -> np.ndarray:
        """Generator coefficients of (points - apex).

        Lower-dimensional cones (fewer generators than ambient dimensions,
        e.g. curtain wall cells) are solved in the least-squares sense; the
        result only describes points lying in the cone's affine hull.
        """
        pts = np.atleast_2d(points)
        rel = (pts - self.apex).T
        g = self.generators
        if g.shape[0] == g.shape[1]:
            if not self.is_full:
                raise DegenerateCone("cone generators are linearly dependent")
            return np.linalg.solve(g.T, rel).T
        coef, _, rank, _ = np.linalg.lstsq(g.T, rel, rcond=None)
        if rank < g.shape[0]:
            raise DegenerateCone("cone generators are linearly dependent")
        return coef.T

    def contains(self, points: np.ndarray, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
        pts = np.atleast_2d(points)
        c = self.coefficients(pts)
        ok = c.min(axis=1) >= -tol
        if self.generators.shape[0] < self.generators.shape[1]:
            # membership also needs the point inside the affine hull
            recon = self.apex + c @ self.generators
            scale = 1.0 + np.abs(pts).max()
            ok &= np.linalg.norm(pts - recon, axis=1) <= tol * scale
        return ok if np.asarray(points).ndim > 1 else bool(ok[0])


@dataclass(frozen=True, eq=False)
class Fan:
    """Complete simplicial fan: cone ``i`` omits direction ``i``.

    ``mode`` is ``"translate"`` when every cone reuses the simplex vertex
    directions (the face fan moved to ``apex``) and ``"apex"`` when cone
    ``i`` is spanned by ``{a_j - apex : j != i}``.
    """

    simplex: Simplex
    apex: np.ndarray
    cones: tuple[SimplicialCone, ...]
    mode: str = "translate"

    @property
    def dim(self) -> int:
        return self.simplex.dim


def face_fan(simplex: Simplex, apex=None) -> Fan:
    """Face fan of the simplex, optionally translated to ``apex``."""
    d = simplex.dim
    apex = np.zeros(d) if apex is None else np.asarray(apex, float)
    cones = tuple(
        SimplicialCone(apex, np.delete(simplex.vertices, i, axis=0), index=i)
        for i in range(d + 1)
    )
    return Fan(simplex, apex, cones, mode="translate")


def apex_fan(simplex: Simplex, apex) -> Fan:
    """Fan of cones ``cone(apex, F_i)`` over the facets of the simplex.

    Requires the apex strictly inside the simplex; cone ``i`` is spanned by
    the directions from the apex to the vertices of the facet opposite
    vertex ``i``.
    """
    x = np.asarray(apex, float)
    b = simplex.barycentric(x)
    if b.min() <= BARYCENTRIC_NEG_TOL:
        raise PointOutside("apex must lie strictly inside the simplex")
    cones = tuple(
        SimplicialCone(x, np.delete(simplex.vertices, i, axis=0) - x, index=i)
        for i in range(simplex.dim + 1)
    )
    return Fan(simplex, x, cones, mode="apex")


def _translate_coords(simplex: Simplex, apex: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Fan coordinates t with t_0 = 0 solving  p - apex = sum t_j a_j."""
    t_rest = np.linalg.solve(simplex.edge_matrix, (pts - apex).T)
    return np.vstack([np.zeros(pts.shape[0]), t_rest]).T


def cone_membership(fan: Fan, points: np.ndarray) -> np.ndarray:
    """Boolean (N, d+1) matrix: point n lies in cone i (ties included).

    Translate mode: solve ``p - apex = sum t_j a_j`` with ``t_0 = 0``; after
    shifting by the minimum, point belongs to every cone whose coordinate is
    within ``TIE_RTOL * (1 + |t|_inf)`` of zero.  Apex mode: the ray from the
    apex through p exits the simplex through facet ``i`` (smallest positive
    barycentric exit time; ties shared likewise).
    """
    pts = np.atleast_2d(np.asarray(points, float))
    s = fan.simplex
    if fan.mode == "translate":
        t = _translate_coords(s, fan.apex, pts)
        shifted = t - t.min(axis=1, keepdims=True)
        tol = TIE_RTOL * (1.0 + np.abs(t).max(axis=1, keepdims=True))
        return shifted <= tol
    b_apex = s.barycentric(fan.apex)
    b_pts = np.atleast_2d(s.barycentric(pts))
    drop = b_apex[None, :] - b_pts  # rate at which each coordinate decays
    with np.errstate(divide="ignore", invalid="ignore"):
        exit_t = np.where(drop > 1e-300, b_apex[None, :] / drop, np.inf)
    tmin = exit_t.min(axis=1, keepdims=True)
    tol = TIE_RTOL * (1.0 + np.where(np.isfinite(tmin), tmin, 0.0))
    return exit_t <= tmin + tol


def classify_points(fan: Fan, points: np.ndarray) -> np.ndarray:
    """Lowest-index cone label for each point (ties go to the lowest index)."""
    member = cone_membership(fan, points)
    return np.argmax(member, axis=1)


def classify_point(fan: Fan, point) -> int:
    return int(classify_points(fan, np.atleast_2d(point))[0])


def cone_index_set(fan: Fan, point) -> set[int]:
    member = cone_membership(fan, np.atleast_2d(point))[0]
    return set(np.flatnonzero(member).tolist())


def cone_halfspaces(cone: SimplicialCone) -> list[HalfSpace]:
    """Facet half-spaces of a full-dimensional simplicial cone.

    Inward facet normals are the rows of the inverse generator matrix, so
    the returned half-spaces are ``(-r_i) . x <= (-r_i) . apex``.
    """
    if not cone.is_full:
        raise DegenerateCone("half-spaces need a full-dimensional cone")
    inward = np.linalg.inv(cone.generators.T)
    return [_as_halfspace(-row, -(row @ cone.apex)) for row in inward]


# ---------------------------------------------------------------------------
# zonotope and its cubulation


@dataclass(frozen=True, eq=False)
class Parallelotope:
    """Cubulation cell ``C_i = {sum_j c_j a_j : j != i, 0 <= c_j <= 1}``."""

    omitted: int
    generators: np.ndarray  # (d, d) rows, increasing source index

    @property
    def volume(self) -> float:
        return abs(np.linalg.det(self.generators))

    @property
    def centroid(self) -> np.ndarray:
        return self.generators.sum(axis=0) / 2.0

    def coords(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(points)
        return np.linalg.solve(self.generators.T, pts.T).T

    def contains(self, points: np.ndarray, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
        c = self.coords(points)
        return (c.min(axis=1) >= -tol) & (c.max(axis=1) <= 1.0 + tol)

    def on_front_face(self, points: np.ndarray, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
        """Front face: some cell coordinate equals one."""
        c = self.coords(points)
        inside = (c.min(axis=1) >= -tol) & (c.max(axis=1) <= 1.0 + tol)
        return inside & (c.max(axis=1) >= 1.0 - tol)


@dataclass(frozen=True, eq=False)
class DeltaZonotope:
    """Zonotope ``[0, a_0] + ... + [0, a_d]`` of a centered simplex.

    ``vertices`` are counterclockwise for d = 2; ``cells`` tile the zonotope
    (interiors disjoint) and cell ``i`` omits generator ``a_i``.
    """

    simplex: Simplex
    vertices: np.ndarray
    halfspaces: tuple[HalfSpace, ...]
    cells: tuple[Parallelotope, ...]
    volume: float

    @property
    def dim(self) -> int:
        return self.simplex.dim

    @property
    def diameter(self) -> float:
        return 2.0 * float(np.linalg.norm(self.vertices, axis=1).max())

    def contains(self, points: np.ndarray, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
        pts = np.atleast_2d(points)
        ok = np.ones(len(pts), bool)
        for h in self.halfspaces:
            ok &= h.contains(pts, tol)
        return ok if np.asarray(points).ndim > 1 else bool(ok[0])


def _dedupe_points(pts: np.ndarray, tol: float) -> np.ndarray:
    keep: list[np.ndarray] = []
    for p in pts:
        if not any(np.linalg.norm(p - q) <= tol for q in keep):
            keep.append(p)
    return np.array(keep)


def _ccw_order(pts: np.ndarray) -> np.ndarray:
    c = pts.mean(axis=0)
    ang = np.arctan2(pts[:, 1] - c[1], pts[:, 0] - c[0])
    return pts[np.argsort(ang)]


def build_zonotope(simplex: Simplex) -> DeltaZonotope:
    """Construct the zonotope of the simplex vertex directions.

    Vertices are the extreme subset sums of the d+1 generators; facets come
    from the hull with duplicate (triangulated) facet planes merged.  Caps
    the ambient dimension at 6: the 2^(d+1) subset-sum enumeration is exact
    but exponential.
    """
    d = simplex.dim
    if d > MAX_EXACT_DIM:
        raise DimensionTooLarge(f"zonotope construction supports d <= {MAX_EXACT_DIM}")
    v = simplex.vertices
    masks = (np.arange(2 ** (d + 1))[:, None] >> np.arange(d + 1)) & 1
    sums = masks @ v
    cells = tuple(
        Parallelotope(i, np.delete(v, i, axis=0)) for i in range(d + 1)
    )
    scale = simplex.scale
    if d == 1:
        lo, hi = sums.min(), sums.max()
        verts = np.array([[lo], [hi]])
        hs = (HalfSpace(np.array([1.0]), hi), HalfSpace(np.array([-1.0]), -lo))
        vol = hi - lo
    else:
        hull = ConvexHull(sums)
        verts = _dedupe_points(sums[hull.vertices], 1e-12 * (1.0 + scale))
        if d == 2:
            verts = _ccw_order(verts)
        eqs = hull.equations / np.linalg.norm(hull.equations[:, :-1], axis=1, keepdims=True)
        uniq = np.unique(np.round(eqs, 9), axis=0)
        hs = tuple(HalfSpace(row[:-1], -row[-1]) for row in uniq)
        vol = float(hull.volume)
    verts.setflags(write=False)
    return DeltaZonotope(simplex, verts, tuple(hs), cells, float(vol))


def locate_cell(zonotope: DeltaZonotope, point, tol: float = MEMBERSHIP_TOL) -> int:
    """Lowest index of a cubulation cell containing the point."""
    for cell in zonotope.cells:
        if cell.contains(np.atleast_2d(point), tol)[0]:
            return cell.omitted
    raise PointOutside("point lies in no cubulation cell")


# ---------------------------------------------------------------------------
# dual description by difference slabs


def slab_halfspaces(simplex: Simplex) -> list[HalfSpace]:
    """One half-space per ordered vertex pair: (a_i - a_j) . x <= (a_i - a_j) . a_i."""
    v = simplex.vertices
    out = []
    for i in range(len(v)):
        for j in range(len(v)):
            if i == j:
                continue
            u = v[i] - v[j]
            out.append(_as_halfspace(u, u @ v[i]))
    return out


def slab_intersection(simplex: Simplex) -> np.ndarray:
    """Vertices of the intersection of all difference slabs (any simplex)."""
    hs = slab_halfspaces(simplex)
    if simplex.dim == 1:
        hi = min(h.offset for h in hs if h.normal[0] > 0)
        lo = max(-h.offset for h in hs if h.normal[0] < 0)
        return np.array([[lo], [hi]])
    rows = np.array([np.append(h.normal, -h.offset) for h in hs])
    hsi = HalfspaceIntersection(rows, np.zeros(simplex.dim))
    verts = _dedupe_points(hsi.intersections, 1e-9 * (1.0 + simplex.scale))
    if simplex.dim == 2:
        verts = _ccw_order(verts)
    return verts


def dual_difference_body(simplex: Simplex) -> tuple[np.ndarray, float]:
    """Slab description of the zonotope of a *regular* simplex.

    Returns ``(vertices, lam)`` where ``lam`` is the common slab bound
    ``(a_i - a_j) . a_i``.  Verifies that the slab intersection and the
    zonotope have the same vertex set (1e-9, scale-relative); regularity is
    what makes the bound a single constant, hence ``NotRegular`` otherwise.
    """
    if not simplex.is_regular():
        raise NotRegular("difference-slab duality requires a regular simplex")
    v = simplex.vertices
    bounds = [
        (v[i] - v[j]) @ v[i] for i in range(len(v)) for j in range(len(v)) if i != j
    ]
    lam = float(np.mean(bounds))
    slab_verts = slab_intersection(simplex)
    zono = build_zonotope(simplex)
    tol = 1e-9 * (1.0 + simplex.scale)
    if len(slab_verts) != len(zono.vertices):
        raise DegenerateSimplex(
            f"slab body has {len(slab_verts)} vertices, zonotope has {len(zono.vertices)}"
        )
    dist = np.linalg.norm(slab_verts[:, None, :] - zono.vertices[None, :, :], axis=2)
    if dist.min(axis=1).max() > tol or dist.min(axis=0).max() > tol:
        raise DegenerateSimplex("slab body vertices do not match the zonotope")
    return slab_verts, lam


# ---------------------------------------------------------------------------
# pyramid volumes


def pyramid_volume(simplex: Simplex, x, facet: int) -> float:
    """Volume of the pyramid over facet ``facet`` with apex ``x`` inside.

    Equals ``alpha_facet * vol(simplex)`` where alpha is the barycentric
    coordinate of x for the omitted vertex — the cone-volume identity the
    alpha tests lean on.
    """
    x = np.asarray(x, float)
    b = simplex.barycentric(x)
    if b.min() < -MEMBERSHIP_TOL:
        raise PointOutside("pyramid apex must lie in the simplex")
    base = np.delete(simplex.vertices, facet, axis=0)
    return abs(np.linalg.det(base - x)) / math.factorial(simplex.dim)


# ---------------------------------------------------------------------------
# curtains


@dataclass(frozen=True, eq=False)
class Curtain:
    """Polyhedral curtain: wall cells separating two groups of fan cones.

    ``part`` is the canonical side (never contains 0); the wall is the union
    of the cells ``apex + cone{a_j : j not in {nu, mu}}`` over pairs
    ``nu in part``, ``mu`` in the complement.  Side +1 of the division is
    the union of fan cones indexed by ``part``.
    """

    simplex: Simplex
    apex: np.ndarray
    part: frozenset[int]
    pairs: tuple[tuple[int, int], ...]
    wall_cells: tuple[SimplicialCone, ...]

    @property
    def complement(self) -> frozenset[int]:
        return frozenset(range(self.simplex.dim + 1)) - self.part

    def side_of_labels(self, labels: np.ndarray) -> np.ndarray:
        """Map fan-cone labels to +1 (part side) / -1 (complement side)."""
        inpart = np.isin(np.asarray(labels), sorted(self.part))
        return np.where(inpart, 1, -1)


def canonical_partitions(d: int) -> list[frozenset[int]]:
    """All canonical two-part splits of {0..d}: the side not containing 0."""
    out = []
    for r in range(1, d + 1):
        for combo in itertools.combinations(range(1, d + 1), r):
            out.append(frozenset(combo))
    return out


def curtain_from_partition(simplex: Simplex, apex, part) -> Curtain:
    """Build the curtain for a proper bipartition of the vertex indices.

    The input part may be either side; it is canonicalized so that index 0
    lands in the complement, which makes the complement identity
    ``curtain(P) == curtain(P^c)`` hold by construction.
    """
    d = simplex.dim
    all_idx = frozenset(range(d + 1))
    p = frozenset(int(i) for i in part)
    if not p or p == all_idx or not p <= all_idx:
        raise TrivialPartition("part must be a proper nonempty subset of the vertex indices")
    if 0 in p:
        p = all_idx - p
    apex = np.asarray(apex, float)
    pairs = tuple(
        (nu, mu) for nu in sorted(p) for mu in sorted(all_idx - p)
    )
    cells = tuple(
        SimplicialCone(apex, np.delete(simplex.vertices, [nu, mu], axis=0))
        for nu, mu in pairs
    )
    return Curtain(simplex, apex, p, pairs, cells)


# ---------------------------------------------------------------------------
# quadrangulation maps


def front_face_map(weights) -> np.ndarray:
    """Map barycentric weights to front-face coordinates of the cube tiling.

    Sort t descending as t_{s(0)} >= ... >= t_{s(n-1)}, set
    ``c_k = (k+1) (t_{s(k)} - t_{s(k+1)})`` (with t_{s(n)} = 0) and return
    ``y`` with ``y_{s(i)} = sum_{k >= i} c_k``.  The output always has max
    coordinate exactly 1 (the telescoped sum of the c_k is sum t = 1), which
    is what places the image on a front face.
    """
    t = np.asarray(weights, float)
    if t.min() < -BARYCENTRIC_NEG_TOL:
        raise InvalidBarycentric(f"negative weight {t.min():g}")
    if abs(t.sum() - 1.0) > BARYCENTRIC_SUM_TOL:
        raise InvalidBarycentric(f"weights sum to {t.sum():g}, expected 1")
    order = np.argsort(-t, kind="stable")
    ts = np.append(t[order], 0.0)
    c = (np.arange(1, len(t) + 1)) * (ts[:-1] - ts[1:])
    y = np.empty_like(t)
    y[order] = np.cumsum(c[::-1])[::-1]
    return y


def zonotope_map(simplex: Simplex, weights) -> np.ndarray:
    """Compose the front-face map with ``y -> sum_j y_j a_j``.

    Sends the simplex (in barycentric form) onto the union of the front
    faces of the cubulation cells; the facet with ``t_i = 0`` lands on the
    front face of cell ``C_i`` with no sign flip.
    """
    y = front_face_map(weights)
    return y @ simplex.vertices


def facet_to_front_face(simplex: Simplex, facet: int, weights) -> np.ndarray:
    """Restriction of the zonotope map to the facet opposite ``facet``."""
    t = np.asarray(weights, float)
    if abs(t[facet]) > BARYCENTRIC_SUM_TOL:
        raise InvalidBarycentric(f"weight {facet} must vanish on the opposite facet")
    return zonotope_map(simplex, t)
