"""Circular-spline tests.

Every emitted piece is checked against first principles: its lifted points
must lie on the owning wall cell's plane and inside the cone, and the
projected curve must separate the plane exactly like the lifted
classification does (parity cross-check along a generic ray).
"""

import math

import numpy as np
import pytest

import fandiv as fd
from fandiv import errors, measures as ms, solver as sv, splines as sp

SEED = 4242
PLANE_TOL = 1e-9
RAY_ANGLE = 0.7453


def _piece_residuals(division):
    """Worst plane distance and cone violation over dense piece samples."""
    curt = division.solution.curtain
    cells = {pair: cell for pair, cell in zip(curt.pairs, curt.wall_cells)}
    worst_plane = worst_cone = 0.0
    for piece in division.spline.pieces:
        cell = cells[piece.pair]
        normal = np.cross(cell.generators[0], cell.generators[1])
        normal /= np.linalg.norm(normal)
        if isinstance(piece, sp.SegmentPiece) and not piece.bounded:
            piece = piece.clipped(-50.0, 50.0)
        for t in np.linspace(0.001, 0.999, 37):
            lifted = sp.lift_points(piece.point(t))[0]
            worst_plane = max(worst_plane, abs(normal @ (lifted - cell.apex)))
            coef = cell.coefficients(lifted)[0]
            worst_cone = max(worst_cone, -min(coef.min(), 0.0))
    return worst_plane, worst_cone


def _side_disagreements(division, rng, n=150):
    pts = rng.uniform(-1.5, 1.5, (n, 2))
    ray = np.array([math.cos(RAY_ANGLE), math.sin(RAY_ANGLE)])
    bad = checked = 0
    for p in pts:
        if sp.distance_to_spline(division.spline, p) < 1e-4:
            continue  # parity is undefined on the curve itself
        checked += 1
        s3 = sp.side_of_points(division.solution, division.instance, [p])[0]
        far = p + 1000.0 * ray
        far_side = sp.side_of_points(division.solution, division.instance, [far])[0]
        if sp.side_by_parity(division.spline, p, far_side, angle=RAY_ANGLE) != s3:
            bad += 1
    assert checked > n // 2
    return bad, checked


# ---------------------------------------------------------------------------
# the lift


def test_lift_points_is_the_paraboloid():
    pts = np.array([[0.0, 0.0], [1.0, 2.0], [-0.5, 0.25]])
    lifted = sp.lift_points(pts)
    np.testing.assert_allclose(lifted[:, :2], pts)
    np.testing.assert_allclose(lifted[:, 2], (pts**2).sum(axis=1), atol=0)
    with pytest.raises(errors.UnsupportedVariant):
        sp.lift_points(np.zeros((2, 3)))


def test_lift_cloud_is_exact():
    cloud = ms.point_cloud([[0.5, -0.25], [1.0, 1.0]], [2.0, 3.0])
    lifted = sp.lift_measure(cloud)
    assert lifted.total_mass == cloud.total_mass
    np.testing.assert_allclose(lifted.points[:, :2], cloud.points)
    np.testing.assert_array_equal(lifted.weights, cloud.weights)


def test_lift_body_preserves_mass():
    square = ms.polytope_body(np.array([[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [0.0, 1.0]]))
    k = 7
    lifted = sp.lift_measure(square, body_resolution=k)
    assert abs(lifted.total_mass - square.total_mass) <= 1e-12 * square.total_mass
    assert len(lifted.points) == 4 * k * k  # fan triangle count times k^2
    # centroids stay strictly inside and sit on the paraboloid
    xy = lifted.points[:, :2]
    assert (xy[:, 0] > 0).all() and (xy[:, 0] < 2).all()
    np.testing.assert_allclose(lifted.points[:, 2], (xy**2).sum(axis=1), atol=1e-15)


# ---------------------------------------------------------------------------
# wall-cell sections


def test_all_base_partition_gives_closed_arc_spline():
    s = fd.regular_simplex(3).scaled(10.0)
    curt = fd.curtain_from_partition(s, np.array([0.3, -0.2, 1.1]), {1, 2, 3})
    spline = sp.curtain_to_spline(curt, scale=10.0)
    assert spline.closed
    assert len(spline.pieces) == 3
    assert all(isinstance(p, sp.ArcPiece) for p in spline.pieces)
    # consecutive endpoints meet: collect all ends, each must have a partner
    ends = np.array([q for p in spline.pieces for q in p.endpoints])
    for i, e in enumerate(ends):
        d = np.linalg.norm(ends - e, axis=1)
        d[i] = np.inf
        assert d.min() <= 1e-7 * 10.0


def test_vertical_cells_give_line_pieces():
    s = fd.regular_simplex(3).scaled(10.0)
    curt = fd.curtain_from_partition(s, np.array([0.5, 0.1, 0.9]), {1})
    spline = sp.curtain_to_spline(curt, scale=10.0)
    kinds = {p.pair: type(p) for p in spline.pieces}
    # pair (1, 0) keeps two base generators -> slanted plane -> arc;
    # pairs (1, 2) and (1, 3) keep the top vertex -> vertical plane -> line
    assert kinds[(1, 2)] is sp.SegmentPiece
    assert kinds[(1, 3)] is sp.SegmentPiece
    segs = [p for p in spline.pieces if isinstance(p, sp.SegmentPiece)]
    assert any(not p.bounded for p in segs)


def test_unbounded_segment_needs_clipping():
    piece = sp.SegmentPiece(np.zeros(2), np.array([1.0, 0.0]), 0.0, math.inf, (1, 2))
    with pytest.raises(errors.DegenerateProjection):
        piece.point(0.5)
    finite = piece.clipped(-1.0, 3.0)
    assert finite.bounded
    np.testing.assert_allclose(finite.point(1.0), [3.0, 0.0])


# ---------------------------------------------------------------------------
# end-to-end divisions


def test_symmetric_clouds_split_exactly():
    rng = np.random.default_rng(SEED)

    def sym_cloud(n, shift):
        half = rng.uniform(-0.6, 0.6, (n, 2)) + shift
        return ms.point_cloud(np.concatenate([half, -half]), np.ones(2 * n))

    clouds = [sym_cloud(4, [0.3, 0.0]), sym_cloud(5, [0.0, 0.2]), sym_cloud(3, [-0.2, -0.1])]
    division = sp.solve_circular_spline(clouds)
    assert division.solution.status == "ok"
    assert division.solution.residual == 0.0
    worst_plane, worst_cone = _piece_residuals(division)
    assert worst_plane <= PLANE_TOL
    assert worst_cone <= PLANE_TOL
    bad, checked = _side_disagreements(division, rng)
    assert bad == 0


def test_generic_clouds_emit_arcs():
    rng = np.random.default_rng(SEED + 1)
    clouds = [
        ms.point_cloud(rng.uniform(-1, 1, (7, 2)), rng.uniform(0.4, 1.0, 7))
        for _ in range(3)
    ]
    division = sp.solve_circular_spline(clouds, sv.SolverConfig(epsilon=0.1))
    assert any(isinstance(p, sp.ArcPiece) for p in division.spline.pieces)
    worst_plane, worst_cone = _piece_residuals(division)
    assert worst_plane <= PLANE_TOL
    assert worst_cone <= PLANE_TOL
    bad, checked = _side_disagreements(division, rng)
    assert bad == 0


def test_body_division_bottoms_out_at_cell_floor():
    polys = [
        ms.polytope_body(np.array([[0.1, 0.1], [0.8, 0.2], [0.6, 0.8]])),
        ms.polytope_body(np.array([[-0.9, -0.1], [-0.2, -0.6], [-0.1, 0.1], [-0.7, 0.4]])),
        ms.polytope_body(np.array([[-0.2, -1.0], [0.6, -0.9], [0.4, -0.3], [-0.1, -0.4]])),
    ]
    # a sampled lift cannot resolve the balance below its cell weight, so
    # the tolerance must budget for a few cells
    division = sp.solve_circular_spline(
        polys, sv.SolverConfig(epsilon=0.01), body_resolution=8
    )
    sol = division.solution
    assert sol.status == "ok"
    floor = sv.discretization_floor(division.instance)
    cell = max(m.max_weight for m in division.instance.measures)
    assert floor <= cell / 2 + 1e-15
    assert sol.residual <= 3 * cell
    worst_plane, worst_cone = _piece_residuals(division)
    assert worst_plane <= PLANE_TOL


def test_division_masses_match_side_test():
    # the solver's reported entries must equal a direct recount of atoms
    # by the planar side test (same decision rule end to end)
    rng = np.random.default_rng(SEED + 2)
    clouds = [
        ms.point_cloud(rng.uniform(-1, 1, (6, 2)), rng.uniform(0.5, 1.0, 6))
        for _ in range(3)
    ]
    division = sp.solve_circular_spline(clouds, sv.SolverConfig(epsilon=0.2))
    sol = division.solution
    for i, cloud in enumerate(clouds):
        sides = sp.side_of_points(sol, division.instance, cloud.points)
        plus = cloud.weights[sides == 1].sum()
        assert abs(plus - sol.matrix.entries[i, 1]) <= 1e-9


def test_spline_validation():
    square = ms.polytope_body(np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]))
    with pytest.raises(errors.UnsupportedVariant):
        sp.solve_circular_spline([square, square])
    with pytest.raises(errors.UnsupportedVariant):
        sp.curtain_to_spline(
            fd.curtain_from_partition(fd.regular_simplex(2), np.zeros(2), {1})
        )
    with pytest.raises(errors.UnsupportedVariant):
        sp.lift_measure(ms.point_cloud([[0.0, 0.0, 0.0]], [1.0]))


def test_distance_to_spline_vanishes_on_pieces():
    s = fd.regular_simplex(3).scaled(8.0)
    curt = fd.curtain_from_partition(s, np.array([0.2, 0.4, 0.9]), {1, 2, 3})
    spline = sp.curtain_to_spline(curt, scale=8.0)
    for piece in spline.pieces:
        for t in (0.25, 0.5, 0.75):
            assert sp.distance_to_spline(spline, piece.point(t)) <= 1e-12
