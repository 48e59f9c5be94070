"""Self-verification suites for the ``verify`` command.

Each suite returns a list of check dicts ``{"name", "ok", "detail"}``; a
check marked ``"info": True`` is report-only and never fails the run.  The
suites re-derive every expected value on the spot (closed forms, recounts,
independent identities) so a run is meaningful on any install.
"""

from __future__ import annotations

import math

import numpy as np

from .complexes import decode_sphere, invert_psi, psi, sphere_chart
from .errors import FanDivError, NotRegular
from .geometry import (
    build_zonotope,
    dual_difference_body,
    new_simplex,
    pyramid_volume,
    regular_simplex,
    slab_intersection,
)
from .measures import point_cloud, polytope_body
from .solver import (
    SolverConfig,
    color_masses,
    cone_mass_matrix,
    make_instance,
    solve_curtain,
    solve_fan,
    test_map,
)
from .splines import lift_points, side_of_points, solve_circular_spline


def _check(name: str, ok: bool, detail: str = "", info: bool = False) -> dict:
    out = {"name": name, "ok": bool(ok), "detail": detail}
    if info:
        out["info"] = True
    return out


def _random_centered_simplex(rng, d: int):
    while True:
        v = rng.normal(size=(d + 1, d))
        v -= v.mean(axis=0)
        if abs(np.linalg.det(v[1:])) > 0.1:
            return new_simplex(v)


def _square(cx: float, cy: float, half: float = 0.5):
    return polytope_body(
        [[cx - half, cy - half], [cx + half, cy - half],
         [cx + half, cy + half], [cx - half, cy + half]]
    )


# ---------------------------------------------------------------------------
# suites


def zonotope_checks(seed: int = 0) -> list[dict]:
    rng = np.random.default_rng(seed)
    out = []
    for d in (1, 2, 3):
        s = _random_centered_simplex(rng, d)
        z = build_zonotope(s)
        det = abs(np.linalg.det(s.vertices[1:]))
        err = abs(z.volume - (d + 1) * det)
        out.append(_check(
            f"zonotope.volume-identity-d{d}", err <= 1e-9 * (1 + det),
            f"|vol - (d+1)|det|| = {err:.3e}"))
        cell_vol = sum(c.volume for c in z.cells)
        cent = max(
            float(np.linalg.norm(c.centroid + s.vertices[c.omitted] / 2.0))
            for c in z.cells
        )
        out.append(_check(
            f"zonotope.cubulation-d{d}",
            abs(cell_vol - z.volume) <= 1e-9 * (1 + z.volume) and cent <= 1e-12 * (1 + s.scale),
            f"cell volume gap {abs(cell_vol - z.volume):.3e}, centroid offset {cent:.3e}"))
    hexa = build_zonotope(regular_simplex(2))
    area = 3 * math.sqrt(3) / 2
    out.append(_check(
        "zonotope.hexagon-area", abs(hexa.volume - area) <= 1e-12,
        f"area {hexa.volume:.12f} vs 3*sqrt(3)/2"))
    rhomb = build_zonotope(regular_simplex(3))
    out.append(_check(
        "zonotope.rhombic-dodecahedron",
        len(rhomb.vertices) == 14 and len(rhomb.halfspaces) == 12,
        f"{len(rhomb.vertices)} vertices, {len(rhomb.halfspaces)} facets"))
    return out


def duality_checks(seed: int = 0) -> list[dict]:
    out = []
    for d in (2, 3):
        s = regular_simplex(d)
        try:
            verts, lam = dual_difference_body(s)
            v = s.vertices
            bounds = [(v[i] - v[j]) @ v[i]
                      for i in range(d + 1) for j in range(d + 1) if i != j]
            spread = max(bounds) - min(bounds)
            ok, detail = spread <= 1e-12, (
                f"{len(verts)} shared vertices, slab bound {lam:.6f} "
                f"(spread {spread:.1e})")
        except FanDivError as exc:
            ok, detail = False, str(exc)
        out.append(_check(f"duality.regular-d{d}", ok, detail))

    skew = new_simplex([[2.0, -1.0], [-1.0, 2.0], [-1.0, -1.0]])
    try:
        dual_difference_body(skew)
        out.append(_check("duality.rejects-non-regular", False,
                          "non-regular simplex was accepted"))
    except NotRegular:
        out.append(_check("duality.rejects-non-regular", True,
                          "NotRegular raised as required"))
    n_slab = len(slab_intersection(skew))
    n_zono = len(build_zonotope(skew).vertices)
    out.append(_check(
        "duality.non-regular-slab-diagnostic", True,
        f"skew simplex: slab body has {n_slab} vertices, zonotope {n_zono}; "
        "the single-constant slab description is a regular-class identity",
        info=True))
    return out


def pyramid_checks(seed: int = 0) -> list[dict]:
    rng = np.random.default_rng(seed + 1)
    out = []
    for d in (2, 3):
        s = _random_centered_simplex(rng, d)
        worst_sum = worst_alpha = 0.0
        for _ in range(5):
            w = rng.dirichlet(np.ones(d + 1))
            x = w @ s.vertices
            vols = [pyramid_volume(s, x, i) for i in range(d + 1)]
            worst_sum = max(worst_sum, abs(sum(vols) - s.volume))
            worst_alpha = max(
                worst_alpha, max(abs(vols[i] - w[i] * s.volume) for i in range(d + 1)))
        out.append(_check(
            f"pyramids.partition-d{d}",
            worst_sum <= 1e-12 * (1 + s.volume) and worst_alpha <= 1e-12 * (1 + s.volume),
            f"sum gap {worst_sum:.3e}, barycentric gap {worst_alpha:.3e}"))
    return out


def inversion_checks(seed: int = 0) -> list[dict]:
    rng = np.random.default_rng(seed + 2)
    out = []
    for d in (1, 2, 3):
        z = build_zonotope(regular_simplex(d))
        worst = 0.0
        for _ in range(8):
            cell = z.cells[rng.integers(0, d + 1)]
            x = rng.uniform(0.05, 0.95, size=d) @ cell.generators
            target = psi(z, x)
            back = invert_psi(z, target)
            worst = max(worst, float(np.linalg.norm(psi(z, back) - target)))
        tol = 1e-6 * z.diameter
        out.append(_check(
            f"inversion.psi-round-trip-d{d}", worst <= tol,
            f"worst residual {worst:.3e} (tol {tol:.1e})"))

    s = regular_simplex(2)
    worst = 0.0
    for _ in range(12):
        w = rng.dirichlet(np.ones(3))
        signs = rng.choice([-1.0, 1.0], size=3)
        zpt = w * signs
        p = decode_sphere(zpt, "B", s)
        worst = max(worst, float(np.abs(sphere_chart(p, s) - zpt).max()))
    out.append(_check(
        "inversion.sphere-chart-round-trip", worst <= 1e-12,
        f"worst coordinate gap {worst:.3e}"))
    return out


def test_map_checks(seed: int = 0) -> list[dict]:
    rng = np.random.default_rng(seed + 3)
    inst = make_instance([_square(-1.2, 0.3), _square(0.9, -0.4)])
    odd_ok = True
    for _ in range(40):
        zpt = rng.normal(size=3)
        zpt[rng.integers(0, 3)] *= rng.choice([0.0, 1.0])
        zpt /= np.abs(zpt).sum()
        if not np.array_equal(test_map(inst, -zpt), -test_map(inst, zpt)):
            odd_ok = False
            break
    out = [_check("test-map.oddness", odd_ok, "F(-z) == -F(z) bitwise on 40 charts")]

    worst_row = worst_neg = 0.0
    for _ in range(10):
        x = rng.uniform(-1.5, 1.5, size=2)
        m = cone_mass_matrix(inst, x)
        worst_row = max(worst_row, float(np.abs(m.sum(axis=1) - inst.totals).max()))
        worst_neg = max(worst_neg, float(max(0.0, -m.min())))
    out.append(_check(
        "test-map.row-sums", worst_row <= 1e-9 * (1 + inst.totals.max()),
        f"worst |row sum - total| = {worst_row:.3e}"))
    out.append(_check(
        "test-map.nonnegative-masses", worst_neg == 0.0,
        f"most negative cone mass {worst_neg:.3e}"))
    return out


def solver_checks(seed: int = 0) -> list[dict]:
    out = []
    inst = make_instance([_square(-1.2, 0.3), _square(0.9, -0.4)])
    sol = solve_curtain(inst, SolverConfig(seed=seed))
    recount = color_masses(inst, sol.x, sol.allocation).residual
    tol = 1e-6 * inst.totals.max()
    out.append(_check(
        "solver.curtain-two-squares",
        sol.status == "ok" and sol.residual <= tol and abs(recount - sol.residual) <= 1e-12,
        f"status {sol.status}, residual {sol.residual:.3e}, recount {recount:.3e}"))

    hexagon = polytope_body(
        [[math.cos(k * math.pi / 3), math.sin(k * math.pi / 3)] for k in range(6)])
    fan_inst = make_instance([hexagon], q=3)
    fan_sol = solve_fan(fan_inst, SolverConfig(seed=seed))
    thirds = np.abs(fan_sol.matrix.entries - hexagon.total_mass / 3).max()
    out.append(_check(
        "solver.fan-hexagon-thirds",
        fan_sol.status == "ok" and thirds <= 1e-6 * hexagon.total_mass,
        f"status {fan_sol.status}, worst third gap {thirds:.3e}"))
    return out


def spline_checks(seed: int = 0) -> list[dict]:
    rng = np.random.default_rng(seed + 4)
    measures = []
    for _ in range(3):
        half = rng.normal(size=(7, 2)) + rng.normal(size=2)
        pts = np.concatenate([half, -half])
        measures.append(point_cloud(pts, np.full(len(pts), 0.5)))
    div = solve_circular_spline(measures, SolverConfig(seed=seed))
    sol, spline, inst = div.solution, div.spline, div.instance

    cells = {pair: cell
             for pair, cell in zip(sol.curtain.pairs, sol.curtain.wall_cells)}
    span = 4.0 * float(inst.scale)
    worst = 0.0
    n_pieces = 0
    for piece in spline.pieces:
        cell = cells[tuple(piece.pair)]
        p = piece if getattr(piece, "bounded", True) else piece.clipped(-span, span)
        samples = np.array([p.point(t) for t in np.linspace(0.0, 1.0, 17)])
        lifted = lift_points(samples)
        inside = cell.contains(lifted, tol=1e-7 * (1 + inst.scale))
        worst = max(worst, float((~inside).sum()))
        n_pieces += 1
    out = [_check(
        "spline.pieces-live-on-wall-cells", worst == 0.0,
        f"{n_pieces} pieces, all lifted samples inside their wall cell")]

    worst_half = 0.0
    for m in div.planar_measures:
        side = side_of_points(sol, inst, m.points)
        plus = float(m.weights[side == 1].sum())
        worst_half = max(worst_half, abs(plus - m.total_mass / 2.0))
    out.append(_check(
        "spline.symmetric-clouds-bisect",
        sol.residual <= 1e-9 and worst_half <= 1e-9,
        f"residual {sol.residual:.3e}, side recount gap {worst_half:.3e}"))
    return out


_SUITES = (
    zonotope_checks,
    duality_checks,
    pyramid_checks,
    inversion_checks,
    test_map_checks,
    solver_checks,
    spline_checks,
)


def run_checks(seed: int = 0) -> list[dict]:
    """Run every suite; order and names are stable across runs."""
    out: list[dict] = []
    for suite in _SUITES:
        out.extend(suite(seed))
    return out
