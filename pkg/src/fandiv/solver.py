"""Fair-division solvers.

Two entry points share one machinery:

* :func:`solve_curtain` — split each of d measures in R^d in half by one
  curtain (apex + bipartition of the d+1 fan cones);
* :func:`solve_fan` — split n measures into q = p^k equal parts by one
  fan coloring, in dimension d = n (q - 1).

The search space is the apex position; colorings are enumerated (one
canonical representative per relabeling orbit).  Cone masses are computed
once per apex and recombined per coloring, so adding colorings is nearly
free.  Bodies admit root finding on the square balance system (d equations,
d unknowns); point clouds are piecewise constant, so small planar cloud
instances are solved *exactly* by enumerating the ray arrangement their
classification induces, and larger ones bottom out at the discretization
floor (half the largest point weight).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares, minimize

from .complexes import canonical_allocations
from .errors import (
    BudgetExceeded,
    NotPrimePower,
    UnsupportedVariant,
)
from .geometry import (
    Curtain,
    Simplex,
    apex_fan,
    canonical_partitions,
    curtain_from_partition,
    face_fan,
    regular_simplex,
)
from .measures import (
    Measure,
    PointCloud,
    disc_body,
    fan_masses,
    support_radius,
)

FLOOR_SLACK = 1e-9
DEFAULT_REL_EPSILON = 1e-6
HOMOTHETY_MARGIN = 2.0


@dataclass(frozen=True)
class SolverConfig:
    epsilon: float | None = None  # relative residual target; None picks a default
    seed: int = 0
    grid_resolution: int = 10
    budget: int = 6000  # cone-mass-matrix evaluations
    mode: str = "A"  # configuration-space flavor recorded in diagnostics


@dataclass(frozen=True)
class DiscrepancyMatrix:
    entries: np.ndarray  # (n, q) part masses per measure
    totals: np.ndarray  # (n,)

    @property
    def q(self) -> int:
        return self.entries.shape[1]

    @property
    def residual(self) -> float:
        return float(np.abs(self.entries - self.totals[:, None] / self.q).max())


@dataclass(frozen=True)
class Solution:
    x: np.ndarray
    allocation: tuple[int, ...]
    residual: float
    matrix: DiscrepancyMatrix
    status: str  # "ok" | "floor" | "budget"
    warnings: tuple[str, ...]
    diagnostics: dict
    curtain: Curtain | None = None

    @property
    def part(self) -> frozenset[int]:
        return frozenset(i for i, c in enumerate(self.allocation) if c == 1)


@dataclass(frozen=True)
class Instance:
    simplex: Simplex  # carrier after homothety
    measures: tuple[Measure, ...]
    q: int
    scale: float  # homothety factor applied to the base simplex

    @property
    def dim(self) -> int:
        return self.simplex.dim

    @property
    def n(self) -> int:
        return len(self.measures)

    @property
    def totals(self) -> np.ndarray:
        return np.array([m.total_mass for m in self.measures])


def verify_prime_power(q: int) -> tuple[int, int]:
    """Return (p, k) with q = p^k, or raise :class:`NotPrimePower`."""
    if q < 2:
        raise NotPrimePower(f"{q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            k, m = 0, q
            while m % p == 0:
                m //= p
                k += 1
            if m == 1:
                return p, k
            raise NotPrimePower(f"{q} has two distinct prime factors")
    raise NotPrimePower(f"{q} is not a prime power")


def make_instance(measures, q: int = 2, simplex: Simplex | None = None,
                  margin: float = HOMOTHETY_MARGIN) -> Instance:
    """Validate measures and enlarge the carrier so it dominates the supports.

    The simplex is scaled about the origin until the ball of radius
    ``margin * support_radius`` fits inside it.  Fan cones only depend on
    directions, so the division problem is unchanged; the factor is kept
    for reports.
    """
    measures = tuple(measures)
    if not measures:
        raise UnsupportedVariant("need at least one measure")
    dims = {m.dim for m in measures}
    if len(dims) != 1:
        raise UnsupportedVariant(f"measures span several dimensions: {sorted(dims)}")
    d = dims.pop()
    base = regular_simplex(d) if simplex is None else simplex
    r = max(support_radius(m) for m in measures)
    factor = max(1.0, margin * r / base.inradius_origin)
    return Instance(base.scaled(factor), measures, q, factor)


# ---------------------------------------------------------------------------
# evaluation kernel


def cone_mass_matrix(inst: Instance, x, seed: int = 0) -> np.ndarray:
    """(n, d+1) masses of the translated face-fan cones at apex x."""
    fan = face_fan(inst.simplex, apex=np.asarray(x, float))
    return np.array([fan_masses(m, fan, seed=seed) for m in inst.measures])


def color_masses(inst: Instance, x, allocation, seed: int = 0) -> DiscrepancyMatrix:
    m = cone_mass_matrix(inst, x, seed=seed)
    return _recombine(m, allocation, inst.q, inst.totals)


def _recombine(mass_matrix: np.ndarray, allocation, q: int, totals: np.ndarray) -> DiscrepancyMatrix:
    alloc = np.asarray(allocation)
    entries = np.zeros((mass_matrix.shape[0], q))
    for j in range(q):
        cols = alloc == j
        if cols.any():
            entries[:, j] = mass_matrix[:, cols].sum(axis=1)
    return DiscrepancyMatrix(entries, totals)


def test_map(inst: Instance, z, seed: int = 0) -> np.ndarray:
    """Odd balance map on the two-color chart sphere.

    ``F_j(z) = sum_nu sign(z_nu) m_{j,nu}`` at the carrier point with
    barycentric weights |z|.  Negating z negates every term, so
    F(-z) = -F(z) holds bitwise; a zero of F is an exact bisection of every
    measure by the partition read off the signs.
    """
    z = np.asarray(z, float)
    x = np.abs(z) @ inst.simplex.vertices
    m = cone_mass_matrix(inst, x, seed=seed)
    return m @ np.sign(z)


# ---------------------------------------------------------------------------
# thresholds


def _is_cloud(m: Measure) -> bool:
    return isinstance(m, PointCloud)


def discretization_floor(inst: Instance) -> float:
    """Best residual any division can promise on point clouds: max weight / 2."""
    floors = [m.max_weight / 2.0 for m in inst.measures if _is_cloud(m)]
    return max(floors) if floors else 0.0


def acceptance_threshold(inst: Instance, cfg: SolverConfig) -> float:
    """Absolute residual target: epsilon (default 1e-6) times the largest total."""
    max_total = float(inst.totals.max())
    rel = DEFAULT_REL_EPSILON if cfg.epsilon is None else cfg.epsilon
    return rel * max_total


# ---------------------------------------------------------------------------
# apex grids


def _barycentric_grid(d: int, resolution: int) -> np.ndarray:
    """All weight vectors with coordinates k/resolution summing to one."""
    combos = itertools.combinations(range(resolution + d), d)
    rows = []
    for c in combos:
        parts = np.diff((-1,) + c + (resolution + d,)) - 1
        rows.append(parts)
    return np.array(rows, float) / resolution


def _grid_points(inst: Instance, resolution: int) -> tuple[np.ndarray, int]:
    """Candidate apexes: support box lattice plus a coarse carrier lattice.

    The carrier is much larger than the supports (homothety margin), so the
    barycentric lattice alone is too coarse where the mass actually sits.
    Returns the stacked points and the size of the support-box part.
    """
    s = inst.simplex
    w = _barycentric_grid(s.dim, max(3, resolution // 2))
    w = 0.96 * w + 0.04 / (s.dim + 1)
    coarse = w @ s.vertices
    support = np.concatenate([m.support_points for m in inst.measures])
    lo, hi = support.min(axis=0), support.max(axis=0)
    pad = 0.3 * (hi - lo).max() + 1e-9
    if s.dim <= 2:
        axis_res = resolution
    elif s.dim == 3:
        axis_res = max(6, (3 * resolution) // 4)
    else:  # sampled masses make lattice points expensive in d >= 4
        axis_res = max(4, resolution // 2)
    axes = [np.linspace(lo[k] - pad, hi[k] + pad, axis_res) for k in range(s.dim)]
    box = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, s.dim)
    return np.concatenate([box, coarse]), len(box)


# ---------------------------------------------------------------------------
# shared search driver


def _rank_and_refine(inst, cfg, allocations, target, seed=0):
    """Grid stage + per-allocation refinement; returns the best iterate.

    Cone masses are evaluated once per grid apex and shared by every
    allocation.  Allocations are then refined in order of their best grid
    residual (ties keep enumeration order, i.e. lexicographic allocation)
    until one drops below ``target``.
    """
    evals = 0
    budget = cfg.budget
    grid, n_box = _grid_points(inst, cfg.grid_resolution)
    masses = []
    for x in grid:
        masses.append(cone_mass_matrix(inst, x, seed=seed))
        evals += 1
        if evals >= budget:
            break
    grid = grid[: len(masses)]
    mass_stack = np.stack(masses)  # (G, n, d+1)
    totals = inst.totals

    alloc_arr = np.array(allocations)  # (P, d+1)
    # residuals (G, P) by recombining the shared mass stack
    resid = np.empty((len(grid), len(allocations)))
    for pi in range(len(allocations)):
        entries = np.stack(
            [mass_stack[:, :, alloc_arr[pi] == j].sum(axis=2) for j in range(inst.q)],
            axis=2,
        )  # (G, n, q)
        resid[:, pi] = np.abs(entries - totals[None, :, None] / inst.q).max(axis=(1, 2))

    best_grid = resid.min(axis=0)  # per allocation
    order = np.argsort(best_grid, kind="stable")

    all_bodies = all(not _is_cloud(m) for m in inst.measures)
    best: tuple[float, tuple[int, ...], np.ndarray] | None = None

    def note(res, alloc, x):
        nonlocal best
        if best is None or res < best[0] - 1e-15:
            best = (res, alloc, x)

    span = np.linalg.norm(grid.max(axis=0) - grid.min(axis=0))
    min_sep = span / (cfg.grid_resolution + 1)
    strata = _orthant_ids(grid[: min(n_box, len(grid))])
    for rank, pi in enumerate(order):
        alloc = tuple(int(c) for c in alloc_arr[pi])
        starts = _stratified_starts(grid, strata, resid[:, pi], min_sep)
        note(float(resid[:, pi].min()), alloc, grid[int(resid[:, pi].argmin())])
        if evals >= budget:
            break
        # every allocation deserves a refinement slice before the budget
        # dies; converged ones hand their leftovers down the ranking
        slice_ = max(400, (budget - evals) // (len(order) - rank))
        x_ref, r_ref, used = _refine(inst, cfg, alloc, starts, target,
                                     min(budget - evals, slice_), all_bodies, seed)
        evals += used
        note(r_ref, alloc, x_ref)
        if r_ref <= target:
            break

    res, alloc, x = best
    return x, alloc, res, evals


def _orthant_ids(box_grid: np.ndarray) -> np.ndarray:
    """Orthant of each support-box lattice point (first three axes)."""
    if len(box_grid) == 0:
        return np.zeros(0, dtype=int)
    mid = (box_grid.min(axis=0) + box_grid.max(axis=0)) / 2.0
    bits = (box_grid[:, :3] > mid[None, :3]).astype(int)
    return bits @ (1 << np.arange(bits.shape[1]))


def _stratified_starts(grid, strata, resid_col, min_sep):
    """Refinement starts for one allocation.

    The best point of every support-box orthant is kept — residual ranking
    alone is unreliable on the kinked landscape (large plateaus can outrank
    the basin that actually reaches zero) but orthant coverage cannot be
    ranked away.  Two spatially diverse overall tops are appended for
    apexes outside the box.
    """
    chosen: list[int] = []
    for o in range(int(strata.max()) + 1 if len(strata) else 0):
        rows = np.flatnonzero(strata == o)
        if len(rows):
            chosen.append(int(rows[resid_col[rows].argmin()]))
    chosen.sort(key=lambda i: resid_col[i])
    extra = 0
    for i in np.argsort(resid_col, kind="stable"):
        if extra == 2:
            break
        if all(np.linalg.norm(grid[i] - grid[j]) >= min_sep for j in chosen):
            chosen.append(int(i))
            extra += 1
    return [grid[i] for i in chosen]


def _refine(inst, cfg, alloc, starts, target, budget, all_bodies, seed):
    """Polish one allocation from several grid starts.

    Bodies: damped least squares on the square balance system from each
    start (the landscape has kink-bounded basins, so spatially diverse
    starts matter more than iterations).  Clouds/mixed: Nelder-Mead on the
    max-residual, which tolerates the piecewise-constant plateaus.
    Returns (x, residual, evaluations).
    """
    evals = 0
    q, totals = inst.q, inst.totals

    def matrix_at(x):
        nonlocal evals
        evals += 1
        return cone_mass_matrix(inst, x, seed=seed)

    def balance(x):
        m = _recombine(matrix_at(x), alloc, q, totals)
        # first q-1 columns determine the last; square system in d unknowns
        return (m.entries[:, : q - 1] - totals[:, None] / q).ravel()

    def residual_at(x):
        return _recombine(matrix_at(x), alloc, q, totals).residual

    best_x = np.asarray(starts[0], float)
    best_r = residual_at(best_x)

    def consider(x):
        nonlocal best_x, best_r
        r = residual_at(x)
        if r < best_r:
            best_x, best_r = np.asarray(x, float).copy(), r
        return r

    if all_bodies:
        for x0 in starts:
            if best_r <= target or evals >= budget:
                return best_x, best_r, evals
            try:
                out = least_squares(
                    balance, x0, diff_step=1e-6,
                    xtol=1e-15, ftol=1e-15, gtol=1e-15,
                    max_nfev=min(budget - evals, 120 * inst.dim),
                )
                consider(out.x)
            except Exception:
                continue
        if best_r <= target or evals >= budget:
            return best_x, best_r, evals
        # one cheap basin hop from the incumbent, then polish it
        out = minimize(
            residual_at, best_x, method="Nelder-Mead",
            options={"maxfev": min(budget - evals, 60 * (inst.dim + 1)),
                     "xatol": 1e-12, "fatol": 1e-15},
        )
        consider(out.x)
        if evals < budget:
            try:
                out2 = least_squares(
                    balance, best_x, diff_step=1e-6,
                    xtol=1e-15, ftol=1e-15, gtol=1e-15,
                    max_nfev=min(budget - evals, 120 * inst.dim),
                )
                consider(out2.x)
            except Exception:
                pass
        return best_x, best_r, evals

    for x0 in starts[:3]:
        if best_r <= target or evals >= budget:
            return best_x, best_r, evals
        # dense atom clouds are nearly smooth above their cell size: a
        # coarse-step descent crosses the plateaus Nelder-Mead stalls on
        hop = x0
        try:
            out = least_squares(
                balance, x0, diff_step=0.05,
                xtol=1e-12, ftol=1e-12, gtol=1e-12,
                max_nfev=min(budget - evals, 60 * inst.dim),
            )
            consider(out.x)
            hop = out.x
        except Exception:
            pass
        if best_r <= target or evals >= budget:
            return best_x, best_r, evals
        out = minimize(
            residual_at,
            hop,
            method="Nelder-Mead",
            options={"maxfev": min(budget - evals, 160 * (inst.dim + 1)),
                     "xatol": 1e-12, "fatol": 1e-15},
        )
        consider(out.x)
    return best_x, best_r, evals


def _finish(inst, cfg, x, alloc, res, evals, eps_abs, extra_diag=None):
    floor = discretization_floor(inst)
    matrix = color_masses(inst, x, alloc, seed=cfg.seed)
    diagnostics = {
        "evaluations": evals,
        "scale": inst.scale,
        "epsilon_abs": eps_abs,
        "floor": floor,
        "mode": cfg.mode,
    }
    if extra_diag:
        diagnostics.update(extra_diag)
    curtain = None
    if inst.q == 2:
        part = {i for i, c in enumerate(alloc) if c == 1}
        curtain = curtain_from_partition(inst.simplex, x, part)
    if res <= eps_abs:
        return Solution(x, alloc, res, matrix, "ok", (), diagnostics, curtain)
    if res <= floor + FLOOR_SLACK:
        warn = (
            f"residual {res:.3e} is within the point-weight floor "
            f"{floor:.3e}; a single atom of that weight blocks finer balance",
        )
        return Solution(x, alloc, res, matrix, "floor", warn, diagnostics, curtain)
    sol = Solution(x, alloc, res, matrix, "budget", (), diagnostics, curtain)
    raise BudgetExceeded(
        f"best residual {res:.3e} above target {eps_abs:.3e}", best=sol
    )


# ---------------------------------------------------------------------------
# curtain solver (q = 2)


def solve_curtain(inst: Instance, cfg: SolverConfig | None = None) -> Solution:
    """Find an apex and bipartition halving every measure.

    Requires as many measures as dimensions.  Small planar cloud instances
    are solved exactly (the classification arrangement is enumerated);
    everything else goes through the grid + refinement driver.
    """
    cfg = cfg or SolverConfig()
    if inst.q != 2:
        raise UnsupportedVariant("curtain division is the two-part case")
    if inst.n != inst.dim:
        raise UnsupportedVariant(
            f"curtain division needs d measures in R^d, got {inst.n} in R^{inst.dim}"
        )
    eps_abs = acceptance_threshold(inst, cfg)
    if (
        inst.dim == 2
        and all(_is_cloud(m) for m in inst.measures)
        and sum(len(m.points) for m in inst.measures) <= 48
    ):
        x, alloc, res = _exact_curtain_2d(inst)
        return _finish(inst, cfg, x, alloc, res, 0, eps_abs, {"method": "exact"})
    allocations = [
        tuple(1 if i in part else 0 for i in range(inst.dim + 1))
        for part in canonical_partitions(inst.dim)
    ]
    # refining below the atom floor is pointless, so the search stops there
    target = max(eps_abs, discretization_floor(inst) + FLOOR_SLACK)
    x, alloc, res, evals = _rank_and_refine(inst, cfg, allocations, target, seed=cfg.seed)
    return _finish(inst, cfg, x, alloc, res, evals, eps_abs, {"method": "grid+refine"})


def _exact_curtain_2d(inst: Instance):
    """Exhaustive minimum over the ray arrangement of a planar cloud instance.

    The residual is constant on each cell of the arrangement of the 3N rays
    {p - s a_j}; every cell is represented by an arrangement vertex nudged
    into its interior (plus the raw candidates for boundary configurations),
    so scanning candidates finds the global minimum exactly.
    """
    s = inst.simplex
    pts = np.concatenate([m.points for m in inst.measures])
    dirs = s.vertices  # boundary rays leave each point along every -a_j
    cand = [pts]
    # line intersections: p - u a_j = p' - v a_k  =>  [a_j | -a_k] (u,v) = p - p'
    for j in range(3):
        for k in range(j + 1, 3):
            A = np.column_stack([dirs[j], -dirs[k]])
            Ainv = np.linalg.inv(A)
            diff = pts[:, None, :] - pts[None, :, :]
            uv = np.einsum("ab,ijb->ija", Ainv, diff)
            inter = pts[:, None, :] - uv[..., :1] * dirs[j]
            cand.append(inter.reshape(-1, 2))
    cand = np.concatenate(cand)
    # dedupe to keep the perturbation fan small
    cand = np.unique(np.round(cand, 10), axis=0)
    scale = 1.0 + np.abs(pts).max()
    delta = 1e-6 * scale
    ang = np.linspace(0, 2 * np.pi, 12, endpoint=False) + 0.03
    ring = delta * np.stack([np.cos(ang), np.sin(ang)], axis=1)
    apexes = np.concatenate([cand] + [cand + r for r in ring])

    edge_inv = np.linalg.inv(s.edge_matrix)
    labels = _bulk_labels(edge_inv, apexes, pts)
    n_pts = [len(m.points) for m in inst.measures]
    splits = np.cumsum([0] + n_pts)
    totals = inst.totals

    mass = np.zeros((len(apexes), inst.n, 3))
    for i, m in enumerate(inst.measures):
        li = labels[:, splits[i] : splits[i + 1]]
        w = m.weights
        for c in range(3):
            mass[:, i, c] = np.where(li == c, w[None, :], 0.0).sum(axis=1)

    parts = canonical_partitions(2)
    signs = np.array([[1.0 if i in p else -1.0 for i in range(3)] for p in parts])
    resid = np.abs(np.einsum("aic,pc->aip", mass, signs)).max(axis=1) / 2.0  # (A, P)

    best = resid.min()
    # deterministic tie-break: smallest residual, then enumeration order of
    # partitions, then lexicographically smallest apex
    ties = np.argwhere(resid <= best + 1e-15)
    ties = ties[np.lexsort((apexes[ties[:, 0], 1], apexes[ties[:, 0], 0], ties[:, 1]))]
    ai, pi = ties[0].tolist()
    alloc = tuple(1 if i in parts[pi] else 0 for i in range(3))
    return apexes[ai], alloc, float(resid[ai, pi])


def _bulk_labels(edge_inv: np.ndarray, apexes: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Fan labels of every point for every apex, lowest tied index."""
    rel = pts[None, :, :] - apexes[:, None, :]  # (A, N, 2)
    t_rest = np.einsum("ab,ANb->ANa", edge_inv, rel)
    t = np.concatenate([np.zeros((*t_rest.shape[:2], 1)), t_rest], axis=2)
    shifted = t - t.min(axis=2, keepdims=True)
    tol = 1e-10 * (1.0 + np.abs(t).max(axis=2, keepdims=True))
    return np.argmax(shifted <= tol, axis=2)


# ---------------------------------------------------------------------------
# fan solver (q = p^k)


def solve_fan(inst: Instance, cfg: SolverConfig | None = None) -> Solution:
    """Find an apex and q-coloring giving q equal parts of every measure."""
    cfg = cfg or SolverConfig()
    verify_prime_power(inst.q)
    if inst.dim != inst.n * (inst.q - 1):
        raise UnsupportedVariant(
            f"fan division of {inst.n} measures into {inst.q} parts needs "
            f"dimension {inst.n * (inst.q - 1)}, carrier has {inst.dim}"
        )
    eps_abs = acceptance_threshold(inst, cfg)
    allocations = canonical_allocations(inst.dim, inst.q)
    target = max(eps_abs, discretization_floor(inst) + FLOOR_SLACK)
    x, alloc, res, evals = _rank_and_refine(inst, cfg, allocations, target, seed=cfg.seed)
    return _finish(inst, cfg, x, alloc, res, evals, eps_abs, {"method": "grid+refine"})


# ---------------------------------------------------------------------------
# diagnostics: limit ladder and the counterexample floor


def limit_consistency(measures, ratios, margin: float = 2.0, n_apex: int = 25,
                      seed: int = 0) -> dict:
    """Compare translated-fan cone masses with apex-cone masses of large carriers.

    For each carrier ratio R (carrier inradius = R * support radius) the
    apex cones ``cone(x, F_i)`` converge to the translated face-fan cones;
    the report records the worst absolute mass discrepancy per ratio over a
    fixed seeded sample of apexes in the ball of radius ``margin * r``.
    """
    measures = tuple(measures)
    d = measures[0].dim
    base = regular_simplex(d)
    r = max(support_radius(m) for m in measures)
    rng = np.random.default_rng(seed)
    raw = rng.normal(size=(n_apex, d))
    raw /= np.linalg.norm(raw, axis=1, keepdims=True)
    radii = rng.uniform(0, 1, size=(n_apex, 1)) ** (1.0 / d)
    apexes = margin * r * raw * radii

    a_mass = np.stack(
        [np.stack([fan_masses(m, face_fan(base, apex=x)) for m in measures])
         for x in apexes]
    )  # (A, n, d+1)
    totals = np.array([m.total_mass for m in measures])

    rows = []
    for ratio in ratios:
        if ratio * r <= margin * r:
            raise UnsupportedVariant("carrier ratio must exceed the apex radius margin")
        factor = ratio * r / base.inradius_origin
        carrier = base.scaled(factor)
        b_mass = np.stack(
            [np.stack([fan_masses(m, apex_fan(carrier, x)) for m in measures])
             for x in apexes]
        )
        diff = np.abs(a_mass - b_mass)
        rows.append({
            "ratio": float(ratio),
            "max_abs_discrepancy": float(diff.max()),
            "max_rel_discrepancy": float((diff / totals[None, :, None]).max()),
        })
    return {
        "ratios": [row["ratio"] for row in rows],
        "entries": rows,
        "apex_count": int(n_apex),
        "apex_radius": float(margin * r),
        "seed": int(seed),
        "non_increasing": all(
            rows[i + 1]["max_abs_discrepancy"]
            <= rows[i]["max_abs_discrepancy"] * (1 + 1e-9) + 1e-12
            for i in range(len(rows) - 1)
        ),
    }


def counterexample_report(radius: float = 0.05, grid: int = 200, segments: int = 48,
                          cfg: SolverConfig | None = None) -> dict:
    """Floor scan for three vertex discs of the regular triangle.

    Three discs of the given radius sit at the triangle vertices; one
    measure per disc.  No curtain can halve all three at once — the report
    scans a grid x grid apex window over every bipartition and records the
    smallest residual (as a fraction of one disc mass), plus the exact
    two-disc restriction, which *is* solvable.
    """
    cfg = cfg or SolverConfig()
    s = regular_simplex(2)
    discs = [disc_body(v, radius, segments=segments) for v in s.vertices]
    disc_mass = discs[0].total_mass
    inst = make_instance(discs[:2] + [discs[2]], q=2, simplex=s)

    lo = s.vertices.min(axis=0) - 2 * radius
    hi = s.vertices.max(axis=0) + 2 * radius
    xs = np.linspace(lo[0], hi[0], grid)
    ys = np.linspace(lo[1], hi[1], grid)
    apexes = np.stack(np.meshgrid(xs, ys, indexing="ij"), axis=-1).reshape(-1, 2)

    verts = np.concatenate([d_.vertices for d_ in discs])  # (3*segments, 2)
    edge_inv = np.linalg.inv(inst.simplex.edge_matrix)
    mass = np.zeros((len(apexes), 3, 3))
    chunk = 4096
    for start in range(0, len(apexes), chunk):
        block = apexes[start : start + chunk]
        labels = _bulk_labels(edge_inv, block, verts)
        disc_labels = labels.reshape(len(block), 3, segments)
        pure = disc_labels.max(axis=2) == disc_labels.min(axis=2)  # (B, 3)
        for di in range(3):
            rows = np.flatnonzero(pure[:, di])
            mass[start + rows, di, disc_labels[rows, di, 0]] = disc_mass
        for row in np.flatnonzero(~pure.all(axis=1)):
            fan = face_fan(inst.simplex, apex=block[row])
            for di in np.flatnonzero(~pure[row]):
                mass[start + row, di] = fan_masses(discs[di], fan)

    parts = canonical_partitions(2)
    signs = np.array([[1.0 if i in p else -1.0 for i in range(3)] for p in parts])
    resid = np.abs(np.einsum("adc,pc->adp", mass, signs)).max(axis=1) / 2.0
    flat = resid.min(axis=1)
    best_idx = int(flat.argmin())
    floor = float(flat.min())

    # The joint basin is ~2*radius wide, so the pair solve needs a lattice
    # finer than the disc diameter over the padded support box.
    pair_inst = make_instance(discs[:2], q=2, simplex=s)
    span = 1.6 * float(np.ptp(np.concatenate([d_.vertices for d_ in discs[:2]]), axis=0).max())
    res = max(cfg.grid_resolution, int(np.ceil(span / radius)) + 1)
    pair_cfg = SolverConfig(epsilon=cfg.epsilon, seed=cfg.seed,
                            grid_resolution=res,
                            budget=max(cfg.budget, 4 * res * res), mode=cfg.mode)
    pair_sol = solve_curtain(pair_inst, pair_cfg)

    return {
        "radius": float(radius),
        "segments": int(segments),
        "grid": int(grid),
        "disc_mass": float(disc_mass),
        "min_residual": floor,
        "floor_fraction": floor / disc_mass,
        "argmin_apex": apexes[best_idx].tolist(),
        "argmin_partition": sorted(parts[int(resid[best_idx].argmin())]),
        "two_disc_residual": float(pair_sol.residual),
        "two_disc_apex": pair_sol.x.tolist(),
        "two_disc_partition": sorted(pair_sol.part),
    }
