"""Configuration spaces of colored division points and their sphere charts.

A configuration point pairs a carrier point ``x`` with a coloring of the
d+1 cone indices.  Two kinds share one interface:

* kind "A": ``x`` lives in the zonotope; the weight of index ``i`` is the
  normalized illumination ``alpha_i(x) / sum alpha``;
* kind "B": ``x`` lives in the simplex; the weight of index ``i`` is the
  barycentric coordinate of ``x``.

Indices whose weight vanishes carry the sentinel color -1 (their color is
unobservable).  For two colors the weighted coloring is encoded on the
L1 sphere in R^(d+1): ``z_i = weight_i * sign(color_i)`` with color 1
positive, color 0 negative; ``sum |z_i| = 1``.  Negating z flips every
color and keeps x — the antipodal involution.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize

from .errors import (
    InvalidBarycentric,
    InversionBudgetExceeded,
    PointOutside,
    UnsupportedVariant,
)
from .geometry import DeltaZonotope, Simplex, zonotope_map
from .measures import alpha_vector

SENTINEL = -1
ACTIVITY_RTOL = 1e-10  # alpha_i below this fraction of the total is inactive
BARY_ACTIVITY_TOL = 1e-12


@dataclass(frozen=True)
class ConfigPoint:
    kind: str  # "A" | "B"
    x: np.ndarray
    colors: tuple[int, ...]
    q: int = 2


@dataclass(frozen=True)
class JoinPoint:
    """Formal convex combination of colors: weight i sits on color_i."""

    weights: np.ndarray
    colors: tuple[int, ...]
    q: int


def weight_vector(point: ConfigPoint, carrier) -> np.ndarray:
    """Normalized index weights of a configuration point (sum to one)."""
    if point.kind == "A":
        if not isinstance(carrier, DeltaZonotope):
            raise UnsupportedVariant("A-kind points live in a zonotope carrier")
        alpha = alpha_vector(carrier, point.x)
        return alpha / alpha.sum()
    if not isinstance(carrier, Simplex):
        raise UnsupportedVariant("B-kind points live in a simplex carrier")
    b = carrier.barycentric(point.x)
    if b.min() < -1e-9:
        raise PointOutside("B-kind point must lie in the simplex")
    return np.clip(b, 0.0, None) / np.clip(b, 0.0, None).sum()


def active_mask(point: ConfigPoint, carrier) -> np.ndarray:
    w = weight_vector(point, carrier)
    tol = ACTIVITY_RTOL if point.kind == "A" else BARY_ACTIVITY_TOL
    return w > tol


def canonicalize(point: ConfigPoint, carrier) -> ConfigPoint:
    """Replace colors of inactive indices by the sentinel."""
    mask = active_mask(point, carrier)
    colors = tuple(c if m else SENTINEL for c, m in zip(point.colors, mask))
    return replace(point, colors=colors)


def config_equal(p: ConfigPoint, q: ConfigPoint, carrier, tol: float = 1e-9) -> bool:
    """Equality after canonicalization (sentinels hide inactive colors)."""
    if p.kind != q.kind or p.q != q.q:
        return False
    scale = 1.0 + max(np.abs(p.x).max(), np.abs(q.x).max())
    if np.linalg.norm(p.x - q.x) > tol * scale:
        return False
    return canonicalize(p, carrier).colors == canonicalize(q, carrier).colors


def psi(zonotope: DeltaZonotope, x) -> np.ndarray:
    """Illumination average: psi(x) = sum_i (alpha_i / alpha) a_i (in the simplex)."""
    alpha = alpha_vector(zonotope, x)
    return (alpha / alpha.sum()) @ zonotope.simplex.vertices


def big_psi(point: ConfigPoint, carrier) -> JoinPoint:
    """Join-valued coloring map: weights on colors, inactive indices hidden."""
    canon = canonicalize(point, carrier)
    return JoinPoint(weight_vector(point, carrier), canon.colors, point.q)


def phi_B(point: ConfigPoint, simplex: Simplex) -> JoinPoint:
    """Barycentric join map for B-kind points."""
    if point.kind != "B":
        raise UnsupportedVariant("phi_B takes B-kind points")
    return big_psi(point, simplex)


def sphere_chart(point: ConfigPoint, carrier) -> np.ndarray:
    """Two-color join chart on the L1 sphere: z_i = w_i * sign(color_i)."""
    if point.q != 2:
        raise UnsupportedVariant("the sphere chart is the two-color join")
    jp = big_psi(point, carrier)
    signs = np.zeros(len(jp.weights))
    for i, c in enumerate(jp.colors):
        if c == 1:
            signs[i] = 1.0
        elif c == 0:
            signs[i] = -1.0
        elif jp.weights[i] > (ACTIVITY_RTOL if point.kind == "A" else BARY_ACTIVITY_TOL):
            raise InvalidBarycentric("active index carries a sentinel color")
    z = jp.weights * signs
    return z


def join_antipode(jp: JoinPoint) -> JoinPoint:
    if jp.q != 2:
        raise UnsupportedVariant("antipode needs two colors")
    colors = tuple(1 - c if c != SENTINEL else SENTINEL for c in jp.colors)
    return JoinPoint(jp.weights, colors, jp.q)


def antipode(point: ConfigPoint) -> ConfigPoint:
    if point.q != 2:
        raise UnsupportedVariant("antipode needs two colors")
    colors = tuple(1 - c if c != SENTINEL else SENTINEL for c in point.colors)
    return replace(point, colors=colors)


def permute_colors(point: ConfigPoint, perm) -> ConfigPoint:
    """Relabel colors by a permutation of {0..q-1}; sentinels are fixed."""
    perm = list(perm)
    colors = tuple(perm[c] if c != SENTINEL else SENTINEL for c in point.colors)
    return replace(point, colors=colors)


def decode_sphere(z, kind: str, carrier, tol: float | None = None) -> ConfigPoint:
    """Invert the sphere chart: |z| are the weights, signs are the colors.

    B-kind: x is the barycentric combination directly.  A-kind: x solves
    psi(x) = combination (so the chart of the result reproduces z).
    Exact zeros decode to the sentinel color.
    """
    z = np.asarray(z, float)
    if abs(np.abs(z).sum() - 1.0) > 1e-12:
        raise InvalidBarycentric(f"|z| sums to {np.abs(z).sum():.17g}, expected 1")
    beta = np.abs(z)
    colors = tuple(
        1 if v > 0 else (0 if v < 0 else SENTINEL) for v in z
    )
    if kind == "B":
        if not isinstance(carrier, Simplex):
            raise UnsupportedVariant("B-kind decode needs a simplex carrier")
        return ConfigPoint("B", beta @ carrier.vertices, colors)
    if not isinstance(carrier, DeltaZonotope):
        raise UnsupportedVariant("A-kind decode needs a zonotope carrier")
    target = beta @ carrier.simplex.vertices
    x = invert_psi(carrier, target, tol=tol)
    return ConfigPoint("A", x, colors)


# ---------------------------------------------------------------------------
# psi inversion


def _psi_residual(zonotope: DeltaZonotope, x: np.ndarray, target: np.ndarray):
    val = psi(zonotope, x)
    return val - target


def invert_psi(
    zonotope: DeltaZonotope,
    target,
    tol: float | None = None,
    max_steps: int = 120,
    budget: int = 4000,
) -> np.ndarray:
    """Solve psi(x) = target for x in the zonotope.

    Starts from the cube-tiling warm start ``zonotope_map(barycentric)``,
    runs a damped residual iteration with backtracking, and falls back to
    Nelder-Mead restarts (carrier center plus the cell centroids) when the
    iteration stalls.  Raises :class:`InversionBudgetExceeded` carrying the
    best iterate when the budget runs out above tolerance.
    """
    s = zonotope.simplex
    target = np.asarray(target, float)
    if tol is None:
        tol = 1e-8 * s.diameter
    b = s.barycentric(target)
    if b.min() < -1e-9:
        raise PointOutside("target must lie in the simplex")
    evals = 0

    def residual(x):
        nonlocal evals
        evals += 1
        return _psi_residual(zonotope, x, target)

    warm = zonotope_map(s, np.clip(b, 0.0, None) / np.clip(b, 0.0, None).sum())
    best_x, best_r = warm, np.linalg.norm(residual(warm))
    x, rvec = warm, None
    r = best_r
    eta = 1.0
    for _ in range(max_steps):
        if r <= tol or evals >= budget:
            break
        step_src = psi(zonotope, x) - target
        evals += 1
        improved = False
        for _ in range(20):
            cand = x - eta * step_src
            if zonotope.contains(cand):
                rc = np.linalg.norm(residual(cand))
                if rc < r * (1.0 - 1e-4 * eta):
                    x, r = cand, rc
                    improved = True
                    eta = min(1.0, eta * 1.5)
                    break
            eta *= 0.5
            if evals >= budget:
                break
        if r < best_r:
            best_x, best_r = x, r
        if not improved:
            break
    if best_r <= tol:
        return best_x

    # stalled: derivative-free restarts from the canonical interior points
    starts = [best_x, np.zeros(s.dim)] + [c.centroid for c in zonotope.cells]

    def objective(x):
        nonlocal best_x, best_r, evals
        evals += 1
        inside = zonotope.contains(x)
        if not inside:
            # push back toward the carrier; psi is undefined outside
            worst = max(h.signed_distance(x[None, :])[0] for h in zonotope.halfspaces)
            return best_r + worst + 1.0
        rr = float(np.linalg.norm(_psi_residual(zonotope, x, target)))
        if rr < best_r:
            best_x, best_r = x.copy(), rr
        return rr

    for x0 in starts:
        if best_r <= tol or evals >= budget:
            break
        minimize(
            objective,
            x0,
            method="Nelder-Mead",
            options={"maxfev": max(50, (budget - evals) // len(starts)),
                     "xatol": tol * 1e-2, "fatol": tol * 1e-2},
        )
    if best_r <= tol:
        return best_x
    raise InversionBudgetExceeded(
        f"psi inversion stalled at residual {best_r:.3e} (tol {tol:.3e})",
        best=(best_x, best_r),
    )


# ---------------------------------------------------------------------------
# allocations


def canonical_allocations(d: int, q: int) -> list[tuple[int, ...]]:
    """Surjective colorings of {0..d} by q colors, one per relabeling orbit.

    The canonical representative numbers colors by first occurrence, so the
    list is exactly the lexicographically minimal member of each orbit, in
    lexicographic order.  Colorings that skip a color are excluded: an empty
    part can never carry its fair share.
    """
    out = []
    for colors in itertools.product(range(q), repeat=d + 1):
        seen: dict[int, int] = {}
        canon = []
        for c in colors:
            if c not in seen:
                seen[c] = len(seen)
            canon.append(seen[c])
        if tuple(canon) == colors and len(seen) == q:
            out.append(colors)
    return out
