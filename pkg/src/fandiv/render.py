"""Figure rendering for reports.

Figures are drawn exclusively from the ``render`` payload embedded in a
report, never from live solver objects — re-rendering a stored report must
reproduce the file byte for byte.  The SVG hash salt and the metadata date
are pinned for the same reason.
"""

from __future__ import annotations

import math

import matplotlib
import numpy as np

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

plt.rcParams["svg.hashsalt"] = "fandiv"

_COLORS = plt.get_cmap("tab10").colors
_MARGIN = 0.10


def _extent(points):
    pts = np.asarray(points, float)
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    pad = _MARGIN * max((hi - lo).max(), 1e-6)
    return lo - pad, hi + pad


def _collect_viewpoints(payload):
    pts = []
    for m in payload.get("measures", []):
        if m["type"] == "cloud":
            pts.append(np.asarray(m["points"], float)[:, :2])
        else:
            pts.extend(np.asarray(p, float)[:, :2] for p in m["polygons"])
    if payload.get("apex") is not None:
        pts.append(np.asarray(payload["apex"], float)[None, :2])
    for piece in payload.get("spline", {}).get("pieces", []):
        if piece["type"] == "arc":
            c, r = np.asarray(piece["center"]), piece["radius"]
            pts.append(c[None, :] + r * np.array([[1, 0], [-1, 0], [0, 1], [0, -1]]))
    return np.concatenate(pts) if pts else np.zeros((1, 2))


def _as_planar(arr):
    arr = np.asarray(arr, float)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.shape[1] == 1:
        return np.column_stack([arr[:, 0], np.zeros(len(arr))])
    return arr[:, :2]


def _draw_measures(ax, payload):
    for i, m in enumerate(payload.get("measures", [])):
        color = _COLORS[i % len(_COLORS)]
        if m["type"] == "cloud":
            pts = _as_planar(m["points"])
            w = np.asarray(m["weights"], float)
            ax.scatter(pts[:, 0], pts[:, 1], s=18 + 42 * w / w.max(),
                       color=color, zorder=3, label=f"measure {i}")
        else:
            for k, poly in enumerate(m["polygons"]):
                verts = _as_planar(poly)
                ax.fill(verts[:, 0], verts[:, 1], color=color, alpha=0.35,
                        lw=1.0, ec=color, zorder=2,
                        label=f"measure {i}" if k == 0 else None)


def _draw_rays(ax, payload, lo, hi):
    apex = payload.get("apex")
    if apex is None:
        return
    apex = _as_planar(apex)[0]
    span = float(np.linalg.norm(hi - lo)) * 2.0
    alloc = payload.get("allocation")
    for j, direction in enumerate(payload.get("directions", [])):
        d = _as_planar(direction)[0]
        norm = np.linalg.norm(d)
        if norm == 0:
            continue
        end = apex + d / norm * span
        kwargs = {"color": "0.25", "lw": 1.0, "ls": "--", "zorder": 4}
        if alloc is not None and len(set(alloc)) > 1:
            kwargs["color"] = _COLORS[(7 + alloc[j]) % len(_COLORS)]
        ax.plot([apex[0], end[0]], [apex[1], end[1]], **kwargs)
    for k, direction in enumerate(payload.get("wall", [])):
        d = _as_planar(direction)[0]
        norm = np.linalg.norm(d)
        if norm == 0:
            continue
        end = apex + d / norm * span
        ax.plot([apex[0], end[0]], [apex[1], end[1]], color="crimson",
                lw=2.0, zorder=5, label="curtain" if k == 0 else None)
    ax.plot([apex[0]], [apex[1]], "k*", ms=11, zorder=5, label="apex")


def _draw_spline(ax, payload, lo, hi):
    spline = payload.get("spline")
    if not spline:
        return
    span = float(np.linalg.norm(hi - lo))
    for piece in spline["pieces"]:
        if piece["type"] == "arc":
            phi = np.linspace(piece["phi0"], piece["phi1"], 128)
            c, r = np.asarray(piece["center"]), piece["radius"]
            ax.plot(c[0] + r * np.cos(phi), c[1] + r * np.sin(phi),
                    color="crimson", lw=2.0, zorder=6)
        else:
            origin = np.asarray(piece["origin"])
            d = np.asarray(piece["direction"])
            lam0, lam1 = piece["lam0"], piece["lam1"]
            # unbounded ends arrive as null (or inf pre-serialization)
            if lam0 is None or not math.isfinite(lam0):
                lam0 = -2.0 * span
            if lam1 is None or not math.isfinite(lam1):
                lam1 = 2.0 * span
            p0, p1 = origin + lam0 * d, origin + lam1 * d
            ax.plot([p0[0], p1[0]], [p0[1], p1[1]], color="crimson", lw=2.0, zorder=6)


def render_report(report: dict, svg_path) -> None:
    """Write the report's figure; a report without a payload cannot be drawn."""
    payload = report.get("render")
    if not payload:
        raise ValueError("report carries no render payload")
    view = _collect_viewpoints(payload)
    lo, hi = _extent(view)

    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    _draw_measures(ax, payload)
    _draw_rays(ax, payload, lo, hi)
    _draw_spline(ax, payload, lo, hi)
    ax.set_xlim(lo[0], hi[0])
    ax.set_ylim(lo[1], hi[1])
    ax.set_aspect("equal")
    ax.grid(True, lw=0.3, alpha=0.5)
    title = payload.get("title") or payload.get("kind", "")
    if payload.get("dim", 2) != 2:
        title = f"{title} (xy projection)"
    ax.set_title(title)
    if payload.get("measures"):
        ax.legend(loc="upper right", fontsize=8)
    fig.savefig(svg_path, format="svg", metadata={"Date": None})
    plt.close(fig)
