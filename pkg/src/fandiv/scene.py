"""Scene files: JSON descriptions of division problems.

A scene pins the problem only — measures, the division kind, the carrier
simplex, and solver hints.  Everything run-specific (seed, epsilon,
budget) comes from the command line so the same scene file stays
byte-stable across runs.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import EmptyMeasure, FanDivError, NotPrimePower, OffCenter, SceneError
from .geometry import new_simplex, regular_simplex
from .measures import body_union, cloud_from_csv, disc_body, point_cloud, polytope_body
from .solver import verify_prime_power

VERSION = "fandiv/1"
KINDS = ("curtain", "fan", "spline", "counterexample")

_TOP_KEYS = {"version", "kind", "measures", "q", "margin", "simplex",
             "body_resolution", "counterexample", "title"}
_MEASURE_KEYS = {
    "cloud": {"type", "points", "weights"},
    "body": {"type", "vertices", "density"},
    "disc": {"type", "center", "radius", "segments", "density"},
    "union": {"type", "parts"},
    "cloud_csv": {"type", "path"},
}
_COUNTER_KEYS = {"radius", "grid", "segments"}


def _fail(msg: str) -> None:
    raise SceneError(msg)


def _check_keys(obj: dict, allowed: set, where: str) -> None:
    extra = set(obj) - allowed
    if extra:
        _fail(f"unknown keys in {where}: {sorted(extra)}")


def _as_matrix(value, where: str) -> np.ndarray:
    try:
        arr = np.asarray(value, float)
    except (TypeError, ValueError):
        _fail(f"{where} must be a rectangular array of numbers")
    if arr.ndim != 2 or arr.shape[0] == 0:
        _fail(f"{where} must be a non-empty list of points")
    if not np.isfinite(arr).all():
        _fail(f"{where} contains non-finite values")
    return arr


def _density(spec: dict, where: str) -> float:
    density = float(spec.get("density", 1.0))
    if density <= 0:
        _fail(f"{where}.density must be positive")
    return density


def _build_measure(spec: dict, base: Path, where: str):
    if not isinstance(spec, dict) or "type" not in spec:
        _fail(f"{where} must be an object with a 'type'")
    kind = spec["type"]
    if kind not in _MEASURE_KEYS:
        _fail(f"{where}: unknown measure type {kind!r}")
    _check_keys(spec, _MEASURE_KEYS[kind], where)
    try:
        if kind == "cloud":
            pts = _as_matrix(spec.get("points"), f"{where}.points")
            weights = np.asarray(spec.get("weights", np.ones(len(pts))), float)
            return point_cloud(pts, weights)
        if kind == "body":
            return polytope_body(
                _as_matrix(spec.get("vertices"), f"{where}.vertices"),
                density=_density(spec, where))
        if kind == "disc":
            center = np.asarray(spec.get("center", [0.0, 0.0]), float)
            radius = float(spec.get("radius", 1.0))
            segments = int(spec.get("segments", 48))
            if radius <= 0 or segments < 3:
                _fail(f"{where}: disc needs positive radius and >= 3 segments")
            return disc_body(center, radius, segments=segments,
                             density=_density(spec, where))
        if kind == "union":
            parts = spec.get("parts")
            if not isinstance(parts, list) or not parts:
                _fail(f"{where}.parts must be a non-empty list")
            if any(not isinstance(p, dict) or p.get("type") not in ("body", "disc")
                   for p in parts):
                _fail(f"{where}.parts entries must be body or disc measures")
            return body_union([
                _build_measure(p, base, f"{where}.parts[{i}]")
                for i, p in enumerate(parts)
            ])
        path = base / str(spec.get("path", ""))
        if not path.is_file():
            _fail(f"{where}: csv file not found: {path}")
        return cloud_from_csv(path)
    except SceneError:
        raise
    except (EmptyMeasure, ValueError, TypeError) as exc:
        _fail(f"{where}: {exc}")


def _build_simplex(spec, dim: int):
    """Carrier from ``"regular <d>"`` or an explicit vertex matrix."""
    if isinstance(spec, str):
        parts = spec.split()
        if len(parts) != 2 or parts[0] != "regular" or not parts[1].isdigit():
            _fail(f"scene.simplex string must look like 'regular {dim}'")
        d = int(parts[1])
    else:
        verts = _as_matrix(spec, "scene.simplex")
        d = verts.shape[1]
    if d != dim:
        _fail(f"scene.simplex has dimension {d}, measures have {dim}")
    if isinstance(spec, str):
        return regular_simplex(d)
    try:
        return new_simplex(verts)
    except OffCenter:
        _fail("scene.simplex vertices must have zero barycenter")
    except FanDivError as exc:
        _fail(f"scene.simplex: {exc}")


class Scene:
    """Validated scene: kind, carrier, measures, and solver hints."""

    def __init__(self, kind, measures, q, margin, simplex, body_resolution,
                 counterexample, raw, title=""):
        self.kind = kind
        self.measures = measures
        self.q = q
        self.margin = margin
        self.simplex = simplex  # None means the regular carrier
        self.body_resolution = body_resolution
        self.counterexample = counterexample
        self.raw = raw
        self.title = title


def load_scene(path) -> Scene:
    path = Path(path)
    if not path.is_file():
        _fail(f"scene file not found: {path}")
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        _fail(f"scene is not valid JSON: {exc}")
    return parse_scene(raw, base=path.parent)


def parse_scene(raw: dict, base=".") -> Scene:
    base = Path(base)
    if not isinstance(raw, dict):
        _fail("scene must be a JSON object")
    _check_keys(raw, _TOP_KEYS, "scene")
    if raw.get("version") != VERSION:
        _fail(f"scene version must be {VERSION!r}, got {raw.get('version')!r}")
    kind = raw.get("kind")
    if kind not in KINDS:
        _fail(f"scene kind must be one of {KINDS}, got {kind!r}")

    counter = dict(raw.get("counterexample", {}))
    if kind == "counterexample":
        _check_keys(counter, _COUNTER_KEYS, "scene.counterexample")
        counter = {
            "radius": float(counter.get("radius", 0.05)),
            "grid": int(counter.get("grid", 200)),
            "segments": int(counter.get("segments", 48)),
        }
        if counter["radius"] <= 0 or counter["grid"] < 2 or counter["segments"] < 3:
            _fail("scene.counterexample parameters out of range")
        measures = []
    else:
        if counter:
            _fail("scene.counterexample only applies to counterexample scenes")
        specs = raw.get("measures")
        if not isinstance(specs, list) or not specs:
            _fail("scene.measures must be a non-empty list")
        measures = [
            _build_measure(s, base, f"scene.measures[{i}]") for i, s in enumerate(specs)
        ]

    q = raw.get("q", 2)
    if not isinstance(q, int) or q < 2:
        _fail("scene.q must be an integer >= 2")
    if kind != "fan" and q != 2:
        _fail("only fan scenes may set q")
    if kind == "fan":
        try:
            verify_prime_power(q)
        except NotPrimePower as exc:
            _fail(f"scene.q: {exc}")

    simplex = None
    if measures:
        dims = {m.dim for m in measures}
        if len(dims) != 1:
            _fail(f"scene.measures span several dimensions: {sorted(dims)}")
        dim = dims.pop()
        # dimension bookkeeping must close before any solver runs
        if kind == "spline" and (dim != 2 or len(measures) != 3):
            _fail("spline scenes take exactly three planar measures")
        if kind in ("curtain", "fan") and dim != len(measures) * (q - 1):
            _fail(
                f"{kind} scenes need n*(q-1) = dimension; got "
                f"{len(measures)}*({q}-1) != {dim}")
        if "simplex" in raw:
            if kind == "spline":
                _fail("spline scenes use the lifted carrier; simplex is not settable")
            simplex = _build_simplex(raw["simplex"], dim)
    elif "simplex" in raw:
        _fail("scene.simplex only applies to scenes with measures")

    margin = float(raw.get("margin", 2.0))
    if margin <= 1.0:
        _fail("scene.margin must exceed 1")
    body_resolution = raw.get("body_resolution", 12)
    if not isinstance(body_resolution, int) or body_resolution < 1:
        _fail("scene.body_resolution must be a positive integer")
    if kind != "spline" and "body_resolution" in raw:
        _fail("scene.body_resolution only applies to spline scenes")

    title = str(raw.get("title", ""))
    return Scene(kind, measures, q, margin, simplex, body_resolution, counter,
                 raw, title)
