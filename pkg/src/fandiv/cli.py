"""Command-line driver.

Subcommands::

    solve-curtain       halve d measures in R^d by a polyhedral curtain
    solve-fan           split measures into q parts by a fan (q a prime power)
    spline              halve three planar measures by one circular spline
    verify              run the built-in identity and solver checks
    demo-counterexample three-disc floor scan plus the solvable pair

Every run writes ``report.json`` and ``report.csv`` into ``--out``;
``--svg`` additionally renders ``figure.svg`` from the report's payload.
Reports contain no timestamps, so identical inputs give identical bytes.

Exit codes: 0 solved/verified, 1 scene or usage error, 2 residual target
not reached within budget (the report is still written), 3 internal error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from importlib import metadata
from pathlib import Path

import numpy as np

from .checks import run_checks
from .errors import BudgetExceeded, FanDivError, SceneError
from .geometry import regular_simplex
from .measures import BodyUnion, PointCloud, disc_body
from .render import render_report
from .scene import Scene, load_scene
from .solver import (
    SolverConfig,
    counterexample_report,
    make_instance,
    solve_curtain,
    solve_fan,
)
from .splines import solve_circular_spline

_KIND_FOR_COMMAND = {
    "solve-curtain": "curtain",
    "solve-fan": "fan",
    "spline": "spline",
    "demo-counterexample": "counterexample",
}

try:
    _VERSION = metadata.version("fandiv")
except metadata.PackageNotFoundError:  # running from an uninstalled tree
    _VERSION = "0.0.0"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which would collide with the
    # budget code; usage problems are reported like scene problems instead.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


def _jsonify(value):
    if isinstance(value, dict):
        return {str(k): _jsonify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonify(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonify(value.tolist())
    if isinstance(value, (np.integer, int)) and not isinstance(value, bool):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


# ---------------------------------------------------------------------------
# render payloads (everything the figure needs, in JSON-safe form)


def _planar(points) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(points, float))
    if pts.shape[1] == 1:
        return np.column_stack([pts[:, 0], np.zeros(len(pts))])
    return pts[:, :2]


def _serialize_measure(m, dim: int) -> dict:
    if isinstance(m, PointCloud):
        return {"type": "cloud", "points": _planar(m.points).tolist(),
                "weights": m.weights.tolist()}
    polys = m.bodies if isinstance(m, BodyUnion) else (m,)
    if dim == 2:
        return {"type": "polygons",
                "polygons": [b.vertices.tolist() for b in polys]}
    # projections of spatial bodies: draw the hull vertices as markers
    pts = np.concatenate([_planar(b.vertices) for b in polys])
    return {"type": "cloud", "points": pts.tolist(),
            "weights": [1.0] * len(pts)}


def _wall_rays(directions, allocation) -> list:
    # planar face fans only: ray j separates the two cones adjacent to it,
    # and belongs to the curtain when those cones carry different colors
    if len(directions) != 3:
        return []
    return [
        list(directions[j]) for j in range(3)
        if allocation[(j + 1) % 3] != allocation[(j + 2) % 3]
    ]


def _solution_payload(kind: str, scene: Scene, inst, sol, spline=None) -> dict:
    payload = {
        "kind": kind,
        "dim": int(inst.dim),
        "title": scene.title or kind,
        "measures": [_serialize_measure(m, inst.dim) for m in inst.measures]
        if kind != "spline" else
        [_serialize_measure(m, 2) for m in scene.measures],
        "apex": None if kind == "spline" else _planar(sol.x)[0].tolist(),
        "allocation": list(sol.allocation),
        "directions": [] if kind == "spline" else
        [_planar(v)[0].tolist() for v in inst.simplex.vertices],
    }
    if kind != "spline" and inst.dim == 2:
        payload["wall"] = _wall_rays(payload["directions"], payload["allocation"])
    if spline is not None:
        payload["spline"] = spline.to_dict()
    return payload


def _counterexample_payload(rep: dict, title: str) -> dict:
    s = regular_simplex(2)
    discs = [disc_body(v, rep["radius"], segments=rep["segments"]) for v in s.vertices]
    alloc = [1 if i in rep["argmin_partition"] else 0 for i in range(3)]
    return {
        "kind": "counterexample",
        "dim": 2,
        "title": title or "three-disc floor scan",
        "measures": [_serialize_measure(d, 2) for d in discs],
        "apex": list(rep["argmin_apex"]),
        "allocation": alloc,
        "directions": s.vertices.tolist(),
        "wall": _wall_rays(s.vertices.tolist(), alloc),
    }


# ---------------------------------------------------------------------------
# report assembly


def _solution_block(sol) -> dict:
    return {
        "apex": sol.x.tolist(),
        "allocation": list(sol.allocation),
        "part": sorted(sol.part),
        "residual": float(sol.residual),
        "relative_residual": float(sol.residual / sol.matrix.totals.max()),
        "status": sol.status,
        "warnings": list(sol.warnings),
        "diagnostics": _jsonify(sol.diagnostics),
    }


def _masses_block(sol) -> dict:
    target = sol.matrix.totals[:, None] / sol.matrix.q
    return {
        "totals": sol.matrix.totals.tolist(),
        "entries": sol.matrix.entries.tolist(),
        "deviations": np.abs(sol.matrix.entries - target).max(axis=1).tolist(),
    }


def _mass_rows(sol) -> list[list]:
    q = sol.matrix.q
    header = ["measure", "total", *(f"part_{c}" for c in range(q)), "deviation"]
    rows = [header]
    for i, (total, parts) in enumerate(zip(sol.matrix.totals, sol.matrix.entries)):
        dev = float(np.abs(parts - total / q).max())
        rows.append([i, repr(float(total)),
                     *(repr(float(p)) for p in parts), repr(dev)])
    return rows


def _write_report(out_dir: Path, report: dict, csv_rows: list[list],
                  want_svg: bool) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.json").write_text(
        json.dumps(_jsonify(report), indent=2, sort_keys=True) + "\n")
    with (out_dir / "report.csv").open("w", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(csv_rows)
    if want_svg:
        render_report(report, out_dir / "figure.svg")


# ---------------------------------------------------------------------------
# subcommand bodies


def _config(args) -> SolverConfig:
    return SolverConfig(epsilon=args.epsilon, seed=args.seed,
                        budget=args.budget, mode=args.mode)


def _load_for(command: str, args) -> Scene:
    scene = load_scene(args.scene)
    want = _KIND_FOR_COMMAND[command]
    if scene.kind != want:
        raise SceneError(
            f"{command} needs a {want!r} scene, got {scene.kind!r}")
    return scene


def _run_solve(command: str, args) -> int:
    scene = _load_for(command, args)
    cfg = _config(args)
    report = {
        "format": "fandiv/report/1",
        "version": _VERSION,
        "command": command,
        "scene": {"kind": scene.kind, "title": scene.title,
                  "n_measures": len(scene.measures), "q": scene.q,
                  "margin": scene.margin},
        "config": {"seed": cfg.seed, "epsilon": cfg.epsilon,
                   "budget": cfg.budget, "mode": cfg.mode},
    }
    started = time.perf_counter()
    try:
        if command == "spline":
            div = solve_circular_spline(
                scene.measures, cfg, body_resolution=scene.body_resolution)
            inst, sol = div.instance, div.solution
            report["spline"] = div.spline.to_dict()
            report["render"] = _solution_payload(
                "spline", scene, inst, sol, spline=div.spline)
        else:
            inst = make_instance(scene.measures, q=scene.q,
                                 simplex=scene.simplex, margin=scene.margin)
            sol = (solve_curtain if command == "solve-curtain" else solve_fan)(inst, cfg)
            report["render"] = _solution_payload(scene.kind, scene, inst, sol)
    except BudgetExceeded as exc:
        if exc.best is None:
            raise
        sol = exc.best
        report["status"] = "budget"
        report["error"] = str(exc)
        report["solution"] = _solution_block(sol)
        report["masses"] = _masses_block(sol)
        _write_report(Path(args.out), report, _mass_rows(sol), want_svg=False)
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 2
    elapsed = time.perf_counter() - started
    report["status"] = sol.status
    report["solution"] = _solution_block(sol)
    report["masses"] = _masses_block(sol)
    _write_report(Path(args.out), report, _mass_rows(sol), args.svg)
    for w in sol.warnings:
        print(f"warning: {w}", file=sys.stderr)
    # timing goes to the console only, so reports stay byte-reproducible
    print(f"{command}: status {sol.status}, residual {sol.residual:.6e} "
          f"({elapsed:.2f}s)")
    return 0


def _run_verify(args) -> int:
    scene_summary = None
    if args.scene is not None:
        scene = load_scene(args.scene)
        scene_summary = {"kind": scene.kind, "title": scene.title,
                         "n_measures": len(scene.measures), "q": scene.q}
        print(f"scene ok: {args.scene} ({scene.kind}, "
              f"{len(scene.measures)} measures)")
    results = run_checks(seed=args.seed)
    hard = [c for c in results if not c.get("info")]
    ok = all(c["ok"] for c in hard)
    report = {
        "format": "fandiv/report/1",
        "version": _VERSION,
        "command": "verify",
        "status": "pass" if ok else "fail",
        "config": {"seed": args.seed},
        "scene": scene_summary,
        "checks": results,
    }
    rows = [["name", "ok", "detail"]]
    rows += [[c["name"], int(c["ok"]), c["detail"]] for c in results]
    _write_report(Path(args.out), report, rows, want_svg=False)
    for c in results:
        tag = "info" if c.get("info") else ("PASS" if c["ok"] else "FAIL")
        print(f"{tag:4s}  {c['name']}: {c['detail']}")
    print(f"verify: {sum(c['ok'] for c in hard)}/{len(hard)} checks passed")
    return 0 if ok else 3


def _run_counterexample(args) -> int:
    if args.scene is not None:
        scene = _load_for("demo-counterexample", args)
        params, title = scene.counterexample, scene.title
    else:
        params, title = {"radius": 0.05, "grid": 200, "segments": 48}, ""
    rep = counterexample_report(cfg=_config(args), **params)
    report = {
        "format": "fandiv/report/1",
        "version": _VERSION,
        "command": "demo-counterexample",
        "status": "ok",
        "config": {"seed": args.seed, "epsilon": args.epsilon,
                   "budget": args.budget, "mode": args.mode},
        "counterexample": rep,
        "render": _counterexample_payload(rep, title),
    }
    rows = [["key", "value"]]
    rows += [[k, repr(v) if isinstance(v, float) else json.dumps(v)]
             for k, v in rep.items()]
    _write_report(Path(args.out), report, rows, args.svg)
    print(
        "demo-counterexample: no curtain halves all three discs; "
        f"best residual is {rep['floor_fraction']:.3f} of one disc mass, "
        f"while two discs alone solve to {rep['two_disc_residual']:.3e}"
    )
    return 0


# ---------------------------------------------------------------------------
# argument wiring


def _build_parser() -> _Parser:
    parser = _Parser(prog="fandiv", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, scene_required):
        if scene_required is not None:
            p.add_argument("--scene", required=scene_required,
                           help="scene JSON file")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--seed", type=int, default=0, help="RNG seed")
        p.add_argument("--epsilon", type=float, default=None,
                       help="relative residual target (default 1e-6)")
        p.add_argument("--mode", default="A", choices=("A", "B"),
                       help="configuration-space flavor recorded in reports")
        p.add_argument("--budget", type=int, default=6000,
                       help="max cone-mass evaluations")
        p.add_argument("--svg", action="store_true",
                       help="render figure.svg next to the report")

    for cmd in ("solve-curtain", "solve-fan", "spline"):
        common(sub.add_parser(cmd), scene_required=True)
    common(sub.add_parser("demo-counterexample"), scene_required=False)

    v = sub.add_parser("verify")
    v.add_argument("--scene", default=None,
                   help="scene JSON to validate before the checks")
    v.add_argument("--out", default="out", help="output directory")
    v.add_argument("--seed", type=int, default=0, help="RNG seed")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    try:
        if args.command == "verify":
            return _run_verify(args)
        if args.command == "demo-counterexample":
            return _run_counterexample(args)
        return _run_solve(args.command, args)
    except SceneError as exc:
        print(f"scene error: {exc}", file=sys.stderr)
        return 1
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 2
    except FanDivError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # noqa: BLE001  - last-resort guard for exit code 3
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
