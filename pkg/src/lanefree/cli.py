"""Command-line front end: ``lanefree run | sweep | validate-gains``.

Exit codes: 0 success, 2 invalid configuration or usage, 3 spawn failure,
4 gain validation failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Sequence

from . import config as cfgmod
from .feedback import validate_gains
from .logio import atomic_write, to_csv, to_json
from .plotting import render
from .sim import ScenarioConfig, SpawnError, run

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SPAWN = 3
EXIT_UNSTABLE = 4

SWEEP_COLUMNS = (
    "seed",
    "status",
    "collision_steps",
    "collision_free",
    "min_clearance",
    "v_min",
    "v_max",
    "a_min",
    "a_max",
    "fallback_steps",
)


def _load_config(args) -> ScenarioConfig:
    cfg = cfgmod.load(args.config) if args.config else ScenarioConfig()
    overrides = list(args.set or [])
    if getattr(args, "seed", None) is not None:
        overrides.append(f"scenario.seed={args.seed}")
    return cfgmod.apply_overrides(cfg, overrides) if overrides else cfg


def gain_grid(cfg: ScenarioConfig, points: int = 20):
    v_N = cfg.planner.v_N
    return [validate_gains(cfg.gains, v_N * i / points, cfg.vehicle) for i in range(1, points + 1)]


def _unstable_speeds(cfg: ScenarioConfig) -> List[float]:
    return [r.v_star for r in gain_grid(cfg) if not r.stable]


def cmd_run(args) -> int:
    cfg = _load_config(args)
    bad = _unstable_speeds(cfg)
    if bad and not args.allow_unstable:
        print(
            f"error: gains fail the local stability check at v*={bad[0]:.4g} m/s "
            "(use validate-gains for details, --allow-unstable to override)",
            file=sys.stderr,
        )
        return EXIT_CONFIG
    out = args.out
    os.makedirs(out, exist_ok=True)
    manifest = {"config": args.config, "out_dir": os.path.abspath(out), "artifacts": [], "status": "ok"}
    try:
        log = run(cfg)
    except SpawnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        manifest.update(status="spawn_failure", exit_code=EXIT_SPAWN)
        atomic_write(os.path.join(out, "manifest.json"), json.dumps(manifest, indent=2) + "\n")
        return EXIT_SPAWN

    csv_path = os.path.join(out, "log.csv")
    json_path = os.path.join(out, "log.json")
    atomic_write(csv_path, to_csv(log))
    atomic_write(json_path, to_json(log))
    manifest["artifacts"] += [csv_path, json_path]
    if args.plots:
        records = [r.__dict__ for r in log.records]
        paths = render(records, os.path.join(out, "plots"), road=(0.0, cfg.road_width))
        manifest["artifacts"] += list(paths.values())
    missing = [p for p in manifest["artifacts"] if not os.path.exists(p)]
    code = EXIT_OK if not missing else 1
    manifest.update(exit_code=code, summary=log.summary)
    atomic_write(os.path.join(out, "manifest.json"), json.dumps(manifest, indent=2, allow_nan=False) + "\n")
    s = log.summary
    print(
        f"seed={cfg.seed} steps={s['steps']} collisions={s['collision_steps']} "
        f"fallback_steps={s['fallback_steps']} -> {out}"
    )
    return code


def parse_seeds(spec: str) -> List[int]:
    """``"1..100"``, ``"1-100"`` or ``"1,5,9"`` (ranges inclusive)."""
    seeds: List[int] = []
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        for sep in ("..", "-"):
            if sep in part.lstrip("-"):
                lo, hi = part.split(sep, 1) if sep == ".." else part.rsplit("-", 1)
                seeds.extend(range(int(lo), int(hi) + 1))
                break
        else:
            seeds.append(int(part))
    return seeds


def sweep_row(cfg: ScenarioConfig, seed: int) -> Dict[str, object]:
    """Run one seed; spawn failures become a row instead of an exception."""
    import dataclasses

    try:
        log = run(dataclasses.replace(cfg, seed=seed))
    except SpawnError:
        return {"seed": seed, "status": "spawn_failure"}
    s = log.summary
    return {
        "seed": seed,
        "status": "ok",
        "collision_steps": s["collision_steps"],
        "collision_free": int(s["collision_free"]),
        "min_clearance": s["min_clearance"],
        "v_min": s["v_min"],
        "v_max": s["v_max"],
        "a_min": s["a_min"],
        "a_max": s["a_max"],
        "fallback_steps": s["fallback_steps"],
    }


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else "inf"
    return str(v)


def sweep_report(rows: Sequence[Dict[str, object]]) -> str:
    """CSV report sorted by seed plus an ``ALL`` aggregate row.

    The aggregate ``collision_free`` is the fraction of all seeds that ran and
    had zero collision steps; spawn failures count against it.
    """
    rows = sorted(rows, key=lambda r: r["seed"])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for r in rows:
        w.writerow([_fmt(r.get(c)) for c in SWEEP_COLUMNS])
    n = len(rows)
    free = sum(1 for r in rows if r.get("collision_free") == 1)
    clear = [r["min_clearance"] for r in rows if r.get("min_clearance") is not None]
    agg = {
        "seed": "ALL",
        "status": f"{free}/{n}",
        "collision_steps": sum(int(r.get("collision_steps") or 0) for r in rows),
        "collision_free": free / n if n else 0.0,
        "min_clearance": min(clear) if clear else None,
        "fallback_steps": sum(int(r.get("fallback_steps") or 0) for r in rows),
    }
    w.writerow([_fmt(agg.get(c)) for c in SWEEP_COLUMNS])
    return buf.getvalue()


def run_sweep(cfg: ScenarioConfig, seeds: Sequence[int], jobs: int = 1) -> List[Dict[str, object]]:
    if jobs <= 1:
        return [sweep_row(cfg, s) for s in seeds]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(sweep_row, [cfg] * len(seeds), seeds))


def cmd_sweep(args) -> int:
    cfg = _load_config(args)
    seeds = parse_seeds(args.seeds)
    if not seeds:
        print("error: empty seed list", file=sys.stderr)
        return EXIT_CONFIG
    rows = run_sweep(cfg, seeds, args.jobs)
    path = os.path.join(args.out, "sweep.csv")
    atomic_write(path, sweep_report(rows))
    free = sum(1 for r in rows if r.get("collision_free") == 1)
    print(f"{len(rows)} seeds, collision-free {free}/{len(rows)} ({free / len(rows):.1%}) -> {path}")
    return EXIT_OK


def cmd_validate_gains(args) -> int:
    cfg = _load_config(args)
    g = cfg.gains
    print(
        f"gains: Kv_P={g.Kv_P} Kv_D={g.Kv_D} Kdy_P={g.Kdy_P} Kdy_D={g.Kdy_D} "
        f"Kphi_P={g.Kphi_P} Kphi_D={g.Kphi_D} d_LA={g.d_LA}  L={cfg.vehicle.L}"
    )
    print(f"{'v*':>8} {'k1':>12} {'k2':>12} {'Re(l1)':>12} {'Re(l2)':>12}  verdict")
    failures = []
    for r in gain_grid(cfg, args.points):
        verdict = "ok" if r.stable else "FAIL"
        if not r.stable:
            failures.append(r.v_star)
        print(f"{r.v_star:8.4f} {r.k1:12.6g} {r.k2:12.6g} {r.eig_real[0]:12.6g} {r.eig_real[1]:12.6g}  {verdict}")
    long_ok = g.Kv_P > 0 and g.Kv_D > -1
    print(f"longitudinal (Kv_P > 0, Kv_D > -1): {'ok' if long_ok else 'FAIL'}")
    if failures:
        print(f"FAIL: unstable at v* = {', '.join(f'{v:.4g}' for v in failures)}")
        return EXIT_UNSTABLE
    print("PASS: locally stable over the whole grid")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lanefree", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        p.add_argument("--config", help="JSON configuration file (defaults built in)")
        p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config field (repeatable)")
        if seed:
            p.add_argument("--seed", type=int, help="scenario seed")

    p = sub.add_parser("run", help="simulate one scenario and write logs")
    common(p)
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--plots", action="store_true", help="also write the four SVG figures")
    p.add_argument("--allow-unstable", action="store_true", help="run even if the gain check fails")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="run many seeds and write a CSV report")
    common(p, seed=False)
    p.add_argument("--seeds", default="1..100", help="seed list, e.g. 1..100 or 1,4,9")
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate-gains", help="linearised stability check over (0, v_N]")
    common(p, seed=False)
    p.add_argument("--points", type=int, default=20, help="number of v* grid points")
    p.set_defaults(func=cmd_validate_gains)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except cfgmod.ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
