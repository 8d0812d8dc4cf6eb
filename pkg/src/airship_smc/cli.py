"""Command-line entry point: validate configs, run scenarios, sweep parameters.

Exit codes: 0 success, 1 a run failed, 2 usage or config error.
Output directory resolution: --out flag, then $AIRSHIP_SMC_OUT, then ./runs.
Config paths may name a file on disk or one of the bundled configs
(sim_section4.cfg, exp1_clean.cfg, exp2_noise.cfg).
"""

import argparse
import itertools
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from importlib import resources
from pathlib import Path

from .config import ConfigError, build_config, load_raw, sidecar_dict, validate_raw
from .engine import run_scenario
from .errors import SingularConfiguration
from .runlog import summarize

OUT_ENV = "AIRSHIP_SMC_OUT"


def resolve_config(name: str) -> str:
    """Existing path as-is, otherwise one of the bundled config files."""
    if os.path.exists(name):
        return name
    bundled = resources.files("airship_smc") / "configs" / name
    if bundled.is_file():
        return str(bundled)
    raise ConfigError(f"config not found: {name} (not a file, not a bundled config)")


def out_dir(flag) -> Path:
    path = Path(flag or os.environ.get(OUT_ENV) or "runs")
    path.mkdir(parents=True, exist_ok=True)
    return path


def cmd_validate(args) -> int:
    try:
        raw, filled = load_raw(resolve_config(args.config))
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    problems = validate_raw(raw)
    for p in problems:
        print(f"invalid: {p}")
    if problems:
        print(f"{len(problems)} problem(s) in {args.config}")
        return 2
    print(f"{args.config}: OK ({len(filled)} defaults filled)")
    return 0


def _execute(raw, filled, seed, outdir: Path, stem: str) -> dict:
    """Run one scenario and write <stem>.csv and <stem>.json; returns the summary row."""
    config = build_config(raw)
    t0 = time.perf_counter()
    log = run_scenario(config, seed=seed)
    runtime = time.perf_counter() - t0
    metrics = summarize(log, t_min=min(config.summary_t_min, 0.8 * config.horizon),
                        offset=float(config.controller.offset[0]))
    csv_path = outdir / f"{stem}.csv"
    log.to_csv(csv_path)
    side = sidecar_dict(raw, filled, seed, metrics=metrics, events=log.events,
                        runtime=runtime)
    side["csv"] = csv_path.name
    with open(outdir / f"{stem}.json", "w") as fh:
        json.dump(side, fh, indent=1, sort_keys=True)
    row = {"name": stem, "seed": seed, "status": "ok", "csv": str(csv_path)}
    row.update(metrics)
    return row


def cmd_run(args) -> int:
    try:
        raw, filled = load_raw(resolve_config(args.config))
        problems = validate_raw(raw)
        if problems:
            for p in problems:
                print(f"invalid: {p}", file=sys.stderr)
            return 2
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.seed is not None:
        raw["run"]["seed"] = str(args.seed)
    seed = int(raw["run"]["seed"])
    outdir = out_dir(args.out)
    stem = raw["run"]["name"]
    try:
        row = _execute(raw, filled, seed, outdir, stem)
    except SingularConfiguration as exc:
        print(f"run aborted on singular configuration: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {row['csv']}  max|e| = {row['max_norm_e']:.4f} m  "
          f"mean|pe - offset| = {row['mean_abs_pe_offset']:.4f} m  "
          f"events = {row['singular_events']}")
    return 0


def _sweep_task(payload):
    raw, filled, seed, outdir, stem, axes = payload
    try:
        row = _execute(raw, filled, seed, Path(outdir), stem)
    except Exception as exc:  # a failed run must not kill the batch
        row = {"name": stem, "seed": seed, "status": f"failed: {exc}", "csv": ""}
    row.update(axes)
    return row


def _parse_axis(spec: str):
    if "=" not in spec:
        raise ConfigError(f"axis must look like section.key=v1,v2 (got {spec!r})")
    path, values = spec.split("=", 1)
    if "." not in path:
        raise ConfigError(f"axis path must be section.key (got {path!r})")
    section, key = path.split(".", 1)
    vals = [v.strip() for v in values.split(",") if v.strip()]
    if not vals:
        raise ConfigError(f"axis {path} has no values")
    return section, key, vals


def cmd_sweep(args) -> int:
    try:
        raw, filled = load_raw(resolve_config(args.config))
        axes = [_parse_axis(spec) for spec in args.axis or []]
        for section, key, _ in axes:
            if section not in raw or key not in raw[section]:
                raise ConfigError(f"axis {section}.{key} does not name a config key")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    outdir = out_dir(args.out)
    seeds = list(range(args.seeds)) if args.seeds else [int(raw["run"]["seed"])]
    base = raw["run"]["name"]

    tasks = []
    combos = itertools.product(*[vals for _, _, vals in axes]) if axes else [()]
    for combo in combos:
        variant = {sec: dict(entries) for sec, entries in raw.items()}
        tags = []
        axis_cols = {}
        for (section, key, _), value in zip(axes, combo):
            variant[section][key] = value
            tags.append(f"{key}={value}")
            axis_cols[f"{section}.{key}"] = value
        problems = validate_raw(variant)
        for seed in seeds:
            stem = "__".join([base] + tags + [f"seed{seed}"])
            variant["run"]["name"] = stem
            if problems:
                tasks.append(("invalid", stem, seed, axis_cols, problems))
            else:
                payload = ({s: dict(e) for s, e in variant.items()}, filled, seed,
                           str(outdir), stem, axis_cols)
                tasks.append(("run", payload))

    rows = []
    runnable = [t[1] for t in tasks if t[0] == "run"]
    jobs = args.jobs or os.cpu_count() or 1
    if jobs > 1 and len(runnable) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows.extend(pool.map(_sweep_task, runnable))
    else:
        rows.extend(_sweep_task(p) for p in runnable)
    for task in tasks:
        if task[0] == "invalid":
            _, stem, seed, axis_cols, problems = task
            row = {"name": stem, "seed": seed, "status": f"invalid: {'; '.join(problems)}",
                   "csv": ""}
            row.update(axis_cols)
            rows.append(row)

    columns = ["name", "seed", "status"]
    axis_names = [f"{s}.{k}" for s, k, _ in axes]
    metric_names = ["max_abs_ex", "max_abs_ey", "max_abs_ez", "max_norm_e",
                    "mean_abs_pe_offset", "max_norm_sigma", "singular_events"]
    columns += axis_names + metric_names + ["csv"]
    summary_path = outdir / f"{base}_sweep.csv"
    with open(summary_path, "w") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(str(row.get(c, "")) for c in columns) + "\n")
    failed = [r for r in rows if r["status"] != "ok"]
    print(f"wrote {summary_path} ({len(rows)} rows, {len(failed)} failed)")
    return 1 if failed else 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="airship-smc",
        description="Underactuated-airship tracking simulator",
        epilog="exit codes: 0 success, 1 run failed, 2 usage/config error; "
               f"default output dir: --out, ${OUT_ENV}, then ./runs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a config against every invariant")
    p.add_argument("config")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("run", help="run one scenario, write CSV log + JSON sidecar")
    p.add_argument("config")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("sweep", help="Cartesian parameter sweep times seed ensemble")
    p.add_argument("config")
    p.add_argument("--axis", action="append",
                   help="section.key=v1,v2,... (repeatable)")
    p.add_argument("--seeds", type=int, default=0,
                   help="run seeds 0..N-1 (default: the config seed only)")
    p.add_argument("--jobs", type=int, default=0,
                   help="parallel runs (default: logical cores)")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_sweep)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
