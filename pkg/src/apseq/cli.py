"""Command-line entry points: mapgen, simulate, localize, evaluate."""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

import numpy as np

from .evaluate import (
    _point_rng,
    build_stores,
    load_config,
    run_experiment,
    write_report_csvs,
)
from .localize import Estimate, aggregate_scan, load_scan, localize, save_scan
from .mapgen import GridSpec, build_map_store, load_map_store, save_map_store
from .model import load_deployment, signature_to_text
from .propagation import gen_test_points, synth_window


def _cmd_mapgen(args) -> int:
    deployment = load_deployment(args.deploy)
    grid = GridSpec(cell_size=args.grid, width=deployment.width, height=deployment.height)
    store = build_map_store(deployment, args.k, grid)
    save_map_store(store, args.out)
    total_regions = sum(m.n_regions for m in store.maps.values())
    print(
        f"wrote {args.out}: {store.n_maps} maps, {total_regions} regions, "
        f"built in {store.build_ms:.1f} ms"
    )
    return 0


def _cmd_simulate(args, seed: int | None) -> int:
    config = load_config(args.config)
    if seed is not None:
        config = replace(config, seed=seed)
    deployment = load_deployment(config.deployment)
    os.makedirs(args.out, exist_ok=True)
    params = config.params()
    points = gen_test_points(
        deployment.width,
        deployment.height,
        config.test_points,
        mode=config.test_point_mode,
        rng=np.random.default_rng(np.random.SeedSequence((config.seed, 0))),
    )
    truth_path = os.path.join(args.out, "truth.csv")
    with open(truth_path, "w") as fh:
        fh.write("point,x,y,scan_file\n")
        for idx, (x, y) in enumerate(points):
            scan_name = f"scan_{idx:03d}.txt"
            window = synth_window(
                (x, y),
                deployment,
                params,
                duration_s=config.duration_s,
                cadence_s=config.cadence_s,
                rng=_point_rng(config.seed, idx),
            )
            save_scan(window, os.path.join(args.out, scan_name))
            fh.write(f"{idx},{x:.6f},{y:.6f},{scan_name}\n")
    print(f"wrote {len(points)} scans and {truth_path} to {args.out}")
    return 0


def _cmd_localize(args) -> int:
    store = load_map_store(args.store)
    window = load_scan(args.scan)
    scan = aggregate_scan(window)
    outcome = localize(scan, store, args.k)
    if isinstance(outcome, Estimate):
        x, y = outcome.position
        print(
            f"estimate {x:.6f} {y:.6f} "
            f"{signature_to_text(outcome.matched_signature)} "
            f"{'-'.join(str(i) for i in outcome.subset)}"
        )
    else:
        print("missed")
    return 0


def _cmd_evaluate(args, seed: int | None) -> int:
    config = load_config(args.config)
    if seed is not None:
        config = replace(config, seed=seed)
    deployment = load_deployment(config.deployment)
    stores = build_stores(deployment, config.k_values, config.cell_size)
    report = run_experiment(config, stores=stores)
    out_dir = args.out if args.out is not None else config.out_dir
    paths = write_report_csvs(report, out_dir)
    for k in sorted(report.per_k):
        rep = report.per_k[k]
        print(
            f"k={k}: {rep.n_points} points, missed_rate={rep.missed_rate:.3f}, "
            f"median_error={rep.median_error:.3f} m, maps={rep.n_maps}, "
            f"build={rep.build_ms:.1f} ms"
        )
    print(f"wrote {len(paths)} files to {out_dir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="apseq",
        description="Survey-free indoor localization from ordered AP-sequence signatures.",
    )
    parser.add_argument(
        "--seed", type=int, default=None, help="override the config seed (simulate/evaluate)"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mapgen", help="build fingerprint maps for every k-subset of APs")
    p.add_argument("--deploy", required=True, help="deployment file (APSEQ-DEPLOY v1)")
    p.add_argument("--grid", type=float, default=0.2, help="grid cell size in meters")
    p.add_argument("--k", type=int, required=True, help="AP subset size")
    p.add_argument("--out", required=True, help="output map-store file")

    p = sub.add_parser("simulate", help="synthesize scan windows at the config's test points")
    p.add_argument("--config", required=True, help="experiment config file")
    p.add_argument("--out", required=True, help="output directory for scan files")

    p = sub.add_parser("localize", help="localize one scan file against a map store")
    p.add_argument("--store", required=True, help="map-store file (APSEQMAP v1)")
    p.add_argument("--scan", required=True, help="scan file (APSEQ-SCAN v1)")
    p.add_argument("--k", type=int, required=True, help="number of APs to select")

    p = sub.add_parser("evaluate", help="run the simulated experiment and write CSV metrics")
    p.add_argument("--config", required=True, help="experiment config file")
    p.add_argument("--out", default=None, help="output directory (default: config out_dir)")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "mapgen":
            return _cmd_mapgen(args)
        if args.command == "simulate":
            return _cmd_simulate(args, args.seed)
        if args.command == "localize":
            return _cmd_localize(args)
        if args.command == "evaluate":
            return _cmd_evaluate(args, args.seed)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
