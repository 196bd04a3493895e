"""Experiment harness: simulated localization runs and their metrics.

A plain-text config describes one scenario (deployment file, grid, the k
values to evaluate, propagation and window parameters, test points, seed).
The harness builds one map store per k, simulates an observation window at
every test point, localizes it at every k, and reports per-k error lists,
missed-detection rates and empirical CDFs.

All randomness flows from the single config seed through named substreams:
test-point coordinates use substream (seed, 0) and the window of test point
i uses substream (seed, i+1), so adding test points never perturbs earlier
ones and windows of different durations share their leading samples.
"""

from __future__ import annotations

import os
import statistics
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from .localize import Estimate, aggregate_scan, localize
from .mapgen import GridSpec, MapStore, build_map_store
from .model import ApDeployment, load_deployment
from .propagation import PropagationParams, gen_test_points, synth_window

_CONFIG_DEFAULTS = {
    "cell_size": 0.2,
    "p0_dbm": -30.0,
    "gamma": 2.5,
    "d0_m": 1.0,
    "sigma_db": 0.0,
    "detect_floor_dbm": -95.0,
    "round_to_int": False,
    "test_point_mode": "random",
    "test_points": 27,
    "duration_s": 60.0,
    "cadence_s": 0.3,
    "seed": 0,
    "out_dir": "out",
}


@dataclass(frozen=True)
class ExperimentConfig:
    """One scenario: where the APs are, what to simulate, what to evaluate."""

    deployment: str
    k_values: tuple[int, ...]
    cell_size: float = 0.2
    p0_dbm: float = -30.0
    gamma: float = 2.5
    d0_m: float = 1.0
    sigma_db: float = 0.0
    detect_floor_dbm: float = -95.0
    round_to_int: bool = False
    test_point_mode: str = "random"
    test_points: int = 27
    duration_s: float = 60.0
    cadence_s: float = 0.3
    seed: int = 0
    out_dir: str = "out"

    def __post_init__(self):
        if not self.k_values:
            raise ValueError("k_values must not be empty")
        if any(k < 2 for k in self.k_values):
            raise ValueError("every k must be at least 2")
        if self.test_points < 1:
            raise ValueError("test_points must be at least 1")

    def params(self, seed: int | None = None) -> PropagationParams:
        return PropagationParams(
            p0_dbm=self.p0_dbm,
            gamma=self.gamma,
            d0_m=self.d0_m,
            sigma_db=self.sigma_db,
            detect_floor_dbm=self.detect_floor_dbm,
            seed=self.seed if seed is None else seed,
            round_to_int=self.round_to_int,
        )


def _parse_bool(raw: str) -> bool:
    lowered = raw.lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def parse_config(text: str, base_dir: str = ".", source: str = "<string>") -> ExperimentConfig:
    """Parse `key = value` lines; see ExperimentConfig for the keys.

    Blank lines and lines starting with '#' are ignored.  The deployment
    path is resolved relative to base_dir (normally the config file's
    directory).
    """
    values: dict = {}
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        if "=" not in ln:
            raise ValueError(f"{source}: malformed config line {ln!r}")
        key, _, raw = ln.partition("=")
        key, raw = key.strip(), raw.strip()
        if key in values:
            raise ValueError(f"{source}: duplicate key {key!r}")
        try:
            if key == "deployment":
                values[key] = os.path.join(base_dir, raw)
            elif key == "k_values":
                values[key] = tuple(int(v) for v in raw.replace(",", " ").split())
            elif key in ("test_points", "seed"):
                values[key] = int(raw)
            elif key == "round_to_int":
                values[key] = _parse_bool(raw)
            elif key in ("test_point_mode", "out_dir"):
                values[key] = raw
            elif key in _CONFIG_DEFAULTS:
                values[key] = float(raw)
            else:
                raise KeyError(key)
        except KeyError:
            raise ValueError(f"{source}: unknown config key {key!r}") from None
        except ValueError as exc:
            raise ValueError(f"{source}: bad value for {key!r}: {exc}") from None
    for req in ("deployment", "k_values"):
        if req not in values:
            raise ValueError(f"{source}: missing required key {req!r}")
    return ExperimentConfig(**values)


def load_config(path) -> ExperimentConfig:
    with open(path) as fh:
        text = fh.read()
    return parse_config(text, base_dir=os.path.dirname(os.path.abspath(path)), source=str(path))


def error_cdf(errors: Sequence[float]) -> tuple[tuple[float, float], ...]:
    """Empirical CDF evaluated at each distinct error value (right-continuous)."""
    if len(errors) == 0:
        raise ValueError("empty error list")
    arr = np.sort(np.asarray(errors, dtype=float))
    n = len(arr)
    out = []
    for v in np.unique(arr):
        out.append((float(v), float(np.searchsorted(arr, v, side="right") / n)))
    return tuple(out)


@dataclass(frozen=True)
class KReport:
    """Results of one k over all test points (errors cover matched points only)."""

    k: int
    n_points: int
    errors: tuple[float, ...]
    missed: int
    build_ms: float
    n_maps: int
    total_regions: int

    @property
    def missed_rate(self) -> float:
        return self.missed / self.n_points

    @property
    def median_error(self) -> float:
        return statistics.median(self.errors) if self.errors else float("nan")

    @property
    def mean_error(self) -> float:
        return statistics.fmean(self.errors) if self.errors else float("nan")

    @property
    def cdf(self) -> tuple[tuple[float, float], ...]:
        return error_cdf(self.errors)


@dataclass(frozen=True)
class ExperimentReport:
    """Everything one run produced, keyed by k; deterministic under the seed."""

    config: ExperimentConfig
    points: tuple[tuple[float, float], ...]
    per_k: Mapping[int, KReport] = field(default_factory=dict)


def build_stores(
    deployment: ApDeployment, k_values: Sequence[int], cell_size: float
) -> dict[int, MapStore]:
    grid = GridSpec(cell_size=cell_size, width=deployment.width, height=deployment.height)
    return {k: build_map_store(deployment, k, grid) for k in sorted(set(k_values))}


def _experiment_points(
    config: ExperimentConfig, deployment: ApDeployment, seed: int
) -> list[tuple[float, float]]:
    rng = np.random.default_rng(np.random.SeedSequence((seed, 0)))
    return gen_test_points(
        deployment.width,
        deployment.height,
        config.test_points,
        mode=config.test_point_mode,
        rng=rng,
    )


def _point_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((seed, index + 1)))


def run_experiment(
    config: ExperimentConfig,
    seed: int | None = None,
    stores: Mapping[int, MapStore] | None = None,
) -> ExperimentReport:
    """Simulate and localize every test point at every configured k.

    The same simulated window is localized at each k, mirroring one walk
    evaluated under different subset sizes.  Pass `stores` to reuse maps
    across repeated runs (they depend only on deployment and grid).
    """
    seed = config.seed if seed is None else seed
    deployment = load_deployment(config.deployment)
    if stores is None:
        stores = build_stores(deployment, config.k_values, config.cell_size)
    params = config.params(seed=seed)
    points = _experiment_points(config, deployment, seed)
    errors: dict[int, list[float]] = {k: [] for k in config.k_values}
    missed: dict[int, int] = {k: 0 for k in config.k_values}
    for idx, point in enumerate(points):
        window = synth_window(
            point,
            deployment,
            params,
            duration_s=config.duration_s,
            cadence_s=config.cadence_s,
            rng=_point_rng(seed, idx),
        )
        scan = aggregate_scan(window)
        for k in config.k_values:
            outcome = localize(scan, stores, k)
            if isinstance(outcome, Estimate):
                ex, ey = outcome.position
                errors[k].append(float(np.hypot(ex - point[0], ey - point[1])))
            else:
                missed[k] += 1
    per_k = {
        k: KReport(
            k=k,
            n_points=len(points),
            errors=tuple(errors[k]),
            missed=missed[k],
            build_ms=stores[k].build_ms,
            n_maps=stores[k].n_maps,
            total_regions=sum(m.n_regions for m in stores[k].maps.values()),
        )
        for k in config.k_values
    }
    return ExperimentReport(config=config, points=tuple(points), per_k=per_k)


def window_sweep(
    config: ExperimentConfig,
    durations: Sequence[float],
    seed: int | None = None,
    stores: Mapping[int, MapStore] | None = None,
) -> dict[float, ExperimentReport]:
    """Re-run the experiment at several window durations.

    Every duration replays the same per-point noise streams, so a shorter
    window is a prefix of a longer one and the comparison isolates the
    effect of observation time.
    """
    if any(d <= 0 for d in durations):
        raise ValueError("durations must be positive")
    deployment = load_deployment(config.deployment)
    if stores is None:
        stores = build_stores(deployment, config.k_values, config.cell_size)
    out: dict[float, ExperimentReport] = {}
    for duration in durations:
        cfg = replace(config, duration_s=float(duration))
        out[float(duration)] = run_experiment(cfg, seed=seed, stores=stores)
    return out


def write_report_csvs(report: ExperimentReport, out_dir) -> list[str]:
    """Write cdf_k<K>.csv per k plus summary.csv; returns the paths written."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for k in sorted(report.per_k):
        rep = report.per_k[k]
        path = os.path.join(out_dir, f"cdf_k{k}.csv")
        with open(path, "w") as fh:
            fh.write("error_m,cdf\n")
            if rep.errors:
                for err, c in rep.cdf:
                    fh.write(f"{err:.6f},{c:.6f}\n")
        written.append(path)
    path = os.path.join(out_dir, "summary.csv")
    with open(path, "w") as fh:
        fh.write("k,points,missed_rate,median_error_m,mean_error_m,build_ms,maps\n")
        for k in sorted(report.per_k):
            rep = report.per_k[k]
            fh.write(
                f"{k},{rep.n_points},{rep.missed_rate:.6f},"
                f"{rep.median_error:.6f},{rep.mean_error:.6f},"
                f"{rep.build_ms:.3f},{rep.n_maps}\n"
            )
    written.append(path)
    return written
