"""
Experiment runner.

Every run pushes one bit stream through modulate -> channel -> adaptive
filter -> demodulate and reports MSE/BER. Sweeps expand a grid into runs and
persist one CSV row per run.

Seeding
-------
A trial seed is derived from ``(master_seed, experiment kind, trial)``; the
grid index is deliberately left out, so every point of a sweep sees the same
bits and the same noise realisation (common random numbers). Within a run
each role ("bits", "channel", "ga", "pso") draws from its own stream derived
from ``(trial seed, role)``, so changing one algorithm never perturbs another.
"""
from __future__ import annotations

import csv
import dataclasses
import logging
import math
import os
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Optional, Sequence

import numpy as np

from .ale import AleConfig
from .channel import NoiseSpec, corrupt
from .metrics import MetricPoint, ber, mse
from .modem import ModemConfig, demodulate, generate_bits, modulate
from .optimizers import (
    DivergenceError,
    GAConfig,
    LMSConfig,
    PSOConfig,
    ga_run,
    lms_run,
    pso_run,
)

logger = logging.getLogger(__name__)

KINDS = (
    "lms_step_sweep",
    "population_sweep",
    "ga_rate_sweep",
    "mse_vs_snr",
    "ber_vs_snr_awgn",
    "ber_vs_snr_random",
)
ALGORITHMS = ("lms", "ga", "pso")
ROLES = ("bits", "channel", "ga", "pso")

CSV_HEADER = (
    "experiment",
    "algorithm",
    "grid_param",
    "grid_value",
    "seed",
    "snr_db",
    "mse",
    "ber",
    "evaluations",
    "wall_time_ms",
)

SNR_GRID = tuple(float(s) for s in range(-10, 11, 2))

# Per-kind defaults. The first three population sizes are fill-ins; the
# remaining five are the sizes named for the population comparison.
KIND_DEFAULTS: dict[str, dict[str, Any]] = {
    "lms_step_sweep": dict(grid=(0.001, 0.005, 0.01), snr_db=-2.0, algorithms=("lms",)),
    "population_sweep": dict(
        grid=(10, 20, 30, 60, 90, 110, 140, 150),
        snr_db=-5.0,
        algorithms=("ga", "pso"),
        ga=dict(generations=200),
        pso=dict(iterations=200),
    ),
    "ga_rate_sweep": dict(
        grid=dict(
            snr_db=(-5.0, 5.0),
            crossover_prob=(0.0, 0.2, 0.4, 0.6, 0.8, 0.9, 1.0),
            mutation_prob=(0.0, 0.05, 0.1, 0.2, 0.3, 0.45, 0.6, 0.8, 1.0),
        ),
        snr_db=-5.0,
        algorithms=("ga",),
    ),
    "mse_vs_snr": dict(grid=SNR_GRID, snr_db=0.0, algorithms=ALGORITHMS),
    "ber_vs_snr_awgn": dict(grid=SNR_GRID, snr_db=0.0, algorithms=ALGORITHMS),
    "ber_vs_snr_random": dict(grid=SNR_GRID, snr_db=0.0, algorithms=ALGORITHMS),
}

# kinds that fix the noise model regardless of the config's noise section
FORCED_NONLINEAR = {"mse_vs_snr": False, "ber_vs_snr_awgn": False, "ber_vs_snr_random": True}
BER_KINDS = {"ber_vs_snr_awgn", "ber_vs_snr_random"}

# fixed partner rate while the other GA rate is swept
GA_RATE_FIXED = {"crossover_prob": ("mutation_prob", 0.1), "mutation_prob": ("crossover_prob", 1.0)}


@dataclass(frozen=True)
class GridPoint:
    param: str
    value: float
    snr_db: float


@dataclass
class ExperimentSpec:
    kind: str
    grid: Any = None
    trials: int = 10
    master_seed: int = 0
    n_bits: int = 500
    snr_db: Optional[float] = None
    algorithms: Optional[Sequence[str]] = None
    modem: ModemConfig = field(default_factory=ModemConfig)
    ale: AleConfig = field(default_factory=AleConfig)
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    lms: LMSConfig = field(default_factory=LMSConfig)
    ga: GAConfig = field(default_factory=GAConfig)
    pso: PSOConfig = field(default_factory=PSOConfig)
    output_path: Optional[str] = None
    timing: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        defaults = KIND_DEFAULTS[self.kind]
        if self.grid is None:
            self.grid = defaults["grid"]
        if self.snr_db is None:
            self.snr_db = defaults["snr_db"]
        if self.algorithms is None:
            self.algorithms = defaults["algorithms"]
        self.algorithms = tuple(self.algorithms)
        bad = [a for a in self.algorithms if a not in ALGORITHMS]
        if bad or not self.algorithms:
            raise ValueError(f"algorithms must be a non-empty subset of {ALGORITHMS}, got {self.algorithms}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.n_bits < 1:
            raise ValueError("n_bits must be >= 1")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must be an unsigned 64-bit integer")
        # validates the grid domain as a side effect
        self.points()

    def points(self) -> list[GridPoint]:
        kind, grid = self.kind, self.grid
        if kind == "ga_rate_sweep":
            if not isinstance(grid, dict) or set(grid) - {"snr_db", "crossover_prob", "mutation_prob"}:
                raise ValueError("ga_rate_sweep grid must map snr_db/crossover_prob/mutation_prob to lists")
            snrs = grid.get("snr_db", (self.snr_db,))
            pts = [
                GridPoint(param, float(v), float(s))
                for s in snrs
                for param in ("crossover_prob", "mutation_prob")
                for v in grid.get(param, ())
            ]
            for p in pts:
                if not 0.0 <= p.value <= 1.0:
                    raise ValueError(f"grid value {p.value} for {p.param} outside [0, 1]")
        else:
            if isinstance(grid, dict) or len(grid) == 0:
                raise ValueError(f"{kind} grid must be a non-empty list of values")
            if kind == "lms_step_sweep":
                pts = [GridPoint("step_size", float(v), self.snr_db) for v in grid]
                if any(not (math.isfinite(p.value) and p.value > 0) for p in pts):
                    raise ValueError("grid step sizes must be finite and > 0")
            elif kind == "population_sweep":
                if any(int(v) != v for v in grid):
                    raise ValueError("grid population sizes must be integers")
                pts = [GridPoint("population", float(v), self.snr_db) for v in grid]
                low = 4 if "ga" in self.algorithms else 2
                if any(p.value < low for p in pts):
                    raise ValueError(f"grid population sizes must be >= {low}")
            else:
                pts = [GridPoint("snr_db", float(v), float(v)) for v in grid]
                if any(math.isnan(p.value) for p in pts):
                    raise ValueError("grid SNR values must not be NaN")
        if not pts:
            raise ValueError("grid is empty")
        return pts

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["experiment"] = out.pop("kind")
        out["algorithms"] = list(self.algorithms)
        return out


@dataclass(frozen=True)
class RunPoint:
    """Fully resolved configuration of a single pipeline pass."""

    experiment: str
    algorithm: str
    grid_param: str
    grid_value: Optional[float]
    n_bits: int
    modem: ModemConfig
    ale: AleConfig
    noise: NoiseSpec
    lms: LMSConfig = LMSConfig()
    ga: GAConfig = GAConfig()
    pso: PSOConfig = PSOConfig()
    report_ber: bool = True
    timing: bool = False


@dataclass
class RunRecord:
    experiment: str
    algorithm: str
    grid_param: str
    grid_value: Optional[float]
    seed: int
    snr_db: float
    mse: Optional[float]
    ber: Optional[float]
    evaluations: Optional[int]
    wall_time_ms: Optional[float]
    error: Optional[str] = field(default=None, compare=False)

    @property
    def failed(self) -> bool:
        return self.mse is None


def _tag(name: str) -> int:
    return zlib.crc32(name.encode())


def trial_seed(master_seed: int, kind: str, trial: int) -> int:
    """64-bit seed of one trial; independent of the grid point."""
    ss = np.random.SeedSequence([master_seed, _tag(kind), trial])
    return int(ss.generate_state(1, np.uint64)[0])


def role_rng(seed: int, role: str) -> np.random.Generator:
    if role not in ROLES:
        raise ValueError(f"unknown RNG role {role!r}")
    return np.random.default_rng(np.random.SeedSequence([seed, _tag(role)]))


def run_single(point: RunPoint, seed: int) -> RunRecord:
    """
    Execute the full pipeline once. Deterministic in ``(point, seed)`` apart
    from ``wall_time_ms``, which is only filled in when ``point.timing`` is set.
    """
    bits = generate_bits(point.n_bits, role_rng(seed, "bits"))
    x = modulate(bits, point.modem)
    d = corrupt(x, point.noise, role_rng(seed, "channel"))

    t0 = time.perf_counter()
    try:
        if point.algorithm == "lms":
            result = lms_run(d, point.lms, point.ale)
        elif point.algorithm == "ga":
            result = ga_run(d, point.ga, point.ale, role_rng(seed, "ga"))
        elif point.algorithm == "pso":
            result = pso_run(d, point.pso, point.ale, role_rng(seed, "pso"))
        else:
            raise ValueError(f"unknown algorithm {point.algorithm!r}")
    except DivergenceError as err:
        raise DivergenceError(
            err.iteration,
            f"{point.experiment}/{point.algorithm} {point.grid_param}={point.grid_value} seed={seed}: {err}",
        ) from err
    elapsed_ms = (time.perf_counter() - t0) * 1e3

    ber_value = None
    if point.report_ber:
        rx = demodulate(result.filtered, point.modem)
        ber_value = ber(bits[: rx.size], rx)
    return RunRecord(
        experiment=point.experiment,
        algorithm=point.algorithm,
        grid_param=point.grid_param,
        grid_value=point.grid_value,
        seed=seed,
        snr_db=float(point.noise.snr_db),
        mse=mse(d, result.filtered),
        ber=ber_value,
        evaluations=result.evaluations,
        wall_time_ms=elapsed_ms if point.timing else None,
    )


def resolve_point(spec: ExperimentSpec, gp: GridPoint, algorithm: str) -> RunPoint:
    kind = spec.kind
    noise = replace(spec.noise, snr_db=gp.snr_db)
    if kind in FORCED_NONLINEAR:
        noise = replace(noise, nonlinear_enabled=FORCED_NONLINEAR[kind])
    lms, ga, pso = spec.lms, spec.ga, spec.pso
    if gp.param == "step_size":
        lms = replace(lms, step_size=gp.value)
    elif gp.param == "population":
        ga = replace(ga, population=int(gp.value))
        pso = replace(pso, particles=int(gp.value))
    elif gp.param in GA_RATE_FIXED:
        other, fixed = GA_RATE_FIXED[gp.param]
        ga = replace(ga, **{gp.param: gp.value, other: fixed})
    return RunPoint(
        experiment=kind,
        algorithm=algorithm,
        grid_param=gp.param,
        grid_value=gp.value,
        n_bits=spec.n_bits,
        modem=spec.modem,
        ale=spec.ale,
        noise=noise,
        lms=lms,
        ga=ga,
        pso=pso,
        report_ber=kind in BER_KINDS,
        timing=spec.timing,
    )


def sweep_jobs(spec: ExperimentSpec) -> list[tuple[RunPoint, int]]:
    """All runs of a sweep, grid-major, then algorithm, then trial."""
    seeds = [trial_seed(spec.master_seed, spec.kind, t) for t in range(spec.trials)]
    return [
        (resolve_point(spec, gp, algo), seed)
        for gp in spec.points()
        for algo in spec.algorithms
        for seed in seeds
    ]


def _run_job(job: tuple[RunPoint, int]) -> RunRecord:
    point, seed = job
    try:
        return run_single(point, seed)
    except Exception as err:  # one failed point must not abort the sweep
        logger.warning("run failed: %s", err)
        return RunRecord(
            experiment=point.experiment,
            algorithm=point.algorithm,
            grid_param=point.grid_param,
            grid_value=point.grid_value,
            seed=seed,
            snr_db=float(point.noise.snr_db),
            mse=None,
            ber=None,
            evaluations=None,
            wall_time_ms=None,
            error=str(err),
        )


def run_sweep(spec: ExperimentSpec, jobs: int = 1) -> list[RunRecord]:
    """
    Run every grid point x algorithm x trial of ``spec``.

    With ``jobs > 1`` the runs are spread over worker processes; the order
    of the returned records does not depend on scheduling.
    """
    work = sweep_jobs(spec)
    logger.info("%s: %d runs", spec.kind, len(work))
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_job, work, chunksize=max(1, len(work) // (4 * jobs))))
    return [_run_job(job) for job in work]


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return format(float(value), ".17g")


def _write_rows(records, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow([r.experiment, r.algorithm, r.grid_param] + [_fmt(getattr(r, name)) for name in CSV_HEADER[3:]])


def write_csv(records: Sequence[RunRecord], path) -> None:
    """
    Write records under the fixed header. ``path`` may also be an open text
    stream. Floats carry 17 significant digits; missing values are empty.
    """
    if hasattr(path, "write"):
        _write_rows(records, path)
        return
    try:
        with open(path, "w", newline="") as fh:
            _write_rows(records, fh)
    except OSError as err:
        raise OSError(f"cannot write CSV to {os.fspath(path)!r}: {err}") from err


def _opt(text: str, conv):
    return None if text == "" else conv(text)


def read_csv(path) -> list[RunRecord]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CSV_HEADER:
            raise ValueError(f"{os.fspath(path)!r}: unexpected header {header}")
        out = []
        for row in reader:
            rec = dict(zip(CSV_HEADER, row))
            out.append(
                RunRecord(
                    experiment=rec["experiment"],
                    algorithm=rec["algorithm"],
                    grid_param=rec["grid_param"],
                    grid_value=_opt(rec["grid_value"], float),
                    seed=int(rec["seed"]),
                    snr_db=float(rec["snr_db"]),
                    mse=_opt(rec["mse"], float),
                    ber=_opt(rec["ber"], float),
                    evaluations=_opt(rec["evaluations"], int),
                    wall_time_ms=_opt(rec["wall_time_ms"], float),
                )
            )
        return out


def summarize(records: Sequence[RunRecord], metric: str = "mse") -> list[MetricPoint]:
    """
    Average ``metric`` over trials for every (algorithm, grid point).

    Failed runs and runs without the metric are skipped.
    """
    groups: dict[tuple, list[float]] = {}
    for r in records:
        value = getattr(r, metric)
        if value is None:
            continue
        key = (r.algorithm, r.grid_param, r.grid_value, r.snr_db)
        groups.setdefault(key, []).append(value)
    return [
        MetricPoint(x=key[2], y=float(np.mean(vals)), series=f"{key[0]}:{key[1]}@{key[3]:g}dB", trials=len(vals))
        for key, vals in groups.items()
    ]
