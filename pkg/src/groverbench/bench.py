"""Benchmark sweeps over the Grover engine, with deterministic CSV output.

Every sweep enumerates a lattice of (n, backend, mode, precision[, shots])
points in a canonical order, runs `trials` independent runs per point, and
emits one record per run.  Points that exceed the capacity guard are kept
as rows with NaN measurements so the row count stays lattice x trials.

Reproducibility: all randomness (random marked states, measurement
sampling) derives from counter-based Philox streams keyed on the sweep
seed, the point index, and the trial index, so two sweeps with identical
flags produce identical records; only wall-clock timings differ.
"""

from __future__ import annotations

import csv
import enum
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import CapacityExceeded, InvalidInput
from .grover import (BackendKind, ExecMode, GroverSpec, KPolicy,
                     iteration_count, run)
from .kernels import warm_kernels
from .precision import Precision
from .statevector import DEFAULT_QUBIT_CAP

logger = logging.getLogger(__name__)

DEFAULT_SHOTS = (1, 8, 64, 512, 4096)


class Experiment(enum.Enum):
    RUNTIME = "runtime"
    AMPLITUDE = "amplitude"
    SHOTS = "shots"

    @classmethod
    def parse(cls, label: str) -> "Experiment":
        for member in cls:
            if member.value == label:
                return member
        raise InvalidInput(f"unknown experiment {label!r}")


class MarkedPolicy(enum.Enum):
    ONES = "ones"
    RANDOM = "random"

    @classmethod
    def parse(cls, label: str) -> "MarkedPolicy":
        for member in cls:
            if member.value == label:
                return member
        raise InvalidInput(f"unknown marked policy {label!r}")


@dataclass(frozen=True)
class BenchConfig:
    experiment: Experiment
    n_min: int
    n_max: int
    backends: tuple[BackendKind, ...] = (BackendKind.STATEVECTOR,
                                         BackendKind.MPS)
    modes: tuple[ExecMode, ...] = (ExecMode.COMMON, ExecMode.ITERATIVE)
    precisions: tuple[Precision, ...] = (Precision.DOUBLE,)
    shots_list: tuple[int, ...] = DEFAULT_SHOTS
    trials: int = 1
    chi_max: int = 64
    k_policy: KPolicy = KPolicy.PAPER
    marked: MarkedPolicy = MarkedPolicy.ONES
    seed: int = 0
    jobs: int = 1

    def __post_init__(self):
        if self.n_min < 1 or self.n_max < self.n_min:
            raise InvalidInput(f"bad qubit range [{self.n_min}, {self.n_max}]")
        for name in ("backends", "modes", "precisions"):
            if not getattr(self, name):
                raise InvalidInput(f"{name} must not be empty")
        if self.experiment is Experiment.SHOTS and not self.shots_list:
            raise InvalidInput("shot sweep needs a non-empty shots list")
        if any(s < 1 for s in self.shots_list):
            raise InvalidInput("shot counts must be >= 1")
        if self.trials < 1:
            raise InvalidInput(f"trials must be >= 1, got {self.trials}")
        if self.chi_max < 1:
            raise InvalidInput(f"chi_max must be >= 1, got {self.chi_max}")
        if self.jobs < 1:
            raise InvalidInput(f"jobs must be >= 1, got {self.jobs}")
        if self.seed < 0:
            raise InvalidInput(f"seed must be >= 0, got {self.seed}")
        if (BackendKind.STATEVECTOR in self.backends
                and self.n_max > DEFAULT_QUBIT_CAP):
            raise InvalidInput(
                f"n_max={self.n_max} exceeds the {DEFAULT_QUBIT_CAP}-qubit "
                f"statevector cap; drop the sv backend or lower n_max")


@dataclass
class BenchRecord:
    """One run of one sweep point.  Field order defines the CSV columns."""

    experiment: str
    n: int
    backend: str
    mode: str
    precision: str
    k: int
    shots: int
    trial: int
    wall_time_seconds: float
    marked_amplitude_exact: float
    marked_amplitude_sampled: float
    peak_program_ops: int
    max_bond_dim: float
    discarded_weight: float


COLUMNS = [f.name for f in fields(BenchRecord)]
_INT_FIELDS = {"n", "k", "shots", "trial", "peak_program_ops"}
_STR_FIELDS = {"experiment", "backend", "mode", "precision"}


class SweepPoint(NamedTuple):
    n: int
    backend: BackendKind
    mode: ExecMode
    precision: Precision
    shots: int


@dataclass
class SweepResult:
    records: list[BenchRecord]
    skipped: list[str]

    @property
    def partial(self) -> bool:
        return bool(self.skipped)


def sweep_lattice(config: BenchConfig) -> list[SweepPoint]:
    """Canonically ordered sweep points; the order keys the seed streams."""
    backends = [b for b in BackendKind if b in config.backends]
    modes = [m for m in ExecMode if m in config.modes]
    precisions = [p for p in Precision if p in config.precisions]
    shots = (sorted(set(config.shots_list))
             if config.experiment is Experiment.SHOTS else [0])
    points = []
    for n in range(config.n_min, config.n_max + 1):
        for backend in backends:
            for mode in modes:
                for precision in precisions:
                    for s in shots:
                        points.append(SweepPoint(n, backend, mode,
                                                 precision, s))
    return points


def _marked_for(config: BenchConfig, n: int, trial: int) -> str:
    """Marked bitstring for a point; keyed on (seed, n, trial) only, so all
    backends/modes/precisions of the same n and trial search the same state."""
    if config.marked is MarkedPolicy.ONES:
        return "1" * n
    ss = np.random.SeedSequence(entropy=config.seed, spawn_key=(n, trial, 1))
    rng = np.random.Generator(np.random.Philox(ss))
    return "".join("1" if b else "0" for b in rng.integers(0, 2, size=n))


def _sample_seed(config: BenchConfig, point_index: int, trial: int) -> int:
    ss = np.random.SeedSequence(entropy=config.seed,
                                spawn_key=(point_index, trial, 2))
    return int(ss.generate_state(1, np.uint64)[0])


def _quantize(value: float, precision: Precision) -> float:
    if precision is Precision.SINGLE and not math.isnan(value):
        return float(np.float32(value))
    return float(value)


def _skip_record(config: BenchConfig, point: SweepPoint,
                 trial: int) -> BenchRecord:
    k = iteration_count(point.n, config.k_policy)
    nan = float("nan")
    return BenchRecord(
        experiment=config.experiment.value,
        n=point.n,
        backend=point.backend.value,
        mode=point.mode.value,
        precision=point.precision.value,
        k=k,
        shots=point.shots,
        trial=trial,
        wall_time_seconds=nan,
        marked_amplitude_exact=nan,
        marked_amplitude_sampled=nan,
        peak_program_ops=point.n + (k if point.mode is ExecMode.COMMON
                                    else 1) * (2 * point.n + 2),
        max_bond_dim=nan,
        discarded_weight=nan,
    )


def _run_point(config: BenchConfig, point_index: int, point: SweepPoint,
               trial: int) -> tuple[BenchRecord, str | None]:
    marked = _marked_for(config, point.n, trial)
    spec = GroverSpec(
        n=point.n,
        marked=marked,
        k_policy=config.k_policy,
        mode=point.mode,
        backend=point.backend,
        precision=point.precision,
        chi_max=config.chi_max,
        seed=config.seed,
    )
    want_sample = config.experiment is Experiment.SHOTS
    try:
        result = run(spec, keep_state=want_sample)
    except CapacityExceeded as exc:
        reason = (f"n={point.n} {point.backend.value}/{point.mode.value}/"
                  f"{point.precision.value} trial={trial}: {exc}")
        logger.warning("skipped %s", reason)
        return _skip_record(config, point, trial), reason

    sampled = float("nan")
    if want_sample:
        counts = result.state.sample(point.shots,
                                     _sample_seed(config, point_index, trial))
        hits = counts.get(marked, 0)
        sampled = math.sqrt(hits / point.shots)

    p = point.precision
    is_mps = point.backend is BackendKind.MPS
    record = BenchRecord(
        experiment=config.experiment.value,
        n=point.n,
        backend=point.backend.value,
        mode=point.mode.value,
        precision=p.value,
        k=result.k,
        shots=point.shots,
        trial=trial,
        wall_time_seconds=result.wall_time_seconds,
        marked_amplitude_exact=_quantize(abs(result.marked_amplitude), p),
        marked_amplitude_sampled=_quantize(sampled, p),
        peak_program_ops=result.peak_program_ops,
        max_bond_dim=(float(result.boundary_max_bond) if is_mps
                      else float("nan")),
        discarded_weight=(_quantize(result.discarded_weight, p) if is_mps
                          else float("nan")),
    )
    return record, None


def _warm_up(config: BenchConfig) -> None:
    """Compile kernels and touch every backend/precision path once so the
    first timed run does not pay JIT or cache-fill costs."""
    warm_kernels()
    for backend in set(config.backends):
        for precision in set(config.precisions):
            run(GroverSpec(n=2, marked="11", mode=ExecMode.ITERATIVE,
                           backend=backend, precision=precision,
                           chi_max=config.chi_max, k_override=1))


def run_sweep(config: BenchConfig) -> SweepResult:
    """Execute the configured sweep and return sorted records plus skips."""
    points = sweep_lattice(config)
    tasks = [(idx, point, trial)
             for idx, point in enumerate(points)
             for trial in range(config.trials)]
    _warm_up(config)

    records: list[BenchRecord] = []
    skipped: list[str] = []
    if config.jobs == 1:
        outcomes = [_run_point(config, idx, point, trial)
                    for idx, point, trial in tasks]
    else:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            outcomes = list(pool.map(
                lambda t: _run_point(config, t[0], t[1], t[2]), tasks))
    for record, reason in outcomes:
        records.append(record)
        if reason is not None:
            skipped.append(reason)

    records.sort(key=lambda r: (r.n, r.backend, r.mode, r.precision,
                                r.shots, r.trial))
    return SweepResult(records, skipped)


def run_runtime_sweep(config: BenchConfig) -> SweepResult:
    if config.experiment is not Experiment.RUNTIME:
        raise InvalidInput("config is not a runtime experiment")
    return run_sweep(config)


def run_amplitude_sweep(config: BenchConfig) -> SweepResult:
    if config.experiment is not Experiment.AMPLITUDE:
        raise InvalidInput("config is not an amplitude experiment")
    return run_sweep(config)


def run_shot_sweep(config: BenchConfig) -> SweepResult:
    if config.experiment is not Experiment.SHOTS:
        raise InvalidInput("config is not a shot experiment")
    return run_sweep(config)


# -- CSV ------------------------------------------------------------------


def format_float(value: float, digits: int) -> str:
    """Scientific notation with a fixed digit count; NaN spelled 'nan'."""
    if math.isnan(value):
        return "nan"
    return f"{value:.{digits - 1}e}"


def _format_row(record: BenchRecord) -> list[str]:
    precision = Precision.parse(record.precision)
    out = []
    for f in fields(BenchRecord):
        value = getattr(record, f.name)
        if f.name in _STR_FIELDS:
            out.append(value)
        elif f.name in _INT_FIELDS:
            out.append(str(value))
        elif f.name == "wall_time_seconds":
            # The timer is a float64 reading regardless of run precision.
            out.append(format_float(value, 17))
        else:
            out.append(format_float(value, precision.csv_digits))
    return out


def emit_csv(records: list[BenchRecord], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(COLUMNS)
        for record in records:
            writer.writerow(_format_row(record))


def read_csv(path: str | Path) -> list[BenchRecord]:
    """Parse a benchmark CSV back into records (exact round trip)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != COLUMNS:
            raise InvalidInput(f"unexpected CSV header {header!r}")
        records = []
        for row in reader:
            if len(row) != len(COLUMNS):
                raise InvalidInput(f"row has {len(row)} fields, "
                                   f"expected {len(COLUMNS)}")
            kwargs = {}
            precision = Precision.parse(row[COLUMNS.index("precision")])
            for name, raw in zip(COLUMNS, row):
                if name in _STR_FIELDS:
                    kwargs[name] = raw
                elif name in _INT_FIELDS:
                    kwargs[name] = int(raw)
                elif name == "wall_time_seconds":
                    kwargs[name] = float(raw)
                else:
                    kwargs[name] = _quantize(float(raw), precision)
            records.append(BenchRecord(**kwargs))
        return records
