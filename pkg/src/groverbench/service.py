"""HTTP facade over the engine and benchmark sweeps.

JSON cannot carry NaN, so every optional measurement travels as null and
the CSV layer on the client side turns null back into NaN.
"""

from __future__ import annotations

import math
from typing import Optional

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .bench import (DEFAULT_SHOTS, BenchConfig, BenchRecord, Experiment,
                    MarkedPolicy, run_sweep)
from .errors import (CapacityExceeded, InvalidInput, NumericalFailure,
                     SimulationError)
from .grover import (BackendKind, ExecMode, GroverSpec, KPolicy,
                     iteration_count, predicted_success_probability, run,
                     theta)
from .precision import Precision

app = FastAPI(title="groverbench", version=__version__)


@app.exception_handler(SimulationError)
async def _simulation_error(request: Request, exc: SimulationError):
    status = 422
    if isinstance(exc, CapacityExceeded):
        status = 413
    elif isinstance(exc, NumericalFailure):
        status = 500
    return JSONResponse(status_code=status, content={"detail": str(exc)})


def _nan_to_none(value: float) -> Optional[float]:
    return None if math.isnan(value) else value


def _none_to_nan(value: Optional[float]) -> float:
    return float("nan") if value is None else value


class HealthResponse(BaseModel):
    status: str
    version: str


class PredictionResponse(BaseModel):
    n: int
    k: int
    k_policy: str
    theta: float
    probability: float


class RunRequest(BaseModel):
    n: int
    marked: Optional[str] = None  # default: all-ones bitstring
    backend: str = "sv"
    mode: str = "iterative"
    precision: str = "f64"
    k_policy: str = "paper"
    k_override: Optional[int] = None
    chi_max: int = 64
    rel_cutoff: Optional[float] = None
    shots: int = 0
    seed: int = 0


class RunResponse(BaseModel):
    n: int
    marked: str
    backend: str
    mode: str
    precision: str
    k: int
    wall_time_seconds: float
    marked_amplitude: float
    marked_probability: float
    predicted_probability: float
    peak_program_ops: int
    max_bond_dim: Optional[int] = None
    discarded_weight: Optional[float] = None
    peak_tensor_entries: Optional[int] = None
    counts: Optional[dict[str, int]] = None
    marked_amplitude_sampled: Optional[float] = None


class SweepRequest(BaseModel):
    experiment: str
    n_min: int
    n_max: int
    backends: list[str] = Field(default=["sv", "mps"])
    modes: list[str] = Field(default=["common", "iterative"])
    precisions: list[str] = Field(default=["f64"])
    shots: list[int] = Field(default=list(DEFAULT_SHOTS))
    trials: int = 1
    chi_max: int = 64
    k_policy: str = "paper"
    marked: str = "ones"
    seed: int = 0
    jobs: int = 1


class RecordModel(BaseModel):
    experiment: str
    n: int
    backend: str
    mode: str
    precision: str
    k: int
    shots: int
    trial: int
    wall_time_seconds: Optional[float]
    marked_amplitude_exact: Optional[float]
    marked_amplitude_sampled: Optional[float]
    peak_program_ops: int
    max_bond_dim: Optional[float]
    discarded_weight: Optional[float]

    @classmethod
    def from_record(cls, r: BenchRecord) -> "RecordModel":
        return cls(
            experiment=r.experiment, n=r.n, backend=r.backend, mode=r.mode,
            precision=r.precision, k=r.k, shots=r.shots, trial=r.trial,
            wall_time_seconds=_nan_to_none(r.wall_time_seconds),
            marked_amplitude_exact=_nan_to_none(r.marked_amplitude_exact),
            marked_amplitude_sampled=_nan_to_none(r.marked_amplitude_sampled),
            peak_program_ops=r.peak_program_ops,
            max_bond_dim=_nan_to_none(r.max_bond_dim),
            discarded_weight=_nan_to_none(r.discarded_weight),
        )

    def to_record(self) -> BenchRecord:
        return BenchRecord(
            experiment=self.experiment, n=self.n, backend=self.backend,
            mode=self.mode, precision=self.precision, k=self.k,
            shots=self.shots, trial=self.trial,
            wall_time_seconds=_none_to_nan(self.wall_time_seconds),
            marked_amplitude_exact=_none_to_nan(self.marked_amplitude_exact),
            marked_amplitude_sampled=_none_to_nan(
                self.marked_amplitude_sampled),
            peak_program_ops=self.peak_program_ops,
            max_bond_dim=_none_to_nan(self.max_bond_dim),
            discarded_weight=_none_to_nan(self.discarded_weight),
        )


class SweepResponse(BaseModel):
    records: list[RecordModel]
    skipped: list[str]
    partial: bool


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.get("/grover/prediction", response_model=PredictionResponse)
def prediction(n: int = Query(..., ge=1),
               k_policy: str = Query("paper"),
               k: Optional[int] = Query(None, ge=0)) -> PredictionResponse:
    policy = KPolicy.parse(k_policy)
    k_eff = iteration_count(n, policy) if k is None else k
    return PredictionResponse(
        n=n, k=k_eff, k_policy=policy.value, theta=theta(n),
        probability=predicted_success_probability(n, k_eff))


@app.post("/grover/run", response_model=RunResponse)
def grover_run(req: RunRequest) -> RunResponse:
    marked = req.marked if req.marked is not None else "1" * max(req.n, 1)
    spec = GroverSpec(
        n=req.n,
        marked=marked,
        k_policy=KPolicy.parse(req.k_policy),
        mode=ExecMode.parse(req.mode),
        backend=BackendKind.parse(req.backend),
        precision=Precision.parse(req.precision),
        chi_max=req.chi_max,
        rel_cutoff=req.rel_cutoff,
        seed=req.seed,
        k_override=req.k_override,
    )
    if req.shots < 0:
        raise InvalidInput(f"shots must be >= 0, got {req.shots}")
    result = run(spec, keep_state=req.shots > 0)
    counts = None
    sampled = None
    if req.shots > 0:
        counts = result.state.sample(req.shots, req.seed)
        sampled = math.sqrt(counts.get(marked, 0) / req.shots)
    return RunResponse(
        n=result.n, marked=result.marked, backend=result.backend.value,
        mode=result.mode.value, precision=result.precision.value, k=result.k,
        wall_time_seconds=result.wall_time_seconds,
        marked_amplitude=abs(result.marked_amplitude),
        marked_probability=result.marked_probability,
        predicted_probability=result.predicted_probability,
        peak_program_ops=result.peak_program_ops,
        max_bond_dim=result.boundary_max_bond,
        discarded_weight=result.discarded_weight,
        peak_tensor_entries=result.peak_tensor_entries,
        counts=counts,
        marked_amplitude_sampled=sampled,
    )


@app.post("/bench/sweep", response_model=SweepResponse)
def bench_sweep(req: SweepRequest) -> SweepResponse:
    config = BenchConfig(
        experiment=Experiment.parse(req.experiment),
        n_min=req.n_min,
        n_max=req.n_max,
        backends=tuple(BackendKind.parse(b) for b in req.backends),
        modes=tuple(ExecMode.parse(m) for m in req.modes),
        precisions=tuple(Precision.parse(p) for p in req.precisions),
        shots_list=tuple(req.shots),
        trials=req.trials,
        chi_max=req.chi_max,
        k_policy=KPolicy.parse(req.k_policy),
        marked=MarkedPolicy.parse(req.marked),
        seed=req.seed,
        jobs=req.jobs,
    )
    result = run_sweep(config)
    return SweepResponse(
        records=[RecordModel.from_record(r) for r in result.records],
        skipped=result.skipped,
        partial=result.partial,
    )
