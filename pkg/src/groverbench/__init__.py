"""Dual-backend Grover simulator with a benchmark service and CLI."""

__version__ = "0.1.0"

from .bench import (BenchConfig, BenchRecord, Experiment, MarkedPolicy,
                    SweepResult, emit_csv, read_csv, run_amplitude_sweep,
                    run_runtime_sweep, run_shot_sweep, run_sweep)
from .errors import (CapacityExceeded, InvalidGate, InvalidInput,
                     NumericalFailure, SimulationError)
from .grover import (BackendKind, ExecMode, GroverResult, GroverSpec, KPolicy,
                     build_grover_layer, iteration_count,
                     predicted_success_probability, run, theta)
from .linalg import SvdResult, TruncationResult, svd, truncate_spectrum
from .mps import DiagonalMpo, MpsState
from .precision import Precision
from .statevector import StateVector

__all__ = [
    "BackendKind", "BenchConfig", "BenchRecord", "CapacityExceeded",
    "DiagonalMpo", "ExecMode", "Experiment", "GroverResult", "GroverSpec",
    "InvalidGate", "InvalidInput", "KPolicy", "MarkedPolicy", "MpsState",
    "NumericalFailure", "Precision", "SimulationError", "StateVector",
    "SvdResult", "SweepResult", "TruncationResult", "build_grover_layer",
    "emit_csv", "iteration_count", "predicted_success_probability",
    "read_csv", "run", "run_amplitude_sweep", "run_runtime_sweep",
    "run_shot_sweep", "run_sweep", "svd", "theta", "truncate_spectrum",
]
