"""Grover search engine on top of the two backends.

A run prepares the uniform superposition and then repeats one amplification
layer: phase-flip the marked state, then reflect about the all-zeros state
in the Hadamard frame.  The layer can be materialized k times up front
("common") or built once and re-applied ("iterative"); both execute the
identical op sequence, so final states agree bitwise.
"""

from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass, field

from .errors import InvalidInput
from .mps import MpsState
from .ops import GateOp, PhaseFlipMarked, SingleQubit, ZeroReflection, \
    check_bitstring, hadamard
from .precision import Precision
from .statevector import StateVector


class KPolicy(enum.Enum):
    PAPER = "paper"      # round(pi/4 * sqrt(2^n))
    OPTIMAL = "optimal"  # max(1, round(pi/(4*theta) - 1/2))

    @classmethod
    def parse(cls, label: str) -> "KPolicy":
        for member in cls:
            if member.value == label:
                return member
        raise InvalidInput(f"unknown k policy {label!r}")


class ExecMode(enum.Enum):
    COMMON = "common"
    ITERATIVE = "iterative"

    @classmethod
    def parse(cls, label: str) -> "ExecMode":
        for member in cls:
            if member.value == label:
                return member
        raise InvalidInput(f"unknown mode {label!r}")


class BackendKind(enum.Enum):
    STATEVECTOR = "sv"
    MPS = "mps"

    @classmethod
    def parse(cls, label: str) -> "BackendKind":
        for member in cls:
            if member.value == label:
                return member
        raise InvalidInput(f"unknown backend {label!r}")


def theta(n: int) -> float:
    """Rotation angle per amplification step for one marked state."""
    if n < 1:
        raise InvalidInput(f"need at least one qubit, got n={n}")
    return math.asin(2.0 ** (-n / 2.0))


def iteration_count(n: int, policy: KPolicy) -> int:
    """Number of amplification steps under the chosen rounding policy."""
    if policy is KPolicy.PAPER:
        return int(round(math.pi / 4.0 * math.sqrt(2.0 ** n)))
    k = int(round(math.pi / (4.0 * theta(n)) - 0.5))
    return max(1, k)


def predicted_success_probability(n: int, k: int) -> float:
    """Closed-form probability sin^2((2k+1) * theta) of hitting the mark."""
    if k < 0:
        raise InvalidInput(f"iteration count must be >= 0, got {k}")
    return math.sin((2 * k + 1) * theta(n)) ** 2


@dataclass(frozen=True)
class GroverSpec:
    """Full description of one Grover run."""

    n: int
    marked: str
    k_policy: KPolicy = KPolicy.PAPER
    mode: ExecMode = ExecMode.ITERATIVE
    backend: BackendKind = BackendKind.STATEVECTOR
    precision: Precision = Precision.DOUBLE
    chi_max: int = 64
    rel_cutoff: float | None = None
    seed: int = 0
    k_override: int | None = None

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInput(f"need at least one qubit, got n={self.n}")
        check_bitstring(self.marked, self.n)
        if self.chi_max < 1:
            raise InvalidInput(f"chi_max must be >= 1, got {self.chi_max}")
        if self.k_override is not None and self.k_override < 0:
            raise InvalidInput(f"k_override must be >= 0, got "
                               f"{self.k_override}")

    @property
    def k(self) -> int:
        if self.k_override is not None:
            return self.k_override
        return iteration_count(self.n, self.k_policy)


def build_grover_layer(spec: GroverSpec) -> list[GateOp]:
    """One amplification step: oracle flip, H-layer, zero reflection, H-layer."""
    h = hadamard(spec.precision)
    h_all: list[GateOp] = [SingleQubit(h, q) for q in range(spec.n)]
    return [PhaseFlipMarked(spec.marked), *h_all, ZeroReflection(), *h_all]


def build_prep(spec: GroverSpec) -> list[GateOp]:
    """Uniform superposition: one Hadamard per qubit."""
    h = hadamard(spec.precision)
    return [SingleQubit(h, q) for q in range(spec.n)]


@dataclass(frozen=True)
class GroverProgram:
    """Materialized op list plus the layout needed to find step boundaries."""

    ops: list[GateOp]
    prep_len: int
    layer_len: int
    layers_materialized: int

    @property
    def peak_program_ops(self) -> int:
        return len(self.ops)


def build_program(spec: GroverSpec) -> GroverProgram:
    prep = build_prep(spec)
    layer = build_grover_layer(spec)
    if spec.mode is ExecMode.COMMON:
        return GroverProgram(prep + layer * spec.k, len(prep), len(layer),
                             spec.k)
    return GroverProgram(prep + layer, len(prep), len(layer), 1)


@dataclass
class GroverResult:
    n: int
    marked: str
    k: int
    mode: ExecMode
    backend: BackendKind
    precision: Precision
    wall_time_seconds: float
    marked_amplitude: complex
    marked_probability: float
    predicted_probability: float
    peak_program_ops: int
    boundary_max_bond: int | None
    discarded_weight: float | None
    peak_tensor_entries: int | None
    state: object | None = field(default=None, repr=False)


def _zero_state(spec: GroverSpec):
    if spec.backend is BackendKind.STATEVECTOR:
        return StateVector.zero_state(spec.n, spec.precision)
    return MpsState.zero_state(spec.n, chi_max=spec.chi_max,
                               rel_cutoff=spec.rel_cutoff,
                               precision=spec.precision)


def run(spec: GroverSpec, keep_state: bool = False) -> GroverResult:
    """Execute one Grover run and report amplitudes plus resource stats.

    The wall time covers program construction, state preparation, and
    execution; readout and sampling are excluded.
    """
    k = spec.k
    is_mps = spec.backend is BackendKind.MPS
    boundary_max_bond = 0 if is_mps else None

    t0 = time.perf_counter()
    program = build_program(spec)
    state = _zero_state(spec)
    if spec.mode is ExecMode.COMMON:
        boundary = program.prep_len
        next_boundary = boundary + program.layer_len
        for i, op in enumerate(program.ops):
            state.apply_op(op)
            if is_mps and i + 1 == next_boundary:
                boundary_max_bond = max(boundary_max_bond,
                                        state.max_bond_dim)
                next_boundary += program.layer_len
    else:
        prep = program.ops[:program.prep_len]
        layer = program.ops[program.prep_len:]
        for op in prep:
            state.apply_op(op)
        for _ in range(k):
            for op in layer:
                state.apply_op(op)
            if is_mps:
                boundary_max_bond = max(boundary_max_bond,
                                        state.max_bond_dim)
    wall = time.perf_counter() - t0

    amp = state.amplitude_of(spec.marked)
    return GroverResult(
        n=spec.n,
        marked=spec.marked,
        k=k,
        mode=spec.mode,
        backend=spec.backend,
        precision=spec.precision,
        wall_time_seconds=wall,
        marked_amplitude=amp,
        marked_probability=abs(amp) ** 2,
        predicted_probability=predicted_success_probability(spec.n, k),
        peak_program_ops=program.peak_program_ops,
        boundary_max_bond=boundary_max_bond,
        discarded_weight=state.discarded_weight if is_mps else None,
        peak_tensor_entries=state.peak_tensor_entries if is_mps else None,
        state=state if keep_state else None,
    )
