"""Dense statevector backend.

Holds all 2^n amplitudes explicitly; used as the exact reference for the
matrix product state backend and for runtime-scaling measurements.
"""

from __future__ import annotations

import os

import numpy as np
import psutil

from .errors import CapacityExceeded, InvalidInput, NumericalFailure
from .kernels import apply_single_qubit_kernel, warm_kernels
from .linalg import require_unitary
from .ops import (GateOp, PhaseFlipMarked, SingleQubit, TwoQubitAdjacent,
                  ZeroReflection, basis_index, check_bitstring)
from .precision import Precision

DEFAULT_QUBIT_CAP = 32
_CAP_ENV = "GROVERBENCH_SV_CAP"


def qubit_cap() -> int:
    raw = os.environ.get(_CAP_ENV)
    if raw is None:
        return DEFAULT_QUBIT_CAP
    try:
        return int(raw)
    except ValueError:
        raise InvalidInput(f"{_CAP_ENV} must be an integer, got {raw!r}") from None


def _fmt_bytes(num: float) -> str:
    for unit in ("B", "KiB", "MiB", "GiB", "TiB"):
        if num < 1024 or unit == "TiB":
            return f"{num:.1f} {unit}"
        num /= 1024
    return f"{num:.1f} TiB"


class StateVector:
    """2^n complex amplitudes; qubit 0 is the most significant index bit."""

    __slots__ = ("n", "precision", "amps")

    def __init__(self, n: int, precision: Precision, amps: np.ndarray):
        self.n = n
        self.precision = precision
        self.amps = amps

    @classmethod
    def zero_state(cls, n: int,
                   precision: Precision = Precision.DOUBLE) -> "StateVector":
        """|0...0> on n qubits, guarded by the qubit cap and available RAM."""
        cap = qubit_cap()
        if n < 1:
            raise InvalidInput(f"need at least one qubit, got n={n}")
        itemsize = precision.complex_dtype.itemsize
        needed = itemsize * (1 << max(n, 0))
        if n > cap:
            raise CapacityExceeded(
                f"n={n} exceeds the {cap}-qubit statevector cap "
                f"(would need {_fmt_bytes(needed)})")
        available = psutil.virtual_memory().available
        if needed > 0.8 * available:
            raise CapacityExceeded(
                f"n={n} statevector needs {_fmt_bytes(needed)} but only "
                f"{_fmt_bytes(available)} RAM is available")
        amps = np.zeros(1 << n, dtype=precision.complex_dtype)
        amps[0] = 1.0
        return cls(n, precision, amps)

    def copy(self) -> "StateVector":
        return StateVector(self.n, self.precision, self.amps.copy())

    def _check_site(self, site: int) -> None:
        if not 0 <= site < self.n:
            raise InvalidInput(f"qubit {site} out of range for n={self.n}")

    def apply_single_qubit(self, gate: np.ndarray, site: int) -> "StateVector":
        self._check_site(site)
        require_unitary(gate, 2, self.precision)
        m = self.n - 1 - site  # qubit 0 lives in the most significant bit
        apply_single_qubit_kernel(self.amps, gate[0, 0], gate[0, 1],
                                  gate[1, 0], gate[1, 1], m)
        return self

    def apply_two_qubit(self, gate: np.ndarray, site_a: int,
                        site_b: int) -> "StateVector":
        self._check_site(site_a)
        self._check_site(site_b)
        if site_a == site_b:
            raise InvalidInput("two-qubit gate needs two distinct qubits")
        require_unitary(gate, 4, self.precision)
        view = self.amps.reshape([2] * self.n)
        moved = np.moveaxis(view, (site_a, site_b), (0, 1))
        flat = gate @ moved.reshape(4, -1)
        restored = np.moveaxis(flat.reshape([2] * self.n), (0, 1),
                               (site_a, site_b))
        self.amps = np.ascontiguousarray(restored).reshape(-1)
        return self

    def apply_phase_flip(self, marked: str) -> "StateVector":
        check_bitstring(marked, self.n)
        idx = basis_index(marked)
        self.amps[idx] = -self.amps[idx]
        return self

    def apply_zero_reflection(self) -> "StateVector":
        np.negative(self.amps, out=self.amps)
        self.amps[0] = -self.amps[0]
        return self

    def apply_op(self, op: GateOp) -> "StateVector":
        if isinstance(op, SingleQubit):
            return self.apply_single_qubit(op.gate, op.site)
        if isinstance(op, TwoQubitAdjacent):
            return self.apply_two_qubit(op.gate, op.site, op.site + 1)
        if isinstance(op, PhaseFlipMarked):
            return self.apply_phase_flip(op.marked)
        if isinstance(op, ZeroReflection):
            return self.apply_zero_reflection()
        raise InvalidInput(f"unknown op type {type(op).__name__}")

    def amplitude_of(self, bits: str) -> complex:
        check_bitstring(bits, self.n)
        return complex(self.amps[basis_index(bits)])

    def norm_error(self) -> float:
        """|1 - sum |a|^2|, accumulated in double precision."""
        p = np.abs(self.amps.astype(np.complex128)) ** 2
        return abs(1.0 - float(p.sum()))

    def sample(self, shots: int, seed: int) -> dict[str, int]:
        """Draw measurement outcomes; returns {bitstring: count}, keys sorted."""
        if shots < 1:
            raise InvalidInput(f"shots must be >= 1, got {shots}")
        p = np.abs(self.amps.astype(np.complex128)) ** 2
        total = p.sum()
        if not np.isfinite(total) or total <= 0:
            raise NumericalFailure("state has no probability mass to sample")
        cdf = np.cumsum(p / total)
        cdf[-1] = 1.0
        rng = np.random.Generator(np.random.Philox(seed))
        draws = np.searchsorted(cdf, rng.random(shots), side="right")
        values, counts = np.unique(draws, return_counts=True)
        return {format(int(v), f"0{self.n}b"): int(c)
                for v, c in zip(values, counts)}


__all__ = ["StateVector", "DEFAULT_QUBIT_CAP", "qubit_cap", "warm_kernels"]
