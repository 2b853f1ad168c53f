"""Program operations understood by both backends.

A program is a flat list of these ops; backends dispatch on the type.
Qubit 0 is the most significant bit of a basis bitstring, so character q
of a bitstring addresses qubit q.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import InvalidInput
from .precision import Precision


@dataclass(frozen=True)
class SingleQubit:
    gate: np.ndarray
    site: int


@dataclass(frozen=True)
class TwoQubitAdjacent:
    gate: np.ndarray
    site: int  # acts on (site, site + 1)


@dataclass(frozen=True)
class PhaseFlipMarked:
    marked: str  # amplitude of this basis state is negated


@dataclass(frozen=True)
class ZeroReflection:
    """Negate every amplitude except the all-zeros basis state."""


GateOp = Union[SingleQubit, TwoQubitAdjacent, PhaseFlipMarked, ZeroReflection]

_GATE_CACHE: dict[tuple[str, Precision], np.ndarray] = {}


def _cached(name: str, precision: Precision, build) -> np.ndarray:
    key = (name, precision)
    if key not in _GATE_CACHE:
        m = build().astype(precision.complex_dtype)
        m.setflags(write=False)
        _GATE_CACHE[key] = m
    return _GATE_CACHE[key]


def hadamard(precision: Precision = Precision.DOUBLE) -> np.ndarray:
    return _cached("h", precision,
                   lambda: np.array([[1, 1], [1, -1]]) / np.sqrt(2.0))


def pauli_x(precision: Precision = Precision.DOUBLE) -> np.ndarray:
    return _cached("x", precision, lambda: np.array([[0, 1], [1, 0]]))


def pauli_z(precision: Precision = Precision.DOUBLE) -> np.ndarray:
    return _cached("z", precision, lambda: np.array([[1, 0], [0, -1]]))


def swap_gate(precision: Precision = Precision.DOUBLE) -> np.ndarray:
    return _cached("swap", precision,
                   lambda: np.eye(4)[[0, 2, 1, 3]])


def check_bitstring(bits: str, n: int) -> None:
    if len(bits) != n or any(c not in "01" for c in bits):
        raise InvalidInput(f"expected a bitstring of length {n}, got {bits!r}")


def basis_index(bits: str) -> int:
    """Basis-state index of a bitstring (qubit 0 = most significant bit)."""
    if not bits or any(c not in "01" for c in bits):
        raise InvalidInput(f"not a bitstring: {bits!r}")
    return int(bits, 2)
