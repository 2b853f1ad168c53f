"""Floating-point precision selection shared by both backends.

Mixing precisions is never silent: every function that accepts arrays checks
dtypes against the requested precision and raises instead of upcasting.
"""

from __future__ import annotations

import enum

import numpy as np

from .errors import InvalidInput


class Precision(enum.Enum):
    SINGLE = "f32"
    DOUBLE = "f64"

    @property
    def complex_dtype(self) -> np.dtype:
        return np.dtype(np.complex64 if self is Precision.SINGLE else np.complex128)

    @property
    def real_dtype(self) -> np.dtype:
        return np.dtype(np.float32 if self is Precision.SINGLE else np.float64)

    @property
    def eps(self) -> float:
        """Machine epsilon of the underlying real type."""
        return float(np.finfo(self.real_dtype).eps)

    @property
    def default_rel_cutoff(self) -> float:
        """Default relative singular-value cutoff for truncation."""
        return 1e-6 if self is Precision.SINGLE else 1e-12

    @property
    def csv_digits(self) -> int:
        """Significant digits that round-trip exactly for this precision."""
        return 9 if self is Precision.SINGLE else 17

    @classmethod
    def parse(cls, label: str) -> "Precision":
        for member in cls:
            if member.value == label:
                return member
        raise InvalidInput(f"unknown precision {label!r}; expected one of "
                           f"{[m.value for m in cls]}")

    @classmethod
    def of(cls, array: np.ndarray) -> "Precision":
        if array.dtype == np.complex64:
            return cls.SINGLE
        if array.dtype == np.complex128:
            return cls.DOUBLE
        raise InvalidInput(f"array dtype {array.dtype} is not complex64/complex128")
