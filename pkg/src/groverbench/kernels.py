"""Numba kernel for the dense statevector hot path.

fastmath stays off: the update must be bitwise reproducible across runs
and thread counts, which holds because every pair (i1, i2) is written by
exactly one iteration.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange


@njit(cache=True, parallel=True)
def apply_single_qubit_kernel(amps, g00, g01, g10, g11, m):  # pragma: no cover
    """In-place 2x2 gate on bit position m (counted from the LSB)."""
    tk = 1 << m
    half = amps.shape[0] >> 1
    for g in prange(half):
        i1 = ((g >> m) << (m + 1)) | (g & (tk - 1))
        i2 = i1 | tk
        a = amps[i1]
        b = amps[i2]
        amps[i1] = g00 * a + g01 * b
        amps[i2] = g10 * a + g11 * b


def warm_kernels() -> None:
    """Trigger JIT compilation for both precisions outside any timed region."""
    for dtype in (np.complex64, np.complex128):
        v = np.zeros(2, dtype=dtype)
        v[0] = 1.0
        one = dtype(1.0)
        zero = dtype(0.0)
        apply_single_qubit_kernel(v, zero, one, one, zero, 0)
