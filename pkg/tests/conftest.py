"""Shared dense-matrix reference helpers.

These build full 2^n x 2^n operators with plain numpy kron/matmul, giving
an oracle that is structurally independent from both backends.
"""

import functools

import numpy as np

H2 = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2.0)


def kron_all(mats):
    return functools.reduce(np.kron, mats)


def dense_single(gate, site, n):
    """Full-space matrix of a single-qubit gate (qubit 0 = MSB)."""
    mats = [np.eye(2, dtype=np.complex128)] * n
    mats[site] = gate.astype(np.complex128)
    return kron_all(mats)


def dense_two_adjacent(gate, site, n):
    """Full-space matrix of a two-qubit gate on (site, site+1)."""
    mats = ([np.eye(2, dtype=np.complex128)] * site
            + [gate.astype(np.complex128)]
            + [np.eye(2, dtype=np.complex128)] * (n - site - 2))
    return kron_all(mats)


def grover_matrix(n, marked_index):
    """G = D @ O with O = I - 2|m><m| and D = H^n (2|0><0| - I) H^n."""
    dim = 2 ** n
    oracle = np.eye(dim, dtype=np.complex128)
    oracle[marked_index, marked_index] = -1.0
    r0 = -np.eye(dim, dtype=np.complex128)
    r0[0, 0] = 1.0
    hn = kron_all([H2] * n)
    return hn @ r0 @ hn @ oracle


def uniform_state(n):
    dim = 2 ** n
    return np.full(dim, 1.0 / np.sqrt(dim), dtype=np.complex128)
