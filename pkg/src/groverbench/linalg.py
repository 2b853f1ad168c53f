"""Dense complex linear algebra used by the matrix product state backend.

The SVD itself is delegated to LAPACK via numpy; this module owns the
contracts around it: input validation, error mapping, and the truncation
rule that decides which singular values survive a bond-dimension cap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvalidGate, InvalidInput, NumericalFailure
from .precision import Precision


@dataclass(frozen=True)
class SvdResult:
    """Factorization a = (u * s) @ vh with s sorted in descending order."""

    u: np.ndarray
    s: np.ndarray
    vh: np.ndarray

    @property
    def chi(self) -> int:
        return int(self.s.shape[0])

    def reconstruct(self) -> np.ndarray:
        return (self.u * self.s) @ self.vh


class TruncationResult(NamedTuple):
    svd: SvdResult
    discarded_weight: float
    degenerate: bool


def svd(a: np.ndarray) -> SvdResult:
    """Thin SVD of a 2-D complex matrix.

    Raises InvalidInput for malformed or non-finite input and
    NumericalFailure if the underlying solver does not converge.
    """
    if not isinstance(a, np.ndarray) or a.ndim != 2:
        raise InvalidInput("svd expects a 2-D ndarray")
    Precision.of(a)
    if not np.isfinite(a).all():
        raise InvalidInput("svd input contains non-finite entries")
    try:
        u, s, vh = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc
    return SvdResult(u, s, vh)


def truncate_spectrum(result: SvdResult, chi_max: int,
                      rel_cutoff: float) -> TruncationResult:
    """Apply a bond cap and relative cutoff to an SVD.

    Singular values at or below rel_cutoff * s[0] are treated as numerical
    zeros and dropped silently; the discarded weight reports only genuine
    (above-cutoff) values removed by the chi_max cap, as a fraction of the
    total spectrum weight.  A spectrum with no positive values keeps chi=1
    and sets the degenerate flag.
    """
    if chi_max < 1:
        raise InvalidInput(f"chi_max must be >= 1, got {chi_max}")
    if not 0.0 <= rel_cutoff < 1.0:
        raise InvalidInput(f"rel_cutoff must lie in [0, 1), got {rel_cutoff}")
    s = result.s
    if s.size == 0:
        raise InvalidInput("cannot truncate an empty spectrum")
    if np.any(np.diff(s) > 0) or s[-1] < 0:
        raise InvalidInput("singular values must be non-negative and sorted "
                           "in descending order")

    s64 = s.astype(np.float64)
    total = float(s64 @ s64)
    if s64[0] == 0.0:
        kept = SvdResult(result.u[:, :1], s[:1], result.vh[:1])
        return TruncationResult(kept, 0.0, True)

    n_above = int(np.sum(s64 > rel_cutoff * s64[0]))
    chi = min(chi_max, n_above)
    dropped = s64[chi:n_above]
    weight = float(dropped @ dropped / total)
    kept = SvdResult(result.u[:, :chi], s[:chi], result.vh[:chi])
    return TruncationResult(kept, weight, False)


def max_unitary_defect(m: np.ndarray) -> float:
    """Largest absolute entry of m†m - I."""
    eye = np.eye(m.shape[0], dtype=m.dtype)
    return float(np.abs(m.conj().T @ m - eye).max())


def require_unitary(m: np.ndarray, dim: int, precision: Precision,
                    label: str = "gate") -> None:
    """Reject matrices that are the wrong shape/dtype or not unitary.

    The unitarity tolerance is 8 machine epsilons of the working precision.
    """
    if not isinstance(m, np.ndarray) or m.shape != (dim, dim):
        raise InvalidGate(f"{label} must be a {dim}x{dim} ndarray")
    if m.dtype != precision.complex_dtype:
        raise InvalidGate(f"{label} dtype {m.dtype} does not match working "
                          f"precision {precision.value}; cast explicitly")
    if not np.isfinite(m).all():
        raise InvalidGate(f"{label} contains non-finite entries")
    defect = max_unitary_defect(m)
    if defect > 8 * precision.eps:
        raise InvalidGate(f"{label} is not unitary within 8*eps "
                          f"(defect {defect:.3e})")


def haar_unitary(dim: int, rng: np.random.Generator,
                 precision: Precision = Precision.DOUBLE) -> np.ndarray:
    """Haar-distributed random unitary (QR of a complex Gaussian matrix)."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    return q.astype(precision.complex_dtype)
