"""Matrix product state backend.

Site tensors have shape (left_bond, 2, right_bond); qubit 0 is the leftmost
site and the most significant bit of a basis bitstring.  The state keeps a
mixed-canonical gauge: sites left of the center are left-isometric, sites
right of it right-isometric.  Truncation only ever happens on a bond whose
environment is isometric, so the discarded weight is exactly the lost
squared Schmidt norm.
"""

from __future__ import annotations

import functools
import logging

import numpy as np

from .errors import CapacityExceeded, InvalidInput, NumericalFailure
from .linalg import require_unitary, svd, truncate_spectrum
from .ops import (GateOp, PhaseFlipMarked, SingleQubit, TwoQubitAdjacent,
                  ZeroReflection, check_bitstring, swap_gate)
from .precision import Precision
from .statevector import StateVector

logger = logging.getLogger(__name__)

TO_STATEVECTOR_CAP = 20


class DiagonalMpo:
    """Operator that is diagonal in the computational basis, in MPO form.

    Cores store only the physical diagonal: core[a, p, b] is the (a, b)
    bond block for physical value p.  Contracting against any basis state
    therefore yields a scalar phase.
    """

    __slots__ = ("cores", "precision")

    def __init__(self, cores: list[np.ndarray], precision: Precision):
        self.cores = cores
        self.precision = precision

    @property
    def n(self) -> int:
        return len(self.cores)

    @property
    def bond_dims(self) -> list[int]:
        return [int(c.shape[2]) for c in self.cores[:-1]]

    @classmethod
    def phase_flip(cls, marked: str, precision: Precision) -> "DiagonalMpo":
        """I - 2|marked><marked| as a bond-2 MPO (bond-1 for n = 1)."""
        return _phase_flip_cached(marked, precision)

    @classmethod
    def zero_reflection(cls, n: int, precision: Precision) -> "DiagonalMpo":
        """-I + 2|0...0><0...0| as a bond-2 MPO (bond-1 for n = 1)."""
        return _zero_reflection_cached(n, precision)

    def phase_on_basis(self, bits: str) -> complex:
        """Scalar the operator multiplies this basis state by."""
        check_bitstring(bits, self.n)
        v = np.ones(1, dtype=self.cores[0].dtype)
        for core, c in zip(self.cores, bits):
            v = v @ core[:, int(c), :]
        return complex(v[0])


def _freeze(arrays: list[np.ndarray]) -> list[np.ndarray]:
    for a in arrays:
        a.setflags(write=False)
    return arrays


@functools.lru_cache(maxsize=128)
def _phase_flip_cached(marked: str, precision: Precision) -> DiagonalMpo:
    check_bitstring(marked, len(marked))
    n = len(marked)
    dt = precision.complex_dtype
    if n == 1:
        core = np.ones((1, 2, 1), dtype=dt)
        core[0, int(marked[0]), 0] = -1.0
        return DiagonalMpo(_freeze([core]), precision)
    first = np.zeros((1, 2, 2), dtype=dt)
    first[0, :, 0] = 1.0
    first[0, int(marked[0]), 1] = -2.0
    cores = [first]
    for c in marked[1:-1]:
        mid = np.zeros((2, 2, 2), dtype=dt)
        mid[0, :, 0] = 1.0
        mid[1, int(c), 1] = 1.0
        cores.append(mid)
    last = np.zeros((2, 2, 1), dtype=dt)
    last[0, :, 0] = 1.0
    last[1, int(marked[-1]), 0] = 1.0
    cores.append(last)
    return DiagonalMpo(_freeze(cores), precision)


@functools.lru_cache(maxsize=64)
def _zero_reflection_cached(n: int, precision: Precision) -> DiagonalMpo:
    if n < 1:
        raise InvalidInput(f"need at least one qubit, got n={n}")
    dt = precision.complex_dtype
    if n == 1:
        core = np.zeros((1, 2, 1), dtype=dt)
        core[0, 0, 0] = 1.0
        core[0, 1, 0] = -1.0
        return DiagonalMpo(_freeze([core]), precision)
    first = np.zeros((1, 2, 2), dtype=dt)
    first[0, :, 0] = -1.0
    first[0, 0, 1] = 2.0
    cores = [first]
    for _ in range(n - 2):
        mid = np.zeros((2, 2, 2), dtype=dt)
        mid[0, :, 0] = 1.0
        mid[1, 0, 1] = 1.0
        cores.append(mid)
    last = np.zeros((2, 2, 1), dtype=dt)
    last[0, :, 0] = 1.0
    last[1, 0, 0] = 1.0
    cores.append(last)
    return DiagonalMpo(_freeze(cores), precision)


class MpsState:
    """Mixed-canonical matrix product state with a hard bond cap."""

    __slots__ = ("n", "chi_max", "rel_cutoff", "precision", "renormalize",
                 "sites", "canonical_center", "discarded_weight",
                 "peak_tensor_entries")

    def __init__(self, n: int, chi_max: int, rel_cutoff: float,
                 precision: Precision, renormalize: bool,
                 sites: list[np.ndarray], canonical_center: int | None):
        self.n = n
        self.chi_max = chi_max
        self.rel_cutoff = rel_cutoff
        self.precision = precision
        self.renormalize = renormalize
        self.sites = sites
        self.canonical_center = canonical_center
        self.discarded_weight = 0.0
        self.peak_tensor_entries = sum(t.size for t in sites)

    @classmethod
    def zero_state(cls, n: int, chi_max: int = 64,
                   rel_cutoff: float | None = None,
                   precision: Precision = Precision.DOUBLE,
                   renormalize: bool = False) -> "MpsState":
        if n < 1:
            raise InvalidInput(f"need at least one qubit, got n={n}")
        if chi_max < 1:
            raise InvalidInput(f"chi_max must be >= 1, got {chi_max}")
        if rel_cutoff is None:
            rel_cutoff = precision.default_rel_cutoff
        sites = []
        for _ in range(n):
            t = np.zeros((1, 2, 1), dtype=precision.complex_dtype)
            t[0, 0, 0] = 1.0
            sites.append(t)
        # A product state is isometric from both sides, so center 0 is valid.
        return cls(n, chi_max, rel_cutoff, precision, renormalize, sites, 0)

    # -- bookkeeping ------------------------------------------------------

    @property
    def bond_dims(self) -> list[int]:
        return [int(t.shape[2]) for t in self.sites[:-1]]

    @property
    def max_bond_dim(self) -> int:
        dims = self.bond_dims
        return max(dims) if dims else 1

    def _bump(self, transient: int = 0) -> None:
        cur = sum(t.size for t in self.sites) + transient
        if cur > self.peak_tensor_entries:
            self.peak_tensor_entries = cur

    def _check_site(self, site: int) -> None:
        if not 0 <= site < self.n:
            raise InvalidInput(f"site {site} out of range for n={self.n}")

    # -- canonical form ---------------------------------------------------

    def _left_isometrize(self, start: int, stop: int) -> None:
        """QR sweep making sites [start, stop) left-isometric."""
        for i in range(start, stop):
            t = self.sites[i]
            l, _, r = t.shape
            q, carry = np.linalg.qr(t.reshape(l * 2, r))
            self.sites[i] = q.reshape(l, 2, q.shape[1])
            self.sites[i + 1] = np.einsum("ab,bpr->apr", carry,
                                          self.sites[i + 1])
            self._bump()

    def _right_isometrize(self, start: int, stop: int) -> None:
        """LQ sweep making sites (stop, start] right-isometric."""
        for i in range(start, stop, -1):
            t = self.sites[i]
            l, _, r = t.shape
            # LQ via QR of the conjugate transpose: M = (R†)(Q†).
            q, carry = np.linalg.qr(t.reshape(l, 2 * r).conj().T)
            self.sites[i] = q.conj().T.reshape(q.shape[1], 2, r)
            self.sites[i - 1] = np.einsum("lpa,ab->lpb", self.sites[i - 1],
                                          carry.conj().T)
            self._bump()

    def canonicalize(self, center: int) -> "MpsState":
        """Move (or establish) the canonical center."""
        self._check_site(center)
        if self.canonical_center is None:
            self._left_isometrize(0, center)
            self._right_isometrize(self.n - 1, center)
        elif self.canonical_center < center:
            self._left_isometrize(self.canonical_center, center)
        elif self.canonical_center > center:
            self._right_isometrize(self.canonical_center, center)
        self.canonical_center = center
        return self

    def canonical_defect(self) -> float:
        """Largest isometry violation over all non-center sites."""
        if self.canonical_center is None:
            raise InvalidInput("state has no canonical center")
        worst = 0.0
        for i, t in enumerate(self.sites):
            l, _, r = t.shape
            if i < self.canonical_center:
                m = t.reshape(l * 2, r)
                g = m.conj().T @ m - np.eye(r, dtype=t.dtype)
            elif i > self.canonical_center:
                m = t.reshape(l, 2 * r)
                g = m @ m.conj().T - np.eye(l, dtype=t.dtype)
            else:
                continue
            worst = max(worst, float(np.abs(g).max()))
        return worst

    # -- truncation -------------------------------------------------------

    def _split_center(self, theta: np.ndarray, site: int) -> None:
        """SVD-split a two-site center block back into sites (site, site+1)."""
        l = theta.shape[0]
        r = theta.shape[3]
        tr = truncate_spectrum(svd(theta.reshape(l * 2, 2 * r)),
                               self.chi_max, self.rel_cutoff)
        self.discarded_weight += tr.discarded_weight
        u, s, vh = tr.svd.u, tr.svd.s, tr.svd.vh
        if self.renormalize and tr.discarded_weight > 0.0:
            scale = float(np.linalg.norm(s.astype(np.float64)))
            if scale > 0.0:
                s = s / s.dtype.type(scale)
                logger.debug("renormalized after truncation at bond %d "
                             "(factor %.6e)", site, scale)
        chi = tr.svd.chi
        self.sites[site] = u.reshape(l, 2, chi)
        self.sites[site + 1] = (s[:, None] * vh).reshape(chi, 2, r)
        self.canonical_center = site + 1

    def compress(self) -> "MpsState":
        """Re-canonicalize and truncate every bond to the configured cap."""
        self.canonical_center = None
        self.canonicalize(0)
        for i in range(self.n - 1):
            t = self.sites[i]
            l, _, r = t.shape
            tr = truncate_spectrum(svd(t.reshape(l * 2, r)),
                                   self.chi_max, self.rel_cutoff)
            self.discarded_weight += tr.discarded_weight
            u, s, vh = tr.svd.u, tr.svd.s, tr.svd.vh
            if self.renormalize and tr.discarded_weight > 0.0:
                scale = float(np.linalg.norm(s.astype(np.float64)))
                if scale > 0.0:
                    s = s / s.dtype.type(scale)
                    logger.debug("renormalized after truncation at bond %d "
                                 "(factor %.6e)", i, scale)
            self.sites[i] = u.reshape(l, 2, tr.svd.chi)
            carry = s[:, None] * vh
            self.sites[i + 1] = np.einsum("ab,bpr->apr", carry,
                                          self.sites[i + 1])
            self._bump()
        self.canonical_center = self.n - 1
        return self

    # -- gates ------------------------------------------------------------

    def apply_single_qubit(self, gate: np.ndarray, site: int) -> "MpsState":
        self._check_site(site)
        require_unitary(gate, 2, self.precision)
        self.sites[site] = np.einsum("ab,lbr->lar", gate, self.sites[site])
        # A unitary on the physical leg preserves both isometry directions,
        # so the canonical center is unchanged.
        return self

    def apply_two_qubit_adjacent(self, gate: np.ndarray,
                                 site: int) -> "MpsState":
        if not 0 <= site < self.n - 1:
            raise InvalidInput(f"adjacent pair ({site}, {site + 1}) out of "
                               f"range for n={self.n}")
        require_unitary(gate, 4, self.precision)
        self.canonicalize(site)
        theta = np.einsum("lps,sqr->lpqr", self.sites[site],
                          self.sites[site + 1])
        self._bump(theta.size)
        g4 = gate.reshape(2, 2, 2, 2)
        theta = np.einsum("abcd,lcdr->labr", g4, theta)
        self._split_center(theta, site)
        self._bump()
        return self

    def apply_two_qubit(self, gate: np.ndarray, site_a: int,
                        site_b: int) -> "MpsState":
        """General two-qubit gate; non-adjacent pairs go via swap chains."""
        self._check_site(site_a)
        self._check_site(site_b)
        if site_a == site_b:
            raise InvalidInput("two-qubit gate needs two distinct sites")
        if site_a > site_b:
            sw = swap_gate(self.precision)
            gate = sw @ gate @ sw
            site_a, site_b = site_b, site_a
        if site_b == site_a + 1:
            return self.apply_two_qubit_adjacent(gate, site_a)
        sw = swap_gate(self.precision)
        for j in range(site_b - 1, site_a, -1):
            self.apply_two_qubit_adjacent(sw, j)
        self.apply_two_qubit_adjacent(gate, site_a)
        for j in range(site_a + 1, site_b):
            self.apply_two_qubit_adjacent(sw, j)
        return self

    def apply_diagonal_mpo(self, mpo: DiagonalMpo) -> "MpsState":
        if mpo.n != self.n:
            raise InvalidInput(f"operator has {mpo.n} sites, state has "
                               f"{self.n}")
        if mpo.precision is not self.precision:
            raise InvalidInput(f"operator precision {mpo.precision.value} "
                               f"does not match state precision "
                               f"{self.precision.value}")
        for i, core in enumerate(mpo.cores):
            t = self.sites[i]
            l, _, r = t.shape
            dl, _, dr = core.shape
            big = np.einsum("apb,lpr->alpbr", core, t)
            self.sites[i] = np.ascontiguousarray(big).reshape(dl * l, 2,
                                                              dr * r)
        self.canonical_center = None
        self._bump()
        return self.compress()

    def apply_op(self, op: GateOp) -> "MpsState":
        if isinstance(op, SingleQubit):
            return self.apply_single_qubit(op.gate, op.site)
        if isinstance(op, TwoQubitAdjacent):
            return self.apply_two_qubit_adjacent(op.gate, op.site)
        if isinstance(op, PhaseFlipMarked):
            return self.apply_diagonal_mpo(
                DiagonalMpo.phase_flip(op.marked, self.precision))
        if isinstance(op, ZeroReflection):
            return self.apply_diagonal_mpo(
                DiagonalMpo.zero_reflection(self.n, self.precision))
        raise InvalidInput(f"unknown op type {type(op).__name__}")

    # -- readout ----------------------------------------------------------

    def amplitude_of(self, bits: str) -> complex:
        check_bitstring(bits, self.n)
        v = np.ones(1, dtype=self.precision.complex_dtype)
        for t, c in zip(self.sites, bits):
            v = v @ t[:, int(c), :]
        return complex(v[0])

    def norm(self) -> float:
        """Exact <psi|psi>^(1/2) by transfer-matrix contraction in f64."""
        env = np.ones((1, 1), dtype=np.complex128)
        for t in self.sites:
            t64 = t.astype(np.complex128)
            env = np.einsum("ab,apr,bps->rs", env, t64.conj(), t64)
        return float(np.sqrt(abs(env[0, 0])))

    def to_statevector(self) -> StateVector:
        """Contract into a dense statevector (guarded for small n only)."""
        if self.n > TO_STATEVECTOR_CAP:
            raise CapacityExceeded(
                f"refusing to densify n={self.n} > {TO_STATEVECTOR_CAP} qubits")
        acc = np.ones((1, 1), dtype=self.precision.complex_dtype)
        for t in self.sites:
            acc = np.einsum("dl,lpr->dpr", acc, t)
            acc = acc.reshape(acc.shape[0] * 2, acc.shape[2])
        return StateVector(self.n, self.precision, acc.reshape(-1))

    def sample(self, shots: int, seed: int) -> dict[str, int]:
        """Perfect sampling by conditional sweeps; no dense statevector.

        All shots advance together: one (shots x bond) matrix of conditional
        boundary vectors is propagated site by site.
        """
        if shots < 1:
            raise InvalidInput(f"shots must be >= 1, got {shots}")
        self.canonicalize(0)
        rng = np.random.Generator(np.random.Philox(seed))
        us = rng.random((shots, self.n))
        vec = np.ones((shots, 1), dtype=np.complex128)
        outcomes = np.zeros(shots, dtype=np.int64)
        for i, t in enumerate(self.sites):
            t64 = t.astype(np.complex128)
            a0 = vec @ t64[:, 0, :]
            a1 = vec @ t64[:, 1, :]
            w0 = np.einsum("sr,sr->s", a0.conj(), a0).real
            w1 = np.einsum("sr,sr->s", a1.conj(), a1).real
            denom = w0 + w1
            if not np.all(denom > 0):
                raise NumericalFailure("sampling hit a zero-probability branch")
            ones = us[:, i] >= (w0 / denom)
            vec = np.where(ones[:, None], a1, a0)
            norms = np.sqrt(np.where(ones, w1, w0))
            vec = vec / norms[:, None]
            outcomes = (outcomes << 1) | ones.astype(np.int64)
        values, counts = np.unique(outcomes, return_counts=True)
        return {format(int(v), f"0{self.n}b"): int(c)
                for v, c in zip(values, counts)}
