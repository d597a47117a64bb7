"""Matrix product states: SVD decomposition, contraction and bond analysis.

Site tensors are stored as arrays of shape ``(2, chi_left, chi_right)`` so
that ``tensor[sigma]`` is the matrix ``A^sigma``.  Site 0 carries the most
significant bit.  Amplitude ``psi(s_0 ... s_{n-1}) = A_0^{s_0} ... A_{n-1}^{s_{n-1}}``.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .grid import Grid1D, Grid3D, Ordering
from .orbitals import SampledState

#: Largest state handled by dense routines (2**24 amplitudes).
DENSE_QUBIT_LIMIT = 24

_MAGIC = b"SMPS"


class ResourceLimitError(RuntimeError):
    """A dense operation would exceed the documented memory ceiling."""


@dataclass(frozen=True)
class Mps:
    """Unit-norm MPS plus the discrete L2 norm of the function it encodes."""

    tensors: list[np.ndarray]
    norm: float = 1.0
    threshold: float = 0.0
    truncation_weight: float = 0.0
    canonical: str = "right"

    @property
    def n_sites(self) -> int:
        return len(self.tensors)

    @property
    def bond_dims(self) -> list[int]:
        """``chi_0 ... chi_n`` including the trivial boundary bonds."""
        return [self.tensors[0].shape[1]] + [t.shape[2] for t in self.tensors]

    @property
    def chi_max(self) -> int:
        return max(self.bond_dims)

    @property
    def is_right_canonical(self) -> bool:
        return self.canonical == "right"

    def canonical_error(self) -> float:
        """Largest deviation from ``sum_s A^s (A^s)^H = I`` over all sites."""
        err = 0.0
        for t in self.tensors:
            gram = np.einsum("sab,scb->ac", t, t.conj())
            err = max(err, float(np.max(np.abs(gram - np.eye(gram.shape[0])))))
        return err

    def summary(self) -> dict:
        return {
            "n_sites": self.n_sites,
            "bond_dims": self.bond_dims,
            "chi_max": self.chi_max,
            "threshold": self.threshold,
            "norm": self.norm,
            "truncation_weight": self.truncation_weight,
            "canonical": self.canonical,
        }


@dataclass(frozen=True)
class BondProfile:
    dims: list[int]
    max_dim: int
    boundary_dims: dict[str, int] = field(default_factory=dict)


def _check_dense(n: int) -> None:
    if n > DENSE_QUBIT_LIMIT:
        raise ResourceLimitError(
            f"{n} qubits exceeds the dense ceiling of {DENSE_QUBIT_LIMIT} qubits "
            f"(2**{DENSE_QUBIT_LIMIT} amplitudes)"
        )


def decompose(state: SampledState | np.ndarray, threshold: float = 1e-12) -> Mps:
    """Right-canonical MPS by sequential SVD from the least significant bit.

    Singular values strictly below ``threshold`` are dropped (absolute cut on
    the unit-norm state; a value equal to the threshold is kept).  The kept
    spectrum is renormalized at every step and the discarded squared weight is
    accumulated in ``truncation_weight``.
    """
    if threshold < 0:
        raise ValueError("threshold must be non-negative")
    if isinstance(state, SampledState):
        vec, norm = state.amplitudes, state.norm
    else:
        vec, norm = np.asarray(state), 1.0
    size = vec.size
    n = size.bit_length() - 1
    if n < 1 or size != 1 << n:
        raise ValueError(f"state length {size} is not a power of two >= 2")
    _check_dense(n)
    if abs(np.linalg.norm(vec) - 1.0) > 1e-10:
        raise ValueError("decompose expects a unit-norm state vector")

    tensors: list[np.ndarray] = [None] * n  # type: ignore[list-item]
    discarded = 0.0
    chi_right = 1
    mat = vec.reshape(size // 2, 2)
    for site in range(n - 1, 0, -1):
        u, s, vh = np.linalg.svd(mat, full_matrices=False)
        keep = max(1, int(np.count_nonzero(s >= threshold)))
        discarded += float(np.sum(s[keep:] ** 2))
        s = s[:keep]
        s = s / np.linalg.norm(s)
        tensors[site] = vh[:keep].reshape(keep, 2, chi_right).transpose(1, 0, 2)
        chi_right = keep
        mat = (u[:, :keep] * s).reshape(-1, 2 * keep)
    tensors[0] = mat.reshape(1, 2, chi_right).transpose(1, 0, 2)
    return Mps(tensors, float(norm), float(threshold), discarded, "right")


def reconstruct(mps: Mps) -> np.ndarray:
    """Dense amplitude vector of a (unit-norm) MPS."""
    _check_dense(mps.n_sites)
    out = mps.tensors[0][:, 0, :]
    for t in mps.tensors[1:]:
        out = np.einsum("ab,sbc->asc", out, t).reshape(-1, t.shape[2])
    return out.reshape(-1)


def inner_product(a: Mps, b: Mps) -> float:
    """``<a|b>`` by zipper contraction of the two chains."""
    if a.n_sites != b.n_sites:
        raise ValueError(f"site count mismatch: {a.n_sites} vs {b.n_sites}")
    env = np.ones((1, 1))
    for ta, tb in zip(a.tensors, b.tensors):
        env = np.einsum("ab,sac,sbd->cd", env, ta.conj(), tb)
    val = env[0, 0]
    return float(val.real) if np.isrealobj(val) or abs(val.imag) < 1e-14 else complex(val)


def bond_profile(mps: Mps, grid: Grid1D | Grid3D | None = None) -> BondProfile:
    """Internal bond dimensions plus register-boundary values for grouped 3D grids."""
    dims = mps.bond_dims[1:-1]
    boundary: dict[str, int] = {}
    if isinstance(grid, Grid3D) and grid.ordering is Ordering.GROUPED:
        n = grid.n_qubits
        boundary = {"xy": mps.bond_dims[n], "yz": mps.bond_dims[2 * n]}
    return BondProfile(dims, max(dims) if dims else 1, boundary)


def schmidt_rank(state: np.ndarray, cut: int, threshold: float = 1e-12) -> int:
    """Number of singular values ``>= threshold`` across the bipartition after ``cut`` qubits."""
    state = np.asarray(state)
    n = state.size.bit_length() - 1
    if not 0 < cut < n:
        raise ValueError(f"cut must lie in (0, {n})")
    s = np.linalg.svd(state.reshape(1 << cut, -1), compute_uv=False)
    return int(np.count_nonzero(s >= threshold))


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def to_json_summary(mps: Mps) -> str:
    return json.dumps(mps.summary())


def write_binary(mps: Mps, path: str | Path) -> None:
    """Container: magic, site count, threshold, norm, truncation weight, then
    per site ``(chi_left, chi_right)`` and row-major float64 data of shape
    ``(2, chi_left, chi_right)``."""
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<Iddd", mps.n_sites, mps.threshold, mps.norm, mps.truncation_weight))
        for t in mps.tensors:
            if np.iscomplexobj(t):
                raise TypeError("binary container stores real tensors only")
            fh.write(struct.pack("<II", t.shape[1], t.shape[2]))
            fh.write(np.ascontiguousarray(t, dtype="<f8").tobytes())


def read_binary(path: str | Path) -> Mps:
    data = Path(path).read_bytes()
    if data[:4] != _MAGIC:
        raise ValueError("not an MPS container")
    off = 4
    n, threshold, norm, weight = struct.unpack_from("<Iddd", data, off)
    off += struct.calcsize("<Iddd")
    tensors = []
    for _ in range(n):
        dl, dr = struct.unpack_from("<II", data, off)
        off += 8
        count = 2 * dl * dr
        t = np.frombuffer(data, dtype="<f8", count=count, offset=off).reshape(2, dl, dr)
        off += 8 * count
        tensors.append(t.copy())
    return Mps(tensors, norm, threshold, weight, "right")
