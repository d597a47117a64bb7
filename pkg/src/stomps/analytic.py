"""Closed-form MPS builders for 1D orbital functions.

Every builder works from the orbital parameters and the bit weights of the
grid only.  Each bit ``k`` (MSB first) contributes ``p_k = 2**(n-1-k) * dx`` to
the coordinate, so an exponential factorizes over bits and a polynomial in
``x`` is carried by a small upper-triangular transfer matrix.  Nothing here
touches ``2**n``-sized data.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .grid import Grid1D
from .mps import Mps


@dataclass(frozen=True)
class TransferMatrixFamily:
    """Raw (non-isometric) transfer matrices for a 1D function.

    ``f(x_j) = left @ A_0^{s_0} @ ... @ A_{n-1}^{s_{n-1}} @ right`` where
    ``matrices[k] = (A_k^0, A_k^1)``.
    """

    matrices: list[tuple[np.ndarray, np.ndarray]]
    left: np.ndarray
    right: np.ndarray

    @property
    def chi(self) -> int:
        return self.left.size

    @property
    def degree(self) -> int:
        return self.chi - 1

    def site_tensors(self) -> list[np.ndarray]:
        """Stacked ``(2, chi_l, chi_r)`` tensors with the boundaries absorbed."""
        out = [np.stack(pair) for pair in self.matrices]
        out[0] = np.einsum("a,sab->sb", self.left, out[0])[:, None, :]
        out[-1] = np.einsum("sab,b->sa", out[-1], self.right)[:, :, None]
        return out

    def value(self, bits) -> float:
        v = self.left
        for (a0, a1), s in zip(self.matrices, bits):
            v = v @ (a1 if s else a0)
        return float(v @ self.right)


def _binomial_shift(degree: int, step: float) -> np.ndarray:
    """Upper-triangular ``B[i, j] = C(j, i) step**(j-i)`` mapping ``x**i`` to ``(x+step)**j``."""
    b = np.zeros((degree + 1, degree + 1))
    for i in range(degree + 1):
        for j in range(i, degree + 1):
            b[i, j] = comb(j, i) * step ** (j - i)
    return b


def poly_exp_family(
    coeffs, zeta: float, grid: Grid1D, shift: float = 0.0
) -> TransferMatrixFamily:
    """``sum_m coeffs[m] * t**m * exp(-zeta * t)`` with ``t = x - shift``.

    The bond carries the running powers ``(1, t, t**2, ...)``, so the bond
    dimension is ``len(coeffs)``.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    d = coeffs.size - 1
    t0 = grid.origin - shift
    eye = np.eye(d + 1)
    mats = [(eye, np.exp(-zeta * p) * _binomial_shift(d, p)) for p in grid.bit_weights()]
    left = np.array([t0**m for m in range(d + 1)])
    right = coeffs * np.exp(-zeta * t0)
    return TransferMatrixFamily(mats, left, right)


def exp_family(zeta: float, grid: Grid1D, shift: float = 0.0) -> TransferMatrixFamily:
    return poly_exp_family([1.0], zeta, grid, shift)


def sto2s_family(zeta: float, grid: Grid1D) -> TransferMatrixFamily:
    """``x exp(-zeta x)`` with the ``[[1, p_k], [0, 1]]`` transfer matrices."""
    return poly_exp_family([0.0, 1.0], zeta, grid)


def h2s_family(a: float, grid: Grid1D) -> TransferMatrixFamily:
    """``(2 - r/a) exp(-r/2a)`` as the direct sum of a constant and a linear term.

    The block structure keeps three bond states: boundary ``(2, 1, 0)`` and
    ``(1, 0, 1)^T`` with ``A^1 = e_k [[1,0,0],[0,1,-p_k/a],[0,0,1]]``.
    This is deliberately non-minimal; the function itself has Schmidt rank 2.
    """
    if grid.origin != 0.0:
        raise ValueError("radial families assume a grid starting at r = 0")
    eye = np.eye(3)
    mats = []
    for p in grid.bit_weights():
        a1 = np.eye(3)
        a1[1, 2] = -p / a
        mats.append((eye, np.exp(-p / (2 * a)) * a1))
    return TransferMatrixFamily(mats, np.array([2.0, 1.0, 0.0]), np.array([1.0, 0.0, 1.0]))


def h2s_jacobian_family(a: float, grid: Grid1D) -> TransferMatrixFamily:
    """``r (2 - r/a) exp(-r/2a)``: running ``(1, r, r**2)`` with right boundary ``(0, 2, -1/a)``."""
    if grid.origin != 0.0:
        raise ValueError("radial families assume a grid starting at r = 0")
    fam = poly_exp_family([0.0, 2.0, -1.0 / a], 1.0 / (2 * a), grid)
    return fam


def sto1s_family(
    zeta: float, center: float, grid: Grid1D, derivative: bool = False
) -> TransferMatrixFamily:
    """Piecewise exponential ``exp(-zeta |x - center|)`` via a bitwise comparator.

    Points ``x_j < center`` follow the rising branch, the rest the decaying
    one.  Reading bits MSB first, bond state 0 means "prefix equal to the
    split index so far", 1 the rising branch and 2 the decaying branch.  With
    ``derivative=True`` the branches carry ``+zeta`` and ``-zeta``.
    """
    n = grid.n_qubits
    size = grid.size
    split = _split_index(center, grid)
    rise_scale, fall_scale = (zeta, -zeta) if derivative else (1.0, 1.0)
    t0 = grid.origin - center
    if split == 0 or split == size:
        rising = split == size
        fam = exp_family(-zeta if rising else zeta, grid, shift=center)
        scale = rise_scale if rising else fall_scale
        return TransferMatrixFamily(fam.matrices, fam.left, fam.right * scale)

    weights = grid.bit_weights()
    split_bits = [(split >> (n - 1 - k)) & 1 for k in range(n)]
    mats = []
    prefix = 0.0
    for p, c in zip(weights, split_bits):
        a0 = np.zeros((3, 3))
        a1 = np.zeros((3, 3))
        a0[1, 1] = 1.0
        a0[2, 2] = 1.0
        a1[1, 1] = np.exp(zeta * p)
        a1[2, 2] = np.exp(-zeta * p)
        if c == 1:
            a1[0, 0] = 1.0
            a0[0, 1] = np.exp(zeta * prefix)
        else:
            a0[0, 0] = 1.0
            a1[0, 2] = np.exp(-zeta * (prefix + p))
        prefix += c * p
        mats.append((a0, a1))
    left = np.array([1.0, 0.0, 0.0])
    right = np.array(
        [
            fall_scale * np.exp(-zeta * (t0 + prefix)),
            rise_scale * np.exp(zeta * t0),
            fall_scale * np.exp(-zeta * t0),
        ]
    )
    return TransferMatrixFamily(mats, left, right)


def _split_index(center: float, grid: Grid1D) -> int:
    u = (center - grid.origin) / grid.spacing
    return int(min(max(np.ceil(u), 0), grid.size))


def canonicalize(tensors: list[np.ndarray], compress: bool = False, rtol: float = 1e-12) -> Mps:
    """Right-canonical gauge by a right-to-left LQ (or SVD) sweep.

    The discarded scale factors are tracked in log space and returned as the
    MPS norm, so the result is the unit-norm state plus its raw L2 norm.
    With ``compress`` the sweep uses SVD and drops singular values below
    ``rtol`` times the largest one, giving the minimal exact bond dimension.
    """
    tensors = [np.asarray(t, dtype=float) for t in tensors]
    n = len(tensors)
    log_scale = 0.0
    # left-to-right QR pass: trims edge bonds and makes the left part isometric
    for k in range(n - 1):
        t = tensors[k]
        _, dl, dr = t.shape
        q, r = np.linalg.qr(t.transpose(1, 0, 2).reshape(dl * 2, dr))
        scale = np.linalg.norm(r)
        if scale == 0:
            raise ValueError("transfer matrices encode the zero function")
        log_scale += np.log(scale)
        tensors[k] = q.reshape(dl, 2, -1).transpose(1, 0, 2)
        tensors[k + 1] = np.einsum("ab,sbc->sac", r / scale, tensors[k + 1])
    out: list[np.ndarray] = [None] * n  # type: ignore[list-item]
    for k in range(n - 1, 0, -1):
        t = tensors[k]
        _, dl, dr = t.shape
        mat = t.transpose(1, 0, 2).reshape(dl, 2 * dr)
        if compress:
            u, s, vh = np.linalg.svd(mat, full_matrices=False)
            keep = max(1, int(np.count_nonzero(s > rtol * s[0])))
            q_rows = vh[:keep]
            carry = u[:, :keep] * s[:keep]
        else:
            q, r = np.linalg.qr(mat.T)
            q_rows, carry = q.T, r.T
        scale = np.linalg.norm(carry)
        if scale == 0:
            raise ValueError("transfer matrices encode the zero function")
        log_scale += np.log(scale)
        out[k] = q_rows.reshape(-1, 2, dr).transpose(1, 0, 2)
        tensors[k - 1] = np.einsum("sab,bc->sac", tensors[k - 1], carry / scale)
    first = tensors[0]
    nrm = np.linalg.norm(first)
    out[0] = first / nrm
    return Mps(out, float(np.exp(log_scale + np.log(nrm))), 0.0, 0.0, "right")


def family_to_mps(family: TransferMatrixFamily, compress: bool = False) -> Mps:
    return canonicalize(family.site_tensors(), compress=compress)


def norm_via_transfer(family: TransferMatrixFamily, grid: Grid1D | None = None) -> float:
    """``sqrt(sum_j f(x_j)**2)`` by contracting doubled ``A (x) A`` transfer matrices.

    Cost is ``O(n chi**4)``; the running vector is rescaled at each site.
    ``grid`` is optional and only checked against the number of sites.
    """
    if grid is not None and grid.n_qubits != len(family.matrices):
        raise ValueError("family and grid disagree on the number of qubits")
    env = np.kron(family.left, family.left)
    log_scale = 0.0
    for a0, a1 in family.matrices:
        env = env @ (np.kron(a0, a0) + np.kron(a1, a1))
        s = np.max(np.abs(env))
        if s == 0:
            return 0.0
        env = env / s
        log_scale += np.log(s)
    total = env @ np.kron(family.right, family.right)
    return float(np.sqrt(total) * np.exp(log_scale / 2))


# ---------------------------------------------------------------------------
# Public builders
# ---------------------------------------------------------------------------


def build_exp(zeta: float, grid: Grid1D) -> Mps:
    """Product state (bond dimension 1) for ``exp(-zeta x)``.

    Site ``k`` is ``(1, e^{-zeta p_k}) / sqrt(1 + e^{-2 zeta p_k})`` and the
    norm is the product of the per-site normalizers.
    """
    if not zeta > 0:
        raise ValueError("zeta must be positive")
    tensors = []
    log_norm = -zeta * grid.origin
    for p in grid.bit_weights():
        e = np.exp(-zeta * p)
        site_norm = np.sqrt(1.0 + e * e)
        tensors.append(np.array([1.0, e]).reshape(2, 1, 1) / site_norm)
        log_norm += np.log(site_norm)
    return Mps(tensors, float(np.exp(log_norm)), 0.0, 0.0, "right")


def _resolve_center(center_index: int | None, center: float | None, grid: Grid1D) -> float:
    if center is not None:
        if center_index is not None:
            raise ValueError("give either center_index or center, not both")
        return float(center)
    if center_index is None:
        raise ValueError("center_index is required")
    if not 0 <= int(center_index) < grid.size:
        raise ValueError(f"center_index {center_index} outside [0, {grid.size})")
    return grid.point(int(center_index))


def build_sto1s(
    zeta: float, center_index: int | None, grid: Grid1D, *, center: float | None = None
) -> Mps:
    """``exp(-zeta |x - R|)`` with ``R`` at grid point ``center_index``.

    Pass ``center`` instead to place ``R`` at an arbitrary coordinate.  The
    bond dimension is 2 when the split index (number of points below ``R``)
    is a multiple of ``2**(n-1)``, e.g. the grid midpoint; a generic split
    gives 3 on interior bonds.
    """
    if not zeta > 0:
        raise ValueError("zeta must be positive")
    r = _resolve_center(center_index, center, grid)
    return family_to_mps(sto1s_family(zeta, r, grid), compress=True)


def build_sto1s_derivative(
    zeta: float, center_index: int | None, grid: Grid1D, *, center: float | None = None
) -> Mps:
    """``d/dx exp(-zeta |x - R|)``: the 1s state with the decaying branch negated."""
    if not zeta > 0:
        raise ValueError("zeta must be positive")
    r = _resolve_center(center_index, center, grid)
    return family_to_mps(sto1s_family(zeta, r, grid, derivative=True), compress=True)


def build_sto2s(zeta: float, grid: Grid1D) -> Mps:
    if not zeta > 0:
        raise ValueError("zeta must be positive")
    return family_to_mps(sto2s_family(zeta, grid))


def build_h2s(a: float, grid: Grid1D) -> Mps:
    if not a > 0:
        raise ValueError("a must be positive")
    return family_to_mps(h2s_family(a, grid))


def build_h2s_jacobian(a: float, grid: Grid1D) -> Mps:
    if not a > 0:
        raise ValueError("a must be positive")
    return family_to_mps(h2s_jacobian_family(a, grid))
