"""Bond-dimension and rank studies for Cartesian orbitals and Coulomb kernels.

The 3D scans encode ``exp(-zeta r)`` centred on the grid point at the origin
of a box ``[-L/2, L/2)**3`` and decompose the unit-norm state with an
absolute singular-value cut.  Dense sampling limits the scans to 7 qubits
per coordinate (2**21 amplitudes).
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .grid import Grid3D, Ordering
from .mps import BondProfile, ResourceLimitError, bond_profile, decompose
from .orbitals import Kind, OrbitalSpec, sample

MAX_QUBITS_PER_COORD = 7
MAX_KERNEL_QUBITS = 10
MAX_FOURIER_QUBITS = 12


@dataclass(frozen=True)
class ScanRecord:
    """One bond-dimension measurement.

    ``chi_xy`` and ``chi_yz`` are the bonds after ``n`` and ``2n`` chain
    sites, i.e. the register boundaries for grouped ordering.
    ``delta_chi_max`` is relative to the previous ``n`` at the same threshold
    and is ``None`` for the first row.
    """

    n_per_coord: int
    total_qubits: int
    threshold: float
    zeta: float
    length: float
    ordering: str
    chi_max: int
    chi_xy: int
    chi_yz: int
    bond_dims: list[int] = field(repr=False)
    delta_chi_max: int | None = None
    runtime: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)

    def table_row(self) -> dict:
        """Columns of the bond-scaling table; runtime is left out so the output is reproducible."""
        return {
            "n": self.n_per_coord,
            "total_qubits": self.total_qubits,
            "threshold": self.threshold,
            "chi_max": self.chi_max,
            "delta_chi_max": self.delta_chi_max,
            "chi_xy": self.chi_xy,
            "chi_yz": self.chi_yz,
        }


def _check_ceiling(n: int) -> None:
    if n > MAX_QUBITS_PER_COORD:
        raise ResourceLimitError(
            f"n={n} per coordinate exceeds the desk-scale ceiling of {MAX_QUBITS_PER_COORD} "
            f"(2**{3 * MAX_QUBITS_PER_COORD} amplitudes)"
        )
    if n < 1:
        raise ValueError("n must be positive")


def cartesian_1s_records(
    n: int,
    zeta: float = 1.0,
    length: float = 32.0,
    thresholds=(1e-12,),
    ordering: Ordering | str = Ordering.GROUPED,
) -> list[ScanRecord]:
    """Sample the 3D 1s state once and decompose it at each threshold."""
    _check_ceiling(n)
    grid = Grid3D.centered(n, length, ordering)
    state = sample(OrbitalSpec(Kind.CART1S, zeta, (0.0, 0.0, 0.0)), grid)
    out = []
    for thr in thresholds:
        start = time.perf_counter()
        mps = decompose(state, thr)
        dims = mps.bond_dims
        out.append(
            ScanRecord(
                n_per_coord=n,
                total_qubits=3 * n,
                threshold=float(thr),
                zeta=float(zeta),
                length=float(length),
                ordering=grid.ordering.value,
                chi_max=mps.chi_max,
                chi_xy=dims[n],
                chi_yz=dims[2 * n],
                bond_dims=dims,
                runtime=time.perf_counter() - start,
            )
        )
    return out


def _fill_deltas(records: list[ScanRecord]) -> list[ScanRecord]:
    last: dict[float, int] = {}
    out = []
    for r in records:
        prev = last.get(r.threshold)
        out.append(replace(r, delta_chi_max=None if prev is None else r.chi_max - prev))
        last[r.threshold] = r.chi_max
    return out


def scan_resolution(
    zeta: float = 1.0,
    length: float = 32.0,
    n_range=range(4, 8),
    thresholds=(1e-12, 1e-9, 1e-6),
    ordering: Ordering | str = Ordering.GROUPED,
    jobs: int = 1,
) -> list[ScanRecord]:
    """Records ordered by ``n`` then by threshold as given."""
    ns = list(n_range)
    for n in ns:
        _check_ceiling(n)
    args = [(n, zeta, length, tuple(thresholds), ordering) for n in ns]
    if jobs > 1 and len(ns) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_records_star, args))
    else:
        chunks = [_records_star(a) for a in args]
    return _fill_deltas([r for chunk in chunks for r in chunk])


def _records_star(args) -> list[ScanRecord]:
    return cartesian_1s_records(*args)


def scan_zeta(
    zetas=(1.0, 2.0, 4.0, 6.0),
    n: int = 7,
    length: float = 32.0,
    threshold: float = 1e-12,
    jobs: int = 1,
) -> list[ScanRecord]:
    args = [(n, z, length, (threshold,), Ordering.GROUPED) for z in zetas]
    _check_ceiling(n)
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_records_star, args))
    else:
        chunks = [_records_star(a) for a in args]
    return [r for chunk in chunks for r in chunk]


def compare_orderings(
    n: int, zeta: float = 1.0, length: float = 32.0, threshold: float = 1e-12
) -> tuple[ScanRecord, ScanRecord]:
    """``(grouped, interleaved)`` records for the same sampled function."""
    grouped = cartesian_1s_records(n, zeta, length, (threshold,), Ordering.GROUPED)[0]
    inter = cartesian_1s_records(n, zeta, length, (threshold,), Ordering.INTERLEAVED)[0]
    return grouped, inter


@dataclass(frozen=True)
class ProfileReport:
    """Per-cut bond dimensions split by register (grouped ordering)."""

    profile: BondProfile
    x_profile: list[int]
    y_profile: list[int]
    z_profile: list[int]

    @property
    def x_peak(self) -> int:
        return max(self.x_profile, default=1)

    @property
    def y_peak(self) -> int:
        return max(self.y_profile, default=1)

    @property
    def z_peak(self) -> int:
        return max(self.z_profile, default=1)

    def mirror_deviation(self) -> int:
        """Largest ``|x[k] - z[-1-k]|`` between the x profile and the reversed z profile."""
        return max(
            (abs(a - b) for a, b in zip(self.x_profile, reversed(self.z_profile))), default=0
        )

    def to_dict(self) -> dict:
        return {
            "dims": self.profile.dims,
            "max_dim": self.profile.max_dim,
            "boundary_dims": self.profile.boundary_dims,
            "x_profile": self.x_profile,
            "y_profile": self.y_profile,
            "z_profile": self.z_profile,
            "x_peak": self.x_peak,
            "y_peak": self.y_peak,
            "z_peak": self.z_peak,
        }


def bond_profile_report(
    n: int, zeta: float = 1.0, threshold: float = 1e-12, length: float = 32.0
) -> ProfileReport:
    _check_ceiling(n)
    grid = Grid3D.centered(n, length, Ordering.GROUPED)
    mps = decompose(sample(OrbitalSpec(Kind.CART1S, zeta, (0.0, 0.0, 0.0)), grid), threshold)
    prof = bond_profile(mps, grid)
    dims = mps.bond_dims
    return ProfileReport(
        prof,
        dims[1:n],
        dims[n + 1 : 2 * n],
        dims[2 * n + 1 : 3 * n],
    )


def electron_pair_matrix(
    n: int,
    zeta_pair: tuple[float, float] = (1.0, 1.0),
    separation: float = 1.4,
    length: float = 32.0,
    kernel: str = "coulomb",
) -> np.ndarray:
    """``M[j, k] = f1(x1_j) K(x1_j, x2_k) f2(x2_k)`` on ``[0, length)``.

    The second electron's grid is offset by half a spacing so ``x1 != x2``
    everywhere.  ``kernel`` is ``"coulomb"`` (``1/|x1 - x2|``), ``"bare"``
    (the kernel without orbitals) or ``"none"`` (the separable product).
    """
    if not 1 <= n <= MAX_KERNEL_QUBITS:
        raise ResourceLimitError(f"n must lie in [1, {MAX_KERNEL_QUBITS}] (N <= 1024)")
    size = 1 << n
    h = length / size
    x1 = np.arange(size) * h
    x2 = x1 + h / 2
    mid = length / 2
    z1, z2 = zeta_pair
    f1 = np.exp(-z1 * np.abs(x1 - (mid - separation / 2)))
    f2 = np.exp(-z2 * np.abs(x2 - (mid + separation / 2)))
    coul = 1.0 / np.abs(x1[:, None] - x2[None, :])
    if kernel == "coulomb":
        return f1[:, None] * coul * f2[None, :]
    if kernel == "bare":
        return coul
    if kernel == "none":
        return np.outer(f1, f2)
    raise ValueError(f"unknown kernel {kernel!r}; use coulomb, bare or none")


def two_electron_rank(
    n: int,
    zeta_pair: tuple[float, float] = (1.0, 1.0),
    separation: float = 1.4,
    length: float = 32.0,
    kernel: str = "coulomb",
    rtol: float = 1e-12,
) -> tuple[int, float]:
    """Schmidt rank across the electron cut, counting ``s > rtol * s_max``.

    The cutoff is relative because the matrix is not normalized.
    Returns ``(rank, rank / N)``.
    """
    mat = electron_pair_matrix(n, zeta_pair, separation, length, kernel)
    s = np.linalg.svd(mat, compute_uv=False)
    rank = int(np.count_nonzero(s > rtol * s[0]))
    return rank, rank / mat.shape[0]


def fourier_weight(n: int, values: np.ndarray | None = None, fraction: float = 0.99) -> float:
    """Smallest fraction of DFT modes holding ``fraction`` of the squared spectral weight.

    By default the signal is ``1/x`` sampled at ``x = (j + 1/2) h``, which
    keeps the singular point off the grid.
    """
    if not 1 <= n <= MAX_FOURIER_QUBITS:
        raise ResourceLimitError(f"n must lie in [1, {MAX_FOURIER_QUBITS}] (N <= 4096)")
    size = 1 << n
    if values is None:
        values = 1.0 / (np.arange(size) + 0.5)
    values = np.asarray(values)
    if values.size != size:
        raise ValueError(f"expected {size} samples, got {values.size}")
    power = np.sort(np.abs(np.fft.fft(values)) ** 2)[::-1]
    cum = np.cumsum(power)
    if cum[-1] == 0:
        raise ValueError("signal is identically zero")
    modes = int(np.searchsorted(cum, fraction * cum[-1] * (1 - 1e-12))) + 1
    return modes / size
