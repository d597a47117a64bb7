"""One-electron integral pipelines on amplitude-encoded orbitals.

Every pipeline follows the same pattern: encode the bra and ket functions as
unit-norm MPSs, take their inner product either by tensor contraction or by a
simulated compute/uncompute circuit, and rescale with the discrete norms and
grid spacing where the prefactors do not cancel.

1D geometry: on a grid ``[0, L)`` with spacing ``h`` the distance is snapped to
``D = round(d / h) * h`` and the two centres sit symmetrically about the
box middle, half a spacing off the grid points:
``R_A = (2**(n-1) - round(d / 2h) - 1/2) h`` and ``R_B = R_A + D``.
"""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass
from math import floor

import numpy as np

from . import analytic
from . import circuit as qc
from .grid import Grid1D, Grid3D, Ordering
from .mps import Mps, ResourceLimitError, decompose, inner_product
from .orbitals import (
    Kind,
    OrbitalSpec,
    off_grid_potential_center,
    reference_kinetic_1d_1s,
    reference_overlap_1d_1s,
    reference_overlap_3d,
    sample,
)

#: Largest per-coordinate qubit count for dense 3D sampling (2**21 amplitudes).
MAX_QUBITS_PER_COORD = 7
#: Largest per-coordinate qubit count for the 3D circuit path.
MAX_CIRCUIT_QUBITS_PER_COORD = 4


class Via(str, enum.Enum):
    TENSOR = "tensor"
    CIRCUIT = "circuit"


@dataclass(frozen=True)
class IntegralResult:
    """Integral value plus everything needed to audit the rescaling.

    ``physical_value = norm_a * norm_b * raw_inner * spacing`` when the norms
    do not cancel; for normalized overlaps it equals ``raw_inner``.
    """

    raw_inner: float
    norm_a: float
    norm_b: float
    spacing: float
    physical_value: float
    n_qubits: int
    snapped_distance: float
    reference: float | None = None
    relative_error: float | None = None

    def row(self) -> dict:
        """Stable CSV row: ``n, snapped_d, value, reference, rel_error``."""
        return {
            "n": self.n_qubits,
            "snapped_d": self.snapped_distance,
            "value": self.physical_value,
            "reference": self.reference,
            "rel_error": self.relative_error,
        }

    def to_dict(self) -> dict:
        return asdict(self)


def _rel_error(value: float, reference: float | None) -> float | None:
    if reference is None or reference == 0:
        return None
    return abs(value - reference) / abs(reference)


def _round_half_down(u: float) -> int:
    return int(floor(u)) + (1 if u - floor(u) > 0.5 else 0)


@dataclass(frozen=True)
class TwoCenterGeometry:
    grid: Grid1D
    center_a: float
    center_b: float

    @property
    def distance(self) -> float:
        return self.center_b - self.center_a


def two_center_geometry(distance: float, n: int, length: float = 16.0) -> TwoCenterGeometry:
    """Snapped, half-spacing-offset centres about the middle of ``[0, length)``."""
    if distance < 0:
        raise ValueError("distance must be non-negative")
    grid = Grid1D(n, length)
    h = grid.spacing
    steps = _round_half_down(distance / h)
    left = _round_half_down(distance / (2 * h))
    a = (grid.size // 2 - left - 0.5) * h
    b = a + steps * h
    if a < 0 or b >= length:
        raise ValueError(f"distance {distance} does not fit in a box of length {length}")
    return TwoCenterGeometry(grid, a, b)


def _contract(a: Mps, b: Mps, via: Via | str, seed: int = 0) -> float:
    if Via(via) is Via.TENSOR:
        return inner_product(a, b)
    return qc.compute_uncompute(qc.compile(a, seed), qc.compile(b, seed)).signed_amplitude


def overlap_1d(
    zeta: float = 1.0,
    distance: float = 1.4,
    n: int = 5,
    length: float = 16.0,
    via: Via | str = Via.TENSOR,
    seed: int = 0,
) -> IntegralResult:
    """Normalized overlap of two 1D 1s functions; all prefactors cancel."""
    geo = two_center_geometry(distance, n, length)
    a = analytic.build_sto1s(zeta, None, geo.grid, center=geo.center_a)
    b = analytic.build_sto1s(zeta, None, geo.grid, center=geo.center_b)
    raw = _contract(a, b, via, seed)
    ref = float(reference_overlap_1d_1s(zeta, geo.distance))
    return IntegralResult(
        raw, a.norm, b.norm, geo.grid.spacing, raw, n, geo.distance, ref, _rel_error(raw, ref)
    )


def kinetic_1d(
    zeta: float = 1.0,
    distance: float = 1.4,
    n: int = 5,
    length: float = 16.0,
    via: Via | str = Via.TENSOR,
    seed: int = 0,
) -> IntegralResult:
    """``T_AB = 1/2 <psi_A'|psi_B'>`` between unit-norm 1s functions.

    The derivative states are normalized on their own, so the overlap is
    rescaled by ``(N'_A N'_B) / (N_A N_B)``, the ratio of derivative-sample
    norms to orbital-sample norms.  ``norm_a``/``norm_b`` in the result hold
    the derivative norms.
    """
    geo = two_center_geometry(distance, n, length)
    g = geo.grid
    fa = analytic.sto1s_family(zeta, geo.center_a, g)
    fb = analytic.sto1s_family(zeta, geo.center_b, g)
    da = analytic.build_sto1s_derivative(zeta, None, g, center=geo.center_a)
    db = analytic.build_sto1s_derivative(zeta, None, g, center=geo.center_b)
    raw = _contract(da, db, via, seed)
    ratio = da.norm * db.norm / (analytic.norm_via_transfer(fa) * analytic.norm_via_transfer(fb))
    value = 0.5 * raw * ratio
    ref = float(reference_kinetic_1d_1s(zeta, geo.distance))
    return IntegralResult(
        raw, da.norm, db.norm, g.spacing, value, n, geo.distance, ref, _rel_error(value, ref)
    )


def _nuclear_setup(zeta, orbital_centers, potential_center, n, length):
    if orbital_centers is None:
        geo = two_center_geometry(1.4, n, length)
        ca, cb = geo.center_a, geo.center_b
        grid = geo.grid
    else:
        ca, cb = (float(c) for c in orbital_centers)
        grid = Grid1D(n, length)
    rc = ca if potential_center is None else float(potential_center)
    rc, _ = off_grid_potential_center(rc, grid)
    return grid, ca, cb, rc


def nuclear_attraction_dense(
    zeta: float = 1.0,
    orbital_centers: tuple[float, float] | None = None,
    potential_center: float | None = None,
    Z: float = 1.0,
    n: int = 6,
    length: float = 16.0,
) -> float:
    """Direct discretized sum ``sum_j psi_A V psi_B dx`` (the oracle for the pipeline)."""
    grid, ca, cb, rc = _nuclear_setup(zeta, orbital_centers, potential_center, n, length)
    x = grid.points()
    psi_a = np.sqrt(zeta) * np.exp(-zeta * np.abs(x - ca))
    psi_b = np.sqrt(zeta) * np.exp(-zeta * np.abs(x - cb))
    return float(np.sum(psi_a * (-Z / np.abs(x - rc)) * psi_b) * grid.spacing)


def nuclear_attraction_1d(
    zeta: float = 1.0,
    orbital_centers: tuple[float, float] | None = None,
    potential_center: float | None = None,
    Z: float = 1.0,
    n: int = 6,
    length: float = 16.0,
    via: Via | str = Via.TENSOR,
    seed: int = 0,
    threshold: float = 1e-12,
) -> IntegralResult:
    """``V_AB = N_A N_phi <psi_A|phi_B> dx`` with ``phi_B = V psi_B``, ``V = -Z/|x - R_C|``.

    Orbitals are the continuum-normalized ``sqrt(zeta) exp(-zeta |x - R|)``.
    Without explicit centres the overlap geometry for ``d = 1.4`` is used and
    the potential sits on centre A; a potential centre on a grid point is
    moved half a spacing.  ``phi_B`` has no closed-form MPS and is decomposed
    numerically.  The value depends on the grid by construction, so no
    reference is attached.
    """
    grid, ca, cb, rc = _nuclear_setup(zeta, orbital_centers, potential_center, n, length)
    dist = abs(cb - ca)
    if Z == 0:
        return IntegralResult(0.0, 0.0, 0.0, grid.spacing, 0.0, n, dist)
    a = analytic.build_sto1s(zeta, None, grid, center=ca)
    norm_a = a.norm * np.sqrt(zeta)
    phi = sample(OrbitalSpec(Kind.VPSI, zeta, cb, potential_center=rc, Z=Z), grid)
    b = decompose(phi, threshold)
    norm_phi = phi.norm * np.sqrt(zeta)
    raw = _contract(a, b, via, seed)
    value = float(norm_a * norm_phi * raw * grid.spacing)
    return IntegralResult(raw, float(norm_a), float(norm_phi), grid.spacing, value, n, dist)


def overlap_3d_spherical(n: int = 6, length: float = 32.0, a: float = 1.0) -> IntegralResult:
    """Radial overlap of ``r e^{-r}`` and ``r (2 - r/a) e^{-r/2a}`` on ``[0, length)``.

    The ``r`` factors carry the spherical Jacobian, so the normalized value
    is the ``<1s|2s>`` overlap, which vanishes in the continuum.  The sign is
    kept; published tables quote the magnitude.
    """
    grid = Grid1D(n, length)
    f = analytic.build_sto2s(1.0, grid)
    g = analytic.build_h2s_jacobian(a, grid)
    raw = inner_product(f, g)
    return IntegralResult(raw, f.norm, g.norm, grid.spacing, raw, n, 0.0, 0.0, None)


_PAIR_KINDS = {
    "1s1s": (Kind.CART1S, Kind.CART1S),
    "2s2s": (Kind.CART2S, Kind.CART2S),
    "1s2s": (Kind.CART1S, Kind.CART2S),
}


def overlap_3d_cartesian(
    pair: str = "1s1s",
    distance: float = 1.4,
    n_per_coord: int = 6,
    length: float = 16.0,
    threshold: float = 1e-12,
    zeta: float = 1.0,
    a: float = 1.0,
    ordering: Ordering | str = Ordering.GROUPED,
    snap: bool = False,
    via: Via | str = Via.TENSOR,
    seed: int = 0,
) -> IntegralResult:
    """Normalized overlap of two s functions on a centred Cartesian grid.

    Centre A is the grid point at the origin and centre B lies ``distance``
    along x.  With ``snap=True`` B is moved to the nearest grid point.
    """
    if pair not in _PAIR_KINDS:
        raise ValueError(f"unknown pair {pair!r}; choose from {sorted(_PAIR_KINDS)}")
    if n_per_coord > MAX_QUBITS_PER_COORD:
        raise ResourceLimitError(
            f"n_per_coord={n_per_coord} exceeds the dense ceiling of "
            f"{MAX_QUBITS_PER_COORD} per coordinate (2**{3 * MAX_QUBITS_PER_COORD} amplitudes)"
        )
    if Via(via) is Via.CIRCUIT and n_per_coord > MAX_CIRCUIT_QUBITS_PER_COORD:
        raise ResourceLimitError(
            f"circuit path limited to {MAX_CIRCUIT_QUBITS_PER_COORD} qubits per coordinate"
        )
    grid = Grid3D.centered(n_per_coord, length, ordering)
    d = float(distance)
    if snap:
        steps = _round_half_down(d / grid.spacing)
        d = steps * grid.spacing
    kind_a, kind_b = _PAIR_KINDS[pair]
    sa = sample(OrbitalSpec(kind_a, zeta, (0.0, 0.0, 0.0), a), grid)
    sb = sample(OrbitalSpec(kind_b, zeta, (d, 0.0, 0.0), a), grid)
    ma, mb = decompose(sa, threshold), decompose(sb, threshold)
    raw = _contract(ma, mb, via, seed)
    ref = reference_overlap_3d(pair, zeta, d, a)
    return IntegralResult(
        raw, sa.norm, sb.norm, grid.spacing, raw, n_per_coord, d, ref, _rel_error(raw, ref)
    )


_SCANNERS = {
    "overlap1d": overlap_1d,
    "kinetic1d": kinetic_1d,
    "nuclear1d": nuclear_attraction_1d,
    "overlap3d-spherical": overlap_3d_spherical,
    "overlap3d-cartesian": overlap_3d_cartesian,
}


def convergence_scan(kind: str, n_range, **config) -> list[IntegralResult]:
    """One result per ``n``; ``config`` is forwarded to the pipeline."""
    if kind not in _SCANNERS:
        raise ValueError(f"unknown scan kind {kind!r}; choose from {sorted(_SCANNERS)}")
    fn = _SCANNERS[kind]
    key = "n_per_coord" if kind == "overlap3d-cartesian" else "n"
    return [fn(**{**config, key: int(n)}) for n in n_range]
