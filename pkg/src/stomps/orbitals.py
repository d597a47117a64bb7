"""Target functions, grid samplers and closed-form reference integrals."""

from __future__ import annotations

import csv
import enum
import json
import struct
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np
from scipy import integrate

from .grid import Grid1D, Grid3D


class Kind(str, enum.Enum):
    EXP = "exp"
    STO1S = "sto1s"
    STO1S_DERIV = "sto1s_deriv"
    STO2S = "sto2s"
    H2S = "h2s"
    H2S_JACOBIAN = "h2s_jacobian"
    VPSI = "vpsi"
    CART1S = "cart1s"
    CART2S = "cart2s"


_CARTESIAN = {Kind.CART1S, Kind.CART2S}


class SingularPotentialError(ValueError):
    """The Coulomb centre of a V*psi state coincides with a grid point."""


@dataclass(frozen=True)
class OrbitalSpec:
    """Symbolic target function.

    ``zeta`` is the decay constant of the exponential forms; the hydrogen 2s
    forms are governed by the Bohr-radius parameter ``a`` instead.  ``center``
    is a scalar for 1D kinds and a 3-vector for the Cartesian ones.
    """

    kind: Kind
    zeta: float = 1.0
    center: float | tuple[float, float, float] = 0.0
    a: float = 1.0
    potential_center: float | None = None
    Z: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", Kind(self.kind))
        if not self.zeta > 0:
            raise ValueError(f"zeta must be positive, got {self.zeta}")
        if not self.a > 0:
            raise ValueError(f"a must be positive, got {self.a}")
        if self.kind in _CARTESIAN:
            c = np.broadcast_to(np.asarray(self.center, dtype=float), (3,))
            object.__setattr__(self, "center", tuple(float(v) for v in c))
        else:
            object.__setattr__(self, "center", float(self.center))
        if self.kind is Kind.VPSI and self.potential_center is None:
            raise ValueError("VPSI needs a potential_center")

    @property
    def is_cartesian(self) -> bool:
        return self.kind in _CARTESIAN

    def to_json(self) -> str:
        data = asdict(self)
        data["kind"] = self.kind.value
        if self.is_cartesian:
            data["center"] = list(self.center)
        return json.dumps(data)

    @classmethod
    def from_json(cls, text: str) -> OrbitalSpec:
        data = json.loads(text)
        if isinstance(data.get("center"), list):
            data["center"] = tuple(data["center"])
        return cls(**data)


def _radial(spec: OrbitalSpec, r):
    a = spec.a
    if spec.kind is Kind.CART1S:
        return np.exp(-spec.zeta * r)
    return (2.0 - r / a) * np.exp(-r / (2.0 * a))


def _values_1d(spec: OrbitalSpec, x):
    x = np.asarray(x, dtype=float)
    zeta = spec.zeta
    t = x - spec.center
    kind = spec.kind
    if kind is Kind.EXP:
        return np.exp(-zeta * t)
    if kind is Kind.STO1S:
        return np.exp(-zeta * np.abs(t))
    if kind is Kind.STO1S_DERIV:
        # x == center is assigned to the decaying branch.
        return np.where(t < 0, zeta, -zeta) * np.exp(-zeta * np.abs(t))
    if kind is Kind.STO2S:
        return t * np.exp(-zeta * t)
    if kind is Kind.H2S:
        return (2.0 - t / spec.a) * np.exp(-t / (2.0 * spec.a))
    if kind is Kind.H2S_JACOBIAN:
        return t * (2.0 - t / spec.a) * np.exp(-t / (2.0 * spec.a))
    if kind is Kind.VPSI:
        dist = np.abs(x - spec.potential_center)
        if np.any(dist == 0):
            raise SingularPotentialError(
                f"V*psi evaluated at its Coulomb centre {spec.potential_center}"
            )
        return -spec.Z / dist * np.exp(-zeta * np.abs(t))
    raise ValueError(f"{kind.value} is not a 1D kind")


def evaluate(spec: OrbitalSpec, point) -> float:
    """Pointwise value of ``spec`` at a scalar (1D) or 3-vector (Cartesian) point."""
    if spec.is_cartesian:
        p = np.asarray(point, dtype=float) - np.asarray(spec.center)
        return float(_radial(spec, np.sqrt(p @ p)))
    return float(_values_1d(spec, point))


@dataclass(frozen=True)
class SampledState:
    """Unit-norm amplitudes plus the discrete L2 norm of the raw samples."""

    amplitudes: np.ndarray
    norm: float
    grid: Grid1D | Grid3D = field(compare=False)

    @property
    def n_total(self) -> int:
        return int(self.amplitudes.size).bit_length() - 1

    @property
    def raw(self) -> np.ndarray:
        return self.amplitudes * self.norm


def _from_raw(raw: np.ndarray, grid) -> SampledState:
    nrm = float(np.linalg.norm(raw))
    if nrm == 0:
        raise ValueError("sampled function vanishes on the whole grid")
    return SampledState(raw / nrm, nrm, grid)


def sample_cartesian_raw(spec: OrbitalSpec, grid: Grid3D) -> np.ndarray:
    """Raw samples in grouped ``(x, y, z)`` array layout."""
    pts = grid.per_coord.points()
    cx, cy, cz = spec.center
    dx2 = (pts - cx) ** 2
    dy2 = (pts - cy) ** 2
    dz2 = (pts - cz) ** 2
    r = np.sqrt(dx2[:, None, None] + dy2[None, :, None] + dz2[None, None, :])
    return _radial(spec, r)


def sample(spec: OrbitalSpec, grid: Grid1D | Grid3D) -> SampledState:
    """Sample ``spec`` on every grid point and normalize."""
    if spec.is_cartesian:
        if not isinstance(grid, Grid3D):
            raise TypeError(f"{spec.kind.value} needs a Grid3D")
        raw = grid.to_chain(sample_cartesian_raw(spec, grid))
        return _from_raw(raw, grid)
    if not isinstance(grid, Grid1D):
        raise TypeError(f"{spec.kind.value} needs a Grid1D")
    x = grid.points()
    if spec.kind is Kind.VPSI:
        gap = np.min(np.abs(x - spec.potential_center))
        if gap <= 1e-12 * grid.spacing:
            raise SingularPotentialError(
                f"potential centre {spec.potential_center} sits on a grid point; "
                f"shift it by half a spacing ({grid.spacing / 2:g})"
            )
    return _from_raw(_values_1d(spec, x), grid)


def off_grid_potential_center(value: float, grid: Grid1D) -> tuple[float, bool]:
    """Return ``value`` moved half a spacing off the grid if it hits a point.

    The flag reports whether a shift was applied.
    """
    u = (value - grid.origin) / grid.spacing
    if abs(u - round(u)) <= 1e-12:
        return value + grid.spacing / 2, True
    return value, False


def write_binary(state: SampledState, path: str | Path) -> None:
    """Little-endian dump: uint32 qubit count, float64 norm, float64 amplitudes."""
    with open(path, "wb") as fh:
        fh.write(struct.pack("<Id", state.n_total, state.norm))
        fh.write(np.ascontiguousarray(state.amplitudes, dtype="<f8").tobytes())


def read_binary(path: str | Path) -> tuple[np.ndarray, float]:
    data = Path(path).read_bytes()
    n_total, norm = struct.unpack_from("<Id", data)
    amps = np.frombuffer(data, dtype="<f8", offset=struct.calcsize("<Id"))
    if amps.size != 1 << n_total:
        raise ValueError(f"expected {1 << n_total} amplitudes, found {amps.size}")
    return amps.copy(), norm


def write_csv(state: SampledState, path: str | Path, max_qubits: int = 16) -> None:
    if state.n_total > max_qubits:
        raise ValueError(f"CSV export is limited to {max_qubits} qubits")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "amplitude"])
        for j, v in enumerate(state.amplitudes):
            w.writerow([j, f"{v:.12g}"])


# ---------------------------------------------------------------------------
# Reference integrals
# ---------------------------------------------------------------------------


def reference_overlap_1d_1s(zeta: float, d: float) -> float:
    """Overlap of two unit-norm 1D functions ``e^{-zeta|x-R|}`` a distance ``d`` apart."""
    if d < 0:
        raise ValueError("distance must be non-negative")
    zd = zeta * d
    return (1.0 + zd) * np.exp(-zd)


def reference_kinetic_1d_1s(zeta: float, d: float) -> float:
    """Kinetic matrix element ``1/2 <psi_A'|psi_B'>`` for unit-norm 1D 1s functions."""
    if d < 0:
        raise ValueError("distance must be non-negative")
    zd = zeta * d
    return 0.5 * zeta**2 * np.exp(-zd) * (1.0 - zd)


_PAIRS = {"1s1s": ("1s", "1s"), "2s2s": ("2s", "2s"), "1s2s": ("1s", "2s")}


def _radial_fn(label: str, zeta: float, a: float):
    if label == "1s":
        return lambda r: np.exp(-zeta * r)
    return lambda r: (2.0 - r / a) * np.exp(-r / (2.0 * a))


@lru_cache(maxsize=64)
def _two_center_quadrature(pair: str, zeta: float, a: float, d: float) -> float:
    la, lb = _PAIRS[pair]
    fa, fb = _radial_fn(la, zeta, a), _radial_fn(lb, zeta, a)

    def self_norm(f):
        val, _ = integrate.quad(
            lambda r: 4 * np.pi * r * r * f(r) ** 2, 0, np.inf, epsabs=0, epsrel=1e-12
        )
        return val

    denom = np.sqrt(self_norm(fa) * self_norm(fb))
    if d == 0:
        val, _ = integrate.quad(
            lambda r: 4 * np.pi * r * r * fa(r) * fb(r), 0, np.inf, epsabs=1e-13, epsrel=1e-12
        )
        return val / denom

    # prolate spheroidal coordinates: r_a = d(mu+nu)/2, r_b = d(mu-nu)/2
    def integrand(nu, mu):
        return fa(d * (mu + nu) / 2) * fb(d * (mu - nu) / 2) * (mu * mu - nu * nu)

    val, _ = integrate.dblquad(integrand, 1, np.inf, -1, 1, epsabs=0, epsrel=1e-10)
    return 2 * np.pi * (d / 2) ** 3 * val / denom


def reference_overlap_3d(pair: str, zeta: float = 1.0, d: float = 1.4, a: float = 1.0) -> float:
    """Normalized two-centre overlap of 3D s functions.

    ``pair`` is one of ``"1s1s"``, ``"2s2s"``, ``"1s2s"`` (1s on the bra).
    The 1s-1s value is closed form; pairs with a 2s function come from
    adaptive quadrature in prolate spheroidal coordinates.
    """
    if pair not in _PAIRS:
        raise ValueError(f"unknown pair {pair!r}; choose from {sorted(_PAIRS)}")
    if d < 0:
        raise ValueError("distance must be non-negative")
    if pair == "1s1s":
        zd = zeta * d
        return float(np.exp(-zd) * (1 + zd + zd * zd / 3))
    return float(_two_center_quadrature(pair, float(zeta), float(a), float(d)))
