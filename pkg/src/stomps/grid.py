"""Binary grids and qubit orderings.

A ``Grid1D`` holds ``2**n_qubits`` equally spaced points starting at
``origin``.  Point ``j`` is addressed by its big-endian bit string, so qubit 0
is the most significant bit.  ``Grid3D`` stacks three identical 1D grids and
fixes how the ``3 * n_qubits`` coordinate bits are laid out along an MPS chain.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass

import numpy as np


class Ordering(str, enum.Enum):
    GROUPED = "grouped"
    INTERLEAVED = "interleaved"


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid ``origin + j * spacing`` for ``j`` in ``[0, 2**n_qubits)``."""

    n_qubits: int
    length: float
    origin: float = 0.0

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {self.n_qubits}")
        if not self.length > 0:
            raise ValueError(f"length must be positive, got {self.length}")

    @property
    def size(self) -> int:
        return 1 << self.n_qubits

    @property
    def spacing(self) -> float:
        return self.length / self.size

    def point(self, j: int) -> float:
        if not 0 <= j < self.size:
            raise IndexError(f"grid index {j} outside [0, {self.size})")
        return self.origin + j * self.spacing

    def points(self) -> np.ndarray:
        return self.origin + np.arange(self.size) * self.spacing

    def bit_weights(self) -> np.ndarray:
        """Coordinate weight ``2**(n-1-k) * spacing`` of bit ``k`` (MSB first)."""
        return 2.0 ** np.arange(self.n_qubits - 1, -1, -1) * self.spacing

    def bits(self, j: int) -> list[int]:
        if not 0 <= j < self.size:
            raise IndexError(f"grid index {j} outside [0, {self.size})")
        return [(j >> (self.n_qubits - 1 - k)) & 1 for k in range(self.n_qubits)]

    def to_dict(self) -> dict:
        return {"n_qubits": self.n_qubits, "length": self.length, "origin": self.origin}


@dataclass(frozen=True)
class Grid3D:
    """Three identical coordinate registers flattened in a fixed bit order."""

    per_coord: Grid1D
    ordering: Ordering = Ordering.GROUPED

    def __post_init__(self) -> None:
        object.__setattr__(self, "ordering", Ordering(self.ordering))

    @classmethod
    def centered(
        cls, n_qubits: int, length: float, ordering: Ordering | str = Ordering.GROUPED
    ) -> Grid3D:
        """Box ``[-length/2, length/2)`` per coordinate; the origin is a grid point."""
        return cls(Grid1D(n_qubits, length, -length / 2), Ordering(ordering))

    @property
    def n_qubits(self) -> int:
        return self.per_coord.n_qubits

    @property
    def n_total(self) -> int:
        return 3 * self.per_coord.n_qubits

    @property
    def spacing(self) -> float:
        return self.per_coord.spacing

    @property
    def size(self) -> int:
        return 1 << self.n_total

    def bit_permutation(self) -> list[int]:
        """Chain position -> grouped bit position.

        Grouped bit positions are ``0..n-1`` for x, ``n..2n-1`` for y and
        ``2n..3n-1`` for z, each register MSB first.
        """
        n = self.n_qubits
        if self.ordering is Ordering.GROUPED:
            return list(range(3 * n))
        return [axis * n + k for k in range(n) for axis in range(3)]

    def to_chain(self, values: np.ndarray) -> np.ndarray:
        """Reorder a grouped ``(N, N, N)`` array into this grid's chain order."""
        n = self.n_qubits
        values = np.asarray(values).reshape([2] * (3 * n))
        return values.transpose(self.bit_permutation()).reshape(-1)

    def to_dict(self) -> dict:
        return {**self.per_coord.to_dict(), "ordering": self.ordering.value}


def snap_to_grid(value: float, grid: Grid1D) -> tuple[int, float]:
    """Nearest grid index to ``value`` and its coordinate; ties go to the lower index."""
    lo, hi = grid.origin, grid.origin + grid.length
    if not lo <= value < hi:
        raise ValueError(f"coordinate {value} outside grid domain [{lo}, {hi})")
    u = (value - grid.origin) / grid.spacing
    j = int(np.floor(u))
    if u - j > 0.5 and j + 1 < grid.size:
        j += 1
    return j, grid.point(j)


def flatten_index(jx: int, jy: int, jz: int, grid: Grid3D) -> int:
    n = grid.n_qubits
    size = grid.per_coord.size
    for name, j in (("jx", jx), ("jy", jy), ("jz", jz)):
        if not 0 <= j < size:
            raise IndexError(f"{name}={j} outside [0, {size})")
    if grid.ordering is Ordering.GROUPED:
        return (jx << (2 * n)) | (jy << n) | jz
    out = 0
    for k in range(n):
        shift = n - 1 - k
        for j in (jx, jy, jz):
            out = (out << 1) | ((j >> shift) & 1)
    return out


def grid_to_json(grid: Grid1D | Grid3D) -> str:
    return json.dumps(grid.to_dict())


def grid_from_json(text: str) -> Grid1D | Grid3D:
    data = json.loads(text)
    base = Grid1D(int(data["n_qubits"]), float(data["length"]), float(data.get("origin", 0.0)))
    if "ordering" in data and data["ordering"] is not None:
        return Grid3D(base, Ordering(data["ordering"]))
    return base
