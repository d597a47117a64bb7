"""Quantum-register encodings of Slater-type orbitals as matrix product states."""

from .grid import Grid1D, Grid3D, Ordering
from .mps import Mps, ResourceLimitError, decompose, inner_product, reconstruct
from .orbitals import Kind, OrbitalSpec, sample

__version__ = "0.1.0"

__all__ = [
    "Grid1D",
    "Grid3D",
    "Kind",
    "Mps",
    "Ordering",
    "OrbitalSpec",
    "ResourceLimitError",
    "decompose",
    "inner_product",
    "reconstruct",
    "sample",
]
