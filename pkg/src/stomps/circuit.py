"""Sequential-unitary state preparation from a right-canonical MPS.

Register layout: qubits ``0 .. n_physical-1`` hold the grid bits (qubit 0 is
the most significant bit of the statevector index), followed by
``n_bond = ceil(log2 chi_max)`` bond qubits.  Site ``k`` of the MPS becomes a
gate on ``[k, bond_0, ..., bond_{m-1}]`` that maps ``|0>|alpha>`` to
``sum_{s, beta} A_k^s[alpha, beta] |s>|beta>``.  Gates run from site 0 to the
last site; the last tensor has a trivial right bond, so the bond register
ends in ``|0...0>``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import ceil, log2

import numpy as np

from .mps import DENSE_QUBIT_LIMIT, Mps, ResourceLimitError, reconstruct

UNITARY_TOL = 1e-10


@dataclass(frozen=True)
class Gate:
    unitary: np.ndarray
    targets: tuple[int, ...]

    def __post_init__(self) -> None:
        u = np.asarray(self.unitary)
        targets = tuple(int(t) for t in self.targets)
        m = len(targets)
        if m == 0 or len(set(targets)) != m:
            raise ValueError(f"targets must be distinct and non-empty, got {targets}")
        if u.shape != (1 << m, 1 << m):
            raise ValueError(f"unitary of shape {u.shape} does not act on {m} qubits")
        err = np.max(np.abs(u.conj().T @ u - np.eye(1 << m)))
        if err > UNITARY_TOL:
            raise ValueError(f"matrix is not unitary (deviation {err:.2e})")
        object.__setattr__(self, "unitary", u)
        object.__setattr__(self, "targets", targets)

    @property
    def n_qubits(self) -> int:
        return len(self.targets)


@dataclass(frozen=True)
class Circuit:
    gates: list[Gate]
    n_physical: int
    n_bond: int = 0

    def __post_init__(self) -> None:
        total = self.n_physical + self.n_bond
        for g in self.gates:
            if max(g.targets) >= total or min(g.targets) < 0:
                raise ValueError(f"gate targets {g.targets} outside register of {total} qubits")

    @property
    def n_qubits(self) -> int:
        return self.n_physical + self.n_bond

    @property
    def is_real(self) -> bool:
        return all(np.isrealobj(g.unitary) for g in self.gates)

    def summary(self) -> str:
        lines = [
            f"circuit: {len(self.gates)} gates, {self.n_physical} physical + "
            f"{self.n_bond} bond qubits"
        ]
        for i, g in enumerate(self.gates):
            lines.append(f"  gate {i}: {g.n_qubits} qubits on {list(g.targets)}")
        lines.append(f"two-qubit gate estimate (upper bound): {gate_cost_estimate(self)}")
        return "\n".join(lines)

    def to_json(self) -> str:
        gates = []
        for g in self.gates:
            u = np.asarray(g.unitary, dtype=complex).reshape(-1)
            gates.append(
                {"targets": list(g.targets), "unitary": [[float(z.real), float(z.imag)] for z in u]}
            )
        return json.dumps({"n_physical": self.n_physical, "n_bond": self.n_bond, "gates": gates})

    @classmethod
    def from_json(cls, text: str) -> Circuit:
        data = json.loads(text)
        gates = []
        for g in data["gates"]:
            pairs = np.asarray(g["unitary"], dtype=float)
            u = pairs[:, 0] + 1j * pairs[:, 1]
            if not np.any(pairs[:, 1]):
                u = u.real
            dim = 1 << len(g["targets"])
            gates.append(Gate(u.reshape(dim, dim), tuple(g["targets"])))
        return cls(gates, int(data["n_physical"]), int(data["n_bond"]))


@dataclass
class Statevector:
    """Dense amplitudes over ``n_qubits``; qubit 0 is the most significant bit."""

    amplitudes: np.ndarray
    n_qubits: int = field(init=False)

    def __post_init__(self) -> None:
        self.amplitudes = np.asarray(self.amplitudes)
        size = self.amplitudes.size
        n = size.bit_length() - 1
        if size != 1 << n:
            raise ValueError(f"statevector length {size} is not a power of two")
        self.n_qubits = n

    @classmethod
    def zeros(cls, n_qubits: int, dtype=complex) -> Statevector:
        _check_qubits(n_qubits)
        amps = np.zeros(1 << n_qubits, dtype=dtype)
        amps[0] = 1.0
        return cls(amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class OverlapEstimate:
    p0: float
    signed_amplitude: float


def _check_qubits(n: int) -> None:
    if n > DENSE_QUBIT_LIMIT:
        raise ResourceLimitError(
            f"{n} qubits exceeds the dense simulation ceiling of {DENSE_QUBIT_LIMIT}"
        )


def bond_qubits(chi_max: int) -> int:
    return 0 if chi_max <= 1 else ceil(log2(chi_max))


def _complete_isometry(v: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Extend orthonormal columns ``v`` to a square unitary.

    A random block is projected onto the orthogonal complement of ``v`` (twice,
    for stability) and orthonormalized by QR; ``v`` itself is kept verbatim.
    """
    dim, k = v.shape
    if k == dim:
        return v
    extra = rng.standard_normal((dim, dim - k))
    if np.iscomplexobj(v):
        extra = extra + 1j * rng.standard_normal((dim, dim - k))
    for _ in range(2):
        extra = extra - v @ (v.conj().T @ extra)
    q, _ = np.linalg.qr(extra)
    return np.hstack([v, q])


def compile(mps: Mps, seed: int = 0) -> Circuit:  # noqa: A001 - public name
    """Sequential circuit preparing ``mps`` from ``|0...0>``.

    The bond index at every site is padded to ``2**n_bond``; unused input
    columns are filled by a seeded orthogonal-complement completion, so the
    same MPS and seed always give the same gates.
    """
    err = mps.canonical_error()
    if err > UNITARY_TOL:
        raise ValueError(
            f"MPS is not right-canonical (deviation {err:.2e}); obtain it from "
            "mps.decompose or analytic.canonicalize first"
        )
    n = mps.n_sites
    m = bond_qubits(mps.chi_max)
    _check_qubits(n + m)
    rng = np.random.default_rng(seed)
    bdim = 1 << m
    bond = tuple(range(n, n + m))
    gates = []
    for k, t in enumerate(mps.tensors):
        _, dl, dr = t.shape
        v = np.zeros((2, bdim, dl), dtype=t.dtype)
        # column alpha is the image of |0>|alpha>; rows are (s, beta)
        v[:, :dr, :] = t.transpose(0, 2, 1)
        u = _complete_isometry(v.reshape(2 * bdim, dl), rng)
        gates.append(Gate(u, (k, *bond)))
    return Circuit(gates, n, m)


def _apply_gate(psi: np.ndarray, gate: Gate, n: int) -> np.ndarray:
    m = gate.n_qubits
    u = gate.unitary.reshape([2] * (2 * m))
    out = np.tensordot(u, psi, axes=(list(range(m, 2 * m)), list(gate.targets)))
    return np.moveaxis(out, list(range(m)), list(gate.targets))


def apply(circuit: Circuit, initial: Statevector | None = None) -> Statevector:
    """Apply every gate in order to ``initial`` (default ``|0...0>``)."""
    n = circuit.n_qubits
    if initial is None:
        initial = Statevector.zeros(n, dtype=float if circuit.is_real else complex)
    if initial.n_qubits != n:
        raise ValueError(f"statevector has {initial.n_qubits} qubits, circuit needs {n}")
    _check_qubits(n)
    dtype = np.result_type(initial.amplitudes, *(g.unitary for g in circuit.gates))
    psi = initial.amplitudes.astype(dtype).reshape([2] * n) if n else initial.amplitudes
    start = initial.norm()
    for g in circuit.gates:
        psi = _apply_gate(psi, g, n)
        drift = abs(np.linalg.norm(psi) - start)
        if drift > UNITARY_TOL:
            raise RuntimeError(f"norm drifted by {drift:.2e} during simulation")
    return Statevector(psi.reshape(-1))


def physical_amplitudes(circuit: Circuit, state: Statevector) -> np.ndarray:
    """Physical-register amplitudes with the bond register projected on ``|0...0>``."""
    return state.amplitudes.reshape(1 << circuit.n_physical, 1 << circuit.n_bond)[:, 0]


def preparation_fidelity(circuit: Circuit, mps: Mps) -> float:
    """``|<prepared physical part | reconstruct(mps)>|``."""
    phys = physical_amplitudes(circuit, apply(circuit))
    return float(abs(np.vdot(phys, reconstruct(mps))))


def inverse(circuit: Circuit) -> Circuit:
    gates = [Gate(g.unitary.conj().T, g.targets) for g in reversed(circuit.gates)]
    return Circuit(gates, circuit.n_physical, circuit.n_bond)


def pad_bond(circuit: Circuit, n_bond: int) -> Circuit:
    """Same gates on a larger bond register; the extra qubits stay idle in ``|0>``."""
    if n_bond < circuit.n_bond:
        raise ValueError("cannot shrink the bond register")
    return Circuit(list(circuit.gates), circuit.n_physical, n_bond)


def compute_uncompute(prep_a: Circuit, prep_b: Circuit) -> OverlapEstimate:
    """All-zeros amplitude of ``U_A^dagger U_B |0>``.

    Returns ``P0 = |<psi_A|psi_B>|**2`` and the signed real amplitude, which
    the simulation exposes directly.
    """
    if prep_a.n_physical != prep_b.n_physical:
        raise ValueError(
            f"physical registers differ: {prep_a.n_physical} vs {prep_b.n_physical}"
        )
    m = max(prep_a.n_bond, prep_b.n_bond)
    a, b = pad_bond(prep_a, m), pad_bond(prep_b, m)
    combined = Circuit(list(b.gates) + list(inverse(a).gates), b.n_physical, m)
    amp = apply(combined).amplitudes[0]
    return OverlapEstimate(float(abs(amp) ** 2), float(np.real(amp)))


def sample_p0(p0: float, shots: int, seed: int = 0) -> float:
    """Noise-free shot estimate of ``P0`` from a seeded binomial draw."""
    if shots < 1:
        raise ValueError("shots must be positive")
    if not 0.0 <= p0 <= 1.0 + 1e-12:
        raise ValueError(f"P0 = {p0} is not a probability")
    rng = np.random.default_rng(seed)
    return rng.binomial(shots, min(p0, 1.0)) / shots


def gate_cost_estimate(circuit: Circuit) -> int:
    """Upper-bound two-qubit gate count ``sum 4**m`` over gates on ``m >= 2`` qubits.

    This is a scaling model, not a transpiled count; single-qubit gates cost 0.
    """
    return sum(4**g.n_qubits for g in circuit.gates if g.n_qubits >= 2)
