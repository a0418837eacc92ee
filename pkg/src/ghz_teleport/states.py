"""Quantum states, elementary gates, and the teleportation circuit.

The register convention throughout the package: qubit 1 is the unknown input
qubit and sits on the most significant bit of the basis index, the channel
qubits follow in order, and the receiver (Bob) holds the last qubit.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .linalg import kron

__all__ = [
    "IDENTITY_2",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "HADAMARD",
    "PAULI",
    "BlochAngles",
    "ghz_state",
    "bloch_input",
    "outer_density",
    "gate",
    "teleport_circuit",
]

IDENTITY_2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)

PAULI = {"x": PAULI_X, "y": PAULI_Y, "z": PAULI_Z}

_P0 = np.array([[1, 0], [0, 0]], dtype=complex)
_P1 = np.array([[0, 0], [0, 1]], dtype=complex)

_ANGLE_TOL = 1e-12


@dataclass(frozen=True)
class BlochAngles:
    """Polar angle ``theta`` in [0, pi] and azimuthal angle ``phi`` in [0, 2*pi)."""

    theta: float
    phi: float

    def __post_init__(self):
        if not -_ANGLE_TOL <= self.theta <= np.pi + _ANGLE_TOL:
            raise ValueError(f"theta={self.theta!r} outside [0, pi]")
        if not -_ANGLE_TOL <= self.phi <= 2 * np.pi + _ANGLE_TOL:
            raise ValueError(f"phi={self.phi!r} outside [0, 2*pi)")


def ghz_state(n: int) -> np.ndarray:
    """The n-qubit state (|0...0> + |1...1>)/sqrt(2); n=2 gives the EPR pair."""
    if not 2 <= n <= 6:
        raise ValueError(f"channel size must be 2..6, got {n}")
    v = np.zeros(2**n, dtype=complex)
    v[0] = v[-1] = 1 / np.sqrt(2)
    return v


def bloch_input(angles: BlochAngles) -> np.ndarray:
    """Pure input qubit cos(theta/2) e^{i phi/2} |0> + sin(theta/2) e^{-i phi/2} |1>."""
    half = angles.theta / 2
    return np.array(
        [
            np.cos(half) * np.exp(1j * angles.phi / 2),
            np.sin(half) * np.exp(-1j * angles.phi / 2),
        ]
    )


def outer_density(psi: np.ndarray) -> np.ndarray:
    """Rank-one density matrix |psi><psi|."""
    psi = np.asarray(psi)
    return np.outer(psi, psi.conj())


def _embed(op: np.ndarray, qubit: int, n_qubits: int) -> np.ndarray:
    return kron(np.eye(2 ** (qubit - 1)), op, np.eye(2 ** (n_qubits - qubit)))


def _check_qubit(q, n_qubits, name):
    if not isinstance(q, (int, np.integer)) or not 1 <= q <= n_qubits:
        raise ValueError(f"{name} qubit {q!r} outside 1..{n_qubits}")


def gate(kind: str, n_qubits: int, qubit: int | None = None,
         control: int | None = None, target: int | None = None) -> np.ndarray:
    """Unitary of a named gate embedded in an ``n_qubits`` register.

    ``kind`` is one of ``x``, ``y``, ``z``, ``h`` (single-qubit, pass
    ``qubit=``) or ``cnot``, ``cz`` (two-qubit, pass ``control=`` and
    ``target=``).
    """
    kind = kind.lower()
    if kind in ("x", "y", "z", "h"):
        if qubit is None:
            raise ValueError(f"gate {kind!r} needs qubit=")
        _check_qubit(qubit, n_qubits, "gate")
        op = HADAMARD if kind == "h" else PAULI[kind]
        return _embed(op, qubit, n_qubits)
    if kind in ("cnot", "cz"):
        if control is None or target is None:
            raise ValueError(f"gate {kind!r} needs control= and target=")
        _check_qubit(control, n_qubits, "control")
        _check_qubit(target, n_qubits, "target")
        if control == target:
            raise ValueError(f"control and target coincide on qubit {control}")
        apply = PAULI_X if kind == "cnot" else PAULI_Z
        return _embed(_P0, control, n_qubits) + (
            _embed(_P1, control, n_qubits) @ _embed(apply, target, n_qubits)
        )
    raise ValueError(f"unknown gate kind {kind!r}")


@functools.lru_cache(maxsize=None)
def _teleport_circuit_cached(n_channel: int) -> np.ndarray:
    if n_channel not in (2, 3, 4, 5, 6):
        raise ValueError(f"channel size must be 2..6, got {n_channel}")
    n = n_channel + 1
    u = np.eye(2**n, dtype=complex)
    for q in range(2, n_channel + 1):
        u = gate("cnot", n, control=1, target=q) @ u
    u = gate("h", n, qubit=1) @ u
    u = gate("cnot", n, control=n_channel, target=n) @ u
    u = gate("cz", n, control=1, target=n) @ u
    u.setflags(write=False)
    return u


def teleport_circuit(n_channel: int) -> np.ndarray:
    """Unitary of the full teleportation circuit on ``n_channel + 1`` qubits.

    Gate order: CNOTs from the input qubit onto channel qubits 2..n_channel,
    a Hadamard on the input qubit, the bit-flip correction as a CNOT from
    Alice's last channel qubit onto Bob's qubit, and the phase correction as
    a CZ from the input qubit onto Bob's qubit.  With a noiseless channel the
    circuit teleports exactly.
    """
    return _teleport_circuit_cached(n_channel).copy()
