"""Markovian noise on the GHZ channel: master-equation right-hand side and
a fixed-step numerical integrator.

The channel qubits decohere through jump operators sqrt(kappa) * sigma_axis
acting on individual qubits, with no system Hamiltonian.  Noise acts on the
n-qubit channel register alone (qubits numbered 1..n here); the input qubit
is attached only after transmission, which is equivalent because the jump
operators never touch it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import kron
from .states import PAULI, ghz_state, outer_density

__all__ = [
    "AXES",
    "NoiseTerm",
    "NoiseSpec",
    "same_axis_noise",
    "isotropic_noise",
    "mixed_axis_noise",
    "ghz_density",
    "validate_density_matrix",
    "lindblad_rhs",
    "evolve_numeric",
    "InvariantViolation",
]

AXES = ("x", "y", "z")

# Runtime guard threshold for trace drift / negativity during integration.
_GUARD_TOL = 1e-6


class InvariantViolation(RuntimeError):
    """A density-matrix invariant was broken during numerical evolution."""


@dataclass(frozen=True)
class NoiseTerm:
    """One jump operator: Pauli ``axis`` on ``qubit`` at decoherence rate ``kappa``."""

    qubit: int
    axis: str
    kappa: float


@dataclass(frozen=True)
class NoiseSpec:
    """A collection of independent single-qubit Pauli noise terms."""

    terms: tuple[NoiseTerm, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        seen = set()
        for term in self.terms:
            if term.axis not in AXES:
                raise ValueError(f"axis must be one of {AXES}, got {term.axis!r}")
            if term.kappa < 0:
                raise ValueError(f"kappa must be nonnegative, got {term.kappa}")
            if term.qubit < 1:
                raise ValueError(f"qubit index must be >= 1, got {term.qubit}")
            key = (term.qubit, term.axis)
            if key in seen:
                raise ValueError(f"duplicate noise term for qubit {term.qubit}, axis {term.axis}")
            seen.add(key)

    @property
    def max_qubit(self) -> int:
        return max((t.qubit for t in self.terms), default=0)

    @property
    def max_kappa(self) -> float:
        return max((t.kappa for t in self.terms), default=0.0)


def same_axis_noise(n_qubits: int, axis: str, kappa: float) -> NoiseSpec:
    """Equal-rate noise along one Pauli axis on every channel qubit."""
    return NoiseSpec(tuple(NoiseTerm(q, axis, kappa) for q in range(1, n_qubits + 1)))


def isotropic_noise(n_qubits: int, kappa: float) -> NoiseSpec:
    """Equal-rate x, y, and z noise on every channel qubit."""
    return NoiseSpec(
        tuple(NoiseTerm(q, a, kappa) for q in range(1, n_qubits + 1) for a in AXES)
    )


def mixed_axis_noise(axes: str, kappa: float) -> NoiseSpec:
    """One noise term per channel qubit, with per-qubit axes given positionally.

    ``axes`` is a string such as ``"xyzx"``: qubit 1 gets x, qubit 2 gets y, ...
    """
    return NoiseSpec(tuple(NoiseTerm(q, a, kappa) for q, a in enumerate(axes, start=1)))


def ghz_density(n: int) -> np.ndarray:
    """Density matrix of the n-qubit GHZ state."""
    return outer_density(ghz_state(n))


def validate_density_matrix(rho: np.ndarray, herm_tol: float = 1e-10,
                            trace_tol: float = 1e-10, eig_floor: float = -1e-8) -> None:
    """Raise ``InvariantViolation`` unless ``rho`` is Hermitian, unit-trace,
    and positive semidefinite within the given tolerances."""
    rho = np.asarray(rho)
    herm = np.abs(rho - rho.conj().T).max()
    if herm > herm_tol:
        raise InvariantViolation(f"not Hermitian: max asymmetry {herm:.3e}")
    tr = np.trace(rho)
    if abs(tr - 1.0) > trace_tol:
        raise InvariantViolation(f"trace {tr:.12g} differs from 1 by {abs(tr - 1):.3e}")
    lo = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min()
    if lo < eig_floor:
        raise InvariantViolation(f"negative eigenvalue {lo:.3e}")


def _n_qubits_of(rho: np.ndarray) -> int:
    dim = rho.shape[0]
    n = int(round(math.log2(dim)))
    if rho.ndim != 2 or rho.shape != (dim, dim) or 2**n != dim:
        raise ValueError(f"expected a 2^n square matrix, got shape {rho.shape}")
    return n


def _jump_operators(noise: NoiseSpec, n_qubits: int) -> list[tuple[float, np.ndarray]]:
    if noise.max_qubit > n_qubits:
        raise ValueError(
            f"noise acts on qubit {noise.max_qubit} but the register has {n_qubits} qubits"
        )
    ops = []
    for term in noise.terms:
        left = np.eye(2 ** (term.qubit - 1))
        right = np.eye(2 ** (n_qubits - term.qubit))
        ops.append((term.kappa, kron(left, PAULI[term.axis], right)))
    return ops


def lindblad_rhs(rho: np.ndarray, noise: NoiseSpec) -> np.ndarray:
    """Dissipative right-hand side sum_k (L rho L+ - {L+L, rho}/2).

    For Pauli jump operators L = sqrt(kappa) sigma one has L+L = kappa * I,
    so each term reduces to kappa * (sigma rho sigma - rho).
    """
    rho = np.asarray(rho, dtype=complex)
    n = _n_qubits_of(rho)
    ops = _jump_operators(noise, n)
    total_rate = sum(k for k, _ in ops)
    out = -total_rate * rho
    for k, sigma in ops:
        out = out + k * (sigma @ rho @ sigma)
    return out


def evolve_numeric(rho0: np.ndarray, noise: NoiseSpec, t: float,
                   dt_max: float | None = None) -> np.ndarray:
    """Integrate the master equation from ``rho0`` to time ``t``.

    Classical fixed-step fourth-order Runge-Kutta with ``ceil(t / dt_max)``
    steps; after each step the state is re-symmetrized to (rho + rho+)/2 and
    its trace and positivity are checked.  ``dt_max`` defaults to
    ``1e-3 / max(kappa)``.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    n = _n_qubits_of(rho0)
    if t < 0:
        raise ValueError(f"time must be nonnegative, got {t}")
    try:
        validate_density_matrix(rho0, herm_tol=_GUARD_TOL, trace_tol=_GUARD_TOL,
                                eig_floor=-_GUARD_TOL)
    except InvariantViolation as exc:
        raise InvariantViolation(f"initial state invalid: {exc}") from None
    if t == 0:
        return rho0.copy()

    kmax = noise.max_kappa
    if dt_max is None:
        dt_max = 1e-3 / kmax if kmax > 0 else t
    if dt_max <= 0:
        raise ValueError(f"dt_max must be positive, got {dt_max}")

    ops = _jump_operators(noise, n)
    total_rate = sum(k for k, _ in ops)

    def rhs(r):
        out = -total_rate * r
        for k, sigma in ops:
            out = out + k * (sigma @ r @ sigma)
        return out

    steps = max(1, math.ceil(t / dt_max))
    h = t / steps
    rho = rho0
    for step in range(1, steps + 1):
        k1 = rhs(rho)
        k2 = rhs(rho + 0.5 * h * k1)
        k3 = rhs(rho + 0.5 * h * k2)
        k4 = rhs(rho + h * k3)
        rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        rho = 0.5 * (rho + rho.conj().T)
        drift = abs(np.trace(rho).real - 1.0)
        if drift > _GUARD_TOL:
            raise InvariantViolation(f"trace drift {drift:.3e} at step {step}/{steps}")
        lo = np.linalg.eigvalsh(rho).min()
        if lo < -_GUARD_TOL:
            raise InvariantViolation(f"negative eigenvalue {lo:.3e} at step {step}/{steps}")
    return rho
