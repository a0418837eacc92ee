"""End-to-end teleportation: output state, fidelity, sphere-averaged fidelity
(numerical quadrature and exact formulas), measurement branches, and the
same-axis versus mixed-axis comparison report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .closed_forms import (
    ISOTROPIC_FAMILY,
    MIXED_XYZ_FAMILY,
    MIXED_XYZX_FAMILY,
    PAULI_X_FAMILY,
    PAULI_Y_FAMILY,
    PAULI_Z_FAMILY,
    ClosedFormCase,
    evolve_closed_form,
)
from .lindblad import NoiseSpec, evolve_numeric, ghz_density
from .linalg import dagger, kron, partial_trace
from .states import BlochAngles, bloch_input, outer_density
from .states import _teleport_circuit_cached as _circuit

__all__ = [
    "TeleportScenario",
    "FidelityCurve",
    "AverageFidelityFormula",
    "teleport_output",
    "fidelity",
    "fidelity_function",
    "sphere_average",
    "average_fidelity_numeric",
    "average_fidelity_closed",
    "fidelity_closed",
    "closed_formula",
    "teleport_measured",
    "measurement_mixture",
    "ConjectureReport",
    "conjecture_report",
]

_IMAG_TOL = 1e-10


def _n_channel_of(channel_rho: np.ndarray) -> int:
    dim = channel_rho.shape[0]
    n = int(round(math.log2(dim)))
    if channel_rho.shape != (dim, dim) or 2**n != dim or not 2 <= n <= 6:
        raise ValueError(f"channel state has unsupported shape {channel_rho.shape}")
    return n


@dataclass(frozen=True)
class TeleportScenario:
    """Channel size, noise model, and the kappa*t grid to evaluate."""

    n_channel: int
    noise: NoiseSpec | ClosedFormCase
    time_grid: tuple[float, ...] = ()

    def __post_init__(self):
        if self.n_channel not in (2, 3, 4, 5, 6):
            raise ValueError(f"channel size must be 2..6, got {self.n_channel}")
        grid = tuple(float(x) for x in self.time_grid)
        object.__setattr__(self, "time_grid", grid)
        if any(x < 0 for x in grid) or list(grid) != sorted(grid):
            raise ValueError("time grid must be sorted ascending and nonnegative")
        if isinstance(self.noise, ClosedFormCase):
            if self.noise.channel_size != self.n_channel:
                raise ValueError(
                    f"case is for {self.noise.channel_size} channel qubits, "
                    f"scenario says {self.n_channel}"
                )
        elif isinstance(self.noise, NoiseSpec):
            if self.noise.max_qubit > self.n_channel:
                raise ValueError(
                    f"noise acts on qubit {self.noise.max_qubit} but the channel "
                    f"has {self.n_channel} qubits"
                )
        else:
            raise TypeError("noise must be a NoiseSpec or a ClosedFormCase")

    def reference_rate(self) -> float:
        """Rate used to convert dimensionless kappa*t into physical time."""
        k = self.noise.kappa if isinstance(self.noise, ClosedFormCase) else self.noise.max_kappa
        if k <= 0:
            raise ValueError("scenario has no positive decoherence rate")
        return k

    def channel_state(self, kt: float, dt_max: float | None = None) -> np.ndarray:
        """Evolved channel density matrix at dimensionless time ``kt``."""
        if kt == 0:
            return ghz_density(self.n_channel)
        t = kt / self.reference_rate()
        if isinstance(self.noise, ClosedFormCase):
            return evolve_closed_form(self.noise, t)
        return evolve_numeric(ghz_density(self.n_channel), self.noise, t, dt_max)


@dataclass(frozen=True)
class FidelityCurve:
    """Sampled (kappa*t, average fidelity) series with provenance."""

    points: tuple[tuple[float, float], ...]
    source: str

    def __post_init__(self):
        if self.source not in ("numeric_pipeline", "closed_form"):
            raise ValueError(f"unknown curve source {self.source!r}")
        pts = tuple((float(kt), float(f)) for kt, f in self.points)
        object.__setattr__(self, "points", pts)
        for kt, f in pts:
            if not 0.0 <= f <= 1.0 + 1e-12:
                raise ValueError(f"average fidelity {f} at kt={kt} outside [0, 1]")


@dataclass(frozen=True)
class AverageFidelityFormula:
    """Exact average-fidelity curve of a closed-form case, as a callable of kappa*t."""

    case: ClosedFormCase
    evaluate: Callable[[float], float] = field(compare=False)


# ---------------------------------------------------------------------------
# Pipeline: attach the input qubit, run the circuit, trace out the sender.
# ---------------------------------------------------------------------------


def _pipeline_output(channel_rho: np.ndarray, rho_in: np.ndarray,
                     circuit: np.ndarray | None = None) -> np.ndarray:
    n = _n_channel_of(channel_rho)
    u = _circuit(n) if circuit is None else circuit
    total = u @ kron(rho_in, channel_rho) @ dagger(u)
    return partial_trace(total, n + 1, range(1, n + 1))


def teleport_output(channel_rho: np.ndarray, angles: BlochAngles) -> np.ndarray:
    """Bob's single-qubit state after teleporting through ``channel_rho``."""
    return _pipeline_output(channel_rho, outer_density(bloch_input(angles)))


def fidelity(rho_out: np.ndarray, angles: BlochAngles) -> float:
    """Overlap of the teleported state with the intended input state."""
    rho_out = np.asarray(rho_out)
    if rho_out.shape != (2, 2):
        raise ValueError(f"expected a single-qubit state, got shape {rho_out.shape}")
    psi = bloch_input(angles)
    value = complex(psi.conj() @ rho_out @ psi)
    if abs(value.imag) > _IMAG_TOL:
        raise ValueError(f"fidelity has imaginary part {value.imag:.3e}; "
                         "upstream state is not Hermitian")
    return value.real


def fidelity_function(channel_rho: np.ndarray) -> Callable[[float, float], float]:
    """The map (theta, phi) -> teleportation fidelity for a fixed channel state.

    The output state is linear in the input density matrix, so the circuit and
    partial trace are applied once to each of the four single-qubit basis
    matrices; every fidelity evaluation afterwards is 2x2 algebra.  Agrees
    with ``fidelity(teleport_output(...), ...)`` to rounding.
    """
    n = _n_channel_of(channel_rho)
    u = _circuit(n)
    basis_maps = np.empty((2, 2, 2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            e = np.zeros((2, 2), dtype=complex)
            e[i, j] = 1.0
            basis_maps[i, j] = _pipeline_output(channel_rho, e, circuit=u)

    def f(theta: float, phi: float) -> float:
        psi = bloch_input(BlochAngles(theta, phi))
        rho_out = np.einsum("i,j,ijkl->kl", psi, psi.conj(), basis_maps)
        value = complex(psi.conj() @ rho_out @ psi)
        if abs(value.imag) > _IMAG_TOL:
            raise ValueError(f"fidelity has imaginary part {value.imag:.3e}")
        return value.real

    return f


# ---------------------------------------------------------------------------
# Sphere average.
# ---------------------------------------------------------------------------


def sphere_average(f: Callable[[float, float], float], tol: float = 1e-10,
                   max_nodes: int = 256) -> float:
    """Average of f(theta, phi) over the unit sphere.

    Tensor-product Gauss-Legendre rule with the substitution u = cos(theta);
    the node count per axis is doubled until two successive estimates agree
    to ``tol``.
    """
    previous = None
    nodes = 8
    while nodes <= max_nodes:
        u, wu = np.polynomial.legendre.leggauss(nodes)
        x, wx = np.polynomial.legendre.leggauss(nodes)
        phi = np.pi * (x + 1.0)
        wphi = np.pi * wx
        theta = np.arccos(u)
        total = 0.0
        for th, w1 in zip(theta, wu):
            row = 0.0
            for ph, w2 in zip(phi, wphi):
                row += w2 * f(th, ph)
            total += w1 * row
        estimate = total / (4.0 * np.pi)
        if previous is not None and abs(estimate - previous) < tol:
            return estimate
        previous = estimate
        nodes *= 2
    raise RuntimeError(f"sphere average did not converge with {max_nodes} nodes per axis")


def average_fidelity_numeric(scenario: TeleportScenario, kt: float,
                             dt_max: float | None = None) -> float:
    """Quadrature average of the pipeline fidelity at dimensionless time ``kt``."""
    if kt < 0:
        raise ValueError(f"kt must be nonnegative, got {kt}")
    channel = scenario.channel_state(kt, dt_max)
    return sphere_average(fidelity_function(channel))


# ---------------------------------------------------------------------------
# Exact formulas.
# ---------------------------------------------------------------------------


def average_fidelity_closed(case: ClosedFormCase, kt: float) -> float:
    """Exact sphere-averaged fidelity of a closed-form case at kappa*t = kt."""
    n, fam = case.channel_size, case.noise_family

    def E(rate):
        return math.exp(-rate * kt)

    if fam == PAULI_X_FAMILY:
        return (2 + E(4)) / 3
    if fam == PAULI_Y_FAMILY:
        if n == 3:
            return (3 + E(2) + E(4) + E(6)) / 6
        return (3 + 2 * E(4) + E(8)) / 6
    if fam == PAULI_Z_FAMILY:
        return (2 + E(2 * n)) / 3
    if fam == ISOTROPIC_FAMILY:
        if n == 3:
            return (3 + E(8) + 2 * E(12)) / 6
        return (3 + E(8) + 2 * E(16)) / 6
    if fam == MIXED_XYZ_FAMILY:
        return (3 + 2 * E(2) + E(4)) / 6
    return (3 + E(2) + E(4) + E(6)) / 6


def fidelity_closed(case: ClosedFormCase, kt: float, theta: float, phi: float) -> float:
    """Exact pointwise fidelity F(theta, phi) of a closed-form case."""
    n, fam = case.channel_size, case.noise_family
    ct2 = math.cos(theta) ** 2
    st2 = math.sin(theta) ** 2
    cp2 = math.cos(phi) ** 2
    sp2 = math.sin(phi) ** 2

    def E(rate):
        return math.exp(-rate * kt)

    if fam == PAULI_X_FAMILY:
        return 0.5 * ((1 + st2 * cp2) + E(4) * (ct2 + st2 * sp2))
    if fam == PAULI_Y_FAMILY:
        if n == 3:
            return 0.5 * (1 + st2 * sp2 * E(2) + ct2 * E(4) + st2 * cp2 * E(6))
        return 0.5 * (1 + (st2 * sp2 + ct2) * E(4) + st2 * cp2 * E(8))
    if fam == PAULI_Z_FAMILY:
        return 1 - 0.5 * (1 - E(2 * n)) * st2
    if fam == ISOTROPIC_FAMILY:
        tail = E(12) if n == 3 else E(16)
        return 0.5 * (1 + ct2 * E(8) + st2 * tail)
    if fam == MIXED_XYZ_FAMILY:
        return 0.5 * (1 + E(2) * (ct2 + st2 * sp2) + E(4) * st2 * cp2)
    return 0.5 * (1 + E(2) * ct2 + E(4) * st2 * cp2 + E(6) * st2 * sp2)


def closed_formula(case: ClosedFormCase) -> AverageFidelityFormula:
    """The exact average-fidelity curve of ``case`` as a reusable callable."""
    return AverageFidelityFormula(case=case, evaluate=lambda kt: average_fidelity_closed(case, kt))


# ---------------------------------------------------------------------------
# Explicit measurement branches.
# ---------------------------------------------------------------------------


def teleport_measured(channel_rho: np.ndarray, angles: BlochAngles,
                      outcome: str) -> tuple[float, np.ndarray | None]:
    """Probability of a computational-basis outcome on the sender's register
    and Bob's normalized conditional state.

    ``outcome`` is a bit string over the sender's qubits (the input qubit
    followed by all channel qubits except Bob's).  A zero-probability outcome
    returns ``(0.0, None)`` rather than dividing by zero.  Weighting the
    conditional states by their probabilities and summing over all outcomes
    reproduces ``teleport_output``.
    """
    n = _n_channel_of(channel_rho)
    if len(outcome) != n or set(outcome) - {"0", "1"}:
        raise ValueError(f"outcome must be a bit string of length {n}, got {outcome!r}")
    u = _circuit(n)
    total = u @ kron(outer_density(bloch_input(angles)), channel_rho) @ dagger(u)
    alice_dim = 2**n
    blocks = total.reshape(alice_dim, 2, alice_dim, 2)
    idx = int(outcome, 2)
    block = blocks[idx, :, idx, :]
    prob = float(np.trace(block).real)
    if prob <= 1e-14:
        return 0.0, None
    return prob, block / prob


def measurement_mixture(channel_rho: np.ndarray, angles: BlochAngles) -> np.ndarray:
    """Outcome-probability-weighted mixture of all conditional output states."""
    n = _n_channel_of(channel_rho)
    mixture = np.zeros((2, 2), dtype=complex)
    for idx in range(2**n):
        outcome = format(idx, f"0{n}b")
        prob, state = teleport_measured(channel_rho, angles, outcome)
        if state is not None:
            mixture += prob * state
    return mixture


# ---------------------------------------------------------------------------
# Same-axis versus mixed-axis comparison.
# ---------------------------------------------------------------------------

_SAME_AXIS_FAMILIES = (PAULI_X_FAMILY, PAULI_Y_FAMILY, PAULI_Z_FAMILY, ISOTROPIC_FAMILY)


@dataclass(frozen=True)
class ConjectureReport:
    """Average-fidelity table of all noise families of one channel size, with
    every grid point where the mixed-axis channel beats a same-axis channel,
    and the root where the mixed-axis curve crosses the Pauli-Z curve."""

    channel_size: int
    mixed_family: str
    kt_grid: tuple[float, ...]
    fbar: dict[str, tuple[float, ...]]
    mixed_exceeds: tuple[tuple[float, str], ...]
    crossover_vs_pauli_z: float | None

    def families(self) -> tuple[str, ...]:
        return tuple(self.fbar.keys())


def _bisect_root(g: Callable[[float], float], lo: float, hi: float,
                 width: float = 1e-10) -> float:
    glo = g(lo)
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        gmid = g(mid)
        if (glo > 0) == (gmid > 0):
            lo, glo = mid, gmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def conjecture_report(channel_size: int, samples: int = 100,
                      kt_max: float = 1.0) -> ConjectureReport:
    """Compare the mixed-axis channel against every same-axis channel.

    Evaluates the exact average fidelities on a kappa*t grid over
    ``(0, kt_max]``, flags every (kt, family) pair where the mixed-axis
    average fidelity strictly exceeds the same-axis one, and locates the
    crossover against the Pauli-Z curve by bisection.
    """
    if channel_size not in (3, 4):
        raise ValueError(f"comparison is available for channel sizes 3 and 4, got {channel_size}")
    mixed_family = MIXED_XYZ_FAMILY if channel_size == 3 else MIXED_XYZX_FAMILY
    grid = tuple(kt_max * (i + 1) / samples for i in range(samples))

    fbar: dict[str, tuple[float, ...]] = {}
    for family in _SAME_AXIS_FAMILIES + (mixed_family,):
        case = ClosedFormCase(channel_size, family)
        fbar[family] = tuple(average_fidelity_closed(case, kt) for kt in grid)

    exceeds = []
    for family in _SAME_AXIS_FAMILIES:
        for kt, same, mixed in zip(grid, fbar[family], fbar[mixed_family]):
            if mixed > same:
                exceeds.append((kt, family))

    mixed_case = ClosedFormCase(channel_size, mixed_family)
    z_case = ClosedFormCase(channel_size, PAULI_Z_FAMILY)

    def gap(kt):
        return average_fidelity_closed(mixed_case, kt) - average_fidelity_closed(z_case, kt)

    crossover = None
    previous = None
    for kt in grid:
        value = gap(kt)
        if previous is not None and (previous[1] > 0) != (value > 0):
            crossover = _bisect_root(gap, previous[0], kt)
            break
        previous = (kt, value)

    return ConjectureReport(
        channel_size=channel_size,
        mixed_family=mixed_family,
        kt_grid=grid,
        fbar=fbar,
        mixed_exceeds=tuple(exceeds),
        crossover_vs_pauli_z=crossover,
    )
