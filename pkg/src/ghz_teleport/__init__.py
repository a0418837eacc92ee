"""Teleportation of an unknown qubit through noisy multi-qubit GHZ channels.

The package solves the channel's Lindblad dynamics both numerically (fixed
step RK4) and in closed form, feeds the evolved channel through the
teleportation circuit, and evaluates pointwise and sphere-averaged fidelity,
including the comparison between same-axis and mixed-axis noise.
"""

from .closed_forms import (
    ISOTROPIC_FAMILY,
    MIXED_XYZ_FAMILY,
    MIXED_XYZX_FAMILY,
    PAULI_X_FAMILY,
    PAULI_Y_FAMILY,
    PAULI_Z_FAMILY,
    SUPPORTED_CASES,
    ClosedFormCase,
    ansatz_ode_coefficients,
    evolve_closed_form,
    integrate_reduced_system,
    reduced_system,
    supported_cases,
)
from .lindblad import (
    InvariantViolation,
    NoiseSpec,
    NoiseTerm,
    evolve_numeric,
    ghz_density,
    isotropic_noise,
    lindblad_rhs,
    mixed_axis_noise,
    same_axis_noise,
    validate_density_matrix,
)
from .linalg import dagger, kron, matmul, partial_trace, trace
from .states import (
    HADAMARD,
    IDENTITY_2,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    BlochAngles,
    bloch_input,
    gate,
    ghz_state,
    outer_density,
    teleport_circuit,
)
from .teleport import (
    AverageFidelityFormula,
    ConjectureReport,
    FidelityCurve,
    TeleportScenario,
    average_fidelity_closed,
    average_fidelity_numeric,
    closed_formula,
    conjecture_report,
    fidelity,
    fidelity_closed,
    fidelity_function,
    measurement_mixture,
    sphere_average,
    teleport_measured,
    teleport_output,
)

__version__ = "0.1.0"
