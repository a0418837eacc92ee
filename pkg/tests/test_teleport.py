import numpy as np
import pytest
from numpy.testing import assert_allclose

from ghz_teleport import (
    BlochAngles,
    ClosedFormCase,
    FidelityCurve,
    TeleportScenario,
    average_fidelity_closed,
    average_fidelity_numeric,
    bloch_input,
    closed_formula,
    conjecture_report,
    evolve_closed_form,
    fidelity,
    fidelity_closed,
    fidelity_function,
    ghz_density,
    measurement_mixture,
    outer_density,
    same_axis_noise,
    sphere_average,
    supported_cases,
    teleport_measured,
    teleport_output,
)

ALL_CASES = supported_cases()


def random_angles(rng):
    return BlochAngles(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))


# ---------------------------------------------------------------------------
# Output state and pointwise fidelity
# ---------------------------------------------------------------------------


def test_noiseless_output_reproduces_input():
    rng = np.random.default_rng(17)
    for _ in range(5):
        angles = random_angles(rng)
        out = teleport_output(ghz_density(4), angles)
        assert_allclose(out, outer_density(bloch_input(angles)), atol=1e-12)


def test_fully_dephased_equator_state_gives_half():
    # Long-time all-z noise kills the coherences; an equator input comes out
    # maximally mixed.
    channel = evolve_closed_form(ClosedFormCase(4, "pauli_z"), 50.0)
    angles = BlochAngles(np.pi / 2, 0.7)
    out = teleport_output(channel, angles)
    assert abs(out[0, 1]) < 1e-12
    assert fidelity(out, angles) == pytest.approx(0.5, abs=1e-12)


def test_x_noise_equator_state_is_noise_free():
    # theta = pi/2, phi = 0 lies on the axis the x-noise leaves untouched.
    channel = evolve_closed_form(ClosedFormCase(4, "pauli_x"), 0.25)
    angles = BlochAngles(np.pi / 2, 0.0)
    assert fidelity(teleport_output(channel, angles), angles) == pytest.approx(1.0, abs=1e-12)


def test_fidelity_trivial_values():
    angles = BlochAngles(1.1, 2.3)
    assert fidelity(outer_density(bloch_input(angles)), angles) == pytest.approx(1.0)
    assert fidelity(np.eye(2) / 2, angles) == pytest.approx(0.5)


def test_fidelity_rejects_non_hermitian_input():
    rho = np.array([[0.5, 0.3], [-0.3, 0.5]])  # antisymmetric off-diagonal
    with pytest.raises(ValueError, match="imaginary"):
        fidelity(rho, BlochAngles(np.pi / 2, np.pi / 2))


def test_y_noise_pointwise_value():
    # F(pi/3, pi/4) of the 4-qubit y channel at kt = 0.2:
    # (1 + (sin^2 sin^2 + cos^2) e^{-0.8} + sin^2 cos^2 e^{-1.6}) / 2.
    theta, phi, kt = np.pi / 3, np.pi / 4, 0.2
    st2, ct2 = np.sin(theta) ** 2, np.cos(theta) ** 2
    sp2, cp2 = np.sin(phi) ** 2, np.cos(phi) ** 2
    expected = 0.5 * (1 + (st2 * sp2 + ct2) * np.exp(-0.8) + st2 * cp2 * np.exp(-1.6))
    channel = evolve_closed_form(ClosedFormCase(4, "pauli_y"), kt)
    got = fidelity(teleport_output(channel, BlochAngles(theta, phi)), BlochAngles(theta, phi))
    assert got == pytest.approx(expected, abs=1e-12)
    assert fidelity_closed(ClosedFormCase(4, "pauli_y"), kt, theta, phi) == pytest.approx(
        expected, abs=1e-14
    )


@pytest.mark.parametrize("case", ALL_CASES, ids=lambda c: f"{c.channel_size}-{c.noise_family}")
def test_pipeline_matches_closed_fidelity_on_grid(case):
    for kt in (0.1, 0.6):
        f = fidelity_function(evolve_closed_form(case, kt))
        for theta in np.linspace(0.05, np.pi - 0.05, 5):
            for phi in np.linspace(0.0, 2 * np.pi - 0.1, 5):
                assert abs(f(theta, phi) - fidelity_closed(case, kt, theta, phi)) < 1e-9


def test_fidelity_function_agrees_with_direct_pipeline():
    rng = np.random.default_rng(29)
    channel = evolve_closed_form(ClosedFormCase(3, "mixed_xyz"), 0.4)
    f = fidelity_function(channel)
    for _ in range(10):
        angles = random_angles(rng)
        direct = fidelity(teleport_output(channel, angles), angles)
        assert f(angles.theta, angles.phi) == pytest.approx(direct, abs=1e-13)


# ---------------------------------------------------------------------------
# Sphere average
# ---------------------------------------------------------------------------


def test_sphere_average_constant():
    assert sphere_average(lambda t, p: 1.0) == pytest.approx(1.0, abs=1e-12)


def test_sphere_average_cos_squared():
    assert sphere_average(lambda t, p: np.cos(t) ** 2) == pytest.approx(1 / 3, abs=1e-12)


def test_sphere_average_nonconvergence_error():
    rng = np.random.default_rng(1)

    def noisy(t, p):
        return rng.standard_normal()

    with pytest.raises(RuntimeError, match="converge"):
        sphere_average(noisy, max_nodes=16)


def test_isotropic_average_value():
    # kt = 0.1: (3 + e^{-0.8} + 2 e^{-1.6}) / 6.
    case = ClosedFormCase(4, "isotropic")
    scenario = TeleportScenario(4, case)
    expected = (3 + np.exp(-0.8) + 2 * np.exp(-1.6)) / 6
    assert average_fidelity_numeric(scenario, 0.1) == pytest.approx(expected, abs=1e-10)
    assert average_fidelity_closed(case, 0.1) == pytest.approx(expected, abs=1e-14)


def test_z_average_value():
    # kt = 0.5: 2/3 + e^{-4} / 3.
    expected = 2 / 3 + np.exp(-4.0) / 3
    assert average_fidelity_closed(ClosedFormCase(4, "pauli_z"), 0.5) == pytest.approx(
        expected, abs=1e-14
    )


def test_x_average_same_for_three_and_four_qubits():
    c3, c4 = ClosedFormCase(3, "pauli_x"), ClosedFormCase(4, "pauli_x")
    for kt in np.linspace(0, 2, 9):
        assert average_fidelity_closed(c3, kt) == average_fidelity_closed(c4, kt)


@pytest.mark.parametrize("case", ALL_CASES, ids=lambda c: f"{c.channel_size}-{c.noise_family}")
def test_quadrature_matches_formula(case):
    scenario = TeleportScenario(case.channel_size, case)
    for kt in (0.05, 0.5, 1.0):
        got = average_fidelity_numeric(scenario, kt)
        assert abs(got - average_fidelity_closed(case, kt)) < 1e-9


def test_formula_object_baseline_and_monotonicity():
    for case in ALL_CASES:
        formula = closed_formula(case)
        assert formula.evaluate(0.0) == pytest.approx(1.0, abs=1e-14)
        grid = np.linspace(0, 10, 200)
        values = [formula.evaluate(kt) for kt in grid]
        assert all(b <= a + 1e-14 for a, b in zip(values, values[1:]))
        assert min(values) >= 0.5 - 1e-14


def test_numeric_scenario_with_explicit_noise_spec():
    scenario = TeleportScenario(3, same_axis_noise(3, "y", 2.0))
    case = ClosedFormCase(3, "pauli_y")
    got = average_fidelity_numeric(scenario, 0.3)
    assert got == pytest.approx(average_fidelity_closed(case, 0.3), abs=1e-8)


def test_fidelity_curve_validation():
    FidelityCurve(((0.0, 1.0), (0.5, 0.8)), "closed_form")
    with pytest.raises(ValueError, match="source"):
        FidelityCurve(((0.0, 1.0),), "guesswork")
    with pytest.raises(ValueError, match="outside"):
        FidelityCurve(((0.0, 1.5),), "closed_form")


def test_scenario_validation():
    with pytest.raises(ValueError, match="sorted"):
        TeleportScenario(3, same_axis_noise(3, "x", 1.0), (0.5, 0.1))
    with pytest.raises(ValueError, match="channel size"):
        TeleportScenario(9, same_axis_noise(3, "x", 1.0))
    with pytest.raises(ValueError, match="scenario says"):
        TeleportScenario(4, ClosedFormCase(3, "pauli_x"))


# ---------------------------------------------------------------------------
# Measurement branches
# ---------------------------------------------------------------------------


def test_epr_outcomes_are_uniform_and_exact():
    angles = BlochAngles(0.9, 4.0)
    rho_in = outer_density(bloch_input(angles))
    for idx in range(4):
        prob, state = teleport_measured(ghz_density(2), angles, format(idx, "02b"))
        assert prob == pytest.approx(0.25, abs=1e-12)
        assert_allclose(state, rho_in, atol=1e-12)


def test_outcome_probabilities_sum_to_one():
    rng = np.random.default_rng(41)
    channel = evolve_closed_form(ClosedFormCase(4, "isotropic"), 0.3)
    angles = random_angles(rng)
    total = sum(
        teleport_measured(channel, angles, format(idx, "04b"))[0] for idx in range(16)
    )
    assert total == pytest.approx(1.0, abs=1e-12)


def test_impossible_outcome_returns_zero_without_state():
    # Noiseless teleportation only ever yields all-equal sender channel bits.
    prob, state = teleport_measured(ghz_density(4), BlochAngles(1.0, 1.0), "0110")
    assert prob == 0.0
    assert state is None


def test_mixture_equals_traced_output():
    # Direct summation over all outcomes reproduces the partial-trace result.
    rng = np.random.default_rng(43)
    channel = evolve_closed_form(ClosedFormCase(4, "pauli_y"), 0.3)
    angles = random_angles(rng)
    mixture = measurement_mixture(channel, angles)
    assert np.abs(mixture - teleport_output(channel, angles)).max() < 1e-10


def test_outcome_length_validation():
    with pytest.raises(ValueError, match="length 4"):
        teleport_measured(ghz_density(4), BlochAngles(1.0, 1.0), "01")


# ---------------------------------------------------------------------------
# Conjecture report
# ---------------------------------------------------------------------------


def test_three_qubit_mixed_always_beats_y():
    report = conjecture_report(3, samples=50)
    flagged_y = [kt for kt, fam in report.mixed_exceeds if fam == "pauli_y"]
    assert flagged_y == list(report.kt_grid)
    # The analytic gap is (e^{-2kt} - e^{-6kt}) / 6.
    for kt, mixed, y in zip(report.kt_grid, report.fbar["mixed_xyz"], report.fbar["pauli_y"]):
        assert mixed - y == pytest.approx((np.exp(-2 * kt) - np.exp(-6 * kt)) / 6, abs=1e-12)


def test_four_qubit_crossover_location():
    report = conjecture_report(4, samples=100)
    root = report.crossover_vs_pauli_z
    assert root is not None and 0.15 < root < 0.3

    # Independent bisection of e^{-2x} + e^{-4x} + e^{-6x} = 1 + 2 e^{-8x}.
    def gap(x):
        return np.exp(-2 * x) + np.exp(-4 * x) + np.exp(-6 * x) - 1 - 2 * np.exp(-8 * x)

    lo, hi = 0.15, 0.3
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if gap(lo) * gap(mid) > 0:
            lo = mid
        else:
            hi = mid
    assert root == pytest.approx(0.5 * (lo + hi), abs=1e-9)

    flagged_z = [kt for kt, fam in report.mixed_exceeds if fam == "pauli_z"]
    assert flagged_z and max(flagged_z) < root < min(
        kt for kt in report.kt_grid if kt not in flagged_z and kt > min(flagged_z)
    )


def test_four_qubit_x_noise_dominates_every_family():
    report = conjecture_report(4, samples=60)
    x_curve = report.fbar["pauli_x"]
    for family, curve in report.fbar.items():
        assert all(x >= v - 1e-12 for x, v in zip(x_curve, curve)), family


def test_three_beats_four_for_y_z_isotropic():
    for family in ("pauli_y", "pauli_z", "isotropic"):
        c3, c4 = ClosedFormCase(3, family), ClosedFormCase(4, family)
        for kt in np.linspace(0.05, 1.0, 39):
            assert average_fidelity_closed(c3, kt) > average_fidelity_closed(c4, kt)


def test_conjecture_size_validation():
    with pytest.raises(ValueError, match="3 and 4"):
        conjecture_report(5)
