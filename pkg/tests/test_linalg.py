import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from ghz_teleport import dagger, kron, matmul, partial_trace, trace
from ghz_teleport.states import IDENTITY_2, PAULI_X, PAULI_Y, PAULI_Z

MAT_TOL = 1e-10


def random_complex(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_density(rng, dim):
    m = random_complex(rng, (dim, dim))
    rho = m @ m.conj().T
    return rho / np.trace(rho)


# ---------------------------------------------------------------------------
# matmul
# ---------------------------------------------------------------------------


def test_matmul_identity():
    assert_allclose(matmul(IDENTITY_2, PAULI_X), PAULI_X, atol=MAT_TOL)


def test_matmul_pauli_involution():
    assert_allclose(matmul(PAULI_X, PAULI_X), IDENTITY_2, atol=MAT_TOL)


def test_matmul_y_z_product():
    # sigma_y @ sigma_z by hand: [[0,-i],[i,0]] @ [[1,0],[0,-1]] = i * sigma_x
    assert_allclose(matmul(PAULI_Y, PAULI_Z), 1j * PAULI_X, atol=MAT_TOL)


def test_matmul_shape_mismatch():
    with pytest.raises(ValueError, match=r"\(2, 2\).*\(3, 3\)"):
        matmul(np.eye(2), np.eye(3))


# ---------------------------------------------------------------------------
# kron
# ---------------------------------------------------------------------------


def test_kron_identities():
    assert_allclose(kron(IDENTITY_2, IDENTITY_2), np.eye(4), atol=MAT_TOL)


def test_kron_basis_vectors():
    ket0 = np.array([1, 0], dtype=complex)
    ket1 = np.array([0, 1], dtype=complex)
    assert_allclose(np.kron(ket0, ket1), np.array([0, 1, 0, 0]), atol=MAT_TOL)


def test_kron_gate_action_on_00():
    # (X tensor Z)|00> = |10>, worked out entry by entry
    ket00 = np.zeros(4, dtype=complex)
    ket00[0] = 1
    result = kron(PAULI_X, PAULI_Z) @ ket00
    expected = np.zeros(4, dtype=complex)
    expected[2] = 1
    assert_allclose(result, expected, atol=MAT_TOL)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_kron_associative_on_integer_matrices(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (rng.integers(-3, 4, size=(2, 2)) for _ in range(3))
    assert np.array_equal(kron(kron(a, b), c), kron(a, kron(b, c)))


# ---------------------------------------------------------------------------
# dagger
# ---------------------------------------------------------------------------


def test_dagger_identity_and_hermitian_pauli():
    assert_allclose(dagger(np.eye(3)), np.eye(3), atol=MAT_TOL)
    assert_allclose(dagger(PAULI_Y), PAULI_Y, atol=MAT_TOL)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_dagger_involution(seed):
    m = random_complex(np.random.default_rng(seed), (3, 3))
    assert_allclose(dagger(dagger(m)), m, atol=MAT_TOL)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_dagger_reverses_products(seed):
    rng = np.random.default_rng(seed)
    a = random_complex(rng, (3, 4))
    b = random_complex(rng, (4, 2))
    assert_allclose(dagger(matmul(a, b)), matmul(dagger(b), dagger(a)), atol=MAT_TOL)


# ---------------------------------------------------------------------------
# trace
# ---------------------------------------------------------------------------


def test_trace_values():
    assert trace(np.eye(4)) == pytest.approx(4)
    assert trace(PAULI_X) == pytest.approx(0)


def test_trace_ghz_density():
    from ghz_teleport import ghz_density

    assert trace(ghz_density(4)) == pytest.approx(1)


def test_trace_non_square():
    with pytest.raises(ValueError, match="square"):
        trace(np.ones((2, 3)))


# ---------------------------------------------------------------------------
# partial trace
# ---------------------------------------------------------------------------


def test_partial_trace_product_state():
    ket00 = np.zeros(4, dtype=complex)
    ket00[0] = 1
    rho = np.outer(ket00, ket00.conj())
    reduced = partial_trace(rho, 2, {1})
    assert_allclose(reduced, np.diag([1, 0]).astype(complex), atol=MAT_TOL)


def test_partial_trace_bell_marginal():
    bell = np.zeros(4, dtype=complex)
    bell[0] = bell[3] = 1 / np.sqrt(2)
    rho = np.outer(bell, bell.conj())
    assert_allclose(partial_trace(rho, 2, {1}), np.eye(2) / 2, atol=MAT_TOL)


def test_partial_trace_out_of_range():
    with pytest.raises(ValueError, match="outside"):
        partial_trace(np.eye(4) / 4, 2, {3})


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_partial_trace_of_product_factors(seed):
    rng = np.random.default_rng(seed)
    rho_a = random_density(rng, 2)
    rho_b = 1.7 * random_density(rng, 4)  # non-unit trace exposes the factor
    joint = kron(rho_a, rho_b)
    assert_allclose(partial_trace(joint, 3, {2, 3}), 1.7 * rho_a, atol=MAT_TOL)
    assert_allclose(partial_trace(joint, 3, {1}), rho_b, atol=MAT_TOL)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_partial_trace_preserves_trace(seed):
    rng = np.random.default_rng(seed)
    m = random_complex(rng, (8, 8))
    herm = m + m.conj().T
    for traced in ({1}, {2}, {1, 3}, {1, 2, 3}):
        assert abs(trace(partial_trace(herm, 3, traced)) - trace(herm)) < 1e-12 * 8
