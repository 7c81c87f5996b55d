import numpy as np
import pytest

from conftest import random_density, random_hermitian, random_state, random_unitary
from geoqm.linops import (
    PAULI,
    SIGMA1,
    SIGMA2,
    SIGMA3,
    commutator,
    eig_herm,
    evolve,
    kron,
    matrix_sqrt,
    partial_trace,
    propagator_matrix,
    require_density,
    require_hermitian,
    require_state,
    trace_inner,
)


def test_require_hermitian_symmetrizes_and_rejects():
    a = np.array([[1.0, 2.0 + 1e-14j], [2.0, -1.0]])
    out = require_hermitian(a)
    assert np.max(np.abs(out - out.conj().T)) == 0.0
    with pytest.raises(ValueError, match="not Hermitian"):
        require_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError, match="square"):
        require_hermitian(np.ones((2, 3)))
    with pytest.raises(ValueError, match="finite"):
        require_hermitian(np.array([[np.nan, 0.0], [0.0, 0.0]]))


def test_require_state_flattens_and_checks_norm():
    psi = require_state([[1.0], [1j]])
    assert psi.shape == (2,)
    require_state([1.0, 0.0], unit=True)
    with pytest.raises(ValueError, match="unit"):
        require_state([1.0, 1.0], unit=True)
    with pytest.raises(ValueError):
        require_state([])


def test_require_density_names_negative_eigenvalue():
    rho = np.diag([1.2, -0.2]).astype(complex)
    with pytest.raises(ValueError, match="negative eigenvalue -2"):
        require_density(rho)
    with pytest.raises(ValueError, match="trace"):
        require_density(np.eye(2))
    rng = np.random.default_rng(0)
    rho = random_density(rng, 3)
    assert require_density(rho) is not None


def test_eig_herm_orders_reconstructs_and_fixes_phases():
    rng = np.random.default_rng(1)
    a = random_hermitian(rng, 5)
    w, v = eig_herm(a)
    assert np.all(np.diff(w) >= 0)
    assert np.max(np.abs((v * w) @ v.conj().T - a)) < 1e-12
    w2, v2 = eig_herm(a)
    assert np.array_equal(v, v2)
    # the phase-anchoring component of each column is real positive
    for k in range(5):
        idx = np.flatnonzero(np.abs(v[:, k]) > 1e-12 * np.max(np.abs(v[:, k])))[0]
        assert v[idx, k].real > 0 and abs(v[idx, k].imag) < 1e-14


def test_partial_trace_factors_product_states():
    rng = np.random.default_rng(2)
    rho_a = random_density(rng, 2)
    rho_b = random_density(rng, 3)
    rho = kron(rho_a, rho_b)
    assert np.max(np.abs(partial_trace(rho, (2, 3), keep=1) - rho_a)) < 1e-14
    assert np.max(np.abs(partial_trace(rho, (2, 3), keep=2) - rho_b)) < 1e-14
    assert abs(np.trace(partial_trace(rho, (2, 3), keep=1)) - 1.0) < 1e-14
    with pytest.raises(ValueError, match="keep"):
        partial_trace(rho, (2, 3), keep=0)
    with pytest.raises(ValueError, match="factor"):
        partial_trace(rho, (2, 2), keep=1)


def test_propagator_is_unitary_and_inverts():
    rng = np.random.default_rng(3)
    h = random_hermitian(rng, 4)
    u = propagator_matrix(h, 0.7, hbar=0.5)
    assert np.max(np.abs(u @ u.conj().T - np.eye(4))) < 1e-13
    assert np.max(np.abs(u @ propagator_matrix(h, -0.7, hbar=0.5) - np.eye(4))) < 1e-13
    psi = random_state(rng, 4)
    out = evolve(h, psi, 0.7, hbar=0.5)
    assert abs(np.vdot(out, out).real - 1.0) < 1e-13
    with pytest.raises(ValueError):
        propagator_matrix(h, 1.0, hbar=0.0)


def test_matrix_sqrt_squares_back_and_rejects_indefinite():
    rng = np.random.default_rng(4)
    m = random_hermitian(rng, 4)
    psd = m @ m.conj().T + 1e-3 * np.eye(4)
    root = matrix_sqrt(psd)
    assert np.max(np.abs(root @ root - psd)) < 1e-11
    with pytest.raises(ValueError, match="PSD"):
        matrix_sqrt(np.diag([1.0, -0.5]))


def test_pauli_algebra_and_trace_inner():
    assert np.max(np.abs(commutator(SIGMA1, SIGMA2) - 2j * SIGMA3)) == 0.0
    for k in range(1, 4):
        assert abs(trace_inner(PAULI[k], PAULI[k]) - 2.0) < 1e-15
        assert abs(trace_inner(PAULI[0], PAULI[k])) < 1e-15
    a = np.array([[0.0, 1.0], [0.0, 0.0]])
    assert trace_inner(a, a) == pytest.approx(1.0)
