"""Dense complex linear algebra for finite-level systems.

Hermitian eigendecompositions with deterministic eigenvector phases,
unitary time evolution, partial traces, and the small matrix-function
toolbox (square roots of positive semidefinite matrices, commutators,
trace inner products) that the geometric modules build on.

All functions accept and return plain numpy arrays; validation helpers
raise ``ValueError`` on malformed input instead of wrapping arrays in
dedicated classes.
"""

from __future__ import annotations

import numpy as np

HERMITICITY_TOL = 1e-12
PSD_CLIP = 1e-10


def require_hermitian(a: np.ndarray, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Validate that ``a`` is square and Hermitian within ``tol`` (max-norm).

    Returns the exactly symmetrized matrix (A + A†)/2 so downstream
    eigensolvers see a bitwise-Hermitian input.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.view(float))):
        raise ValueError("matrix has non-finite entries")
    dev = np.max(np.abs(a - a.conj().T))
    scale = max(1.0, np.max(np.abs(a)))
    if dev > tol * scale:
        raise ValueError(f"matrix is not Hermitian: max |A - A^dag| = {dev:.3e}")
    return 0.5 * (a + a.conj().T)


def require_state(psi: np.ndarray, *, unit: bool = False) -> np.ndarray:
    """Validate a state vector; optionally demand unit norm within 1e-12."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.size == 0 or not np.all(np.isfinite(psi.view(float))):
        raise ValueError("state vector must be finite and nonempty")
    if unit and abs(np.vdot(psi, psi).real - 1.0) > 1e-12:
        raise ValueError("state vector is not unit-normalized")
    return psi


def require_density(rho: np.ndarray, *, trace_tol: float = 1e-10) -> np.ndarray:
    """Validate a density matrix: Hermitian, unit trace, eigenvalues >= -1e-10.

    Eigenvalues in [-1e-10, 0) are treated as floating-point PSD drift; more
    negative ones raise with the offending eigenvalue in the message.
    """
    rho = require_hermitian(rho, tol=1e-10)
    tr = np.trace(rho).real
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"density matrix trace is {tr!r}, expected 1")
    w = np.linalg.eigvalsh(rho)
    if w[0] < -PSD_CLIP:
        raise ValueError(f"density matrix has negative eigenvalue {w[0]:.6e}")
    return rho


def eig_herm(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Spectral decomposition of a Hermitian matrix.

    Returns (eigenvalues ascending, eigenvector matrix V with A = V diag(w) V†).
    Each eigenvector's phase is fixed deterministically: the first component
    whose magnitude exceeds 1e-12 of the column maximum is made real positive.
    """
    a = require_hermitian(a)
    w, v = np.linalg.eigh(a)
    for k in range(v.shape[1]):
        col = v[:, k]
        idx = np.flatnonzero(np.abs(col) > 1e-12 * np.max(np.abs(col)))[0]
        phase = col[idx] / abs(col[idx])
        v[:, k] = col / phase
    return w, v


def partial_trace(rho: np.ndarray, dims: tuple[int, int], keep: int) -> np.ndarray:
    """Trace out one tensor factor of a bipartite operator.

    ``dims = (d1, d2)`` declares the factorization, ``keep`` is 1 or 2 and
    names the retained factor. Works on any operator; preserves the trace.
    """
    d1, d2 = dims
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (d1 * d2, d1 * d2):
        raise ValueError(f"operator of shape {rho.shape} does not factor as {d1}x{d2}")
    r = rho.reshape(d1, d2, d1, d2)
    if keep == 1:
        return np.einsum("ijkj->ik", r)
    if keep == 2:
        return np.einsum("ijik->jk", r)
    raise ValueError("keep must be 1 or 2")


def propagator_matrix(h: np.ndarray, t: float, hbar: float = 1.0) -> np.ndarray:
    """Unitary exp(-i H t / hbar) via the spectral decomposition of H."""
    if hbar <= 0:
        raise ValueError("hbar must be positive")
    w, v = eig_herm(h)
    return (v * np.exp(-1j * w * t / hbar)) @ v.conj().T


def evolve(h: np.ndarray, psi0: np.ndarray, t: float, hbar: float = 1.0) -> np.ndarray:
    """Evolve a state vector under a time-independent Hamiltonian."""
    psi0 = require_state(psi0)
    return propagator_matrix(h, t, hbar=hbar) @ psi0


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor (Kronecker) product."""
    return np.kron(np.asarray(a), np.asarray(b))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


def trace_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product Tr(A† B)."""
    return complex(np.trace(a.conj().T @ b))


def matrix_sqrt(m: np.ndarray) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues in [-1e-10, 0) are clipped to zero; anything more negative
    is rejected.
    """
    w, v = eig_herm(m)
    if w[0] < -PSD_CLIP * max(1.0, abs(w[-1])):
        raise ValueError(f"matrix_sqrt needs a PSD input; eigenvalue {w[0]:.6e}")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


# Pauli matrices, used across the geometric modules.
SIGMA0 = np.eye(2, dtype=complex)
SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA0, SIGMA1, SIGMA2, SIGMA3)
