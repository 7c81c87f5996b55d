"""Coherent states, displacement operators, and Berezin symbols.

Everything lives in a truncated number basis of dimension M. Truncation
breaks the ladder commutator only in the top level, and a coherent state is
usable as long as its Poisson weight beyond the cutoff is negligible; the
module estimates that tail and warns when it is not.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy.linalg import expm


class TruncationWarning(UserWarning):
    """Coherent-state amplitude too large for the Fock-space cutoff."""


class FockSpace:
    """Truncated number basis with ladder operators.

    [a, a_dag] = I holds exactly except in the (M-1, M-1) entry, where the
    missing level above the cutoff shows up as -(M-1) instead of 1.
    """

    def __init__(self, dim: int):
        if dim < 2:
            raise ValueError("Fock truncation must keep at least two levels")
        self.dim = dim
        self.lower = np.diag(np.sqrt(np.arange(1, dim)), k=1).astype(complex)
        self.raise_ = self.lower.conj().T

    @property
    def number(self) -> np.ndarray:
        return self.raise_ @ self.lower

    def __repr__(self):
        return f"FockSpace(dim={self.dim})"


def poisson_tail(z: complex, dim: int) -> float:
    """Probability weight of a coherent state beyond the truncation level."""
    lam = abs(z) ** 2
    if lam == 0.0:
        return 0.0
    # survival function of Poisson(lam) at dim-1, summed in stable log form
    log_terms = -lam + np.arange(dim) * math.log(lam) \
        - np.array([math.lgamma(n + 1) for n in range(dim)])
    kept = float(np.sum(np.exp(log_terms)))
    return max(0.0, 1.0 - kept)


def coherent_state(z: complex, fock: FockSpace) -> np.ndarray:
    """Normalized truncated coherent state |z>.

    Warns when the Poisson weight above the cutoff exceeds 1e-9; at
    |z| <= sqrt(M)/4 the tail is far below any tolerance used here.
    """
    tail = poisson_tail(z, fock.dim)
    if tail > 1e-9:
        warnings.warn(
            f"coherent state |z|={abs(z):.3g} loses weight {tail:.2e} beyond "
            f"the {fock.dim}-level cutoff",
            TruncationWarning,
        )
    n = np.arange(fock.dim)
    log_mag = n * np.log(abs(z)) - 0.5 * np.array(
        [math.lgamma(k + 1) for k in range(fock.dim)]
    ) if z != 0 else np.where(n == 0, 0.0, -np.inf)
    phase = np.exp(1j * n * np.angle(z)) if z != 0 else np.ones(fock.dim)
    vec = np.exp(log_mag) * phase
    return vec / np.linalg.norm(vec)


def displacement(z: complex, fock: FockSpace) -> np.ndarray:
    """D(z) = exp(z a_dag - conj(z) a); unitary since the exponent is skew."""
    gen = z * fock.raise_ - np.conj(z) * fock.lower
    return expm(gen)


def berezin_symbol(op: np.ndarray, z: complex, fock: FockSpace) -> complex:
    """Coherent-state diagonal expectation <z| op |z>."""
    op = np.asarray(op, complex)
    if op.shape != (fock.dim, fock.dim):
        raise ValueError(f"operator must be {fock.dim} x {fock.dim}")
    vec = coherent_state(z, fock)
    return complex(vec.conj() @ op @ vec)
