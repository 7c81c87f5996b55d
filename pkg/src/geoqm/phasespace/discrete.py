"""Exact Weyl system on the discrete torus Z_N x Z_N.

The clock and shift unitaries generate projective translations of a finite
phase space. With the half-angle phase tau = exp(i pi / N) attached as an
integer power, the two-cocycle comes out in closed form and the composition
law holds to machine rounding for every pair of integer labels, which is the
discrete stand-in for the continuum translation-group axiom.
"""

from __future__ import annotations

import numpy as np


class DiscreteWeylSystem:
    """Clock/shift realization of phase-space translations on Z_N."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("system size must be a positive integer")
        self.n = n
        shift = np.zeros((n, n), dtype=complex)
        for k in range(n):
            shift[(k + 1) % n, k] = 1.0
        self.shift = shift
        omega = np.exp(2j * np.pi / n)
        self.clock = np.diag(omega ** np.arange(n))

    def __repr__(self):
        return f"DiscreteWeylSystem(n={self.n})"

    # -- Weyl operators ----------------------------------------------------

    def weyl(self, x: int, alpha: int) -> np.ndarray:
        """W(x, alpha) = tau^(x alpha) Shift^x Clock^alpha, tau = e^{i pi/N}.

        The phase exponent is the integer product x*alpha, so W is defined for
        any integers and is 2N-periodic in each label up to sign; this is what
        makes the composition law below exact rather than mod-N approximate.
        """
        n = self.n
        tau_power = np.exp(1j * np.pi * ((x * alpha) % (2 * n)) / n)
        sx = np.roll(np.eye(n), x % n, axis=0)
        calpha = np.diag(np.exp(2j * np.pi * (alpha % n) * np.arange(n) / n))
        return tau_power * (sx @ calpha)

    def composition_phase(self, v1: tuple[int, int], v2: tuple[int, int]) -> complex:
        """Phase in W(v1) W(v2) = phase * W(v1 + v2).

        The symplectic area is omega(v1, v2) = x1 alpha2 - x2 alpha1 and the
        cocycle of this realization is exp(-i pi omega / N).
        """
        x1, a1 = v1
        x2, a2 = v2
        return complex(np.exp(-1j * np.pi * (x1 * a2 - x2 * a1) / self.n))

    # -- quantization ------------------------------------------------------

    def _labels(self) -> np.ndarray:
        """Centered fundamental domain of labels, range(-(N//2), N - N//2)."""
        n = self.n
        return np.arange(-(n // 2), n - n // 2)

    def _symplectic_fourier(self, f: np.ndarray) -> np.ndarray:
        """(Fs f)(v) = (1/N) sum_u f(u) exp(-2 pi i omega(u, v) / N).

        An involution on functions over the centered label domain; both the
        quantizer and the symbol map are built from it.
        """
        labels = self._labels()
        grid = np.outer(labels, labels)
        a1 = np.exp(-2j * np.pi * grid / self.n)  # x -> b factor
        a2 = np.exp(+2j * np.pi * grid / self.n)  # a -> y factor
        f = np.asarray(f, complex)
        return (a2.T @ (f.T @ a1)) / self.n

    def quantize(self, f: np.ndarray) -> np.ndarray:
        """Operator of a phase-space function on the centered label grid.

        f is indexed f[i, j] = f(x_i, alpha_j) with x_i, alpha_j running over
        the centered domain. quantize and symbol invert each other exactly.
        """
        f = np.asarray(f, complex)
        if f.shape != (self.n, self.n):
            raise ValueError(f"function grid must be {self.n} x {self.n}")
        coeff = self._symplectic_fourier(f)
        labels = self._labels()
        out = np.zeros((self.n, self.n), dtype=complex)
        for i, x in enumerate(labels):
            for j, a in enumerate(labels):
                out += coeff[i, j] * self.weyl(int(x), int(a))
        return out / self.n

    def symbol(self, op: np.ndarray) -> np.ndarray:
        """Phase-space function of an operator; inverse of quantize."""
        op = np.asarray(op, complex)
        if op.shape != (self.n, self.n):
            raise ValueError(f"operator must be {self.n} x {self.n}")
        labels = self._labels()
        coeff = np.empty((self.n, self.n), dtype=complex)
        for i, x in enumerate(labels):
            for j, a in enumerate(labels):
                coeff[i, j] = np.trace(self.weyl(int(x), int(a)).conj().T @ op)
        return self._symplectic_fourier(coeff)


def weyl_discrete(n: int, x: int, alpha: int) -> np.ndarray:
    """Convenience wrapper: W(x, alpha) on Z_N without keeping the system."""
    return DiscreteWeylSystem(n).weyl(x, alpha)
