"""Unitary-algebra duals: bases, structure constants, brackets, momentum map.

Hermitian bases of u(n) (identity included) with trace-orthogonality
Tr(b_mu b_nu) = kappa delta_munu, the antisymmetric and symmetric structure
tensors extracted at matrix level, linear/nonlinear functions on the dual
space with a Poisson bracket and a symmetric (Jordan) tensor, and the
momentum map sending Hilbert-space vectors to rank-one duals.

Conventions
-----------
Elements of the dual are represented by Hermitian matrices through the trace
pairing <xi, u> = Tr(xi u). For functions F, G with Hermitian gradients the
brackets are

    poisson:  {F, G}(xi) = Tr(xi . (-i)[grad F, grad G])
    jordan:   R(xi)(dF, dG) = Tr(xi . (grad F grad G + grad G grad F))

With coordinates c_mu = Tr(xi b_mu)/2 on a kappa = 2 basis this reproduces
{c_mu, c_nu} = sum_rho C_murho c_rho exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .linops import PAULI, kron, require_hermitian, require_state

ORTHOGONALITY_TOL = 1e-12


@dataclass(frozen=True)
class LieBasis:
    """Ordered Hermitian basis of u(n) with Tr(b_mu b_nu) = norm_const * delta."""

    n: int
    matrices: tuple[np.ndarray, ...]
    norm_const: float = 2.0

    def __post_init__(self):
        m = len(self.matrices)
        if m != self.n * self.n:
            raise ValueError(f"u({self.n}) needs {self.n ** 2} basis matrices, got {m}")
        gram = np.array(
            [[np.trace(a @ b).real for b in self.matrices] for a in self.matrices]
        )
        if np.max(np.abs(gram - self.norm_const * np.eye(m))) > ORTHOGONALITY_TOL:
            raise ValueError("basis is not trace-orthogonal at the declared normalization")

    def __len__(self) -> int:
        return len(self.matrices)

    def coords(self, xi: np.ndarray) -> np.ndarray:
        """Coordinates of a Hermitian matrix: Tr(xi b_mu)/norm_const."""
        xi = require_hermitian(xi, tol=1e-9)
        return np.array(
            [np.trace(xi @ b).real / self.norm_const for b in self.matrices]
        )

    def matrix(self, coords: np.ndarray) -> np.ndarray:
        """Inverse of :meth:`coords`."""
        coords = np.asarray(coords, float)
        out = np.zeros((self.n, self.n), dtype=complex)
        for c, b in zip(coords, self.matrices):
            out += c * b
        return out


def _sym(j: int, k: int, n: int) -> np.ndarray:
    m = np.zeros((n, n), dtype=complex)
    m[j, k] = m[k, j] = 1.0
    return m


def _antisym(j: int, k: int, n: int) -> np.ndarray:
    m = np.zeros((n, n), dtype=complex)
    m[j, k] = -1j
    m[k, j] = 1j
    return m


def gell_mann_basis(n: int) -> LieBasis:
    """Standard generalized Gell-Mann basis of u(n), identity channel first.

    b_0 = sqrt(2/n) I, then for each column k the off-diagonal symmetric and
    antisymmetric pairs followed by the diagonal generator, reproducing the
    classic lambda_1..lambda_8 ordering at n = 3 and the Pauli triple at n = 2.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    mats: list[np.ndarray] = [np.sqrt(2.0 / n) * np.eye(n, dtype=complex)]
    for k in range(1, n):
        for j in range(k):
            mats.append(_sym(j, k, n))
            mats.append(_antisym(j, k, n))
        diag = np.zeros(n)
        diag[: k + 1] = 1.0
        diag[k] = -k
        mats.append(np.sqrt(2.0 / (k * (k + 1))) * np.diag(diag).astype(complex))
    return LieBasis(n=n, matrices=tuple(mats), norm_const=2.0)


def pauli_product_basis() -> LieBasis:
    """Two-qubit product basis sigma_k (x) sigma_j, indexed mu = 4k + j.

    Trace normalization is 4 (each factor squares to the identity).
    """
    mats = tuple(kron(PAULI[k], PAULI[j]) for k in range(4) for j in range(4))
    return LieBasis(n=4, matrices=mats, norm_const=4.0)


@dataclass(frozen=True)
class StructureConstants:
    """Antisymmetric and symmetric structure tensors of a trace-orthogonal basis.

    Defined by [b_mu, b_nu] = 2i sum_rho c[mu,nu,rho] b_rho and
    [b_mu, b_nu]_+ = 2 sum_rho d[mu,nu,rho] b_rho (the identity channel is a
    regular basis element, so both expansions are complete).
    """

    basis: LieBasis
    c: np.ndarray = field(repr=False)
    d: np.ndarray = field(repr=False)

    def reconstruct_product(self, mu: int, nu: int) -> np.ndarray:
        """b_mu b_nu rebuilt from the tables: sum_rho (d + i c)[mu,nu,rho] b_rho."""
        coeffs = self.d[mu, nu] + 1j * self.c[mu, nu]
        out = np.zeros((self.basis.n, self.basis.n), dtype=complex)
        for w, b in zip(coeffs, self.basis.matrices):
            out += w * b
        return out


def structure_constants(basis: LieBasis) -> StructureConstants:
    """Extract (C, d) at matrix level from a trace-orthogonal basis."""
    mats = basis.matrices
    m = len(mats)
    kappa = basis.norm_const
    c = np.zeros((m, m, m))
    d = np.zeros((m, m, m))
    prods = [[a @ b for b in mats] for a in mats]
    for mu in range(m):
        for nu in range(m):
            comm = prods[mu][nu] - prods[nu][mu]
            anti = prods[mu][nu] + prods[nu][mu]
            for rho in range(m):
                c[mu, nu, rho] = (np.trace(comm @ mats[rho]) / (2j * kappa)).real
                d[mu, nu, rho] = np.trace(anti @ mats[rho]).real / (2 * kappa)
    return StructureConstants(basis=basis, c=c, d=d)


# ---------------------------------------------------------------------------
# functions on the dual space


class DualFunction:
    """Real function on the dual space, with an optional registered gradient.

    ``fn`` maps a Hermitian matrix to a real number. If ``gradient`` is given
    it must return the Hermitian matrix gradient at xi under the trace
    pairing, dF(xi_dot) = Tr(xi_dot grad); otherwise central differences with
    the given step are used along a Hilbert-Schmidt-orthonormal Hermitian
    frame.
    """

    def __init__(
        self,
        fn: Callable[[np.ndarray], float],
        gradient: Callable[[np.ndarray], np.ndarray] | None = None,
        fd_step: float = 1e-5,
    ):
        self.fn = fn
        self._gradient = gradient
        self.fd_step = fd_step

    def __call__(self, xi: np.ndarray) -> float:
        return float(self.fn(xi))

    def gradient(self, xi: np.ndarray) -> np.ndarray:
        if self._gradient is not None:
            return np.asarray(self._gradient(xi), dtype=complex)
        return self._fd_gradient(np.asarray(xi, dtype=complex))

    def _fd_gradient(self, xi: np.ndarray) -> np.ndarray:
        n = xi.shape[0]
        h = self.fd_step
        grad = np.zeros((n, n), dtype=complex)
        for j in range(n):
            for k in range(j, n):
                if j == k:
                    e = np.zeros((n, n), dtype=complex)
                    e[j, j] = 1.0
                    frame = [e]
                else:
                    frame = [_sym(j, k, n) / np.sqrt(2), _antisym(j, k, n) / np.sqrt(2)]
                for e in frame:
                    deriv = (self.fn(xi + h * e) - self.fn(xi - h * e)) / (2 * h)
                    grad += deriv * e
        return grad


def linear_function(u: np.ndarray) -> DualFunction:
    """The linear function xi -> Tr(xi u) with its exact constant gradient."""
    u = require_hermitian(u)
    return DualFunction(lambda xi: np.trace(xi @ u).real, gradient=lambda xi: u)


def _as_dual_function(f: DualFunction | np.ndarray) -> DualFunction:
    if isinstance(f, DualFunction):
        return f
    return linear_function(np.asarray(f))


def lie_poisson(f, g, xi: np.ndarray) -> float:
    """Poisson bracket {F,G}(xi) = Tr(xi (-i)[grad F, grad G]).

    ``f``/``g`` may be :class:`DualFunction` objects or Hermitian matrices
    (shorthand for the linear functions they generate). Exact for linear
    functions; finite-difference gradients otherwise.
    """
    fg = _as_dual_function(f).gradient(xi)
    gg = _as_dual_function(g).gradient(xi)
    return np.trace(np.asarray(xi) @ ((-1j) * (fg @ gg - gg @ fg))).real


def jordan_tensor(f, g, xi: np.ndarray) -> float:
    """Symmetric tensor R(xi)(dF,dG) = Tr(xi (grad F grad G + grad G grad F))."""
    fg = _as_dual_function(f).gradient(xi)
    gg = _as_dual_function(g).gradient(xi)
    return np.trace(np.asarray(xi) @ (fg @ gg + gg @ fg)).real


# ---------------------------------------------------------------------------
# momentum map


def momentum_map(psi: np.ndarray) -> np.ndarray:
    """The rank-one dual element |psi><psi| (unnormalized)."""
    psi = require_state(psi)
    return np.outer(psi, psi.conj())


def momentum_map_projective(psi: np.ndarray) -> np.ndarray:
    """Unit-trace rank-one projector |psi><psi|/<psi|psi>; needs psi != 0."""
    psi = require_state(psi)
    nrm = float(np.vdot(psi, psi).real)
    if nrm == 0.0:
        raise ValueError("projective momentum map is undefined at the zero vector")
    return np.outer(psi, psi.conj()) / nrm


def check_equivariance(u: np.ndarray, psi: np.ndarray) -> float:
    """Max-norm residual of mu(U psi) = U mu(psi) U† for a unitary U."""
    u = np.asarray(u, dtype=complex)
    if np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))) > 1e-10:
        raise ValueError("equivariance check needs a unitary matrix")
    lhs = momentum_map(u @ require_state(psi))
    rhs = u @ momentum_map(psi) @ u.conj().T
    return float(np.max(np.abs(lhs - rhs)))


def pullback_checks(a: np.ndarray, b: np.ndarray, psi: np.ndarray) -> dict[str, float]:
    """Residuals of the momentum-map pullback identities at (A, B, psi).

    Checks that pulling back linear functions gives the expectation functions,
    that the dual-space Poisson bracket pulls back to the chart bracket (with
    its calibrated factor 2), and that the Jordan tensor pulls back to the
    real part of the ray star product (factor 2).
    """
    from . import kahler

    a = require_hermitian(a)
    b = require_hermitian(b)
    psi = require_state(psi)
    mu = momentum_map(psi)
    mu_ray = momentum_map_projective(psi)

    res: dict[str, float] = {}
    res["expectation_pullback"] = abs(
        np.trace(mu @ a).real - kahler.expectation(a, psi)
    )
    res["ray_pullback"] = abs(
        np.trace(mu_ray @ a).real - kahler.ray_expectation(a, psi)
    )

    # chart-side bracket = 2 x dual-side bracket, both evaluated independently
    df = kahler.expectation_differential(a, psi)
    dg = kahler.expectation_differential(b, psi)
    chart_bracket = kahler.poisson_eval(df, dg)
    dual_bracket = lie_poisson(a, b, mu)
    res["bracket"] = abs(chart_bracket - 2.0 * dual_bracket)

    # jordan tensor on the ray = 2 x real part of the ray star product
    dual_jordan = jordan_tensor(a, b, mu_ray)
    ray_sym = 2.0 * kahler.ray_star_product(a, b, psi).real
    res["jordan"] = abs(dual_jordan - ray_sym)
    return res
