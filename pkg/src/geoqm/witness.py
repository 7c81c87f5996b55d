"""Two-qubit entanglement witnesses and their functional independence.

The central object is a one-parameter-shy family of X-shaped density matrices
rho_t(a, b, c, phi) whose concurrence equals c identically. Entropy and
concurrence are treated as scalar functions on the dual of u(4): the module
computes their differentials in the (a, b, c, phi) parameter chart, the norm
of the wedge dS ^ dC (zero exactly where the two witnesses are functionally
dependent), the Lie-Poisson bracket {S, C}, and the curve inside parameter
space where the wedge degenerates.

Entropy sign convention: von_neumann_entropy returns the standard
S = -Tr rho log rho >= 0 in nats. Every independence quantity used here
(wedge norm, |bracket|) is invariant under S -> -S, and tests that compare
against an externally fixed closed form compare |S|.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .linops import partial_trace, require_density
from .liedual import DualFunction, lie_poisson

EIG_TOL = 1e-10
INTERIOR_TOL = 1e-8


@dataclass(frozen=True)
class RhoTParams:
    """Parameters (a, b, c, phi) of the X-shaped two-qubit family."""

    a: float
    b: float
    c: float
    phi: float = 0.0

    def __post_init__(self):
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"parameter {name}={v} outside [0, 1]")
        if self.a + self.b > 1.0 + 1e-15:
            raise ValueError(f"a + b = {self.a + self.b} exceeds 1")

    def vector(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c, self.phi])


@dataclass(frozen=True)
class WitnessRecord:
    """Witness values and differentials at one parameter point."""

    S: float
    C: float
    dS: np.ndarray  # components along (a, b, c, phi)
    dC: np.ndarray
    wedge_norm: float


def rho_t_eigenvalues(a: float, b: float, c: float) -> np.ndarray:
    """Closed-form spectrum {0, 1-a-b, (a+b +- s)/2}, s = sqrt((a-b)^2+c^2)."""
    s = np.hypot(a - b, c)
    return np.array([0.0, 1.0 - a - b, (a + b + s) / 2.0, (a + b - s) / 2.0])


def rho_t(params: RhoTParams) -> np.ndarray:
    """Assemble the X-shaped density matrix, rejecting non-positive spectra.

    The matrix lives on the |00>,|01>,|10>,|11> product basis with the only
    coherence between |01> and |10>. Positivity is enforced through the
    closed-form eigenvalues; 4ab >= c^2 is the resulting interior condition.
    """
    a, b, c, phi = params.a, params.b, params.c, params.phi
    evs = rho_t_eigenvalues(a, b, c)
    bad = np.argmin(evs)
    if evs[bad] < -EIG_TOL:
        raise ValueError(
            f"rho_t(a={a}, b={b}, c={c}) is not positive semidefinite: "
            f"eigenvalue {evs[bad]:.6g} < 0"
        )
    off = 0.5 * c * np.exp(1j * phi)
    rho = np.array([
        [0.0, 0.0, 0.0, 0.0],
        [0.0, a, off, 0.0],
        [0.0, np.conj(off), b, 0.0],
        [0.0, 0.0, 0.0, 1.0 - a - b],
    ], dtype=complex)
    return rho


_SIGMA_Y = np.array([[0.0, -1j], [1j, 0.0]])
_FLIP = np.kron(_SIGMA_Y, _SIGMA_Y)


def _spin_flip_concurrence(m: np.ndarray) -> float:
    """Spin-flip formula on an arbitrary Hermitian 4x4 matrix, no validation.

    Needed in raw form so finite-difference displacements off the unit-trace
    sheet can still be evaluated when the concurrence is differentiated as a
    function on the dual space.
    """
    flipped = _FLIP @ m.conj() @ _FLIP
    w = np.linalg.eigvals(m @ flipped)
    s = np.sqrt(np.clip(w.real, 0.0, None))
    s.sort()
    return float(max(0.0, s[3] - s[2] - s[1] - s[0]))


def concurrence(rho: np.ndarray) -> float:
    """Spin-flip concurrence of a two-qubit density state.

    Computes the decreasingly ordered square roots s_i of the spectrum of
    rho (sigma_y x sigma_y) rho* (sigma_y x sigma_y) and returns
    max(0, s_1 - s_2 - s_3 - s_4).
    """
    rho = require_density(rho)
    if rho.shape != (4, 4):
        raise ValueError("concurrence is defined for 4x4 two-qubit states")
    return _spin_flip_concurrence(rho)


def von_neumann_entropy(rho: np.ndarray, clip: float = 1e-12) -> float:
    """Standard entropy -Tr rho log rho in nats, with 0 log 0 := 0."""
    rho = require_density(rho)
    w = np.linalg.eigvalsh(rho)
    w = w[w > clip]
    return float(-np.sum(w * np.log(w)))


def pure_state_entropy(psi: np.ndarray, dims: tuple[int, int] = (2, 2)) -> float:
    """Entanglement entropy of a bipartite pure state via its reduced state."""
    psi = np.asarray(psi, complex).reshape(-1)
    nrm = np.linalg.norm(psi)
    if nrm == 0.0:
        raise ValueError("zero vector has no entropy")
    rho = np.outer(psi, psi.conj()) / nrm**2
    return von_neumann_entropy(partial_trace(rho, dims, keep=1))


def entropy_closed_form(a: float, b: float, c: float) -> float:
    """Entropy of rho_t from its closed-form spectrum (standard sign)."""
    w = rho_t_eigenvalues(a, b, c)
    w = w[w > 1e-300]
    return float(-np.sum(w * np.log(w)))


def _entropy_gradient_matrix(rho: np.ndarray, clip: float = 1e-9) -> np.ndarray:
    """Spectral gradient of -Tr rho log rho on the fixed-rank stratum.

    Supplied analytically because this family carries an exact zero
    eigenvalue, where a symmetric difference quotient of lambda log lambda
    degrades to O(h log h) noise; the spectral form commutes with rho, which
    is what makes the entropy a Casimir-like partner of any other witness.
    """
    w, v = np.linalg.eigh(rho)
    g = np.zeros_like(rho)
    for i, lam in enumerate(w):
        if lam > clip:
            g -= (1.0 + np.log(lam)) * np.outer(v[:, i], v[:, i].conj())
    return g


def _require_interior(params: RhoTParams) -> None:
    evs = rho_t_eigenvalues(params.a, params.b, params.c)
    # the structural zero eigenvalue is not a boundary; the other three are
    low = np.min(evs[1:])
    if low <= INTERIOR_TOL:
        raise ValueError(
            f"parameter point (a={params.a}, b={params.b}, c={params.c}) is "
            f"not interior: eigenvalue {low:.3g} <= {INTERIOR_TOL:g}"
        )


def entropy_gradient_params(a: float, b: float, c: float) -> np.ndarray:
    """Analytic (dS/da, dS/db, dS/dc, dS/dphi) for the standard-sign entropy."""
    u = a - b
    s = np.hypot(u, c)
    lam2 = 1.0 - a - b
    xp = (a + b + s) / 2.0
    xm = (a + b - s) / 2.0
    if s == 0.0:
        dxp_da = dxp_db = 0.5
        dxm_da = dxm_db = 0.5
        dxp_dc = dxm_dc = 0.0
    else:
        dxp_da = (1.0 + u / s) / 2.0
        dxm_da = (1.0 - u / s) / 2.0
        dxp_db = (1.0 - u / s) / 2.0
        dxm_db = (1.0 + u / s) / 2.0
        dxp_dc = c / (2.0 * s)
        dxm_dc = -c / (2.0 * s)
    ds_da = -(-np.log(lam2) + dxp_da * np.log(xp) + dxm_da * np.log(xm))
    ds_db = -(-np.log(lam2) + dxp_db * np.log(xp) + dxm_db * np.log(xm))
    ds_dc = -(dxp_dc * np.log(xp) + dxm_dc * np.log(xm))
    return np.array([ds_da, ds_db, ds_dc, 0.0])


def wedge_norm_of(d1: np.ndarray, d2: np.ndarray) -> float:
    """Euclidean norm of all 2x2 minors of the stacked covectors [d1; d2]."""
    minors = [d1[i] * d2[j] - d1[j] * d2[i]
              for i, j in combinations(range(len(d1)), 2)]
    return float(np.sqrt(np.sum(np.square(minors))))


def witness_differentials(params: RhoTParams) -> WitnessRecord:
    """Witness values plus dS, dC and the independence wedge norm at a point.

    Requires an interior point (all nonstructural eigenvalues > 1e-8) so the
    logarithms stay differentiable. dC = (0, 0, 1, 0) holds identically on
    this family; dS comes from the closed-form spectrum.
    """
    _require_interior(params)
    dS = entropy_gradient_params(params.a, params.b, params.c)
    dC = np.array([0.0, 0.0, 1.0, 0.0])
    return WitnessRecord(
        S=entropy_closed_form(params.a, params.b, params.c),
        C=params.c,
        dS=dS,
        dC=dC,
        wedge_norm=wedge_norm_of(dS, dC),
    )


def poisson_bracket_SC(params: RhoTParams, fd_step: float = 1e-5) -> float:
    """{S, C} of the witnesses as functions on the dual of u(4) at rho_t.

    The concurrence gradient is taken by central differences; the entropy
    gradient uses the spectral form above for the reasons documented there.
    """
    _require_interior(params)
    rho = rho_t(params)
    s_fn = DualFunction(lambda m: von_neumann_entropy(m),
                        gradient=_entropy_gradient_matrix)
    c_fn = DualFunction(_spin_flip_concurrence, fd_step=fd_step)
    return lie_poisson(s_fn, c_fn, rho)


def _symmetric_slice_slope(a: float, c: float) -> float:
    """dS/da on the b = a slice; its magnitude is wedge_norm / sqrt(2)."""
    return float(np.log1p(-2.0 * a) - 0.5 * np.log(a * a - c * c / 4.0))


def independence_locus(
    a_grid: np.ndarray, c_tol: float = 1e-10
) -> list[tuple[float, float, float]]:
    """Zero curve of the independence wedge along the b = a slices.

    For each a in the grid, root-finds the vanishing of dS ^ dC in c by
    bisecting the signed slope function whose magnitude is the wedge norm;
    the slope is monotone in c on the slice and changes sign only for
    a in (1/3, 1/2), so slices outside that window contribute nothing.
    Returns (a, b, c) triples for the slices where a root exists.
    """
    out: list[tuple[float, float, float]] = []
    for a in np.atleast_1d(np.asarray(a_grid, float)):
        if not (0.0 < a < 0.5):
            continue
        lo, hi = 0.0, 2.0 * a * (1.0 - 1e-12)
        if _symmetric_slice_slope(a, lo) >= 0.0:
            continue  # no sign change on the slice
        while hi - lo > c_tol:
            mid = (lo + hi) / 2.0
            if _symmetric_slice_slope(a, mid) < 0.0:
                lo = mid
            else:
                hi = mid
        out.append((float(a), float(a), (lo + hi) / 2.0))
    return out


def locus_curve_closed_form(a: float) -> float:
    """c(a) = sqrt(-4 + 16a - 12a^2) on a in (1/3, 1/2], for cross-checks."""
    val = -4.0 + 16.0 * a - 12.0 * a * a
    if val < 0.0:
        raise ValueError(f"a={a} is outside the locus window (1/3, 1/2]")
    return float(np.sqrt(val))


def sweep_records(
    a_min: float, a_max: float, steps: int
) -> list[dict[str, float]]:
    """Witness scan along the symmetric slice b = a at mid-cone c = a, phi=0.

    Each row carries a, b, c, phi, S, C (recomputed from the assembled matrix,
    not copied from c), wedge_norm, and the Lie-Poisson bracket {S, C}.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if not (0.0 < a_min <= a_max < 0.5):
        raise ValueError("sweep needs 0 < a_min <= a_max < 1/2")
    rows = []
    for a in np.linspace(a_min, a_max, steps):
        params = RhoTParams(a=float(a), b=float(a), c=float(a), phi=0.0)
        rec = witness_differentials(params)
        rows.append({
            "a": params.a, "b": params.b, "c": params.c, "phi": params.phi,
            "S": rec.S,
            "C": concurrence(rho_t(params)),
            "wedge_norm": rec.wedge_norm,
            "bracket_SC": poisson_bracket_SC(params),
        })
    return rows
