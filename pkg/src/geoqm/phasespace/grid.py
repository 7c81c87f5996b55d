"""Wigner functions and Moyal star products on periodic FFT grids.

The star product is evaluated in the double-Fourier domain: both factors are
expanded in plane waves and recombined with the twist phase
exp(-(i hbar / 2)(kq_a kp_b - kp_a kq_b)), which is exact for band-limited
data. Polynomial factors are kept as coefficient objects instead of sampled
arrays: a sampled q-ramp is a sawtooth on the torus and its wrap-around
spectrum contaminates the product, while the coefficient route terminates the
bidifferential series exactly. Mixed polynomial/grid products differentiate
the grid factor spectrally, so quadratic Hamiltonians act on grid functions
with only rounding-level error.

Ordering conventions: "weyl" is the symmetric product; "standard" puts all
q-derivatives on the left factor, "antistandard" the mirror image. All three
share one coefficient table, so they are covered by a single cross-check.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import eval_hermite, eval_laguerre


class EdgeDecayWarning(UserWarning):
    """State support reaches the grid edge; periodic images may contribute."""


class AliasingWarning(UserWarning):
    """Spectral content near the Nyquist band; the twisted product may fold."""


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Uniform periodic (q, p) grid with an hbar attached."""

    n_q: int
    n_p: int
    q_min: float
    q_max: float
    p_min: float
    p_max: float
    hbar: float

    def __post_init__(self):
        for n, axis in ((self.n_q, "q"), (self.n_p, "p")):
            if n < 2 or (n & (n - 1)) != 0:
                raise ValueError(f"n_{axis}={n} must be a power of two")
        if self.q_max <= self.q_min or self.p_max <= self.p_min:
            raise ValueError("grid ranges must be increasing")
        if self.hbar <= 0:
            raise ValueError("hbar must be positive")

    @property
    def dq(self) -> float:
        return (self.q_max - self.q_min) / self.n_q

    @property
    def dp(self) -> float:
        return (self.p_max - self.p_min) / self.n_p

    @property
    def q(self) -> np.ndarray:
        return self.q_min + self.dq * np.arange(self.n_q)

    @property
    def p(self) -> np.ndarray:
        return self.p_min + self.dp * np.arange(self.n_p)

    def meshes(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.q, self.p, indexing="ij")

    @property
    def kq(self) -> np.ndarray:
        """Angular q-frequencies matching numpy FFT index order."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n_q, self.dq)

    @property
    def kp(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.n_p, self.dp)


def oscillator_grid(hbar: float, n: int = 512, half_width_factor: float = 8.0) -> PhaseSpaceGrid:
    """Default square box [-8 sqrt(hbar), 8 sqrt(hbar))^2: Gaussian edge decay
    is far below 1e-6 there for the low oscillator states."""
    w = half_width_factor * math.sqrt(hbar)
    return PhaseSpaceGrid(n_q=n, n_p=n, q_min=-w, q_max=w, p_min=-w, p_max=w, hbar=hbar)


# ---------------------------------------------------------------------------
# wavefunctions and Wigner transform


def oscillator_eigenstate(grid: PhaseSpaceGrid, level: int = 0) -> np.ndarray:
    """Harmonic-oscillator eigenstate (m = omega = 1) sampled on the q grid."""
    if level < 0:
        raise ValueError("level must be a nonnegative integer")
    hbar = grid.hbar
    xi = grid.q / math.sqrt(hbar)
    norm = (np.pi * hbar) ** -0.25 / math.sqrt(2.0 ** level * math.factorial(level))
    psi = norm * eval_hermite(level, xi) * np.exp(-(xi ** 2) / 2.0)
    return psi.astype(complex)


def wigner_function(psi: np.ndarray, grid: PhaseSpaceGrid) -> np.ndarray:
    """Wigner transform of a wavefunction sampled on the q grid.

    W(q_j, p_k) = 2 dq sum_d psi(q_j + d dq) conj(psi(q_j - d dq))
                  exp(-2 i p_k d dq / hbar),

    a free-p trigonometric sum, so the p grid need not be canonically paired
    with the q grid. The result is real by construction (the d and -d terms
    are conjugate). Convention: integral of W dq dp / (2 pi hbar) = 1.
    """
    psi = np.asarray(psi, complex).reshape(-1)
    if psi.shape != (grid.n_q,):
        raise ValueError(f"psi must have {grid.n_q} q-samples")
    nrm2 = float(np.sum(np.abs(psi) ** 2) * grid.dq)
    if abs(nrm2 - 1.0) > 1e-8:
        raise ValueError(f"wavefunction norm^2 = {nrm2:.6g}, expected 1")
    psi = psi / math.sqrt(nrm2)
    peak = float(np.max(np.abs(psi)))
    edge = max(abs(psi[0]), abs(psi[-1])) / peak
    if edge >= 1e-8:
        warnings.warn(
            f"wavefunction magnitude at the grid edge is {edge:.2e} of peak; "
            "periodic images may distort the transform",
            EdgeDecayWarning,
        )
    n = grid.n_q
    # corr[j, d] = psi[j + d] conj(psi[j - d]), zero where out of range
    corr = np.zeros((n, n), dtype=complex)
    corr[:, 0] = np.abs(psi) ** 2
    for d in range(1, n):
        hi = n - d
        if hi <= d:
            break
        corr[d:hi, d] = psi[2 * d:] * np.conj(psi[: n - 2 * d])
    phases = np.exp(-2j * np.outer(np.arange(1, n) * grid.dq, grid.p) / grid.hbar)
    w = corr[:, 0].real[:, None] + 2.0 * np.real(corr[:, 1:] @ phases)
    return 2.0 * grid.dq * w


def wigner_normalization(w: np.ndarray, grid: PhaseSpaceGrid) -> float:
    """Riemann sum of W dq dp / (2 pi hbar)."""
    return float(np.sum(w) * grid.dq * grid.dp / (2.0 * np.pi * grid.hbar))


def wigner_marginals(w: np.ndarray, grid: PhaseSpaceGrid) -> tuple[np.ndarray, np.ndarray]:
    """(q marginal, p marginal), each integrated with the 1/(2 pi hbar) weight."""
    q_marg = np.sum(w, axis=1) * grid.dp / (2.0 * np.pi * grid.hbar)
    p_marg = np.sum(w, axis=0) * grid.dq / (2.0 * np.pi * grid.hbar)
    return q_marg, p_marg


def wigner_overlap(w1: np.ndarray, w2: np.ndarray, grid: PhaseSpaceGrid) -> float:
    """Phase-space overlap, the grid version of a state-pair trace pairing."""
    return float(np.sum(w1 * w2) * grid.dq * grid.dp / (2.0 * np.pi * grid.hbar))


def oscillator_wigner(grid: PhaseSpaceGrid, level: int = 0) -> np.ndarray:
    """Closed-form oscillator Wigner function 2 (-1)^n L_n(2 r^2/hbar) e^{-r^2/hbar}."""
    if level < 0:
        raise ValueError("level must be a nonnegative integer")
    qm, pm = grid.meshes()
    r2 = (qm ** 2 + pm ** 2) / grid.hbar
    return 2.0 * (-1.0) ** level * eval_laguerre(level, 2.0 * r2) * np.exp(-r2)


# ---------------------------------------------------------------------------
# polynomial symbols


class PhasePolynomial:
    """Polynomial in (q, p) kept as exact coefficients.

    Sampling a polynomial on a periodic grid turns it into a sawtooth whose
    wrap-around spectrum ruins twisted products; keeping coefficients instead
    makes derivatives exact and terminates the star series.
    """

    def __init__(self, coeffs: dict[tuple[int, int], complex]):
        clean: dict[tuple[int, int], complex] = {}
        for (i, j), c in coeffs.items():
            if i < 0 or j < 0:
                raise ValueError("polynomial powers must be nonnegative")
            c = complex(c)
            if c != 0:
                clean[(int(i), int(j))] = clean.get((int(i), int(j)), 0.0) + c
        self.coeffs = {k: v for k, v in clean.items() if v != 0}

    @classmethod
    def q(cls) -> "PhasePolynomial":
        return cls({(1, 0): 1.0})

    @classmethod
    def p(cls) -> "PhasePolynomial":
        return cls({(0, 1): 1.0})

    @classmethod
    def constant(cls, c: complex) -> "PhasePolynomial":
        return cls({(0, 0): c})

    @property
    def deg_q(self) -> int:
        return max((i for i, _ in self.coeffs), default=0)

    @property
    def deg_p(self) -> int:
        return max((j for _, j in self.coeffs), default=0)

    def __add__(self, other):
        other = _as_poly(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0.0) + v
        return PhasePolynomial(out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-1.0) * _as_poly(other)

    def __rsub__(self, other):
        return _as_poly(other) + (-1.0) * self

    def __mul__(self, other):
        if isinstance(other, PhasePolynomial):
            out: dict[tuple[int, int], complex] = {}
            for (i1, j1), c1 in self.coeffs.items():
                for (i2, j2), c2 in other.coeffs.items():
                    k = (i1 + i2, j1 + j2)
                    out[k] = out.get(k, 0.0) + c1 * c2
            return PhasePolynomial(out)
        return PhasePolynomial({k: other * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def partial(self, axis: str) -> "PhasePolynomial":
        """Exact partial derivative, axis 'q' or 'p'."""
        out: dict[tuple[int, int], complex] = {}
        for (i, j), c in self.coeffs.items():
            if axis == "q" and i > 0:
                out[(i - 1, j)] = out.get((i - 1, j), 0.0) + i * c
            elif axis == "p" and j > 0:
                out[(i, j - 1)] = out.get((i, j - 1), 0.0) + j * c
            elif axis not in ("q", "p"):
                raise ValueError("axis must be 'q' or 'p'")
        return PhasePolynomial(out)

    def on_grid(self, grid: PhaseSpaceGrid) -> np.ndarray:
        qm, pm = grid.meshes()
        out = np.zeros((grid.n_q, grid.n_p), dtype=complex)
        for (i, j), c in self.coeffs.items():
            out += c * qm ** i * pm ** j
        return out

    def __call__(self, q: float, p: float) -> complex:
        return sum(c * q ** i * p ** j for (i, j), c in self.coeffs.items())

    def __repr__(self):
        terms = " + ".join(f"({c:g}) q^{i} p^{j}" for (i, j), c in sorted(self.coeffs.items()))
        return f"PhasePolynomial({terms or '0'})"


def _as_poly(x) -> PhasePolynomial:
    if isinstance(x, PhasePolynomial):
        return x
    if np.isscalar(x):
        return PhasePolynomial.constant(complex(x))
    raise TypeError("expected PhasePolynomial or scalar")


# ---------------------------------------------------------------------------
# Moyal star product


def _ordering_coeffs(ordering: str, hbar: float) -> tuple[complex, complex]:
    """(alpha, beta) in star = f exp(alpha d_q^left d_p^right + beta d_p^left d_q^right) g."""
    if ordering == "weyl":
        return 0.5j * hbar, -0.5j * hbar
    if ordering == "standard":
        return 1j * hbar, 0.0
    if ordering == "antistandard":
        return 0.0, -1j * hbar
    raise ValueError(f"unknown ordering {ordering!r}")


def spectral_derivative(arr: np.ndarray, grid: PhaseSpaceGrid,
                        q_order: int = 0, p_order: int = 0) -> np.ndarray:
    """Mixed partial derivative via the FFT frequencies of the grid."""
    spec = np.fft.fft2(np.asarray(arr, complex))
    if q_order:
        spec *= (1j * grid.kq[:, None]) ** q_order
    if p_order:
        spec *= (1j * grid.kp[None, :]) ** p_order
    return np.fft.ifft2(spec)


def _check_aliasing(arr: np.ndarray, grid: PhaseSpaceGrid, name: str) -> None:
    spec = np.abs(np.fft.fft2(np.asarray(arr, complex))) ** 2
    total = float(np.sum(spec))
    if total == 0.0:
        return
    oq = np.abs(grid.kq) > 0.75 * np.max(np.abs(grid.kq))
    op = np.abs(grid.kp) > 0.75 * np.max(np.abs(grid.kp))
    outer = float(np.sum(spec[oq, :]) + np.sum(spec[:, op]))
    frac = outer / total
    if frac > 1e-12:
        warnings.warn(
            f"{name} carries {frac:.2e} of its spectral energy near the "
            "Nyquist band; the twisted product may fold",
            AliasingWarning,
        )


def _star_poly_poly(f: PhasePolynomial, g: PhasePolynomial,
                    alpha: complex, beta: complex) -> PhasePolynomial:
    out = PhasePolynomial({})
    for j in range(f.deg_q + 1):
        dqj_f = f
        for _ in range(j):
            dqj_f = dqj_f.partial("q")
        for k in range(f.deg_p + 1):
            df = dqj_f
            for _ in range(k):
                df = df.partial("p")
            if not df.coeffs:
                continue
            dg = g
            for _ in range(j):
                dg = dg.partial("p")
            for _ in range(k):
                dg = dg.partial("q")
            if not dg.coeffs:
                continue
            coeff = (alpha ** j) * (beta ** k) / (math.factorial(j) * math.factorial(k))
            out = out + coeff * (df * dg)
    return out


def _poly_partials(poly: PhasePolynomial, j: int, k: int,
                   first_axis: str) -> PhasePolynomial:
    out = poly
    for _ in range(j):
        out = out.partial(first_axis)
    second = "p" if first_axis == "q" else "q"
    for _ in range(k):
        out = out.partial(second)
    return out


def _star_poly_grid(f: PhasePolynomial, g: np.ndarray, grid: PhaseSpaceGrid,
                    alpha: complex, beta: complex) -> np.ndarray:
    """Polynomial left factor: the series terminates at f's degrees."""
    out = np.zeros((grid.n_q, grid.n_p), dtype=complex)
    for j in range(f.deg_q + 1):
        for k in range(f.deg_p + 1):
            df = _poly_partials(f, j, k, "q")
            if not df.coeffs:
                continue
            coeff = (alpha ** j) * (beta ** k) / (math.factorial(j) * math.factorial(k))
            out += coeff * df.on_grid(grid) * spectral_derivative(g, grid, k, j)
    return out


def _star_grid_poly(f: np.ndarray, g: PhasePolynomial, grid: PhaseSpaceGrid,
                    alpha: complex, beta: complex) -> np.ndarray:
    """Polynomial right factor: the series terminates at g's degrees."""
    out = np.zeros((grid.n_q, grid.n_p), dtype=complex)
    for j in range(g.deg_p + 1):
        for k in range(g.deg_q + 1):
            dg = _poly_partials(g, j, k, "p")
            if not dg.coeffs:
                continue
            coeff = (alpha ** j) * (beta ** k) / (math.factorial(j) * math.factorial(k))
            out += coeff * spectral_derivative(f, grid, j, k) * dg.on_grid(grid)
    return out


def _star_modesum(f: np.ndarray, g: np.ndarray, grid: PhaseSpaceGrid,
                  alpha: complex, beta: complex,
                  row_skip_rel: float = 1e-15) -> np.ndarray:
    """Twisted convolution of the double-Fourier coefficients.

    Exact for inputs band-limited to half the Nyquist band (then no frequency
    sum wraps). Rows of the left spectrum below row_skip_rel of its peak are
    skipped; for smooth data this prunes most of the O(N^3 log N) work.
    """
    _check_aliasing(f, grid, "left star factor")
    _check_aliasing(g, grid, "right star factor")
    bigf = np.fft.fft2(np.asarray(f, complex))
    bigg = np.fft.fft2(np.asarray(g, complex))
    kq, kp = grid.kq, grid.kp
    n_q, n_p = grid.n_q, grid.n_p
    row_amp = np.max(np.abs(bigf), axis=1)
    active = np.nonzero(row_amp > row_skip_rel * np.max(row_amp))[0]
    h = np.zeros((n_q, n_p), dtype=complex)
    for aq in active:
        # left factor phase couples its p-frequency to the right factor's
        # q-frequency kq[(cq - aq) % n_q], realized by rolling the kq vector
        kq_b = np.roll(kq, aq)
        a = bigf[aq, :][None, :] * np.exp(-beta * np.outer(kq_b, kp))
        b = np.roll(bigg, aq, axis=0) * np.exp(-alpha * kq[aq] * kp)[None, :]
        h += np.fft.ifft(np.fft.fft(a, axis=1) * np.fft.fft(b, axis=1), axis=1)
    return np.fft.ifft2(h) / (n_q * n_p)


def moyal_star(f, g, grid: PhaseSpaceGrid, ordering: str = "weyl"):
    """Star product of two phase-space symbols on the grid.

    Accepts any mix of PhasePolynomial and sampled-array factors:
    polynomial/polynomial products return a PhasePolynomial computed from the
    exact terminating series; mixed products return an array with the grid
    factor differentiated spectrally; array/array products go through the
    double-Fourier twisted convolution and warn when spectral content sits
    near the Nyquist band.
    """
    alpha, beta = _ordering_coeffs(ordering, grid.hbar)
    f_poly = isinstance(f, PhasePolynomial)
    g_poly = isinstance(g, PhasePolynomial)
    if f_poly and g_poly:
        return _star_poly_poly(f, g, alpha, beta)
    if f_poly:
        return _star_poly_grid(f, np.asarray(g, complex), grid, alpha, beta)
    if g_poly:
        return _star_grid_poly(np.asarray(f, complex), g, grid, alpha, beta)
    return _star_modesum(np.asarray(f, complex), np.asarray(g, complex),
                         grid, alpha, beta)


def moyal_star_series(f: np.ndarray, g: np.ndarray, grid: PhaseSpaceGrid,
                      ordering: str = "weyl", order: int = 2) -> np.ndarray:
    """Bidifferential series truncated at the given total order.

    Cross-check backend: agrees with the twisted-convolution product up to
    the first omitted order in hbar on smooth data.
    """
    alpha, beta = _ordering_coeffs(ordering, grid.hbar)
    f = np.asarray(f, complex)
    g = np.asarray(g, complex)
    out = np.zeros_like(f)
    for j in range(order + 1):
        for k in range(order + 1 - j):
            coeff = (alpha ** j) * (beta ** k) / (math.factorial(j) * math.factorial(k))
            if coeff == 0:
                continue
            out += coeff * spectral_derivative(f, grid, j, k) \
                * spectral_derivative(g, grid, k, j)
    return out


def poisson_bracket_grid(f: np.ndarray, g: np.ndarray, grid: PhaseSpaceGrid) -> np.ndarray:
    """{f, g} = df/dq dg/dp - df/dp dg/dq with spectral derivatives."""
    return (spectral_derivative(f, grid, 1, 0) * spectral_derivative(g, grid, 0, 1)
            - spectral_derivative(f, grid, 0, 1) * spectral_derivative(g, grid, 1, 0))


# ---------------------------------------------------------------------------
# oracles built on the star product


def stationary_moyal_check(grid: PhaseSpaceGrid, level: int = 0,
                           energy: float | None = None) -> float:
    """Sup-norm residual of (H star W_n) - E W_n for the oscillator.

    H = (q^2 + p^2)/2 enters as an exact polynomial, so the star against the
    sampled Wigner function terminates after the second-order terms and the
    residual is limited only by grid rounding. energy defaults to the
    eigenvalue hbar (level + 1/2); passing a wrong energy shows an O(1)
    mismatch.
    """
    h = PhasePolynomial({(2, 0): 0.5, (0, 2): 0.5})
    w = oscillator_wigner(grid, level)
    if energy is None:
        energy = grid.hbar * (level + 0.5)
    prod = moyal_star(h, w, grid)
    resid = np.max(np.abs(prod - energy * w))
    return float(resid / np.max(np.abs(w)))


def _slope_gaussian(qm, pm, center, sigma):
    return np.exp(-((qm - center[0]) ** 2) / (2 * sigma[0] ** 2)
                  - ((pm - center[1]) ** 2) / (2 * sigma[1] ** 2))


def semiclassical_defect(hbar: float, n: int = 256, box: float = 5.0) -> float:
    """max |(f star g - g star f)/(i hbar) - {f, g}| on a fixed Gaussian pair.

    The box is hbar-independent so the defect isolates the hbar scaling; the
    pair is offset and anisotropic to keep the bracket generic.
    """
    grid = PhaseSpaceGrid(n_q=n, n_p=n, q_min=-box, q_max=box,
                          p_min=-box, p_max=box, hbar=hbar)
    qm, pm = grid.meshes()
    f = _slope_gaussian(qm, pm, (-0.2, 0.1), (0.7, 0.8))
    g = _slope_gaussian(qm, pm, (0.2, -0.1), (0.8, 0.7))
    comm = moyal_star(f, g, grid) - moyal_star(g, f, grid)
    defect = comm / (1j * hbar) - poisson_bracket_grid(f, g, grid)
    return float(np.max(np.abs(defect)))


def hbar_convergence_sweep(hbars: tuple[float, ...] = (0.2, 0.1, 0.05),
                           n: int = 256) -> dict[str, object]:
    """Semiclassical defect per hbar plus the fitted log-log slope."""
    rows = [(float(h), semiclassical_defect(h, n=n)) for h in hbars]
    logs = np.log([r[0] for r in rows]), np.log([r[1] for r in rows])
    slope = float(np.polyfit(logs[0], logs[1], 1)[0])
    return {"rows": rows, "slope": slope}
