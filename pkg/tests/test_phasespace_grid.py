import warnings

import numpy as np
import pytest

from geoqm.phasespace import (
    AliasingWarning,
    EdgeDecayWarning,
    PhasePolynomial,
    PhaseSpaceGrid,
    hbar_convergence_sweep,
    moyal_star,
    moyal_star_series,
    oscillator_eigenstate,
    oscillator_grid,
    oscillator_wigner,
    poisson_bracket_grid,
    spectral_derivative,
    stationary_moyal_check,
    wigner_function,
    wigner_marginals,
    wigner_normalization,
    wigner_overlap,
)


def gaussian_state(grid, center, sigma):
    psi = np.exp(-((grid.q - center) ** 2) / (4.0 * sigma**2)).astype(complex)
    return psi / np.sqrt(np.sum(np.abs(psi) ** 2) * grid.dq)


def test_grid_validation_and_axes():
    with pytest.raises(ValueError, match="power of two"):
        PhaseSpaceGrid(n_q=6, n_p=8, q_min=-1, q_max=1, p_min=-1, p_max=1, hbar=1.0)
    with pytest.raises(ValueError, match="increasing"):
        PhaseSpaceGrid(n_q=8, n_p=8, q_min=1, q_max=-1, p_min=-1, p_max=1, hbar=1.0)
    with pytest.raises(ValueError, match="hbar"):
        PhaseSpaceGrid(n_q=8, n_p=8, q_min=-1, q_max=1, p_min=-1, p_max=1, hbar=0.0)
    grid = oscillator_grid(1.0, n=64)
    assert grid.q[0] == grid.q_min
    assert grid.q.size == 64
    # the right endpoint is excluded, matching the periodic FFT layout
    assert grid.q[-1] == pytest.approx(grid.q_max - grid.dq)


def test_ground_state_wigner_norm_and_marginals():
    grid = oscillator_grid(1.0)
    psi = oscillator_eigenstate(grid, 0)
    w = wigner_function(psi, grid)
    assert w.dtype.kind == "f"
    assert abs(wigner_normalization(w, grid) - 1.0) < 1e-6
    q_marg, p_marg = wigner_marginals(w, grid)
    assert np.max(np.abs(q_marg - np.abs(psi) ** 2)) < 1e-6
    p_density = np.exp(-grid.p ** 2 / grid.hbar) / np.sqrt(np.pi * grid.hbar)
    assert np.max(np.abs(p_marg - p_density)) < 1e-6
    assert np.max(np.abs(w - oscillator_wigner(grid, 0))) < 1e-6


def test_first_excited_wigner_is_negative_at_the_origin():
    grid = oscillator_grid(1.0, n=256)
    w_closed = oscillator_wigner(grid, 1)
    i0 = np.argmin(np.abs(grid.q))
    j0 = np.argmin(np.abs(grid.p))
    assert w_closed[i0, j0] == pytest.approx(-2.0)
    w = wigner_function(oscillator_eigenstate(grid, 1), grid)
    assert np.max(np.abs(w - w_closed)) < 1e-6


def test_wigner_input_guards():
    grid = oscillator_grid(1.0, n=128)
    with pytest.raises(ValueError, match="norm"):
        wigner_function(np.ones(grid.n_q, complex), grid)
    # a normalized packet parked near the box edge triggers the decay warning
    psi = gaussian_state(grid, grid.q_max - 2.0, 0.8)
    with pytest.warns(EdgeDecayWarning):
        wigner_function(psi, grid)
    with pytest.raises(ValueError, match="q-samples"):
        wigner_function(np.zeros(7), grid)


def test_phase_polynomial_algebra():
    q, p = PhasePolynomial.q(), PhasePolynomial.p()
    qp = q * p
    assert qp.coeffs == {(1, 1): 1.0}
    expanded = (q + 2.0) * (p - 1.0)
    assert expanded.coeffs == {(1, 1): 1.0, (0, 1): 2.0, (1, 0): -1.0, (0, 0): -2.0}
    assert expanded(1.5, 2.0) == pytest.approx((1.5 + 2.0) * (2.0 - 1.0))
    d = (q * q * p).partial("q")
    assert d.coeffs == {(1, 1): 2.0}
    assert (q * q * p).partial("p").coeffs == {(2, 0): 1.0}
    assert q.deg_q == 1 and q.deg_p == 0
    grid = oscillator_grid(1.0, n=8)
    qm, pm = grid.meshes()
    assert np.max(np.abs(expanded.on_grid(grid) - (qm + 2) * (pm - 1))) < 1e-12
    with pytest.raises(ValueError, match="nonnegative"):
        PhasePolynomial({(-1, 0): 1.0})
    with pytest.raises(ValueError, match="axis"):
        q.partial("z")


def test_q_star_p_under_the_three_orderings():
    hbar = 0.5
    grid = oscillator_grid(hbar, n=16)
    q, p = PhasePolynomial.q(), PhasePolynomial.p()
    want_const = {"weyl": 0.5j * hbar, "standard": 1j * hbar, "antistandard": 0.0}
    for ordering, const in want_const.items():
        qp = moyal_star(q, p, grid, ordering=ordering)
        assert qp.coeffs.get((1, 1)) == pytest.approx(1.0)
        assert qp.coeffs.get((0, 0), 0.0) == pytest.approx(const)
        comm = moyal_star(q, p, grid, ordering=ordering) \
            - moyal_star(p, q, grid, ordering=ordering)
        assert comm.coeffs == pytest.approx({(0, 0): 1j * hbar})
    with pytest.raises(ValueError, match="ordering"):
        moyal_star(q, p, grid, ordering="normal")


def test_q2_star_p2_weyl_closed_form():
    hbar = 0.7
    grid = oscillator_grid(hbar, n=16)
    q, p = PhasePolynomial.q(), PhasePolynomial.p()
    prod = moyal_star(q * q, p * p, grid)
    want = {(2, 2): 1.0, (1, 1): 2j * hbar, (0, 0): -hbar * hbar / 2.0}
    assert set(prod.coeffs) == set(want)
    for key, val in want.items():
        assert prod.coeffs[key] == pytest.approx(val)


def test_mixed_polynomial_grid_star_is_the_terminated_series():
    grid = oscillator_grid(1.0, n=128)
    qm, pm = grid.meshes()
    f = np.exp(-(qm**2 + 0.8 * pm**2) / 2.0)
    q = PhasePolynomial.q()
    left = moyal_star(q, f, grid)
    want = qm * f + 0.5j * grid.hbar * spectral_derivative(f, grid, 0, 1)
    assert np.max(np.abs(left - want)) < 1e-10
    right = moyal_star(f, q, grid)
    want = qm * f - 0.5j * grid.hbar * spectral_derivative(f, grid, 0, 1)
    assert np.max(np.abs(right - want)) < 1e-10
    # constant right factor reduces to pointwise scaling
    assert np.max(np.abs(moyal_star(f, PhasePolynomial.constant(3.0), grid) - 3.0 * f)) < 1e-12


def test_modesum_agrees_with_truncated_series_at_cubic_order():
    def defect(hbar):
        grid = PhaseSpaceGrid(n_q=128, n_p=128, q_min=-5, q_max=5,
                              p_min=-5, p_max=5, hbar=hbar)
        qm, pm = grid.meshes()
        f = np.exp(-((qm + 0.4) ** 2 + pm**2) / 1.5)
        g = np.exp(-(qm**2 + (pm - 0.3) ** 2) / 1.8)
        full = moyal_star(f, g, grid)
        series = moyal_star_series(f, g, grid, order=2)
        return np.max(np.abs(full - series))

    d1, d2 = defect(0.2), defect(0.1)
    # the first omitted term is cubic in hbar, so halving hbar shrinks the
    # difference by roughly 8
    assert 6.0 < d1 / d2 < 10.0


def test_star_product_is_associative_on_contained_gaussians():
    grid = PhaseSpaceGrid(n_q=128, n_p=128, q_min=-7, q_max=7,
                          p_min=-7, p_max=7, hbar=0.5)
    qm, pm = grid.meshes()
    f = np.exp(-((qm - 1.2) ** 2 + pm**2) / (2 * 0.8**2))
    g = np.exp(-(qm**2 + (pm + 1.2) ** 2) / (2 * 1.2**2))
    h = np.exp(-((qm + 1.2) ** 2 + (pm - 0.5) ** 2) / (2 * 1.0**2))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        left = moyal_star(moyal_star(f, g, grid), h, grid)
        right = moyal_star(f, moyal_star(g, h, grid), grid)
    assert np.max(np.abs(left - right)) < 1e-6


def test_aliasing_warning_on_wrapped_polynomial_samples():
    grid = oscillator_grid(1.0, n=32)
    qm, _ = grid.meshes()
    with pytest.warns(AliasingWarning):
        moyal_star(qm.astype(complex), qm.astype(complex), grid)


def test_spectral_derivative_and_poisson_bracket():
    grid = PhaseSpaceGrid(n_q=32, n_p=32, q_min=0.0, q_max=2 * np.pi,
                          p_min=0.0, p_max=2 * np.pi, hbar=1.0)
    qm, pm = grid.meshes()
    f = np.sin(qm)
    g = np.sin(pm)
    assert np.max(np.abs(spectral_derivative(f, grid, 1, 0) - np.cos(qm))) < 1e-10
    bracket = poisson_bracket_grid(f, g, grid)
    assert np.max(np.abs(bracket - np.cos(qm) * np.cos(pm))) < 1e-10


def test_wigner_overlap_matches_the_state_pairing():
    grid = oscillator_grid(1.0)
    pairs = [
        (gaussian_state(grid, 0.0, np.sqrt(0.5)), gaussian_state(grid, 0.8, np.sqrt(0.5))),
        (gaussian_state(grid, 0.0, 0.9), gaussian_state(grid, -0.5, 0.6)),
        (oscillator_eigenstate(grid, 0), oscillator_eigenstate(grid, 1)),
    ]
    for psi, phi in pairs:
        w1 = wigner_function(psi, grid)
        w2 = wigner_function(phi, grid)
        fidelity = abs(np.sum(np.conj(psi) * phi) * grid.dq) ** 2
        assert abs(wigner_overlap(w1, w2, grid) - fidelity) < 1e-5


def test_oscillator_wigner_is_moyal_stationary():
    grid = oscillator_grid(1.0, n=256)
    assert stationary_moyal_check(grid, level=0) < 1e-5
    assert stationary_moyal_check(grid, level=1) < 1e-5
    assert stationary_moyal_check(grid, level=0, energy=0.8) > 0.1


def test_commutator_approaches_the_bracket_at_quadratic_rate():
    sweep = hbar_convergence_sweep(n=128)
    defects = [d for _, d in sweep["rows"]]
    assert all(a > b for a, b in zip(defects, defects[1:]))
    assert abs(sweep["slope"] - 2.0) < 0.1
