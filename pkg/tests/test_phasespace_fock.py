import warnings

import numpy as np
import pytest

from geoqm.phasespace import (
    FockSpace,
    TruncationWarning,
    berezin_symbol,
    coherent_state,
    displacement,
    poisson_tail,
)


def test_ladder_commutator_breaks_only_at_the_cutoff():
    fock = FockSpace(12)
    comm = fock.lower @ fock.raise_ - fock.raise_ @ fock.lower
    interior = comm[:-1, :-1]
    assert np.max(np.abs(interior - np.eye(fock.dim - 1))) < 1e-12
    # the top diagonal entry absorbs the missing level above the cutoff
    assert comm[-1, -1] == pytest.approx(-(fock.dim - 1))
    assert np.max(np.abs(fock.number - np.diag(np.arange(fock.dim)))) < 1e-12


def test_coherent_state_is_a_lowering_eigenvector():
    fock = FockSpace(40)
    z = 1.0 + 0.5j
    vec = coherent_state(z, fock)
    assert np.linalg.norm(vec) == pytest.approx(1.0)
    resid = np.linalg.norm(fock.lower @ vec - z * vec)
    assert resid < 1e-8
    # vacuum amplitude matches the Poisson profile
    assert abs(vec[0]) == pytest.approx(np.exp(-abs(z) ** 2 / 2), rel=1e-8)
    assert np.array_equal(coherent_state(0.0, fock), np.eye(40, dtype=complex)[:, 0] + 0)


def test_berezin_symbol_of_the_number_operator():
    fock = FockSpace(48)
    assert berezin_symbol(fock.number, 0.0, fock) == pytest.approx(0.0, abs=1e-12)
    for z in (1.0, 0.8 - 0.6j):
        val = berezin_symbol(fock.number, z, fock)
        assert abs(val - abs(z) ** 2) < 1e-8
        assert abs(val.imag) < 1e-12
    with pytest.raises(ValueError, match="48 x 48"):
        berezin_symbol(np.eye(3), 1.0, fock)


def test_displacement_is_unitary_and_inverts():
    fock = FockSpace(24)
    z = 0.4 + 0.3j
    d = displacement(z, fock)
    assert np.max(np.abs(d.conj().T @ d - np.eye(fock.dim))) < 1e-12
    assert np.max(np.abs(displacement(-z, fock) @ d - np.eye(fock.dim))) < 1e-12
    # displacing the vacuum reproduces the coherent state up to truncation
    vac = np.zeros(fock.dim, complex)
    vac[0] = 1.0
    moved = d @ vac
    overlap = abs(np.vdot(coherent_state(z, fock), moved))
    assert overlap == pytest.approx(1.0, abs=1e-8)


def test_truncation_warning_carries_the_tail_weight():
    with pytest.warns(TruncationWarning, match="cutoff"):
        coherent_state(5.0, FockSpace(12))
    assert poisson_tail(5.0, 12) > 1e-2
    assert poisson_tail(0.0, 12) == 0.0
    # safe amplitude: no warning at |z| = sqrt(M)/4
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        coherent_state(np.sqrt(40) / 4, FockSpace(40))


def test_dimension_validation():
    with pytest.raises(ValueError, match="two levels"):
        FockSpace(1)
