"""Phase-space quantization at desk scale.

Two backends live side by side: an exact discrete Weyl system on Z_N x Z_N
where the composition law and quantize/symbol round trips hold to rounding,
and continuum FFT grids where Wigner functions, Moyal products, coherent
states, and polar-form (hydrodynamic) diagnostics are checked against
analytic oracles. Finite dimension cannot carry the exact canonical
commutation relation, so exactness is only claimed where it is achievable.
"""

from .discrete import DiscreteWeylSystem, weyl_discrete
from .grid import (
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
    semiclassical_defect,
    spectral_derivative,
    stationary_moyal_check,
    wigner_function,
    wigner_marginals,
    wigner_normalization,
    wigner_overlap,
)
from .fock import (
    FockSpace,
    TruncationWarning,
    berezin_symbol,
    coherent_state,
    displacement,
    poisson_tail,
)
from .polar import PolarRecord, evolve_on_grid, polar_diagnostics, spectral_hamiltonian

__all__ = [
    "DiscreteWeylSystem", "weyl_discrete",
    "PhaseSpaceGrid", "PhasePolynomial", "oscillator_grid",
    "oscillator_eigenstate", "wigner_function", "wigner_marginals",
    "wigner_normalization", "wigner_overlap", "oscillator_wigner",
    "moyal_star", "moyal_star_series", "poisson_bracket_grid",
    "spectral_derivative",
    "stationary_moyal_check", "semiclassical_defect", "hbar_convergence_sweep",
    "EdgeDecayWarning", "AliasingWarning",
    "FockSpace", "coherent_state", "berezin_symbol", "displacement",
    "poisson_tail", "TruncationWarning",
    "PolarRecord", "polar_diagnostics", "spectral_hamiltonian", "evolve_on_grid",
]
