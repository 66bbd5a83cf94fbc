"""Independent brute-force checks of the closed-form results."""

from .eigen import effective_eigenvalues, effective_hamiltonian
from .lattice import (
    LatticeConfig,
    LatticeState,
    analytic_even_correlated,
    correlated_error,
    scatter_one_photon,
    scatter_two_photons,
)
from .ode import (
    PlaneWaveDrive,
    integrate_matrix_elements,
    ode_envelope,
    ode_fluorescent_B,
    ode_kernel_F,
    ode_one_photon,
)
from .spectral import quadrature_envelope

__all__ = [
    "LatticeConfig",
    "LatticeState",
    "PlaneWaveDrive",
    "analytic_even_correlated",
    "correlated_error",
    "effective_eigenvalues",
    "effective_hamiltonian",
    "integrate_matrix_elements",
    "ode_envelope",
    "ode_fluorescent_B",
    "ode_kernel_F",
    "ode_one_photon",
    "quadrature_envelope",
    "scatter_one_photon",
    "scatter_two_photons",
]
