"""Poles as eigenvalues of the non-Hermitian effective Hamiltonian."""

from __future__ import annotations

import numpy as np

from ..core import SystemParams, validate


def effective_hamiltonian(params: SystemParams, n_excitations: int) -> np.ndarray:
    """Effective Hamiltonian of the atom-cavity system in the ``n``-excitation manifold.

    Basis: ``{|1,g>, |0,e>}`` for ``n = 1`` and ``{|2,g>, |1,e>}`` for ``n = 2``.
    Cavity leakage enters as ``-i kappa/2`` per photon.
    """
    validate(params)
    w, W, g, k = params.omega, params.Omega_eff, params.g, params.kappa
    if n_excitations == 1:
        return np.array([[w - 0.5j * k, g], [g, W]], dtype=complex)
    if n_excitations == 2:
        return np.array([[2 * w - 1j * k, np.sqrt(2) * g], [np.sqrt(2) * g, w + W - 0.5j * k]], dtype=complex)
    raise ValueError("n_excitations must be 1 or 2")


def effective_eigenvalues(params: SystemParams, n_excitations: int) -> tuple[complex, complex]:
    ev = np.linalg.eigvals(effective_hamiltonian(params, n_excitations))
    ev = sorted(ev, key=lambda z: (z.real, z.imag), reverse=True)
    return complex(ev[0]), complex(ev[1])
