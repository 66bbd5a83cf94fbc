"""Photon transport through a waveguide side-coupled to a cavity with one two-level atom.

Closed-form one- and two-photon scattering amplitudes, the correlated
two-photon envelope, second-order coherence, and independent oracles that
check them.
"""

from .core import PoleSet, SystemParams, is_exceptional_point, one_excitation_poles, poles, two_excitation_poles
from .correlations import g2, g2_tau_curve, g2_zero_spectrum
from .single_photon import amplitudes, excitation_spectrum, transmission, transmission_spectrum
from .two_photon import (
    TwoPhotonSMatrix,
    TwoPhotonWavefunction,
    compose_from_even_odd,
    envelope_H,
    fluorescent_B,
    kernel_F,
    output_wavefunction,
    smatrix_ee,
    smatrix_two_mode,
)

__version__ = "0.1.0"

__all__ = [
    "PoleSet",
    "SystemParams",
    "TwoPhotonSMatrix",
    "TwoPhotonWavefunction",
    "amplitudes",
    "compose_from_even_odd",
    "envelope_H",
    "excitation_spectrum",
    "fluorescent_B",
    "g2",
    "g2_tau_curve",
    "g2_zero_spectrum",
    "is_exceptional_point",
    "kernel_F",
    "one_excitation_poles",
    "output_wavefunction",
    "poles",
    "smatrix_ee",
    "smatrix_two_mode",
    "transmission",
    "transmission_spectrum",
    "two_excitation_poles",
]
