"""Two-photon scattering: S-matrix elements and outgoing wavefunctions.

Delta functions never appear numerically. An S-matrix element is returned as
the coefficients of its delta pairings plus the smooth density ``B`` that
multiplies the total-energy delta.

Spatial amplitudes follow the symmetrized planewave normalization

    S_{k1,k2}(x1, x2) = [exp(i k1 x1 + i k2 x2) + exp(i k2 x1 + i k1 x2)] / (sqrt(2) 2 pi)

for states ``int dx1 dx2 psi(x1, x2) a^dag(x1) a^dag(x2) |0> / sqrt(2)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .core import SystemParams, is_exceptional_point, one_excitation_poles, two_excitation_poles, validate
from .errors import DegenerateDenominator, UnknownChannel
from .single_photon import amplitudes

SQRT2 = np.sqrt(2.0)

CHANNELS = ("RR", "LL", "RL")
_CHANNEL_ALIASES = {
    "RR": "RR", "TRANSMITTED": "RR", "T": "RR",
    "LL": "LL", "REFLECTED": "LL", "R": "LL",
    "RL": "RL", "LR": "RL", "MIXED": "RL",
    "EE": "EE",
}


def normalize_channel(channel: str, allow_ee: bool = False) -> str:
    name = _CHANNEL_ALIASES.get(str(channel).upper())
    if name is None or (name == "EE" and not allow_ee):
        raise UnknownChannel(f"unknown channel {channel!r}")
    return name


def planewave(k1, k2, x1, x2):
    """Symmetrized two-photon planewave ``S_{k1,k2}(x1, x2)``."""
    return (np.exp(1j * (k1 * x1 + k2 * x2)) + np.exp(1j * (k2 * x1 + k1 * x2))) / (SQRT2 * 2 * np.pi)


def kernel_F(params: SystemParams, k1, k2):
    """Input-side factor of the fluorescent term; symmetric in ``k1, k2``."""
    validate(params)
    if params.g == 0.0:
        return np.zeros(np.broadcast(k1, k2).shape, dtype=complex)[()]
    g, kappa, w = params.g, params.kappa, params.omega
    a1 = amplitudes(params, k1)
    a2 = amplitudes(params, k2)
    E = np.asarray(k1) + np.asarray(k2)
    lp, lm = two_excitation_poles(params)
    num = 2 * g * (a1.s_c + a2.s_c) + (E - 2 * w + 1j * kappa) * (a1.s_a + a2.s_a)
    return 1j * np.sqrt(kappa) * g / np.pi * num / ((E - lp) * (E - lm))


def fluorescent_B(params: SystemParams, p1, p2, k1, k2):
    """Density of the correlated part, ``B = s_a(p1) s_a(p2) F(k1, k2)``.

    Physical on the shell ``p1 + p2 == k1 + k2`` but defined for any momenta.
    """
    return amplitudes(params, p1).s_a * amplitudes(params, p2).s_a * kernel_F(params, k1, k2)


class Delta(NamedTuple):
    """One factor ``delta(k_i - sign * p_j)`` of a direct-term pairing."""

    k_index: int
    p_index: int
    sign: int


Pairing = tuple[Delta, Delta]

_PAIRINGS: dict[str, tuple[Pairing, Pairing]] = {
    "EE": ((Delta(1, 1, 1), Delta(2, 2, 1)), (Delta(1, 2, 1), Delta(2, 1, 1))),
    "RR": ((Delta(1, 1, 1), Delta(2, 2, 1)), (Delta(1, 2, 1), Delta(2, 1, 1))),
    "LL": ((Delta(1, 1, -1), Delta(2, 2, -1)), (Delta(1, 2, -1), Delta(2, 1, -1))),
    "RL": ((Delta(1, 1, 1), Delta(2, 2, -1)), (Delta(2, 1, 1), Delta(1, 2, -1))),
}

# sign applied to (p1, p2) to get outgoing photon energies
_OUT_ENERGY_SIGNS = {"EE": (1, 1), "RR": (1, 1), "LL": (-1, -1), "RL": (1, -1)}


@dataclass(frozen=True)
class TwoPhotonSMatrix:
    """Structured two-photon S-matrix element.

    The element equals ``sum_j direct[j] * prod(deltas in pairings[j])``
    plus ``correlated * delta(energy_out - energy_in)``.
    """

    channel: str
    k1: float
    k2: float
    p1: float
    p2: float
    direct: tuple[complex, complex]
    pairings: tuple[Pairing, Pairing]
    correlated: complex

    @property
    def energy_in(self) -> float:
        return self.k1 + self.k2

    @property
    def energy_out(self) -> float:
        s1, s2 = _OUT_ENERGY_SIGNS[self.channel]
        return s1 * self.p1 + s2 * self.p2

    def on_shell(self, atol: float = 1e-12) -> bool:
        return abs(self.energy_out - self.energy_in) <= atol * max(1.0, abs(self.energy_in))

    def pairing_supported(self, j: int, atol: float = 1e-12) -> bool:
        """Whether the momenta lie on the support of the ``j``-th delta pairing."""
        k = (None, self.k1, self.k2)
        p = (None, self.p1, self.p2)
        return all(abs(k[d.k_index] - d.sign * p[d.p_index]) <= atol for d in self.pairings[j])


def smatrix_ee(params: SystemParams, p1: float, p2: float, k1: float, k2: float) -> TwoPhotonSMatrix:
    """One-mode (even channel) two-photon S-matrix element."""
    tt = complex(amplitudes(params, p1).t * amplitudes(params, p2).t)
    B = complex(fluorescent_B(params, p1, p2, k1, k2))
    return TwoPhotonSMatrix("EE", k1, k2, p1, p2, (tt, tt), _PAIRINGS["EE"], B)


def smatrix_two_mode(params: SystemParams, channel: str, p1: float, p2: float,
                     k1: float, k2: float) -> TwoPhotonSMatrix:
    """Two-directional S-matrix for two right-moving input photons.

    ``channel`` names the outgoing pair: ``RR`` (both transmitted), ``LL``
    (both reflected) or ``RL`` (``p1`` transmitted, ``p2`` reflected). Outgoing
    left-movers carry momentum ``-energy``.
    """
    channel = normalize_channel(channel)
    a1, a2 = amplitudes(params, k1), amplitudes(params, k2)
    if channel == "RR":
        direct = (a1.t_bar * a2.t_bar,) * 2
    elif channel == "LL":
        direct = (a1.r_bar * a2.r_bar,) * 2
    else:
        # which input photon is transmitted differs between the two pairings
        direct = (a1.t_bar * a2.r_bar, a2.t_bar * a1.r_bar)
    s1, s2 = _OUT_ENERGY_SIGNS[channel]
    B = fluorescent_B(params, s1 * p1, s2 * p2, k1, k2)
    direct = (complex(direct[0]), complex(direct[1]))
    return TwoPhotonSMatrix(channel, k1, k2, p1, p2, direct, _PAIRINGS[channel], complex(B) / 4)


def envelope_profile(params: SystemParams, energy, abs_x):
    """Relative-coordinate shape of the bound-state envelope.

    Returns ``Q(E, |x|)`` with

        Q = [e^{i(E-2l_-)|x|/2}/(E-2l_-) - e^{i(E-2l_+)|x|/2}/(E-2l_+)] / ((l_+ - l_-)(E - l_+ - l_-))

    evaluated without cancellation; at an exceptional point the confluent
    limit is used.
    """
    lp, lm = one_excitation_poles(params)
    E = np.asarray(energy, dtype=float)
    s = 0.5 * np.abs(np.asarray(abs_x, dtype=float))
    u = E - lp - lm
    if is_exceptional_point(params):
        base = np.exp(1j * u * s)
        return (2j * s - 2 / u) * base / u**2
    d = lp - lm
    if d.imag < 0:
        # Q is even in d; pick the sign that keeps expm1 bounded
        d = -d
    denom = (u + d) * (u - d)
    if np.any(denom == 0):
        # E - 2 lambda_1 is never zero for kappa > 0; only underflow gets here
        raise DegenerateDenominator("E/2 coincides with a one-excitation pole to machine precision")
    base = np.exp(1j * (u - d) * s)
    em1 = np.expm1(2j * d * s)
    diff_over_d = base * em1 / d
    total = base * (em1 + 2)
    return (diff_over_d - total / u) / denom


def envelope_H(params: SystemParams, k1, k2, x1, x2):
    """Bound-state part ``H(x1, x2)`` of the transmitted/reflected pair."""
    validate(params)
    shape = np.broadcast(k1, k2, x1, x2).shape
    if params.g == 0.0:
        return np.zeros(shape, dtype=complex)[()]
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    E = np.asarray(k1) + np.asarray(k2)
    xc = 0.5 * (x1 + x2)
    pref = 1j * params.g**2 * params.kappa / (4 * SQRT2)
    F = kernel_F(params, k1, k2)
    return pref * F * np.exp(1j * E * xc) * envelope_profile(params, E, x1 - x2)


@dataclass(frozen=True)
class TwoPhotonWavefunction:
    """Outgoing amplitude in one channel for input ``|k1, k2>_RR``.

    For ``RR`` the amplitude multiplies ``a_R^dag(x1) a_R^dag(x2)/sqrt(2)``,
    for ``LL`` it multiplies ``a_L^dag(-x1) a_L^dag(-x2)/sqrt(2)`` and for
    ``RL`` it multiplies ``a_R^dag(x1) a_L^dag(-x2)``.
    """

    params: SystemParams
    channel: str
    k1: float
    k2: float

    @property
    def energy_in(self) -> float:
        return self.k1 + self.k2

    @property
    def delta_in(self) -> float:
        return 0.5 * (self.k1 - self.k2)

    @staticmethod
    def coordinates(x1, x2):
        """Centre of mass ``x_c`` and separation ``x = x1 - x2``."""
        return 0.5 * (np.asarray(x1) + np.asarray(x2)), np.asarray(x1) - np.asarray(x2)

    def direct(self, x1, x2):
        a1 = amplitudes(self.params, self.k1)
        a2 = amplitudes(self.params, self.k2)
        k1, k2 = self.k1, self.k2
        if self.channel == "RR":
            return a1.t_bar * a2.t_bar * planewave(k1, k2, x1, x2)
        if self.channel == "LL":
            return a1.r_bar * a2.r_bar * planewave(k1, k2, x1, x2)
        return (a1.t_bar * a2.r_bar * np.exp(1j * (k1 * np.asarray(x1) + k2 * np.asarray(x2)))
                + a2.t_bar * a1.r_bar * np.exp(1j * (k2 * np.asarray(x1) + k1 * np.asarray(x2)))) / (2 * np.pi)

    def correlated(self, x1, x2):
        H = envelope_H(self.params, self.k1, self.k2, x1, x2)
        return SQRT2 * H if self.channel == "RL" else H

    def __call__(self, x1, x2):
        return self.direct(x1, x2) + self.correlated(x1, x2)


def output_wavefunction(params: SystemParams, channel: str, k1: float, k2: float) -> TwoPhotonWavefunction:
    validate(params)
    return TwoPhotonWavefunction(params, normalize_channel(channel), float(k1), float(k2))


# --- even/odd recomposition -------------------------------------------------

# coefficient of R^dag(x) and L^dag(-x) in a_e^dag(x), a_o^dag(x), times sqrt(2)
_EXPAND = {"e": {"R": 1.0, "L": 1.0}, "o": {"R": 1.0, "L": -1.0}}


def _ee_correlated_residues(params: SystemParams, k1, k2, x1, x2):
    """Correlated even-channel amplitude as the plain two-residue sum."""
    if params.g == 0.0:
        return np.zeros(np.broadcast(x1, x2).shape, dtype=complex)
    lp, lm = one_excitation_poles(params)
    E = k1 + k2
    xc = 0.5 * (np.asarray(x1) + np.asarray(x2))
    ax = np.abs(np.asarray(x1) - np.asarray(x2))
    pref = 1j * params.g**2 * params.kappa / SQRT2 * kernel_F(params, k1, k2) * np.exp(1j * E * xc)
    term_m = np.exp(1j * (E / 2 - lm) * ax) / ((lp - lm) * (E - 2 * lm) * (E - lm - lp))
    term_p = np.exp(1j * (E / 2 - lp) * ax) / ((lm - lp) * (E - 2 * lp) * (E - lp - lm))
    return pref * (term_m + term_p)


@dataclass(frozen=True)
class EvenOddComposition:
    """Outgoing state assembled from the four parity subspaces.

    The input ``|k1 k2>_RR`` splits as ``ee/2 + oo/2 + (eo + oe)/(2 sqrt 2)``.
    The ``ee`` pair scatters through the full two-photon S-matrix, the odd
    photon passes unchanged, and in ``eo``/``oe`` only the even photon picks
    up ``t``. Projecting back onto left/right movers gives each channel.
    """

    params: SystemParams
    k1: float
    k2: float

    def subspace_terms(self) -> list[tuple[complex, tuple[str, str], Callable]]:
        p, k1, k2 = self.params, self.k1, self.k2
        t1 = complex(amplitudes(p, k1).t)
        t2 = complex(amplitudes(p, k2).t)
        norm = 1 / (SQRT2 * 2 * np.pi)

        def ee(x1, x2):
            return t1 * t2 * planewave(k1, k2, x1, x2) + _ee_correlated_residues(p, k1, k2, x1, x2)

        def oo(x1, x2):
            return planewave(k1, k2, x1, x2)

        def eo(x1, x2):  # even photon at x1
            return norm * (t1 * np.exp(1j * (k1 * x1 + k2 * x2)) + t2 * np.exp(1j * (k2 * x1 + k1 * x2)))

        def oe(x1, x2):  # even photon at x2
            return norm * (t2 * np.exp(1j * (k1 * x1 + k2 * x2)) + t1 * np.exp(1j * (k2 * x1 + k1 * x2)))

        # (weight incl. operator normalization, parities, amplitude)
        return [
            (0.5 / SQRT2, ("e", "e"), ee),
            (0.5 / SQRT2, ("o", "o"), oo),
            (1 / (2 * SQRT2), ("e", "o"), eo),
            (1 / (2 * SQRT2), ("o", "e"), oe),
        ]

    def _operator_coefficient(self, dirs: tuple[str, str], x1, x2):
        """Coefficient function of ``D1^dag(x1) D2^dag(x2)`` in the out-state."""
        total = 0
        for weight, (a, b), amp in self.subspace_terms():
            c = 0.5 * _EXPAND[a][dirs[0]] * _EXPAND[b][dirs[1]]
            total = total + weight * c * amp(x1, x2)
        return total

    def amplitude(self, channel: str, x1, x2):
        channel = normalize_channel(channel)
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        if channel == "RR":
            K = self._operator_coefficient(("R", "R"), x1, x2)
            K_swap = self._operator_coefficient(("R", "R"), x2, x1)
            return SQRT2 * 0.5 * (K + K_swap)
        if channel == "LL":
            K = self._operator_coefficient(("L", "L"), x1, x2)
            K_swap = self._operator_coefficient(("L", "L"), x2, x1)
            return SQRT2 * 0.5 * (K + K_swap)
        return self._operator_coefficient(("R", "L"), x1, x2) + self._operator_coefficient(("L", "R"), x2, x1)


def compose_from_even_odd(params: SystemParams, k1: float, k2: float) -> EvenOddComposition:
    validate(params)
    return EvenOddComposition(params, float(k1), float(k2))
