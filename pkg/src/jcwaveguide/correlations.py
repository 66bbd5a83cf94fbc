"""Second-order coherence of transmitted and reflected photon pairs.

For a degenerate planewave input (both photons at ``E/2``) the outgoing pair
amplitude at separation ``tau`` is ``A_direct + A_H(tau)`` with ``A_direct``
independent of ``tau`` and ``A_H`` decaying, so

    g2(tau) = |A_direct + A_H(tau)|**2 / |A_direct|**2

and the ``tau -> infinity`` normalization is exact. When the single-photon
coefficient of the channel vanishes, ``A_direct = 0`` and ``g2`` diverges;
such points are reported as ``inf`` with a ``divergent`` flag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import SystemParams, validate
from .errors import VanishingDenominator
from .single_photon import amplitudes
from .two_photon import SQRT2, envelope_H, normalize_channel

#: |t_bar| or |r_bar| below this makes g2 divergent.
DIVERGENCE_THRESHOLD = 1e-12


def _channel_coefficient(params: SystemParams, channel: str, k):
    amp = amplitudes(params, k)
    return amp.t_bar if channel == "RR" else amp.r_bar


def coincidence_G2(params: SystemParams, channel: str, k1: float, k2: float, tau):
    """Unnormalized ``|psi(y, y + tau)|**2`` for input ``|k1 k2>_RR``.

    Independent of ``y`` for planewave inputs. Only the ``RR`` and ``LL``
    channels carry two photons in the same direction.
    """
    channel = normalize_channel(channel)
    if channel == "RL":
        raise ValueError("coincidences are defined for RR or LL only")
    tau = np.asarray(tau, dtype=float)
    c1 = _channel_coefficient(params, channel, k1)
    c2 = _channel_coefficient(params, channel, k2)
    delta = 0.5 * (k1 - k2)
    # |planewave| at separation tau, centre-of-mass phase dropped
    direct = c1 * c2 * 2 * np.cos(delta * tau) / (SQRT2 * 2 * np.pi)
    H = envelope_H(params, k1, k2, 0.5 * tau, -0.5 * tau)
    return np.abs(direct + H) ** 2


def g2(params: SystemParams, channel: str, energy: float, tau, strict: bool = False):
    """``g2(tau)`` for two photons of total energy ``energy`` (each ``energy/2``).

    Returns ``inf`` where the channel's single-photon coefficient vanishes,
    or raises :class:`VanishingDenominator` if ``strict``.
    """
    validate(params)
    channel = normalize_channel(channel)
    if channel == "RL":
        raise ValueError("g2 is defined for the transmitted (RR) or reflected (LL) pair")
    k = 0.5 * energy
    coef = _channel_coefficient(params, channel, k)
    tau_arr = np.asarray(tau, dtype=float)
    if abs(coef) < DIVERGENCE_THRESHOLD:
        if strict:
            raise VanishingDenominator(f"{channel} single-photon coefficient vanishes at k={k}")
        out = np.full(tau_arr.shape, math.inf)
        return out[()] if out.ndim == 0 else out
    direct = coef * coef * SQRT2 / (2 * np.pi)
    H = envelope_H(params, k, k, 0.5 * np.abs(tau_arr), -0.5 * np.abs(tau_arr))
    out = np.abs(direct + H) ** 2 / abs(direct) ** 2
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class G2Curve:
    channel: str
    energy: float
    tau: np.ndarray
    values: np.ndarray
    divergent: bool


@dataclass(frozen=True)
class G2Spectrum:
    """``g2(0)`` against the per-photon energy ``E/2``."""

    channel: str
    half_energy: np.ndarray
    values: np.ndarray
    divergent: np.ndarray


def g2_tau_curve(params: SystemParams, channel: str, energy: float, tau_grid) -> G2Curve:
    channel = normalize_channel(channel)
    tau = np.atleast_1d(np.asarray(tau_grid, dtype=float))
    if np.any(tau < 0):
        raise ValueError("tau grid must be non-negative; g2 is even in tau")
    values = np.atleast_1d(g2(params, channel, energy, tau))
    return G2Curve(channel, float(energy), tau, values, bool(np.isinf(values).any()))


def g2_zero_spectrum(params: SystemParams, channel: str, half_energy_grid) -> G2Spectrum:
    channel = normalize_channel(channel)
    half = np.atleast_1d(np.asarray(half_energy_grid, dtype=float))
    values = np.array([g2(params, channel, 2 * h, 0.0) for h in half])
    return G2Spectrum(channel, half, values, np.isinf(values))
