"""Closed-form single-photon amplitudes and spectra.

Every quantity is built from the one shared denominator

    D(k) = (k - omega + i kappa/2)(k - Omega_eff) - g**2

(rescaled to avoid under- and overflow) so that the linear relations between
the cavity amplitude, the atomic amplitude and the transmission hold to
rounding error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SystemParams, validate
from .errors import DegenerateDenominator, EmptyGrid, GridNotIncreasing


@dataclass(frozen=True)
class OnePhotonAmplitudes:
    """Single-photon response at frequency ``k`` (scalars or equal-shape arrays).

    ``t`` is the one-mode (even channel) transmission; ``t_bar`` and ``r_bar``
    are the transmission and reflection of the two-directional waveguide.
    """

    k: np.ndarray | float
    s_c: np.ndarray | complex
    s_a: np.ndarray | complex
    t: np.ndarray | complex
    t_bar: np.ndarray | complex
    r_bar: np.ndarray | complex


def _denominator(params: SystemParams, k):
    """The shared denominator ``D(k)`` as written (reference form)."""
    w, W, g, kappa = params.omega, params.Omega_eff, params.g, params.kappa
    return (k - w + 0.5j * kappa) * (k - W) - g * g


def _scaled_amplitudes(params: SystemParams, k: np.ndarray):
    """``(s_c, s_a, denominator)`` with ``D`` divided by ``max(g, |k - Omega_eff|)``.

    Dividing through by the larger of the two keeps every ratio within
    ``[-1, 1]``, so ``g**2`` never underflows and ``(k - Omega_eff)/g`` never
    overflows. With ``g = 0`` the common factor ``k - Omega_eff`` is cancelled,
    leaving the empty-cavity result.
    """
    A = k - params.omega + 0.5j * params.kappa
    B = k - params.Omega_eff
    g = params.g
    sqk = np.sqrt(params.kappa)
    if g == 0.0:
        return sqk / A, np.zeros_like(A), A
    big_b = np.abs(B) >= g
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(big_b, g / np.where(big_b, B, 1.0), 0.0)  # g/B
        # real division keeps 0/g exact even for subnormal g
        u = np.where(big_b, 0.0, B.real / g + 1j * (B.imag / g))  # B/g
        den = np.where(big_b, A - g * r, A * u - g)
        s_c = np.where(big_b, sqk / den, sqk * u / den)
        s_a = np.where(big_b, s_c * r, sqk / den)
    return s_c, s_a, den


def amplitudes(params: SystemParams, k) -> OnePhotonAmplitudes:
    """Evaluate ``s_c``, ``s_a``, ``t``, ``t_bar`` and ``r_bar`` at ``k``.

    ``k`` may be a float or an array of floats. ``D(k)`` has no zeros on the
    real axis when ``kappa > 0``; :class:`DegenerateDenominator` is raised if
    rounding ever produces an exact zero.
    """
    validate(params)
    scalar = np.ndim(k) == 0
    k_arr = np.asarray(k, dtype=float)
    s_c, s_a, den = _scaled_amplitudes(params, k_arr)
    if np.any(den == 0):
        raise DegenerateDenominator(f"D(k) = 0 for params={params}")
    t = 1.0 - 1j * np.sqrt(params.kappa) * s_c
    t_bar = 0.5 * (t + 1.0)
    r_bar = 0.5 * (t - 1.0)
    if scalar:
        return OnePhotonAmplitudes(float(k_arr), complex(s_c), complex(s_a), complex(t),
                                   complex(t_bar), complex(r_bar))
    return OnePhotonAmplitudes(k_arr, s_c, s_a, t, t_bar, r_bar)


def transmission(params: SystemParams, k):
    """Shorthand for the one-mode transmission ``t(k)``."""
    return amplitudes(params, k).t


def check_grid(grid) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise EmptyGrid("frequency grid must be a non-empty 1-d sequence")
    if grid.size > 1 and np.any(np.diff(grid) <= 0):
        raise GridNotIncreasing("frequency grid must be strictly increasing")
    return grid


def transmission_spectrum(params: SystemParams, k_grid) -> np.ndarray:
    """Rows of ``(k, |t_bar|**2, |r_bar|**2)``, shape ``(len(k_grid), 3)``."""
    k = check_grid(k_grid)
    amp = amplitudes(params, k)
    return np.column_stack([k, np.abs(amp.t_bar) ** 2, np.abs(amp.r_bar) ** 2])


def excitation_spectrum(params: SystemParams, k_grid) -> np.ndarray:
    """Rows of ``(k, |s_c|**2, |s_a|**2)``."""
    k = check_grid(k_grid)
    amp = amplitudes(params, k)
    return np.column_stack([k, np.abs(amp.s_c) ** 2, np.abs(amp.s_a) ** 2])


def default_grid(params: SystemParams, n: int = 2001) -> np.ndarray:
    """Window ``omega +/- 5 kappa max(1, g/kappa)`` that shows both Rabi dips."""
    half = 5.0 * params.kappa * max(1.0, params.g / params.kappa)
    return np.linspace(params.omega - half, params.omega + half, n)
