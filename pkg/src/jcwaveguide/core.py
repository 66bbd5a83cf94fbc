"""System parameters and the complex resonances of the atom-cavity system.

All rates share one frequency unit and the waveguide group velocity is 1,
so wavenumbers, frequencies and inverse lengths are interchangeable.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import NamedTuple

from .errors import NegativeG, NegativeGamma, NonFiniteField, NonPositiveKappa

#: Relative pole separation below which the one-excitation poles are treated
#: as coalesced.
EXCEPTIONAL_POINT_RTOL = 1e-9


@dataclass(frozen=True)
class SystemParams:
    """Rates describing the waveguide / cavity / two-level-atom system.

    Attributes:
        omega: cavity mode frequency.
        Omega_a: atomic transition frequency.
        g: atom-cavity coupling rate.
        kappa: cavity decay rate into the waveguide, ``kappa = 2*pi*V**2``.
        gamma: atomic decay rate into non-guided modes.
    """

    omega: float
    Omega_a: float
    g: float
    kappa: float
    gamma: float = 0.0

    @property
    def Omega_eff(self) -> complex:
        """Atomic frequency with loss folded in, ``Omega_a - i*gamma/2``."""
        return complex(self.Omega_a, -0.5 * self.gamma)

    @property
    def lossless(self) -> bool:
        return self.gamma == 0.0

    def scaled(self, unit: float) -> "SystemParams":
        """Return the same system with every rate divided by ``unit``."""
        return replace(
            self,
            omega=self.omega / unit,
            Omega_a=self.Omega_a / unit,
            g=self.g / unit,
            kappa=self.kappa / unit,
            gamma=self.gamma / unit,
        )

    def shifted(self, shift: float) -> "SystemParams":
        """Return the system seen in a frame rotating at frequency ``shift``."""
        return replace(self, omega=self.omega - shift, Omega_a=self.Omega_a - shift)

    def as_dict(self) -> dict[str, float]:
        return {
            "omega": self.omega,
            "Omega_a": self.Omega_a,
            "g": self.g,
            "kappa": self.kappa,
            "gamma": self.gamma,
        }


def validate(params: SystemParams) -> SystemParams:
    """Check the field invariants and return ``params`` unchanged."""
    for name, value in params.as_dict().items():
        if not math.isfinite(value):
            raise NonFiniteField(f"{name} must be finite, got {value!r}")
    if params.kappa <= 0.0:
        raise NonPositiveKappa(f"kappa must be > 0, got {params.kappa!r}")
    if params.g < 0.0:
        raise NegativeG(f"g must be >= 0, got {params.g!r}")
    if params.gamma < 0.0:
        raise NegativeGamma(f"gamma must be >= 0, got {params.gamma!r}")
    return params


class PoleSet(NamedTuple):
    lambda1_plus: complex
    lambda1_minus: complex
    lambda2_plus: complex
    lambda2_minus: complex


def one_excitation_poles(params: SystemParams) -> tuple[complex, complex]:
    """Zeros of ``(lam - omega + i kappa/2)(lam - Omega_eff) - g**2``.

    The ``+`` root takes the principal branch of the square root. Only the
    unordered pair is meaningful.
    """
    validate(params)
    w, W, g, k = params.omega, params.Omega_eff, params.g, params.kappa
    mean = 0.5 * (w + W - 0.5j * k)
    root = cmath.sqrt((0.5 * (w - W - 0.5j * k)) ** 2 + g * g)
    return mean + root, mean - root


def two_excitation_poles(params: SystemParams) -> tuple[complex, complex]:
    """Zeros of ``(E - 2 omega + i kappa)(E - omega - Omega_eff + i kappa/2) - 2 g**2``."""
    validate(params)
    w, W, g, k = params.omega, params.Omega_eff, params.g, params.kappa
    mean = 0.5 * (W + 3.0 * w - 1.5j * k)
    root = cmath.sqrt((0.5 * (W - w + 0.5j * k)) ** 2 + 2.0 * g * g)
    return mean + root, mean - root


def poles(params: SystemParams) -> PoleSet:
    return PoleSet(*one_excitation_poles(params), *two_excitation_poles(params))


def is_exceptional_point(params: SystemParams, rtol: float = EXCEPTIONAL_POINT_RTOL) -> bool:
    """True when the two one-excitation poles coalesce to within ``rtol``."""
    lp, lm = one_excitation_poles(params)
    return abs(lp - lm) < rtol * abs(lp + lm)
