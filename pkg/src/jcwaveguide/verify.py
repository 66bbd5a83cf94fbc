"""Self-consistency and oracle checks behind ``jcwaveguide verify``.

Each check returns the worst observed deviation alongside its tolerance so
the results can be tabulated and diffed between runs.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import SystemParams, one_excitation_poles, two_excitation_poles
from .correlations import g2
from .oracle.eigen import effective_eigenvalues
from .oracle.lattice import LatticeConfig, correlated_error, scatter_one_photon, scatter_two_photons
from .oracle.ode import default_t_max, ode_envelope, ode_one_photon
from .oracle.spectral import quadrature_envelope
from .single_photon import amplitudes
from .two_photon import compose_from_even_odd, envelope_H, output_wavefunction

STRONG = SystemParams(0.0, 0.0, np.sqrt(5.0), 1.0)
WEAK = SystemParams(0.0, 0.0, 1 / np.sqrt(5.0), 1.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tolerance: float
    seconds: float

    @property
    def passed(self) -> bool:
        return bool(self.value < self.tolerance)


def random_params(rng: np.random.Generator, n: int, lossy: bool = False) -> list[SystemParams]:
    """Random systems with rates of order one."""
    out = []
    for _ in range(n):
        gamma = rng.uniform(0, 1) if lossy else 0.0
        out.append(SystemParams(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(0, 5),
                                rng.uniform(0.1, 5), gamma))
    return out


def _setwise(a, b) -> float:
    a, b = list(a), list(b)
    return min(max(abs(a[0] - b[0]), abs(a[1] - b[1])), max(abs(a[0] - b[1]), abs(a[1] - b[0])))


def check_unitarity(rng) -> float:
    worst = 0.0
    for p in random_params(rng, 10_000):
        amp = amplitudes(p, rng.uniform(-10, 10))
        worst = max(worst, abs(abs(amp.t) - 1), abs(abs(amp.t_bar) ** 2 + abs(amp.r_bar) ** 2 - 1))
    return worst


def check_fixed_points(rng) -> float:
    worst = 0.0
    for p in (STRONG, WEAK):
        at_atom = amplitudes(p, p.Omega_a)
        worst = max(worst, abs(at_atom.t_bar - 1), abs(at_atom.s_c),
                    abs(at_atom.s_a + np.sqrt(p.kappa) / p.g))
        for sign in (1, -1):
            worst = max(worst, abs(amplitudes(p, p.omega + sign * p.g).t_bar))
    return worst


def check_linear_relations(rng) -> float:
    worst = 0.0
    for p in random_params(rng, 1000, lossy=True):
        k = rng.uniform(-10, 10)
        a = amplitudes(p, k)
        worst = max(worst, abs(p.g * a.s_c - (k - p.Omega_eff) * a.s_a),
                    abs(a.t - 1 + 1j * np.sqrt(p.kappa) * a.s_c))
    return worst


def check_poles(rng) -> float:
    worst = 0.0
    for p in random_params(rng, 1000, lossy=True):
        worst = max(worst, _setwise(one_excitation_poles(p), effective_eigenvalues(p, 1)),
                    _setwise(two_excitation_poles(p), effective_eigenvalues(p, 2)))
    return worst


def check_composition(rng) -> float:
    worst = 0.0
    for p in random_params(rng, 5, lossy=True):
        k1, k2 = rng.uniform(-3, 3, 2)
        comp = compose_from_even_odd(p, k1, k2)
        for ch in ("RR", "LL", "RL"):
            wf = output_wavefunction(p, ch, k1, k2)
            x1, x2 = rng.uniform(-5, 5, (2, 20))
            worst = max(worst, float(np.max(np.abs(comp.amplitude(ch, x1, x2) - wf(x1, x2)))))
    return worst


def check_envelope_quadrature(rng) -> float:
    worst = 0.0
    for p in random_params(rng, 4, lossy=True):
        k1, k2 = rng.uniform(-3, 3, 2)
        x1, x2 = rng.uniform(-4, 4, 2)
        ref = quadrature_envelope(p, k1, k2, x1, x2)
        worst = max(worst, abs(complex(envelope_H(p, k1, k2, x1, x2)) - ref))
    return worst


def check_ode_one_photon(rng) -> float:
    worst = 0.0
    for p in (STRONG, WEAK):
        k = rng.uniform(-3, 3)
        s_c, s_a = ode_one_photon(p, k, t_max=default_t_max(p, 30.0))
        a = amplitudes(p, k)
        worst = max(worst, abs(s_c - a.s_c), abs(s_a - a.s_a))
    return worst


def check_g2_normalization(rng) -> float:
    worst = 0.0
    for p, ch, half in _g2_scenarios():
        v = g2(p, ch, 2 * half, 100.0 / p.kappa)
        if np.isfinite(v):
            worst = max(worst, abs(v - 1))
    return worst


def _g2_scenarios():
    return [(STRONG, "LL", STRONG.omega + STRONG.g), (STRONG, "LL", STRONG.omega - STRONG.g),
            (STRONG, "RR", STRONG.Omega_a), (WEAK, "RR", WEAK.Omega_a)]


def check_ode_envelope(rng) -> float:
    x = np.linspace(0, 8, 17)
    worst = 0.0
    for p in (STRONG, WEAK):
        ref = envelope_H(p, 0.1, 0.1, x / 2, -x / 2)
        got = ode_envelope(p, 0.1, 0.1, x)
        worst = max(worst, float(np.linalg.norm(got - ref) / np.linalg.norm(ref)))
    return worst


def check_ode_frozen(rng) -> float:
    x = np.linspace(0, 8, 17)
    return float(np.linalg.norm(ode_envelope(STRONG, 0.1, 0.1, x, frozen_sigma_z=True, half_width=5.0, step=0.25)))


def check_lattice_one_photon(rng) -> float:
    worst = 0.0
    for p in (STRONG, WEAK):
        half = 3 * max(p.g, p.kappa)
        ks = np.linspace(p.omega - half, p.omega + half, 21)
        res = scatter_one_photon(LatticeConfig.for_one_photon(p, 0.0), p, ks)
        worst = max(worst, float(np.max(np.abs(res.transmitted - np.abs(amplitudes(p, ks).t_bar) ** 2))))
    return worst


def check_lattice_two_photons(rng) -> float:
    worst = 0.0
    for p, k0 in ((STRONG, STRONG.omega + STRONG.g), (WEAK, WEAK.Omega_a)):
        res = scatter_two_photons(LatticeConfig.for_two_photons(p, k0), p)
        worst = max(worst, correlated_error(res))
    return worst


QUICK: list[tuple[str, Callable, float]] = [
    ("unitarity", check_unitarity, 1e-12),
    ("fixed_points", check_fixed_points, 1e-12),
    ("linear_relations", check_linear_relations, 1e-12),
    ("poles_vs_eigenvalues", check_poles, 1e-12),
    ("even_odd_composition", check_composition, 1e-10),
    ("envelope_vs_quadrature", check_envelope_quadrature, 1e-9),
    ("ode_one_photon", check_ode_one_photon, 1e-8),
    ("g2_normalization", check_g2_normalization, 1e-4),
]
FULL: list[tuple[str, Callable, float]] = QUICK + [
    ("ode_envelope_rel_l2", check_ode_envelope, 0.02),
    ("ode_frozen_sigma_z_l2", check_ode_frozen, 1e-10),
    ("lattice_one_photon", check_lattice_one_photon, 1e-3),
    ("lattice_two_photon_rel_l2", check_lattice_two_photons, 0.02),
]


def run_checks(level: str = "quick", seed: int = 0) -> list[CheckResult]:
    if level not in ("quick", "full"):
        raise ValueError(f"unknown verify level {level!r}")
    suite = QUICK if level == "quick" else FULL
    results = []
    for name, fn, tol in suite:
        rng = np.random.default_rng(seed)
        start = time.perf_counter()
        value = float(fn(rng))
        results.append(CheckResult(name, value, tol, time.perf_counter() - start))
    return results
