"""Time-domain integration of the matrix-element equations of motion.

The input-output equations close on a small hierarchy of matrix elements
between scattering states. For planewave inputs they are driven at fixed
frequencies; integrating them from rest until transients have decayed gives
the steady-state amplitudes without solving any algebra by hand.

Each element is integrated in a frame rotating at its own drive frequency
and scaled by a power of ``sqrt(2 pi)`` so that the input field is ``1``:

=========  ==========================================  ================
name       element                                     frame frequency
=========  ==========================================  ================
c1, a1     <0| c, sigma_- |k1+>                        k1
c2, a2     <0| c, sigma_- |k2+>                        k2
sc, cc     <0| sigma_- c, c^2 |k1 k2+>                 k1 + k2
cp, ap     <0| c, sigma_- |p+>        (per probe p)     p
xc, xa     <p+| c, sigma_- |k1 k2+>   (correlated part) k1 + k2 - p
=========  ==========================================  ================
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..core import SystemParams, one_excitation_poles, two_excitation_poles, validate
from ..errors import StepTooLarge

_SCALARS = ("c1", "a1", "c2", "a2", "sc", "cc")
_ARRAYS = ("cp", "ap", "xc", "xa")


@dataclass(frozen=True)
class PlaneWaveDrive:
    """Two input photons at ``k1``, ``k2``; optional outgoing probe frequencies."""

    k1: float
    k2: float
    probe: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def energy(self) -> float:
        return self.k1 + self.k2


@dataclass
class MatrixElementHistory:
    """Recorded matrix elements in the lab frame, plus final rotating-frame values."""

    times: np.ndarray
    lab: dict[str, np.ndarray]
    steady: dict[str, np.ndarray]
    drive: PlaneWaveDrive
    frozen_sigma_z: bool

    def one_photon(self, which: int = 1) -> tuple[complex, complex]:
        """Steady ``(s_c, s_a)`` for input photon ``which``."""
        return complex(self.steady[f"c{which}"]), complex(self.steady[f"a{which}"])


class _System:
    def __init__(self, params: SystemParams, drive: PlaneWaveDrive, frozen: bool):
        self.w = params.omega
        self.W = params.Omega_eff
        self.g = params.g
        self.k = params.kappa
        self.sk = np.sqrt(params.kappa)
        self.k1, self.k2 = drive.k1, drive.k2
        self.E = drive.energy
        self.p = np.asarray(drive.probe, dtype=float)
        self.frozen = frozen

    def rhs(self, y: dict) -> dict:
        w, W, g, k, sk = self.w, self.W, self.g, self.k, self.sk
        cav = w - 0.5j * k
        out = {}
        for n, nu in (("1", self.k1), ("2", self.k2)):
            c, a = y["c" + n], y["a" + n]
            out["c" + n] = -1j * (cav - nu) * c - 1j * sk - 1j * g * a
            out["a" + n] = -1j * (W - nu) * a - 1j * g * c
        sc, cc = y["sc"], y["cc"]
        out["sc"] = -1j * (w + W - 0.5j * k - self.E) * sc - 1j * sk * (y["a1"] + y["a2"]) - 1j * g * cc
        out["cc"] = -1j * (2 * cav - self.E) * cc - 2j * sk * (y["c1"] + y["c2"]) - 2j * g * sc
        cp, ap = y["cp"], y["ap"]
        out["cp"] = -1j * (cav - self.p) * cp - 1j * sk - 1j * g * ap
        out["ap"] = -1j * (W - self.p) * ap - 1j * g * cp
        nu = self.E - self.p
        xc, xa = y["xc"], y["xa"]
        out["xc"] = -1j * (cav - nu) * xc - 1j * g * xa
        source = -xc if self.frozen else 2 * np.conj(ap) * sc - xc
        out["xa"] = -1j * (W - nu) * xa + 1j * g * source
        return out


def _axpy(y, a, dy):
    return {n: y[n] + a * dy[n] for n in y}


def _rk4(sys: _System, y, h):
    k1 = sys.rhs(y)
    k2 = sys.rhs(_axpy(y, h / 2, k1))
    k3 = sys.rhs(_axpy(y, h / 2, k2))
    k4 = sys.rhs(_axpy(y, h, k3))
    return {n: y[n] + h / 6 * (k1[n] + 2 * k2[n] + 2 * k3[n] + k4[n]) for n in y}


def default_t_max(params: SystemParams, decay_lengths: float = 40.0) -> float:
    """Time for the slowest resonance to decay by ``exp(-decay_lengths)``."""
    rates = [-z.imag for z in (*one_excitation_poles(params), *two_excitation_poles(params))]
    slowest = min(r for r in rates if r > 0) if any(r > 0 for r in rates) else params.kappa / 2
    return decay_lengths / slowest


def integrate_matrix_elements(params: SystemParams, drive: PlaneWaveDrive, t_max: float | None = None,
                              dt: float = 0.02, frozen_sigma_z: bool = False, tol: float = 1e-6,
                              n_records: int = 200) -> MatrixElementHistory:
    """Integrate the matrix-element hierarchy from rest with fixed-step RK4.

    Every step is checked against two half steps; if they differ by more than
    ``tol * max(1, max|y|)`` for any element, :class:`StepTooLarge` is raised. With
    ``frozen_sigma_z`` the atomic inversion is pinned to ``-1``, which removes
    the only source term of the correlated elements.
    """
    validate(params)
    if len(drive.probe) and not params.lossless:
        raise ValueError("correlated elements assume a lossless atom (gamma == 0)")
    if t_max is None:
        t_max = default_t_max(params)
    n_steps = int(np.ceil(t_max / dt))
    sys = _System(params, drive, frozen_sigma_z)
    y = {n: np.zeros((), complex) for n in _SCALARS}
    y.update({n: np.zeros(sys.p.shape, complex) for n in _ARRAYS})

    every = max(1, n_steps // n_records)
    times, recs = [], {n: [] for n in y}
    carriers = {"c1": drive.k1, "a1": drive.k1, "c2": drive.k2, "a2": drive.k2,
                "sc": sys.E, "cc": sys.E, "cp": sys.p, "ap": sys.p, "xc": sys.E - sys.p, "xa": sys.E - sys.p}
    for step in range(1, n_steps + 1):
        full = _rk4(sys, y, dt)
        half = _rk4(sys, _rk4(sys, y, dt / 2), dt / 2)
        for n in y:
            scale = max(1.0, float(np.max(np.abs(half[n]), initial=0.0)))
            if np.max(np.abs(half[n] - full[n]), initial=0.0) > tol * scale:
                raise StepTooLarge(f"step {dt} too large at t={step * dt:.3g} (element {n})")
        y = {n: half[n] + (half[n] - full[n]) / 15 for n in y}
        if step % every == 0 or step == n_steps:
            t = step * dt
            times.append(t)
            for n in y:
                recs[n].append(y[n] * np.exp(-1j * carriers[n] * t))
    lab = {n: np.array(v) for n, v in recs.items()}
    return MatrixElementHistory(np.array(times), lab, {n: y[n].copy() for n in y}, drive, frozen_sigma_z)


def ode_one_photon(params: SystemParams, k: float, **kw) -> tuple[complex, complex]:
    """Steady cavity and atom amplitudes ``(s_c, s_a)`` at frequency ``k``."""
    hist = integrate_matrix_elements(params, PlaneWaveDrive(k, k), **kw)
    return hist.one_photon(1)


def ode_kernel_F(params: SystemParams, k1: float, k2: float, **kw) -> complex:
    hist = integrate_matrix_elements(params, PlaneWaveDrive(k1, k2), **kw)
    return complex(1j * params.g * hist.steady["sc"] / np.pi)


def ode_fluorescent_B(params: SystemParams, p1, k1: float, k2: float, frozen_sigma_z: bool = False, **kw):
    """``B(p1, k1 + k2 - p1; k1, k2)`` from the integrated correlated elements."""
    p1 = np.atleast_1d(np.asarray(p1, dtype=float))
    hist = integrate_matrix_elements(params, PlaneWaveDrive(k1, k2, p1), frozen_sigma_z=frozen_sigma_z, **kw)
    sk = np.sqrt(params.kappa)
    t_p = 1 - 1j * sk * hist.steady["cp"]
    return t_p * (-1j * sk) * hist.steady["xc"] / (2 * np.pi)


def ode_envelope(params: SystemParams, k1: float, k2: float, x, frozen_sigma_z: bool = False,
                 half_width: float = 20.0, step: float = 0.05, **kw):
    """Transmitted-pair correlated amplitude at centre of mass 0 and separation ``x``.

    Integrates the ODE-derived ``B`` over the outgoing relative momentum on a
    trapezoid grid, giving the quantity the closed form calls ``H``.
    """
    kw.setdefault("tol", 1e-3)
    kw.setdefault("t_max", default_t_max(params, 25.0))
    E = k1 + k2
    delta = np.arange(-half_width, half_width + step / 2, step)
    B = ode_fluorescent_B(params, E / 2 + delta, k1, k2, frozen_sigma_z=frozen_sigma_z, **kw)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    phase = np.exp(1j * np.outer(x, delta))
    C = np.trapezoid(B[None, :] * phase, delta, axis=1) / (2 * np.sqrt(2) * np.pi)
    return C / 4
