"""Correlated pair amplitude by direct Fourier quadrature of the bound term.

The closed-form envelope is obtained by closing contours and summing
residues. This oracle skips all of that: it integrates the momentum-space
fluorescent term against the planewave phase numerically. Because
``B(E/2 + d, E/2 - d)`` is even in ``d``, only a cosine transform is needed.
"""

from __future__ import annotations

import warnings

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from ..core import SystemParams, one_excitation_poles, validate
from ..two_photon import fluorescent_B


def quadrature_envelope(params: SystemParams, k1: float, k2: float, x1: float, x2: float) -> complex:
    """Transmitted-pair correlated amplitude at ``(x1, x2)`` via adaptive quadrature."""
    validate(params)
    E = k1 + k2
    x = abs(x1 - x2)

    def b(d, part):
        v = complex(fluorescent_B(params, E / 2 + d, E / 2 - d, k1, k2))
        return v.real if part == 0 else v.imag

    lams = one_excitation_poles(params)
    peaks = sorted({abs(lam.real - E / 2) for lam in lams})
    width = max(1e-3, min(-lam.imag for lam in lams))
    vals = []
    for part in (0, 1):
        if x < 0.5:
            # barely oscillatory over the decay range of B; split at the resonances of s_a(E/2 +- d)
            f = lambda d: b(d, part) * np.cos(d * x)  # noqa: E731
            edge = max(peaks) + 10 * width
            head, _ = quad(f, 0.0, edge, points=peaks, epsabs=1e-13, epsrel=1e-11, limit=400)
            if x >= 0.01:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", IntegrationWarning)
                    tail, _ = quad(b, edge, np.inf, args=(part,), weight="cos", wvar=x, epsabs=1e-13, limlst=200)
            else:
                tail, _ = quad(f, edge, np.inf, epsabs=1e-13, epsrel=1e-11, limit=400)
            v = head + tail
        else:
            with warnings.catch_warnings():
                # QAWF flags slowly converging cycles long after the sum is accurate
                warnings.simplefilter("ignore", IntegrationWarning)
                v, _ = quad(b, 0.0, np.inf, args=(part,), weight="cos", wvar=x, epsabs=1e-13, limlst=200)
        vals.append(v)
    integral = 2 * complex(vals[0], vals[1])
    return np.exp(0.5j * E * (x1 + x2)) * integral / (8 * np.sqrt(2) * np.pi)
