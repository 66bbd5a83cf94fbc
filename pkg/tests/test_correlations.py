import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import STRONG, WEAK, system_params
from jcwaveguide.core import one_excitation_poles
from jcwaveguide.correlations import (
    DIVERGENCE_THRESHOLD,
    coincidence_G2,
    g2,
    g2_tau_curve,
    g2_zero_spectrum,
)
from jcwaveguide.errors import VanishingDenominator
from jcwaveguide.single_photon import amplitudes
from jcwaveguide.two_photon import output_wavefunction

# Frozen regression constants for kappa = 1, omega = Omega = 0. The closed
# form was checked against the wavepacket lattice oracle (correlated part
# within 0.5% L2); the values happen to be 181/541, 16/81 and 400/441.
G2_STRONG_REFLECTED_AT_RABI = 0.3345656192236611
G2_WEAK_TRANSMITTED_AT_ATOM = 0.19753086419753088
G2_STRONG_TRANSMITTED_AT_ATOM = 0.9070294784580499


@pytest.mark.parametrize("sign", [1, -1])
def test_strong_reflected_regression(sign):
    assert g2(STRONG, "LL", 2 * sign * STRONG.g, 0.0) == pytest.approx(G2_STRONG_REFLECTED_AT_RABI, rel=1e-12)


def test_weak_transmitted_regression():
    assert g2(WEAK, "RR", 0.0, 0.0) == pytest.approx(G2_WEAK_TRANSMITTED_AT_ATOM, rel=1e-12)


def test_strong_transmitted_at_atom_regression():
    assert g2(STRONG, "transmitted", 0.0, 0.0) == pytest.approx(G2_STRONG_TRANSMITTED_AT_ATOM, rel=1e-12)


@pytest.mark.parametrize("p, ch, half", [(STRONG, "LL", math.sqrt(5)), (STRONG, "RR", 0.0), (WEAK, "RR", 0.0),
                                         (STRONG, "RR", 1.3), (WEAK, "LL", 0.8)])
def test_long_delay_limit(p, ch, half):
    assert abs(g2(p, ch, 2 * half, 1e3 / p.kappa) - 1) < 1e-6
    assert abs(g2(p, ch, 2 * half, 100 / p.kappa) - 1) < 1e-4


@settings(max_examples=100)
@given(system_params(lossy=True, min_g=1e-3), st.floats(-4, 4), st.sampled_from(["RR", "LL"]))
def test_normalization_limit_random(p, half, ch):
    v = g2(p, ch, 2 * half, 2e3 / p.kappa)
    if math.isfinite(v):
        # slowest envelope decay is |Im(E/2 - lambda_1)|, which can be small for weak g
        slow = min(abs((half - lam).imag) for lam in one_excitation_poles(p))
        if slow * 2e3 / p.kappa > 40:
            assert abs(v - 1) < 1e-4


def test_divergent_points_are_tagged():
    assert math.isinf(g2(STRONG, "RR", 2 * STRONG.g, 0.0))
    assert math.isinf(g2(WEAK, "LL", 0.0, 0.0))
    with pytest.raises(VanishingDenominator):
        g2(STRONG, "RR", 2 * STRONG.g, 0.0, strict=True)
    curve = g2_tau_curve(STRONG, "RR", 2 * STRONG.g, [0.0, 1.0])
    assert curve.divergent and np.all(np.isinf(curve.values))


def test_divergence_localization():
    grid = np.linspace(-4, 4, 801)
    spec = g2_zero_spectrum(STRONG, "RR", grid)
    zeros = np.abs(amplitudes(STRONG, grid).t_bar) < DIVERGENCE_THRESHOLD
    assert np.array_equal(spec.divergent, zeros)
    assert np.array_equal(spec.divergent, np.isinf(spec.values))


def test_divergence_localization_on_exact_grid():
    g = STRONG.g
    spec = g2_zero_spectrum(STRONG, "RR", [-g, -1.0, 0.0, 1.0, g])
    assert spec.divergent.tolist() == [True, False, False, False, True]
    refl = g2_zero_spectrum(STRONG, "LL", [-g, 0.0, g])
    assert refl.divergent.tolist() == [False, True, False]


@pytest.mark.parametrize("p, ch, half", [(STRONG, "LL", math.sqrt(5)), (STRONG, "RR", 0.0), (WEAK, "RR", 0.0),
                                         (STRONG, "RR", 0.7)])
def test_brute_force_coincidences(p, ch, half):
    wf = output_wavefunction(p, ch, half, half)
    tau = np.linspace(0, 8, 33)
    direct = abs(wf.direct(0.0, 0.0))
    for y in (-3.0, 0.0, 2.5):
        # reflected amplitudes are written against a_L^dag(-x): same |psi| at mirrored positions
        brute = np.abs(wf(y, y + tau)) ** 2 / direct**2
        np.testing.assert_allclose(brute, g2(p, ch, 2 * half, tau), rtol=1e-10, atol=1e-12)


def test_nondegenerate_hook_reduces_to_degenerate():
    tau = np.array([0.0, 1.0, 4.0])
    G2 = coincidence_G2(STRONG, "LL", STRONG.g, STRONG.g, tau)
    r = amplitudes(STRONG, STRONG.g).r_bar
    direct = abs(r * r) ** 2 * 2 / (2 * math.pi) ** 2
    np.testing.assert_allclose(G2 / direct, g2(STRONG, "LL", 2 * STRONG.g, tau), rtol=1e-12)
    with pytest.raises(ValueError):
        coincidence_G2(STRONG, "RL", 0, 0, tau)


def test_tau_symmetry_and_single_point_curve():
    assert g2(STRONG, "LL", 4.0, -1.5) == g2(STRONG, "LL", 4.0, 1.5)
    curve = g2_tau_curve(STRONG, "LL", 2 * STRONG.g, [0.0])
    assert curve.values[0] == pytest.approx(g2(STRONG, "LL", 2 * STRONG.g, 0.0), rel=1e-14)
    with pytest.raises(ValueError):
        g2_tau_curve(STRONG, "LL", 0.0, [-1.0, 0.0])
    with pytest.raises(ValueError):
        g2(STRONG, "RL", 0.0, 0.0)


def test_strong_reflected_antibunched_throughout():
    tau = np.linspace(0, 10, 1001)
    for sign in (1, -1):
        assert np.all(g2(STRONG, "LL", 2 * sign * STRONG.g, tau) < 1)


def test_strong_reflected_spectrum_minima_near_rabi_peaks():
    g = STRONG.g
    for center in (-g, g):
        vals = g2_zero_spectrum(STRONG, "LL", [center - 0.3, center, center + 0.3]).values
        assert vals[1] < vals[0] and vals[1] < vals[2]


def test_weak_transmitted_antibunching_onset():
    tau = np.linspace(0, 2, 41)
    vals = g2(WEAK, "RR", 0.0, tau)
    assert vals[0] < 0.5 and np.all(np.diff(vals[:20]) > 0)


def test_curve_independent_of_input_labels():
    tau = np.linspace(0, 5, 11)
    a = coincidence_G2(STRONG, "RR", 0.4, 0.9, tau)
    b = coincidence_G2(STRONG, "RR", 0.9, 0.4, tau)
    np.testing.assert_allclose(a, b, rtol=1e-13)
