import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import REFERENCE, STRONG, WEAK, system_params
from jcwaveguide.core import SystemParams
from jcwaveguide.errors import DegenerateDenominator, EmptyGrid, GridNotIncreasing
from jcwaveguide.single_photon import (
    amplitudes,
    default_grid,
    excitation_spectrum,
    transmission,
    transmission_spectrum,
)

ks = st.floats(-10, 10, allow_nan=False)


def test_reference_at_atomic_resonance():
    a = amplitudes(REFERENCE, 0.0)
    assert abs(a.s_c) < 1e-15
    assert abs(a.s_a + math.sqrt(2)) < 1e-14
    assert abs(a.t - 1) < 1e-15 and abs(a.t_bar - 1) < 1e-15 and abs(a.r_bar) < 1e-15


def test_reference_at_vacuum_rabi_peak():
    a = amplitudes(REFERENCE, 1.0)
    assert abs(a.t + 1) < 1e-14 and abs(a.t_bar) < 1e-14 and abs(a.r_bar + 1) < 1e-14


def test_empty_cavity_reflects_on_resonance():
    a = amplitudes(SystemParams(0.0, 3.0, 0.0, 2.0), 0.0)
    assert abs(a.t + 1) < 1e-15 and a.s_a == 0


def test_empty_cavity_at_atom_frequency_is_finite():
    # the full denominator vanishes at k = Omega when g = 0; the reduced one does not
    a = amplitudes(SystemParams(0.0, 0.0, 0.0, 2.0), 0.0)
    assert abs(a.t + 1) < 1e-15


def test_degenerate_denominator_guard(monkeypatch):
    import jcwaveguide.single_photon as sp

    monkeypatch.setattr(sp, "_scaled_amplitudes", lambda params, k: (k, k, 0.0 * k))
    with pytest.raises(DegenerateDenominator):
        amplitudes(STRONG, 0.3)
    assert issubclass(DegenerateDenominator, ZeroDivisionError)


@settings(max_examples=500)
@given(system_params(), ks)
def test_scaled_denominator_never_vanishes_on_real_axis(p, k):
    from jcwaveguide.single_photon import _scaled_amplitudes

    assert _scaled_amplitudes(p, np.asarray(k))[2] != 0


@settings(max_examples=300)
@given(system_params(), ks)
def test_scaled_form_matches_reference_denominator(p, k):
    from jcwaveguide.single_photon import _denominator

    D = _denominator(p, k)
    if abs(D) > 1e-6:
        a = amplitudes(p, k)
        assert abs(a.s_c - math.sqrt(p.kappa) * (k - p.Omega_eff) / D) < 1e-12 * max(1, abs(a.s_c))
        assert abs(a.s_a - math.sqrt(p.kappa) * p.g / D) < 1e-12 * max(1, abs(a.s_a))


@settings(max_examples=500)
@given(system_params(lossy=False), ks)
def test_unitarity(p, k):
    a = amplitudes(p, k)
    assert abs(abs(a.t) - 1) < 1e-12
    assert abs(abs(a.t_bar) ** 2 + abs(a.r_bar) ** 2 - 1) < 1e-12


@settings(max_examples=300)
@given(system_params(min_g=0.0).filter(lambda p: p.gamma > 0), ks)
def test_lossy_flux_bounded(p, k):
    a = amplitudes(p, k)
    assert abs(a.t_bar) ** 2 + abs(a.r_bar) ** 2 <= 1 + 1e-12


@settings(max_examples=500)
@given(system_params(), ks)
def test_linear_relations(p, k):
    a = amplitudes(p, k)
    assert abs(p.g * a.s_c - (k - p.Omega_eff) * a.s_a) < 1e-12
    assert abs(a.t - 1 + 1j * math.sqrt(p.kappa) * a.s_c) < 1e-12
    assert abs(a.t_bar - a.r_bar - 1) < 1e-15


@pytest.mark.parametrize("p", [STRONG, WEAK], ids=["strong", "weak"])
def test_fixed_points(p):
    a = amplitudes(p, p.Omega_a)
    assert abs(a.t_bar - 1) < 1e-12
    assert abs(a.s_c) < 1e-12
    assert abs(a.s_a + math.sqrt(p.kappa) / p.g) < 1e-12
    for k in (p.omega + p.g, p.omega - p.g):
        assert abs(amplitudes(p, k).t_bar) < 1e-12


@pytest.mark.parametrize("sign", [1, -1])
def test_equal_excitation_at_rabi_peaks(sign):
    a = amplitudes(STRONG, sign * STRONG.g)
    assert abs(abs(a.s_c) - abs(a.s_a)) < 1e-12


def test_array_input_matches_scalar():
    k = np.linspace(-3, 3, 7)
    arr = amplitudes(STRONG, k)
    for i, ki in enumerate(k):
        assert arr.t_bar[i] == amplitudes(STRONG, ki).t_bar
    assert transmission(STRONG, 0.5) == amplitudes(STRONG, 0.5).t


def test_transmission_spectrum_rows():
    spec = transmission_spectrum(STRONG, [-STRONG.g, 0.0, STRONG.g])
    assert spec.shape == (3, 3)
    assert spec[0, 1] < 1e-24 and spec[2, 1] < 1e-24
    assert abs(spec[1, 1] - 1) < 1e-15
    np.testing.assert_allclose(spec[:, 1] + spec[:, 2], 1, atol=1e-12)


def test_weak_transparency():
    assert abs(transmission_spectrum(WEAK, [0.0])[0, 1] - 1) < 1e-12


def test_single_point_spectrum():
    row = transmission_spectrum(STRONG, [0.7])[0]
    a = amplitudes(STRONG, 0.7)
    assert row.tolist() == [0.7, abs(a.t_bar) ** 2, abs(a.r_bar) ** 2]


def test_excitation_spectrum_reference():
    row = excitation_spectrum(REFERENCE, [0.0])[0]
    assert row[1] < 1e-30 and abs(row[2] - 2) < 1e-14
    assert np.all(excitation_spectrum(SystemParams(0, 0, 0, 1), [-1.0, 0.5])[:, 2] == 0)


@pytest.mark.parametrize("grid, exc", [([], EmptyGrid), ([0.0, 0.0], GridNotIncreasing), ([1.0, 0.0], GridNotIncreasing)])
def test_bad_grids(grid, exc):
    with pytest.raises(exc):
        transmission_spectrum(STRONG, grid)
    with pytest.raises(exc):
        excitation_spectrum(STRONG, grid)


def test_default_grid_shows_both_dips():
    grid = default_grid(STRONG)
    assert grid.size == 2001
    assert grid[0] < -STRONG.g and grid[-1] > STRONG.g
    assert np.isclose(grid[-1], 5 * math.sqrt(5))
