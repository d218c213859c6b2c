"""Initial-data library."""

import numpy as np
import pytest

from gnls.data import (KINDS, gaussian, make_initial_data, periodized_sech,
                       plane_wave, random_bandlimited)
from gnls.grid import FourierGrid
from gnls.spectral import to_spectral


@pytest.fixture
def grid():
    return FourierGrid(d=1, N=256, L=40.0)


def test_gaussian_profile(grid):
    u = gaussian(grid, A=2.0, w=1.5)
    peak_idx = np.argmax(np.abs(u.values))
    assert grid.x[peak_idx] == pytest.approx(grid.L / 2)
    assert abs(u.values[peak_idx]) == pytest.approx(2.0, rel=1e-12)
    assert np.all(u.values.imag == 0.0)


def test_periodized_sech_profile(grid):
    u = periodized_sech(grid, A=1.0, a=1.0)
    peak_idx = np.argmax(np.abs(u.values))
    assert grid.x[peak_idx] == pytest.approx(grid.L / 2)
    # sech(0) = 1 plus exponentially small images
    assert abs(u.values[peak_idx]) == pytest.approx(1.0, abs=1e-12)
    assert np.all(u.values.real > 0.0)


def test_periodized_sech_small_torus_no_overflow():
    # many image terms; the overflow-safe sech form must stay finite
    g = FourierGrid(d=1, N=64, L=2.0)
    u = periodized_sech(g, a=1.0)
    assert np.all(np.isfinite(u.values))


def test_plane_wave_unit_modulus(grid):
    u = plane_wave(grid, A=0.5, k=3)
    assert np.allclose(np.abs(u.values), 0.5)
    uh = to_spectral(u)
    assert np.sum(np.abs(uh.values) > 1e-10) == 1


def test_random_bandlimited_band_and_determinism(grid):
    u1 = random_bandlimited(grid, seed=5, band=10)
    u2 = random_bandlimited(grid, seed=5, band=10)
    assert np.array_equal(u1.values, u2.values)
    k_idx = np.abs(np.fft.fftfreq(grid.N, d=1.0 / grid.N))
    assert np.all(u1.values[k_idx > 10] == 0.0)
    u3 = random_bandlimited(grid, seed=6, band=10)
    assert not np.array_equal(u1.values, u3.values)


def test_make_initial_data_dispatch(grid):
    for kind in KINDS:
        u = make_initial_data(grid, kind, {}, seed=1)
        assert u.grid == grid
    with pytest.raises(ValueError, match="unknown data kind"):
        make_initial_data(grid, "soliton", {})


def test_make_initial_data_params(grid):
    u = make_initial_data(grid, "plane_wave", {"A": 0.3, "k": 2})
    assert np.allclose(np.abs(u.values), 0.3)
