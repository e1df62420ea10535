import math

import numpy as np
import pytest

from gbbmlab.spectral import Grid, SpectralField


def test_grid_validation():
    with pytest.raises(ValueError):
        Grid(1000, 10.0)  # not a power of two
    with pytest.raises(ValueError):
        Grid(256, 0.0)
    with pytest.raises(ValueError):
        Grid(0, 10.0)


def test_grid_geometry():
    g = Grid(256, 32.0)
    assert g.dx == 0.25
    assert g.dxi == pytest.approx(math.pi / 32.0)
    assert g.nyquist == pytest.approx(math.pi * 256 / 64.0)
    assert g.points[0] == -32.0
    assert g.points[-1] == pytest.approx(32.0 - 0.25)
    assert np.max(np.abs(g.frequencies)) == pytest.approx(g.nyquist)


def test_roundtrip_physical():
    g = Grid(512, 40.0)
    rng = np.random.default_rng(3)
    u = rng.standard_normal(g.n_modes)
    f = SpectralField.from_physical(g, u)
    assert np.max(np.abs(f.physical() - u)) < 1e-12
    assert f.max_imag() < 1e-12
    assert f.hermitian_defect() < 1e-10


def test_continuum_coeffs_match_gaussian_transform():
    # transform of exp(-x^2 / (2 w^2)) is w exp(-xi^2 w^2 / 2) in the
    # unitary convention; the periodic approximation should match closely
    g = Grid(2**12, 128.0)
    w = 1.0
    f = SpectralField.from_function(g, lambda x: np.exp(-x * x / (2 * w * w)))
    xi = g.frequencies
    exact = w * np.exp(-xi * xi * w * w / 2.0)
    err = np.max(np.abs(f.continuum_coeffs - exact))
    assert err < 1e-12


def test_continuum_coeffs_translation_phase():
    # shifting the data by a multiplies the transform by exp(-i a xi)
    g = Grid(2**12, 128.0)
    a = 3.0
    f0 = SpectralField.from_function(g, lambda x: np.exp(-x * x))
    fa = SpectralField.from_function(g, lambda x: np.exp(-((x - a) ** 2)))
    xi = g.frequencies
    predicted = f0.continuum_coeffs * np.exp(-1j * a * xi)
    assert np.max(np.abs(fa.continuum_coeffs - predicted)) < 1e-12


def test_field_validation():
    g = Grid(64, 8.0)
    with pytest.raises(ValueError):
        SpectralField(g, np.zeros(65, dtype=complex))
    bad = np.zeros(64, dtype=complex)
    bad[3] = np.nan
    with pytest.raises(ValueError):
        SpectralField(g, bad)


def test_copy_is_independent():
    g = Grid(64, 8.0)
    f = SpectralField.from_function(g, lambda x: np.exp(-x * x))
    c = f.copy()
    c.coeffs[0] = 99.0
    assert f.coeffs[0] != 99.0
