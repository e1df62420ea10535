import numpy as np
import pytest

from gbbmlab.littlewood_paley import (
    annular_bump,
    bump,
    dyadic_range,
    phi_le_k,
    project,
    psi_k,
)
from gbbmlab.spectral import Grid, SpectralField


def test_bump_plateau_and_support():
    xs = np.linspace(-1.0, 1.0, 101)
    assert np.all(bump(xs) == 1.0)
    xs = np.linspace(2.0, 10.0, 101)
    assert np.all(bump(xs) == 0.0)
    assert np.all(bump(-xs) == 0.0)


def test_bump_monotone_on_shoulder():
    xs = np.linspace(1.0, 2.0, 500)
    vals = bump(xs)
    assert np.all(np.diff(vals) <= 0.0)
    assert np.all((0.0 <= vals) & (vals <= 1.0))


def test_bump_even():
    xs = np.linspace(-3.0, 3.0, 601)
    assert np.array_equal(bump(xs), bump(-xs))


def test_annular_bump_support():
    xs = np.linspace(-0.5, 0.5, 101)
    assert np.all(annular_bump(xs) == 0.0)
    assert np.all(annular_bump(np.linspace(2.0, 8.0, 50)) == 0.0)
    assert annular_bump(1.0) == 1.0
    assert annular_bump(-1.0) == 1.0


def test_partition_of_unity_telescopes():
    xs = np.concatenate([np.geomspace(1e-4, 500.0, 4000), [0.0]])
    xs = np.concatenate([xs, -xs])
    total = phi_le_k(-16, xs).astype(float)
    for k in range(-15, 11):
        total = total + psi_k(k, xs)
    # everything with |xi| <= 2^10 must be covered exactly
    covered = np.abs(xs) <= 2.0**10
    assert np.max(np.abs(total[covered] - 1.0)) < 1e-13


def test_psi_k_is_scaled_annulus():
    xs = np.linspace(-70.0, 70.0, 2001)
    for k in (-2, 0, 3, 5):
        assert np.allclose(psi_k(k, xs), annular_bump(xs / 2.0**k), atol=1e-15)


def test_dyadic_range_from_grid():
    g = Grid(2**10, 64.0)  # dxi ~ 0.049, nyquist ~ 25.1
    ks = dyadic_range(g)
    assert ks.start == -4
    assert ks.stop - 1 == 4
    assert 2.0**ks.start >= g.dxi
    assert 2.0 ** (ks.stop - 1) <= g.nyquist


def test_project_annular_scales_single_frequency():
    g = Grid(2**10, 64.0)
    xi0 = 100 * g.dxi  # ~4.9, inside band k=2
    f = SpectralField.from_function(g, lambda x: np.cos(xi0 * x))
    band = project(f, 2)
    expected = float(psi_k(2, xi0)) * np.cos(xi0 * g.points)
    assert np.max(np.abs(band.physical() - expected)) < 1e-12
    # a far band sees nothing
    assert np.max(np.abs(project(f, -2).physical())) < 1e-12


def test_project_low_pass():
    g = Grid(2**11, 64.0)
    f = SpectralField.from_function(g, lambda x: np.exp(-x * x))
    # content beyond |xi| = 16 is ~exp(-64); the plateau keeps everything
    low = project(f, 4, mode="low_pass")
    assert np.max(np.abs(low.physical() - f.physical())) < 1e-12


def test_project_preserves_realness():
    g = Grid(2**9, 32.0)
    rng = np.random.default_rng(7)
    f = SpectralField.from_physical(g, rng.standard_normal(g.n_modes))
    p = project(f, 1)
    assert p.max_imag() < 1e-12
    assert p.hermitian_defect() < 1e-12


def test_project_validates():
    g = Grid(2**8, 16.0)
    f = SpectralField.from_function(g, lambda x: np.exp(-x * x))
    with pytest.raises(ValueError):
        project(f, 99)
    with pytest.raises(ValueError):
        project(f, 1, mode="bandpass")
