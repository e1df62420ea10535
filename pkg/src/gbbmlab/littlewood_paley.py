"""Smooth dyadic bump functions and Littlewood-Paley projections.

The base cutoff phi is 1 on [-1, 1], 0 outside [-2, 2], and uses the standard
smooth transition h(s) = g(s) / (g(s) + g(1 - s)) with g(s) = exp(-1/s) on the
shoulder, so phi is C-infinity with phi(1) = 1 and phi(2) = 0 exactly.  The
annular bump is psi(xi) = phi(xi) - phi(2 xi); computing psi_k as a difference
of low-pass cutoffs makes the dyadic partition of unity telescope exactly in
floating point.
"""

from __future__ import annotations

import math

import numpy as np

from .spectral import SpectralField


def _smooth_step(s):
    """C-infinity monotone step: 0 for s <= 0, 1 for s >= 1."""
    s = np.asarray(s, dtype=float)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        g = np.where(s > 0.0, np.exp(-1.0 / np.maximum(s, 1e-300)), 0.0)
        g1 = np.where(1.0 - s > 0.0, np.exp(-1.0 / np.maximum(1.0 - s, 1e-300)), 0.0)
    return g / (g + g1)


def bump(xi):
    """Base low-pass profile: 1 on [-1, 1], supported in [-2, 2]."""
    xi = np.asarray(xi, dtype=float)
    return _smooth_step(2.0 - np.abs(xi))


def annular_bump(xi):
    """psi(xi) = phi(xi) - phi(2 xi), supported in {1/2 <= |xi| <= 2}."""
    xi = np.asarray(xi, dtype=float)
    return bump(xi) - bump(2.0 * xi)


def phi_le_k(k: int, xi):
    """Low-pass cutoff at dyadic scale k: phi(xi / 2^k)."""
    return bump(np.asarray(xi, dtype=float) / 2.0**k)


def psi_k(k: int, xi):
    """Annular cutoff at dyadic scale k, supported in {2^(k-1) <= |xi| <= 2^(k+1)}."""
    xi = np.asarray(xi, dtype=float)
    return bump(xi / 2.0**k) - bump(xi / 2.0 ** (k - 1))


def dyadic_range(grid) -> range:
    """Dyadic indices representable on a grid, from ceil(log2(dxi)) to
    floor(log2(nyquist)).  Derived from the grid so the partition of unity is
    never silently truncated."""
    k_lo = math.ceil(math.log2(grid.dxi))
    k_hi = math.floor(math.log2(grid.nyquist))
    return range(k_lo, k_hi + 1)


def project(field: SpectralField, k: int, mode: str = "annular") -> SpectralField:
    """Littlewood-Paley projection of a spectral field.

    mode "annular" multiplies by psi_k, "low_pass" by phi_{<=k}.  Raises
    ValueError when the band 2^(k+1) exceeds the grid Nyquist frequency.
    Hermitian symmetry is preserved (the multipliers are real and even).
    """
    if mode not in ("annular", "low_pass"):
        raise ValueError(f"unknown projection mode {mode!r}")
    if 2.0 ** (k + 1) > field.grid.nyquist:
        raise ValueError(
            f"band k={k} exceeds grid Nyquist frequency {field.grid.nyquist:g}"
        )
    xi = field.grid.frequencies
    mult = psi_k(k, xi) if mode == "annular" else phi_le_k(k, xi)
    return SpectralField(field.grid, field.coeffs * mult, field.time)
