"""Norm tracking, power-law exponent fitting, and the scattering Cauchy test.

The bootstrap norm has three components: sup|fhat|, the weighted norm
||x f||_2 (computed spectrally as ||d fhat / d xi||_2), and a Sobolev norm.
The budget allows the weighted norm to grow like t^p0 with p0 just below 1/6
and the Sobolev norm like t^p1 with p1 = 1e-3; decay exponents are recovered
by least squares in log-log coordinates over dyadic time samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectral import SpectralField


@dataclass(frozen=True)
class NormSample:
    """Bootstrap-norm components of one profile snapshot."""

    t: float
    linf_fhat: float
    weighted_l2: float  # ||x f||_2 == ||d fhat/d xi||_2
    sobolev: float
    sup_u: float


@dataclass(frozen=True)
class DecayFit:
    exponent: float
    log_prefactor: float
    r_squared: float
    window: tuple[float, float]
    n_points: int


@dataclass(frozen=True)
class GrowthBudget:
    """Allowed growth rates of the weighted and Sobolev components."""

    p0: float = 1.0 / 6.0 - 1e-3
    p1: float = 1e-3
    slack: float = 0.05

    def __post_init__(self):
        if not (0.0 < self.p1 and 0.0 < self.p0 < 1.0 / 6.0):
            raise ValueError("budget requires 0 < p1 and 0 < p0 < 1/6")


def effective_sobolev_index(field: SpectralField, requested: float = 100.0) -> float:
    """Cap the Sobolev index at what the grid resolves: the largest s with
    <xi_Nyquist>^s |uhat(Nyquist band)| below overflow."""
    xi_max = field.grid.nyquist
    tail = float(np.max(np.abs(field.continuum_coeffs[np.abs(field.grid.frequencies) > 0.9 * xi_max])))
    tail = max(tail, 1e-300)
    s_grid = (math.log(1e300) + math.log(tail)) / math.log(1.0 + xi_max * xi_max) * 2.0
    # s_grid solves <xi>^s * tail = 1e300 with <xi>^s = (1+xi^2)^(s/2)
    return min(requested, max(0.0, s_grid))


def weighted_l2(field: SpectralField) -> float:
    """||x f||_2 via Plancherel: L2 norm of d fhat/d xi, centered finite
    differences on the sorted frequency grid (one-sided at the ends)."""
    xi = field.grid.frequencies
    order = np.argsort(xi)
    f = field.continuum_coeffs[order]
    d = np.gradient(f, xi[order])
    return float(math.sqrt(np.sum(np.abs(d) ** 2) * field.grid.dxi))


def sobolev(field: SpectralField, s: float) -> float:
    xi = field.grid.frequencies
    w = (1.0 + xi * xi) ** s
    return float(math.sqrt(np.sum(w * np.abs(field.continuum_coeffs) ** 2) * field.grid.dxi))


def h1_norm(field: SpectralField) -> float:
    """Conserved energy norm sqrt(integral of u^2 + u_x^2)."""
    return sobolev(field, 1.0)


def compute_norms(profile: SpectralField, s: float = 10.0, physical: SpectralField | None = None) -> NormSample:
    """Bootstrap-norm components of a profile snapshot.  ``physical`` is the
    corresponding solution field for sup_u; when omitted the profile's own
    physical max is used (correct only at t = 0)."""
    phys = physical if physical is not None else profile
    return NormSample(
        t=profile.time,
        linf_fhat=float(np.max(np.abs(profile.continuum_coeffs))),
        weighted_l2=weighted_l2(profile),
        sobolev=sobolev(profile, s),
        sup_u=float(np.max(np.abs(phys.physical()))),
    )


def fit_decay(samples, window: tuple[float, float] | None = None) -> DecayFit:
    """Least-squares power law through (t, value) samples.

    Raises ValueError on fewer than 4 usable samples or non-positive values
    inside the window.
    """
    pts = [(float(t), float(v)) for t, v in samples]
    if window is not None:
        pts = [p for p in pts if window[0] <= p[0] <= window[1]]
    if len(pts) < 4:
        raise ValueError("need at least 4 samples in the fit window")
    if any(v <= 0 for _, v in pts):
        raise ValueError("non-positive value in fit window")
    lt = np.log([t for t, _ in pts])
    lv = np.log([v for _, v in pts])
    slope, intercept = np.polyfit(lt, lv, 1)
    pred = slope * lt + intercept
    ss_res = float(np.sum((lv - pred) ** 2))
    ss_tot = float(np.sum((lv - np.mean(lv)) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else max(0.0, 1.0 - ss_res / ss_tot)
    return DecayFit(
        exponent=float(slope),
        log_prefactor=float(intercept),
        r_squared=min(1.0, r2),
        window=(min(t for t, _ in pts), max(t for t, _ in pts)),
        n_points=len(pts),
    )


def scattering_test(profile_snapshots) -> list[tuple[float, float, float]]:
    """Successive dyadic profile differences.

    Input: (t, profile field) pairs at dyadic times t, 2t, 4t, ...  Output
    rows (t, sup|fhat(2t) - fhat(t)|, L2 of the same difference).  Raises
    ValueError with fewer than 3 dyadic pairs.
    """
    snaps = sorted(profile_snapshots, key=lambda p: p[0])
    rows = []
    for (t1, f1), (t2, f2) in zip(snaps[:-1], snaps[1:]):
        if not math.isclose(t2, 2.0 * t1, rel_tol=1e-9):
            raise ValueError(f"snapshots not dyadic: {t1} followed by {t2}")
        d = f2.continuum_coeffs - f1.continuum_coeffs
        rows.append(
            (
                t1,
                float(np.max(np.abs(d))),
                float(math.sqrt(np.sum(np.abs(d) ** 2) * f1.grid.dxi)),
            )
        )
    if len(rows) < 3:
        raise ValueError("need at least 3 dyadic pairs for the scattering test")
    return rows


class Recorder:
    """Solver callback: tracks bootstrap-norm samples at every recorded
    step and keeps full profile snapshots at the requested times (default:
    dyadic).  Snapshot times must land on recorded steps to within half a
    record interval or they are matched to the nearest recorded state."""

    def __init__(self, s: float = 10.0, snapshot_times=None, discrete_dt: float | None = None, t_start: float = 1.0):
        self.s = s
        self.snapshot_times = sorted(snapshot_times) if snapshot_times is not None else None
        self.discrete_dt = discrete_dt
        self.t_start = t_start
        self.samples: list[NormSample] = []
        self.profiles: list[tuple[float, SpectralField]] = []

    def _wants_snapshot(self, t: float) -> bool:
        if self.snapshot_times is None:
            # dyadic: 1, 2, 4, ... within floating-point slop
            m = math.log2(t) if t > 0 else -1.0
            return t > 0 and abs(m - round(m)) < 1e-9
        return any(math.isclose(t, w, rel_tol=1e-9, abs_tol=1e-9) for w in self.snapshot_times)

    def __call__(self, field: SpectralField):
        from .solver import discrete_profile_of, profile_of

        if self.discrete_dt is not None:
            prof = discrete_profile_of(field, self.discrete_dt, self.t_start)
        else:
            prof = profile_of(field)
        self.samples.append(compute_norms(prof, self.s, physical=field))
        if self._wants_snapshot(field.time):
            self.profiles.append((field.time, prof))


def bootstrap_report(samples: list[NormSample], budget: GrowthBudget = GrowthBudget()) -> dict:
    """Sup of each budgeted component and fitted growth exponents of the
    weighted and Sobolev norms, with violation flags when a fitted exponent
    exceeds its budget by more than the slack."""
    if len(samples) < 4:
        raise ValueError("need at least 4 samples")
    ts = [s.t for s in samples]
    fit_w = fit_decay([(s.t, s.weighted_l2) for s in samples])
    fit_s = fit_decay([(s.t, s.sobolev) for s in samples])
    return {
        "sup_linf_fhat": max(s.linf_fhat for s in samples),
        "sup_weighted_budgeted": max(s.weighted_l2 * s.t ** -budget.p0 for s in samples),
        "sup_sobolev_budgeted": max(s.sobolev * s.t ** -budget.p1 for s in samples),
        "weighted_growth_exponent": fit_w.exponent,
        "sobolev_growth_exponent": fit_s.exponent,
        "weighted_violation": fit_w.exponent > budget.p0 + budget.slack,
        "sobolev_violation": fit_s.exponent > budget.p1 + budget.slack,
        "window": (min(ts), max(ts)),
        "n_samples": len(samples),
    }
