"""Four-wave interaction phase, its critical points, and the resonance census.

The interaction phase for the quartic nonlinearity is

    phase(e1, e2, e3; xi) = -omega(xi) + omega(e1) + omega(e2) + omega(e3)
                            + omega(e4),   e4 = xi - e1 - e2 - e3.

Critical points in (e1, e2, e3) require all four frequencies to share a group
velocity, which by the group-velocity census means each |e_j| equals |e_1| or
|r(e_1)|.  Working through the sign/reflection configurations reduces every
candidate family to a scalar function of one frequency whose roots mark time
resonances; those scalar functions are collected in SCALAR_PHASE_FUNCTIONS
and root-found by dense scan plus bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .dispersion import SQRT3, omega, omega_prime, reflection

# |r| blows up at |eta| = 1; implicit-family scans stay outside this margin.
ASYMPTOTE_MARGIN = 1e-6

# Residual tolerance for classifying a candidate, separate from the root
# tolerance: compositions through r lose digits near the asymptote.
CLASSIFY_TOL = 1e-9
ROOT_TOL = 1e-12

SCAN_SAMPLES_PER_UNIT = 10_000


@dataclass(frozen=True)
class PhasePoint:
    """A frequency quadruple (e1, e2, e3; xi); the fourth input frequency
    e4 = xi - e1 - e2 - e3 is derived."""

    eta1: float
    eta2: float
    eta3: float
    xi: float

    @property
    def eta4(self) -> float:
        return self.xi - self.eta1 - self.eta2 - self.eta3

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.eta1, self.eta2, self.eta3, self.xi)


def phase(p: PhasePoint) -> float:
    """Interaction phase at a quadruple; symmetric in (e1, e2, e3)."""
    return float(
        -omega(p.xi)
        + omega(p.eta1)
        + omega(p.eta2)
        + omega(p.eta3)
        + omega(p.eta4)
    )


def phase_gradient(p: PhasePoint) -> np.ndarray:
    """Gradient in (e1, e2, e3): component j is omega'(e_j) - omega'(e4)."""
    w4 = omega_prime(p.eta4)
    return np.array(
        [
            omega_prime(p.eta1) - w4,
            omega_prime(p.eta2) - w4,
            omega_prime(p.eta3) - w4,
        ]
    )


# ---------------------------------------------------------------------------
# Scalar phase-vanishing functions on {|eta| > 1}
# ---------------------------------------------------------------------------

def _triple_sum(eta):
    r = reflection(eta)
    return 3.0 * omega(eta) + omega(r) - omega(3.0 * eta + r)


def _triple_diff(eta):
    r = reflection(eta)
    return 3.0 * omega(eta) - omega(r) - omega(3.0 * eta - r)


def _single_diff(eta):
    r = reflection(eta)
    return -omega(eta) + omega(r) - omega(-eta + r)


def _single_sum(eta):
    r = reflection(eta)
    return -omega(eta) - omega(r) + omega(eta + r)


def _double_sum(eta):
    r = reflection(eta)
    return 2.0 * omega(eta) + 2.0 * omega(r) - omega(2.0 * eta + 2.0 * r)


def _double_diff(eta):
    r = reflection(eta)
    return 2.0 * omega(eta) - 2.0 * omega(r) - omega(2.0 * eta - 2.0 * r)


#: Phase restricted to each one-parameter critical family.  Keys name the
#: frequency combination fed to omega; values are vectorized callables
#: defined on {|eta| > 1}.
SCALAR_PHASE_FUNCTIONS: dict[str, Callable] = {
    "triple-sum": _triple_sum,      # family 3 eta + r(eta); no roots
    "triple-diff": _triple_diff,    # family 3 eta - r(eta); roots near +-5.08
    "single-diff": _single_diff,    # family -eta + r(eta); roots at +-sqrt(3)
    "single-sum": _single_sum,      # family eta + r(eta); no roots
    "double-sum": _double_sum,      # family 2(eta + r(eta)); no roots
    "double-diff": _double_diff,    # family 2(eta - r(eta)); roots at +-sqrt(3)
}


def scalar_function(name: str, eta):
    """Evaluate a registered scalar phase function; |eta| must exceed 1."""
    fn = SCALAR_PHASE_FUNCTIONS[name]
    eta_arr = np.asarray(eta, dtype=float)
    if np.any(np.abs(eta_arr) <= 1.0):
        raise ValueError("scalar phase functions are undefined for |eta| <= 1")
    return fn(eta_arr)


def _bisect(fn, a: float, b: float, tol: float) -> float:
    fa = fn(a)
    if fa == 0.0:
        return a
    for _ in range(200):
        mid = 0.5 * (a + b)
        fm = fn(mid)
        if abs(fm) < tol or (b - a) < 1e-15:
            return mid
        if (fa < 0.0) == (fm < 0.0):
            a, fa = mid, fm
        else:
            b = mid
    return 0.5 * (a + b)


def find_roots(
    fn,
    bracket: tuple[float, float],
    tol: float = ROOT_TOL,
    samples_per_unit: int = SCAN_SAMPLES_PER_UNIT,
) -> list[float]:
    """Roots of a scalar function on a bracket, sorted ascending.

    Dense scan (samples_per_unit points per unit length; adjacent roots can
    be closer than a coarse scan resolves) followed by bisection refinement.
    The dead zone |eta| <= 1 + margin is excluded automatically.  An empty
    list is a valid result.
    """
    if isinstance(fn, str):
        fn = SCALAR_PHASE_FUNCTIONS[fn]
    a, b = bracket
    if b <= a:
        raise ValueError("empty bracket")
    if tol <= 0:
        raise ValueError("tol must be positive")
    lo = 1.0 + ASYMPTOTE_MARGIN
    segments = []
    if a < -lo:
        segments.append((a, min(b, -lo)))
    if b > lo:
        segments.append((max(a, lo), b))
    roots: list[float] = []
    for seg_a, seg_b in segments:
        n = max(8, int(math.ceil((seg_b - seg_a) * samples_per_unit)))
        xs = np.linspace(seg_a, seg_b, n + 1)
        vals = np.asarray(fn(xs))
        sign_change = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
        for i in sign_change:
            roots.append(_bisect(fn, float(xs[i]), float(xs[i + 1]), tol))
        exact = np.nonzero(vals == 0.0)[0]
        roots.extend(float(xs[i]) for i in exact)
    return sorted(set(roots))


# ---------------------------------------------------------------------------
# Auxiliary phases near the degenerate and anomalous frequencies
# ---------------------------------------------------------------------------

def aux_phase_sqrt3(signs: tuple[int, int, int], xi):
    """Leading-order phase when all three input frequencies sit at
    sigma_j * sqrt(3):  (sqrt(3)/4) sum(sigma) - omega(xi)
    + omega(xi - sum(sigma) sqrt(3)).

    Satisfies aux_phase_sqrt3(-signs, xi) = -aux_phase_sqrt3(signs, -xi).
    """
    s = sum(signs)
    xi = np.asarray(xi, dtype=float)
    return SQRT3 / 4.0 * s - omega(xi) + omega(xi - s * SQRT3)


def aux_phase_anomalous(signs: tuple[int, int, int], xi, eta0: float):
    """Leading-order phase when all three input frequencies sit at
    sigma_j * eta0:  -omega(xi) + omega(xi - sum(sigma) eta0)
    + sum(sigma) omega(eta0)."""
    s = sum(signs)
    xi = np.asarray(xi, dtype=float)
    return -omega(xi) + omega(xi - s * eta0) + s * omega(eta0)


# ---------------------------------------------------------------------------
# Census records
# ---------------------------------------------------------------------------

@dataclass
class ResonanceRecord:
    """A located critical point or manifold of the interaction phase."""

    label: str
    family: int
    subfamily: str
    kind: str  # "point" | "line" | "curve" | "implicit_family"
    classification: str  # "space" | "time" | "space_time"
    representative_points: list[PhasePoint]
    residual_phase: float
    residual_gradient: float
    symmetry_derived: bool = False
    #: maps a manifold parameter to a PhasePoint (None for isolated points)
    sampler: Callable[[float], PhasePoint] | None = None
    notes: str = ""

    def consistent(self, tol: float = CLASSIFY_TOL) -> bool:
        if self.classification in ("space", "space_time"):
            if self.residual_gradient >= tol:
                return False
        if self.classification in ("time", "space_time"):
            if self.residual_phase >= tol:
                return False
        return True


def _residuals(points: Sequence[PhasePoint]) -> tuple[float, float]:
    rp = max(abs(phase(p)) for p in points)
    rg = max(float(np.linalg.norm(phase_gradient(p))) for p in points)
    return rp, rg


def anomalous_resonance(tol: float = CLASSIFY_TOL) -> ResonanceRecord:
    """The isolated space-time resonance (eta0, eta0, eta0; xi0) with
    xi0 = 3 eta0 - r(eta0), found by root-finding the triple-diff scalar
    phase on [4, 7]."""
    roots = find_roots("triple-diff", (4.0, 7.0), tol=ROOT_TOL)
    if len(roots) != 1:
        raise ArithmeticError(
            f"expected one positive root of the triple-diff phase on [4, 7], got {roots}"
        )
    eta0 = roots[0]
    xi0 = 3.0 * eta0 - reflection(eta0)
    pt = PhasePoint(eta0, eta0, eta0, xi0)
    rp, rg = _residuals([pt])
    rec = ResonanceRecord(
        label="anomalous-point",
        family=1,
        subfamily="equal-signs, partner 3*eta - r(eta)",
        kind="point",
        classification="space_time",
        representative_points=[pt, PhasePoint(-eta0, -eta0, -eta0, -xi0)],
        residual_phase=rp,
        residual_gradient=rg,
    )
    if not rec.consistent(tol):
        raise ArithmeticError("anomalous resonance residuals exceed tolerance")
    return rec


def _line_sampler(sign_pos: int) -> Callable[[float], PhasePoint]:
    def sample(eta: float) -> PhasePoint:
        etas = [eta, eta, eta]
        etas[sign_pos] = -eta
        return PhasePoint(etas[0], etas[1], etas[2], 0.0)

    return sample


def _curve_sampler(permuted: bool) -> Callable[[float], PhasePoint]:
    def sample(eta: float) -> PhasePoint:
        r = reflection(eta)
        if permuted:
            return PhasePoint(eta, -eta, -r, 0.0)
        return PhasePoint(eta, r, -r, 0.0)

    return sample


# Pure-space families parametrized by the output frequency xi.  Each entry:
# (label, family, subfamily, sampler(xi), xi domain test, sample xi values).
def _space_family_samplers():
    def quarter(xi):
        return PhasePoint(xi / 4.0, xi / 4.0, xi / 4.0, xi)

    def half(xi):
        return PhasePoint(xi / 2.0, xi / 2.0, xi / 2.0, xi)

    def half_mixed(xi):
        return PhasePoint(-xi / 2.0, xi / 2.0, xi / 2.0, xi)

    def half_reflected(xi):
        return PhasePoint(xi / 2.0, xi / 2.0, reflection(xi / 2.0), xi)

    def half_antireflected(xi):
        return PhasePoint(xi / 2.0, xi / 2.0, -reflection(xi / 2.0), xi)

    def reflected_pair(xi):
        r = reflection(xi / 2.0)
        return PhasePoint(-r, r, xi / 2.0, xi)

    any_xi = [1.0, 4.0, -3.0]
    big_xi = [3.0, 5.0, -4.0]
    return [
        ("space-quarter", 1, "(xi/4, xi/4, xi/4)", quarter, any_xi),
        ("space-half", 1, "(xi/2, xi/2, xi/2)", half, any_xi),
        ("space-half-mixed", 1, "(-xi/2, xi/2, xi/2)", half_mixed, any_xi),
        ("space-half-reflected", 2, "(xi/2, xi/2, r(xi/2))", half_reflected, big_xi),
        ("space-half-antireflected", 2, "(xi/2, xi/2, -r(xi/2))", half_antireflected, big_xi),
        ("space-reflected-pair", 2, "(-r(xi/2), r(xi/2), xi/2)", reflected_pair, big_xi),
    ]


# Implicit one-parameter space families (eta is the parameter; xi follows).
# Each entry: (label, family, constraint label, sampler(eta), scalar check id).
def _implicit_family_samplers():
    def triple_sum_pt(eta):
        return PhasePoint(eta, eta, eta, 3.0 * eta + reflection(eta))

    def triple_diff_pt(eta):
        return PhasePoint(eta, eta, eta, 3.0 * eta - reflection(eta))

    def single_diff_pt(eta):
        return PhasePoint(eta, -eta, -eta, -eta + reflection(eta))

    def single_sum_pt(eta):
        return PhasePoint(eta, -eta, -eta, -eta - reflection(eta))

    def double_sum_pt(eta):
        r = reflection(eta)
        return PhasePoint(eta, eta, r, 2.0 * (eta + r))

    def double_diff_pt(eta):
        r = reflection(eta)
        return PhasePoint(eta, eta, -r, 2.0 * (eta - r))

    return [
        ("implicit-triple-sum", 1, "3 eta + r(eta) = xi", triple_sum_pt, "triple-sum"),
        ("implicit-triple-diff", 1, "3 eta - r(eta) = xi", triple_diff_pt, "triple-diff"),
        ("implicit-single-diff", 1, "-eta + r(eta) = xi", single_diff_pt, "single-diff"),
        ("implicit-single-sum", 1, "-eta - r(eta) = xi", single_sum_pt, "single-sum"),
        ("implicit-double-sum", 2, "2(eta + r(eta)) = xi", double_sum_pt, "double-sum"),
        ("implicit-double-diff", 2, "2(eta - r(eta)) = xi", double_diff_pt, "double-diff"),
    ]


def enumerate_resonances(tol: float = CLASSIFY_TOL) -> list[ResonanceRecord]:
    """Full census of critical points/manifolds, up to permutation and
    negation symmetries.

    Space-time resonant: the line (-eta, eta, eta; 0) and its sign
    permutations, the curve (eta, r(eta), -r(eta); 0) and its permutation,
    the distinguished points (0,0,0;0) and (-sqrt(3), sqrt(3), sqrt(3); 0),
    and the isolated anomalous pair.  Everything else is space-resonant
    only; each implicit family carries the scalar function certifying that
    its phase does not vanish away from the already-counted points.
    """
    records: list[ResonanceRecord] = []

    # Space-time resonant line and its sign permutations.
    line_etas = [0.5, 2.0, SQRT3, 10.0, -7.0]
    for pos, derived in ((0, False), (1, True), (2, True)):
        sampler = _line_sampler(pos)
        pts = [sampler(e) for e in line_etas]
        rp, rg = _residuals(pts)
        records.append(
            ResonanceRecord(
                label="line" if not derived else f"line-sign-{pos}",
                family=1,
                subfamily="one negated frequency, xi = 0",
                kind="line",
                classification="space_time",
                representative_points=pts,
                residual_phase=rp,
                residual_gradient=rg,
                symmetry_derived=derived,
                sampler=sampler,
            )
        )

    # Space-time resonant curve and its permuted variant.
    curve_etas = [1.2, 2.0, SQRT3, 5.0, -3.0]
    for permuted in (False, True):
        sampler = _curve_sampler(permuted)
        pts = [sampler(e) for e in curve_etas]
        rp, rg = _residuals(pts)
        records.append(
            ResonanceRecord(
                label="curve" if not permuted else "curve-permuted",
                family=1,
                subfamily="reflected pair, xi = 0",
                kind="curve",
                classification="space_time",
                representative_points=pts,
                residual_phase=rp,
                residual_gradient=rg,
                symmetry_derived=permuted,
                sampler=sampler,
            )
        )

    # Distinguished points on the line.
    for label, pt in (
        ("origin-point", PhasePoint(0.0, 0.0, 0.0, 0.0)),
        ("inflection-point", PhasePoint(-SQRT3, SQRT3, SQRT3, 0.0)),
    ):
        rp, rg = _residuals([pt])
        records.append(
            ResonanceRecord(
                label=label,
                family=1,
                subfamily="on the resonant line",
                kind="point",
                classification="space_time",
                representative_points=[pt],
                residual_phase=rp,
                residual_gradient=rg,
            )
        )

    # The isolated anomalous pair.
    records.append(anomalous_resonance(tol))

    # Pure-space families parametrized by xi.
    for label, family, subfamily, sampler, xis in _space_family_samplers():
        pts = [sampler(x) for x in xis]
        rp, rg = _residuals(pts)
        records.append(
            ResonanceRecord(
                label=label,
                family=family,
                subfamily=subfamily,
                kind="implicit_family",
                classification="space",
                representative_points=pts,
                residual_phase=rp,
                residual_gradient=rg,
                sampler=sampler,
                notes="phase nonzero for xi != 0",
            )
        )

    # Implicit families with a scalar certificate of non-time-resonance.
    scan = (1.0 + 1e-3, 50.0)
    implicit_params = (1.5, SQRT3, 2.5, 6.0, -4.0)
    family2_entries: list[tuple[ResonanceRecord, tuple[float, ...]]] = []
    for label, family, subfamily, sampler, check in _implicit_family_samplers():
        pts = [sampler(e) for e in implicit_params]
        rp, rg = _residuals(pts)
        roots = find_roots(check, scan, samples_per_unit=2000)
        rec = ResonanceRecord(
            label=label,
            family=family,
            subfamily=subfamily,
            kind="implicit_family",
            classification="space",
            representative_points=pts,
            residual_phase=rp,
            residual_gradient=rg,
            sampler=sampler,
            notes=(
                "no time resonance on the scan range"
                if not roots
                else "time-resonant only at "
                + ", ".join(f"{r:.6g}" for r in roots)
            ),
        )
        records.append(rec)
        if family == 2:
            family2_entries.append((rec, implicit_params))
    for rec in records:
        if rec.family == 2 and rec.label.startswith("space-"):
            family2_entries.append((rec, (3.0, 5.0, -4.0)))

    # Families 3 and 4 swap which slot carries the reflected frequency;
    # permutation symmetry of the phase makes them copies of family 2, so
    # record one representative permuted copy per family-2 entry.
    for rec, params in family2_entries:
        def swapped_sampler(p, base=rec.sampler):
            pt = base(p)
            return PhasePoint(pt.eta3, pt.eta2, pt.eta1, pt.xi)

        pts = [swapped_sampler(p) for p in params]
        rp, rg = _residuals(pts)
        records.append(
            ResonanceRecord(
                label=f"{rec.label}-permuted",
                family=3,
                subfamily=rec.subfamily + " (slots 1 and 3 swapped)",
                kind=rec.kind,
                classification=rec.classification,
                representative_points=pts,
                residual_phase=rp,
                residual_gradient=rg,
                symmetry_derived=True,
                sampler=swapped_sampler,
                notes="permutation image of a family-2 record; family 4 "
                "likewise swaps slots 2 and 3",
            )
        )

    for rec in records:
        if not rec.consistent(tol):
            raise ArithmeticError(
                f"census record {rec.label} fails its classification at tol={tol}"
            )
    return records
