"""Experiment runner: resonance census, linear-decay scans, nonlinear
evolution, scattering diagnostics, estimate verification, and figure-data
emission.

Configuration comes from an INI file (one section per subcommand) with
command-line flags taking precedence.  Every run writes a manifest.json
recording the resolved configuration, package version, and sha256 checksums
of all outputs; snapshot binaries embed a wall-time field that is excluded
from the checksum so reruns are byte-comparable.

Exit codes: 0 success, 1 configuration/validation failure, 2 numerical
failure (blow-up guard, non-convergent quadrature).
"""

from __future__ import annotations

import argparse
import configparser
import hashlib
import json
import math
import os
import struct
import sys
import time

import numpy as np

from . import __version__, diagnostics, linear_flow, resonance, solver
from .dispersion import SQRT3, omega_prime, reflection
from .spectral import Grid, SpectralField

#: Environment variable naming the default output directory.
OUTPUT_DIR_ENV = "GBBMLAB_OUTPUT_DIR"


def fmt(x) -> str:
    """17-significant-digit float formatting (round-trip exact)."""
    return f"{float(x):.17g}"


class ValidationError(Exception):
    pass


# ---------------------------------------------------------------------------
# Config plumbing
# ---------------------------------------------------------------------------

_DEFAULTS = {
    "resonances": {"tol": 1e-9},
    "linear-decay": {
        "profile": "gaussian",
        "width": 0.5,
        "k": 4,
        "t_min": 100.0,
        "t_max": 10000.0,
        "n_modes": 2**18,
        "half_length": 9000.0,
    },
    "evolve": {
        "n_modes": 2**14,
        "half_length": 2048.0,
        "dt": 0.1,
        "t_end": 1000.0,
        "epsilon": 1e-2,
        "width": 0.5,
        "carrier": 0.0,
        "profile": "gaussian",
        "record_stride": 10,
        "s": 10.0,
        "snapshots": "dyadic",
    },
    "scatter": {
        "n_modes": 2**12,
        "half_length": 512.0,
        "dt": 0.1,
        "t_end": 128.0,
        "epsilon": 1e-2,
        "width": 0.5,
    },
    "verify-estimates": {
        "k_min": -3,
        "k_max": 5,
        "t_min": 16.0,
        "t_max": 4096.0,
        "s": 5.5,
        "n_modes": 2**16,
        "half_length": 512.0,
        "width": 0.03125,
    },
    "figures": {"id": 1, "n_points": 2001},
}


def _load_config(path: str | None, subcommand: str) -> dict:
    merged = dict(_DEFAULTS[subcommand])
    if path:
        if not os.path.exists(path):
            raise ValidationError(f"config file not found: {path}")
        cp = configparser.ConfigParser()
        cp.read(path)
        if cp.has_section(subcommand):
            for key, raw in cp.items(subcommand):
                key = key.replace("-", "_")
                if key not in merged:
                    raise ValidationError(f"unknown config key '{key}' in [{subcommand}]")
                kind = type(merged[key])
                merged[key] = raw if kind is str else kind(float(raw))
    return merged


def _merge_flags(cfg: dict, args: argparse.Namespace) -> dict:
    for key in cfg:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    return cfg


class OutputSink:
    """Collects output files and writes the manifest at the end."""

    def __init__(self, out_dir: str, subcommand: str, cfg: dict, seed: int):
        self.out_dir = out_dir
        self.subcommand = subcommand
        self.cfg = cfg
        self.seed = seed
        self.checksums: dict[str, str] = {}
        os.makedirs(out_dir, exist_ok=True)

    def path(self, name: str) -> str:
        return os.path.join(self.out_dir, name)

    def write_text(self, name: str, text: str):
        p = self.path(name)
        with open(p, "w") as f:
            f.write(text)
        self.checksums[name] = hashlib.sha256(text.encode()).hexdigest()

    def write_json(self, name: str, obj):
        self.write_text(name, json.dumps(obj, indent=2, sort_keys=True) + "\n")

    def write_snapshot(self, name: str, field: SpectralField):
        """Binary snapshot: little-endian header (n int64; L, t, walltime
        float64) then interleaved re/im float64 coefficients in increasing
        frequency order.  The walltime bytes are skipped by the checksum."""
        order = np.argsort(field.grid.frequencies)
        c = field.coeffs[order]
        inter = np.empty(2 * c.size)
        inter[0::2] = c.real
        inter[1::2] = c.imag
        header = struct.pack(
            "<qddd", field.grid.n_modes, field.grid.half_length, field.time, time.time()
        )
        body = inter.astype("<f8").tobytes()
        with open(self.path(name), "wb") as f:
            f.write(header)
            f.write(body)
        h = hashlib.sha256()
        h.update(header[:24])  # n, L, t; walltime excluded
        h.update(body)
        self.checksums[name] = h.hexdigest()

    def finalize(self):
        manifest = {
            "subcommand": self.subcommand,
            "config": {k: (v if isinstance(v, (str, int)) else float(v)) for k, v in self.cfg.items()},
            "seed": self.seed,
            "version": __version__,
            "outputs": self.checksums,
        }
        text = json.dumps(manifest, indent=2, sort_keys=True) + "\n"
        with open(self.path("manifest.json"), "w") as f:
            f.write(text)


def read_snapshot(path: str) -> SpectralField:
    """Inverse of OutputSink.write_snapshot."""
    with open(path, "rb") as f:
        n, half_length, t, _walltime = struct.unpack("<qddd", f.read(32))
        inter = np.frombuffer(f.read(), dtype="<f8")
    c_sorted = inter[0::2] + 1j * inter[1::2]
    grid = Grid(n, half_length)
    order = np.argsort(grid.frequencies)
    coeffs = np.empty(n, dtype=complex)
    coeffs[order] = c_sorted
    return SpectralField(grid, coeffs, t)


# ---------------------------------------------------------------------------
# Subcommand implementations
# ---------------------------------------------------------------------------

def _point_dict(p: resonance.PhasePoint) -> dict:
    return {
        "eta1": float(p.eta1),
        "eta2": float(p.eta2),
        "eta3": float(p.eta3),
        "eta4": float(p.eta4),
        "xi": float(p.xi),
    }


def run_resonances(cfg: dict, sink: OutputSink) -> int:
    tol = float(cfg["tol"])
    if tol <= 0:
        raise ValidationError("tol must be positive")
    records = resonance.enumerate_resonances(tol)
    anom = resonance.anomalous_resonance(tol)
    eta0 = anom.representative_points[0].eta1
    census = {
        "tolerance": tol,
        "anomalous": {
            "eta0": float(eta0),
            "xi0": float(anom.representative_points[0].xi),
            "reflection_of_eta0": float(reflection(eta0)),
        },
        "records": [
            {
                "label": r.label,
                "family": r.family,
                "subfamily": r.subfamily,
                "kind": r.kind,
                "classification": r.classification,
                "residual_phase": float(r.residual_phase),
                "residual_gradient": float(r.residual_gradient),
                "symmetry_derived": r.symmetry_derived,
                "notes": r.notes,
                "representative_points": [_point_dict(p) for p in r.representative_points],
            }
            for r in records
        ],
    }
    sink.write_json("census.json", census)
    return 0


def _make_profile(kind: str, grid: Grid, width: float, k: int) -> SpectralField:
    if kind == "gaussian":
        return SpectralField.from_function(grid, lambda x: np.exp(-(x * x) / (2.0 * width * width)))
    if kind == "band":
        sigma = 2.0 ** (-k) / 2.0  # narrow spike => flat transform across the band
        return SpectralField.from_function(grid, lambda x: np.exp(-(x * x) / (2.0 * sigma * sigma)))
    if kind == "near-sqrt3":
        return SpectralField.from_function(
            grid, lambda x: np.exp(-(x * x) * width * width / 2.0) * np.cos(SQRT3 * x)
        )
    raise ValidationError(f"unknown profile '{kind}'")


def _dyadic_times(t_min: float, t_max: float) -> list[float]:
    ts = []
    t = t_min
    while t <= t_max * (1 + 1e-9):
        ts.append(t)
        t *= 2.0
    return ts


def run_linear_decay(cfg: dict, sink: OutputSink) -> int:
    if cfg["t_min"] <= 0 or cfg["t_max"] < cfg["t_min"]:
        raise ValidationError("need 0 < t_min <= t_max")
    grid = Grid(int(cfg["n_modes"]), float(cfg["half_length"]))
    k = int(cfg["k"])
    profile = _make_profile(str(cfg["profile"]), grid, float(cfg["width"]), k)
    times = _dyadic_times(float(cfg["t_min"]), float(cfg["t_max"]))
    lines = ["t,k,case_id,lhs,rhs,ratio"]
    sups = []
    summary: dict = {"profile": cfg["profile"], "times": times}
    if cfg["profile"] == "band":
        for t in times:
            row = linear_flow.dispersive_bound(profile, k, t)
            lines.append(
                f"{fmt(t)},{k},{row.case},{fmt(row.lhs)},{fmt(row.rhs)},{fmt(row.ratio)}"
            )
            sups.append((t, row.lhs))
    else:
        for t in times:
            sup = linear_flow.aggregate_sup_norm(profile, t)
            lines.append(f"{fmt(t)},,aggregate,{fmt(sup)},,")
            sups.append((t, sup))
        if cfg["profile"] == "near-sqrt3":
            f = linear_flow.propagate_linear(profile, times[-1])
            u = np.abs(f.physical())
            x_max = float(grid.points[int(np.argmax(u))])
            ray = -times[-1] / 8.0
            summary["argmax_x"] = x_max
            summary["ray_x"] = ray
            summary["ray_relative_error"] = abs(x_max - ray) / abs(ray)
    fit = diagnostics.fit_decay(sups)
    summary["fitted_exponent"] = fit.exponent
    summary["r_squared"] = fit.r_squared
    sink.write_text("decay.csv", "\n".join(lines) + "\n")
    sink.write_json("decay_summary.json", summary)
    return 0


def run_evolve(cfg: dict, sink: OutputSink) -> int:
    grid = Grid(int(cfg["n_modes"]), float(cfg["half_length"]))
    scfg = solver.SolverConfig(
        dt=float(cfg["dt"]),
        t_end=float(cfg["t_end"]),
        record_stride=int(cfg["record_stride"]),
        epsilon=float(cfg["epsilon"]),
        s=float(cfg["s"]),
    )
    if scfg.t_end <= 1.0:
        raise ValidationError("t_end must exceed the initial time 1")
    profile_kind = str(cfg["profile"])
    if profile_kind == "gaussian":
        u0 = solver.gaussian_data(grid, scfg.epsilon, float(cfg["width"]), float(cfg["carrier"]))
    elif profile_kind == "near-sqrt3":
        u0 = solver.gaussian_data(grid, scfg.epsilon, float(cfg["width"]), SQRT3)
    else:
        raise ValidationError(f"unknown initial-data family '{profile_kind}'")
    rec = diagnostics.Recorder(s=scfg.s, discrete_dt=scfg.dt)
    final = solver.evolve(u0, scfg, rec)
    lines = ["t,linf_fhat,weighted_l2,sobolev_s,sup_u"]
    for smp in rec.samples:
        lines.append(
            ",".join(fmt(v) for v in (smp.t, smp.linf_fhat, smp.weighted_l2, smp.sobolev, smp.sup_u))
        )
    sink.write_text("diagnostics.csv", "\n".join(lines) + "\n")
    if cfg["snapshots"] != "none":
        for t, prof in rec.profiles:
            sink.write_snapshot(f"profile_t{t:g}.bin", prof)
        sink.write_snapshot("final_state.bin", final)
    report = diagnostics.bootstrap_report(rec.samples)
    sink.write_json("bootstrap_summary.json", report)
    return 0


def run_scatter(cfg: dict, sink: OutputSink) -> int:
    grid = Grid(int(cfg["n_modes"]), float(cfg["half_length"]))
    scfg = solver.SolverConfig(
        dt=float(cfg["dt"]), t_end=float(cfg["t_end"]), record_stride=1, epsilon=float(cfg["epsilon"])
    )
    u0 = solver.gaussian_data(grid, scfg.epsilon, float(cfg["width"]))
    rec = diagnostics.Recorder(discrete_dt=scfg.dt)
    solver.evolve(u0, scfg, rec)
    rows = diagnostics.scattering_test(rec.profiles)
    lines = ["t,diff_linf,diff_l2"]
    for t, dl, d2 in rows:
        lines.append(f"{fmt(t)},{fmt(dl)},{fmt(d2)}")
    sink.write_text("scattering.csv", "\n".join(lines) + "\n")
    late = [(t, d) for t, d, _ in rows if t >= 8.0]
    fit = diagnostics.fit_decay(late if len(late) >= 4 else [(t, d) for t, d, _ in rows])
    sink.write_json(
        "scattering_summary.json",
        {
            "fitted_exponent": fit.exponent,
            "r_squared": fit.r_squared,
            "monotone_from_8": all(
                b < a for (ta, a, _), (_, b, _) in zip(rows, rows[1:]) if ta >= 8.0
            ),
        },
    )
    return 0


def run_verify_estimates(cfg: dict, sink: OutputSink) -> int:
    k_min, k_max = int(cfg["k_min"]), int(cfg["k_max"])
    if k_max < k_min:
        raise ValidationError("k_max must be >= k_min")
    grid = Grid(int(cfg["n_modes"]), float(cfg["half_length"]))
    if 2.0 ** (k_max + 1) > grid.nyquist:
        raise ValidationError("grid Nyquist too small for k_max")
    width = float(cfg["width"])
    profile = SpectralField.from_function(grid, lambda x: np.exp(-(x * x) / (2.0 * width * width)))
    times = _dyadic_times(float(cfg["t_min"]), float(cfg["t_max"]))
    rows = linear_flow.verify_dispersive_estimate(profile, range(k_min, k_max + 1), times, float(cfg["s"]))
    lines = ["t,k,case_id,lhs,rhs,ratio"]
    for r in rows:
        lines.append(f"{fmt(r.t)},{r.k},{r.case},{fmt(r.lhs)},{fmt(r.rhs)},{fmt(r.ratio)}")
    sink.write_text("estimates.csv", "\n".join(lines) + "\n")
    ratios = [r.ratio for r in rows]
    by_t: dict[float, float] = {}
    for r in rows:
        by_t[r.t] = max(by_t.get(r.t, 0.0), r.ratio)
    ts_sorted = sorted(by_t)
    sink.write_json(
        "estimates_summary.json",
        {
            "max_ratio": max(ratios),
            "median_ratio": float(np.median(ratios)),
            "last_dyadic_max_ratio": by_t[ts_sorted[-1]],
            "median_dyadic_max_ratio": float(np.median([by_t[t] for t in ts_sorted])),
            "all_finite": all(math.isfinite(x) for x in ratios),
        },
    )
    return 0


# ---------------------------------------------------------------------------
# Figure data
# ---------------------------------------------------------------------------

def _figure_data(fig_id: int, n_points: int):
    """(header, columns) for each numbered figure target.

    Odd-frequency scalar functions are shown on their positive domain; the
    negative side follows by oddness.
    """
    aux3 = resonance.aux_phase_sqrt3
    if fig_id == 1:
        x = np.linspace(-10.0, 10.0, n_points)
        return "xi,group_velocity", [x, omega_prime(x)]
    if fig_id == 2:
        x = np.linspace(-20.0, 20.0, n_points)
        return "xi,phase_ppp,phase_mpp", [x, aux3((1, 1, 1), x), aux3((-1, 1, 1), x)]
    if fig_id == 3:
        eta0 = resonance.anomalous_resonance().representative_points[0].eta1
        x = np.linspace(-40.0, 40.0, n_points)
        return (
            "xi,phase_ppp,phase_pmm",
            [x, resonance.aux_phase_anomalous((1, 1, 1), x, eta0), resonance.aux_phase_anomalous((1, -1, -1), x, eta0)],
        )
    if fig_id == 4:
        x = np.linspace(1.0 + 1e-3, 10.0, n_points)
        return "eta,reflection", [x, reflection(x)]
    if fig_id == 5:
        x = np.linspace(1.0 + 1e-3, 10.0, n_points)
        return "eta,partner_sum", [x, 3.0 * x + reflection(x)]
    if fig_id == 6:
        x = np.linspace(1.05, 50.0, n_points)
        return "eta,triple_sum_phase", [x, resonance.scalar_function("triple-sum", x)]
    if fig_id == 7:
        x = np.linspace(1.0 + 1e-3, 10.0, n_points)
        return "eta,partner_diff", [x, 3.0 * x - reflection(x)]
    if fig_id == 8:
        x = np.linspace(4.5, 5.7, n_points)
        return "eta,partner_diff", [x, 3.0 * x - reflection(x)]
    if fig_id == 9:
        x = np.linspace(1.25, 50.0, n_points)
        return "eta,triple_diff_phase", [x, resonance.scalar_function("triple-diff", x)]
    if fig_id == 10:
        x = np.linspace(1.0 + 1e-3, 10.0, n_points)
        return "eta,partner_neg_diff", [x, -x + reflection(x)]
    if fig_id == 11:
        x = np.linspace(1.05, 50.0, n_points)
        return "eta,single_diff_phase", [x, resonance.scalar_function("single-diff", x)]
    if fig_id == 12:
        x = np.linspace(1.0 + 1e-3, 10.0, n_points)
        return "eta,partner_neg_sum", [x, -x - reflection(x)]
    if fig_id == 13:
        x = np.linspace(1.05, 50.0, n_points)
        return "eta,single_sum_phase", [x, resonance.scalar_function("single-sum", x)]
    if fig_id == 14:
        eta0 = resonance.anomalous_resonance().representative_points[0].eta1
        xi0 = resonance.anomalous_resonance().representative_points[0].xi
        x = np.linspace(xi0 - 2.0, xi0 + 2.0, n_points)
        return "xi,phase_ppp", [x, resonance.aux_phase_anomalous((1, 1, 1), x, eta0)]
    if fig_id == 15:
        x = np.linspace(5.05, 5.22, n_points)
        return "eta,triple_diff_phase", [x, resonance.scalar_function("triple-diff", x)]
    if fig_id == 16:
        x = np.linspace(1.05, 50.0, n_points)
        return "eta,double_sum_phase", [x, resonance.scalar_function("double-sum", x)]
    if fig_id == 17:
        x = np.linspace(1.05, 50.0, n_points)
        return "eta,double_diff_phase", [x, resonance.scalar_function("double-diff", x)]
    raise ValidationError(f"figure id must be in 1..17, got {fig_id}")


def run_figures(cfg: dict, sink: OutputSink) -> int:
    fig_id = int(cfg["id"])
    n_points = int(cfg["n_points"])
    if n_points < 2:
        raise ValidationError("n_points must be >= 2")
    header, cols = _figure_data(fig_id, n_points)
    lines = [header]
    for row in zip(*[np.asarray(c) for c in cols]):
        lines.append(",".join(fmt(v) for v in row))
    sink.write_text(f"figure_{fig_id:02d}.csv", "\n".join(lines) + "\n")
    return 0


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

_RUNNERS = {
    "resonances": run_resonances,
    "linear-decay": run_linear_decay,
    "evolve": run_evolve,
    "scatter": run_scatter,
    "verify-estimates": run_verify_estimates,
    "figures": run_figures,
}


def _add_common(sp):
    sp.add_argument("--config", help="INI config file")
    sp.add_argument("--output-dir", dest="output_dir", help="output directory")
    sp.add_argument("--seed", type=int, default=0, help="seed for randomized sampling")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gbbmlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="subcommand", required=True)

    sp = sub.add_parser("resonances", help="emit the resonance census")
    sp.add_argument("--tol", type=float)
    _add_common(sp)

    sp = sub.add_parser("linear-decay", help="linear dispersive decay scan")
    sp.add_argument("--profile", choices=["gaussian", "band", "near-sqrt3"])
    sp.add_argument("--width", type=float)
    sp.add_argument("--k", type=int)
    sp.add_argument("--t-min", dest="t_min", type=float)
    sp.add_argument("--t-max", dest="t_max", type=float)
    sp.add_argument("--n-modes", dest="n_modes", type=int)
    sp.add_argument("--half-length", dest="half_length", type=float)
    _add_common(sp)

    sp = sub.add_parser("evolve", help="nonlinear evolution with diagnostics")
    for flag, kind in (
        ("--n-modes", int),
        ("--half-length", float),
        ("--dt", float),
        ("--t-end", float),
        ("--epsilon", float),
        ("--width", float),
        ("--carrier", float),
        ("--record-stride", int),
        ("--s", float),
    ):
        sp.add_argument(flag, dest=flag[2:].replace("-", "_"), type=kind)
    sp.add_argument("--profile", choices=["gaussian", "near-sqrt3"])
    sp.add_argument("--snapshots", choices=["dyadic", "none"])
    _add_common(sp)

    sp = sub.add_parser("scatter", help="scattering Cauchy test")
    for flag, kind in (
        ("--n-modes", int),
        ("--half-length", float),
        ("--dt", float),
        ("--t-end", float),
        ("--epsilon", float),
        ("--width", float),
    ):
        sp.add_argument(flag, dest=flag[2:].replace("-", "_"), type=kind)
    _add_common(sp)

    sp = sub.add_parser("verify-estimates", help="decay-bound ratio sweep")
    for flag, kind in (
        ("--k-min", int),
        ("--k-max", int),
        ("--t-min", float),
        ("--t-max", float),
        ("--s", float),
        ("--n-modes", int),
        ("--half-length", float),
        ("--width", float),
    ):
        sp.add_argument(flag, dest=flag[2:].replace("-", "_"), type=kind)
    _add_common(sp)

    sp = sub.add_parser("figures", help="emit figure-underlying data")
    sp.add_argument("--id", type=int)
    sp.add_argument("--n-points", dest="n_points", type=int)
    _add_common(sp)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    sub = args.subcommand
    try:
        cfg = _merge_flags(_load_config(args.config, sub), args)
        out_dir = args.output_dir or os.environ.get(OUTPUT_DIR_ENV) or f"gbbmlab_{sub.replace('-', '_')}"
        sink = OutputSink(out_dir, sub, cfg, args.seed)
        status = _RUNNERS[sub](cfg, sink)
        sink.finalize()
        return status
    except (ValidationError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (ArithmeticError, OverflowError) as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
