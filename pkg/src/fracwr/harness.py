"""Experiment configuration, presets and CSV emission.

A run is described by a JSON file (schema below) or a named preset that
reproduces the convergence studies at desk scale.  Every run writes one CSV
per relaxation weight with the exact header

    k,interface_id,error_sup,bound,theta,two_nu

where ``bound`` is the matching theoretical envelope when one applies (error
equations at the optimal weight) and blank otherwise.  Floats are written
with 17 significant digits so identical configurations produce byte-identical
files.

Config schema (all keys required unless noted):

    {
      "algorithm": "dnwr" | "nnwr1d" | "nnwr2d" | "monolithic",
      "geometry": {
        "domain": [x0, x1],
        "breakpoints": [...],          # dnwr: 1 entry; nnwr1d: >= 1; absent for nnwr2d
        "kappa": number | [...],       # per subdomain (scalar for nnwr2d)
        "dx": number | [...],
        "split": number,               # nnwr2d only: interface abscissa
        "y_extent": [y0, y1],          # nnwr2d only
        "dy": number                   # nnwr2d only
      },
      "time": {"order": 2nu in (0,2), "horizon": T, "steps": N,
               "grading": "auto" | r >= 1},        # grading optional
      "relaxation": {"theta": "optimal" | number | [sweep...]},
      "run": {"tolerance": tol, "max_iter": n, "mode": "error_equation" | "forced",
              "initial_guess": "unit" | number,
              "source": name, "initial_condition": name,   # optional, forced mode
              "scheduler": "sequential" | "threads"},       # optional
      "output": {"stem": "basename"}                        # optional
    }

Named sources: zero, sin_half_pi_x (sin(pi x/2)), sin_pi_x_over_16.
Named initial conditions: zero, parabola_16 (x(16-x)/64), bump_2d
(x(2-x)exp(-10 y^2), 2D only).
"""

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .dnwr import DnwrConfig, optimal_theta_dnwr, run_dnwr
from .fractional_time import build_graded_mesh, caputo_weights, default_grading
from .geometry import build_partition, build_subdomain_2d
from .nnwr import Nnwr2dConfig, NnwrConfig, optimal_theta_nnwr, run_nnwr_1d, run_nnwr_2d
from .solver import solve_monolithic
from .theory import (
    BoundNotApplicableError,
    DnwrBoundParams,
    Nnwr2dBoundParams,
    NnwrBoundParams,
    dnwr_error_bound,
    nnwr2d_error_bound,
    nnwr_error_bound,
)

__all__ = ["ExperimentConfig", "ConfigError", "parse_config", "run_experiment",
           "PRESETS", "preset_config", "CSV_HEADER"]

CSV_HEADER = "k,interface_id,error_sup,bound,theta,two_nu"

SOURCES = {
    "zero": None,
    "sin_half_pi_x": lambda x, t: np.sin(np.pi * x / 2.0),
    "sin_pi_x_over_16": lambda x, t: np.sin(np.pi * x / 16.0),
}
INITIAL_CONDITIONS = {
    "zero": None,
    "parabola_16": lambda x: x * (16.0 - x) / 64.0,
}
INITIAL_CONDITIONS_2D = {
    "zero": None,
    "bump_2d": lambda x, y: x * (2.0 - x) * np.exp(-10.0 * y**2),
}


class ConfigError(ValueError):
    """Raised with the full list of schema violations."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid configuration:\n" + "\n".join(f"  - {v}" for v in self.violations))


@dataclass(frozen=True)
class ExperimentConfig:
    algorithm: str
    geometry: dict
    order: float
    horizon: float
    n_steps: int
    grading: object
    thetas: tuple  # sweep members: floats and/or "optimal"
    tolerance: float
    max_iter: int
    mode: str
    initial_guess: object
    source: str = "zero"
    initial_condition: str = "zero"
    scheduler: str = "sequential"
    stem: str = "run"


def _check_keys(section, allowed, required, where, errs):
    if not isinstance(section, dict):
        errs.append(f"{where}: expected an object")
        return False
    for key in section:
        if key not in allowed:
            errs.append(f"{where}.{key}: unknown key")
    for key in required:
        if key not in section:
            errs.append(f"{where}.{key}: missing")
    return all(k in section for k in required)


def _validate(raw) -> ExperimentConfig:
    errs = []
    ok = _check_keys(raw, {"algorithm", "geometry", "time", "relaxation", "run", "output"},
                     {"algorithm", "geometry", "time", "relaxation", "run"}, "config", errs)
    if not ok:
        raise ConfigError(errs)

    algorithm = raw["algorithm"]
    if algorithm not in ("dnwr", "nnwr1d", "nnwr2d", "monolithic"):
        errs.append(f"config.algorithm: must be dnwr|nnwr1d|nnwr2d|monolithic, got {algorithm!r}")

    geo = raw["geometry"]
    geo_keys = {"domain", "breakpoints", "kappa", "dx", "split", "y_extent", "dy"}
    _check_keys(geo, geo_keys, {"domain", "kappa", "dx"}, "geometry", errs)
    if isinstance(geo, dict) and "domain" in geo:
        dom = geo["domain"]
        if not (isinstance(dom, (list, tuple)) and len(dom) == 2 and dom[0] < dom[1]):
            errs.append("geometry.domain: expected [x0, x1] with x0 < x1")
        elif algorithm in ("dnwr", "nnwr1d", "monolithic"):
            breaks = geo.get("breakpoints", [])
            if algorithm == "dnwr" and len(breaks) != 1:
                errs.append("geometry.breakpoints: dnwr needs exactly one breakpoint")
            if any(not dom[0] < b < dom[1] for b in breaks):
                errs.append("geometry.breakpoints: must lie strictly inside the domain")
        elif algorithm == "nnwr2d":
            for key in ("split", "y_extent", "dy"):
                if key not in geo:
                    errs.append(f"geometry.{key}: required for nnwr2d")
            if "split" in geo and "domain" in geo and not dom[0] < geo["split"] < dom[1]:
                errs.append("geometry.split: must lie strictly inside the domain")
            if not np.isscalar(geo.get("kappa", 1.0)):
                errs.append("geometry.kappa: nnwr2d takes a single shared kappa")

    tm = raw["time"]
    _check_keys(tm, {"order", "horizon", "steps", "grading"}, {"order", "horizon", "steps"}, "time", errs)
    if isinstance(tm, dict):
        order = tm.get("order", 0.5)
        if not (np.isscalar(order) and 0.0 < order < 2.0):
            errs.append(f"time.order: must lie in (0, 2), got {order!r}")
        if not (np.isscalar(tm.get("horizon", 1.0)) and tm.get("horizon", 1.0) > 0):
            errs.append("time.horizon: must be positive")
        steps = tm.get("steps", 1)
        if not (isinstance(steps, int) and steps >= 1):
            errs.append("time.steps: must be a positive integer")
        grading = tm.get("grading", "auto")
        if grading != "auto" and not (np.isscalar(grading) and grading >= 1.0):
            errs.append('time.grading: must be "auto" or a number >= 1')

    rel = raw["relaxation"]
    _check_keys(rel, {"theta"}, {"theta"}, "relaxation", errs)
    thetas = ()
    if isinstance(rel, dict) and "theta" in rel:
        th = rel["theta"]
        members = th if isinstance(th, (list, tuple)) else [th]
        for m in members:
            if m == "optimal":
                continue
            if not (np.isscalar(m) and 0.0 < m <= 1.0):
                errs.append(f"relaxation.theta: members must be 'optimal' or in (0, 1], got {m!r}")
        thetas = tuple(members)

    run = raw["run"]
    run_keys = {"tolerance", "max_iter", "mode", "initial_guess", "source",
                "initial_condition", "scheduler"}
    _check_keys(run, run_keys, {"tolerance", "max_iter", "mode"}, "run", errs)
    mode = "error_equation"
    if isinstance(run, dict):
        if not (np.isscalar(run.get("tolerance", 1.0)) and run.get("tolerance", 1.0) > 0):
            errs.append("run.tolerance: must be positive")
        if not (isinstance(run.get("max_iter", 1), int) and run.get("max_iter", 1) >= 1):
            errs.append("run.max_iter: must be a positive integer")
        mode = run.get("mode", "error_equation")
        if mode not in ("error_equation", "forced"):
            errs.append(f'run.mode: must be "error_equation" or "forced", got {mode!r}')
        ig = run.get("initial_guess", "unit")
        if ig != "unit" and not np.isscalar(ig):
            errs.append('run.initial_guess: must be "unit" or a number')
        if run.get("source", "zero") not in SOURCES:
            errs.append(f"run.source: unknown name {run.get('source')!r}")
        ics = INITIAL_CONDITIONS_2D if algorithm == "nnwr2d" else INITIAL_CONDITIONS
        if run.get("initial_condition", "zero") not in ics:
            errs.append(
                f"run.initial_condition: unknown name {run.get('initial_condition')!r} "
                f"for {algorithm} (choose from {sorted(ics)})"
            )
        if run.get("scheduler", "sequential") not in ("sequential", "threads"):
            errs.append('run.scheduler: must be "sequential" or "threads"')

    out = raw.get("output", {})
    _check_keys(out, {"stem"}, set(), "output", errs)

    if errs:
        raise ConfigError(errs)
    return ExperimentConfig(
        algorithm=algorithm,
        geometry=dict(geo),
        order=float(tm["order"]),
        horizon=float(tm["horizon"]),
        n_steps=int(tm["steps"]),
        grading=tm.get("grading", "auto"),
        thetas=thetas,
        tolerance=float(run["tolerance"]),
        max_iter=int(run["max_iter"]),
        mode=mode,
        initial_guess=run.get("initial_guess", "unit"),
        source=run.get("source", "zero"),
        initial_condition=run.get("initial_condition", "zero"),
        scheduler=run.get("scheduler", "sequential"),
        stem=out.get("stem", "run"),
    )


def parse_config(path) -> ExperimentConfig:
    """Load and validate a JSON experiment description."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError([f"not valid JSON: {exc}"]) from exc
    return _validate(raw)


def config_from_dict(raw) -> ExperimentConfig:
    return _validate(raw)


# ---------------------------------------------------------------------------
# Running experiments
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _bound_column(cfg: ExperimentConfig, theta_is_optimal: bool, n_iters: int, kappas, lengths):
    """Theoretical envelope per sweep, or None where no estimate applies."""
    if cfg.mode != "error_equation" or not theta_is_optimal:
        return [None] * n_iters
    nu = cfg.order / 2.0
    out = []
    if cfg.algorithm == "dnwr":
        p = DnwrBoundParams(nu=nu, a=lengths[0], b=lengths[1],
                            kappa1=kappas[0], kappa2=kappas[1], horizon=cfg.horizon)
        regime = "sub" if cfg.order <= 1.0 else "wave"
        for k in range(1, n_iters + 1):
            try:
                out.append(dnwr_error_bound(p, k, regime))
            except BoundNotApplicableError:
                out.append(None)
    elif cfg.algorithm == "nnwr1d":
        p = NnwrBoundParams(nu=nu, lengths=lengths, kappas=kappas, horizon=cfg.horizon)
        for k in range(1, n_iters + 1):
            try:
                out.append(nnwr_error_bound(p, k))
            except BoundNotApplicableError:
                out.append(None)
    elif cfg.algorithm == "nnwr2d":
        p = Nnwr2dBoundParams(nu=nu, a=lengths[0], b=lengths[1],
                              kappa=kappas[0], horizon=cfg.horizon)
        for k in range(1, n_iters + 1):
            try:
                out.append(nnwr2d_error_bound(p, k))
            except BoundNotApplicableError:
                out.append(None)
    else:
        out = [None] * n_iters
    return out


def _write_csv(path, rows):
    tmp = path + ".part"
    try:
        with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(CSV_HEADER + "\n")
            for k, ifc, err, bound, theta, order in rows:
                btxt = "" if bound is None else _fmt(bound)
                fh.write(f"{k},{ifc},{_fmt(err)},{btxt},{_fmt(theta)},{_fmt(order)}\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise
    return path


def _run_single(cfg: ExperimentConfig, theta_member, out_dir, tag):
    geo = cfg.geometry
    source = SOURCES[cfg.source]
    guess = 1.0 if cfg.initial_guess == "unit" else float(cfg.initial_guess)

    if cfg.algorithm == "nnwr2d":
        dom = geo["domain"]
        y0, y1 = geo["y_extent"]
        kap = float(geo["kappa"])
        dx = float(geo["dx"])
        left = build_subdomain_2d(dom[0], geo["split"], y0, y1, kap, dx, geo["dy"])
        right = build_subdomain_2d(geo["split"], dom[1], y0, y1, kap, dx, geo["dy"])
        ic = INITIAL_CONDITIONS_2D[cfg.initial_condition]
        run_cfg = Nnwr2dConfig(
            left=left, right=right, order=cfg.order, horizon=cfg.horizon,
            n_steps=cfg.n_steps, theta=theta_member, tolerance=cfg.tolerance,
            max_iter=cfg.max_iter, mode=cfg.mode, initial_guess=guess,
            grading=cfg.grading, source=None if source is None else
            (lambda x, y, t: source(x, t)), initial_condition_left=ic,
            initial_condition_right=ic, scheduler=cfg.scheduler,
        )
        result = run_nnwr_2d(run_cfg)
        theta_val = run_cfg.resolve_theta()
        theta_opt = math.isclose(theta_val, optimal_theta_nnwr(kap, kap))
        lengths = (geo["split"] - dom[0], dom[1] - geo["split"])
        kappas = (kap, kap)
        errors = result.report.errors
    else:
        partition = build_partition(geo["domain"], geo.get("breakpoints", []),
                                    geo["kappa"], geo["dx"])
        lengths = tuple(s.length for s in partition.subdomains)
        kappas = partition.kappas
        ic = INITIAL_CONDITIONS[cfg.initial_condition]
        if cfg.algorithm == "monolithic":
            r = default_grading(cfg.order) if cfg.grading == "auto" else float(cfg.grading)
            mesh = build_graded_mesh(cfg.horizon, cfg.n_steps, r)
            solve_monolithic(partition, caputo_weights(mesh, cfg.order), f=source, u0=ic)
            rows = [(0, m, 0.0, None, 0.0, cfg.order) for m in range(len(lengths) - 1)]
            return _write_csv(os.path.join(out_dir, f"{cfg.stem}_{tag}.csv"), rows)
        if cfg.algorithm == "dnwr":
            run_cfg = DnwrConfig(
                partition=partition, order=cfg.order, horizon=cfg.horizon,
                n_steps=cfg.n_steps, theta=theta_member, tolerance=cfg.tolerance,
                max_iter=cfg.max_iter, mode=cfg.mode, initial_guess=guess,
                grading=cfg.grading, source=source, initial_condition=ic,
            )
            result = run_dnwr(run_cfg)
            theta_val = run_cfg.resolve_theta()
            theta_opt = math.isclose(theta_val, optimal_theta_dnwr(*kappas))
        else:
            run_cfg = NnwrConfig(
                partition=partition, order=cfg.order, horizon=cfg.horizon,
                n_steps=cfg.n_steps, thetas=theta_member, tolerance=cfg.tolerance,
                max_iter=cfg.max_iter, mode=cfg.mode, initial_guess=guess,
                grading=cfg.grading, source=source, initial_condition=ic,
                scheduler=cfg.scheduler,
            )
            result = run_nnwr_1d(run_cfg)
            thetas_all = run_cfg.resolve_thetas()
            opt = [optimal_theta_nnwr(kappas[i], kappas[i + 1]) for i in range(len(kappas) - 1)]
            theta_opt = bool(np.allclose(thetas_all, opt))
            theta_val = float(thetas_all[0])
        errors = result.report.errors

    n_iters = errors.shape[0]
    bounds = _bound_column(cfg, theta_opt, n_iters, kappas, lengths)
    rows = []
    for k in range(n_iters):
        for m in range(errors.shape[1]):
            rows.append((k + 1, m, float(errors[k, m]), bounds[k], theta_val, cfg.order))
    return _write_csv(os.path.join(out_dir, f"{cfg.stem}_{tag}.csv"), rows)


def run_experiment(cfg: ExperimentConfig, out_dir: str) -> list:
    """Execute every sweep member and return the list of CSV paths written."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for member in cfg.thetas:
        tag = "theta_optimal" if member == "optimal" else f"theta_{float(member):g}"
        paths.append(_run_single(cfg, member, out_dir, tag))
    return paths


# ---------------------------------------------------------------------------
# Presets: the convergence studies at desk scale
# ---------------------------------------------------------------------------

def _preset_dnwr_theta_sweep():
    return {
        "algorithm": "dnwr",
        "geometry": {"domain": [0.0, 2.0], "breakpoints": [1.0], "kappa": 1.0, "dx": 0.02},
        "time": {"order": 0.5, "horizon": 1.0, "steps": 64, "grading": "auto"},
        "relaxation": {"theta": [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, "optimal"]},
        "run": {"tolerance": 1e-12, "max_iter": 60, "mode": "error_equation"},
        "output": {"stem": "dnwr_theta_sweep"},
    }


def _preset_dnwr_theta_sweep_wave():
    cfg = _preset_dnwr_theta_sweep()
    cfg["geometry"]["breakpoints"] = [0.5]
    cfg["time"]["order"] = 1.5
    cfg["output"] = {"stem": "dnwr_theta_sweep_wave"}
    return cfg


def _preset_dnwr_hetero_grid():
    return {
        "algorithm": "dnwr",
        "geometry": {"domain": [0.0, 2.0], "breakpoints": [1.0], "kappa": [1.0, 0.25],
                     "dx": [0.01, 0.005]},
        "time": {"order": 0.5, "horizon": 1.0, "steps": 64, "grading": "auto"},
        "relaxation": {"theta": [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, "optimal"]},
        "run": {"tolerance": 1e-12, "max_iter": 60, "mode": "error_equation"},
        "output": {"stem": "dnwr_hetero_grid"},
    }


def _dnwr_bounds(orders, stem):
    return [
        {
            "algorithm": "dnwr",
            "geometry": {"domain": [0.0, 2.0], "breakpoints": [1.5], "kappa": [1.0, 0.25],
                         "dx": 0.01},
            "time": {"order": order, "horizon": 1.0, "steps": 64, "grading": "auto"},
            "relaxation": {"theta": ["optimal"]},
            "run": {"tolerance": 1e-14, "max_iter": 10, "mode": "error_equation"},
            "output": {"stem": f"{stem}_order{order}"},
        }
        for order in orders
    ]


def _preset_nnwr_theta_sweep(order):
    return {
        "algorithm": "nnwr1d",
        "geometry": {"domain": [0.0, 16.0], "breakpoints": [3.2, 6.4, 9.6, 12.8],
                     "kappa": 1.0, "dx": 0.02},
        "time": {"order": order, "horizon": 4.0, "steps": 96, "grading": "auto"},
        "relaxation": {"theta": [0.25, 0.4, 0.6, 0.8]},
        "run": {"tolerance": 1e-12, "max_iter": 40, "mode": "error_equation"},
        "output": {"stem": f"nnwr_theta_sweep_order{order}"},
    }


def _preset_nnwr_unequal():
    return {
        "algorithm": "nnwr1d",
        "geometry": {"domain": [0.0, 16.0], "breakpoints": [3.5, 5.5, 10.0, 12.0],
                     "kappa": 1.0, "dx": 0.02},
        "time": {"order": 0.5, "horizon": 4.0, "steps": 96, "grading": "auto"},
        "relaxation": {"theta": [0.25, 0.4, 0.6, 0.8]},
        "run": {"tolerance": 1e-12, "max_iter": 40, "mode": "error_equation"},
        "output": {"stem": "nnwr_unequal"},
    }


def _preset_nnwr_kappa():
    return {
        "algorithm": "nnwr1d",
        "geometry": {"domain": [0.0, 16.0], "breakpoints": [3.5, 5.5, 10.0, 12.0],
                     "kappa": [0.25, 1.0, 0.25, 4.0, 1.0], "dx": 0.02},
        "time": {"order": 0.5, "horizon": 4.0, "steps": 96, "grading": "auto"},
        "relaxation": {"theta": ["optimal"]},
        "run": {"tolerance": 1e-12, "max_iter": 40, "mode": "error_equation"},
        "output": {"stem": "nnwr_kappa"},
    }


def table2_kappas(n_sub: int) -> list:
    """Mirrored per-subdomain coefficients 1/4**(i-1), i = 1..N/2."""
    half = [4.0 ** (-i) for i in range(n_sub // 2)]
    return half + half[::-1]


def _nnwr_table2(orders, subdomain_counts=(4, 8, 12)):
    runs = []
    for n_sub in subdomain_counts:
        width = 16.0 / n_sub
        dx = width / round(width / 0.005)  # nearest step that tiles the subdomains
        for order in orders:
            runs.append({
                "algorithm": "nnwr1d",
                "geometry": {
                    "domain": [0.0, 16.0],
                    "breakpoints": [width * i for i in range(1, n_sub)],
                    "kappa": table2_kappas(n_sub),
                    "dx": dx,
                },
                "time": {"order": order, "horizon": 1.0 if order < 1 else 4.0,
                         "steps": 64, "grading": 1.0},
                "relaxation": {"theta": ["optimal"]},
                "run": {"tolerance": 1e-14, "max_iter": 12, "mode": "error_equation"},
                "output": {"stem": f"nnwr_table2_N{n_sub}_order{order}"},
            })
    return runs


def _preset_2d(order):
    return {
        "algorithm": "nnwr2d",
        "geometry": {"domain": [0.0, 2.0], "split": 0.5, "y_extent": [-5.0, 5.0],
                     "kappa": 1.0, "dx": 0.02, "dy": 0.2},
        "time": {"order": order, "horizon": 1.0, "steps": 64, "grading": "auto"},
        "relaxation": {"theta": ["optimal"]},
        "run": {"tolerance": 1e-12, "max_iter": 6, "mode": "error_equation"},
        "output": {"stem": f"nnwr2d_order{order}"},
    }


PRESETS = {
    "fig_dnwr_theta_sweep": lambda: [_preset_dnwr_theta_sweep()],
    "fig_dnwr_theta_sweep_wave": lambda: [_preset_dnwr_theta_sweep_wave()],
    "fig_dnwr_hetero_grid": lambda: [_preset_dnwr_hetero_grid()],
    "fig_dnwr_bounds_sub": lambda: _dnwr_bounds((0.2, 0.5, 0.8), "dnwr_bounds_sub"),
    "fig_dnwr_bounds_wave": lambda: _dnwr_bounds((1.2, 1.5, 1.8), "dnwr_bounds_wave"),
    "fig_nnwr_theta_sweep": lambda: [_preset_nnwr_theta_sweep(0.5)],
    "fig_nnwr_theta_sweep_wave": lambda: [_preset_nnwr_theta_sweep(1.5)],
    "fig_nnwr_unequal": lambda: [_preset_nnwr_unequal()],
    "fig_nnwr_kappa": lambda: [_preset_nnwr_kappa()],
    "fig_nnwr_table2": lambda: _nnwr_table2((0.2, 0.5, 0.8)),
    "fig_2d": lambda: [_preset_2d(0.5)],
    "fig_2d_wave": lambda: [_preset_2d(1.5)],
}


def preset_config(name: str) -> list:
    """Validated ExperimentConfig list for a named preset."""
    if name not in PRESETS:
        raise ConfigError([f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}"])
    return [config_from_dict(raw) for raw in PRESETS[name]()]
