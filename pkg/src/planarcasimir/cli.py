"""Batch front-end: JSON job description in, CSV sweep table out.

    planarcasimir run job.json [--out FILE] [--rel-tol X] [--validate-only]
                               [--reduced] [--threads N]

Exit status is 0 when every sweep point converged, 1 for an invalid
configuration and 2 when at least one point did not converge (its row is
still written, with ``converged=false``).  Forces are along +z, i.e. a
negative force pulls towards the wall at smaller z.  All quantities are SI.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import cp, stress
from .layers import NO_WALL, SEMI_INFINITE, Layer, LayerStack, StackWall
from .materials import (
    PERFECT_MIRROR,
    VACUUM,
    AtomModel,
    MaterialModel,
    Oscillator,
    OscillatorSet,
)
from .quad import QuadratureSpec

THREADS_ENV = "PLANARCASIMIR_THREADS"

TASKS = ("cp-potential", "cp-screened", "casimir-plate", "casimir-plate-medium",
         "stress-profile", "screening-compare", "layer-force")
CP_TASKS = ("cp-potential", "cp-screened", "screening-compare")
SWEEP_VARIABLES = {
    "cp-potential": ("z",),
    "cp-screened": ("z",),
    "screening-compare": ("z",),
    "casimir-plate": ("d1", "gap", "dz"),
    "casimir-plate-medium": ("z", "dz"),
    "stress-profile": ("z",),
    "layer-force": ("gap", "dz"),
}
REQUIRED_PARAMS = {
    "cp-potential": ("atom",),
    "cp-screened": ("atom",),
    "screening-compare": ("atom",),
    "casimir-plate": ("plate", "d1_m", "dz_m"),
    "casimir-plate-medium": ("medium", "z_m", "dz_m"),
    "stress-profile": ("layer_index",),
    "layer-force": ("layer_index",),
}
COLUMNS = {
    "cp-potential": ["z_m", "V_J", "F_N", "V_err_J", "converged"],
    "cp-screened": ["z_m", "V_J", "F_N", "V_err_J", "converged"],
    "screening-compare": ["z_m", "V_J", "F_N", "V_err_J", "converged",
                          "V_screened_J", "ratio"],
    "casimir-plate": ["d1_m", "dz_m", "F_N_per_m2", "F_err_N_per_m2", "converged"],
    "casimir-plate-medium": ["z_m", "dz_m", "F_N_per_m2", "F_err_N_per_m2", "converged"],
    "stress-profile": ["z_m", "T_Pa", "T_err_Pa", "converged"],
    "layer-force": ["d_m", "F_N_per_m2", "F_err_N_per_m2", "converged"],
}
REDUCED_COLUMNS = {
    "cp-potential": ["V_reduced"],
    "cp-screened": ["V_reduced"],
    "screening-compare": ["V_reduced", "V_screened_reduced"],
}
BUILTIN_MATERIALS = {"vacuum": VACUUM, "perfect_mirror": PERFECT_MIRROR}


class ConfigError(ValueError):
    """Invalid job configuration; the message names the offending key."""


@dataclass
class Sweep:
    variable: str
    start: float
    stop: float
    points: int
    spacing: str = "linear"

    def values(self) -> np.ndarray:
        if self.points == 1:
            return np.array([self.start])
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)


@dataclass
class JobConfig:
    materials: dict[str, Any]
    stack: list[Layer]
    task: str
    params: dict[str, Any] = field(default_factory=dict)
    sweep: Sweep | None = None
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    output_path: str | None = None


# -- parsing -----------------------------------------------------------------


def _keys(obj, where, allowed, required=()):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object")
    for k in obj:
        if k not in allowed:
            raise ConfigError(f"{where}.{k}: unknown key")
    for k in required:
        if k not in obj:
            raise ConfigError(f"{where}.{k}: required key missing")


def _number(obj, key, where, *, positive=False, nonneg=False, default=None):
    if key not in obj:
        if default is not None:
            return default
        raise ConfigError(f"{where}.{key}: required key missing")
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ConfigError(f"{where}.{key}: expected a finite number")
    if positive and not v > 0:
        raise ConfigError(f"{where}.{key}: must be > 0")
    if nonneg and v < 0:
        raise ConfigError(f"{where}.{key}: must be >= 0")
    return float(v)


def _oscillators(items, where) -> OscillatorSet:
    if not isinstance(items, list):
        raise ConfigError(f"{where}: expected a list of oscillators")
    terms = []
    for i, o in enumerate(items):
        w = f"{where}[{i}]"
        _keys(o, w, ("strength_rad_s", "resonance_rad_s", "damping_rad_s"),
              ("strength_rad_s", "resonance_rad_s"))
        terms.append(Oscillator(_number(o, "strength_rad_s", w, nonneg=True),
                                _number(o, "resonance_rad_s", w, positive=True),
                                _number(o, "damping_rad_s", w, nonneg=True, default=0.0)))
    return OscillatorSet(tuple(terms))


def _material(name, spec):
    where = f"materials.{name}"
    if name in BUILTIN_MATERIALS:
        raise ConfigError(f"{where}: '{name}' is a built-in material name")
    _keys(spec, where, ("kind", "epsilon", "mu", "oscillators", "alpha_scale_C_m2_per_V",
                        "alpha_static_C_m2_per_V", "eta_per_m3"), ("kind",))
    kind = spec["kind"]
    if kind == "medium":
        _keys(spec, where, ("kind", "epsilon", "mu"))
        return MaterialModel(_oscillators(spec.get("epsilon", []), where + ".epsilon"),
                             _oscillators(spec.get("mu", []), where + ".mu"))
    if kind == "atom":
        _keys(spec, where, ("kind", "oscillators", "alpha_scale_C_m2_per_V",
                            "alpha_static_C_m2_per_V", "eta_per_m3"))
        atom = AtomModel(_oscillators(spec.get("oscillators", []), where + ".oscillators"),
                         scale=_number(spec, "alpha_scale_C_m2_per_V", where, nonneg=True,
                                       default=0.0),
                         static=_number(spec, "alpha_static_C_m2_per_V", where, nonneg=True,
                                        default=0.0),
                         eta=_number(spec, "eta_per_m3", where, nonneg=True, default=0.0))
        if atom.alpha0 <= 0:
            raise ConfigError(f"{where}: polarizability must be positive")
        return atom
    raise ConfigError(f"{where}.kind: must be 'medium' or 'atom'")


def _resolve(materials, name, where, want):
    if not isinstance(name, str):
        raise ConfigError(f"{where}: expected a material name")
    m = BUILTIN_MATERIALS.get(name, materials.get(name))
    if m is None:
        raise ConfigError(f"{where}: unresolved material reference '{name}'")
    if want == "atom" and not isinstance(m, AtomModel):
        raise ConfigError(f"{where}: '{name}' is not an atom")
    if want == "medium" and isinstance(m, AtomModel):
        raise ConfigError(f"{where}: '{name}' is an atom, not a medium")
    return m


def parse_config(text: str) -> JobConfig:
    """Parse and validate a JSON job description (unknown keys are rejected)."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from None
    _keys(raw, "config", ("materials", "stack", "task", "params", "sweep", "quadrature",
                          "output"), ("task",))

    task = raw["task"]
    if task not in TASKS:
        raise ConfigError(f"config.task: must be one of {', '.join(TASKS)}")

    mats_raw = raw.get("materials", {})
    if not isinstance(mats_raw, dict):
        raise ConfigError("config.materials: expected an object")
    materials = {name: _material(name, spec) for name, spec in mats_raw.items()}

    stack_raw = raw.get("stack", [])
    if not isinstance(stack_raw, list):
        raise ConfigError("config.stack: expected a list of layers")
    stack = []
    for i, entry in enumerate(stack_raw):
        w = f"stack[{i}]"
        _keys(entry, w, ("material", "thickness_m"), ("material",))
        mat = _resolve(materials, entry["material"], w + ".material", "medium")
        t = entry.get("thickness_m")
        if t is None:
            thickness = SEMI_INFINITE
        else:
            thickness = _number(entry, "thickness_m", w, positive=True)
        stack.append(Layer(thickness, mat))

    params = raw.get("params", {})
    _keys(params, "params", ("atom", "plate", "medium", "z_m", "d1_m", "dz_m",
                             "layer_index", "gap_layer_index"))
    for key in REQUIRED_PARAMS[task]:
        if key not in params:
            raise ConfigError(f"params.{key}: required for task '{task}'")
    p = dict(params)
    if "atom" in p:
        p["atom"] = _resolve(materials, p["atom"], "params.atom", "atom")
    if "plate" in p:
        plate = BUILTIN_MATERIALS.get(p["plate"], materials.get(p["plate"]))
        if isinstance(plate, AtomModel):
            if not plate.eta > 0 or plate.static:
                raise ConfigError("params.plate: an atomic plate needs eta_per_m3 > 0 "
                                  "and no static polarizability")
            p["plate"] = plate.as_material()
        else:
            p["plate"] = _resolve(materials, p["plate"], "params.plate", "medium")
    if "medium" in p:
        p["medium"] = _resolve(materials, p["medium"], "params.medium", "medium")
        if p["medium"] is PERFECT_MIRROR:
            raise ConfigError("params.medium: cannot be a perfect mirror")
    for key in ("z_m", "d1_m", "dz_m"):
        if key in p:
            p[key] = _number(params, key, "params", positive=True)
    for key in ("layer_index", "gap_layer_index"):
        if key in p and (isinstance(p[key], bool) or not isinstance(p[key], int)):
            raise ConfigError(f"params.{key}: expected an integer")

    sweep = None
    if "sweep" in raw:
        s = raw["sweep"]
        _keys(s, "sweep", ("variable", "start_m", "stop_m", "points", "spacing"),
              ("variable", "start_m", "stop_m", "points"))
        if s["variable"] not in SWEEP_VARIABLES[task]:
            raise ConfigError(f"sweep.variable: task '{task}' sweeps one of "
                              f"{', '.join(SWEEP_VARIABLES[task])}")
        start = _number(s, "start_m", "sweep", positive=True)
        stop = _number(s, "stop_m", "sweep", positive=True)
        n = s["points"]
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise ConfigError("sweep.points: expected a positive integer")
        if stop < start or (n > 1 and stop == start):
            raise ConfigError("sweep.stop_m: must be greater than start_m")
        spacing = s.get("spacing", "linear")
        if spacing not in ("linear", "log"):
            raise ConfigError("sweep.spacing: must be 'linear' or 'log'")
        sweep = Sweep(s["variable"], start, stop, n, spacing)
        if s["variable"] == "gap" and task == "layer-force" and "gap_layer_index" not in p:
            raise ConfigError("params.gap_layer_index: required to sweep 'gap'")
    elif task in CP_TASKS and "z_m" not in p:
        raise ConfigError("params.z_m: required when no sweep is given")
    elif task == "stress-profile" and "z_m" not in p:
        raise ConfigError("params.z_m: required when no sweep is given")

    quad = _quadrature(raw.get("quadrature", {}))

    out_path = None
    if "output" in raw:
        o = raw["output"]
        _keys(o, "output", ("path", "format"))
        if o.get("format", "csv") != "csv":
            raise ConfigError("output.format: only 'csv' is supported")
        if "path" in o and not isinstance(o["path"], str):
            raise ConfigError("output.path: expected a string")
        out_path = o.get("path")

    cfg = JobConfig(materials, stack, task, p, sweep, quad, out_path)
    _check_geometry(cfg)
    return cfg


def _quadrature(q) -> QuadratureSpec:
    _keys(q, "quadrature", ("rel_tol", "abs_tol", "max_evals", "xi_scale_rad_s",
                            "q_scale_rad_m", "strategy", "coordinates", "fixed_panels"))
    kw = {}
    if "rel_tol" in q:
        kw["rel_tol"] = _number(q, "rel_tol", "quadrature", nonneg=True)
    if "abs_tol" in q:
        kw["abs_tol"] = _number(q, "abs_tol", "quadrature", nonneg=True)
    if "xi_scale_rad_s" in q:
        kw["xi_scale"] = _number(q, "xi_scale_rad_s", "quadrature", positive=True)
    if "q_scale_rad_m" in q:
        kw["q_scale"] = _number(q, "q_scale_rad_m", "quadrature", positive=True)
    for key in ("max_evals", "fixed_panels"):
        if key in q:
            if isinstance(q[key], bool) or not isinstance(q[key], int):
                raise ConfigError(f"quadrature.{key}: expected an integer")
            kw[key] = q[key]
    for key in ("strategy", "coordinates"):
        if key in q:
            kw[key] = q[key]
    try:
        return QuadratureSpec(**kw)
    except ValueError as exc:
        raise ConfigError(f"quadrature: {exc}") from None


def _wall(cfg: JobConfig):
    if not cfg.stack:
        return NO_WALL
    try:
        return StackWall(tuple(cfg.stack))
    except ValueError as exc:
        raise ConfigError(f"stack: {exc}") from None


def _full_stack(cfg: JobConfig) -> LayerStack:
    try:
        return LayerStack(tuple(cfg.stack))
    except ValueError as exc:
        raise ConfigError(f"stack: {exc}") from None


def _check_geometry(cfg: JobConfig):
    if cfg.task in ("stress-profile", "layer-force"):
        st = _full_stack(cfg)
        j = cfg.params["layer_index"]
        if not 0 <= j < len(st):
            raise ConfigError(f"params.layer_index: {j} out of range")
        if cfg.task == "layer-force" and (j == 0 or j == len(st) - 1):
            raise ConfigError("params.layer_index: must be an interior layer")
        g = cfg.params.get("gap_layer_index")
        if g is not None and not 0 < g < len(st) - 1:
            raise ConfigError("params.gap_layer_index: must be an interior layer")
        if cfg.task == "stress-profile":
            zs = cfg.sweep.values() if cfg.sweep else [cfg.params["z_m"]]
            for z in zs:
                try:
                    stress.StressContext(st, j, float(z))
                except ValueError as exc:
                    raise ConfigError(f"params.z_m / sweep: {exc}") from None
    else:
        _wall(cfg)


# -- evaluation ----------------------------------------------------------------


def _point(cfg: JobConfig, value: float | None, reduced: bool) -> list:
    p = dict(cfg.params)
    var = cfg.sweep.variable if cfg.sweep else None
    quad = cfg.quadrature
    task = cfg.task

    if task in CP_TASKS:
        z = value if var == "z" else p["z_m"]
        atom = p["atom"]
        wall = _wall(cfg)
        fn = cp.cp_screened if task == "cp-screened" else cp.cp_unscreened
        r = fn(wall, atom, z, quad)
        row = [z, r.potential, r.force, r.abs_error, r.converged]
        extra = []
        if task == "screening-compare":
            s = cp.cp_screened(wall, atom, z, quad)
            row[4] = r.converged and s.converged
            row += [s.potential, s.potential / r.potential if r.potential else math.nan]
            if reduced:
                extra = [cp.reduced_potential(r.potential, atom, z),
                         cp.reduced_potential(s.potential, atom, z)]
        elif reduced:
            extra = [cp.reduced_potential(r.potential, atom, z)]
        return row + [float(x) for x in extra]

    if task == "casimir-plate":
        d1 = value if var in ("d1", "gap") else p["d1_m"]
        dz = value if var == "dz" else p["dz_m"]
        r = stress.force_plate_vacuum(_wall(cfg), Layer(dz, p["plate"]), d1, quad)
        return [d1, dz, r.value, r.abs_error, r.converged]

    if task == "casimir-plate-medium":
        z = value if var == "z" else p["z_m"]
        dz = value if var == "dz" else p["dz_m"]
        r = stress.force_plate_medium(_wall(cfg), p["medium"], z, dz, quad)
        return [z, dz, r.value, r.abs_error, r.converged]

    st = _full_stack(cfg)
    j = p["layer_index"]
    if task == "stress-profile":
        z = value if var == "z" else p["z_m"]
        r = stress.stress_zz(stress.StressContext(st, j, z), quad)
        return [z, r.value, r.abs_error, r.converged]

    # layer-force
    layers = list(st.layers)
    k = p["gap_layer_index"] if var == "gap" else j
    if value is not None:
        layers[k] = Layer(value, layers[k].material)
    r = stress.force_on_layer(LayerStack(tuple(layers)), j, quad)
    return [layers[k].thickness, r.value, r.abs_error, r.converged]


def _format(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    return "%.17g" % v


def columns_for(task: str, reduced: bool = False) -> list[str]:
    return COLUMNS[task] + (REDUCED_COLUMNS.get(task, []) if reduced else [])


def run_job(cfg: JobConfig, out=None, threads: int = 1, reduced: bool = False):
    """Evaluate every sweep point; returns (exit_status, rows)."""
    if reduced and cfg.task not in CP_TASKS:
        raise ConfigError("--reduced applies only to cp-potential, cp-screened "
                          "and screening-compare")
    values = list(cfg.sweep.values()) if cfg.sweep else [None]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda v: _point(cfg, v, reduced), values))
    else:
        rows = [_point(cfg, v, reduced) for v in values]

    header = columns_for(cfg.task, reduced)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_format(v) for v in row])
    text = buf.getvalue()

    path = out or cfg.output_path
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    conv_idx = header.index("converged")
    failed = sum(1 for row in rows if not row[conv_idx])
    print(f"{cfg.task}: {len(rows)} point(s), {failed} not converged"
          + (f", written to {path}" if path else ""), file=sys.stderr)
    return (2 if failed else 0), rows


def _threads(arg):
    if arg is not None:
        return arg
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"{THREADS_ENV}: expected an integer") from None
    return 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="planarcasimir",
        description="Casimir and Casimir-Polder forces in planar structures "
                    "(zero temperature, SI units). Forces are along +z: "
                    "negative values attract towards the wall at smaller z.")
    sub = ap.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a JSON job description")
    run.add_argument("config", help="path to the JSON job file")
    run.add_argument("--out", help="CSV output file (default: config output.path or stdout)")
    run.add_argument("--rel-tol", type=float, help="override quadrature rel_tol")
    run.add_argument("--validate-only", action="store_true",
                     help="check the configuration and exit")
    run.add_argument("--reduced", action="store_true",
                     help="add V z^4 32 pi^2 eps0 / (hbar c alpha(0)) columns (cp tasks)")
    run.add_argument("--threads", type=int,
                     help=f"sweep points evaluated concurrently (default: ${THREADS_ENV} or 1)")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.config}: {exc}", file=sys.stderr)
        return 1
    try:
        cfg = parse_config(text)
        if args.rel_tol is not None:
            try:
                cfg.quadrature = cfg.quadrature.with_(rel_tol=args.rel_tol)
            except ValueError as exc:
                raise ConfigError(f"--rel-tol: {exc}") from None
        if args.validate_only:
            print(f"{args.config}: valid ({cfg.task})", file=sys.stderr)
            return 0
        threads = _threads(args.threads)
        status, _ = run_job(cfg, args.out, threads, args.reduced)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    return status


if __name__ == "__main__":
    sys.exit(main())
