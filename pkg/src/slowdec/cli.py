"""Command-line driver: ``slowdec <task> --spec cfg.yaml [options]``.

The configuration file (YAML or JSON) is a flat mapping; see
``docs/report_format.md`` for the schema and the report layout.  Flags
override file entries.  Exit status: 0 success, 2 configuration error,
3 radius insufficient for the requested grids, 1 any other library error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
import yaml

from . import __version__
from .criteria import (
    DEFAULT_A_GRID,
    DEFAULT_COND2_A_GRID,
    DEFAULT_X_GRID,
    SlowDecreaseParams,
    check_lemma2,
    check_theorem1,
    classify,
    lemma3_diagnostic,
    lemma4_diagnostic,
)
from .exceptions import ConfigError, RadiusError, SlowdecError
from .product_eval import Phi0Evaluator, ProductEvaluator
from .representations import PoissonRepresentation, favorov_log
from .seqcore import SequenceSpec, build_sequence, from_points, nu

TASKS = ("eval", "counting", "favorov-check", "poisson-check", "classify", "diagnostics")
FORMATS = ("json", "csv")
_TOP_KEYS = {"spec", "radius", "task", "evaluator", "points", "grids", "seed", "output", "options"}
_GRID_KEYS = {"a_grid", "x_grid", "A_grid", "t_grid"}
_OPTION_DEFAULTS = {
    "window_resolution": 64,
    "n_points": 20,
    "n_probes": 50,
    "tail_cut": 1e4,
    "quadrature_step": 1.0,
    "lemma3_x": [1e3, 1e4],
    "lemma3_T": 1e6,
    "lemma4_x": 1e3,
    "lemma4_A": [1.0, 2.0, 4.0, 8.0],
}


@dataclass
class RunConfig:
    task: str
    spec: Optional[SequenceSpec] = None
    radius: Optional[float] = None
    evaluator: str = "product"
    points: Optional[list] = None
    grids: dict = field(default_factory=dict)
    seed: int = 0
    out: Optional[str] = None
    format: str = "json"
    options: dict = field(default_factory=dict)

    def option(self, key):
        return self.options.get(key, _OPTION_DEFAULTS[key])

    def to_dict(self):
        return {"task": self.task, "spec": self.spec.to_dict() if self.spec else None, "radius": self.radius,
                "evaluator": self.evaluator, "points": self.points, "grids": self.grids, "seed": self.seed,
                "format": self.format, "options": {**_OPTION_DEFAULTS, **self.options}}


# ---------------------------------------------------------------- parsing

def _parse_point(p, where):
    if isinstance(p, (int, float)) and not isinstance(p, bool):
        return complex(p)
    if isinstance(p, (list, tuple)) and len(p) == 2 and all(isinstance(c, (int, float)) for c in p):
        return complex(p[0], p[1])
    if isinstance(p, str):
        try:
            return complex(p.replace(" ", "").replace("i", "j"))
        except ValueError:
            pass
    raise ConfigError(f"{where}: cannot read {p!r} as a point (use a number or [re, im])")


def _parse_list(text, where):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"{where}: expected a comma-separated list of numbers, got {text!r}") from None


def load_config_file(path):
    """Read a YAML/JSON file; errors carry the line number."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{path}:{mark.line + 1}:{mark.column + 1}" if mark else str(path)
        raise ConfigError(f"{where}: {getattr(exc, 'problem', None) or exc}") from None
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    if "kind" in data:
        # a bare sequence spec
        data = {"spec": data}
    return data


def build_config(data, task=None, radius=None, out=None, fmt=None, seed=None, grids=None, points=None):
    """Validate a raw mapping (plus flag overrides) into a :class:`RunConfig`."""
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown top-level field(s): {', '.join(sorted(unknown))}")
    task = task or data.get("task")
    if task not in TASKS:
        raise ConfigError(f"task: expected one of {', '.join(TASKS)}, got {task!r}")
    spec = None
    if data.get("spec") is not None:
        try:
            spec = SequenceSpec.from_dict(data["spec"])
        except SlowdecError as exc:
            raise ConfigError(f"spec: {exc}") from None
    evaluator = data.get("evaluator", "product")
    if evaluator not in ("product", "phi0"):
        raise ConfigError(f"evaluator: expected 'product' or 'phi0', got {evaluator!r}")
    if spec is None and not (task == "favorov-check" or (evaluator == "phi0" and task == "eval")):
        raise ConfigError(f"spec: required for task {task!r}")
    r = radius if radius is not None else data.get("radius")
    if r is not None:
        try:
            r = float(r)
        except (TypeError, ValueError):
            raise ConfigError(f"radius: expected a number, got {r!r}") from None
        if not r > 0:
            raise ConfigError(f"radius: must be positive, got {r!r}")
    elif spec is not None:
        raise ConfigError("radius: required when a spec is given")
    g = dict(data.get("grids") or {})
    if not isinstance(g, dict):
        raise ConfigError("grids: expected a mapping")
    g.update(grids or {})
    bad = set(g) - _GRID_KEYS
    if bad:
        raise ConfigError(f"grids: unknown grid(s) {', '.join(sorted(bad))}")
    for k, v in g.items():
        if not isinstance(v, list) or not v or not all(isinstance(x, (int, float)) for x in v):
            raise ConfigError(f"grids.{k}: expected a nonempty list of numbers")
        if any(b <= a for a, b in zip(v, v[1:])) or v[0] <= 0:
            raise ConfigError(f"grids.{k}: must be positive and strictly increasing")
        g[k] = [float(x) for x in v]
    raw_points = points if points is not None else data.get("points")
    pts = None
    if raw_points is not None:
        if not isinstance(raw_points, list):
            raise ConfigError("points: expected a list")
        pts = [_parse_point(p, f"points[{i}]") for i, p in enumerate(raw_points)]
    if task == "eval" and not pts:
        raise ConfigError("points: task 'eval' needs probe points")
    output = data.get("output") or {}
    if not isinstance(output, dict):
        raise ConfigError("output: expected a mapping with 'path' and/or 'format'")
    fmt = fmt or output.get("format", "json")
    if fmt not in FORMATS:
        raise ConfigError(f"output.format: expected one of {', '.join(FORMATS)}, got {fmt!r}")
    options = data.get("options") or {}
    if not isinstance(options, dict):
        raise ConfigError("options: expected a mapping")
    bad = set(options) - set(_OPTION_DEFAULTS)
    if bad:
        raise ConfigError(f"options: unknown option(s) {', '.join(sorted(bad))}")
    s = seed if seed is not None else data.get("seed", 0)
    if not isinstance(s, int) or isinstance(s, bool):
        raise ConfigError(f"seed: expected an integer, got {s!r}")
    return RunConfig(task, spec, r, evaluator, [[p.real, p.imag] for p in pts] if pts else None,
                     g, s, out or output.get("path"), fmt, dict(options))


# ---------------------------------------------------------------- tasks

def _sequence(cfg):
    return build_sequence(cfg.spec, cfg.radius)


def _evaluator(cfg, seq=None):
    if cfg.evaluator == "phi0":
        return Phi0Evaluator()
    seq = seq or _sequence(cfg)
    return ProductEvaluator(seq, "even" if seq.even else "principal")


def _points(cfg):
    z = np.array([complex(a, b) for a, b in cfg.points])
    return z.real if np.all(z.imag == 0) else z


def _params(cfg):
    return SlowDecreaseParams(cfg.grids.get("a_grid", DEFAULT_A_GRID), cfg.grids.get("x_grid", DEFAULT_X_GRID),
                              cfg.option("window_resolution"))


def task_eval(cfg):
    ev = _evaluator(cfg)
    z = _points(cfg)
    if np.max(np.abs(z)) > ev.max_abs:
        raise RadiusError(f"points reach |z| = {np.max(np.abs(z)):g}; required radius >= {2 * np.max(np.abs(z)):g}")
    lm = ev.log_abs_many(z)
    rows = [{"z": [float(np.real(zi)), float(np.imag(zi))], "log_abs": float(lm.value[i]),
             "corrected": float(lm.corrected[i]), "tail_bound": float(lm.tail_bound[i]),
             "corrected_bound": float(lm.corrected_bound[i]), "at_zero": bool(lm.at_zero[i])}
            for i, zi in enumerate(z)]
    series = {"log_abs_phi": [(float(np.real(zi)), float(lm.corrected[i])) for i, zi in enumerate(z)]}
    return {"evaluations": rows}, series


def _theorem1_series(rep):
    return [(t, v) for t, v in rep.samples]


def task_counting(cfg):
    seq = _sequence(cfg)
    ts = np.asarray(cfg.grids.get("t_grid", DEFAULT_X_GRID))
    lem2 = check_lemma2(seq, ts)
    thm1 = check_theorem1(seq, None, ts)
    delta = seq.density
    tt = np.concatenate((-ts[::-1], ts))
    v = nu(seq, tt)
    rows = []
    for t, n in zip(tt, v):
        L = float(n - (delta or 0.0) * t) if delta is not None else None
        rows.append({"t": float(t), "nu": int(n), "L": L,
                     "L_over_log2": L / math.log(abs(t)) ** 2 if L is not None else None})
    series = {"L_over_log2": [(r["t"], r["L_over_log2"]) for r in rows if r["L"] is not None],
              "lemma2_ratio": list(lem2.samples)}
    return {"density": delta, "counts": rows, "theorem1": thm1.to_dict(), "lemma2": lem2.to_dict()}, series


def task_favorov_check(cfg):
    rng = np.random.default_rng(cfg.seed)
    if cfg.spec is None:
        n = int(cfg.option("n_points"))
        mod = rng.uniform(1.0, 100.0, n)
        arg = rng.uniform(0.0, 2.0 * math.pi, n)
        seq = from_points(mod * np.exp(1j * arg), radius=math.inf, label="random")
        reach = 150.0
        source = {"random": {"n_points": n, "seed": cfg.seed}}
    else:
        seq = _sequence(cfg)
        reach = seq.radius / 2.0
        source = {"spec": cfg.spec.to_dict()}
    ev = ProductEvaluator(seq, "principal")
    n_probes = int(cfg.option("n_probes"))
    z = rng.uniform(-reach, reach, n_probes) + 1j * rng.uniform(-reach, reach, n_probes)
    if seq.is_real:
        z = z.real + 1j * np.where(np.abs(z.imag) < 1e-6, 1e-6, z.imag)
    rows = []
    for zi in z:
        fav = favorov_log(seq, zi)
        prod = ev.log_abs(zi).value
        row = {"z": [zi.real, zi.imag], "favorov": fav, "product": prod, "residual": abs(fav - prod)}
        if math.isfinite(seq.radius):
            lit = favorov_log(seq, zi, R=seq.radius)
            row["favorov_at_radius"] = lit
            row["truncation_difference"] = abs(lit - fav)
        rows.append(row)
    res = {"source": source, "n_zeros": len(seq), "probes": rows,
           "max_residual": max(r["residual"] for r in rows)}
    series = {"residual": [(r["z"][0], r["residual"]) for r in rows]}
    return res, series


def task_poisson_check(cfg):
    seq = _sequence(cfg)
    ev = ProductEvaluator(seq, "even" if seq.even else "principal")
    rep = PoissonRepresentation(ev, cfg.option("tail_cut"), cfg.option("quadrature_step"))
    if cfg.points:
        z = np.array([complex(a, b) for a, b in cfg.points])
    else:
        z = np.array([complex(x, y) for x in np.linspace(-10, 10, 5) for y in np.linspace(1, 10, 5)])
    rows = []
    for zi in z:
        p = rep.log_abs(zi) if zi.imag > 0 else rep.log_abs_lower(zi)
        d = ev.log_abs(zi)
        rows.append({"z": [zi.real, zi.imag], "poisson": p.value, "product": d.corrected,
                     "residual": abs(p.value - d.corrected), "quadrature_error": p.quadrature_error,
                     "evaluation_error": p.evaluation_error, "tail_estimate": p.tail_estimate,
                     "error_estimate": p.error_estimate, "product_bound": d.corrected_bound})
    res = {"tail_cut": rep.tail_cut, "quadrature_step": rep.quadrature_step, "fitted_constant": rep.fitted_constant,
           "density": rep.delta, "density_spread": rep.density_spread, "points": rows,
           "max_residual": max(r["residual"] for r in rows),
           "all_within_estimate": all(r["residual"] <= r["error_estimate"] for r in rows)}
    series = {"poisson_residual": [(r["z"][1], r["residual"]) for r in rows]}
    return res, series


def task_classify(cfg):
    seq = _sequence(cfg)
    params = _params(cfg)
    ev = _evaluator(cfg, seq)
    c = classify(seq, params, cfg.grids.get("A_grid", DEFAULT_COND2_A_GRID), cfg.grids.get("x_grid"),
                 evaluator=ev if seq.is_real else None)
    res = c.to_dict()
    if seq.is_real:
        # half a unit off the largest probe so a zero there cannot mask the bound
        xm = max(params.x_grid) + 0.5
        lm = ev.log_abs_many(np.array([xm]))
        res["tail_bounds"] = {"x": xm, "corrected_bound": float(lm.corrected_bound[0]),
                              "tail_bound": float(lm.tail_bound[0])}
    series = {}
    if c.theorem1 is not None:
        series["L_over_log2"] = _theorem1_series(c.theorem1)
    samples = c.definition.details.get("samples", [])
    series["window_best_log_abs"] = [(s["x"], s["best_log_abs"][-1]) for s in samples]
    if c.cond2 is not None:
        for A, row in zip(c.cond2.A_grid, c.cond2.values):
            series[f"cond2_A{A:g}"] = [(x, float(v)) for x, v in zip(c.cond2.x_grid, row)]
    return res, series


def task_diagnostics(cfg):
    seq = _sequence(cfg)
    T = float(cfg.option("lemma3_T"))
    l3 = [lemma3_diagnostic(seq, float(x), T).to_dict() for x in np.atleast_1d(cfg.option("lemma3_x"))]
    x4 = float(cfg.option("lemma4_x"))
    l4 = [lemma4_diagnostic(seq, x4, float(A)).to_dict() for A in np.atleast_1d(cfg.option("lemma4_A"))]
    ratios = [d["ratio"] for d in l4]
    res = {"lemma3": l3, "lemma4": l4, "lemma4_ratio_spread": max(ratios) / min(ratios) if min(ratios) > 0 else None}
    series = {"lemma3_ratio": [(d["params"]["x"], d["ratio"]) for d in l3],
              "lemma4_ratio": [(d["params"]["A"], d["ratio"]) for d in l4]}
    return res, series


_RUNNERS = {
    "eval": task_eval,
    "counting": task_counting,
    "favorov-check": task_favorov_check,
    "poisson-check": task_poisson_check,
    "classify": task_classify,
    "diagnostics": task_diagnostics,
}


# ---------------------------------------------------------------- output

def _plain(obj):
    """JSON-safe copy: numpy scalars unwrapped, non-finite floats as strings."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def run(cfg):
    """Execute one configured task; returns ``(report, series)``."""
    result, series = _RUNNERS[cfg.task](cfg)
    report = {"tool": "slowdec", "version": __version__, "task": cfg.task, "config": cfg.to_dict(),
              "result": result}
    return _plain(report), _plain(series)


def render(report, series, fmt):
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["series", "x", "y"])
    for name in sorted(series):
        for x, y in series[name]:
            w.writerow([name, repr(x) if isinstance(x, float) else x, repr(y) if isinstance(y, float) else y])
    return buf.getvalue()


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="YAML/JSON config file (or a bare sequence spec)")
    common.add_argument("--radius", type=float, help="materialization radius")
    common.add_argument("--out", help="report path (default: stdout)")
    common.add_argument("--format", choices=FORMATS, help="json report or csv series")
    common.add_argument("--seed", type=int, help="seed for randomized checks")
    common.add_argument("--a-grid", help="comma list of candidate constants a")
    common.add_argument("--x-grid", help="comma list of probe points x")
    common.add_argument("--A-grid", dest="A_grid", help="comma list of offsets A")
    common.add_argument("--t-grid", help="comma list of counting arguments t")
    common.add_argument("--points", help="comma list of evaluation points, e.g. 0.5,10+5j")
    parser = argparse.ArgumentParser(prog="slowdec", description="Slow-decrease diagnostics for canonical products.")
    parser.add_argument("--version", action="version", version=f"slowdec {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", parents=[common], help="run the task named in the config (or --task)")
    run_p.add_argument("--task", choices=TASKS)
    for t in TASKS:
        sub.add_parser(t, parents=[common], help=f"run the {t} task")
    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    task = getattr(args, "task", None) if args.command == "run" else args.command
    try:
        data = load_config_file(args.spec) if args.spec else {}
        grids = {}
        for key in ("a_grid", "x_grid", "A_grid", "t_grid"):
            raw = getattr(args, key)
            if raw:
                grids[key] = _parse_list(raw, f"--{key.replace('_', '-')}")
        points = None
        if args.points:
            points = [[c.real, c.imag] for c in
                      (_parse_point(p.strip(), "--points") for p in args.points.split(",") if p.strip())]
        cfg = build_config(data, task, args.radius, args.out, args.format, args.seed, grids, points)
        report, series = run(cfg)
    except ConfigError as exc:
        print(f"slowdec: config error: {exc}", file=sys.stderr)
        return 2
    except RadiusError as exc:
        print(f"slowdec: radius insufficient: {exc}", file=sys.stderr)
        return 3
    except SlowdecError as exc:
        print(f"slowdec: error: {exc}", file=sys.stderr)
        return 1
    text = render(report, series, cfg.format)
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
