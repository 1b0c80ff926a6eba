"""Command line front end.

Subcommands ``gen``, ``density``, ``psf-check``, ``bounds``, ``frame``,
``duality`` and ``sweep`` read one config (see :mod:`cutproject.config`) and
write their results into ``--out``.  Exit status: 0 on success, 1 on a
config or validation error, 2 when a numerical contract is violated.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from pathlib import Path
from typing import Optional

import numpy as np

from . import bounds as bd
from .combs import psf_residual
from .config import DEFAULTS, RunConfig, load_config, parse_config
from .density import VanHoveSeq, banach_density, model_set_provider, smooth_density
from .errors import ConfigError, CutProjectError, InvalidSmoothing, NoTailBound, QuadratureError, TooLarge
from .frames import duality_experiment, gram_trace, sampling_trace
from .intervals import IntervalSet
from .scheme import enumerate_strip
from .sweep import run_sweep, standard_configs
from .weights import Indicator

SUBCOMMANDS = ("gen", "density", "psf-check", "bounds", "frame", "duality", "sweep")


class ContractViolation(Exception):
    """A computed result breaks a numerical guarantee; exit status 2."""


# ---------------------------------------------------------------------------
# output


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        if obj.imag == 0:
            return _plain(float(obj.real))
        return {"re": _plain(float(obj.real)), "im": _plain(float(obj.imag))}
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    if isinstance(obj, IntervalSet):
        return obj.to_json()
    return obj


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path: Path, payload) -> Path:
    _atomic_write(path, json.dumps(_plain(payload), indent=2, sort_keys=True) + "\n")
    return path


def write_csv(path: Path, header, rows) -> Path:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in r])
    _atomic_write(path, buf.getvalue())
    return path


def _trace_rows(name, trace):
    for e in trace.levels:
        yield (name, e.truncation, e.n_points, e.lam_min, e.lam_max)


TRACE_HEADER = ("trace", "truncation", "n_points", "lam_min", "lam_max")


# ---------------------------------------------------------------------------
# subcommands; each returns the list of files written


def cmd_gen(cfg: RunConfig, out: Path, fmt: str):
    R = float(cfg.radius)
    pts = enumerate_strip(cfg.scheme, cfg.window, (-R, R))
    if fmt == "json":
        payload = {"window": cfg.window, "radius": R, "n_points": len(pts),
                   "points": [{"x": p.g_coord, "star": p.h_coord, "n": p.int_coords[0],
                               "m": p.int_coords[1]} for p in pts.points]}
        return [write_json(out / "points.json", payload)]
    rows = zip(pts.x, pts.star, pts.n.tolist(), pts.m.tolist())
    return [write_csv(out / "points.csv", ("x", "star", "n", "m"), rows)]


def cmd_density(cfg: RunConfig, out: Path, fmt: str):
    vh = cfg.van_hove
    seq = VanHoveSeq.geometric(vh["T0"], int(vh["levels"]), vh["ratio"], vh["shift_span"], int(vh["n_shifts"]))
    predicted = cfg.scheme.density * float(cfg.window.measure)
    rep = banach_density(model_set_provider(cfg.scheme, cfg.window), seq, predicted)
    files = [write_csv(out / "density.csv",
                       ("n", "T_n", "inf_count", "sup_count", "lower_est", "upper_est"),
                       ((t["n"], t["T"], t["inf_count"], t["sup_count"], t["lower_est"], t["upper_est"])
                        for t in rep.sequence_tail))]
    summary = rep.to_dict()
    summary.pop("trace")
    summary["spread"] = rep.spread
    fj = cfg.fejer
    h = Indicator(cfg.window)
    shifts = np.linspace(0.0, fj["shift_span"], int(fj["n_shifts"]), endpoint=False)
    smooth = []
    for n in fj["ns"]:
        vals = [smooth_density(cfg.scheme, h, int(n), s0) for s0 in shifts]
        smooth.append({"n": int(n), "max_error": float(np.max(np.abs(np.array(vals) - predicted))),
                       "mean": float(np.mean(vals))})
    summary["smooth"] = smooth
    files.append(write_json(out / "density.json", summary))
    return files


def cmd_psf(cfg: RunConfig, out: Path, fmt: str):
    try:
        h, g = cfg.weights["h"], cfg.weights["g"]
    except KeyError as exc:
        raise ConfigError(f"psf-check needs 'config.weights.{exc.args[0]}'") from None
    res = psf_residual(cfg.scheme, h, g, float(cfg.radius), cfg.tolerances["tail_target"])
    path = write_json(out / "psf.json", res.to_dict())
    if not res.ok:
        raise ContractViolation(f"PSF residual {res.residual:.3e} exceeds allowance {res.allowance:.3e}")
    return [path]


def cmd_bounds(cfg: RunConfig, out: Path, fmt: str):
    s, W, K = cfg.scheme, cfg.window, cfg.spectrum
    R = float(cfg.radius)
    u, v = bd.default_smoothing(s, W, K)
    u = cfg.smoothing["u"] or u
    v = cfg.smoothing["v"] or v
    certs = {"sampling_upper": bd.sampling_upper(s, W, K, u, R)}
    for name, fn in (("sampling_lower", lambda: bd.sampling_lower(s, K, W, u, R)),
                     ("interp_lower", lambda: bd.interp_lower(s, W, K, v, R))):
        try:
            certs[name] = fn()
        except InvalidSmoothing as exc:
            certs[name] = {"error": str(exc)}
    T = float(max(cfg.truncations))
    certs["interp_upper"] = bd.interp_upper(enumerate_strip(s, W, (-T, T)), K)
    payload = {k: (c.to_dict() if isinstance(c, bd.BoundCertificate) else c) for k, c in certs.items()}
    return [write_json(out / "bounds.json", payload)]


def cmd_frame(cfg: RunConfig, out: Path, fmt: str):
    provider = model_set_provider(cfg.scheme, cfg.window)
    st = sampling_trace(provider, cfg.spectrum, cfg.truncations)
    gt = gram_trace(provider, cfg.spectrum, cfg.truncations)
    files = [write_json(out / "frame.json", {"sampling": st.to_dict(), "gram": gt.to_dict(),
                                             "monotone_gram": gt.monotone()})]
    if fmt == "csv":
        rows = list(_trace_rows("sampling", st)) + list(_trace_rows("gram", gt))
        files.append(write_csv(out / "frame.csv", TRACE_HEADER, rows))
    if not gt.monotone():
        raise ContractViolation("Gram traces are not monotone in the truncation")
    return files


def cmd_duality(cfg: RunConfig, out: Path, fmt: str):
    tol = cfg.tolerances
    rep = duality_experiment(cfg.scheme, cfg.window, cfg.spectrum, cfg.truncations,
                             tol["threshold_frac"], tol["critical_band"])
    files = [write_json(out / "duality.json", rep.to_dict())]
    if fmt == "csv":
        rows = []
        for name in ("sampling_W", "gram_W", "gram_K", "sampling_K"):
            rows += list(_trace_rows(name, getattr(rep, name)))
        files.append(write_csv(out / "duality.csv", TRACE_HEADER, rows))
    return files


def cmd_sweep(cfg: RunConfig, out: Path, fmt: str):
    tol = cfg.tolerances
    configs = standard_configs(int(cfg.sweep["n_configs"]), int(cfg.seed))
    results = run_sweep(configs, radius=float(cfg.radius), threshold_frac=tol["threshold_frac"],
                        critical_band=tol["critical_band"], landau_tol=tol["landau_tol"])
    summary = {"n_configs": len(results), "sound": all(r.sound for r in results),
               "landau": all(r.landau_ok for r in results),
               "positive_lower": sum(c.positive for r in results for k, c in r.certificates.items()
                                     if k.endswith("lower"))}
    files = [write_json(out / "sweep.json", {"summary": summary, "results": [r.to_dict() for r in results]})]
    if fmt == "csv":
        rows = []
        for r in results:
            for k, c in sorted(r.certificates.items()):
                rows.append((r.config.label, k, c.value, c.positive, r.soundness.get(k, "")))
        files.append(write_csv(out / "sweep.csv", ("config", "certificate", "value", "positive", "sound"), rows))
    if not (summary["sound"] and summary["landau"]):
        raise ContractViolation("a certificate or Landau inequality failed in the sweep")
    return files


COMMANDS = {"gen": cmd_gen, "density": cmd_density, "psf-check": cmd_psf, "bounds": cmd_bounds,
            "frame": cmd_frame, "duality": cmd_duality, "sweep": cmd_sweep}

DEFAULT_FORMAT = {"gen": "csv"}


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="YAML or JSON run config (defaults below)")
    common.add_argument("--out", metavar="DIR", help="output directory (default: config output.dir)")
    common.add_argument("--radius", type=float, metavar="R", help="truncation radius for lattice sums")
    common.add_argument("--seed", type=int, metavar="N", help="seed for randomised sweeps")
    common.add_argument("--format", choices=("json", "csv"), help="output format")
    defaults = json.dumps(DEFAULTS, indent=2)
    p = argparse.ArgumentParser(prog="cutproject", description=__doc__,
                                epilog="config defaults:\n" + defaults,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)
    helps = {"gen": "enumerate model set points", "density": "Banach and smooth densities",
             "psf-check": "both sides of Poisson summation", "bounds": "sampling/interpolation certificates",
             "frame": "finite-truncation frame constants", "duality": "sampling vs interpolation duality",
             "sweep": "certificate soundness and Landau sweep"}
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name], epilog="config defaults:\n" + defaults,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    return p


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {}
    if args.radius is not None:
        overrides["radius"] = args.radius
    if args.seed is not None:
        overrides["seed"] = args.seed
    try:
        cfg = load_config(args.config, overrides) if args.config else parse_config({}, overrides)
        fmt = args.format or cfg.output["format"] or DEFAULT_FORMAT.get(args.command, "json")
        out = Path(args.out or cfg.output["dir"])
        files = COMMANDS[args.command](cfg, out, fmt)
    except ContractViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NoTailBound, QuadratureError, TooLarge) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, CutProjectError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for f in files:
        print(f)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
