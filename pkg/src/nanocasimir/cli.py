"""``casimir`` command-line front end: single points, sweeps, DOS tables and figure data."""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .dos import (UNITY, dos_difference, figure4_csv, fmt, normalization_name,
                  sample_dos_figure4)
from .energy import (EV_PER_NM_TO_PN, QuadratureConfig, casimir_energy, casimir_force)
from .errors import BreakdownError, CasimirError
from .materials import (Environment, Material, retardation_length, sphere_from_name,
                        substrate_from_name)
from .spectral import Geometry

EXIT_OK, EXIT_INVALID, EXIT_BREAKDOWN = 0, 2, 3

SWEEP_HEADER = ("x", "U_eV", "F_eV_per_nm", "F_pN", "valid")

# key -> (type, default); None default means "required somewhere"
OPTIONS = {
    "sphere": (str, "K"),
    "substrate": (str, "perfect"),
    "ambient-eps": (float, 1.0),
    "radius-nm": (float, 10.0),
    "z-nm": (float, None),
    "z-over-r": (float, None),
    "quad-tol": (float, 1e-8),
    "omega-max": (float, 50.0),
    "normalization": (str, "unity"),
    "force-method": (str, "fd"),
    "out": (str, "-"),
    # sweep
    "var": (str, None),
    "from": (float, None),
    "to": (float, None),
    "points": (int, None),
    "spacing": (str, "linear"),
    # dos
    "omega-min-ev": (float, 0.0),
    "omega-max-ev": (float, None),
    "omega-points": (int, 2000),
}


class ConfigError(CasimirError):
    def __init__(self, key, message):
        super().__init__(f"invalid value for '{key}': {message}")
        self.key = key


def _canonical(key):
    return key.strip().lstrip("-").lower().replace("_", "-")


def read_config_file(path):
    """Parse a flat ``key=value`` file; ``#`` starts a comment."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}", "expected key=value")
            key, value = line.split("=", 1)
            key = _canonical(key)
            if key not in OPTIONS:
                raise ConfigError(key, f"unknown key in {path}")
            values[key] = value.strip()
    return values


def _convert(key, value):
    kind = OPTIONS[key][0]
    if isinstance(value, kind) and not isinstance(value, bool):
        return value
    try:
        return kind(value)
    except (TypeError, ValueError):
        raise ConfigError(key, f"cannot interpret {value!r} as {kind.__name__}") from None


def resolve(args):
    """Merge defaults < config file (``--config`` or ``CASIMIR_CONFIG``) < flags."""
    cfg = {k: default for k, (_, default) in OPTIONS.items()}
    path = getattr(args, "config", None) or os.environ.get("CASIMIR_CONFIG")
    if path:
        try:
            from_file = read_config_file(path)
        except OSError as exc:
            raise ConfigError("config", str(exc)) from None
        # a file may fix z in either form; a flag for the other form overrides it
        for key, value in from_file.items():
            cfg[key] = _convert(key, value)
    flags = {_canonical(k): v for k, v in vars(args).items() if v is not None}
    if "z-nm" in flags and "z-over-r" not in flags:
        cfg["z-over-r"] = None
    if "z-over-r" in flags and "z-nm" not in flags:
        cfg["z-nm"] = None
    for key, value in flags.items():
        if key in OPTIONS:
            cfg[key] = _convert(key, value)
    return cfg


def _environment(cfg):
    try:
        sphere = sphere_from_name(cfg["sphere"])
    except CasimirError as exc:
        raise ConfigError("sphere", str(exc)) from None
    try:
        substrate = substrate_from_name(cfg["substrate"])
    except CasimirError as exc:
        raise ConfigError("substrate", str(exc)) from None
    if not cfg["ambient-eps"] > 0:
        raise ConfigError("ambient-eps", "must be > 0")
    return Environment(sphere, substrate, Material.constant(cfg["ambient-eps"]))


def _quad(cfg):
    if not 0 < cfg["quad-tol"] <= 1e-2:
        raise ConfigError("quad-tol", "must be in (0, 1e-2]")
    if not cfg["omega-max"] >= 10:
        raise ConfigError("omega-max", "must be >= 10 (units of omega_p)")
    return QuadratureConfig(rel_tol=cfg["quad-tol"], omega_max=cfg["omega-max"])


def _check_common(cfg):
    try:
        normalization_name(cfg["normalization"])
    except CasimirError:
        raise ConfigError("normalization", "must be 'unity' or 'verbatim'") from None
    if cfg["force-method"] not in ("fd", "analytic", "finite_difference", "semi_analytic"):
        raise ConfigError("force-method", "must be 'fd' or 'analytic'")


def _radius(cfg):
    R = cfg["radius-nm"]
    if R is None or not R > 0:
        raise ConfigError("radius-nm", "must be > 0")
    return R


def _gap(cfg, R):
    z, ratio = cfg["z-nm"], cfg["z-over-r"]
    if z is not None and ratio is not None:
        raise ConfigError("z-nm", "give either z-nm or z-over-r, not both")
    if z is None and ratio is None:
        raise ConfigError("z-nm", "one of z-nm or z-over-r is required")
    if z is not None:
        if not z >= 0:
            raise ConfigError("z-nm", "must be >= 0")
        return z
    if not ratio >= 0:
        raise ConfigError("z-over-r", "must be >= 0")
    return ratio * R


def _warn_retardation(env, lengths):
    limit = retardation_length(env.sphere)
    if max(lengths) > limit:
        print(f"warning: R or z exceeds c/omega_p = {limit:.4g} nm; "
              "retardation is neglected and results may be inaccurate", file=sys.stderr)


def evaluate_point(env, R, gap, quad, normalization, force_method):
    """Energy and force at one geometry; the shared kernel of ``eval`` and ``sweep``."""
    geom = Geometry(R, gap)
    energy = casimir_energy(env, geom, quad, normalization)
    out = {"d_over_R": geom.d_over_R}
    if energy.breakdown:
        out.update(valid=False, U_eV=None, U_error=None, F_eV_per_nm=None, F_pN=None,
                   depolarization_factors=[float(x) for x in energy.diagnostics["factors"]],
                   message=energy.diagnostics["message"])
        return out
    force = casimir_force(env, geom, quad, force_method, normalization)
    out.update(valid=True, U_eV=energy.energy, U_error=energy.estimated_error,
               F_eV_per_nm=force.force, F_pN=force.force * EV_PER_NM_TO_PN,
               one_sided=bool(force.diagnostics.get("one_sided", False)))
    return out


def _rounded(x):
    return float(fmt(x))


def _emit(text, target):
    if target in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(target).write_text(text)


def cmd_eval(cfg):
    env = _environment(cfg)
    quad = _quad(cfg)
    _check_common(cfg)
    R = _radius(cfg)
    gap = _gap(cfg, R)
    _warn_retardation(env, (R, gap))
    point = evaluate_point(env, R, gap, quad, cfg["normalization"], cfg["force-method"])
    outputs = {k: (_rounded(v) if isinstance(v, float) else v) for k, v in point.items()}
    record = {
        "tool": "nanocasimir",
        "version": __version__,
        "inputs": {
            "sphere": cfg["sphere"],
            "substrate": cfg["substrate"],
            "ambient_eps": cfg["ambient-eps"],
            "radius_nm": R,
            "z_nm": gap,
            "z_over_R": gap / R,
            "quadrature": {"rel_tol": quad.rel_tol, "omega_max": quad.omega_max,
                           "tail_correction": quad.tail_correction,
                           "max_subdivisions": quad.max_subdivisions},
            "normalization": normalization_name(cfg["normalization"]),
            "force_method": cfg["force-method"],
        },
        "outputs": outputs,
    }
    if cfg.get("timestamp"):
        record["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    _emit(json.dumps(record, indent=2) + "\n", cfg["out"])
    if not point["valid"]:
        print(point["message"], file=sys.stderr)
        return EXIT_BREAKDOWN
    return EXIT_OK


def sweep_grid(cfg):
    var = cfg["var"]
    if var is None:
        raise ConfigError("var", "required (z, z_over_R or R)")
    var = {"z": "z", "z_over_r": "z_over_R", "z-over-r": "z_over_R", "r": "R"}.get(var.lower())
    if var is None:
        raise ConfigError("var", "must be one of z, z_over_R, R")
    lo, hi, points = cfg["from"], cfg["to"], cfg["points"]
    if lo is None:
        raise ConfigError("from", "required")
    if hi is None:
        raise ConfigError("to", "required")
    if points is None or points < 2:
        raise ConfigError("points", "must be an integer >= 2")
    if not lo < hi:
        raise ConfigError("from", "must be < to")
    spacing = cfg["spacing"]
    if spacing == "linear":
        xs = np.linspace(lo, hi, points)
    elif spacing == "log":
        if not lo > 0:
            raise ConfigError("from", "log spacing requires from > 0")
        xs = np.geomspace(lo, hi, points)
    else:
        raise ConfigError("spacing", "must be 'linear' or 'log'")
    # grid points are snapped to their printed form so every row can be replayed exactly
    return var, [_rounded(x) for x in xs]


def _sweep_geometry(cfg, var, x):
    if var == "R":
        if not x > 0:
            raise ConfigError("from", "radius values must be > 0")
        return x, _gap(cfg, x)
    R = _radius(cfg)
    if var == "z":
        if not x >= 0:
            raise ConfigError("from", "z values must be >= 0")
        return R, x
    if not x >= 0:
        raise ConfigError("from", "z_over_R values must be >= 0")
    return R, x * R


def _row(x, point):
    if not point["valid"]:
        return [fmt(x), "", "", "", "false"]
    return [fmt(x), fmt(point["U_eV"]), fmt(point["F_eV_per_nm"]), fmt(point["F_pN"]), "true"]


def sweep_rows(env, cfg, var, xs, quad):
    geoms = [_sweep_geometry(cfg, var, x) for x in xs]
    _warn_retardation(env, [v for g in geoms for v in g])
    for x, (R, gap) in zip(xs, geoms):
        yield _row(x, evaluate_point(env, R, gap, quad, cfg["normalization"], cfg["force-method"]))


def _csv(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def cmd_sweep(cfg):
    env = _environment(cfg)
    quad = _quad(cfg)
    _check_common(cfg)
    var, xs = sweep_grid(cfg)
    if var != "R":
        _radius(cfg)
    else:
        if cfg["z-nm"] is None and cfg["z-over-r"] is None:
            raise ConfigError("z-over-r", "an R sweep needs a fixed z-nm or z-over-r")
    # validate every geometry before computing anything
    for x in xs:
        _sweep_geometry(cfg, var, x)
    _emit(_csv(SWEEP_HEADER, sweep_rows(env, cfg, var, xs, quad)), cfg["out"])
    return EXIT_OK


def cmd_dos(cfg):
    env = _environment(cfg)
    _check_common(cfg)
    if env.sphere.kind != "drude":
        raise ConfigError("sphere", "the density of states needs a Drude sphere")
    R = _radius(cfg)
    gap = _gap(cfg, R)
    wmax = cfg["omega-max-ev"]
    if wmax is None:
        wmax = 2.0 * env.sphere.plasma_energy
    wmin = cfg["omega-min-ev"]
    if not wmax > 0:
        raise ConfigError("omega-max-ev", "must be > 0")
    if not 0 <= wmin < wmax:
        raise ConfigError("omega-min-ev", "must satisfy 0 <= omega-min-ev < omega-max-ev")
    if cfg["omega-points"] < 2:
        raise ConfigError("omega-points", "must be >= 2")
    grid = np.linspace(wmin, wmax, cfg["omega-points"])
    try:
        prof = dos_difference(env, Geometry(R, gap), grid, normalization=cfg["normalization"])
    except BreakdownError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_BREAKDOWN
    _emit(prof.to_csv(), cfg["out"])
    return EXIT_OK


# figure definitions: sphere/substrate panels and sweep axes
FIG_SPHERES = ("K", "Au")
FIG1_SUBSTRATES = ("sapphire", "tio2", "perfect")
FIG2_RADII = (10.0, 100.0, 1000.0)
FIG_Z_NM = [float(z) for z in range(0, 41)]
FIG1_Z_OVER_R = [round(0.1 * i, 10) for i in range(41)]


def figure_files(n, quad=None, normalization=UNITY, force_method="fd"):
    """Map file name -> CSV text for figure `n`."""
    quad = quad or QuadratureConfig()
    cfg = {"normalization": normalization, "force-method": force_method}

    def env(sphere, substrate):
        return Environment(sphere_from_name(sphere), substrate_from_name(substrate))

    def rows(e, R, gaps, xs):
        for x, gap in zip(xs, gaps):
            yield _row(x, evaluate_point(e, R, gap, quad, cfg["normalization"], cfg["force-method"]))

    files = {}
    if n == 1:
        for s in FIG_SPHERES:
            for p in FIG1_SUBSTRATES:
                R = 10.0
                gaps = [x * R for x in FIG1_Z_OVER_R]
                files[f"fig1_{s}_{p}.csv"] = _csv(SWEEP_HEADER, rows(env(s, p), R, gaps, FIG1_Z_OVER_R))
    elif n == 2:
        for s in FIG_SPHERES:
            body = []
            for R in FIG2_RADII:
                body += [[fmt(R)] + r for r in rows(env(s, "perfect"), R, FIG_Z_NM, FIG_Z_NM)]
            files[f"fig2_{s}_perfect.csv"] = _csv(("R_nm",) + SWEEP_HEADER, body)
    elif n == 3:
        for s in FIG_SPHERES:
            for p in ("sapphire", "perfect"):
                files[f"fig3_{s}_{p}.csv"] = _csv(SWEEP_HEADER, rows(env(s, p), 10.0, FIG_Z_NM, FIG_Z_NM))
    elif n == 4:
        for s in FIG_SPHERES:
            for p in ("sapphire", "perfect"):
                samples = sample_dos_figure4(env(s, p), normalization=normalization)
                files[f"fig4_{s}_{p}.csv"] = figure4_csv(samples)
    else:
        raise ConfigError("figure", "must be 1, 2, 3 or 4")
    return files


def cmd_figure(cfg, n):
    _check_common(cfg)
    files = figure_files(n, _quad(cfg), cfg["normalization"], cfg["force-method"])
    if n in (2, 3):
        print(f"warning: figure {n} includes R or z above c/omega_p for some panels; "
              "retardation is neglected", file=sys.stderr)
    outdir = Path("." if cfg["out"] in (None, "-") else cfg["out"])
    outdir.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (outdir / name).write_text(text)
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value file (default: $CASIMIR_CONFIG)")
    common.add_argument("--sphere", help="K, Au or drude:<wp_eV>,<gamma>")
    common.add_argument("--substrate", help="tio2, sapphire, perfect, vacuum or eps:<value>")
    common.add_argument("--ambient-eps", type=float)
    common.add_argument("--radius-nm", type=float)
    zgroup = common.add_mutually_exclusive_group()
    zgroup.add_argument("--z-nm", type=float)
    zgroup.add_argument("--z-over-r", type=float)
    common.add_argument("--quad-tol", type=float)
    common.add_argument("--omega-max", type=float, help="integration cutoff in units of omega_p")
    common.add_argument("--normalization", choices=("unity", "verbatim"))
    common.add_argument("--force-method", choices=("fd", "analytic"))
    common.add_argument("--out", help="output file, '-' for stdout (figure: output directory)")

    parser = argparse.ArgumentParser(prog="casimir", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", parents=[common], help="energy and force at one geometry (JSON)")
    p_eval.add_argument("--timestamp", action="store_true", default=None,
                        help="add a wall-clock timestamp to the record (breaks byte-reproducibility)")

    p_sweep = sub.add_parser("sweep", parents=[common], help="energy and force over a 1-D grid (CSV)")
    p_sweep.add_argument("--var", help="z, z_over_R or R")
    p_sweep.add_argument("--from", dest="from", type=float)
    p_sweep.add_argument("--to", type=float)
    p_sweep.add_argument("--points", type=int)
    p_sweep.add_argument("--spacing", choices=("linear", "log"))

    p_dos = sub.add_parser("dos", parents=[common], help="density-of-states profile (CSV)")
    p_dos.add_argument("--omega-min-eV", dest="omega_min_ev", type=float)
    p_dos.add_argument("--omega-max-eV", dest="omega_max_ev", type=float)
    p_dos.add_argument("--omega-points", type=int)

    p_fig = sub.add_parser("figure", parents=[common], help="write the CSV data of figure N")
    p_fig.add_argument("n", type=int)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "figure":
            n = args.n
            del args.n
            cfg = resolve(args)
            if n not in (1, 2, 3, 4):
                raise ConfigError("figure", "must be 1, 2, 3 or 4")
            return cmd_figure(cfg, n)
        timestamp = getattr(args, "timestamp", None)
        if hasattr(args, "timestamp"):
            del args.timestamp
        cfg = resolve(args)
        cfg["timestamp"] = timestamp
        return {"eval": cmd_eval, "sweep": cmd_sweep, "dos": cmd_dos}[args.command](cfg)
    except ConfigError as exc:
        print(f"casimir: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except BreakdownError as exc:
        print(f"casimir: {exc}", file=sys.stderr)
        return EXIT_BREAKDOWN
    except CasimirError as exc:
        print(f"casimir: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head)
        sys.stdout = open(os.devnull, "w")
        return 0


if __name__ == "__main__":
    sys.exit(main())
