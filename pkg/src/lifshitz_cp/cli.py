"""Command-line front end (``lifshitz-cp``).

Subcommands: energy, entropy, sweep, audit, coeff. Parameters come from
``--config run.json`` and/or flags (flags win). Separations are given in
micrometres, temperatures in kelvin. Output is CSV or JSON with a header
block recording the resolved configuration, library version and quadrature
settings; identical inputs give byte-identical files.

Exit codes: 0 ok, 2 configuration error, 3 convergence failure, 4 I/O error.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
import tempfile

import jsonschema
import numpy as np

from . import __version__, kernels
from .audit import DEFAULT_TAUS, DEFAULT_THETA, REPORT_SCHEMA, AuditConfig, run_audit
from .errors import ConfigError, ConvergenceError
from .lifshitz import EvaluationPoint, QuadratureSpec, entropy, free_energy
from .materials import load_atom, load_wall
from .reflection import FrequencyPoint, ScreeningContext, modified_te, modified_tm, standard_pair
from .response import permittivities, screening_kappa, static_permittivity

EXIT_OK, EXIT_CONFIG, EXIT_CONVERGENCE, EXIT_IO = 0, 2, 3, 4
UM = 1e-4  # cm

# parameter name -> (json schema, default); None default means required
_COMMON = {
    "atom": ({"type": "string"}, "rb"),
    "tol": ({"type": "number", "exclusiveMinimum": 0, "maximum": 1e-4}, 1e-10),
    "lmax": ({"type": ["integer", "null"], "minimum": 0}, None),
    "format": ({"enum": ["csv", "json"]}, "csv"),
}
_PARAMS = {
    "energy": {"material": ({"type": "string"}, None),
               "a_um": ({"type": "number", "exclusiveMinimum": 0}, None),
               "T": ({"type": "number", "exclusiveMinimum": 0}, None)},
    "sweep": {"models": ({"type": "array", "items": {"type": "string"}, "minItems": 1}, None),
              "axis": ({"enum": ["a", "T"]}, None),
              "start": ({"type": "number", "exclusiveMinimum": 0}, None),
              "stop": ({"type": "number", "exclusiveMinimum": 0}, None),
              "points": ({"type": "integer", "minimum": 2}, None),
              "a_um": ({"type": "number", "exclusiveMinimum": 0}, 1.0),
              "T": ({"type": "number", "exclusiveMinimum": 0}, 300.0),
              "log": ({"type": "boolean"}, False)},
    "audit": {"material": ({"type": "string"}, None),
              "a_um": ({"type": "number", "exclusiveMinimum": 0}, 1.0),
              "taus": ({"type": "array", "items": {"type": "number"}, "minItems": 2},
                       list(DEFAULT_TAUS)),
              "theta": ({"type": "number"}, DEFAULT_THETA),
              "fit_powers": ({"type": ["array", "null"], "items": {"type": "number"}}, None)},
    "coeff": {"material": ({"type": "string"}, None),
              "a_um": ({"type": "number", "exclusiveMinimum": 0}, 1.0),
              "T": ({"type": "number", "exclusiveMinimum": 0}, 300.0),
              "l": ({"type": "integer", "minimum": 0}, 1),
              "y_max": ({"type": "number", "exclusiveMinimum": 0}, 10.0),
              "points": ({"type": "integer", "minimum": 2}, 11)},
}
_PARAMS["entropy"] = dict(_PARAMS["energy"])


def _schema(command: str) -> dict:
    props = {k: v[0] for k, v in {**_COMMON, **_PARAMS[command]}.items()}
    return {"type": "object", "additionalProperties": False, "properties": props}


def _resolve(command: str, args) -> dict:
    """Merge defaults, the config file and explicit flags; validate strictly."""
    params = {**_COMMON, **_PARAMS[command]}
    cfg = {}
    if args.config is not None:
        try:
            with open(args.config, encoding="utf-8") as fh:
                cfg = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{args.config}: not valid JSON ({exc})") from None
        if not isinstance(cfg, dict):
            raise ConfigError(f"{args.config}: top level must be an object")
    for key in params:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    try:
        jsonschema.validate(cfg, _schema(command))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"invalid run configuration at {where}: {exc.message}") from None
    out = {}
    for key, (_, default) in params.items():
        if key in cfg:
            out[key] = cfg[key]
        elif default is None and key != "lmax" and key != "fit_powers":
            raise ConfigError(f"missing required parameter {key!r}")
        else:
            out[key] = default
    return out


def _quadrature(cfg) -> QuadratureSpec:
    try:
        return QuadratureSpec(tol=cfg["tol"], lmax=cfg["lmax"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _header(command, cfg, q: QuadratureSpec) -> dict:
    return {
        "program": "lifshitz-cp",
        "version": __version__,
        "command": command,
        "config": cfg,
        "quadrature": {"tol": q.tol, "lmax": q.lmax, "zeta_max": q.zeta_max,
                       "node_budget": q.node_budget, "backend": kernels.BACKEND},
    }


# ---------------------------------------------------------------------------
# commands; each returns (header, columns, rows) or (header, json payload)


def _energy_like(command, cfg):
    q = _quadrature(cfg)
    wall = load_wall(cfg["material"])
    atom = load_atom(cfg["atom"])
    pt = EvaluationPoint(cfg["a_um"] * UM, float(cfg["T"]))
    if command == "energy":
        res = free_energy(wall, atom, pt, q)
        cols = ["material", "a_um", "T_K", "tau", "F_erg", "l_max",
                "quadrature_error_erg", "tail_bound_erg"]
        d = res.diagnostics
        row = [cfg["material"], cfg["a_um"], pt.T, pt.tau, res.free_energy, d["l_max"],
               d["quadrature_error"], d["tail_bound"]]
    else:
        res = entropy(wall, atom, pt, q)
        d = res.diagnostics
        cols = ["material", "a_um", "T_K", "tau", "F_erg", "S_erg_per_K", "l_max",
                "step_K", "derivative_error_erg_per_K"]
        row = [cfg["material"], cfg["a_um"], pt.T, pt.tau, res.free_energy, res.entropy,
               d["l_max"], d["step"], d["derivative_error"]]
    return _header(command, cfg, q), cols, [row]


def _sweep(cfg):
    q = _quadrature(cfg)
    if cfg["stop"] <= cfg["start"]:
        raise ConfigError("sweep range must satisfy start < stop")
    atom = load_atom(cfg["atom"])
    walls = [(name, load_wall(name)) for name in cfg["models"]]
    grid = (np.geomspace if cfg["log"] else np.linspace)(cfg["start"], cfg["stop"], cfg["points"])
    axis = "a_um" if cfg["axis"] == "a" else "T_K"
    cols = [axis]
    for name, _ in walls:
        cols += [f"F_{name}", f"S_{name}"]
    rows = []
    for v in grid:
        a, T = (v * UM, cfg["T"]) if cfg["axis"] == "a" else (cfg["a_um"] * UM, v)
        row = [float(v)]
        for _, wall in walls:
            res = entropy(wall, atom, EvaluationPoint(a, float(T)), q)
            row += [res.free_energy, res.entropy]
        rows.append(row)
    return _header("sweep", cfg, q), cols, rows


def _audit(cfg):
    q = _quadrature(cfg)
    wall = load_wall(cfg["material"])
    atom = load_atom(cfg["atom"])
    try:
        acfg = AuditConfig(wall, atom, cfg["a_um"] * UM, tuple(cfg["taus"]), cfg["theta"],
                           None if cfg["fit_powers"] is None else tuple(cfg["fit_powers"]), q)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    report = run_audit(acfg)
    return _header("audit", cfg, q), report


def _coeff(cfg):
    q = _quadrature(cfg)
    wall = load_wall(cfg["material"])
    pt = EvaluationPoint(cfg["a_um"] * UM, float(cfg["T"]))
    l = cfg["l"]
    zeta = l * pt.tau
    ys = np.linspace(zeta, zeta + cfg["y_max"], cfg["points"])
    rows = []
    if l == 0:
        eps0 = static_permittivity(wall)
        for y in ys:
            fp = FrequencyPoint(0.0, float(y), 0)
            if wall.kind == "screened":
                kappa_a = 2.0 * pt.a * screening_kappa(wall.screening, pt.T)
                ctx = ScreeningContext(eps0, eps0, kappa_a, eps0)
                r_tm = modified_tm(ctx, fp)
            elif wall.kind == "oscillator_dc" and wall.conductivity.is_conducting:
                r_tm = 1.0
            else:
                r_tm = standard_pair(eps0, fp).r_tm
            rows.append([l, 0.0, float(y), r_tm, 0.0])
    else:
        eps, eps_t = (float(v) for v in permittivities(wall, pt.omega_c * zeta, pt.T))
        for y in ys:
            fp = FrequencyPoint(zeta, float(y), l)
            if wall.kind == "screened":
                kappa_a = 2.0 * pt.a * screening_kappa(wall.screening, pt.T)
                ctx = ScreeningContext(eps, eps_t, kappa_a, wall.core.eps0)
                r_tm, r_te = modified_tm(ctx, fp), modified_te(eps_t, fp)
            else:
                pair = standard_pair(eps_t, fp)
                r_tm, r_te = pair.r_tm, pair.r_te
            rows.append([l, zeta, float(y), r_tm, r_te])
    return _header("coeff", cfg, q), ["l", "zeta", "y", "r_tm", "r_te"], rows


# ---------------------------------------------------------------------------
# output


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.16e}"


def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, np.integer):
        return int(v)
    return v


def _render_table(header, cols, rows, fmt) -> str:
    if fmt == "json":
        doc = {"header": header,
               "columns": cols,
               "rows": [[_jsonable(v) for v in r] for r in rows]}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    for line in json.dumps(header, indent=2, sort_keys=True).splitlines():
        buf.write(f"# {line}\n")
    buf.write(",".join(cols) + "\n")
    for r in rows:
        buf.write(",".join(_fmt(v) for v in r) + "\n")
    return buf.getvalue()


AUDIT_OUTPUT_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["header", "report"],
    "properties": {"header": {"type": "object"}, "report": REPORT_SCHEMA},
}


def _render_audit(header, report, fmt) -> str:
    if fmt == "json":
        doc = {"header": header, "report": report.to_dict()}
        jsonschema.validate(doc, AUDIT_OUTPUT_SCHEMA)
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    cols = ["tau", "T_K", "x", "S_erg_per_K", "S_err_erg_per_K", "fit_residual"]
    rows = [[p.tau, p.T, p.x, p.S, p.S_err, r] for p, r in zip(report.points, report.residuals)]
    head = dict(header)
    head["result"] = {"verdict": report.verdict.value, "s0": report.s0, "s0_err": report.s0_err,
                      "S_ref": report.S_ref, "S_ref_kind": report.S_ref_kind,
                      "coefficients": {f"{p:g}": v for p, (v, _) in
                                       sorted(report.coefficients.items())}}
    return _render_table(head, cols, rows, "csv")


def write_atomic(path: str, text: str) -> None:
    """Write via a temporary file in the target directory and rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".lifshitz-cp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# argument parsing


def _csv_list(text):
    return [s.strip() for s in text.split(",") if s.strip()]


def _float_list(text):
    try:
        return [float(s) for s in _csv_list(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lifshitz-cp",
        description="Casimir-Polder free energy, entropy and Nernst-theorem audits.",
        epilog="Exit codes: 0 ok, 2 configuration error, 3 convergence failure, 4 I/O error. "
               "LIFSHITZ_CP_THREADS caps the kernel thread count.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON run configuration (flags override it)")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", choices=["csv", "json"])
        p.add_argument("--tol", type=float, help="relative quadrature tolerance (default 1e-10)")
        p.add_argument("--lmax", type=int, help="cap on the number of Matsubara terms")
        p.add_argument("--atom", help="atom fixture name or JSON file (default: rb)")

    for name, text in (("energy", "free energy F(a, T)"), ("entropy", "entropy S(a, T)")):
        p = sub.add_parser(name, help=text)
        common(p)
        p.add_argument("material", nargs="?", help="fixture name or material JSON file")
        p.add_argument("--a-um", dest="a_um", type=float, help="separation in micrometres")
        p.add_argument("--T", dest="T", type=float, help="temperature in K")

    p = sub.add_parser("sweep", help="F and S of several models along a or T")
    common(p)
    p.add_argument("--models", type=_csv_list, help="comma-separated fixture names or files")
    p.add_argument("--axis", choices=["a", "T"])
    p.add_argument("--start", type=float)
    p.add_argument("--stop", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--a-um", dest="a_um", type=float, help="fixed separation for --axis T")
    p.add_argument("--T", dest="T", type=float, help="fixed temperature for --axis a")
    p.add_argument("--log", action="store_const", const=True, help="geometric spacing")

    p = sub.add_parser("audit", help="Nernst heat theorem audit")
    common(p)
    p.add_argument("material", nargs="?", help="fixture name or material JSON file")
    p.add_argument("--a-um", dest="a_um", type=float)
    p.add_argument("--taus", type=_float_list, help="descending tau grid, comma-separated")
    p.add_argument("--theta", type=float)
    p.add_argument("--fit-powers", dest="fit_powers", type=_float_list,
                   help="powers of T/T_eff in the fit besides the constant")

    p = sub.add_parser("coeff", help="reflection coefficients along y at one Matsubara index")
    common(p)
    p.add_argument("material", nargs="?", help="fixture name or material JSON file")
    p.add_argument("--a-um", dest="a_um", type=float)
    p.add_argument("--T", dest="T", type=float)
    p.add_argument("--l", dest="l", type=int)
    p.add_argument("--y-max", dest="y_max", type=float, help="range of y - zeta")
    p.add_argument("--points", type=int)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # usage errors exit with status 2
    try:
        cfg = _resolve(args.command, args)
        if args.command in ("energy", "entropy"):
            text = _render_table(*_energy_like(args.command, cfg), cfg["format"])
        elif args.command == "sweep":
            text = _render_table(*_sweep(cfg), cfg["format"])
        elif args.command == "coeff":
            text = _render_table(*_coeff(cfg), cfg["format"])
        else:
            text = _render_audit(*_audit(cfg), cfg["format"])
    except ConfigError as exc:
        print(f"lifshitz-cp: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"lifshitz-cp: convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (KeyError, ValueError) as exc:
        print(f"lifshitz-cp: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"lifshitz-cp: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        if args.out:
            write_atomic(args.out, text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"lifshitz-cp: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
