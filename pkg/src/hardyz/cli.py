"""Batch front end: ``hardyz {eval,zeros,hardy,lemmas,contour}``.

Options may come from flags, from a ``--config`` file of ``key = value``
lines (keys are the long flag names without dashes, e.g. ``t_max`` or
``t-max``), or from built-in defaults, in that order of precedence.  The
worker count additionally honours the HARDYZ_WORKERS environment variable
(below flags and config file).

Exit codes: 0 all assertions passed, 1 assertion failure, 2 configuration
error, 3 numerical accuracy failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from .errors import AccuracyError, DomainError, PreconditionError
from .hardy_harness import fit_scaling, hardy_scan, lower_bound_contour, scan_zeros, verify_cauchy_rectangle
from .oscillatory import random_certificates
from .special_fns import theta_array
from .z_function import z_definition_array, z_dirichlet, z_riemann_siegel_array
from .zeta_eval import ApproxConfig, zeta_em_array

SCHEMA_VERSION = 1
WORKERS_ENV = "HARDYZ_WORKERS"

EXIT_OK, EXIT_ASSERT, EXIT_CONFIG, EXIT_ACCURACY = 0, 1, 2, 3

EVAL_COLUMNS = ["t", "re_zeta", "im_zeta", "z", "method", "err_bound", "error"]
ZEROS_COLUMNS = ["index", "t_lo", "t_hi", "refined_t", "iterations"]
HARDY_COLUMNS = ["T", "re_I", "im_I", "J", "quad_err", "ratio", "bound_T34", "lower_ratio",
                 "sign_changes", "flag"]
LEMMAS_COLUMNS = ["lemma", "n", "a", "b", "m", "r", "M", "numeric_abs", "analytic_bound", "slack",
                  "status"]


class ConfigError(Exception):
    pass


# --------------------------------------------------------------------------
# formatting


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        if math.isnan(v):
            return ""
        return "%.17g" % v
    return "" if v is None else str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (complex, np.complexfloating)):
        return {"re": float(v.real), "im": float(v.imag)}
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return None if math.isnan(v) else float(v)
    return v


def _csv_text(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r.get(c)) for c in columns])
    return buf.getvalue()


def _json_text(payload) -> str:
    return json.dumps(_jsonable({"schema_version": SCHEMA_VERSION, **payload}), indent=2, sort_keys=True) + "\n"


def _emit(opts, text: str, suffix: str = "") -> None:
    out = opts.out
    if out in (None, "-"):
        (sys.stdout if not suffix else sys.stderr).write(text)
        return
    with open(out + suffix, "w", newline="") as fh:
        fh.write(text)


def _write_table(opts, command, columns, rows, extra=None) -> None:
    if opts.format == "json":
        _emit(opts, _json_text({"command": command, "columns": columns, "rows": rows, **(extra or {})}))
    else:
        _emit(opts, _csv_text(columns, rows))
        if extra:
            _emit(opts, _json_text({"command": command, **extra}), suffix=".summary.json")


# --------------------------------------------------------------------------
# commands


def _grid(t0, t1, step):
    if not step > 0:
        raise ConfigError("step: must be positive")
    if not t1 >= t0:
        raise ConfigError("t1: must be >= t0")
    n = int(math.floor((t1 - t0) / step + 1e-9))
    return [t0 + k * step for k in range(n + 1)]


def cmd_eval(opts) -> int:
    methods = ("definition", "riemann_siegel", "dirichlet_poly", "euler_maclaurin")
    if opts.method not in methods:
        raise ConfigError(f"method: must be one of {', '.join(methods)}")
    if not opts.error_target > 0:
        raise ConfigError("error_target: must be positive")
    cfg = ApproxConfig(C=opts.C)
    rows, failures = [], 0
    for t in _grid(opts.t0, opts.t1, opts.step):
        row = {"t": t, "method": opts.method, "error": ""}
        try:
            if opts.method in ("definition", "euler_maclaurin"):
                if t < 1:
                    raise DomainError("need t >= 1")
                zv, ze = zeta_em_array(np.array([0.5 + 1j * t]), opts.error_target)
                zeta = complex(zv[0])
                if opts.method == "definition":
                    z, _, err = z_definition_array(t, opts.error_target)
                    z, err = float(z[0]), float(err[0])
                else:
                    z = (np.exp(1j * float(theta_array(t))) * zeta).real
                    err = float(ze[0])
            else:
                if opts.method == "riemann_siegel":
                    zz, ee = z_riemann_siegel_array(t, opts.kappa)
                    z, err = float(zz[0]), float(ee[0])
                else:
                    anchor = opts.T_anchor if opts.T_anchor is not None else t
                    ev = z_dirichlet(t, cfg, anchor)
                    z, err = ev.z, ev.err_bound
                # zeta implied by the Z estimate
                zeta = z * np.exp(-1j * float(theta_array(t)))
            row.update(re_zeta=zeta.real, im_zeta=zeta.imag, z=z, err_bound=err)
        except (DomainError, PreconditionError) as exc:
            failures += 1
            row["error"] = str(exc)
        rows.append(row)
    _write_table(opts, "eval", EVAL_COLUMNS, rows)
    return EXIT_CONFIG if rows and failures == len(rows) else EXIT_OK


def cmd_zeros(opts) -> int:
    if not opts.tol > 0:
        raise ConfigError("tol: must be positive")
    if not opts.t_max > opts.t_min >= 10:
        raise ConfigError("t_max: need t_max > t_min >= 10")
    brackets = scan_zeros(opts.t_min, opts.t_max, opts.tol)
    rows = [
        {"index": i, "t_lo": b.t_lo, "t_hi": b.t_hi, "refined_t": b.refined_t, "iterations": b.iterations}
        for i, b in enumerate(brackets, start=1)
    ]
    _write_table(opts, "zeros", ZEROS_COLUMNS, rows)
    return EXIT_OK


def _parse_T_list(text) -> list[float]:
    try:
        values = [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise ConfigError("T: expected a comma-separated list of numbers") from None
    if not values or any(v < 50 for v in values):
        raise ConfigError("T: need a nonempty list with every T >= 50")
    return values


def cmd_hardy(opts) -> int:
    Ts = _parse_T_list(opts.T)
    if opts.quad_tol is not None and not opts.quad_tol > 0:
        raise ConfigError("quad_tol: must be positive")
    rows, reports, status = [], [], EXIT_OK
    for T in Ts:
        flag = ""
        try:
            r = hardy_scan(T, opts.quad_tol, opts.method, workers=opts.workers)
        except AccuracyError as exc:
            r, flag, status = exc.partial, "accuracy", EXIT_ACCURACY
        ok = (r.ratio < 1 and r.lower_ratio >= 0.9 and abs(r.I.imag) <= 10 * r.quad_err
              and abs(r.I) <= r.J + 2 * r.quad_err)
        if not ok:
            flag = flag or "assertion"
            status = status or EXIT_ASSERT
        reports.append(r)
        rows.append({"T": r.T, "re_I": r.I.real, "im_I": r.I.imag, "J": r.J, "quad_err": r.quad_err,
                     "ratio": r.ratio, "bound_T34": r.bound_T34, "lower_ratio": r.lower_ratio,
                     "sign_changes": r.sign_changes, "flag": flag})
    extra = None
    ordered = sorted(reports, key=lambda r: r.T)
    if len(ordered) >= 3 and len({r.T for r in ordered}) == len(ordered):
        fits = {m: fit_scaling(ordered, m).__dict__ for m in ("J", "abs_I")}
        extra = {"fits": fits}
        if not fits["abs_I"]["envelope_ok"]:
            status = status or EXIT_ASSERT
    _write_table(opts, "hardy", HARDY_COLUMNS, rows, extra)
    return status


def cmd_lemmas(opts) -> int:
    if opts.trials < 1:
        raise ConfigError("trials: must be >= 1")
    rows = random_certificates(opts.trials, seed=opts.seed, adversarial=opts.adversarial)
    bad = any(r["status"] == "ok" and r["slack"] < 0 for r in rows)
    _write_table(opts, "lemmas", LEMMAS_COLUMNS, rows)
    return EXIT_ASSERT if bad else EXIT_OK


def cmd_contour(opts) -> int:
    if not 0 < opts.delta < 0.5:
        raise ConfigError(f"delta: need 0 < delta < 1/2, got {opts.delta}")
    if opts.T < 50:
        raise ConfigError("T: need T >= 50")
    status = EXIT_OK
    try:
        lower = lower_bound_contour(opts.T, workers=opts.workers)
        rect = verify_cauchy_rectangle(opts.T, opts.delta, workers=opts.workers)
    except AccuracyError as exc:
        _write_table(opts, "contour", ["key", "value"], [{"key": "accuracy_error", "value": str(exc)}])
        return EXIT_ACCURACY
    checks = {**{f"lower.{k}": v for k, v in lower["checks"].items()},
              **{f"rectangle.{k}": v for k, v in rect["checks"].items()}}
    if not all(checks.values()):
        status = EXIT_ASSERT
    payload = {"lower_bound_contour": lower, "cauchy_rectangle": rect, "passed": checks}
    if opts.format == "json":
        _emit(opts, _json_text({"command": "contour", **payload}))
    else:
        flat = []
        for name, rec in (("lower", lower), ("rectangle", rect)):
            for k, v in rec.items():
                if k == "checks":
                    continue
                if isinstance(v, tuple):
                    for i, x in enumerate(v):
                        flat.append({"key": f"{name}.{k}[{i}]", "value": _fmt(float(x))})
                elif isinstance(v, complex):
                    flat.append({"key": f"{name}.{k}.re", "value": _fmt(v.real)})
                    flat.append({"key": f"{name}.{k}.im", "value": _fmt(v.imag)})
                else:
                    flat.append({"key": f"{name}.{k}", "value": _fmt(v)})
        flat += [{"key": f"passed.{k}", "value": _fmt(v)} for k, v in checks.items()]
        _emit(opts, _csv_text(["key", "value"], flat))
    return status


# --------------------------------------------------------------------------
# argument handling


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--out", default=argparse.SUPPRESS, help="output path (default: stdout)")
    g.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS)
    g.add_argument("--workers", type=int, default=argparse.SUPPRESS,
                   help=f"worker threads (env {WORKERS_ENV}; default: CPU count)")
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    g.add_argument("--config", default=argparse.SUPPRESS, help="file of key = value lines")
    return p


GLOBAL_DEFAULTS = {"out": None, "format": "csv", "seed": 0, "config": None}


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(
        prog="hardyz", parents=[common],
        description="Hardy Z-function evaluation, zero scans and window integrals.",
        epilog=f"Precedence: flags > --config file > defaults.  {WORKERS_ENV} sets the default worker count.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {}

    def add(name, func, help_text, options):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        for flags, kw in options:
            default = kw.pop("default", None)
            kw["default"] = argparse.SUPPRESS
            action = sp.add_argument(*flags, **kw)
            specs.setdefault(name, {})[action.dest] = (default, kw.get("type"), kw.get("action"))
        sp.set_defaults(func=func)

    add("eval", cmd_eval, "evaluate zeta and Z on a grid of heights", [
        (("--t0",), dict(type=float, default=10.0)),
        (("--t1",), dict(type=float, default=20.0)),
        (("--step",), dict(type=float, default=1.0)),
        (("--method",), dict(default="definition",
                             help="definition | riemann_siegel | dirichlet_poly | euler_maclaurin")),
        (("--error-target",), dict(type=float, default=1e-10)),
        (("--kappa",), dict(type=float, default=1.0)),
        (("--C",), dict(type=float, default=4.0)),
        (("--T-anchor",), dict(type=float, default=None)),
    ])
    add("zeros", cmd_zeros, "bracket and bisect sign changes of Z", [
        (("--t-min",), dict(type=float, default=10.0)),
        (("--t-max",), dict(type=float, default=100.0)),
        (("--tol",), dict(type=float, default=1e-9)),
    ])
    add("hardy", cmd_hardy, "window integrals I(T), J(T) and sign changes", [
        (("--T",), dict(default="100,1000,10000", help="comma-separated window anchors")),
        (("--quad-tol",), dict(type=float, default=None)),
        (("--method",), dict(default="definition")),
    ])
    add("lemmas", cmd_lemmas, "randomised derivative-test certificates", [
        (("--trials",), dict(type=int, default=1000)),
        (("--adversarial",), dict(action="store_true", default=False)),
    ])
    add("contour", cmd_contour, "contour closures for zeta and chi^(-1/2) zeta", [
        (("--T",), dict(type=float, default=100.0)),
        (("--delta",), dict(type=float, default=0.25)),
    ])
    return parser, specs


def _read_config(path) -> dict:
    out = {}
    try:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"config: line {lineno} is not key = value")
                k, v = (x.strip() for x in line.split("=", 1))
                out[k.replace("-", "_")] = v
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc}") from None
    return out


def _convert(key, raw, typ, action):
    if action == "store_true":
        return str(raw).lower() in ("1", "true", "yes", "on")
    if typ is None:
        return raw
    try:
        return typ(raw)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {raw!r}") from None


def resolve(argv=None):
    parser, specs = build_parser()
    ns = parser.parse_args(argv)
    given = vars(ns)
    cfg = _read_config(given["config"]) if given.get("config") else {}
    opts = argparse.Namespace(command=ns.command, func=ns.func)
    table = dict(specs[ns.command])
    table.update({k: (v, int if k == "seed" else None, None) for k, v in GLOBAL_DEFAULTS.items()})
    table["workers"] = (None, int, None)
    for key, (default, typ, action) in table.items():
        if key in given:
            val = given[key]
        elif key in cfg:
            val = _convert(key, cfg[key], typ, action)
        else:
            val = default
        setattr(opts, key, val)
    if opts.workers is None:
        env = os.environ.get(WORKERS_ENV)
        if env is not None:
            try:
                opts.workers = int(env)
            except ValueError:
                raise ConfigError(f"workers: {WORKERS_ENV}={env!r} is not an integer") from None
        else:
            opts.workers = os.cpu_count() or 1
    if opts.workers < 1:
        raise ConfigError("workers: must be >= 1")
    if opts.format not in ("csv", "json"):
        raise ConfigError("format: must be csv or json")
    return opts


def main(argv=None) -> int:
    try:
        opts = resolve(argv)
        return opts.func(opts)
    except ConfigError as exc:
        print(f"hardyz: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (PreconditionError, ValueError) as exc:
        print(f"hardyz: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AccuracyError as exc:
        print(f"hardyz: accuracy failure: {exc}", file=sys.stderr)
        return EXIT_ACCURACY


if __name__ == "__main__":
    sys.exit(main())
