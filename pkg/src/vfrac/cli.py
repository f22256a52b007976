"""Command-line front end.

Usage:
    vfrac deriv --function "t^2" --alpha 0.5 --at 4
    vfrac integ --function "exp(t)" --alpha 0.5 --a 0 --b 1
    vfrac taylor --function "exp(t)" --center 1 --order 5 --eval 2
    vfrac taylor --function "exp(t)" --center 0 --order 3 --sweep 0 2 --format csv
    vfrac remainder --function "sin(t)" --order 2 --center 1 --point 2
    vfrac inequality --theorem holder --function 1 --g 1 --r 2 --a 1 --b 4 --alpha 0.5
    vfrac verify --suite ftc --trials 50

Exit codes: 0 success, 2 invalid input or numerical error, 3 a theorem
check or inequality verdict came out false.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Sequence

import numpy as np

from . import __version__
from . import expr as ex
from .bounds import holder_check, remainder_product_bound, remainder_supnorm_bound
from .corekernel import FIELDS, ParamSet, validate_params
from .errors import ParameterError, ReportIOError, UsageError, VFracError
from .quadrature import QuadratureConfig
from .taylor import remainder_report, taylor_poly
from .vcalc import vderiv_closed, vderiv_limit, vderiv_n_expr, vintegral
from .verify import SUITES, run_suite

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_FAILED = 3

SUBCOMMANDS = ("deriv", "integ", "taylor", "remainder", "inequality", "verify")
FORMATS = ("table", "csv", "json")


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    function_source: str | None
    params: ParamSet
    options: dict[str, Any]
    output_format: str = "table"
    output_path: str | None = None
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)
    timestamp: bool = True

    def as_dict(self) -> dict[str, Any]:
        return {
            "subcommand": self.subcommand,
            "function": self.function_source,
            "params": self.params.as_dict(),
            "options": dict(self.options),
            "format": self.output_format,
            "quadrature": {
                "abs_tol": self.quad.abs_tol,
                "rel_tol": self.quad.rel_tol,
                "max_subdivisions": self.quad.max_subdivisions,
            },
        }


@dataclass
class Report:
    """Metadata plus a tabular payload (``columns``/``rows``) and extras."""

    metadata: dict[str, Any]
    columns: list[str]
    rows: list[list[Any]]
    extra: dict[str, Any] = field(default_factory=dict)

    def as_dict(self) -> dict[str, Any]:
        return {
            "metadata": self.metadata,
            "payload": {"columns": self.columns, "rows": self.rows, "extra": self.extra},
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Report":
        payload = data["payload"]
        return cls(data["metadata"], payload["columns"], payload["rows"], payload["extra"])


# -- parsing -----------------------------------------------------------------


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def _common_parser() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    grp = common.add_argument_group("parameters")
    for name in ("gamma", "beta", "rho", "delta", "p", "q"):
        grp.add_argument(f"--{name}", type=float, default=1.0, help=f"{name} (default 1)")
    grp.add_argument("--alpha", type=float, default=1.0, help="order in (0, 1] (default 1)")
    grp.add_argument("--trunc", type=int, default=1, help="truncation index i >= 1 (default 1)")
    quad = common.add_argument_group("quadrature")
    quad.add_argument("--abs-tol", type=float, help="absolute tolerance (default VFRAC_QUAD_TOL or 1e-10)")
    quad.add_argument("--rel-tol", type=float, help="relative tolerance (default VFRAC_QUAD_TOL or 1e-10)")
    quad.add_argument("--max-subdivisions", type=int, help="bisection budget (default 2000)")
    out = common.add_argument_group("output")
    out.add_argument("--format", choices=FORMATS, default="table")
    out.add_argument("--output", metavar="PATH", help="write the report here instead of stdout")
    out.add_argument("--no-timestamp", action="store_true", help="omit the run timestamp")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = _ArgumentParser(prog="vfrac", description="Truncated V-fractional calculus toolkit.")
    parser.add_argument("--version", action="version", version=f"vfrac {__version__}")
    sub = parser.add_subparsers(dest="subcommand", metavar="COMMAND", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help_text, description=help_text)

    p = add("deriv", "V-fractional derivative at one or more points")
    p.add_argument("--function", required=True)
    p.add_argument("--at", type=float, action="append", required=True, metavar="T")
    p.add_argument("--order", type=int, default=1, help="apply the derivative n times (default 1)")
    p.add_argument("--method", choices=("closed", "limit"), default="closed")

    p = add("integ", "V-fractional integral over [a, b]")
    p.add_argument("--function", required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)

    p = add("taylor", "fractional Taylor polynomial and its error")
    p.add_argument("--function", required=True)
    p.add_argument("--center", type=float, required=True)
    p.add_argument("--order", type=int, required=True)
    where = p.add_mutually_exclusive_group(required=True)
    where.add_argument("--eval", type=float, action="append", metavar="T")
    where.add_argument("--sweep", type=float, nargs=2, metavar=("START", "STOP"))
    p.add_argument("--points", type=int, default=21, help="sweep resolution (default 21)")

    p = add("remainder", "Taylor remainder in series and integral form")
    p.add_argument("--function", required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--center", type=float, required=True)
    p.add_argument("--point", type=float, action="append", required=True, metavar="S")

    p = add("inequality", "check a Hölder-type or remainder inequality")
    p.add_argument("--theorem", choices=("holder", "product", "supnorm"), required=True)
    p.add_argument("--function", required=True)
    p.add_argument("--g", help="second function (holder)")
    p.add_argument("--r", type=float, help="exponent r > 1")
    p.add_argument("--s", type=float, help="conjugate exponent (default r/(r-1))")
    p.add_argument("--a", type=float, help="interval start")
    p.add_argument("--b", type=float, help="interval end")
    p.add_argument("--order", type=int, default=0)
    p.add_argument("--x0", type=float, help="expansion point")
    p.add_argument("--t", type=float, help="evaluation point")
    p.add_argument("--direction", choices=("forward", "backward", "absolute"), default="forward")
    p.add_argument("--corrected", action="store_true", help="use the mu-corrected right-hand side")

    p = add("verify", "randomized property checks")
    p.add_argument("--suite", choices=sorted(SUITES) + ["all"], required=True)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    return parser


_OPTION_KEYS = {
    "deriv": ("at", "order", "method"),
    "integ": ("a", "b"),
    "taylor": ("center", "order", "eval", "sweep", "points"),
    "remainder": ("order", "center", "point"),
    "inequality": ("theorem", "g", "r", "s", "a", "b", "order", "x0", "t", "direction", "corrected"),
    "verify": ("suite", "trials", "seed"),
}


def _check_options(cmd: str, opts: dict[str, Any]) -> None:
    if cmd == "deriv":
        if opts["order"] < 1:
            raise UsageError("--order must be >= 1")
        if opts["method"] == "limit" and opts["order"] != 1:
            raise UsageError("--method limit supports --order 1 only")
    elif cmd in ("taylor", "remainder"):
        if opts["order"] < 0:
            raise UsageError("--order must be >= 0")
        if cmd == "taylor" and opts["points"] < 2:
            raise UsageError("--points must be >= 2")
    elif cmd == "inequality":
        theorem = opts["theorem"]
        if theorem in ("holder", "product"):
            if opts["r"] is None:
                raise UsageError(f"--theorem {theorem} needs --r")
            if opts["s"] is None and opts["r"] > 1.0:
                opts["s"] = opts["r"] / (opts["r"] - 1.0)
        if theorem == "holder":
            missing = [k for k in ("g", "a", "b") if opts[k] is None]
        else:
            missing = [k for k in ("x0", "t") if opts[k] is None]
            if opts["order"] < 0:
                raise UsageError("--order must be >= 0")
        if missing:
            raise UsageError(f"--theorem {theorem} needs " + ", ".join(f"--{k}" for k in missing))
        if opts["g"] is not None:
            ex.parse(opts["g"])
    elif cmd == "verify" and opts["trials"] < 1:
        raise UsageError("--trials must be >= 1")


def parse_cli(argv: Sequence[str]) -> RunConfig:
    """Turn ``argv`` into a validated :class:`RunConfig`.

    Raises :class:`UsageError` for flag problems and invalid parameters;
    expression syntax errors propagate with their source offset.
    """
    ns = build_parser().parse_args(list(argv))
    raw = [getattr(ns, name) for name in FIELDS[:7]] + [ns.trunc]
    try:
        params = validate_params(raw)
    except ParameterError as exc:
        raise UsageError(str(exc)) from exc
    try:
        quad = QuadratureConfig.from_env(
            abs_tol=ns.abs_tol, rel_tol=ns.rel_tol, max_subdivisions=ns.max_subdivisions
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    cmd = ns.subcommand
    opts = {key: getattr(ns, key) for key in _OPTION_KEYS[cmd]}
    _check_options(cmd, opts)
    source = getattr(ns, "function", None)
    if source is not None:
        ex.parse(source)
    return RunConfig(
        subcommand=cmd,
        function_source=source,
        params=params,
        options=opts,
        output_format=ns.format,
        output_path=ns.output,
        quad=quad,
        timestamp=not ns.no_timestamp,
    )


# -- dispatch ----------------------------------------------------------------


def _run_deriv(cfg: RunConfig, f: ex.Expr):
    n = cfg.options["order"]
    if cfg.options["method"] == "limit":
        rows = [[t, vderiv_limit(f, cfg.params, t)] for t in cfg.options["at"]]
        return ["t", "value"], rows, {}, EXIT_OK
    d = vderiv_n_expr(f, cfg.params, n - 1)
    rows = [[t, vderiv_closed(d, cfg.params, t)] for t in cfg.options["at"]]
    return ["t", "value"], rows, {"expression": ex.to_source(vderiv_n_expr(d, cfg.params, 1))}, EXIT_OK


def _run_integ(cfg: RunConfig, f: ex.Expr):
    a, b = cfg.options["a"], cfg.options["b"]
    res = vintegral(f, cfg.params, a, b, cfg.quad)
    cols = ["a", "b", "value", "error_estimate", "evaluations"]
    return cols, [[a, b, res.value, res.error_estimate, res.evaluations]], {}, EXIT_OK


def _run_taylor(cfg: RunConfig, f: ex.Expr):
    n = cfg.options["order"]
    T = taylor_poly(f, cfg.params, n, cfg.options["center"])
    if cfg.options["sweep"] is not None:
        start, stop = cfg.options["sweep"]
        points = [float(x) for x in np.linspace(start, stop, cfg.options["points"])]
    else:
        points = list(cfg.options["eval"])
    rows = []
    for t in points:
        fv = float(ex.evaluate(f, t))
        tv = float(T(t))
        rows.append([t, fv, tv, abs(fv - tv)])
    return ["t", "f", f"T{n}", "abs_error"], rows, {"coefficients": list(T.coeffs)}, EXIT_OK


def _run_remainder(cfg: RunConfig, f: ex.Expr):
    n, center = cfg.options["order"], cfg.options["center"]
    rows = []
    for s in cfg.options["point"]:
        rep = remainder_report(f, cfg.params, n, center, s, cfg.quad)
        rows.append(
            [center, s, rep.series_value, rep.integral_value, rep.integral_error_estimate, rep.discrepancy]
        )
    cols = ["center", "point", "series", "integral", "integral_error", "discrepancy"]
    return cols, rows, {}, EXIT_OK


def _run_inequality(cfg: RunConfig, f: ex.Expr):
    o = cfg.options
    if o["theorem"] == "holder":
        rep = holder_check(f, ex.parse(o["g"]), o["r"], o["s"], cfg.params, o["a"], o["b"], cfg.quad)
    elif o["theorem"] == "product":
        rep = remainder_product_bound(
            f, cfg.params, o["order"], o["r"], o["s"], o["x0"], o["t"], o["direction"], cfg.quad,
            corrected=o["corrected"],
        )
    else:
        rep = remainder_supnorm_bound(
            f, cfg.params, o["order"], o["x0"], o["t"], o["direction"], cfg.quad,
            a=o["a"], b=o["b"], corrected=o["corrected"],
        )
    cols = ["name", "lhs", "rhs", "slack", "holds"]
    code = EXIT_OK if rep.holds else EXIT_FAILED
    return cols, [[rep.name, rep.lhs, rep.rhs, rep.slack, rep.holds]], {"context": rep.context}, code


def _run_verify(cfg: RunConfig, f):
    o = cfg.options
    results = run_suite(o["suite"], o["trials"], o["seed"], cfg.quad)
    rows = [[r.suite, r.case, r.residual, r.tolerance, r.passed] for r in results]
    summary: dict[str, dict[str, Any]] = {}
    for r in results:
        entry = summary.setdefault(r.suite, {"cases": 0, "failures": 0, "max_residual": 0.0})
        entry["cases"] += 1
        entry["failures"] += 0 if r.passed else 1
        entry["max_residual"] = max(entry["max_residual"], r.residual)
    code = EXIT_OK if all(r.passed for r in results) else EXIT_FAILED
    return ["suite", "case", "residual", "tolerance", "passed"], rows, {"summary": summary}, code


_DISPATCH = {
    "deriv": _run_deriv,
    "integ": _run_integ,
    "taylor": _run_taylor,
    "remainder": _run_remainder,
    "inequality": _run_inequality,
    "verify": _run_verify,
}


def _plain(value: Any) -> Any:
    """JSON-safe copy: numpy scalars unwrapped, non-finite floats as text."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else repr(value)
    return value


def run(config: RunConfig) -> tuple[Report, int]:
    """Execute ``config``; returns the report and the process exit code."""
    f = ex.parse(config.function_source) if config.function_source is not None else None
    columns, rows, extra, code = _DISPATCH[config.subcommand](config, f)
    metadata = {
        "tool": "vfrac",
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds") if config.timestamp else None,
        "config": config.as_dict(),
    }
    return Report(_plain(metadata), list(columns), _plain(rows), _plain(extra)), code


# -- output ------------------------------------------------------------------


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _csv_cell(value: Any) -> Any:
    # full precision so the CSV round-trips
    if isinstance(value, float):
        return repr(value)
    return _cell(value) if isinstance(value, bool) else value


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.as_dict(), sort_keys=True, indent=2, allow_nan=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(report.columns)
        for row in report.rows:
            writer.writerow([_csv_cell(v) for v in row])
        return buf.getvalue()
    if fmt != "table":
        raise ValueError(f"unknown format {fmt!r}")
    cells = [report.columns] + [[_cell(v) for v in row] for row in report.rows]
    widths = [max(len(r[j]) for r in cells) for j in range(len(report.columns))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    for key in sorted(report.extra):
        value = report.extra[key]
        text = json.dumps(value, sort_keys=True) if isinstance(value, (dict, list)) else _cell(value)
        lines.append(f"{key}: {text}")
    return "\n".join(lines) + "\n"


def emit(report: Report, fmt: str, path: str | None = None) -> None:
    text = render(report, fmt)
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ReportIOError(f"cannot write report to {path}: {exc.strerror or exc}") from exc


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_cli(argv)
        report, code = run(config)
        emit(report, config.output_format, config.output_path)
    except SystemExit as exc:  # --help and --version
        return int(exc.code or 0)
    except (VFracError, ValueError, OSError) as exc:
        message = " ".join(str(exc).split())
        print(f"vfrac: error: {message}", file=sys.stderr)
        return EXIT_INVALID
    return code


if __name__ == "__main__":
    sys.exit(main())
