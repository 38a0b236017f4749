"""Command-line interface.

    bellray exact N X [--precision BITS]
    bellray approx N X [--region auto|exp|osc|trans] [--beta-cut B]
    bellray figure N [--panel a|b] [--points P] [--output PATH] [--format csv|json] [--jobs J]
    bellray verify [--suite rays|eikonal|transport|specfun|all]

Settings may also come from a ``key=value`` config file (``--config``);
flags win over the file. Errors print one ``error: <kind>: <reason>`` line
on stderr and exit with the code listed in ``EXIT``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace

import gmpy2

from . import asymptotics as asy
from .errors import BellRayError, DomainError, PrecisionError, RegionError
from .exact import DEFAULT_PRECISION, PrecisionFloat, eval_exact
from .rays import GridSpec
from .verify import SUITES, run_suite

EXIT = {"ok": 0, "verify": 1, "parse": 2, "precision": 3, "region": 4, "io": 5}
EXACT_AFFORDABLE_N = 200
LOG_DOMAIN_N = 120
CSV_HEADER = ("x", "exact_scaled", "exp_approx_scaled", "osc_approx_scaled")
PANELS = {"a": (-10.0, 10.0), "b": (-20.0, 0.0)}


class CliError(Exception):
    def __init__(self, kind, message):
        self.kind = kind
        super().__init__(message)


@dataclass
class RunConfig:
    precision_bits: int = DEFAULT_PRECISION
    beta_cut: float = asy.BETA_CUT
    points: int = 400
    output_format: str = "csv"
    output_path: str | None = None
    jobs: int = 1
    grid: GridSpec = field(default_factory=GridSpec)

    def validate(self):
        if self.precision_bits < 53:
            raise CliError("parse", f"precision_bits must be >= 53, got {self.precision_bits}")
        if not (self.beta_cut >= 0 and math.isfinite(self.beta_cut)):
            raise CliError("parse", f"beta_cut must be a finite nonnegative number, got {self.beta_cut}")
        if self.points < 1:
            raise CliError("parse", f"points must be >= 1, got {self.points}")
        if self.output_format not in ("csv", "json"):
            raise CliError("parse", f"output_format must be csv or json, got {self.output_format!r}")
        if self.jobs < 1:
            raise CliError("parse", f"jobs must be >= 1, got {self.jobs}")
        return self


_GRID_KEYS = {f.name: f.type for f in fields(GridSpec)}
_SCALAR_KEYS = {"precision_bits": int, "beta_cut": float, "points": int,
                "output_format": str, "output_path": str, "jobs": int}


def load_config(path: str) -> dict:
    """Parse ``key=value`` lines; ``#`` starts a comment."""
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise CliError("io", f"cannot read config {path}: {exc.strerror}") from None
    out = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise CliError("parse", f"{path}:{lineno}: expected key=value")
        if key in _SCALAR_KEYS:
            conv = _SCALAR_KEYS[key]
        elif key in _GRID_KEYS:
            conv = int if key in ("nu", "nv") else float
        else:
            raise CliError("parse", f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = conv(value)
        except ValueError:
            raise CliError("parse", f"{path}:{lineno}: bad value for {key}: {value!r}") from None
    return out


def build_config(args) -> RunConfig:
    settings = load_config(args.config) if getattr(args, "config", None) else {}
    for key in list(_SCALAR_KEYS) + list(_GRID_KEYS):
        val = getattr(args, key, None)
        if val is not None:
            settings[key] = val
    grid_kw = {k: settings.pop(k) for k in list(settings) if k in _GRID_KEYS}
    try:
        grid = replace(GridSpec(), **grid_kw)
    except ValueError as exc:
        raise CliError("parse", f"grid: {exc}") from None
    return RunConfig(grid=grid, **settings).validate()


# -- helpers -------------------------------------------------------------------

def _parse_n(text, minimum):
    try:
        n = int(text)
    except ValueError:
        raise CliError("parse", f"n must be an integer, got {text!r}") from None
    if n < minimum:
        raise CliError("parse", f"n must be >= {minimum}, got {n}")
    return n


def _parse_x(text):
    try:
        PrecisionFloat.from_value(text, 53)
    except DomainError as exc:
        raise CliError("parse", str(exc)) from None
    return text


def _log_exact(n, x, precision_bits):
    """``(log|B_n(x)|, sign)`` from the exact evaluation."""
    v = eval_exact(n, x, precision_bits).value
    if v == 0:
        return -math.inf, 0
    return float(gmpy2.log(abs(v))), (1 if v > 0 else -1)


def relative_error(result: asy.ApproxResult, n, x, precision_bits=DEFAULT_PRECISION) -> float:
    """``|approx / exact - 1|``, formed from logs so nothing overflows."""
    le, se = _log_exact(n, x, precision_bits)
    if se == 0:
        return math.nan
    if result.sign == 0:
        return 1.0
    d = result.log_abs - le
    if d > 700:
        return math.inf
    return abs(result.sign * se * math.exp(d) - 1.0)


# -- commands ------------------------------------------------------------------

def cmd_exact(args, cfg, out):
    n = _parse_n(args.n, 0)
    x = _parse_x(args.x)
    try:
        r = eval_exact(n, x, cfg.precision_bits)
    except PrecisionError as exc:
        raise CliError("precision", str(exc)) from None
    print(str(r), file=out)
    print(f"err_bound: {float(r.abs_error):.3g} ({r.err_bound:.3g} ulp at {r.precision_bits} bits)", file=out)
    return EXIT["ok"]


_REGION_FUNCS = {
    "exp": asy.approx_exponential,
    "osc": asy.approx_oscillatory,
    "trans": asy.approx_transition,
}


def cmd_approx(args, cfg, out):
    n = _parse_n(args.n, 1)
    x_text = _parse_x(args.x)
    x = float(PrecisionFloat.from_value(x_text, 53).value)
    try:
        if args.region == "auto":
            r = asy.evaluate(n, x, cfg.beta_cut)
        else:
            r = _REGION_FUNCS[args.region](n, x, cfg.beta_cut)
    except RegionError as exc:
        raise CliError("region", str(exc)) from None
    except DomainError as exc:
        raise CliError("region", str(exc)) from None
    print(f"value: {r.value:.17g}", file=out)
    print(f"region: {r.region}", file=out)
    if r.beta is not None:
        print(f"beta: {r.beta:.17g}", file=out)
    print(f"log_abs: {r.log_abs:.17g}", file=out)
    print(f"sign: {r.sign}", file=out)
    if r.log_domain:
        print("log_domain: true", file=out)
    if n <= EXACT_AFFORDABLE_N:
        try:
            rel = relative_error(r, n, x, cfg.precision_bits)
        except PrecisionError as exc:
            raise CliError("precision", str(exc)) from None
        print(f"rel_error: {rel:.6g}", file=out)
    return EXIT["ok"]


def figure_grid(panel, points):
    lo, hi = PANELS[panel]
    step = (hi - lo) / (points + 1)
    return [lo + (i + 1) * step for i in range(points)]


def _scale_exponent(panel, x):
    return -abs(x) if panel == "a" else x


def _scaled(result, s):
    if result is None:
        return None
    if result.sign == 0:
        return 0.0
    la = result.log_abs + s
    if la > 709.0:
        return math.copysign(math.inf, result.sign)
    return result.sign * math.exp(la)


def figure_row(n, x, panel, precision_bits=DEFAULT_PRECISION):
    """One figure row; approximation fields are None outside their formula's domain."""
    s = _scale_exponent(panel, x)
    v = eval_exact(n, x, precision_bits).value
    with gmpy2.context(precision=max(53, v.precision)):
        exact_scaled = float(v * gmpy2.exp(s))
    exp_r = osc_r = None
    if x != 0:
        try:
            if x > 0 or x < -math.e * n:
                exp_r = asy.approx_exponential(n, x, beta_cut=None)
            else:
                osc_r = asy.approx_oscillatory(n, x, beta_cut=None)
        except RegionError:
            pass  # |LW + 1| too small: the formula is undefined here
    return x, exact_scaled, _scaled(exp_r, s), _scaled(osc_r, s)


def figure_rows(n, panel, points, jobs=1, precision_bits=DEFAULT_PRECISION):
    xs = figure_grid(panel, points)
    if jobs == 1:
        return [figure_row(n, x, panel, precision_bits) for x in xs]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda x: figure_row(n, x, panel, precision_bits), xs))


def _fmt(v):
    return "" if v is None else format(v, ".17g")


def render_figure(rows, fmt):
    if fmt == "json":
        return json.dumps([dict(zip(CSV_HEADER, r)) for r in rows], indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def cmd_figure(args, cfg, out):
    n = _parse_n(args.n, 1)
    try:
        rows = figure_rows(n, args.panel, cfg.points, cfg.jobs, cfg.precision_bits)
    except PrecisionError as exc:
        raise CliError("precision", str(exc)) from None
    text = render_figure(rows, cfg.output_format)
    if cfg.output_path:
        try:
            with open(cfg.output_path, "w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise CliError("io", f"cannot write {cfg.output_path}: {exc.strerror}") from None
    else:
        out.write(text)
    return EXIT["ok"]


def cmd_verify(args, cfg, out):
    report = run_suite(args.suite, cfg.grid)
    print(json.dumps(report, indent=1), file=out)
    failed = [c["name"] for c in report["checks"] if not c["pass"]]
    if failed:
        raise CliError("verify", f"check {failed[0]} failed ({len(failed)} failing)")
    return EXIT["ok"]


# -- parser --------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError("parse", message)


def build_parser():
    p = _Parser(prog="bellray", description="Exact and asymptotic Bell polynomials.")
    p.add_argument("--config", help="key=value settings file")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("exact", help="exact B_n(x) with an error bound")
    e.add_argument("n")
    e.add_argument("x")
    e.add_argument("--precision", dest="precision_bits", type=int)

    a = sub.add_parser("approx", help="asymptotic approximation of B_n(x)")
    a.add_argument("n")
    a.add_argument("x")
    a.add_argument("--region", choices=("auto", "exp", "osc", "trans"), default="auto")
    a.add_argument("--beta-cut", dest="beta_cut", type=float)
    a.add_argument("--precision", dest="precision_bits", type=int)

    f = sub.add_parser("figure", help="exact vs asymptotic curves as CSV")
    f.add_argument("n")
    f.add_argument("--panel", choices=("a", "b"), default="a")
    f.add_argument("--points", type=int)
    f.add_argument("--output", dest="output_path")
    f.add_argument("--format", dest="output_format", choices=("csv", "json"))
    f.add_argument("--jobs", type=int)
    f.add_argument("--precision", dest="precision_bits", type=int)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", choices=tuple(SUITES) + ("all",), default="all")
    for key, typ in _GRID_KEYS.items():
        v.add_argument(f"--{key.replace('_', '-')}", dest=key, type=int if key in ("nu", "nv") else float)
    return p


_COMMANDS = {"exact": cmd_exact, "approx": cmd_approx, "figure": cmd_figure, "verify": cmd_verify}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        cfg = build_config(args)
        return _COMMANDS[args.command](args, cfg, out)
    except CliError as exc:
        print(f"error: {exc.kind}: {exc}", file=err)
        return EXIT[exc.kind]
    except PrecisionError as exc:
        print(f"error: precision: {exc}", file=err)
        return EXIT["precision"]
    except BellRayError as exc:
        print(f"error: region: {exc}", file=err)
        return EXIT["region"]


if __name__ == "__main__":
    sys.exit(main())
