"""Command-line front end (console script ``planejulia``).

Exit codes: 0 success, 1 domain error, 2 usage error, 3 when ``certify``
finds a claim that is not Certified.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys

from . import classifier as clf
from . import core_dynamics as cd
from . import interval_certifier as ic
from . import renderer as rd

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_UNCERTIFIED = 0, 1, 2, 3

PROG = "planejulia"

# Built-in defaults; a --config file overrides these and flags override both.
BUILTINS = {
    "c": -0.5,
    "max_iter": clf.DEFAULT_MAX_ITER,
    "tol": clf.CONVERGENCE_TOL,
    "cycle_tol": clf.RENDER_TOL,
    "escape_radius": clf.ESCAPE_RADIUS,
    "mode": "metric",
    "r_max": ic.CertifyOptions().r_max,
    "max_depth": ic.CertifyOptions().max_depth,
    "pieces": 1,
    "workers": 1,
    "palette": "",
    "out": "image.ppm",
    "stats": "",
    "report": "certify_report.json",
}


class ConfigError(ValueError):
    pass


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise ValueError
    return v


def _nonneg_int(text):
    v = int(text)
    if v < 0:
        raise ValueError
    return v


def _finite(text):
    v = float(text)
    if not math.isfinite(v):
        raise ValueError
    return v


def _positive(text):
    v = _finite(text)
    if not v > 0:
        raise ValueError
    return v


_KEY_TYPES = {
    "c": (_finite, "a finite real"),
    "max_iter": (_nonneg_int, "an integer >= 0"),
    "tol": (_positive, "a positive real"),
    "cycle_tol": (_positive, "a positive real"),
    "escape_radius": (_positive, "a positive real"),
    "mode": (lambda t: t if t in ("metric", "itinerary") else _bad(), "metric or itinerary"),
    "r_max": (_positive, "a positive real"),
    "max_depth": (_nonneg_int, "an integer >= 0"),
    "pieces": (_positive_int, "an integer >= 1"),
    "workers": (_positive_int, "an integer >= 1"),
    "palette": (lambda t: (parse_palette(t), t)[1], "entries Class:r,g,b separated by ';'"),
    "out": (str, "a path"),
    "stats": (str, "a path"),
    "report": (str, "a path"),
}


def _bad():
    raise ValueError


def load_config(path=None) -> dict:
    """Built-in defaults overlaid with key=value lines from ``path``."""
    cfg = dict(BUILTINS)
    if path is None:
        return cfg
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"config {path}: cannot read ({exc.strerror})") from exc
    for no, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config {path}, line {no}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _KEY_TYPES:
            raise ConfigError(f"config {path}, line {no}: unknown key {key!r}")
        conv, what = _KEY_TYPES[key]
        try:
            cfg[key] = conv(value)
        except (ValueError, TypeError):
            raise ConfigError(
                f"config {path}, line {no}: {key} must be {what}, got {value!r}") from None
    return cfg


def parse_palette(text: str) -> dict:
    """'Escaping:255,255,255;AttractingBasin:40,40,40' -> {tag: (r, g, b)}."""
    out = {}
    for item in filter(None, (s.strip() for s in text.split(";"))):
        name, _, rgb = item.partition(":")
        parts = rgb.split(",")
        vals = [int(p) for p in parts]
        if len(vals) != 3 or not all(0 <= v <= 255 for v in vals):
            raise ValueError(f"bad palette entry {item!r}")
        out[name.strip()] = tuple(vals)
    return out


# --- argument types --------------------------------------------------------

def _arg(conv, what):
    def parse(text):
        try:
            return conv(text)
        except (ValueError, TypeError):
            raise argparse.ArgumentTypeError(f"expected {what}, got {text!r}") from None
    parse.__name__ = what
    return parse


def _point(text):
    parts = text.split(",")
    if len(parts) != 2 or any(p != p.strip() or not p for p in parts):
        raise ValueError
    return (_finite(parts[0]), _finite(parts[1]))


def _window(text):
    vals = [_finite(p) for p in text.split(",")]
    if len(vals) != 4 or not (vals[0] < vals[1] and vals[2] < vals[3]):
        raise ValueError
    return tuple(vals)


def _size(text):
    w, sep, h = text.lower().partition("x")
    if not sep:
        raise ValueError
    return (_positive_int(w), _positive_int(h))


POINT = _arg(_point, "x,y with no spaces")
WINDOW = _arg(_window, "x0,x1,y0,y1 with x0 < x1 and y0 < y1")
SIZE = _arg(_size, "WxH with positive integers")
REAL = _arg(_finite, "a finite real")
POS = _arg(_positive, "a positive real")
COUNT = _arg(_nonneg_int, "an integer >= 0")
PCOUNT = _arg(_positive_int, "an integer >= 1")


# --- JSON ------------------------------------------------------------------

def _jsonable(obj):
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def dumps(obj) -> str:
    # float repr is the shortest string that round-trips binary64 (<= 17 digits).
    return json.dumps(_jsonable(obj), indent=2, sort_keys=False)


# --- parser ----------------------------------------------------------------

class _Formatter(argparse.ArgumentDefaultsHelpFormatter):
    pass


class _UsageError(Exception):
    def __init__(self, parser, message):
        super().__init__(message)
        self.parser = parser


class _Parser(argparse.ArgumentParser):
    """Raises instead of exiting so run() decides where errors go."""

    def error(self, message):
        raise _UsageError(self, message)


def build_parser(cfg: dict | None = None) -> argparse.ArgumentParser:
    cfg = cfg or dict(BUILTINS)
    p = _Parser(prog=PROG, formatter_class=_Formatter, allow_abbrev=False,
                                description="Dynamics toolkit for f(x, y) = (xy + c, x).")
    p.add_argument("--config", metavar="PATH", default=None,
                   help="key=value defaults file ('#' comments)")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", required=True,
                           parser_class=_Parser)

    def cmd(name, help_):
        return sub.add_parser(name, help=help_, description=help_, formatter_class=_Formatter,
                              allow_abbrev=False)

    s = cmd("fixed-points", "fixed points, 3-cycle and their stability")
    s.add_argument("--c", type=REAL, default=cfg["c"], help="parameter (c <= 1/4)")
    s.add_argument("--json", action="store_true", help="print JSON instead of text")

    s = cmd("classify", "classify the forward or backward orbit of a point")
    s.add_argument("--c", type=REAL, default=cfg["c"], help="parameter")
    s.add_argument("--point", type=POINT, required=True, help="start point x,y")
    s.add_argument("--direction", choices=("forward", "backward"), default="forward",
                   help="orbit direction")
    s.add_argument("--max-iter", type=COUNT, default=cfg["max_iter"], help="iteration budget")
    s.add_argument("--tol", type=POS, default=cfg["tol"], help="convergence tolerance")
    s.add_argument("--cycle-tol", type=POS, default=cfg["cycle_tol"],
                   help="backward 3-cycle tolerance")
    s.add_argument("--escape-radius", type=POS, default=cfg["escape_radius"],
                   help="sup-norm escape threshold")
    s.add_argument("--mode", choices=("metric", "itinerary"), default=cfg["mode"],
                   help="forward 3-cycle test")
    s.add_argument("--orbit", action="store_true", help="include the orbit in the output")

    s = cmd("orbit", "print a raw orbit")
    s.add_argument("--c", type=REAL, default=cfg["c"], help="parameter")
    s.add_argument("--point", type=POINT, required=True, help="start point x,y")
    s.add_argument("--steps", type=COUNT, required=True, help="number of steps")
    s.add_argument("--direction", choices=("forward", "backward"), default="forward",
                   help="orbit direction")
    s.add_argument("--format", choices=("csv", "json"), default="csv", help="output format")
    s.add_argument("--regions", action="store_true", help="tag each point with its regions")

    s = cmd("sequences", "auxiliary sequences (cn, bn, fib)")
    s.add_argument("--c", type=REAL, default=cfg["c"], help="parameter")
    s.add_argument("--kind", choices=("cn", "bn", "fib"), required=True, help="sequence")
    s.add_argument("--n", type=COUNT, default=10, help="number of terms")
    s.add_argument("--w", type=REAL, default=None, help="starting sup-norm for bn (w >= a2)")

    s = cmd("certify", "certify the region-inclusion suite over a c-interval")
    s.add_argument("--c-lo", type=REAL, required=True, help="lower end of the c-interval")
    s.add_argument("--c-hi", type=REAL, required=True, help="upper end of the c-interval")
    s.add_argument("--depth", type=COUNT, default=cfg["max_depth"], help="max subdivision depth")
    s.add_argument("--r-max", type=POS, default=cfg["r_max"], help="cut-off for unbounded boxes")
    s.add_argument("--pieces", type=PCOUNT, default=cfg["pieces"],
                   help="equal c-subintervals to certify separately")
    s.add_argument("--workers", type=PCOUNT, default=cfg["workers"], help="worker processes")
    s.add_argument("--report", metavar="PATH", default=cfg["report"], help="JSON report path")

    s = cmd("render", "classify a pixel grid and write a PPM image")
    s.add_argument("--c", type=REAL, default=cfg["c"], help="parameter")
    s.add_argument("--set", dest="which", choices=("kplus", "kminus"), default="kplus",
                   help="forward (kplus) or backward (kminus) classification")
    s.add_argument("--window", type=WINDOW, default=None,
                   help="x0,x1,y0,y1; None means -2.5,2.5,-2.5,2.5 for kplus, -3,3,-3,3 for kminus")
    s.add_argument("--size", type=SIZE, default="256x256", help="WxH pixels")
    s.add_argument("--out", metavar="PATH", default=cfg["out"], help="PPM output path")
    s.add_argument("--stats", metavar="PATH", default=cfg["stats"] or None,
                   help="JSON class counts path")
    s.add_argument("--max-iter", type=COUNT, default=cfg["max_iter"], help="iteration budget")
    s.add_argument("--tol", type=POS, default=cfg["tol"], help="convergence tolerance")
    s.add_argument("--cycle-tol", type=POS, default=cfg["cycle_tol"],
                   help="backward 3-cycle tolerance")
    s.add_argument("--escape-radius", type=POS, default=cfg["escape_radius"],
                   help="sup-norm escape threshold")
    s.add_argument("--workers", type=PCOUNT, default=cfg["workers"], help="worker processes")
    s.add_argument("--palette", default=cfg["palette"] or None,
                   help="overrides as Class:r,g,b;Class:r,g,b")
    return p


# --- subcommands -----------------------------------------------------------

def _domain(sub, flag, exc) -> CliError:
    return CliError(EXIT_DOMAIN, f"{PROG} {sub}: error: {flag}: {exc}")


def _fixed_points(a, out):
    try:
        fp = cd.fixed_points(a.c)
    except ValueError as exc:
        raise _domain("fixed-points", "--c", exc) from None
    cyc = cd.three_cycle(a.c)
    stab = {t.value: cd.stability(a.c, t).cls.value for t in cd.Target}
    data = {"c": a.c, "a1": fp.a1, "a2": fp.a2, "alpha": cd.point_json(fp.alpha),
            "theta": cd.point_json(fp.theta),
            "cycle": [cd.point_json(q) for q in cyc.points()], "stability": stab}
    if a.json:
        out.write(dumps(data) + "\n")
    else:
        out.write(f"a1 = {fp.a1!r}\na2 = {fp.a2!r}\n")
        out.write(f"alpha = ({fp.alpha[0]!r}, {fp.alpha[1]!r})  {stab['Alpha']}\n")
        out.write(f"theta = ({fp.theta[0]!r}, {fp.theta[1]!r})  {stab['Theta']}\n")
        pts = ", ".join(f"({q[0]!r}, {q[1]!r})" for q in cyc.points())
        out.write(f"cycle = {pts}  {stab['Cycle']}\n")
    return EXIT_OK


def _classify(a, out):
    if a.direction == "forward":
        cls, rec = clf.classify_forward(a.point, a.c, a.max_iter, a.tol, a.mode,
                                        a.escape_radius)
    else:
        cls, rec = clf.classify_backward(a.point, a.c, a.max_iter, a.tol, a.cycle_tol,
                                         a.escape_radius)
    data = clf.verdict_json(cls, rec)
    if rec.failure_step is not None:
        data["failure_step"] = rec.failure_step
    if a.orbit:
        data["orbit"] = rec.to_json()["points"]
    out.write(dumps(data) + "\n")
    return EXIT_OK


def _orbit(a, out):
    rec = clf.orbit(a.point, a.c, a.steps, a.direction, regions=a.regions)
    if a.format == "csv":
        out.write(rec.to_csv())
    else:
        out.write(dumps(rec.to_json()) + "\n")
    return EXIT_OK


def _sequences(a, out):
    if a.kind == "bn" and a.w is None:
        raise CliError(EXIT_USAGE, f"{PROG} sequences: error: --w: required when --kind bn")
    flag = "--c"
    try:
        if a.kind == "bn":
            a2 = cd.fixed_points(a.c).a2
            if a.w < a2:
                flag = "--w"
                raise ValueError(f"w must be >= a2 = {a2!r}, got {a.w!r}")
        value = cd.sequences(a.kind, a.c, a.n, a.w)
    except ValueError as exc:
        raise _domain("sequences", flag, exc) from None
    out.write(dumps({"kind": a.kind, "c": a.c, "values": value}) + "\n")
    return EXIT_OK


def _certify(a, out):
    if not a.c_lo <= a.c_hi:
        raise CliError(EXIT_USAGE, f"{PROG} certify: error: --c-lo/--c-hi: need c-lo <= c-hi")
    if not (-1.0 < a.c_lo and a.c_hi < 0.0):
        raise _domain("certify", "--c-lo/--c-hi",
                      f"the interval must lie in -1 < c < 0, got [{a.c_lo!r}, {a.c_hi!r}]")
    opts = ic.CertifyOptions(r_max=a.r_max, max_depth=a.depth)
    certs = ic.certify_range(a.c_lo, a.c_hi, a.pieces, opts, a.workers)
    bad = [cert for cert in certs if not cert.certified]
    report = {"c": [a.c_lo, a.c_hi], "pieces": a.pieces, "max_depth": a.depth,
              "r_max": a.r_max, "claims": len(certs), "not_certified": len(bad),
              "results": ic.report_lines(certs)}
    _write_text(a.report, dumps(report) + "\n", "certify", "--report")
    out.write(f"{len(certs) - len(bad)}/{len(certs)} claims certified; report: {a.report}\n")
    for cert in bad:
        ci = cert.c_interval
        out.write(f"  {cert.status.value}: {cert.claim} on [{ci.lo!r}, {ci.hi!r}]\n")
    return EXIT_UNCERTIFIED if bad else EXIT_OK


def _render(a, out):
    direction = "forward" if a.which == "kplus" else "backward"
    window = a.window or (rd.KPLUS_WINDOW if a.which == "kplus" else rd.KMINUS_WINDOW)
    grid = rd.GridSpec(*window, *a.size)
    palette = dict(rd.FORWARD_PALETTE if direction == "forward" else rd.BACKWARD_PALETTE)
    if a.palette:
        try:
            extra = parse_palette(a.palette)
        except ValueError as exc:
            raise CliError(EXIT_USAGE, f"{PROG} render: error: --palette: {exc}") from None
        tags = {str(t): t for t in palette}
        for name, rgb in extra.items():
            if name not in tags:
                raise CliError(EXIT_USAGE,
                               f"{PROG} render: error: --palette: unknown class {name!r}")
            palette[tags[name]] = rgb
    opts = rd.SweepOptions(a.max_iter, a.tol, a.cycle_tol, a.escape_radius)
    img, stats = rd.sweep(grid, a.c, direction, opts, a.workers)
    try:
        rd.write_ppm(img, palette, a.out)
    except OSError as exc:
        raise CliError(EXIT_DOMAIN, f"{PROG} render: error: --out: {exc.strerror}") from None
    if a.stats:
        _write_text(a.stats, dumps(stats.to_json()) + "\n", "render", "--stats")
    out.write(f"wrote {a.out} ({grid.width}x{grid.height})\n")
    return EXIT_OK


def _write_text(path, text, sub, flag):
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(EXIT_DOMAIN, f"{PROG} {sub}: error: {flag}: cannot write {path}: "
                                    f"{exc.strerror}") from None


HANDLERS = {"fixed-points": _fixed_points, "classify": _classify, "orbit": _orbit,
            "sequences": _sequences, "certify": _certify, "render": _render}


_NEGATIVE = re.compile(r"^-[0-9.]")


def _glue_negatives(argv):
    """Join '--flag -1,-1' into '--flag=-1,-1' so argparse does not read the
    value as an option; plain negative numbers already parse, lists do not."""
    out = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and _NEGATIVE.match(tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def _config_path(argv):
    pre = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv)
    return known.config


def run(argv=None, out=None, err=None) -> int:
    argv = _glue_negatives(sys.argv[1:] if argv is None else argv)
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        cfg = load_config(_config_path(argv))
    except ConfigError as exc:
        err.write(f"{PROG}: error: --config: {exc}\n")
        return EXIT_USAGE
    parser = build_parser(cfg)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    except _UsageError as exc:
        msg = str(exc)
        if msg.startswith("argument "):
            msg = msg[len("argument "):]
        err.write(exc.parser.format_usage())
        err.write(f"{exc.parser.prog}: error: {msg}\n")
        return EXIT_USAGE
    try:
        return HANDLERS[args.command](args, out)
    except CliError as exc:
        err.write(str(exc) + "\n")
        return exc.code
    except (cd.DynamicsError, ValueError) as exc:
        err.write(f"{PROG} {args.command}: error: {exc}\n")
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
