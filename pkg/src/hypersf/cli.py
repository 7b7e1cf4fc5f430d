"""Command-line interface: ``hypersf area|volume|eval|classify|sweep``.

Exit codes: 0 success, 2 usage or invalid geometry, 3 domain or region
error, 4 numerical non-convergence.  The default tolerance is 1e-10 and can
be overridden with the HYPERSF_TOL environment variable or ``--tol``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .errors import ConvergenceError, DomainError, HypersfError, OutOfRegionError
from .geometry import (
    GeometryParams,
    area_region_check,
    surface_area,
    volume,
    volume_decomposition,
)
from .hyp_series import PFQParams, continued_2f1, pfq_series
from .meijer_g import GSpec, g_decompose_value
from .mellin_barnes import mb_meijer_g, mb_pfq
from .quadrature import volume_slice_oracle
from .srivastava_daoust import load_spec, sd_classify, sd_eval
from .theorems import (
    angular_integral_oracle,
    radial_integral_oracle,
    theorem1_closed,
    theorem2_closed,
    theorem3_closed,
)

__all__ = ["RunRecord", "main", "fmt", "default_tol"]

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_CONVERGENCE = 0, 2, 3, 4
SWEEP_HEADER = ("param", "value", "area_closed", "area_oracle", "rel_err", "volume")


class UsageError(Exception):
    pass


def fmt(x) -> str:
    """Decimal text with 15 significant digits; complex as re+imj."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (complex, np.complexfloating)):
        z = complex(x)
        if z.imag == 0:
            return f"{z.real:.15g}"
        return f"{z.real:.15g}{z.imag:+.15g}j"
    if isinstance(x, (int, float, np.integer, np.floating)):
        return f"{float(x):.15g}"
    return str(x)


def _rel(x, ref) -> float:
    x, ref = complex(x), complex(ref)
    return abs(x - ref) / abs(ref) if ref != 0 else abs(x)


@dataclass
class RunRecord:
    command: str
    inputs: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    oracle: dict | None = None
    agreement: str | None = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunRecord":
        return cls(**json.loads(text))

    def to_text(self) -> str:
        lines = [f"command: {self.command}"]
        for title, block in (("input", self.inputs), ("output", self.outputs), ("oracle", self.oracle)):
            for k in sorted(block or {}):
                lines.append(f"{title} {k} = {block[k]}")
        if self.agreement is not None:
            lines.append(f"agreement = {self.agreement}")
        return "\n".join(lines)


def default_tol() -> float:
    env = os.environ.get("HYPERSF_TOL")
    if env is None:
        return 1e-10
    try:
        tol = float(env)
    except ValueError:
        raise UsageError(f"HYPERSF_TOL={env!r} is not a number") from None
    if not tol > 0:
        raise UsageError("HYPERSF_TOL must be positive")
    return tol


def _tol(args) -> float:
    tol = args.tol if args.tol is not None else default_tol()
    if not (tol > 0 and math.isfinite(tol)):
        raise UsageError("--tol must be a positive number")
    return tol


def _geometry(args, **override) -> GeometryParams:
    vals = {k: getattr(args, k) for k in ("a", "b", "c", "H")}
    vals.update(override)
    try:
        return GeometryParams(vals["a"], vals["b"], vals["c"], vals["H"],
                              allow_circular=args.allow_circular)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc


def _geometry_inputs(p: GeometryParams) -> dict:
    return {"a": fmt(p.a), "b": fmt(p.b), "c": fmt(p.c), "H": fmt(p.H)}


def _complex_arg(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _number_list(text: str) -> list:
    if text.strip() == "":
        return []
    return [_complex_arg(t) for t in text.split(",")]


def _plain(z):
    z = complex(z)
    return z.real if z.imag == 0 else z


# ---------------------------------------------------------------- commands

def cmd_area(args) -> RunRecord:
    p = _geometry(args)
    tol = _tol(args)
    check = area_region_check(p)
    rec = RunRecord("area", dict(_geometry_inputs(p), method=args.method, tol=fmt(tol)))
    rec.outputs["x1"], rec.outputs["x2"], rec.outputs["x3"] = (fmt(v) for v in check.x)
    rec.outputs["region_ok"] = fmt(check.ok)
    if args.method != "all":
        res = surface_area(p, args.method, tol, strict=args.strict)
        rec.outputs["area"] = fmt(res.area)
        rec.outputs["method_used"] = res.method
        rec.outputs["est_error"] = fmt(res.est_error)
        if res.failed:
            rec.outputs["failed"] = "; ".join(res.failed)
        return rec
    oracle = surface_area(p, "oracle", tol)
    rec.oracle = {"area": fmt(oracle.area), "est_error": fmt(oracle.est_error)}
    if not check.ok:
        if args.strict:
            surface_area(p, "closed", tol, strict=True)
        rec.outputs["failed"] = "; ".join(check.failed)
        return rec
    closed = surface_area(p, "closed", tol)
    triple = surface_area(p, "triple", tol)
    rec.outputs["area_closed"] = fmt(closed.area)
    rec.outputs["area_triple"] = fmt(triple.area)
    rec.outputs["rel_err_closed_triple"] = fmt(_rel(closed.area, triple.area))
    rec.outputs["rel_err_closed_oracle"] = fmt(_rel(closed.area, oracle.area))
    rec.outputs["rel_err_triple_oracle"] = fmt(_rel(triple.area, oracle.area))
    rec.agreement = fmt(max(_rel(closed.area, oracle.area), _rel(triple.area, oracle.area)))
    return rec


def cmd_volume(args) -> RunRecord:
    p = _geometry(args)
    if p.H == 0:
        print("warning: degenerate cap (H = 0)", file=sys.stderr)
    parts = volume_decomposition(p)
    v = volume(p)
    q = volume_slice_oracle(p)
    rec = RunRecord("volume", _geometry_inputs(p))
    rec.outputs = {"V": fmt(v), "V_c": fmt(parts.V_c), "V_b": fmt(parts.V_b),
                   "V_c_minus_V_b": fmt(parts.V)}
    rec.oracle = {"V_slice": fmt(q.value), "est_error": fmt(q.est_error)}
    rec.agreement = fmt(_rel(v, q.value) if q.value else abs(v))
    return rec


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"eval {args.function} needs --{', --'.join(missing)}")


def _series_meta(rec, sv, prefix=""):
    rec.outputs[prefix + "terms_used"] = str(sv.terms_used)
    rec.outputs[prefix + "est_error"] = fmt(sv.est_error)
    rec.outputs[prefix + "converged"] = fmt(bool(sv.converged))


def _eval_paths(rec, path, choices, compute):
    """Run each requested path; with 'all' also report agreement."""
    if path is None:
        path = choices[0]
    if path not in choices + ("all",):
        raise UsageError(f"--path {path} is not available here (choose from {', '.join(choices)}, all)")
    chosen = choices if path == "all" else (path,)
    values = {}
    for name in chosen:
        values[name] = compute(name)
        rec.outputs[f"value_{name}" if path == "all" else "value"] = fmt(values[name])
    if path == "all" and len(values) > 1:
        ref = values[choices[0]]
        rec.agreement = fmt(max(_rel(v, ref) for v in values.values()))
    return values


def cmd_eval(args) -> RunRecord:
    tol = _tol(args)
    fn = args.function
    rec = RunRecord("eval", {"function": fn})
    if fn == "2f1":
        _need(args, "a", "b", "c", "z")
        a, b, c, z = (_plain(args.a), _plain(args.b), _plain(args.c), _plain(args.z))
        rec.inputs.update(a=fmt(a), b=fmt(b), c=fmt(c), z=fmt(z))
        params = PFQParams((a, b), (c,), z)
        order = ("series", "mb", "continued") if abs(complex(z)) < 1 else ("continued", "mb")

        def compute(name):
            if name == "series":
                sv = pfq_series(params)
                _series_meta(rec, sv)
                return sv.value
            if name == "mb":
                return mb_pfq(params, tol=min(tol, 1e-12)).value
            return continued_2f1(a, b, c, z)
        _eval_paths(rec, args.path, order, compute)
    elif fn == "pfq":
        _need(args, "upper", "lower", "z")
        upper = [_plain(v) for v in args.upper]
        lower = [_plain(v) for v in args.lower]
        z = _plain(args.z)
        rec.inputs.update(upper=",".join(fmt(v) for v in upper),
                          lower=",".join(fmt(v) for v in lower), z=fmt(z))
        params = PFQParams(tuple(upper), tuple(lower), z)

        def compute(name):
            if name == "series":
                sv = pfq_series(params)
                _series_meta(rec, sv)
                return sv.value
            return mb_pfq(params, tol=min(tol, 1e-12)).value
        _eval_paths(rec, args.path, ("series", "mb"), compute)
    elif fn == "meijer_g":
        _need(args, "a_list", "b_list", "m", "n", "z")
        a = [_plain(v) for v in args.a_list]
        b = [_plain(v) for v in args.b_list]
        rec.inputs.update(a=",".join(fmt(v) for v in a), b=",".join(fmt(v) for v in b),
                          m=str(args.m), n=str(args.n), z=fmt(args.z))

        def compute(name):
            if name == "mb":
                sv = mb_meijer_g(a, b, args.m, args.n, args.z, tol=min(tol, 1e-12))
                _series_meta(rec, sv, "mb_")
                return sv.value
            return g_decompose_value(GSpec(a, b, args.m, args.n, args.z))
        _eval_paths(rec, args.path, ("mb", "decompose"), compute)
    elif fn == "sd":
        _need(args, "spec", "x")
        spec = _load_spec(args.spec)
        x = [_plain(v) for v in args.x]
        rec.inputs.update(spec=os.path.basename(args.spec), x=",".join(fmt(v) for v in x))

        def compute(name):
            sv = sd_eval(spec, x, tol=min(tol, 1e-14))
            _series_meta(rec, sv)
            return sv.value
        _eval_paths(rec, args.path, ("series",), compute)
    elif fn in ("theorem1", "theorem2"):
        _need(args, "sigma", "lam", "s")
        rec.inputs.update(sigma=fmt(args.sigma), **{"lambda": fmt(args.lam)}, s=fmt(args.s))
        closed = theorem1_closed if fn == "theorem1" else theorem2_closed

        def compute(name):
            if name == "closed":
                return closed(args.sigma, args.lam, args.s)
            return angular_integral_oracle(args.sigma, args.lam, args.s, tol=min(tol, 1e-12)).value
        _eval_paths(rec, args.path, ("closed", "quad"), compute)
    elif fn == "theorem3":
        _need(args, "lam", "s")
        rec.inputs.update(**{"lambda": fmt(args.lam)}, s=fmt(args.s))

        def compute(name):
            if name == "closed":
                return theorem3_closed(args.lam, args.s)
            return radial_integral_oracle(args.lam, args.s, tol=min(tol, 1e-12)).value
        _eval_paths(rec, args.path, ("closed", "quad"), compute)
    return rec


def _load_spec(path):
    try:
        return load_spec(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def cmd_classify(args) -> RunRecord:
    spec = _load_spec(args.spec)
    rec = RunRecord("classify", {"spec": os.path.basename(args.spec)})
    x = None
    if args.x is not None:
        x = [_plain(v) for v in args.x]
        rec.inputs["x"] = ",".join(fmt(v) for v in x)
    report = sd_classify(spec, x)
    rec.outputs = {
        "deltas": ",".join(str(d) for d in report.deltas),
        "case": report.case_label,
        "region_ok": "unknown" if report.region_ok is None else fmt(bool(report.region_ok)),
        "diagnostics": report.diagnostics,
    }
    return rec


def _sweep_values(args) -> list:
    if args.steps < 1:
        raise UsageError("--steps must be at least 1")
    lo, hi = args.start, args.stop
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise UsageError("sweep range must be finite")
    if args.steps > 1 and not lo < hi:
        raise UsageError(f"malformed range: --from {lo:g} must be below --to {hi:g}")
    return [float(v) for v in np.linspace(lo, hi, args.steps)]


def cmd_sweep(args):
    tol = _tol(args)
    rows = []
    records = []
    for value in _sweep_values(args):
        p = _geometry(args, **{args.param: value})
        oracle = surface_area(p, "oracle", tol)
        check = area_region_check(p)
        closed = surface_area(p, "closed", tol) if check.ok else None
        vol = volume(p)
        row = {
            "param": args.param,
            "value": fmt(value),
            "area_closed": fmt(closed.area) if closed else "",
            "area_oracle": fmt(oracle.area),
            "rel_err": fmt(_rel(closed.area, oracle.area)) if closed and oracle.area else "",
            "volume": fmt(vol),
        }
        rows.append(row)
        rec = RunRecord("sweep", dict(_geometry_inputs(p), param=args.param),
                        {k: row[k] for k in ("area_closed", "volume")},
                        {"area": row["area_oracle"]}, row["rel_err"] or None)
        records.append(rec)
    if args.out == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=SWEEP_HEADER, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        text = buf.getvalue()
    else:
        text = json.dumps([asdict(r) for r in records], indent=2, sort_keys=True) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return None


# ---------------------------------------------------------------- parser

def _add_geometry(p, required=True):
    for flag in ("a", "b", "c", "H"):
        p.add_argument(f"-{flag}", type=float, required=required)
    p.add_argument("--allow-circular", action="store_true", help="admit a == b")


def _add_common(p):
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--json", action="store_true", help="print a JSON run record")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hypersf", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("area", help="lateral area of a hyperboloid cap")
    _add_geometry(p)
    p.add_argument("--method", choices=("closed", "triple", "oracle", "all"), default="closed")
    p.add_argument("--strict", action="store_true", help="fail instead of falling back to quadrature")
    _add_common(p)
    p.set_defaults(handler=cmd_area)

    p = sub.add_parser("volume", help="volume of a hyperboloid cap")
    _add_geometry(p)
    _add_common(p)
    p.set_defaults(handler=cmd_volume)

    p = sub.add_parser("eval", help="evaluate a special function or integral formula")
    p.add_argument("function", choices=("2f1", "pfq", "meijer_g", "sd", "theorem1", "theorem2", "theorem3"))
    p.add_argument("-a", type=_complex_arg)
    p.add_argument("-b", type=_complex_arg)
    p.add_argument("-c", type=_complex_arg)
    p.add_argument("-z", type=_complex_arg)
    p.add_argument("--upper", type=_number_list)
    p.add_argument("--lower", type=_number_list)
    p.add_argument("--a-list", type=_number_list)
    p.add_argument("--b-list", type=_number_list)
    p.add_argument("-m", type=int)
    p.add_argument("-n", type=int)
    p.add_argument("--spec")
    p.add_argument("--x", type=_number_list)
    p.add_argument("--sigma", type=float)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--s", type=float)
    p.add_argument("--path", choices=("series", "mb", "continued", "decompose", "closed", "quad", "all"))
    _add_common(p)
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("classify", help="convergence case of a multivariable series")
    p.add_argument("--spec", required=True)
    p.add_argument("--x", type=_number_list)
    _add_common(p)
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("sweep", help="tabulate area and volume over one parameter")
    p.add_argument("--param", choices=("a", "b", "c", "H"), required=True)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    _add_geometry(p, required=False)
    p.add_argument("--out", choices=("csv", "json"), default="csv")
    p.add_argument("--output")
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(handler=cmd_sweep)
    return parser


def _check_sweep_base(args):
    missing = [f for f in ("a", "b", "c", "H") if f != args.param and getattr(args, f) is None]
    if missing:
        raise UsageError("sweep needs the other geometry flags: -" + ", -".join(missing))


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "sweep":
            _check_sweep_base(args)
        rec = args.handler(args)
    except UsageError as exc:
        print(f"hypersf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OutOfRegionError as exc:
        print(f"hypersf: out of region: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        print(f"hypersf: no convergence: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (DomainError, HypersfError) as exc:
        print(f"hypersf: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if rec is not None:
        print(rec.to_json() if args.json else rec.to_text())
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
