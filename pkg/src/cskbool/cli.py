"""Command line entry point: ``cskbool <command> [options]``.

Exit codes: 0 success, 2 invalid input, 3 numerical non-convergence,
4 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import cumulants as cc
from . import measures as ml
from . import variance as vc
from .config import DEFAULT, Config
from .errors import ConvergenceError, DomainError
from .exact import Polynomial, format_rational, parse_rational_list, to_rational
from .verify import verify_all

EXIT_OK, EXIT_INVALID, EXIT_NONCONVERGENCE, EXIT_VERIFY = 0, 2, 3, 4


class UsageError(DomainError):
    pass


# --- serialization -----------------------------------------------------------


def _real(x: float) -> str:
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return json.dumps(str(x))
    return format(x, ".17g")


def dumps(obj, indent: int = 0) -> str:
    """JSON with reals printed at 17 significant digits."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, Fraction):
        return json.dumps(format_rational(obj))
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float) or hasattr(obj, "dtype"):
        return _real(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        body = ",\n".join(f"{inner}{json.dumps(str(k))}: {dumps(v, indent + 1)}" for k, v in obj.items())
        return "{\n" + body + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        body = ",\n".join(f"{inner}{dumps(v, indent + 1)}" for v in obj)
        return "[\n" + body + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_real(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


# --- input helpers -----------------------------------------------------------


def _read_input(args) -> dict | None:
    if args.inline is not None:
        text = args.inline
    elif args.infile == "-":
        text = sys.stdin.read()
    elif args.infile is not None:
        with open(args.infile) as fh:
            text = fh.read()
    else:
        try:
            text = "" if sys.stdin.isatty() else sys.stdin.read()
        except (OSError, ValueError):
            text = ""
    if not text.strip():
        return None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON input: {exc}") from exc


def _grid(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"malformed grid {text!r}") from exc


_PRESETS = {
    "bernoulli": lambda arg: ml.bernoulli(),
    "mp": lambda arg: ml.marchenko_pastur(float(arg)),
    "dirac": lambda arg: ml.dirac(float(arg)),
}


def _measure(args) -> ml.Measure:
    if args.preset:
        name, _, arg = args.preset.partition(":")
        if name not in _PRESETS:
            raise UsageError(f"unknown preset {name!r}; choose from {sorted(_PRESETS)}")
        return _PRESETS[name](arg)
    data = _read_input(args)
    if data is None:
        raise UsageError("no measure given (use --in, --json, --preset or stdin)")
    return ml.Measure.from_json(data)


def _sequence(args, default_kind: str) -> cc.CumulantSequence:
    if args.values is not None:
        return cc.CumulantSequence(default_kind, tuple(parse_rational_list(args.values)))
    data = _read_input(args)
    if data is None:
        raise UsageError("no sequence given (use --values, --in, --json or stdin)")
    if isinstance(data, list):
        return cc.CumulantSequence(default_kind, tuple(parse_rational_list(data)))
    seq = cc.CumulantSequence.from_json(data)
    if seq.kind != default_kind:
        raise UsageError(f"input is a {seq.kind} sequence, expected {default_kind}")
    return seq


def _vfun(args) -> vc.VarianceFunction:
    if args.V is not None:
        return vc.VarianceFunction(Polynomial(parse_rational_list(args.V)), to_rational(args.m0))
    data = _read_input(args)
    if data is None:
        raise UsageError("no variance function given (use --V/--m0, --in, --json or stdin)")
    return vc.VarianceFunction.from_json(data)


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError("missing option(s): " + ", ".join("--" + n.replace("_", "-") for n in missing))


# --- commands ----------------------------------------------------------------


def cmd_cumulants(args, config):
    seq = _sequence(args, args.src)
    if args.N is not None:
        seq = cc.CumulantSequence(seq.kind, seq.values[: args.N])
    return cc.convert(seq, args.dst).to_json()


def cmd_bp(args, config):
    _require(args, "t")
    seq = _sequence(args, "moments")
    fn = cc.bp_inverse if args.inverse else cc.bp_map
    return fn(seq, to_rational(args.t)).to_json()


def _pvf_json(p: vc.PseudoVarianceExpr) -> dict:
    return p.to_json()


def cmd_vfun(args, config):
    action = args.action
    if action == "cubic-check":
        if args.a is not None or args.b is not None or args.c is not None:
            a, b, c = (to_rational(v or 0) for v in (args.a, args.b, args.c))
        else:
            V = _vfun(args)
            a, b, c = V.poly[1], V.poly[2], V.poly[3]
        return vc.cubic_class_check(a, b, c).to_json()
    V = _vfun(args)
    if action == "lagrange":
        N = args.N or config.series_order
        return vc.lagrange_boolean_cumulants(V, N).to_json()
    if action == "free-cumulants":
        N = args.N or config.series_order
        return vc.free_cumulants_from_vf(V, N).to_json()
    if action == "free-power":
        _require(args, "alpha")
        return vc.vf_free_power(V, to_rational(args.alpha)).to_json()
    if action == "boolean-power":
        _require(args, "alpha")
        if args.pseudo:
            return _pvf_json(vc.pvf_boolean_power(vc.vf_to_pseudo(V), to_rational(args.alpha)))
        return vc.vf_boolean_power(V, to_rational(args.alpha)).to_json()
    if action == "bt":
        _require(args, "t")
        return vc.vf_bt(V, to_rational(args.t)).to_json()
    if action == "mixed":
        _require(args, "alpha")
        return vc.vf_mixed_power(V, to_rational(args.alpha), args.order).to_json()
    if action == "affine":
        _require(args, "gamma", "delta")
        return _pvf_json(vc.pvf_affine(vc.vf_to_pseudo(V), to_rational(args.gamma), to_rational(args.delta)))
    if action == "pseudo":
        return _pvf_json(vc.vf_to_pseudo(V))
    if action == "bijection":
        out = vc.vf_bijection_pair(V, args.direction)
        cls = vc.cubic_membership(out)
        return {**out.to_json(), "cubic_class": cls.to_json() if cls else None}
    if action == "hankel":
        # Levy-Khinchin measure: int x^{n-1} drho = r_{n+1}
        size = args.size
        r = vc.lagrange_boolean_cumulants(V, 2 * size).values[1:]
        return cc.hankel_psd_check(r, size).to_json()
    raise UsageError(f"unknown vfun action {action!r}")


def cmd_transform(args, config):
    nu = _measure(args)
    grid = ml.transform_grid(nu, _grid(args.z_grid), config)
    if args.format == "csv":
        return _csv(["z", "G", "K"], grid.rows())
    return {"z": list(grid.points), "G": list(grid.G), "K": list(grid.K)}


def cmd_domain(args, config):
    return ml.means_domain(_measure(args), config).to_json()


def _parallel(fn, items, jobs: int):
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(i) for i in items]


def cmd_pseudovar(args, config):
    nu = _measure(args)
    dom = ml.means_domain(nu, config)
    ms = _grid(args.m_grid)
    vals = _parallel(lambda m: ml.pseudo_variance_numeric(nu, m, config, dom), ms, args.jobs)
    if args.format == "csv":
        return _csv(["m", "pseudo_variance"], zip(ms, vals))
    return {"m": ms, "pseudo_variance": vals}


def cmd_convolve(args, config):
    if not args.boolean:
        raise UsageError("only --boolean convolution powers of atomic measures are supported")
    _require(args, "alpha")
    nu = _measure(args)
    mu = ml.boolean_power_atomic(nu, to_rational(args.alpha), args.method)
    if args.format == "csv":
        return _csv(["x", "p"], mu.atoms)
    return mu.to_json()


def cmd_member(args, config):
    _require(args, "m")
    nu = _measure(args)
    xs = _grid(args.x_grid)
    import numpy as np

    f = ml.csk_member_density(nu, float(args.m), np.array(xs), config)
    f = np.broadcast_to(f, (len(xs),)).tolist()
    if args.format == "csv":
        return _csv(["x", "density"], zip(xs, f))
    return {"m": float(args.m), "x": xs, "density": f}


def cmd_verify(args, config):
    if args.numeric_tol is not None:
        config = config.updated(verify_numeric_tol=args.numeric_tol)
    report = verify_all(config, N=args.N, jobs=args.jobs)
    if args.format == "csv":
        rows = [
            (c.name, c.suite, "pass" if c.passed else "fail", c.deviation, c.tolerance, c.anchor)
            for c in report.checks
        ]
        out = _csv(["check", "suite", "status", "deviation", "tolerance", "anchor"], rows)
    else:
        out = report.to_json()
    return out, (EXIT_OK if report.passed else EXIT_VERIFY)


COMMANDS = {
    "cumulants": cmd_cumulants,
    "bp": cmd_bp,
    "vfun": cmd_vfun,
    "transform": cmd_transform,
    "domain": cmd_domain,
    "pseudovar": cmd_pseudovar,
    "convolve": cmd_convolve,
    "member": cmd_member,
    "verify": cmd_verify,
}


# --- parser --------------------------------------------------------------------


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    io_ = common.add_argument_group("input/output")
    io_.add_argument("--in", dest="infile", help="read JSON input from this file (- for stdin)")
    io_.add_argument("--json", dest="inline", help="inline JSON input")
    io_.add_argument("--out", dest="outfile", help="write output here instead of stdout")
    io_.add_argument("--format", choices=("json", "csv"), default="json")
    num = common.add_argument_group("numerics")
    num.add_argument("--config", help="JSON file overriding numeric defaults")
    num.add_argument("--quad-nodes", type=_positive_int)
    num.add_argument("--quad-tol", type=_positive_float)
    num.add_argument("--bisection-tol", type=_positive_float)
    num.add_argument("--transform-tol", type=_positive_float)
    num.add_argument("--jobs", type=_positive_int, default=1, help="threads for grid points")

    measure = argparse.ArgumentParser(add_help=False)
    measure.add_argument("--preset", help="bernoulli, mp:<a> or dirac:<c>")

    p = argparse.ArgumentParser(prog="cskbool", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("cumulants", parents=[common], help="convert between sequence kinds")
    s.add_argument("--from", dest="src", choices=cc.KINDS, default="moments")
    s.add_argument("--to", dest="dst", choices=cc.KINDS, required=True)
    s.add_argument("--values", help="comma separated rationals")
    s.add_argument("--N", type=_positive_int, help="truncate to the first N entries")

    s = sub.add_parser("bp", parents=[common], help="Bercovici-Pata map on moments")
    s.add_argument("--t", required=True, help="non-negative rational")
    s.add_argument("--inverse", action="store_true")
    s.add_argument("--values", help="comma separated moments")

    s = sub.add_parser("vfun", parents=[common], help="variance function algebra")
    s.add_argument(
        "action",
        choices=("free-power", "boolean-power", "bt", "mixed", "lagrange", "cubic-check", "affine",
                 "pseudo", "bijection", "free-cumulants", "hankel"),
    )
    s.add_argument("--V", help="coefficients of V, lowest degree first, e.g. '1,2'")
    s.add_argument("--m0", default="0")
    s.add_argument("--N", type=_positive_int)
    s.add_argument("--alpha")
    s.add_argument("--t")
    s.add_argument("--order", choices=("free_then_boolean", "boolean_then_free"), default="free_then_boolean")
    s.add_argument("--gamma")
    s.add_argument("--delta")
    s.add_argument("--direction", choices=("forward", "inverse"), default="forward")
    s.add_argument("--pseudo", action="store_true", help="boolean-power on the pseudo-variance")
    s.add_argument("--size", type=_positive_int, default=4, help="Hankel size")
    s.add_argument("--a")
    s.add_argument("--b")
    s.add_argument("--c")

    s = sub.add_parser("transform", parents=[common, measure], help="G and K on a grid")
    s.add_argument("--z-grid", required=True)

    sub.add_parser("domain", parents=[common, measure], help="domain of means")

    s = sub.add_parser("pseudovar", parents=[common, measure], help="numeric pseudo-variance")
    s.add_argument("--m-grid", required=True)

    s = sub.add_parser("convolve", parents=[common, measure], help="boolean power of an atomic measure")
    s.add_argument("--boolean", action="store_true")
    s.add_argument("--alpha")
    s.add_argument("--method", choices=("auto", "sturm", "bisect"), default="auto")

    s = sub.add_parser("member", parents=[common, measure], help="density of a family member")
    s.add_argument("--m", required=True)
    s.add_argument("--x-grid", required=True)

    s = sub.add_parser("verify", parents=[common], help="run every self-check")
    s.add_argument("--N", type=_positive_int)
    s.add_argument("--numeric-tol", type=_positive_float)
    return p


def _config(args) -> Config:
    config = DEFAULT
    if args.config:
        config = Config.from_file(args.config, config)
    return config.updated(
        quad_nodes=args.quad_nodes,
        quad_tol=args.quad_tol,
        bisection_tol=args.bisection_tol,
        transform_tol=args.transform_tol,
    )


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    status = EXIT_OK
    try:
        config = _config(args)
        result = COMMANDS[args.command](args, config)
        if isinstance(result, tuple):
            result, status = result
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (DomainError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    text = result if isinstance(result, str) else dumps(result) + "\n"
    if args.outfile:
        with open(args.outfile, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
