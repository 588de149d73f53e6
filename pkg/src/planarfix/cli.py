"""Command-line front end.

Exit codes: 0 ok, 1 I/O, 2 validation, 3 query on the curve, 4 maps do not
commute, 5 localization failed (including unbounded orbits).
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from planarfix import io, svg
from planarfix.dynamics.counterexample import counterexample_family, default_points
from planarfix.dynamics.orbits import Box, orbit_curve
from planarfix.dynamics.theorem import TheoremConfig, locate_common_fixed_point, orbit_samples
from planarfix.errors import (
    AngleHypothesisViolated,
    CommutationViolation,
    DecompositionFailed,
    DynamicsError,
    GeometryConstraintViolated,
    LocalizationFailure,
    PlanarFixError,
    PointOnCurve,
    UnboundedOrbit,
)
from planarfix.untangle import DecomposeConfig, decompose
from planarfix.winding import winding_number

EXIT_OK, EXIT_IO, EXIT_INVALID, EXIT_ON_CURVE, EXIT_COMMUTE, EXIT_LOCALIZE = range(6)


class CliError(Exception):
    def __init__(self, code, message, payload=None):
        super().__init__(message)
        self.code = code
        self.payload = payload


def _pair(text):
    try:
        x, y = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected x,y but got {text!r}") from None
    return (x, y)


def _domain(text):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        vals = []
    if len(vals) != 4 or vals[0] >= vals[2] or vals[1] >= vals[3]:
        raise argparse.ArgumentTypeError("expected x0,y0,x1,y1 with x0 < x1 and y0 < y1")
    return Box(*vals)


def _write_svg(path, text):
    if path:
        try:
            Path(path).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise CliError(EXIT_IO, f"cannot write {path}: {exc}") from None


# -- subcommands --------------------------------------------------------------

def cmd_decompose(args):
    curve = io.read_curve(args.input, args.tolerance)
    config = DecomposeConfig(separation=args.separation, budget=args.budget, seed=args.seed,
                             samples=args.samples)
    try:
        report = decompose(curve, config)
    except AngleHypothesisViolated as exc:
        raise CliError(EXIT_INVALID, str(exc),
                       {"error": "AngleHypothesisViolated",
                        "violations": [v.to_dict() for v in exc.violations]}) from None
    except DecompositionFailed as exc:
        raise CliError(EXIT_INVALID, str(exc),
                       {"error": "DecompositionFailed", "failed": list(exc.failed),
                        "report": exc.report.to_dict()}) from None
    out = report.to_dict()
    out["curve"] = curve.to_dict()
    io.write_json(args.output, out)
    _write_svg(args.svg, svg.decomposition_svg(out))


def cmd_winding(args):
    curve = io.read_curve(args.curve, args.tolerance)
    try:
        val = winding_number(curve, args.point).value
    except PointOnCurve as exc:
        raise CliError(EXIT_ON_CURVE, str(exc)) from None
    print(val)


def cmd_orbit_curve(args):
    f = io.map_from_json(_load_spec(args.map))
    oc = orbit_curve(f, args.point, args.length, args.tolerance or 1e-9)
    coords = oc.curve.coords
    if args.domain is not None and not np.all(args.domain.contains(coords)):
        raise UnboundedOrbit("orbit leaves the working domain")
    out = oc.curve.to_dict()
    out.update({"map": f.spec, "base_point": list(oc.base_point.as_tuple()), "length": oc.length})
    io.write_json(args.output, out)
    _write_svg(args.svg, svg.orbit_curve_svg(out))


def _load_spec(text):
    """A map spec given inline as JSON or as a path to a JSON file."""
    if text.lstrip().startswith("{"):
        return text
    return io.read_json(text)


def cmd_theorem(args):
    g_fixed, maps, seed = io.read_family(args.family)
    if args.point is not None:
        seed = args.point
    if seed is None:
        raise CliError(EXIT_INVALID, "no seed point: pass --point or add 'seed' to the family")
    kw = {"seed": args.seed}
    if args.domain is not None:
        kw["domain"] = args.domain
    if args.budget is not None:
        kw["budget"] = kw["return_budget"] = args.budget
    if args.tolerance is not None:
        kw["fixed_tol"] = args.tolerance
    config = TheoremConfig(**kw)
    try:
        cert = locate_common_fixed_point(g_fixed, maps, seed, config)
    except CommutationViolation as exc:
        raise CliError(EXIT_COMMUTE, str(exc),
                       {"error": "CommutationViolation", "pair": list(exc.pair),
                        "residual": exc.residual}) from None
    except (LocalizationFailure, UnboundedOrbit) as exc:
        payload = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, LocalizationFailure):
            payload.update(step=exc.step, trace=list(exc.trace))
        raise CliError(EXIT_LOCALIZE, str(exc), payload) from None
    except DynamicsError as exc:
        raise CliError(EXIT_LOCALIZE, str(exc), {"error": type(exc).__name__,
                                                 "message": str(exc)}) from None
    out = cert.to_dict()
    io.write_json(args.output, out)
    if args.svg:
        pts = orbit_samples(maps, seed, 2000)
        _write_svg(args.svg, svg.certificate_svg(dict(out, orbit_samples=pts.tolist())))


def cmd_counterexample(args):
    p, q = default_points(args.n)
    if args.p is not None:
        p = args.p
        if args.q is None:
            # halfway between the first two orbit points
            a = math.pi / args.n
            q = (math.cos(a) * p[0] - math.sin(a) * p[1], math.sin(a) * p[0] + math.cos(a) * p[1])
    q = args.q if args.q is not None else q
    try:
        _, _, report = counterexample_family(args.n, p, q, args.width)
    except GeometryConstraintViolated as exc:
        raise CliError(EXIT_INVALID, str(exc), {"error": "GeometryConstraintViolated",
                                                "message": str(exc)}) from None
    out = report.to_dict()
    io.write_json(args.output, out)
    _write_svg(args.svg, svg.counterexample_svg(out))
    if not report.passed:
        failed = [k for k, v in report.checks.items() if not v]
        raise CliError(EXIT_INVALID, f"checks failed: {', '.join(failed)}")


def cmd_render(args):
    data = io.read_json(args.input)
    try:
        text = svg.render_any(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(EXIT_INVALID, f"cannot render {args.input}: {exc}") from None
    if args.svg:
        _write_svg(args.svg, text)
    else:
        sys.stdout.write(text)


# -- parser -------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tolerance", type=float, default=None,
                        help="geometric tolerance (default: from input, else 1e-9)")
    common.add_argument("--seed", type=int, default=0, help="random seed for sampled checks")
    common.add_argument("--svg", metavar="PATH", help="also write an SVG drawing")
    common.add_argument("-o", "--output", metavar="PATH", default=None,
                        help="JSON output path (default: stdout)")

    parser = argparse.ArgumentParser(prog="planarfix", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", parents=[common], help="split a curve into simple loops")
    p.add_argument("input", help="curve JSON")
    p.add_argument("--separation", type=float, default=None,
                   help="detour offset for repeated segments")
    p.add_argument("--budget", type=int, default=None, help="vertex-resolution budget")
    p.add_argument("--samples", type=int, default=200, help="random samples per check")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("winding", parents=[common], help="winding number of a curve about a point")
    p.add_argument("curve", help="curve JSON")
    p.add_argument("point", type=_pair, help="x,y (use -- before negative values)")
    p.set_defaults(func=cmd_winding)

    p = sub.add_parser("orbit-curve", parents=[common], help="closed polygon through an orbit")
    p.add_argument("--map", required=True, help="map spec: inline JSON or a JSON file")
    p.add_argument("--point", type=_pair, required=True, help="base point x,y")
    p.add_argument("--length", type=int, required=True, help="number of iterates")
    p.add_argument("--domain", type=_domain, default=None, help="x0,y0,x1,y1")
    p.set_defaults(func=cmd_orbit_curve)

    p = sub.add_parser("theorem", parents=[common], help="locate a common fixed point")
    p.add_argument("family", help="family JSON: {g_fixed, maps, seed}")
    p.add_argument("--point", type=_pair, default=None, help="seed point x,y")
    p.add_argument("--domain", type=_domain, default=None, help="x0,y0,x1,y1")
    p.add_argument("--budget", type=int, default=None, help="iteration budget")
    p.set_defaults(func=cmd_theorem)

    p = sub.add_parser("counterexample", parents=[common],
                       help="fixed point outside the hull of an orbit")
    p.add_argument("n", type=int, help="rotation order on the unit disk")
    p.add_argument("--p", type=_pair, default=None, help="orbit seed x,y")
    p.add_argument("--q", type=_pair, default=None, help="target fixed point x,y")
    p.add_argument("--width", type=float, default=None, help="tube half-width")
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("render", parents=[common], help="draw a JSON report as SVG")
    p.add_argument("input", help="curve or report JSON")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except CliError as exc:
        if exc.payload is not None:
            sys.stdout.write(io.dumps(exc.payload))
        print(f"planarfix: {exc}", file=sys.stderr)
        return exc.code
    except (OSError, json.JSONDecodeError) as exc:
        print(f"planarfix: {exc}", file=sys.stderr)
        return EXIT_IO
    except io.SchemaError as exc:
        print(f"planarfix: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except UnboundedOrbit as exc:
        print(f"planarfix: {exc}", file=sys.stderr)
        return EXIT_LOCALIZE
    except PlanarFixError as exc:
        print(f"planarfix: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
