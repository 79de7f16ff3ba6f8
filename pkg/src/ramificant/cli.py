"""Command-line entry point: ``ramificant <command> [options]``.

Every command prints a single JSON report on stdout::

    {"command": ..., "inputs": ..., "outputs": ..., "diagnostics": ...}

Exit status is 0 on success, 2 on usage errors and 3 when a numeric
tolerance could not be met.  Polynomial arguments take inline JSON, ``@path``
or a plain path to a JSON file.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import time
from fractions import Fraction

import numpy as np

from . import __version__
from .exact_algebra import CPoly, NormalizedP0, UsageError, parse_complex
from .integrability import DisagreementError, check_integrability
from .ode import build_ode, ode_residuals, wronskian_check
from .periods import (
    PeriodMatrix,
    SingularMatrix,
    jacobian_check,
    period_matrix,
    ramificant_det,
    recover_coefficients,
    row_identity_residual,
    separation_check,
    verify_identity,
)
from .quadrature import (
    QuadConfig,
    RayIntegralSpec,
    TailBoundFailure,
    ToleranceNotMet,
    integrate_ray,
    integrate_segment,
)
from .reduction import identity_rel_error, reduce_primitive
from .universal_pi import RangeError, delta_closed_form, delta_zero, delta_zero_audit, pi_polynomial

log = logging.getLogger("ramificant")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_TOLERANCE = 3

SCHEMAS = {
    "p0": '{"d": n, "a": [[re, im], ...]}  (a_0..a_{d-1}; leading coefficient -1/d implied)',
    "q": "[[re, im], ...]  (ascending degree)",
    "poly": "[[re, im], ...]  (ascending degree, any leading coefficient)",
    "matrix": '{"d": n, "entries": [[[re, im], ...], ...], "est_error": x}',
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def to_jsonable(obj):
    """Recursively convert complex numbers, arrays and library objects."""
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.floating, np.integer)):
        return to_jsonable(obj.item())
    if isinstance(obj, np.complexfloating):
        return to_jsonable(complex(obj))
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


def load_json_arg(text: str, what: str):
    if text.startswith("@"):
        path = text[1:]
    else:
        try:
            return json.loads(text)
        except json.JSONDecodeError:
            path = text
    if not os.path.exists(path):
        raise UsageError(f"--{what}: neither valid JSON nor an existing file: {text!r}")
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise UsageError(f"--{what}: {path} is not valid JSON ({exc})") from None


def _p0(args) -> NormalizedP0:
    return NormalizedP0.from_json(load_json_arg(args.p0, "p0"))


def _cpoly(text: str, what: str) -> CPoly:
    data = load_json_arg(text, what)
    if not isinstance(data, (list, dict)):
        raise UsageError(f"--{what} must be {SCHEMAS['q']}")
    return CPoly.from_json(data)


def _cfg(args) -> QuadConfig:
    return QuadConfig(args.rel_tol, args.abs_floor, args.max_subdivisions, args.tail_tol)


def _complex_arg(text: str) -> complex:
    try:
        parts = [float(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"expected re,im but got {text!r}") from None
    if len(parts) == 1:
        parts.append(0.0)
    if len(parts) != 2:
        raise UsageError(f"expected re,im but got {text!r}")
    return parse_complex(parts)


# -- commands -------------------------------------------------------------------


def cmd_pi(args):
    if args.degree < 1:
        raise UsageError("--degree must be >= 1")
    res = pi_polynomial(args.degree)
    out = {"d": res.d, "pi": res.pi.to_json(), "gradient": [g.to_json() for g in res.gradient]}
    if args.latex:
        out["latex"] = res.pi.to_latex()
    out["text"] = str(res.pi)
    return {"degree": args.degree}, out, {}


def cmd_delta(args):
    p0 = _p0(args)
    pi = pi_polynomial(p0.d).pi(*p0.a)
    out = {
        "closed_form": delta_closed_form(p0),
        "delta_zero": delta_zero(p0.d),
        "pi_value": complex(pi),
        "audit": delta_zero_audit(p0.d),
    }
    return {"p0": p0}, out, {}


def cmd_periods(args):
    p0 = _p0(args)
    cfg = _cfg(args)
    m = period_matrix(p0, cfg)
    out = {
        **m.to_json(),
        "det": ramificant_det(m),
        "row_identity_residual": row_identity_residual(m, p0),
        "separation": separation_check(m),
    }
    return {"p0": p0, "config": cfg}, out, {"est_error": m.est_error, "nodes_used": m.nodes_used}


def cmd_check_ramificant(args):
    p0 = _p0(args)
    cfg = _cfg(args)
    rep = verify_identity(p0, cfg)
    rep["delta_closed_form"] = delta_closed_form(p0)
    diag = {"est_error": rep.pop("est_error"), "nodes_used": rep.pop("nodes_used")}
    return {"p0": p0, "config": cfg}, rep, diag


def cmd_reduce(args):
    p0 = _p0(args)
    q = _cpoly(args.q, "q")
    res = reduce_primitive(p0, q)
    return {"p0": p0, "q": q}, res, {"identity_rel_error": identity_rel_error(p0, q, res)}


def cmd_integrable(args):
    p0 = _p0(args)
    q = _cpoly(args.q, "q")
    cfg = _cfg(args)
    rep = check_integrability(p0, q, cfg, spread_tol=args.spread_tol)
    return {"p0": p0, "q": q, "config": cfg}, rep, {"est_error": rep.est_error}


def cmd_recover(args):
    m = PeriodMatrix.from_json(load_json_arg(args.matrix, "matrix"))
    rec = recover_coefficients(m)
    return {"matrix": m}, rec, {"est_error": m.est_error}


def cmd_jacobian(args):
    p0 = _p0(args)
    cfg = _cfg(args)
    rep = jacobian_check(p0, args.h, cfg)
    m = rep.pop("period_matrix")
    rep["period_entries"] = m.entries
    return {"p0": p0, "h": args.h, "config": cfg}, rep, {"est_error": m.est_error}


def cmd_ode(args):
    poly = _cpoly(args.poly, "poly")
    if poly.degree < 1:
        raise UsageError("--poly must have degree >= 1")
    res = build_ode(poly)
    pts = [_complex_arg(s) for s in args.points.split(";")] if args.points else [0.5, 1 + 1j, -0.7j]
    w = wronskian_check(poly, pts)
    out = {
        **res.to_json(),
        "wronskian_constant": w["wronskian_constant"],
        "wronskian": w,
        "max_residual": max(ode_residuals(res)),
    }
    return {"poly": poly}, out, {}


def cmd_integrate(args):
    p0 = _p0(args)
    cfg = _cfg(args)
    if (args.ray is None) == (args.to is None):
        raise UsageError("give exactly one of --ray l or --to re,im")
    if args.ray is not None:
        res = integrate_ray(RayIntegralSpec(p0, args.power, args.ray), cfg)
        inputs = {"p0": p0, "power": args.power, "ray": args.ray, "config": cfg}
    else:
        z = _complex_arg(args.to)
        res = integrate_segment(p0, args.power, z, cfg)
        inputs = {"p0": p0, "power": args.power, "to": z, "config": cfg}
    return inputs, res, {"est_error": res.est_error, "nodes_used": res.nodes_used}


def cmd_selftest(args):
    from .acceptance import run_all

    results = run_all(echo=lambda line: log.info(line))
    out = {
        "criteria": [
            {
                "number": r.number,
                "name": r.name,
                "passed": r.ok,
                "time_limit_s": r.time_limit,
                "details": r.details,
            }
            for r in results
        ],
        "all_passed": all(r.ok for r in results),
    }
    timings = {f"criterion_{r.number}": r.elapsed * 1000 for r in results}
    return {}, out, {"criterion_timings_ms": timings, "_failed": not out["all_passed"]}


COMMANDS = {
    "pi": cmd_pi,
    "delta": cmd_delta,
    "periods": cmd_periods,
    "check-ramificant": cmd_check_ramificant,
    "reduce": cmd_reduce,
    "integrable": cmd_integrable,
    "recover": cmd_recover,
    "jacobian": cmd_jacobian,
    "ode": cmd_ode,
    "integrate": cmd_integrate,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ramificant", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def quad_opts(p):
        g = p.add_argument_group("quadrature")
        g.add_argument("--rel-tol", type=float, default=1e-10)
        g.add_argument("--abs-floor", type=float, default=1e-14)
        g.add_argument("--max-subdivisions", type=int, default=60)
        g.add_argument("--tail-tol", type=float, default=1e-16)

    def common(p):
        p.add_argument("--timings", action="store_true", help="include wall-clock timings (non-deterministic)")
        p.add_argument("-v", "--verbose", action="store_true")

    p = sub.add_parser("pi", help="universal polynomial Pi_d")
    p.add_argument("--degree", "-d", type=int, required=True)
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="term list only (default)")
    fmt.add_argument("--latex", action="store_true")
    common(p)

    p = sub.add_parser("delta", help="closed-form Ramificant determinant")
    p.add_argument("--p0", required=True, help=SCHEMAS["p0"])
    common(p)

    for name, helptext in (
        ("periods", "period matrix Omega_kl"),
        ("check-ramificant", "numeric Delta vs Delta(0) exp(Pi_d)"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--p0", required=True, help=SCHEMAS["p0"])
        quad_opts(p)
        common(p)

    p = sub.add_parser("reduce", help="canonical decomposition of int q e^{P0}")
    p.add_argument("--p0", required=True, help=SCHEMAS["p0"])
    p.add_argument("--q", required=True, help=SCHEMAS["q"])
    common(p)

    p = sub.add_parser("integrable", help="integrability in finite terms")
    p.add_argument("--p0", required=True, help=SCHEMAS["p0"])
    p.add_argument("--q", required=True, help=SCHEMAS["q"])
    p.add_argument("--spread-tol", type=float, default=None, help="default max(1e-6, 100*est_error)")
    quad_opts(p)
    common(p)

    p = sub.add_parser("recover", help="coefficients of P0 from its period matrix")
    p.add_argument("--matrix", required=True, help=SCHEMAS["matrix"])
    common(p)

    p = sub.add_parser("jacobian", help="finite-difference Jacobian of the period map")
    p.add_argument("--p0", required=True, help=SCHEMAS["p0"])
    p.add_argument("--h", type=float, default=1e-4)
    quad_opts(p)
    common(p)

    p = sub.add_parser("ode", help="linear ODE annihilating z^k e^{P0}")
    p.add_argument("--poly", required=True, help=SCHEMAS["poly"])
    p.add_argument("--points", default=None, help="Wronskian sample points 're,im;re,im;...'")
    common(p)

    p = sub.add_parser("integrate", help="int t^k e^{P0} along a ray or a segment")
    p.add_argument("--p0", required=True, help=SCHEMAS["p0"])
    p.add_argument("--power", type=int, default=0)
    p.add_argument("--ray", type=int, default=None, help="direction index l in 1..d")
    p.add_argument("--to", default=None, help="segment end point re,im")
    quad_opts(p)
    common(p)

    p = sub.add_parser("selftest", help="run the acceptance suite")
    common(p)
    return parser


def _emit(report: dict, stream) -> None:
    stream.write(json.dumps(to_jsonable(report), indent=2, sort_keys=False) + "\n")


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    report = {"command": argv[0] if argv else None, "inputs": {}, "outputs": None, "diagnostics": {}}
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing command; choose one of: " + ", ".join(COMMANDS))
    except UsageError as exc:
        report["error"] = {"type": "usage", "message": str(exc), "schemas": SCHEMAS}
        report["usage"] = parser.format_usage().strip()
        _emit(report, stdout)
        return EXIT_USAGE
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    report["command"] = args.command
    t0 = time.perf_counter()
    code = EXIT_OK
    try:
        inputs, outputs, diag = COMMANDS[args.command](args)
        if diag.pop("_failed", False):
            code = EXIT_TOLERANCE
        if not args.timings:
            diag.pop("criterion_timings_ms", None)
        report.update(inputs=inputs, outputs=outputs, diagnostics=diag)
    except UsageError as exc:
        report["error"] = {"type": "usage", "message": str(exc), "schemas": SCHEMAS}
        code = EXIT_USAGE
    except ToleranceNotMet as exc:
        report["error"] = {
            "type": "tolerance",
            "message": str(exc),
            "estimate": exc.estimate,
            "achieved_error": exc.error,
            "nodes_used": exc.nodes_used,
        }
        code = EXIT_TOLERANCE
    except DisagreementError as exc:
        report["error"] = {"type": "disagreement", "message": str(exc), "report": exc.report}
        code = EXIT_TOLERANCE
    except RangeError as exc:
        report["error"] = {"type": "range", "message": str(exc), "exponent": exc.exponent}
        code = EXIT_TOLERANCE
    except (TailBoundFailure, SingularMatrix) as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        code = EXIT_TOLERANCE
    report["diagnostics"].setdefault("tolerances", _tolerances(args))
    if args.timings:
        report["diagnostics"]["timings_ms"] = {"total": (time.perf_counter() - t0) * 1000}
    log.debug("%s finished with exit code %d", args.command, code)
    _emit(report, stdout)
    return code


def _tolerances(args) -> dict:
    out = {}
    for name in ("rel_tol", "abs_floor", "max_subdivisions", "tail_tol", "spread_tol", "h"):
        if hasattr(args, name) and getattr(args, name) is not None:
            out[name] = getattr(args, name)
    return out


if __name__ == "__main__":
    sys.exit(main())
