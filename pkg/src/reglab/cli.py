"""Command-line entry point: ``reglab <verb> [options]``.

Every verb builds one JSON document (see :mod:`reglab.serialize`).  With
``--json PATH`` (or ``--json -`` for stdout) the document is written out;
otherwise a short text summary is printed.  Exit codes: 0 success, 1 the
engine reported a non-regular or failed result, 2 bad input.
"""

import argparse
import os
import random
import sys
import time
from fractions import Fraction

from . import serialize as ser
from .arclift import ArcGerm, ArcLiftError, lift_arc, verify_lift
from .images import (
    PipelineError,
    WitnessError,
    WitnessRequest,
    complement_map,
    dense_image_compose,
    punctured_plane_certificate,
    quadrant_maps,
    quadrant_witness,
    regular_positivity_certificate,
)
from .maps import PolyMap
from .mpoly import MPoly
from .parser import ParseError, parse_expression, parse_point, to_text
from .ratfunc import RatFunc
from .realsolve import ZeroSetNotFinite, finite_real_zeros
from .resolution import REGULAR, RegularizationError, ResolutionConfig, regularize_map, resolve
from .scalar import DEFAULT_MAX_DEGREE, scalar_str

EXIT_OK = 0
EXIT_ENGINE = 1
EXIT_INPUT = 2


class InputError(ValueError):
    pass


def _read(text):
    """``-`` means: read the expression from stdin."""
    if text == "-":
        data = sys.stdin.read().strip()
        if not data:
            raise InputError("empty input on stdin")
        return data
    return text


def _plane_vars(found):
    if set(found) <= {"x", "y"}:
        return ("x", "y")
    if len(found) != 2:
        raise InputError(f"expected a function of two variables, got {list(found) or 'none'}")
    return tuple(found)


def _parse_plane(text):
    expr = parse_expression(text)
    found = expr.domain_vars if isinstance(expr, PolyMap) else expr.vars
    return parse_expression(text, _plane_vars(found))


def _as_ratfunc(obj):
    return obj if isinstance(obj, RatFunc) else RatFunc.from_poly(obj)


# verbs ----------------------------------------------------------------------------


def cmd_resolve(args, cfg):
    obj = _parse_plane(_read(args.expression))
    if isinstance(obj, PolyMap):
        try:
            chain, pulled, traces = regularize_map(obj.components, cfg)
        except RegularizationError as exc:
            body = {"component": exc.index, "trace": ser.resolution_trace_to_json(exc.trace)}
            return body, exc.trace.status, {}
        body = {
            "composite": ser.map_to_json(chain),
            "pulled_back": [ser.ratfunc_to_json(c) for c in pulled],
            "traces": [ser.resolution_trace_to_json(t) for t in traces],
        }
        certs = {"zero_free": [t.certificate.as_dict() for t in traces if t.certificate is not None]}
        return body, REGULAR, certs
    trace = resolve(_as_ratfunc(obj), cfg)
    body = ser.resolution_trace_to_json(trace)
    certs = {"zero_free": trace.certificate.as_dict()} if trace.certificate is not None else {}
    return body, trace.status, certs


def cmd_lift(args, cfg):
    obj = parse_expression(_read(args.arc))
    if not isinstance(obj, PolyMap) or len(obj.components) != 2:
        raise InputError("an arc is a pair of polynomials in one variable, e.g. (s, s^2)")
    if len(obj.domain_vars) > 1:
        raise InputError("an arc depends on a single variable")
    comps = []
    for c in obj.components:
        if not c.is_polynomial():
            raise InputError("arc components must be polynomials")
        comps.append(c.as_poly())
    var = obj.domain_vars[0] if obj.domain_vars else "s"
    center = parse_point(args.center) if args.center else (Fraction(0), Fraction(0))
    if len(center) != 2:
        raise InputError("the centre is a point of the plane")
    gamma = ArcGerm.from_polys(comps, cfg.series_order, var=var)
    lifts = lift_arc(gamma, cfg.series_order, center=center, max_degree=cfg.max_ext_degree)
    out = []
    all_ok = True
    for lift in lifts:
        ok = verify_lift(gamma, lift, center=center)
        all_ok = all_ok and ok
        rho, t = lift.arc.components()
        out.append(
            {
                "rho": [ser.scalar_to_json(c) for c in rho.coeffs],
                "t": [ser.scalar_to_json(c) for c in t.coeffs],
                "rho_text": str(rho),
                "t_text": str(t),
                "order": lift.arc.order,
                "epsilon": lift.epsilon,
                "delta": lift.delta,
                "verified": ok,
            }
        )
    body = {
        "arc": ser.map_to_json(obj),
        "center": ser.point_to_json(center),
        "case": lifts.case,
        "valuations": list(lifts.valuations),
        "lifts": out,
    }
    return body, "ok" if all_ok else "unverified", {}


def cmd_complement(args, cfg):
    points = [parse_point(_read(p)) for p in args.points]
    dims = {len(p) for p in points}
    if len(dims) > 1:
        raise InputError("points of different dimensions")
    n = dims.pop() if dims else args.dim
    pipe = complement_map(points, seed=cfg.seed, n=n)
    checks = pipe.verify_symbolic()
    certified, hits = pipe.avoidance_sample(args.samples, seed=cfg.seed)
    residuals = []
    if args.targets:
        rng = random.Random(cfg.seed)
        targets = []
        while len(targets) < args.targets:
            y = (Fraction(rng.randint(-100, 100), 10), Fraction(rng.randint(-100, 100), 10))
            if y not in pipe.points:
                targets.append(y)
        residuals = pipe.attain(targets)
    stages = [
        {
            "direction": ser.point_to_json(s.direction),
            "lambda": ser.scalar_to_json(s.lam),
            "mu": ser.scalar_to_json(s.mu),
            "H": str(s.H),
            "G": str(s.G),
        }
        for s in pipe.stages
    ]
    body = {
        "points": [ser.point_to_json(p) for p in pipe.points],
        "dimension": pipe.n,
        "squeeze": ser.map_to_json(pipe.squeeze),
        "squeeze_eps": ser.scalar_to_json(pipe.eps),
        "direction_draws": pipe.draws,
        "stages": stages,
        "base": ser.map_to_json(pipe.base),
        "avoidance": {"samples": args.samples, "certified": certified,
                      "hits": [ser.point_to_json(h) for h in hits]},
        "attain_residuals_advisory": residuals,
    }
    ok = all(checks.values()) and not hits and all(r < cfg.tol for r in residuals)
    return body, "ok" if ok else "failed", {"stage_checks": checks}


def cmd_quadrant(args, cfg):
    target = parse_point(" ".join(args.target) if len(args.target) == 1 else "(" + ", ".join(args.target) + ")")
    if len(target) != 2:
        raise InputError("the target is a point of the plane")
    if min(target) <= 0:
        raise InputError("the target must lie in the open quadrant")
    req = WitnessRequest(target, map=args.map, tol=cfg.tol, max_iter=args.max_iter)
    res = quadrant_witness(req)
    f, g = quadrant_maps()
    certs = {"f_at_origin": [scalar_str(c) for c in f.evaluate((0, 0))]}
    if args.map == "g":
        certs["positivity"] = regular_positivity_certificate()
    body = {
        "map": args.map,
        "target": ser.point_to_json(target),
        "witness": ser.point_to_json(res.point),
        "family": res.family,
        "iterations": res.iterations,
        "residual_advisory": res.residual,
    }
    return body, "ok" if res.residual < cfg.tol else "failed", certs


def cmd_compose(args, cfg):
    obj = _parse_plane(_read(args.map))
    comps = obj.components if isinstance(obj, PolyMap) else (_as_ratfunc(obj),)
    X = []
    for c in comps:
        for p in finite_real_zeros(c.den, cfg.max_ext_degree):
            if p.coords not in X:
                X.append(p.coords)
    report = dense_image_compose(comps, X, samples=args.samples, seed=cfg.seed)
    body = {
        "indeterminacy": [ser.point_to_json(p) for p in X],
        "inner": ser.map_to_json(report.inner),
        "components": [ser.ratfunc_to_json(c) for c in report.components],
        "regular": report.regular,
        "max_residual_advisory": report.max_residual,
    }
    certs = {"zero_free": [c.as_dict() for c in report.certificates]}
    if X == [(0, 0)]:
        certs["origin_avoided"] = punctured_plane_certificate(report.inner)
    return body, REGULAR if report.regular else "not-regular", certs


def cmd_eval(args, cfg):
    obj = parse_expression(_read(args.expression))
    point = parse_point(args.at)
    if isinstance(obj, PolyMap):
        if len(point) != len(obj.domain_vars):
            raise InputError(f"expected {len(obj.domain_vars)} coordinates")
        value = [ser.scalar_to_json(v) for v in obj.evaluate(point)]
    else:
        vars = obj.vars
        if len(point) != len(vars):
            raise InputError(f"expected {len(vars)} coordinates for variables {list(vars)}")
        if isinstance(obj, MPoly):
            value = ser.scalar_to_json(obj.evaluate(point))
        else:
            den = obj.den.evaluate(point)
            if den == 0:
                raise InputError("the denominator vanishes at this point")
            value = ser.scalar_to_json(obj.num.evaluate(point) / den)
    return {"expression": to_text(obj), "point": ser.point_to_json(point), "value": value}, "ok", {}


VERBS = {
    "resolve": cmd_resolve,
    "lift": cmd_lift,
    "complement": cmd_complement,
    "quadrant-verify": cmd_quadrant,
    "compose": cmd_compose,
    "eval": cmd_eval,
}

SUCCESS = {REGULAR, "ok"}


# argument parsing ----------------------------------------------------------------------


def _env_seed():
    raw = os.environ.get("REGLAB_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        return 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed (default $REGLAB_SEED or 0)")
    common.add_argument("--max-steps", type=int, default=argparse.SUPPRESS, help="blow-up step cap")
    common.add_argument("--order", type=int, default=argparse.SUPPRESS, help="series truncation order")
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS, help="numeric tolerance")
    common.add_argument("--max-ext-degree", type=int, default=argparse.SUPPRESS,
                        help="largest algebraic extension degree")
    common.add_argument("--json", metavar="PATH", default=argparse.SUPPRESS,
                        help="write the JSON document to PATH ('-' for stdout)")
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS, help="no text summary")

    parser = argparse.ArgumentParser(prog="reglab", description="Regulous and regular maps on the plane.",
                                     parents=[common])
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("resolve", parents=[common], help="resolve the indeterminacy of f or of a map")
    p.add_argument("expression")

    p = sub.add_parser("lift", parents=[common], help="lift an arc through the double oriented blow-up")
    p.add_argument("arc")
    p.add_argument("--center", default=None, help="blow-up centre, e.g. '(1, 0)'")

    p = sub.add_parser("complement", parents=[common], help="polynomial map onto the complement of points")
    p.add_argument("points", nargs="*", help="points such as '(0, 0)'")
    p.add_argument("--dim", type=int, default=2, help="dimension when no point is given")
    p.add_argument("--samples", type=int, default=1000, help="avoidance samples")
    p.add_argument("--targets", type=int, default=10, help="random targets to attain")

    p = sub.add_parser("quadrant-verify", parents=[common], help="witness a target in the open quadrant")
    p.add_argument("--map", choices=("f", "g"), default="f")
    p.add_argument("--target", nargs="+", required=True, help="two rationals, or a point '(a, b)'")
    p.add_argument("--max-iter", type=int, default=10_000)

    p = sub.add_parser("compose", parents=[common], help="regular map with the same image as a regulous map")
    p.add_argument("map")
    p.add_argument("--samples", type=int, default=0)

    p = sub.add_parser("eval", parents=[common], help="exact evaluation at a rational point")
    p.add_argument("expression")
    p.add_argument("--at", required=True, help="point such as '(1/2, 3)'")
    return parser


def _config(args):
    return ResolutionConfig(
        max_steps=getattr(args, "max_steps", 64),
        max_ext_degree=getattr(args, "max_ext_degree", DEFAULT_MAX_DEGREE),
        seed=getattr(args, "seed", _env_seed()),
        series_order=getattr(args, "order", 12),
        tol=getattr(args, "tol", 1e-9),
    )


def _emit(doc, args, summary):
    target = getattr(args, "json", None)
    text = ser.dumps(doc)
    if target == "-":
        sys.stdout.write(text)
    elif target:
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(text)
    if summary is not None and target != "-" and not getattr(args, "quiet", False):
        print(summary)


def _summary(verb, status, body):
    if verb == "resolve" and "steps" in body:
        return f"{status}: {body['blowups']} blow-up(s); final {body['final']['text']}"
    if verb == "lift":
        flags = ", ".join(str(l["verified"]) for l in body["lifts"])
        lines = [f"{body['case']}: {len(body['lifts'])} lift(s), verified [{flags}]"]
        lines += [f"  rho = {l['rho_text']}\n  t   = {l['t_text']}" for l in body["lifts"]]
        return "\n".join(lines)
    if verb == "quadrant-verify":
        return f"{status}: residual {body['residual_advisory']:.3e} after {body['iterations']} bisection steps"
    if verb == "complement":
        return (f"{status}: {len(body['stages'])} stage(s); avoidance {body['avoidance']['certified']}/"
                f"{body['avoidance']['samples']}")
    if verb == "eval":
        return str(body["value"])
    return status


def run(argv=None):
    """Run one command; returns ``(exit_code, document)``."""
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    seed = None
    try:
        cfg = _config(args)
        seed = cfg.seed
        body, status, certs = VERBS[args.verb](args, cfg)
        code = EXIT_OK if status in SUCCESS else EXIT_ENGINE
    except (ParseError, InputError, ValueError) as exc:
        body, status, certs, code = {"error": {"type": type(exc).__name__, "message": str(exc)}}, "input-error", {}, EXIT_INPUT
    except (ArcLiftError, PipelineError, WitnessError, ZeroSetNotFinite, ArithmeticError, RuntimeError) as exc:
        body, status, certs, code = {"error": {"type": type(exc).__name__, "message": str(exc)}}, "engine-error", {}, EXIT_ENGINE
    timings = {"total_seconds": round(time.perf_counter() - started, 6)}
    doc = ser.document(_echo(args), seed, body, status, certs, timings)
    return code, doc, args


def _echo(args):
    # floats such as --tol are echoed as the text they were parsed from
    out = {k: repr(v) if isinstance(v, float) else v for k, v in vars(args).items() if k not in ("json", "quiet")}
    return {k: out[k] for k in sorted(out)}


def main(argv=None):
    try:
        code, doc, args = run(argv)
    except SystemExit as exc:
        # argparse has already printed usage and the message
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    error = doc["result"].get("error")
    if error:
        print(f"reglab: {error['message']}", file=sys.stderr)
        if getattr(args, "json", None):
            _emit(doc, args, None)
    else:
        _emit(doc, args, _summary(args.verb, doc["status"], doc["result"]))
    return code


if __name__ == "__main__":
    sys.exit(main())
