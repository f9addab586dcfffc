"""Command-line front end.

Exit codes: 0 on success, 1 on a domain error, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import acceptance
from .adic import expand
from .classify import classify, classify_batch
from .errors import TwistedRabbitError
from .families import critical_orbit_roots, lambda_solutions, omega_orbits, ray_counts
from .reduce import reduce_full
from .render import RenderConfig, render_julia, write_image
from .stats import empirical_counts, exact_distribution, sigma_set_bounds
from .treelift import verify_corabbit, verify_Hminus, verify_Hplus, verify_rabbit

FORMAT_VERSION = 1


def _complex(text: str) -> complex:
    try:
        re_part, im_part = text.split(",")
        return complex(float(re_part), float(im_part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected RE,IM but got {text!r}")


def _size(text: str) -> tuple[int, int]:
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WIDTHxHEIGHT but got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON envelope")
    common.add_argument("--ascii", action="store_true", help="ASCII class names (cR_d for the corabbit)")

    parser = argparse.ArgumentParser(prog="twisted-rabbit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="class of D_x^m R_d")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-m", type=int, required=True)
    p.add_argument("--trace", action="store_true", help="also print the reduction trace")

    p = sub.add_parser("table", parents=[common], help="classes for a range of m")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("--from", dest="start", type=int, required=True)
    p.add_argument("--to", dest="stop", type=int, required=True)

    p = sub.add_parser("expand", parents=[common], help="base d^2 digits of m and sigma")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-m", type=int, required=True)

    p = sub.add_parser("stats", parents=[common], help="class distribution over Sigma_S")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-S", type=int, required=True)
    p.add_argument("--empirical", action="store_true", help="also enumerate Sigma_S exhaustively")

    p = sub.add_parser("verify-trees", parents=[common], help="lift every base-case tree")
    p.add_argument("-d", type=int, required=True)

    p = sub.add_parser("roots", parents=[common], help="period-3 parameters and their orbits")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("--lambda", dest="lam", action="store_true", help="also solve the lambda family")

    p = sub.add_parser("render", parents=[common], help="filled Julia set as a PPM image")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-c", type=_complex, required=True, metavar="RE,IM")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--center", type=_complex, default=0j, metavar="RE,IM")
    p.add_argument("--width", type=float, default=3.0, help="viewport width in the plane")
    p.add_argument("--size", type=_size, default=(512, 512), metavar="WxH")
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--escape-radius", type=float, default=None)

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance checks")
    p.add_argument("--quick", action="store_true", help="skip the long oracle sweep (check 3)")
    return parser


def _envelope(args, inputs: dict, results) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "command": args.command,
        "degree": getattr(args, "d", None),
        "inputs": inputs,
        "results": results,
    }


def _name(cls, args) -> str:
    return cls.name(ascii_only=args.ascii or args.json)


def cmd_classify(args, out):
    cls = classify(args.m, args.d)
    results = {"class": cls.name(ascii_only=True)}
    trace = None
    if args.trace:
        traced_cls, trace = reduce_full(args.m, args.d)
        assert traced_cls == cls
        results["trace"] = trace.to_json()
    if args.json:
        return _envelope(args, {"m": str(args.m)}, results)
    print(_name(cls, args), file=out)
    if trace is not None:
        for step in trace.steps:
            via = f" via {step.witness}" if step.witness != "id" else ""
            print(f"  {step.source} -> {step.target}  [{step.rule}{via}]", file=out)
    return None


def cmd_table(args, out):
    rows = classify_batch(range(args.start, args.stop + 1), args.d)
    if args.json:
        return _envelope(args, {"from": str(args.start), "to": str(args.stop)},
                         [{"m": str(m), "class": c.name(ascii_only=True)} for m, c in rows])
    width = max(len(str(m)) for m, _ in rows) if rows else 1
    print(f"{'m':>{width}}  D_x^m R_{args.d}", file=out)
    for m, c in rows:
        print(f"{m:>{width}}  {_name(c, args)}", file=out)
    return None


def cmd_expand(args, out):
    e = expand(args.m, args.d)
    if args.json:
        return _envelope(args, {"m": str(args.m)},
                         {"expansion": e.to_json(), "display": e.display(), "sigma": len(e.digits)})
    print(f"{e.display()}  sigma={len(e.digits)}", file=out)
    return None


def cmd_stats(args, out):
    exact = exact_distribution(args.d, args.S)
    emp = empirical_counts(args.d, args.S) if args.empirical else None
    lo, hi = sigma_set_bounds(args.d, args.S)
    if args.json:
        results = {"interval": [str(lo), str(hi)], "exact": exact.to_json()}
        if emp is not None:
            results["empirical"] = emp.to_json()
            results["match"] = emp.counts == exact.counts
        return _envelope(args, {"S": args.S, "empirical": args.empirical}, results)
    print(f"Sigma_{args.S} = [{lo}, {hi}], {exact.total} integers", file=out)
    header = f"{'class':<10} {'probability':>14} {'count':>10}"
    if emp is not None:
        header += f" {'enumerated':>11}"
    print(header, file=out)
    for c, p in exact.probabilities.items():
        line = f"{_name(c, args):<10} {str(p):>14} {exact.counts[c]:>10}"
        if emp is not None:
            line += f" {emp.counts[c]:>11}"
        print(line, file=out)
    if emp is not None:
        print("match" if emp.counts == exact.counts else "MISMATCH", file=out)
    return None


def tree_report(d: int) -> dict:
    return {
        "H_minus": {str(i): verify_Hminus(d, i) for i in range(-(d - 1), 0)},
        "H_plus": {str(i): verify_Hplus(d, i) for i in range(1, d)},
        "corabbit": verify_corabbit(d),
        "rabbit": verify_rabbit(d),
    }


def cmd_verify_trees(args, out):
    report = tree_report(args.d)
    ok = (all(report["H_minus"].values()) and all(report["H_plus"].values())
          and report["corabbit"] and report["rabbit"])
    if args.json:
        return _envelope(args, {}, dict(report, all_passed=ok)), 0 if ok else 1
    for key in ("H_minus", "H_plus"):
        for i, passed in report[key].items():
            print(f"{key} i={i}: {'ok' if passed else 'FAILED'}", file=out)
    print(f"corabbit tripod: {'ok' if report['corabbit'] else 'FAILED'}", file=out)
    print(f"rabbit tripod: {'ok' if report['rabbit'] else 'FAILED'}", file=out)
    return None, 0 if ok else 1


def _cjson(z: complex) -> list[float]:
    return [z.real, z.imag]


def cmd_roots(args, out):
    d = args.d
    roots = critical_orbit_roots(d)
    orbits = omega_orbits(roots, d)
    counts = ray_counts(d)
    lams = lambda_solutions(d) if args.lam else None
    if args.json:
        results = {
            "ray_counts": dict(zip(("total", "main", "components", "classes"), counts.as_tuple())),
            "roots": [_cjson(c) for c in roots],
            "orbits": [[_cjson(c) for c in o] for o in orbits],
        }
        if lams is not None:
            results["lambda"] = [_cjson(x) for x in lams]
        return _envelope(args, {"lambda": args.lam}, results)
    total, main, comps, classes = counts.as_tuple()
    print(f"rays {total}, main {main}, period-3 components {comps}, classes {classes}", file=out)
    for k, orbit in enumerate(orbits):
        print(f"orbit {k}: " + "  ".join(f"{c.real:+.9f}{c.imag:+.9f}i" for c in orbit), file=out)
    if lams is not None:
        for x in lams:
            print(f"lambda {x.real:+.9f}{x.imag:+.9f}i", file=out)
    return None


def cmd_render(args, out):
    w, h = args.size
    cfg = RenderConfig(c=args.c, d=args.d, center=args.center, width=args.width,
                       pixels_wide=w, pixels_high=h, max_iter=args.max_iter,
                       escape_radius=args.escape_radius)
    grid = render_julia(cfg)
    path = write_image(grid, args.output, cfg.max_iter)
    interior = float((grid >= cfg.max_iter).mean())
    if args.json:
        return _envelope(args, {"c": _cjson(args.c), "size": [w, h]},
                         {"path": str(path), "interior_fraction": interior})
    print(f"wrote {path} ({w}x{h}, interior fraction {interior:.4f})", file=out)
    return None


def cmd_selftest(args, out):
    results = []
    for number, _, _ in acceptance.CHECKS:
        if args.quick and number == 3:
            continue
        r = acceptance.run_check(number)
        results.append(r)
        if not args.json:
            print(r.line(), file=out, flush=True)
    ok = all(r.passed for r in results)
    if args.json:
        payload = [{"number": r.number, "name": r.name, "passed": r.passed, "detail": r.detail,
                    "seconds": r.seconds} for r in results]
        return _envelope(args, {"quick": args.quick}, payload), 0 if ok else 1
    return None, 0 if ok else 1


COMMANDS = {
    "classify": cmd_classify,
    "table": cmd_table,
    "expand": cmd_expand,
    "stats": cmd_stats,
    "verify-trees": cmd_verify_trees,
    "roots": cmd_roots,
    "render": cmd_render,
    "selftest": cmd_selftest,
}


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = COMMANDS[args.command](args, out)
    except TwistedRabbitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    code = 0
    if isinstance(result, tuple):
        result, code = result
    if result is not None:
        json.dump(result, out, indent=2)
        out.write("\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
