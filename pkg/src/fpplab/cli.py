"""Command-line entry point: ``fpplab <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .engine import PathRecord, path_time, reach_set, shortest_path_dag, t_distance, verify_forced_segments
from .errors import FormatError, FPPError, PreconditionError, UncertifiedWindow
from .io import dumps, load_config, load_scenario, load_shape, read_text, shape_to_dict
from .lattice import Window
from .render import render_2d
from .scenario import BUILDERS, EXIT_MALFORMED, _jsonable, parse_value_set, run_scenario
from .shapes import check_shape_class, cells_to_points, hausdorff_distance
from .values import format_rational, to_rational


def _param(text: str):
    key, _, value = text.partition("=")
    if not key or not _:
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    try:
        return key, json.loads(value)
    except json.JSONDecodeError:
        return key, value


def _point(text: str) -> tuple:
    return tuple(int(v) for v in text.split(","))


def _emit(obj, out: str | None, name: str) -> None:
    text = obj if isinstance(obj, str) else dumps(_jsonable(obj))
    if out:
        path = Path(out)
        if path.suffix == "":
            path.mkdir(parents=True, exist_ok=True)
            path = path / name
        else:
            path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    else:
        sys.stdout.write(text)


def cmd_build(args) -> int:
    if args.builder not in BUILDERS:
        print(f"unknown builder {args.builder!r}; choose from {', '.join(sorted(BUILDERS))}", file=sys.stderr)
        return EXIT_MALFORMED
    params = dict(args.param or [])
    if args.d is not None:
        params.setdefault("d", args.d)
    obs, cfg, claim, _ = BUILDERS[args.builder](params, args.seed)
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    if cfg is not None:
        from .io import dump_config

        (out / f"{args.builder}.config.json").write_text(dump_config(cfg))
    claim = dict(claim)
    claim["observed"] = _jsonable(obs)
    (out / f"{args.builder}.claim.json").write_text(dumps(_jsonable(claim)))
    print(dumps(_jsonable(obs)), end="")
    return 0 if obs.get("verdict") else 2


def cmd_verify(args) -> int:
    cfg = load_config(read_text(args.config))
    problems = cfg.violations()
    if not args.claim:
        _emit({"valid": not problems, "violations": problems}, args.out, "verify.json")
        return 0 if not problems else 2
    claim = json.loads(read_text(args.claim))
    op = claim.get("operation")
    p = claim.get("params", {})
    if op == "verify_forced_segments":
        d, p1, p2 = int(p["d"]), int(p["p1"]), int(p["p2"])
        segs = []
        for start, end in p["segments"]:
            axis = next(i for i in range(d) if start[i] != end[i])
            sign = 1 if end[axis] > start[axis] else -1
            segs.append(PathRecord.straight(start, axis, abs(end[axis] - start[axis]), sign))
        rep = verify_forced_segments(cfg, Window.box(p1, d), Window.box(p2, d), segs)
        _emit(rep.to_dict(), args.out, "verify.json")
        return 0 if rep.verdict else 2
    if op == "t_distance" and "target" in p:
        T, cert = t_distance(cfg, (0,) * cfg.d, tuple(p["target"]))
        ratio = T / int(p["mu"])
        ok = to_rational(p["lo"]) <= ratio <= to_rational(p["hi"])
        _emit({"T": format_rational(T), "ratio": format_rational(ratio), "within": ok, "certificate": cert.to_dict()}, args.out, "verify.json")
        if not cert.certified:
            return 3
        return 0 if ok else 2
    if op == "path_time" and "witness" in p:
        w = PathRecord(tuple(tuple(v) for v in p["witness"]))
        tau = path_time(cfg, w)
        ok = w.self_avoiding and tau < -to_rational(p["n"])
        _emit({"time": format_rational(tau), "self_avoiding": w.self_avoiding, "verdict": ok}, args.out, "verify.json")
        return 0 if ok else 2
    if op == "reach_set" and args.shape:
        K = load_shape(read_text(args.shape))
        t = int(p["t"])
        B = reach_set(cfg, (0,) * cfg.d, t)
        dh = hausdorff_distance(K, cells_to_points(B.points, t))
        ok = dh <= Fraction(1, int(p["i"]))
        _emit({"hausdorff": format_rational(dh), "certified": B.certified, "verdict": ok}, args.out, "verify.json")
        if not B.certified:
            return 3
        return 0 if ok else 2
    print(f"claim operation {op!r} cannot be checked from files alone", file=sys.stderr)
    return EXIT_MALFORMED


def cmd_ball(args) -> int:
    cfg = load_config(read_text(args.config))
    src = _point(args.source) if args.source else (0,) * cfg.d
    B = reach_set(cfg, src, to_rational(args.t))
    _emit({"t": args.t, "source": list(src), "certified": B.certified, "size": len(B), "points": [list(p) for p in B]}, args.out, "ball.json")
    return 0 if B.certified else 3


def cmd_geodesic(args) -> int:
    cfg = load_config(read_text(args.config))
    dag = shortest_path_dag(cfg, _point(args.x), _point(args.y))
    _emit(
        {
            "distance": format_rational(dag.distance),
            "count": dag.count,
            "geodesic": [list(v) for v in dag.geodesic.vertices],
            "certificate": dag.certificate.to_dict(),
        },
        args.out,
        "geodesic.json",
    )
    return 0 if dag.certificate.certified else 3


def cmd_classify(args) -> int:
    K = load_shape(read_text(args.shape))
    cls = check_shape_class(K, parse_value_set(args.A))
    _emit(shape_to_dict(K, cls.to_dict()), args.out, "shape.json")
    return 0


def cmd_render(args) -> int:
    if args.config:
        obj = load_config(read_text(args.config))
    elif args.shape:
        obj = load_shape(read_text(args.shape))
    else:
        print("render needs --config or --shape", file=sys.stderr)
        return EXIT_MALFORMED
    _emit(render_2d(obj), args.out, "figure.svg")
    return 0


def cmd_scenario(args) -> int:
    try:
        s = load_scenario(read_text(args.scenario))
    except FormatError as exc:
        print(f"malformed scenario: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    code, bundle = run_scenario(s, args.out)
    for rep in bundle.get("steps", []):
        print(f"{rep['step']}: {rep['status']}")
    if "error" in bundle:
        print(bundle["error"], file=sys.stderr)
    return code


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fpplab", description="Exact first passage percolation constructions on finite windows.")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="run one builder and write its configuration and claim")
    b.add_argument("builder")
    b.add_argument("-p", "--param", type=_param, action="append", help="builder parameter KEY=VALUE (JSON values allowed)")
    b.add_argument("--out")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--d", type=int)
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="check a configuration file, optionally against a claim file")
    v.add_argument("--config", required=True)
    v.add_argument("--claim")
    v.add_argument("--shape")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("ball", help="reach set of a configuration at time t")
    r.add_argument("--config", required=True)
    r.add_argument("--t", required=True)
    r.add_argument("--source")
    r.add_argument("--out")
    r.set_defaults(func=cmd_ball)

    g = sub.add_parser("geodesic", help="distance, geodesic count and one geodesic")
    g.add_argument("--config", required=True)
    g.add_argument("--x", required=True)
    g.add_argument("--y", required=True)
    g.add_argument("--out")
    g.set_defaults(func=cmd_geodesic)

    c = sub.add_parser("classify-shape", help="shape-class record for a shape file")
    c.add_argument("--shape", required=True)
    c.add_argument("--A", required=True, help='value set, e.g. "[0,2]" or "{1,2}"')
    c.add_argument("--out")
    c.set_defaults(func=cmd_classify)

    f = sub.add_parser("render", help="SVG figure of a d = 2 configuration or shape")
    f.add_argument("--config")
    f.add_argument("--shape")
    f.add_argument("--out")
    f.set_defaults(func=cmd_render)

    s = sub.add_parser("scenario", help="run a scenario file and write a report bundle")
    s.add_argument("--scenario", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_scenario)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UncertifiedWindow as exc:
        print(f"uncertified: {exc}", file=sys.stderr)
        return 3
    except (FormatError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except FPPError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
