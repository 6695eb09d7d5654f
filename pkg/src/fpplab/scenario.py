"""Scenario runner: build, verify and write a report bundle.

Exit codes: 0 when every step's observation matches its expectation, 2
when some verification disagrees, 3 when an uncertified window was hit
and 64 for malformed scenarios or unknown builders.
"""
from __future__ import annotations

import random
import re
from fractions import Fraction
from pathlib import Path

from .constructions import (
    build_corridor,
    build_isolated_point_config,
    build_lambda_config,
    build_multi_corridor,
    build_negative_config,
    build_shape_config,
    detour_witness_check,
    refine_to_unique_geodesic,
    refinement_window,
    target_ratio,
    verify_corridor,
    verify_lambda,
    verify_shape_config,
)
from .engine import path_time, shortest_path_dag, t_distance
from .errors import FormatError, FPPError, PreconditionError, UncertifiedWindow
from .io import Scenario, config_from_dict, config_to_dict, dumps, shape_from_dict, shape_to_dict
from .lattice import (
    CylinderConstraint,
    Edge,
    Window,
    constant_configuration,
    floor_lattice_point,
    l1_norm,
    random_configuration,
    sample_configuration,
)
from .render import render_2d
from .shapes import l1_ball_shape, segment_shape
from .values import Interval, ValueSet, format_rational, to_rational

EXIT_OK, EXIT_MISMATCH, EXIT_UNCERTIFIED, EXIT_MALFORMED = 0, 2, 3, 64

_PART = re.compile(r"\s*(\{[^}]*\}|[\[(][^\])]*[\])])\s*")


def parse_value_set(spec) -> ValueSet:
    """ValueSet from a dict (file form) or a string like ``"[1,10]"``, ``"{1,2}"``, ``"[0,inf) u {7}"``."""
    if isinstance(spec, ValueSet):
        return spec
    if isinstance(spec, dict):
        return ValueSet.from_dict(spec)
    if not isinstance(spec, str):
        raise FormatError(f"cannot read a value set from {spec!r}")
    parts = []
    allow_negative = False
    for chunk in re.split(r"\s*(?:u|∪|U)\s*", spec.strip()):
        m = _PART.fullmatch(chunk)
        if not m:
            raise FormatError(f"bad value-set component {chunk!r}")
        body = m.group(1)
        try:
            if body.startswith("{"):
                vals = [to_rational(v) for v in body[1:-1].split(",") if v.strip()]
                parts += [Interval.point(v) for v in vals]
            else:
                lo, hi = body[1:-1].split(",")
                parts.append(Interval(to_rational(lo), to_rational(hi), body[0] == "[", body[-1] == "]"))
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise FormatError(f"bad value-set component {chunk!r}: {exc}") from exc
    if any(p.lo < 0 for p in parts):
        allow_negative = True
    return ValueSet(parts, allow_negative)


def _constraint(A: ValueSet, items) -> CylinderConstraint | None:
    if not items:
        return None
    ov = {}
    for r in items:
        iv = r["interval"]
        iv = Interval.from_dict(iv) if isinstance(iv, dict) else Interval(to_rational(iv[0]), to_rational(iv[1]))
        ov[Edge(tuple(r["base"]), int(r["axis"]))] = iv
    return CylinderConstraint(A, ov)


def _shape(spec):
    if "format" in spec:
        return shape_from_dict(spec)
    kind = spec.get("kind")
    n = int(spec["n"])
    if kind == "ball":
        return l1_ball_shape(to_rational(spec["r"]), n, int(spec.get("d", 2)))
    if kind == "spike":
        # D_{1/2} ∪ [0, ξ1]
        d = int(spec.get("d", 2))
        end = (1,) + (0,) * (d - 1)
        return l1_ball_shape(Fraction(1, 2), n, d).union(segment_shape((0,) * d, end, n))
    raise FormatError(f"unknown shape kind {kind!r}")


# each builder returns (observation dict, configuration or None, claim dict, extras for rendering)


def _run_corridor(p, seed):
    A = parse_value_set(p["A"])
    c = _constraint(A, p.get("constraint"))
    cfg, spec = build_corridor(
        A, int(p.get("d", 2)), int(p["p1"]), c,
        eps=p.get("eps"), a=p.get("a"), p2=p.get("p2"), seed=p.get("sample_seed"),
    )
    rep = verify_corridor(cfg, spec)
    obs = {"verdict": rep.verdict, "p2": spec.p2, "checked_pairs": rep.checked_pairs, "counterexample": rep.counterexample}
    return obs, cfg, spec.claim().to_dict(), {"segments": spec.segments, "boxes": (spec.inner, spec.outer)}


def _run_multi_corridor(p, seed):
    A = parse_value_set(p["A"])
    c = _constraint(A, p.get("constraint"))
    cfg, spec = build_multi_corridor(A, int(p.get("d", 2)), int(p.get("p1", 1)), to_rational(p["lambda"]), c, p2=p.get("p2"))
    rep = verify_corridor(cfg, spec)
    obs = {"verdict": rep.verdict, "p2": spec.p2, "checked_pairs": rep.checked_pairs, "counterexample": rep.counterexample}
    return obs, cfg, spec.claim("multi_corridor").to_dict(), {"segments": spec.segments, "boxes": (spec.inner, spec.outer)}


def _run_lambda(p, seed):
    A = parse_value_set(p["A"])
    c = _constraint(A, p.get("constraint"))
    x = tuple(to_rational(v) for v in p.get("x", [1, 0]))
    m = int(p.get("m", 20))
    if "a" in p:
        cfg, spec = build_lambda_config(A, p["a"], p["b"], to_rational(p["lambda"]), int(p["n"]), x, m, c)
    else:
        cfg, spec = target_ratio(A, to_rational(p["lambda"]), int(p["n"]), x, m, c)
    res = verify_lambda(cfg, spec)
    if not res["certified"]:
        raise UncertifiedWindow("lambda configuration window is not certified")
    obs = {"verdict": res["verdict"], "ratio": format_rational(res["ratio"]), "mu": spec.mu, "n": spec.n}
    return obs, cfg, spec.claim().to_dict(), {"paths": (spec.gamma0,)}


def _run_negative(p, seed):
    A = parse_value_set(p["A"])
    c = _constraint(A, p.get("constraint"))
    n = to_rational(p["n"])
    cfg, w = build_negative_config(A, p["x"], p["y"], n, c)
    tau = path_time(cfg, w)
    obs = {"verdict": w.self_avoiding and tau < -n, "time": format_rational(tau), "length": len(w)}
    return obs, cfg, {
        "builder": "negative",
        "operation": "path_time",
        "expected": True,
        "params": {"n": format_rational(n), "witness": [list(v) for v in w.vertices]},
    }, {"paths": (w,)}


def _run_uniqueness(p, seed):
    A = parse_value_set(p["A"])
    c = _constraint(A, p.get("constraint")) or CylinderConstraint.trivial(A)
    x, y = tuple(p["x"]), tuple(p["y"])
    W, g = refine_to_unique_geodesic(c, A, x, y)
    win = refinement_window(W)
    samples = int(p.get("samples", 50))
    ok = 0
    for s in range(samples):
        cfg = sample_configuration(W, win, seed=seed + s)
        dag = shortest_path_dag(cfg, x, y)
        if not dag.certificate.certified:
            raise UncertifiedWindow("sampling window does not certify the geodesic")
        ok += dag.count == 1 and dag.geodesic == g
    obs = {"verdict": ok == samples, "unique_samples": ok, "samples": samples, "geodesic": [list(v) for v in g.vertices]}
    return obs, cfg, {"builder": "uniqueness", "operation": "shortest_path_dag", "expected": True}, {"paths": (g,)}


def _run_isolated(p, seed):
    A = parse_value_set(p["A"])
    x, y = tuple(p["x"]), tuple(p["y"])
    cfg = build_isolated_point_config(A, x, y, p.get("a"))
    dag = shortest_path_dag(cfg, x, y)
    if not dag.certificate.certified:
        raise UncertifiedWindow("isolated-point window does not certify")
    obs = {"verdict": dag.count > 1, "count": dag.count}
    return obs, cfg, {"builder": "isolated", "operation": "shortest_path_dag", "expected": True}, {}


def _run_shape(p, seed):
    A = parse_value_set(p["A"])
    K = _shape(p["shape"])
    c = _constraint(A, p.get("constraint"))
    cfg, claim = build_shape_config(A, K, int(p.get("i", 4)), p.get("case"), c, p.get("n"))
    res = verify_shape_config(cfg, K, claim)
    if not res["certified"]:
        raise UncertifiedWindow("reach set not certified")
    obs = {"verdict": res["verdict"], "hausdorff": format_rational(res["hausdorff"]), "t": claim.t}
    return obs, cfg, claim.claim().to_dict(), {}


def _run_detour(p, seed):
    A = parse_value_set(p.get("A", "{1,2}"))
    t = to_rational(p.get("t", 40))
    radius = int(p.get("radius", int(t) + 6))
    cfg = constant_configuration(Window.box(radius, 2), A, to_rational(p.get("weight", 1)))
    rep = detour_witness_check(cfg, t, to_rational(p.get("alpha", "1/8")), to_rational(p.get("delta", 2)))
    obs = {"verdict": rep.verdict, "witnesses": len(rep.witnesses)}
    return obs, cfg, {"builder": "detour", "operation": "detour_witness_check", "expected": True}, {}


def _run_apriori(p, seed):
    A = parse_value_set(p.get("A", "[1,2]"))
    trials = int(p.get("trials", 50))
    rng = random.Random(seed)
    candidates = [to_rational(v) for v in p.get("candidates", ["1", "3/2", "2"])]
    bad = 0
    for k in range(trials):
        d = 2
        x = (Fraction(rng.randint(-8, 8), 8), Fraction(rng.randint(-8, 8), 8))
        if l1_norm(x) == 0:
            x = (Fraction(1), Fraction(0))
        mu = rng.randint(1, int(p.get("max_mu", 20)))
        target = floor_lattice_point(tuple(mu * v for v in x))
        win = Window.bounding([(0, 0), target], int(mu * l1_norm(x)) + d + 2)
        cfg = random_configuration(win, A, candidates, seed=rng.randrange(1 << 30))
        T, cert = t_distance(cfg, (0, 0), target)
        if not cert.certified:
            raise UncertifiedWindow("a-priori bound window not certified")
        lo = (mu * l1_norm(x) - d) * A.inf
        hi = (mu * l1_norm(x) + d) * A.sup
        bad += not (lo <= T <= hi)
    return {"verdict": bad == 0, "violations": bad, "trials": trials}, None, {"builder": "apriori", "operation": "t_distance", "expected": True}, {}


def _run_t_distance(p, seed):
    cfg = config_from_dict(p["config"])
    T, cert = t_distance(cfg, tuple(p["x"]), tuple(p["y"]))
    if not cert.certified:
        raise UncertifiedWindow(f"window does not certify T: {cert.to_dict()}")
    return {"verdict": True, "T": format_rational(T)}, cfg, {"builder": "t_distance", "operation": "t_distance", "expected": True}, {}


BUILDERS = {
    "corridor": _run_corridor,
    "multi_corridor": _run_multi_corridor,
    "lambda": _run_lambda,
    "negative": _run_negative,
    "uniqueness": _run_uniqueness,
    "isolated": _run_isolated,
    "shape": _run_shape,
    "detour": _run_detour,
    "apriori": _run_apriori,
    "t_distance": _run_t_distance,
}


def _jsonable(v):
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def run_scenario(s: Scenario, out_dir=None) -> tuple[int, dict]:
    """Run every step (in name order) and optionally write the report bundle."""
    unknown = [st.builder for st in s.steps if st.builder not in BUILDERS]
    if unknown:
        bundle = {"scenario": s.name, "error": f"unknown builder(s): {', '.join(sorted(set(unknown)))}", "steps": []}
        _write(out_dir, bundle, {})
        return EXIT_MALFORMED, bundle
    reports = []
    files: dict = {}
    status = EXIT_OK
    for st in sorted(s.steps, key=lambda st: st.name):
        rep = {"step": st.name, "builder": st.builder, "seed": st.seed, "expected": st.expect or {"verdict": True}}
        try:
            obs, cfg, claim, extras = BUILDERS[st.builder](st.params, st.seed)
        except UncertifiedWindow as exc:
            rep.update(status="uncertified", detail=str(exc))
            status = max(status, EXIT_UNCERTIFIED)
            reports.append(rep)
            continue
        except (KeyError, TypeError, FormatError, PreconditionError) as exc:
            bundle = {"scenario": s.name, "error": f"step {st.name}: malformed parameters ({exc!r})", "steps": reports}
            _write(out_dir, bundle, files)
            return EXIT_MALFORMED, bundle
        except FPPError as exc:
            obs, cfg, claim, extras = {"verdict": False, "error": f"{type(exc).__name__}: {exc}"}, None, {}, {}
        expected = rep["expected"]
        match = all(_jsonable(obs.get(k)) == _jsonable(v) for k, v in expected.items())
        rep.update(status="match" if match else "mismatch", observed=_jsonable(obs), claim=claim)
        if not match and status == EXIT_OK:
            status = EXIT_MISMATCH
        reports.append(rep)
        if cfg is not None:
            files[f"{st.name}.config.json"] = dumps(config_to_dict(cfg))
            if st.params.get("render") and cfg.d == 2:
                files[f"{st.name}.svg"] = render_2d(
                    cfg,
                    paths=extras.get("paths", ()),
                    segments=extras.get("segments", ()),
                    boxes=extras.get("boxes", ()),
                )
        if "shape" in st.params and st.builder == "shape":
            files[f"{st.name}.shape.json"] = dumps(shape_to_dict(_shape(st.params["shape"])))
    bundle = {"scenario": s.name, "exit_code": status, "steps": reports}
    _write(out_dir, bundle, files)
    return status, bundle


def _write(out_dir, bundle: dict, files: dict) -> None:
    if out_dir is None:
        return
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, text in sorted(files.items()):
        (out / name).write_text(text)
    for rep in bundle.get("steps", []):
        (out / f"{rep['step']}.report.json").write_text(dumps(rep))
    (out / "summary.json").write_text(dumps(bundle))
