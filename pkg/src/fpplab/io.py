"""JSON file formats for configurations, shapes and scenarios.

All rationals are written as ``"p/q"`` strings (``"inf"`` for infinity) so
a parse/serialize round trip is exact.  Serialization is canonical: keys
are sorted and records appear in a fixed order, so equal objects produce
identical bytes.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .errors import FormatError
from .lattice import Configuration, CylinderConstraint, DefaultRule, Edge, Window, window_edges
from .shapes import ShapeSpec
from .values import Interval, ValueSet, format_rational, to_rational

CONFIG_FORMAT = "fpplab-config"
SHAPE_FORMAT = "fpplab-shape"
SCENARIO_FORMAT = "fpplab-scenario"
VERSION = 1


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _check_header(data, fmt: str) -> None:
    if not isinstance(data, dict):
        raise FormatError("top-level JSON value must be an object")
    if data.get("format") != fmt:
        raise FormatError(f"expected format {fmt!r}, got {data.get('format')!r}")
    if data.get("version") != VERSION:
        raise FormatError(f"unsupported version {data.get('version')!r}")


def _loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc


# configurations


def config_to_dict(cfg: Configuration) -> dict:
    """Weights equal to the default value are omitted; everything else is an override record."""
    default = cfg.default
    if default is None or default.kind != "fixed":
        counts = Counter(cfg.weights.values())
        value = min(counts, key=lambda w: (-counts[w], w))
        default = DefaultRule.fixed(value)
    base_value = default.value
    overrides = [
        {"base": list(e.base), "axis": e.axis, "weight": format_rational(w)}
        for e in window_edges(cfg.window)
        if (w := cfg.weights[e]) != base_value
    ]
    out = {
        "format": CONFIG_FORMAT,
        "version": VERSION,
        "d": cfg.d,
        "window": {"lo": list(cfg.window.lo), "hi": list(cfg.window.hi)},
        "A": cfg.A.to_dict(),
        "default": default.to_dict(),
        "overrides": overrides,
    }
    if cfg.source_constraint is not None:
        out["constraint"] = constraint_to_list(cfg.source_constraint)
    return out


def constraint_to_list(c: CylinderConstraint) -> list:
    return [
        {"base": list(e.base), "axis": e.axis, "interval": iv.to_dict()}
        for e, iv in sorted(c.overrides.items())
    ]


def constraint_from_list(A: ValueSet, items: list) -> CylinderConstraint:
    return CylinderConstraint(A, {Edge(tuple(r["base"]), int(r["axis"])): Interval.from_dict(r["interval"]) for r in items})


def config_from_dict(data: dict) -> Configuration:
    _check_header(data, CONFIG_FORMAT)
    try:
        d = int(data["d"])
        window = Window(tuple(data["window"]["lo"]), tuple(data["window"]["hi"]))
        if window.d != d:
            raise FormatError("window dimension does not match d")
        A = ValueSet.from_dict(data["A"])
        default = DefaultRule.from_dict(data["default"])
        if default.kind != "fixed":
            raise FormatError("configuration files need a fixed default rule")
        weights = {e: default.value for e in window_edges(window)}
        for r in data.get("overrides", []):
            e = Edge(tuple(r["base"]), int(r["axis"]))
            if e not in weights:
                raise FormatError(f"override edge {e} is outside the window")
            weights[e] = to_rational(r["weight"])
        constraint = None
        if "constraint" in data:
            constraint = constraint_from_list(A, data["constraint"])
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed configuration: {exc}") from exc
    return Configuration(window, weights, A, constraint, default)


def dump_config(cfg: Configuration) -> str:
    return dumps(config_to_dict(cfg))


def load_config(text: str) -> Configuration:
    return config_from_dict(_loads(text))


# shapes


def shape_to_dict(K: ShapeSpec, classification: dict | None = None) -> dict:
    """Run-length encoding along axis 0, grouped by the remaining coordinates."""
    rows: dict = {}
    for c in sorted(K.cells, key=lambda c: (c[1:], c[0])):
        rows.setdefault(c[1:], []).append(c[0])
    enc = []
    for key in sorted(rows):
        xs = rows[key]
        runs = []
        start = prev = xs[0]
        for x in xs[1:]:
            if x != prev + 1:
                runs.append([start, prev - start + 1])
                start = x
            prev = x
        runs.append([start, prev - start + 1])
        enc.append({"rest": list(key), "runs": runs})
    out = {"format": SHAPE_FORMAT, "version": VERSION, "d": K.d, "n": K.n, "rows": enc}
    if classification is not None:
        out["classification"] = classification
    return out


def shape_from_dict(data: dict) -> ShapeSpec:
    _check_header(data, SHAPE_FORMAT)
    try:
        cells = set()
        if "cells" in data:
            cells.update(tuple(c) for c in data["cells"])
        for row in data.get("rows", []):
            rest = tuple(row["rest"])
            for start, length in row["runs"]:
                for x in range(start, start + length):
                    cells.add((x,) + rest)
        return ShapeSpec(int(data["d"]), int(data["n"]), frozenset(cells))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed shape: {exc}") from exc


def dump_shape(K: ShapeSpec, classification: dict | None = None) -> str:
    return dumps(shape_to_dict(K, classification))


def load_shape(text: str) -> ShapeSpec:
    return shape_from_dict(_loads(text))


# scenarios


@dataclass
class Step:
    name: str
    builder: str
    params: dict = field(default_factory=dict)
    expect: dict = field(default_factory=dict)
    seed: int = 0

    def to_dict(self) -> dict:
        return {"name": self.name, "builder": self.builder, "params": self.params, "expect": self.expect, "seed": self.seed}


@dataclass
class Scenario:
    name: str
    steps: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "format": SCENARIO_FORMAT,
            "version": VERSION,
            "name": self.name,
            "steps": [s.to_dict() for s in self.steps],
        }


def scenario_from_dict(data: dict) -> Scenario:
    _check_header(data, SCENARIO_FORMAT)
    try:
        steps = []
        for s in data["steps"]:
            if not isinstance(s.get("params", {}), dict) or not isinstance(s.get("expect", {}), dict):
                raise FormatError("step params and expect must be objects")
            steps.append(Step(str(s["name"]), str(s["builder"]), dict(s.get("params", {})), dict(s.get("expect", {})), int(s.get("seed", 0))))
        names = [s.name for s in steps]
        if len(set(names)) != len(names):
            raise FormatError("step names must be unique")
        return Scenario(str(data["name"]), steps)
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise FormatError(f"malformed scenario: {exc}") from exc


def dump_scenario(s: Scenario) -> str:
    return dumps(s.to_dict())


def load_scenario(text: str) -> Scenario:
    return scenario_from_dict(_loads(text))


def read_text(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
