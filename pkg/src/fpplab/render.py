"""Deterministic SVG pictures of two-dimensional configurations, reach sets and shapes."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .engine import LatticeSet, PathRecord
from .errors import DimensionUnsupported
from .lattice import Configuration, Window, window_edges
from .shapes import ShapeSpec

CHEAP = "#2b8a3e"
EXPENSIVE = "#c92a2a"
OVERRIDE = "#1c7ed6"
NEUTRAL = "#adb5bd"
REACH = "#ffe066"
PATH = "#000000"
SEGMENT = "#f08c00"
BOX = "#495057"


class _Canvas:
    def __init__(self, window: Window, cell: int, pad: int = 10):
        self.w = window
        self.cell = cell
        self.pad = pad
        self.parts: list[str] = []

    def xy(self, p) -> tuple[int, int]:
        x = (p[0] - self.w.lo[0]) * self.cell + self.pad
        y = (self.w.hi[1] - p[1]) * self.cell + self.pad
        return x, y

    def line(self, p, q, color: str, width) -> None:
        (x1, y1), (x2, y2) = self.xy(p), self.xy(q)
        self.parts.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{color}" stroke-width="{width}"/>')

    def square(self, p, color: str) -> None:
        x, y = self.xy(p)
        h = self.cell // 2
        self.parts.append(f'<rect x="{x - h}" y="{y - h}" width="{self.cell}" height="{self.cell}" fill="{color}"/>')

    def rect(self, lo, hi, color: str) -> None:
        (x1, y1), (x2, y2) = self.xy((lo[0], hi[1])), self.xy((hi[0], lo[1]))
        self.parts.append(
            f'<rect x="{x1}" y="{y1}" width="{x2 - x1}" height="{y2 - y1}" fill="none" stroke="{color}" stroke-width="1" stroke-dasharray="4 2"/>'
        )

    def document(self) -> str:
        width = (self.w.hi[0] - self.w.lo[0]) * self.cell + 2 * self.pad
        height = (self.w.hi[1] - self.w.lo[1]) * self.cell + 2 * self.pad
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}">\n<rect width="{width}" height="{height}" fill="#ffffff"/>\n'
        )
        return head + "\n".join(self.parts) + ("\n" if self.parts else "") + "</svg>\n"


def _band(w: Fraction, lo: Fraction, hi: Fraction) -> str:
    if lo == hi:
        return NEUTRAL
    return CHEAP if w < (lo + hi) / 2 else EXPENSIVE


def render_2d(
    obj,
    *,
    paths: Iterable[PathRecord] = (),
    segments: Iterable[PathRecord] = (),
    boxes: Iterable[Window] = (),
    reach: LatticeSet | None = None,
    cell: int = 12,
) -> str:
    """SVG document for a Configuration, LatticeSet or ShapeSpec (d = 2 only).

    Configuration edges are coloured by weight band (cheap, expensive or
    constrained); reach sets are shaded; ``paths`` and ``segments`` are
    drawn on top.  Output bytes depend only on the inputs.
    """
    d = obj.d if isinstance(obj, (Configuration, ShapeSpec)) else obj.window.d
    if d != 2:
        raise DimensionUnsupported(f"rendering needs d = 2, got d = {d}")
    if isinstance(obj, Configuration):
        window = obj.window
    elif isinstance(obj, LatticeSet):
        window = obj.window
    else:
        window = Window.bounding(obj.cells, 1)
    canvas = _Canvas(window, cell)
    shaded = reach if reach is not None else (obj if isinstance(obj, LatticeSet) else None)
    if shaded is not None:
        for p in sorted(shaded.points):
            canvas.square(p, REACH)
    if isinstance(obj, ShapeSpec):
        for p in sorted(obj.cells):
            canvas.square(p, REACH)
    if isinstance(obj, Configuration):
        ws = obj.weights
        vals = list(ws.values())
        lo, hi = min(vals), max(vals)
        constrained = obj.source_constraint.edges if obj.source_constraint is not None else frozenset()
        for e in window_edges(window):
            color = OVERRIDE if e in constrained else _band(ws[e], lo, hi)
            canvas.line(e.base, e.tip, color, 1)
    else:
        for e in window_edges(window):
            canvas.line(e.base, e.tip, NEUTRAL, "0.5")
    for b in boxes:
        canvas.rect(b.lo, b.hi, BOX)
    for seg in segments:
        for e in seg.edges:
            canvas.line(e.base, e.tip, SEGMENT, 3)
    for path in paths:
        for p, q in zip(path.vertices, path.vertices[1:]):
            canvas.line(p, q, PATH, 2)
    return canvas.document()
