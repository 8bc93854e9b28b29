"""CSV, JSON and SVG emitters and the polygon CSV reader.

Reals are written with 17 significant digits so every value read back is
bit-identical to the one written.  Files are UTF-8 with LF line endings.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from polygonflow.errors import FormatError, PolygonFlowError
from polygonflow.polygon import IterationTrace, Polygon, make_polygon

DEFAULT_FRAMES = (0, 1, 2, 5, 10, 25, 50, 100)


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_text(text: str, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def polygon_csv_text(p: Polygon) -> str:
    lines = ["x,y"]
    lines += [f"{fmt(x)},{fmt(y)}" for x, y in zip(p.xs, p.ys)]
    return "\n".join(lines) + "\n"


def write_polygon_csv(p: Polygon, path) -> None:
    _write_text(polygon_csv_text(p), path)


def parse_polygon_csv(text: str) -> Polygon:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [c.strip() for c in rows[0]] != ["x", "y"]:
        raise FormatError("expected header 'x,y'", line=1)
    xs, ys = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 2:
            raise FormatError(f"expected 2 fields, got {len(row)}", line=lineno)
        try:
            x, y = float(row[0]), float(row[1])
        except ValueError:
            raise FormatError(f"not a number: {','.join(row)!r}", line=lineno) from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise FormatError("coordinates must be finite", line=lineno)
        xs.append(x)
        ys.append(y)
    if len(xs) < 3:
        raise FormatError(f"polygon needs at least 3 vertices, file has {len(xs)}")
    return make_polygon(xs, ys)


def read_polygon_csv(path) -> Polygon:
    return parse_polygon_csv(Path(path).read_text(encoding="utf-8"))


def trace_csv_text(trace: IterationTrace, ks: Optional[Iterable[int]] = None) -> str:
    out = ["k,i,x,y"]
    for k in (range(len(trace)) if ks is None else ks):
        for i, (x, y) in enumerate(zip(trace.xs[k], trace.ys[k])):
            out.append(f"{k},{i},{fmt(x)},{fmt(y)}")
    return "\n".join(out) + "\n"


def vertices_csv_text(k: int, xs, ys) -> str:
    out = ["k,i,x,y"]
    out += [f"{k},{i},{fmt(x)},{fmt(y)}" for i, (x, y) in enumerate(zip(xs, ys))]
    return "\n".join(out) + "\n"


def write_trace_csv(trace: IterationTrace, path) -> None:
    _write_text(trace_csv_text(trace), path)


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def json_text(obj) -> str:
    return json.dumps(_plain(obj), indent=2) + "\n"


def write_json(obj, path) -> None:
    _write_text(json_text(obj), path)


# --- SVG ----------------------------------------------------------------


@dataclass(frozen=True)
class SvgScene:
    """Overlaid polygon frames; earlier frames drawn lighter."""

    frames: tuple
    viewport: tuple[float, float, float, float]
    size: int = 600


def scene_from_trace(trace: IterationTrace, frames: Sequence[int] = DEFAULT_FRAMES) -> SvgScene:
    ks = tuple(k for k in frames if 0 <= k <= trace.steps)
    x0, y0 = trace.xs[0], trace.ys[0]
    xmin, xmax = float(x0.min()), float(x0.max())
    ymin, ymax = float(y0.min()), float(y0.max())
    w = max(xmax - xmin, 1e-12)
    h = max(ymax - ymin, 1e-12)
    mx, my = 0.05 * w, 0.05 * h
    viewport = (xmin - mx, ymin - my, xmax + mx, ymax + my)
    return SvgScene(tuple((k, trace.xs[k], trace.ys[k]) for k in ks), viewport)


def svg_text(scene: SvgScene) -> str:
    x0, y0, x1, y1 = scene.viewport
    span = max(x1 - x0, y1 - y0)
    px = scene.size / span
    width = (x1 - x0) * px
    height = (y1 - y0) * px
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width:.2f}" height="{height:.2f}" viewBox="0 0 {width:.2f} {height:.2f}">',
        f'<rect x="0" y="0" width="{width:.2f}" height="{height:.2f}" fill="white"/>',
    ]
    m = len(scene.frames)
    for idx, (k, xs, ys) in enumerate(scene.frames):
        opacity = 0.15 + 0.85 * (idx + 1) / m
        pts = " ".join(
            f"{(x - x0) * px:.3f},{(y1 - y) * px:.3f}" for x, y in zip(xs, ys)
        )
        if not all(math.isfinite(float(v)) for v in (*xs, *ys)):
            raise PolygonFlowError(f"frame {k} has non-finite coordinates")
        lines.append(
            f'<polygon id="k{k}" points="{pts}" fill="none" stroke="#1f4e99" '
            f'stroke-width="1.2" stroke-opacity="{opacity:.3f}"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def write_svg(scene: SvgScene, path) -> None:
    _write_text(svg_text(scene), path)
