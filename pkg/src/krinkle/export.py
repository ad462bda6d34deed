"""JSON and SVG writers, and the JSON reader used by ``krinkle verify --in``.

Output is deterministic: tiles are written in enumeration order, numbers
are formatted with fixed precision and attributes in a fixed order, so the
same tiling always serialises to the same bytes.
"""

from __future__ import annotations

import colorsys
import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .assembly import PlacedTile, Tiling
from .geometry import LatticePoint, RigidMotion
from .prototile import Prototile
from .sequences import DirectionSequence, Params

SCHEMA_VERSION = 1


def _num(x: float) -> float:
    v = float(f"{float(x):.12g}")
    return 0.0 if v == 0 else v


def _points(vertices: np.ndarray) -> list[list[float]]:
    return [[_num(x), _num(y)] for x, y in vertices]


def tiling_document(tiling: Tiling, tiles: Sequence[PlacedTile], radius: float | None = None) -> dict:
    proto = tiling.prototile
    return {
        "schema": SCHEMA_VERSION,
        "params": tiling.params.as_dict(),
        "window": {"radius": radius or 0, "rows": tiling.rows},
        "prototile": {
            "lower_dirs": list(proto.lower_dirs),
            "upper_dirs": list(proto.upper_dirs),
            "vertices": _points(proto.vertices()),
        },
        "sequences": {
            "base": tiling.base.as_dict(),
            "fronts": [f.as_dict() for f in tiling.fronts],
        },
        "tiles": [
            {
                "wedge": t.wedge_index,
                "closure_copy": t.closure_copy,
                "r": t.row,
                "c": t.col,
                "rotation_index": t.motion.rotation_index,
                "translation_coeffs": list(t.motion.translation.coeffs),
                "vertices": _points(t.vertices),
            }
            for t in tiles
        ],
    }


def export_json(tiling: Tiling, tiles: Sequence[PlacedTile], radius: float | None = None) -> str:
    return json.dumps(tiling_document(tiling, tiles, radius), separators=(",", ":")) + "\n"


@dataclass
class ExportedTiling:
    params: Params
    radius: float
    rows: int
    base: DirectionSequence
    fronts: list[DirectionSequence]
    tiles: list[PlacedTile]


def load_json(text: str) -> ExportedTiling:
    """Parse a document written by :func:`export_json`.

    Raises ``ValueError`` (including :class:`~krinkle.sequences.ParameterError`)
    for malformed input.
    """
    try:
        doc = json.loads(text)
        p = doc["params"]
        params = Params.from_mkt(int(p["m"]), int(p["k"]), int(p["t"]), bool(p["offset"]))
        if params.n != p.get("n", params.n):
            raise ValueError(f"stored n={p['n']} disagrees with m, k, t, offset")
        n = params.n
        tiles = []
        for d in doc["tiles"]:
            motion = RigidMotion(n, int(d["rotation_index"]), LatticePoint(tuple(d["translation_coeffs"])))
            verts = np.asarray(d["vertices"], dtype=float)
            if verts.ndim != 2 or verts.shape[1] != 2:
                raise ValueError("tile vertices must be [[x, y], ...]")
            verts.setflags(write=False)
            tiles.append(PlacedTile(int(d["wedge"]), int(d["r"]), int(d["c"]), motion,
                                    int(d.get("closure_copy", 0)), verts))
        seqs = doc.get("sequences", {})
        window = doc.get("window", {})
        return ExportedTiling(
            params=params,
            radius=float(window.get("radius") or 0),
            rows=int(window.get("rows") or 0),
            base=DirectionSequence.from_dict(seqs["base"]) if "base" in seqs else None,
            fronts=[DirectionSequence.from_dict(f) for f in seqs.get("fronts", [])] if "fronts" in seqs else None,
            tiles=tiles,
        )
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise ValueError(f"malformed tiling document: {exc}") from exc


# ---------------------------------------------------------------------------
# SVG


@dataclass(frozen=True)
class RenderStyle:
    """Rendering options.  Colours are non-normative; by default wedge ``i`` gets hue ``i/n``."""

    color: str = "wedge"  # wedge | uniform | closure
    stroke_width: float = 1.0
    scale: float = 20.0
    background: str = "#ffffff"
    label_edges: bool = False
    stroke: str = "#202020"
    fill: str = "#d8d8d8"

    def __post_init__(self):
        if self.scale <= 0:
            raise ValueError(f"scale must be positive, got {self.scale}")
        if self.stroke_width < 0:
            raise ValueError(f"stroke width must be non-negative, got {self.stroke_width}")
        if self.color not in ("wedge", "uniform", "closure"):
            raise ValueError(f"unknown color scheme {self.color!r}")


def _hex(h: float, s: float = 0.45, v: float = 0.95) -> str:
    r, g, b = colorsys.hsv_to_rgb(h % 1.0, s, v)
    return "#{:02x}{:02x}{:02x}".format(round(r * 255), round(g * 255), round(b * 255))


def _f(x: float) -> str:
    s = f"{x:.3f}"
    return "0.000" if s == "-0.000" else s


def _fill(t: PlacedTile, params: Params, style: RenderStyle, copies: int) -> str:
    if style.color == "wedge":
        return _hex(t.wedge_index / params.n)
    if style.color == "closure":
        return _hex(t.closure_copy / max(copies, 1))
    return style.fill


def _svg_open(lo: np.ndarray, hi: np.ndarray, style: RenderStyle) -> list[str]:
    span = hi - lo
    margin = 0.05 * span
    lo, hi = lo - margin, hi + margin
    s = style.scale
    x, y = lo[0] * s, -hi[1] * s
    w, h = (hi[0] - lo[0]) * s, (hi[1] - lo[1]) * s
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_f(w)}" height="{_f(h)}" '
        f'viewBox="{_f(x)} {_f(y)} {_f(w)} {_f(h)}">',
        f'<rect x="{_f(x)}" y="{_f(y)}" width="{_f(w)}" height="{_f(h)}" fill="{style.background}"></rect>',
    ]


def _points_attr(vertices: np.ndarray, scale: float) -> str:
    return " ".join(f"{_f(x * scale)},{_f(-y * scale)}" for x, y in vertices)


def export_svg(tiling: Tiling, tiles: Sequence[PlacedTile], style: RenderStyle = RenderStyle(),
               radius: float | None = None) -> str:
    """One ``<polygon>`` per tile, tagged with its wedge, closure copy and position."""
    params = tiling.params
    if radius:
        lo, hi = np.array([-radius, -radius]), np.array([radius, radius])
    elif tiles:
        allv = np.vstack([t.vertices for t in tiles])
        lo, hi = allv.min(axis=0), allv.max(axis=0)
    else:
        lo, hi = np.array([-1.0, -1.0]), np.array([1.0, 1.0])
    lines = _svg_open(lo, hi, style)
    lines.append(
        f'<g id="tiling" data-m="{params.m}" data-k="{params.k}" data-n="{params.n}" '
        f'data-t="{params.t}" data-offset="{str(params.offset).lower()}" data-w="{params.w}">'
    )
    copies = len(tiling.closure_lattice)
    for t in tiles:
        lines.append(
            f'<polygon points="{_points_attr(t.vertices, style.scale)}" fill="{_fill(t, params, style, copies)}" '
            f'stroke="{style.stroke}" stroke-width="{_f(style.stroke_width)}" '
            f'data-wedge="{t.wedge_index}" data-closure="{t.closure_copy}" data-r="{t.row}" data-c="{t.col}" '
            f'data-rotation="{t.motion.rotation_index}"></polygon>'
        )
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def export_prototile_svg(prototile: Prototile, style: RenderStyle = RenderStyle(label_edges=True)) -> str:
    """Single prototile, optionally with each edge labelled by its direction index."""
    verts = prototile.vertices()
    lo, hi = verts.min(axis=0) - 0.5, verts.max(axis=0) + 0.5
    lines = _svg_open(lo, hi, style)
    fill = _hex(0.0) if style.color == "wedge" else style.fill
    lines.append(
        f'<polygon points="{_points_attr(verts, style.scale)}" fill="{fill}" stroke="{style.stroke}" '
        f'stroke-width="{_f(style.stroke_width)}"></polygon>'
    )
    if style.label_edges:
        # boundary edges: k+1 lower edges, then the upper path walked backwards
        labels = list(prototile.lower_dirs) + list(reversed(prototile.upper_dirs))
        size = 0.3 * style.scale
        V = len(verts)
        for j, d in enumerate(labels):
            a, b = verts[j], verts[(j + 1) % V]
            mid = (a + b) / 2
            out = np.array([b[1] - a[1], a[0] - b[0]])
            pos = mid + 0.25 * out / np.hypot(*out)
            lines.append(
                f'<text x="{_f(pos[0] * style.scale)}" y="{_f(-pos[1] * style.scale)}" font-size="{_f(size)}" '
                f'text-anchor="middle" dominant-baseline="middle">{d}</text>'
            )
        for name, p in (("P", prototile.start), ("Q", prototile.end)):
            x, y = p.project()
            lines.append(
                f'<circle cx="{_f(x * style.scale)}" cy="{_f(-y * style.scale)}" r="{_f(0.06 * style.scale)}" '
                f'fill="{style.stroke}" data-name="{name}"></circle>'
            )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
