"""Deterministic SVG drawings of the surface projected to the plane perpendicular to (1,1,1).

Drawings use the orthonormal frame f1 = (1,-1,0)/sqrt2, f2 = (-1,-1,2)/sqrt6 of
that plane, so the third coordinate axis points up the page. Geometry stays
exact until serialization, where coordinates are written with nine decimals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .cylinders import Cylinder
from .flow import TraceOutcome, embed
from .surface import from_lattice_coordinates, iter_window_squares, square_vertices
from .tiling import Tiling

FRAME = ((1, -1, 0), (-1, -1, 2))
FRAME_NORMS = (math.sqrt(2.0), math.sqrt(6.0))
PRECISION = 9

LAYER_ORDER = ("lattice", "tiling", "cylinder", "geodesic")
FACE_FILLS = ("#e8e8e8", "#cfcfcf", "#b4b4b4")
TILE_FILLS = ("#9ecae1", "#fdd0a2", "#c7e9c0", "#dadaeb")


@dataclass
class Shape:
    points: list  # exact points of R^3
    closed: bool
    style: str


@dataclass
class Layer:
    tag: str
    shapes: list[Shape] = field(default_factory=list)


@dataclass
class Scene:
    layers: list[Layer] = field(default_factory=list)
    viewport: tuple | None = None  # (xmin, ymin, xmax, ymax) in frame coordinates; None fits the content

    def layer(self, tag: str) -> Layer:
        if tag not in LAYER_ORDER:
            raise ValueError(f"unknown layer tag {tag!r}")
        for lay in self.layers:
            if lay.tag == tag:
                return lay
        lay = Layer(tag)
        self.layers.append(lay)
        self.layers.sort(key=lambda x: LAYER_ORDER.index(x.tag))
        return lay

    def is_empty(self) -> bool:
        return not any(lay.shapes for lay in self.layers)


def frame_coordinates(x: Sequence) -> tuple[float, float]:
    """Coordinates of the projection of x in the fixed orthonormal frame."""
    a = sum(Fraction(c) * f for c, f in zip(x, FRAME[0]))
    b = sum(Fraction(c) * f for c, f in zip(x, FRAME[1]))
    return float(a) / FRAME_NORMS[0], float(b) / FRAME_NORMS[1]


def _fmt(x: float) -> str:
    s = f"{x:.{PRECISION}f}"
    return "0." + "0" * PRECISION if s == "-0." + "0" * PRECISION else s


# --- layer builders -------------------------------------------------------------

def add_rhombille(scene: Scene, radius: int) -> Scene:
    """Projected squares of a deck window; they form the rhombille tiling."""
    lay = scene.layer("lattice")
    for sq in iter_window_squares(radius):
        style = f'fill="{FACE_FILLS[sq.face]}" stroke="#7a7a7a" stroke-width="0.02"'
        lay.shapes.append(Shape(list(square_vertices(sq)), True, style))
    return scene


def add_trace(scene: Scene, outcome: TraceOutcome, color: str = "#d62728") -> Scene:
    pts = [embed(s) for s in outcome.states]
    scene.layer("geodesic").shapes.append(
        Shape(pts, False, f'fill="none" stroke="{color}" stroke-width="0.05" stroke-linejoin="round"'))
    return scene


def add_tiling(scene: Scene, tiling: Tiling) -> Scene:
    lay = scene.layer("tiling")
    for tile in tiling.tiles:
        fill = TILE_FILLS[(tile.offset[0] % 2) + 2 * (tile.offset[1] % 2)]
        pts = [from_lattice_coordinates(*p) for p in tile.polygon]
        lay.shapes.append(Shape(pts, True, f'fill="{fill}" fill-opacity="0.85" stroke="#222222" stroke-width="0.04"'))
    return scene


def add_cylinder(scene: Scene, cyl: Cylinder) -> Scene:
    lay = scene.layer("cylinder")
    for chain, color in ((cyl.boundary_out, "#1f77b4"), (cyl.boundary_in, "#2ca02c")):
        pts = [p for sc in chain for p in sc.polyline()[:-1]]
        lay.shapes.append(Shape(pts, True, f'fill="none" stroke="{color}" stroke-width="0.05"'))
    return add_trace(scene, cyl.core)


# --- serialization --------------------------------------------------------------

def _content_box(scene: Scene) -> tuple[float, float, float, float]:
    xs, ys = [], []
    for lay in scene.layers:
        for sh in lay.shapes:
            for p in sh.points:
                x, y = frame_coordinates(p)
                xs.append(x)
                ys.append(y)
    pad = 0.5
    return (min(xs) - pad, min(ys) - pad, max(xs) + pad, max(ys) + pad)


def render_scene(scene: Scene, pixels_per_unit: int = 40) -> str:
    """SVG text for the scene; identical scenes give identical bytes."""
    if scene.is_empty():
        raise ValueError("scene has no shapes")
    x0, y0, x1, y1 = scene.viewport or _content_box(scene)
    width, height = x1 - x0, y1 - y0
    # page y runs downward, so flip the frame's second axis
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width * pixels_per_unit)}" '
        f'height="{_fmt(height * pixels_per_unit)}" viewBox="{_fmt(x0)} {_fmt(-y1)} {_fmt(width)} {_fmt(height)}">',
    ]
    for lay in scene.layers:
        lines.append(f'<g class="{lay.tag}">')
        for sh in lay.shapes:
            coords = " ".join(f"{_fmt(x)},{_fmt(-y)}" for x, y in map(frame_coordinates, sh.points))
            tag = "polygon" if sh.closed else "polyline"
            lines.append(f'<{tag} points="{coords}" {sh.style}/>')
        lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def scene_with_background(radius: int, parts: Iterable = ()) -> Scene:
    """A rhombille background of the given deck radius with optional traces, cylinders or tilings on top."""
    scene = add_rhombille(Scene(), radius)
    for part in parts:
        if isinstance(part, TraceOutcome):
            add_trace(scene, part)
        elif isinstance(part, Cylinder):
            add_cylinder(scene, part)
        elif isinstance(part, Tiling):
            add_tiling(scene, part)
        else:
            raise TypeError(f"cannot draw {type(part).__name__}")
    return scene
