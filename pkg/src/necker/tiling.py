"""Periodic tilings of the plane by the disks bounded by cylinder boundaries."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor
from typing import Sequence

from .cylinders import Cylinder, boundary_polygon, cylinder_for_direction, is_simple
from .flow import Direction, sixfold_witness
from .geometry import (
    bbox,
    bboxes_overlap,
    clip_box,
    cross,
    signed_area,
    triangles_overlap,
    triangulate,
)
from .surface import NeckerIsometry, from_lattice_coordinates, lattice_coordinates, project

NEGATE = ((-1, 0, 0), (0, -1, 0), (0, 0, -1))


class NonSimpleDirection(ValueError):
    """The closed geodesics in this direction cross themselves, so their cylinder boundaries do not tile."""


@dataclass(frozen=True)
class PlaneMap:
    """An isometry restricted to the plane, written in deck lattice coordinates."""

    matrix: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]
    shift: tuple[Fraction, Fraction]

    @classmethod
    def restrict(cls, g: NeckerIsometry) -> "PlaneMap":
        origin = lattice_coordinates(g(from_lattice_coordinates(0, 0)))
        e1 = lattice_coordinates(g(from_lattice_coordinates(1, 0)))
        e2 = lattice_coordinates(g(from_lattice_coordinates(0, 1)))
        col1 = (e1[0] - origin[0], e1[1] - origin[1])
        col2 = (e2[0] - origin[0], e2[1] - origin[1])
        return cls(((col1[0], col2[0]), (col1[1], col2[1])), origin)

    def __call__(self, p):
        (a, b), (c, d) = self.matrix
        return (a * p[0] + b * p[1] + self.shift[0], c * p[0] + d * p[1] + self.shift[1])


@dataclass
class SymmetryPair:
    rotation6: NeckerIsometry
    rotation2: NeckerIsometry
    center6: tuple[Fraction, Fraction, Fraction]
    center2: tuple[Fraction, Fraction, Fraction]

    def relations_hold(self) -> bool:
        ident = NeckerIsometry.identity()
        a, b = self.rotation6, self.rotation2
        return a ** 6 == ident and b @ b == ident and (a @ b) ** 3 == ident


@dataclass
class Tile:
    boundary: tuple  # plane points (rational 3-vectors summing to zero)
    anchor: tuple
    kind: str
    offset: tuple[int, int] = (0, 0)  # coefficients on the two translation generators
    polygon: list = field(default_factory=list, repr=False)  # boundary in deck lattice coordinates

    def to_record(self) -> dict:
        return {
            "kind": self.kind,
            "offset": list(self.offset),
            "anchor": [str(c) for c in self.anchor],
            "polygon": [[str(x), str(y)] for x, y in self.polygon],
        }


@dataclass
class Tiling:
    direction: Direction
    kind: str
    base: Tile
    tiles: list[Tile]
    translations: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]
    symmetry: SymmetryPair
    cylinder: Cylinder = field(repr=False)
    window_radius: Fraction = Fraction(0)


def symmetry_pair(cyl: Cylinder, kind: str = "out") -> SymmetryPair:
    """Order-six rotation advancing the core by a sixth, and the half turn about a boundary saddle midpoint."""
    xi = sixfold_witness(cyl.core)
    chain = cyl.boundary_out if kind == "out" else cyl.boundary_in
    mid, square, local = chain[0].midpoint()
    if local != (Fraction(1, 2), Fraction(1, 2)):
        raise AssertionError("boundary saddle connection midpoint is not a square center")
    half_turn = NeckerIsometry(NEGATE, tuple(2 * c for c in mid))
    return SymmetryPair(xi, half_turn, xi.fixed_point(), half_turn.fixed_point())


def translation_generators(sp: SymmetryPair) -> tuple[NeckerIsometry, NeckerIsometry]:
    """The translations A^3 B and A (A^3 B) A^-1 spanning the rotation-free subgroup."""
    a, b = sp.rotation6, sp.rotation2
    t1 = (a ** 3) @ b
    t2 = a @ t1 @ a.inverse()
    if not (t1.is_translation and t2.is_translation):
        raise AssertionError("generators are not translations")
    return t1, t2


def _lattice_shift(t: NeckerIsometry) -> tuple[Fraction, Fraction]:
    return lattice_coordinates(t.translation)


def covolume(v1, v2) -> Fraction:
    return abs(Fraction(v1[0] * v2[1] - v1[1] * v2[0]))


def base_tile(cyl: Cylinder, kind: str, sp: SymmetryPair) -> Tile:
    chain = cyl.boundary_out if kind == "out" else cyl.boundary_in
    poly = boundary_polygon(chain)
    boundary = tuple(from_lattice_coordinates(*p) for p in poly)
    return Tile(boundary, sp.center6, kind, (0, 0), poly)


def generate_tiling(d: Direction, kind: str = "out", window_radius=8) -> Tiling:
    """All translates of the base disk whose closure meets the window [-R, R]^2 in lattice coordinates."""
    if kind not in ("out", "in"):
        raise ValueError("kind must be 'out' or 'in'")
    cyl = cylinder_for_direction(d)
    if not is_simple(cyl.core):
        raise NonSimpleDirection(f"closed geodesics of direction {d.a}/{d.b} are not simple")
    sp = symmetry_pair(cyl, kind)
    t1, t2 = translation_generators(sp)
    v1, v2 = _lattice_shift(t1), _lattice_shift(t2)
    base = base_tile(cyl, kind, sp)
    radius = Fraction(window_radius)
    tiles = []
    for m, n in _offsets_meeting_box(base.polygon, v1, v2, radius):
        shift = (m * v1[0] + n * v2[0], m * v1[1] + n * v2[1])
        poly = [(x + shift[0], y + shift[1]) for x, y in base.polygon]
        anchor = tuple(c + s for c, s in zip(base.anchor, from_lattice_coordinates(*shift)))
        tiles.append(Tile(tuple(from_lattice_coordinates(*p) for p in poly), anchor, kind, (m, n), poly))
    return Tiling(d, kind, base, tiles, (v1, v2), sp, cyl, radius)


def _offsets_meeting_box(poly, v1, v2, radius) -> list[tuple[int, int]]:
    x0, y0, x1, y1 = bbox(poly)
    det = v1[0] * v2[1] - v1[1] * v2[0]
    # coefficient range covering every shift that could bring the tile's box onto the window
    corners = [(-radius - x1, -radius - y1), (radius - x0, -radius - y1),
               (-radius - x1, radius - y0), (radius - x0, radius - y0)]
    coeffs = [((c[0] * v2[1] - c[1] * v2[0]) / det, (v1[0] * c[1] - v1[1] * c[0]) / det) for c in corners]
    m_lo, m_hi = floor(min(c[0] for c in coeffs)), ceil(max(c[0] for c in coeffs))
    n_lo, n_hi = floor(min(c[1] for c in coeffs)), ceil(max(c[1] for c in coeffs))
    out = []
    box = (-radius, -radius, radius, radius)
    for m in range(m_lo, m_hi + 1):
        for n in range(n_lo, n_hi + 1):
            sx, sy = m * v1[0] + n * v2[0], m * v1[1] + n * v2[1]
            tb = (x0 + sx, y0 + sy, x1 + sx, y1 + sy)
            if tb[0] <= box[2] and box[0] <= tb[2] and tb[1] <= box[3] and box[1] <= tb[3]:
                out.append((m, n))
    return out


@dataclass
class TilingReport:
    covered: bool
    overlap: bool
    area_balance: Fraction
    covered_area: Fraction
    window_area: Fraction
    tile_area: Fraction
    lattice_covolume: Fraction

    def to_record(self) -> dict:
        return {
            "covered": self.covered,
            "overlap": self.overlap,
            "area_balance": str(self.area_balance),
            "covered_area": str(self.covered_area),
            "window_area": str(self.window_area),
            "tile_area": str(self.tile_area),
            "lattice_covolume": str(self.lattice_covolume),
        }


def verify_tiling(tiles: Sequence[Tile], window_radius, translations=None) -> TilingReport:
    """Exact check that the tiles have disjoint interiors and fill the window.

    Every tile is a translate of the first one, so interiors are compared once
    per distinct offset between tiles with overlapping bounding boxes.
    """
    radius = Fraction(window_radius)
    window_area = (2 * radius) ** 2
    if not tiles:
        return TilingReport(False, False, Fraction(0), Fraction(0), window_area, Fraction(0), Fraction(0))
    base = tiles[0].polygon
    tile_area = abs(signed_area(base))
    shifts = []
    for t in tiles:
        dx, dy = t.polygon[0][0] - base[0][0], t.polygon[0][1] - base[0][1]
        if any((x + dx, y + dy) != p for (x, y), p in zip(base, t.polygon)):
            raise ValueError("tiles are not translates of one another")
        shifts.append((dx, dy))

    tris = triangulate(base)
    if sum(abs(signed_area(t)) for t in tris) != tile_area:
        raise AssertionError("triangulation lost area")
    tri_boxes = [bbox(t) for t in tris]
    base_box = bbox(base)

    overlap = False
    checked = set()
    for i, si in enumerate(shifts):
        for sj in shifts[i + 1:]:
            delta = (sj[0] - si[0], sj[1] - si[1])
            if delta in checked or (-delta[0], -delta[1]) in checked:
                continue
            checked.add(delta)
            if delta == (0, 0):
                overlap = True
                break
            moved_box = (base_box[0] + delta[0], base_box[1] + delta[1], base_box[2] + delta[0], base_box[3] + delta[1])
            if not bboxes_overlap(base_box, moved_box):
                continue
            if _translates_overlap(tris, tri_boxes, delta):
                overlap = True
                break
        if overlap:
            break

    lo, hi = (-radius, -radius), (radius, radius)
    covered_area = Fraction(0)
    for sx, sy in shifts:
        for tri in tris:
            moved = [(x + sx, y + sy) for x, y in tri]
            clipped = clip_box(moved, lo, hi)
            if len(clipped) >= 3:
                covered_area += abs(signed_area(clipped))

    lattice = Fraction(0)
    if translations is not None:
        lattice = covolume(*translations)
    return TilingReport(
        covered=(not overlap) and covered_area == window_area,
        overlap=overlap,
        area_balance=tile_area - lattice if translations is not None else Fraction(0),
        covered_area=covered_area,
        window_area=window_area,
        tile_area=tile_area,
        lattice_covolume=lattice,
    )


def _translates_overlap(tris, tri_boxes, delta) -> bool:
    dx, dy = delta
    for t1, b1 in zip(tris, tri_boxes):
        for t2, b2 in zip(tris, tri_boxes):
            moved_box = (b2[0] + dx, b2[1] + dy, b2[2] + dx, b2[3] + dy)
            if not bboxes_overlap(b1, moved_box):
                continue
            moved = [(x + dx, y + dy) for x, y in t2]
            if triangles_overlap(t1, moved):
                return True
    return False


def verify(tiling: Tiling) -> TilingReport:
    return verify_tiling(tiling.tiles, tiling.window_radius, tiling.translations)


def bend_count(polygon: Sequence) -> int:
    """Vertices of a closed polygon where the boundary actually turns."""
    n = len(polygon)
    return sum(1 for i in range(n) if cross(polygon[i - 1], polygon[i], polygon[(i + 1) % n]) != 0)


def rotation_preserves_tile(sp: SymmetryPair, tile: Tile) -> bool:
    """The order-six rotation maps the tile boundary onto itself as a vertex set."""
    image = {project(sp.rotation6(p)) for p in tile.boundary}
    return image == set(tile.boundary)


def rotation_permutes_lattice(sp: SymmetryPair, translations) -> bool:
    """The linear part of the order-six rotation maps the translation lattice into itself."""
    v1, v2 = translations
    det = v1[0] * v2[1] - v1[1] * v2[0]
    rot = PlaneMap.restrict(sp.rotation6)
    for v in (v1, v2):
        w = (rot.matrix[0][0] * v[0] + rot.matrix[0][1] * v[1], rot.matrix[1][0] * v[0] + rot.matrix[1][1] * v[1])
        m = (w[0] * v2[1] - w[1] * v2[0]) / det
        n = (v1[0] * w[1] - v1[1] * w[0]) / det
        if Fraction(m).denominator != 1 or Fraction(n).denominator != 1:
            return False
    return True
