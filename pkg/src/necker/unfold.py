"""Integer-only crossing engine for long trajectories.

A trajectory is unfolded into the plane, where it is a straight line through
the unit grid. Edge crossings are then a cutting sequence computed with
integer comparisons, and the current square is tracked through a precomputed
transition table. Chart coordinates are only reconstructed when asked for.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm
from typing import Sequence

from .flow import GeodesicState, SingularHit
from .surface import CHART_CORNERS, SquareId, adjacent_square, rotate, vsub


def _transition_table() -> tuple:
    table = []
    for k in range(3):
        base = (-1, 0, 0)
        sq = SquareId(base, (k, (k + 1) % 3))
        row = []
        for side in range(4):
            adj = adjacent_square(sq, side)
            dx, dy, dz = vsub(adj.square.base, base)
            row.append((dx, dy, dz, adj.square.axes[0], adj.rotation))
        table.append(tuple(row))
    return tuple(table)


TRANSITIONS = _transition_table()


@dataclass(frozen=True)
class WalkRecord:
    """Snapshot at one edge crossing of an unfolded walk."""

    crossing: int
    time: Fraction  # elapsed multiples of the direction vector
    state: GeodesicState
    extent_sq: int = 0  # largest squared base displacement seen so far


class UnfoldedLine:
    """The developed straight line of a trajectory, with its integer clock."""

    def __init__(self, start: GeodesicState):
        self.start = start
        a, b = start.dir
        s0, t0 = start.point
        self.den = lcm(s0.denominator, t0.denominator)
        self.x0 = int(s0 * self.den)
        self.y0 = int(t0 * self.den)
        self.a, self.b = a, b
        self.scale_a = abs(a) or 1
        self.scale_b = abs(b) or 1
        # time = K / clock_unit
        self.clock_unit = self.den * self.scale_a * self.scale_b

    def time(self, k: int) -> Fraction:
        return Fraction(k, self.clock_unit)

    def clock_for_length(self, length_sq: int) -> int:
        """Smallest clock value whose elapsed Euclidean length squared reaches ``length_sq``."""
        n = self.a * self.a + self.b * self.b
        num = length_sq * self.clock_unit * self.clock_unit
        c = -(-num // n)
        return isqrt(c - 1) + 1 if c > 0 else 0

    def state_at(self, k: int, cell: tuple[int, int], rot: int, base, face: int) -> GeodesicState:
        tau = self.time(k)
        px = Fraction(self.x0, self.den) + tau * self.a - cell[0] - Fraction(1, 2)
        py = Fraction(self.y0, self.den) + tau * self.b - cell[1] - Fraction(1, 2)
        cx, cy = rotate((px, py), rot)
        sq = SquareId(tuple(base), (face, (face + 1) % 3))
        return GeodesicState(sq, (cx + Fraction(1, 2), cy + Fraction(1, 2)), rotate((self.a, self.b), rot))


def walk(start: GeodesicState, max_crossings: int, sample_clocks: Sequence[int] = (),
         record_all: bool = False) -> tuple[list[WalkRecord], int]:
    """Run up to ``max_crossings`` crossings.

    Records the first crossing at or beyond each clock value in
    ``sample_clocks`` (sorted ascending), or every crossing when ``record_all``.
    Each record carries the largest squared displacement of the square base
    over all crossings so far. Returns the records and the number of
    crossings performed. Raises
    SingularHit when the line runs into a corner.
    """
    line = UnfoldedLine(start)
    a, b = line.a, line.b
    den = line.den
    inf = float("inf")
    if a > 0:
        kx, jx, sx = (den - line.x0) * line.scale_b, 1, 1
    elif a < 0:
        kx, jx, sx = line.x0 * line.scale_b, 3, -1
    else:
        kx, jx, sx = inf, None, 0
    if b > 0:
        ky, jy, sy = (den - line.y0) * line.scale_a, 2, 1
    elif b < 0:
        ky, jy, sy = line.y0 * line.scale_a, 0, -1
    else:
        ky, jy, sy = inf, None, 0
    step_x = den * line.scale_b
    step_y = den * line.scale_a

    ci = cj = 0
    rot = 0
    bx, by, bz = start.square.base
    x0, y0, z0 = bx, by, bz
    extent = 0
    face = start.square.axes[0]
    table = TRANSITIONS
    samples = list(sample_clocks)
    si = 0
    nxt = samples[0] if samples else inf
    records: list[WalkRecord] = []
    count = 0
    while count < max_crossings:
        if kx < ky:
            k = kx
            kx += step_x
            ci += sx
            side = (jx + rot) & 3
        elif ky < kx:
            k = ky
            ky += step_y
            cj += sy
            side = (jy + rot) & 3
        else:
            # both grid lines at once: the line passes a corner of the current cell
            state = line.state_at(kx, (ci, cj), rot, (bx, by, bz), face)
            raise SingularHit(state.square, CHART_CORNERS.index(state.point), line.time(kx), state.dir)
        dx, dy, dz, face, rho = table[face][side]
        bx += dx
        by += dy
        bz += dz
        rot = (rot - rho) & 3
        count += 1
        e = (bx - x0) * (bx - x0) + (by - y0) * (by - y0) + (bz - z0) * (bz - z0)
        if e > extent:
            extent = e
        if record_all or k >= nxt:
            records.append(WalkRecord(count, line.time(k), line.state_at(k, (ci, cj), rot, (bx, by, bz), face), extent))
            while k >= nxt:
                si += 1
                nxt = samples[si] if si < len(samples) else inf
            if not record_all and nxt == inf:
                break
    return records, count
