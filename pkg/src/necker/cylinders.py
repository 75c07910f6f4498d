"""Saddle connections, maximal cylinders and multi-twist matrices in odd/odd directions."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .flow import (
    Direction,
    GeodesicState,
    OutcomeKind,
    SingularHit,
    TraceOutcome,
    TruncatedTrace,
    embed,
    generic_start,
    iter_crossings,
    trace,
    start_state,
)
from .geometry import clip_halfplane, point_in_polygon, segments_intersect, signed_area
from .surface import CHART_CORNERS, SquareId, chart_to_space, lattice_coordinates, rotate, squares_at_vertex

Matrix2 = tuple[tuple[int, int], tuple[int, int]]


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (abs(a), (1 if a >= 0 else -1), 0)
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


def shear_normalize(d: Direction | Sequence[int]) -> Matrix2:
    """A unimodular integer matrix taking the primitive vector (a, b) to (1, 0)."""
    a, b = d.vector() if isinstance(d, Direction) else d
    g, x, y = _ext_gcd(a, b)
    if g != 1:
        raise ValueError(f"({a},{b}) is not primitive")
    return ((x, y), (-b, a))


def _apply2(m, v):
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


def _inverse2(m):
    (p, q), (r, s) = m
    det = p * s - q * r
    return ((Fraction(s, det), Fraction(-q, det)), (Fraction(-r, det), Fraction(p, det)))


def twist_matrix(p: int, q: int) -> Matrix2:
    """Derivative of the multi-twist in the cylinders of direction (p, q); defined up to sign."""
    if p % 2 == 0 or q % 2 == 0:
        raise ValueError("p and q must be odd")
    if gcd(p, q) != 1:
        raise ValueError("p and q must be coprime")
    return ((1 - 6 * p * q, 6 * p * p), (-6 * q * q, 1 + 6 * p * q))


# --- saddle connections -----------------------------------------------------

@dataclass
class SaddleConnection:
    start: tuple[int, int, int]
    end: tuple[int, int, int]
    direction: Direction
    length_sq: Fraction
    states: list[GeodesicState] = field(repr=False)
    times: list[Fraction] = field(repr=False)

    @property
    def duration(self) -> Fraction:
        return self.times[-1]

    def point_at(self, t: Fraction):
        """Point of R^3 reached after time t along the connection."""
        idx = max(i for i, ti in enumerate(self.times[:-1]) if ti <= t)
        s = self.states[idx]
        dt = t - self.times[idx]
        local = (s.point[0] + dt * s.dir[0], s.point[1] + dt * s.dir[1])
        return chart_to_space(s.square, local), s.square, local

    def midpoint(self):
        return self.point_at(self.duration / 2)

    def polyline(self) -> list:
        """Corner, every edge crossing, corner: the connection as points of R^3."""
        pts = [embed(s) for s in self.states]
        pts.append(tuple(Fraction(c) for c in self.end))
        return pts


def _as_vertex(p) -> tuple[int, int, int]:
    if any(Fraction(c).denominator != 1 for c in p):
        raise ValueError(f"{p} is not a lattice point")
    return tuple(int(c) for c in p)


INWARD_SIGNS = {0: (1, 1), 1: (-1, 1), 2: (-1, -1), 3: (1, -1)}


def prongs(p: Sequence[int], d: Direction) -> list[GeodesicState]:
    """Outgoing states at a cone point, one per incident square, each parallel to ``d``."""
    if 0 in d.vector():
        raise ValueError("prongs are enumerated for directions off the axes")
    out = []
    for sq, corner in squares_at_vertex(p):
        sx, sy = INWARD_SIGNS[corner]
        for r in range(4):
            v = rotate(d.vector(), r)
            if v[0] * sx > 0 and v[1] * sy > 0:
                out.append(GeodesicState(sq, CHART_CORNERS[corner], v))
                break
    return out


def trace_from_corner(state: GeodesicState, max_crossings: int = 100_000) -> SaddleConnection:
    states, times = [state], [Fraction(0)]
    try:
        for count, (s, t) in enumerate(iter_crossings(state)):
            if count >= max_crossings:
                raise TruncatedTrace(f"no cone point within {max_crossings} crossings")
            states.append(s)
            times.append(t)
    except SingularHit as hit:
        times.append(hit.time)
        start = _as_vertex(embed(state))
        n = state.dir[0] ** 2 + state.dir[1] ** 2
        d = Direction(*state.dir)
        return SaddleConnection(start, _as_vertex(hit.vertex), d, hit.time * hit.time * n, states, times)
    raise AssertionError("unreachable")


def separatrix(p: Sequence[int], prong: int, d: Direction, max_crossings: int = 100_000) -> SaddleConnection:
    """Follow the ``prong``-th outgoing ray at cone point ``p`` until it reaches a cone point."""
    rays = prongs(p, d)
    return trace_from_corner(rays[prong], max_crossings)


def saddle_connection_through(state: GeodesicState, max_crossings: int = 100_000) -> SaddleConnection:
    """The saddle connection containing an interior point, oriented along ``state.dir``."""
    try:
        for count, _ in enumerate(iter_crossings(state.reversed())):
            if count >= max_crossings:
                raise TruncatedTrace("backward ray did not reach a cone point")
    except SingularHit as hit:
        back = (-hit.dir[0], -hit.dir[1])
        return trace_from_corner(GeodesicState(hit.square, CHART_CORNERS[hit.corner], back), max_crossings)
    raise AssertionError("unreachable")


# --- cylinders ----------------------------------------------------------------

@dataclass
class StripVisit:
    """One pass of the core curve through a square, placed in the unfolded plane."""

    state: GeodesicState
    rotation: int  # chart vectors = rotate(unfolded vectors, rotation)
    anchor: tuple[Fraction, Fraction]  # unfolded position of state.point

    def to_unfolded(self, chart_pt):
        v = rotate((chart_pt[0] - self.state.point[0], chart_pt[1] - self.state.point[1]), -self.rotation)
        return (self.anchor[0] + v[0], self.anchor[1] + v[1])

    def to_chart(self, pt):
        v = rotate((pt[0] - self.anchor[0], pt[1] - self.anchor[1]), self.rotation)
        return (self.state.point[0] + v[0], self.state.point[1] + v[1])


def unfold_period(outcome: TraceOutcome) -> list[StripVisit]:
    states = outcome.period_states
    ref = states[0].dir
    origin = states[0].point
    visits = []
    for s, t in zip(states, outcome.times):
        rot = next(r for r in range(4) if rotate(ref, r) == s.dir)
        dt = t - outcome.times[0]
        visits.append(StripVisit(s, rot, (origin[0] + dt * ref[0], origin[1] + dt * ref[1])))
    return visits


@dataclass
class Cylinder:
    direction: Direction
    circumference_sq: Fraction
    area: Fraction
    sheared_height: Fraction
    sheared_circumference: Fraction
    boundary_out: list[SaddleConnection]
    boundary_in: list[SaddleConnection]
    core: TraceOutcome = field(repr=False)
    visits: list[StripVisit] = field(repr=False, default_factory=list)
    shear: Matrix2 | None = None
    strip: tuple[Fraction, Fraction] | None = None  # sheared heights of the two boundary lines
    nested: bool | None = None

    @property
    def width_times_circumference(self) -> Fraction:
        return self.area

    @property
    def width_sq(self) -> Fraction:
        return self.area * self.area / self.circumference_sq

    def boundary_singularities(self, which: str) -> list[tuple[int, int, int]]:
        chain = self.boundary_out if which == "out" else self.boundary_in
        return [sc.start for sc in chain]

    def to_record(self) -> dict:
        def chain(scs):
            return [{"start": list(sc.start), "end": list(sc.end), "length_sq": str(sc.length_sq)} for sc in scs]

        return {
            "direction": [self.direction.a, self.direction.b],
            "area": str(self.area),
            "circumference_sq": str(self.circumference_sq),
            "boundary_out": chain(self.boundary_out),
            "boundary_in": chain(self.boundary_in),
        }


def boundary_polygon(chain: Sequence[SaddleConnection]) -> list[tuple[Fraction, Fraction]]:
    """Projected boundary in deck lattice coordinates, one vertex per corner or edge crossing."""
    pts = []
    for sc in chain:
        pts.extend(lattice_coordinates(p) for p in sc.polyline()[:-1])
    return pts


def maximal_cylinder(seed: TraceOutcome, max_crossings: int = 100_000) -> Cylinder:
    """The maximal cylinder containing a periodic core curve."""
    seed.raise_for_status()
    if seed.kind is not OutcomeKind.PERIODIC:
        raise ValueError("the seed must be a periodic trajectory")
    visits = unfold_period(seed)
    ref = visits[0].state.dir
    shear = shear_normalize(ref)
    period = seed.period_time
    x_core, y_core = _apply2(shear, visits[0].anchor)

    corners = []  # (sheared x, sheared y, vertex)
    for v in visits:
        for c in CHART_CORNERS:
            x, y = _apply2(shear, v.to_unfolded(c))
            corners.append((Fraction(x), Fraction(y), _as_vertex(chart_to_space(v.state.square, c))))
    y_top = min(y for _, y, _ in corners if y > y_core)
    y_bot = max(y for _, y, _ in corners if y < y_core)
    area = period * (y_top - y_bot)

    inv = _inverse2(shear)
    chains = []
    for level_y in (y_top, y_bot):
        marks: dict[Fraction, tuple] = {}
        for x, y, vert in corners:
            if y == level_y:
                key = x % period
                if marks.setdefault(key, vert) != vert:
                    raise AssertionError("two cone points unfold to the same boundary position")
        xs = sorted(marks)
        chain = []
        for i, x in enumerate(xs):
            x_next = xs[i + 1] if i + 1 < len(xs) else xs[0] + period
            # bring the midpoint next to the unfolded core before looking it up
            mid_x = (x + x_next) / 2
            mid_x = x_core - 1 + (mid_x - x_core + 1) % period
            candidates = [_apply2(inv, (mid_x + k * period, level_y)) for k in (0, 1)]
            sc = _connection_at(visits, candidates, max_crossings)
            if sc.start != marks[x] or sc.end != marks[x_next % period]:
                raise AssertionError("boundary saddle connection endpoints disagree with the unfolding")
            chain.append(sc)
        chains.append(chain)

    top, bottom = chains
    area_top = abs(signed_area(boundary_polygon(top)))
    area_bottom = abs(signed_area(boundary_polygon(bottom)))
    outer, inner = (top, bottom) if area_top >= area_bottom else (bottom, top)
    nested = point_in_polygon(boundary_polygon(inner)[0], boundary_polygon(outer)) == 1
    return Cylinder(
        direction=Direction(*seed.start.dir),
        circumference_sq=period * period * (ref[0] ** 2 + ref[1] ** 2),
        area=area,
        sheared_height=y_top - y_bot,
        sheared_circumference=period,
        boundary_out=outer,
        boundary_in=inner,
        core=seed,
        visits=visits,
        shear=shear,
        strip=(y_bot, y_top),
        nested=nested,
    )


def _connection_at(visits: Sequence[StripVisit], points, max_crossings: int) -> SaddleConnection:
    """Saddle connection through the first unfolded point that lands inside a visited square."""
    for pt in points:
        for v in visits:
            local = v.to_chart(pt)
            if all(0 < c < 1 for c in local):
                return saddle_connection_through(GeodesicState(v.state.square, local, v.state.dir), max_crossings)
    raise AssertionError("boundary midpoint is not inside any square crossed by the core")


def cylinder_for_direction(d: Direction, max_crossings: int | None = None) -> Cylinder:
    if not d.is_odd:
        raise ValueError("maximal cylinders are built for odd/odd directions")
    seed = trace(start_state(d, generic_start(d)), max_crossings)
    return maximal_cylinder(seed)


def area_by_local_direction(cyl: Cylinder) -> dict[tuple[int, tuple[int, int]], Fraction]:
    """Area of the cylinder inside each face of the three-square quotient, split by unoriented local slope."""
    y_bot, y_top = cyl.strip
    out: dict = defaultdict(Fraction)
    for v in cyl.visits:
        poly = [_apply2(cyl.shear, v.to_unfolded(c)) for c in CHART_CORNERS]
        poly = clip_halfplane(poly, (0, 1), y_top)
        poly = clip_halfplane(poly, (0, -1), -y_bot)
        if len(poly) < 3:
            continue
        d = v.state.dir
        key_dir = d if (d[0], d[1]) > (-d[0], -d[1]) else (-d[0], -d[1])
        out[(v.state.square.face, key_dir)] += abs(signed_area(poly))
    return dict(out)


def is_simple(seed: TraceOutcome) -> bool:
    """Whether a closed trajectory has no transverse self-intersection."""
    if seed.kind is not OutcomeKind.PERIODIC:
        raise ValueError("a periodic trajectory is required")
    states = seed.period_states
    times = seed.times
    by_square: dict[SquareId, list] = defaultdict(list)
    for i, s in enumerate(states):
        dt = times[i + 1] - times[i]
        end = (s.point[0] + dt * s.dir[0], s.point[1] + dt * s.dir[1])
        by_square[s.square].append((s.point, end, s.dir))
    for segs in by_square.values():
        for i in range(len(segs)):
            p1, p2, d1 = segs[i]
            for j in range(i + 1, len(segs)):
                q1, q2, d2 = segs[j]
                if d1[0] * d2[1] - d1[1] * d2[0] == 0:
                    continue  # parallel passes of a closed geodesic never meet
                if segments_intersect(p1, p2, q1, q2):
                    return False
    return True
