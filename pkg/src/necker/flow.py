"""Exact straight-line flow on the Necker surface with rational data."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import Iterator, Sequence

from .surface import (
    CHART_CORNERS,
    FAVORITE_SQUARE,
    NeckerIsometry,
    SIGNED_PERMUTATIONS,
    SquareId,
    adjacent_square,
    apply_isometry,
    chart_to_space,
    chart_vector_to_space,
    deck_coordinate,
    level,
    rotate,
    vsub,
)

DEFAULT_START = (Fraction(1, 3), Fraction(1, 7))


class ParityClass(str, Enum):
    ODD = "O"
    FIRST_EVEN = "E1"
    SECOND_EVEN = "E2"


@dataclass(frozen=True)
class Direction:
    """Primitive integer direction (a, b) in a chart; slope b/a."""

    a: int
    b: int

    def __post_init__(self) -> None:
        if not isinstance(self.a, int) or not isinstance(self.b, int):
            raise TypeError("direction components must be integers")
        if gcd(self.a, self.b) != 1:
            raise ValueError(f"direction ({self.a},{self.b}) is not primitive")

    @classmethod
    def parse(cls, text: str) -> "Direction":
        """Parse ``"a/b"`` (or ``"a,b"``) as the vector (a, b)."""
        sep = "/" if "/" in text else ","
        first, _, second = text.strip().partition(sep)
        if not second:
            raise ValueError(f"expected a direction like 5/3, got {text!r}")
        return cls(int(first), int(second))

    @property
    def parity_class(self) -> ParityClass:
        if self.a % 2 == 0:
            return ParityClass.FIRST_EVEN
        if self.b % 2 == 0:
            return ParityClass.SECOND_EVEN
        return ParityClass.ODD

    @property
    def is_odd(self) -> bool:
        return self.parity_class is ParityClass.ODD

    @property
    def norm_sq(self) -> int:
        return self.a * self.a + self.b * self.b

    def vector(self) -> tuple[int, int]:
        return (self.a, self.b)

    def __str__(self) -> str:
        return f"{self.b}/{self.a}"


@dataclass(frozen=True)
class GeodesicState:
    square: SquareId
    point: tuple[Fraction, Fraction]
    dir: tuple[int, int]

    def __post_init__(self) -> None:
        pt = (Fraction(self.point[0]), Fraction(self.point[1]))
        if not all(0 <= c <= 1 for c in pt):
            raise ValueError(f"chart point {pt} outside the unit square")
        d = (int(self.dir[0]), int(self.dir[1]))
        if d == (0, 0):
            raise ValueError("direction must be nonzero")
        object.__setattr__(self, "point", pt)
        object.__setattr__(self, "dir", d)

    @property
    def at_corner(self) -> bool:
        return all(c in (0, 1) for c in self.point)

    def h_key(self) -> tuple:
        """State modulo deck translations: the image in the three-square quotient."""
        return (self.square.face, self.point, self.dir)

    def reversed(self) -> "GeodesicState":
        return GeodesicState(self.square, self.point, (-self.dir[0], -self.dir[1]))

    def to_record(self) -> dict:
        return {
            "square": {"base": list(self.square.base), "axes": list(self.square.axes)},
            "point": [_q(c) for c in self.point],
            "dir": list(self.dir),
            "embedded": [_q(c) for c in embed(self)],
        }


def _q(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


class SingularHit(Exception):
    """The trajectory ran into a cone point."""

    def __init__(self, square: SquareId, corner: int, time: Fraction | None = None,
                 dir: tuple[int, int] | None = None):
        self.square = square
        self.corner = corner
        self.time = time
        self.dir = dir
        self.vertex = chart_to_space(square, CHART_CORNERS[corner])
        super().__init__(f"hit cone point {tuple(int(c) for c in self.vertex)}")


class TruncatedTrace(Exception):
    """The crossing budget ran out before the trajectory closed up."""


def embed(state: GeodesicState):
    return chart_to_space(state.square, state.point)


def space_direction(state: GeodesicState) -> tuple:
    return chart_vector_to_space(state.square, state.dir)


def _exit(point, d) -> tuple[Fraction, list[int]]:
    """Time to leave the unit square and every side reached at that time."""
    s, t = point
    a, b = d
    candidates = []
    if a > 0:
        candidates.append(((1 - s) / a, 1))
    elif a < 0:
        candidates.append((s / -a, 3))
    if b > 0:
        candidates.append(((1 - t) / b, 2))
    elif b < 0:
        candidates.append((t / -b, 0))
    tau = min(c[0] for c in candidates)
    sides = [side for time, side in candidates if time == tau]
    return tau, sides


def advance(state: GeodesicState) -> tuple[GeodesicState, Fraction]:
    """Move to the next edge crossing; returns the new state and the elapsed time."""
    tau, sides = _exit(state.point, state.dir)
    a, b = state.dir
    exit_pt = (state.point[0] + tau * a, state.point[1] + tau * b)
    if len(sides) > 1:
        corner = CHART_CORNERS.index((int(exit_pt[0]), int(exit_pt[1])))
        raise SingularHit(state.square, corner, tau, state.dir)
    side = sides[0]
    start = CHART_CORNERS[side]
    # position along the edge, measured from corner `side`
    lam = (exit_pt[0] - start[0]) + (exit_pt[1] - start[1]) if side in (0, 1) else (
        start[0] - exit_pt[0]) + (start[1] - exit_pt[1])
    adj = adjacent_square(state.square, side)
    nstart = CHART_CORNERS[adj.side]
    nend = CHART_CORNERS[(adj.side + 1) % 4]
    mu = 1 - lam
    new_point = (nstart[0] + mu * (nend[0] - nstart[0]), nstart[1] + mu * (nend[1] - nstart[1]))
    new_dir = rotate(state.dir, -adj.rotation)
    return GeodesicState(adj.square, new_point, new_dir), tau


def step(state: GeodesicState) -> GeodesicState:
    """Next boundary state, expressed in the chart of the square just entered."""
    return advance(state)[0]


def reverse_state(state: GeodesicState) -> GeodesicState:
    """The same point with the opposite direction, in the square the reversed flow enters next.

    For a crossing state (on its entry side) this is the state the reversed
    trajectory has just after it crosses back; for interior points it is just
    the negated direction.
    """
    s, t = state.point
    a, b = state.dir
    side = None
    if s == 0 and a > 0:
        side = 3
    elif s == 1 and a < 0:
        side = 1
    elif t == 0 and b > 0:
        side = 0
    elif t == 1 and b < 0:
        side = 2
    if side is None:
        return state.reversed()
    back, _ = advance(state.reversed())
    return back


class OutcomeKind(str, Enum):
    PERIODIC = "periodic"
    DRIFT_PERIODIC = "drift-periodic"
    SINGULAR = "singular"
    TRUNCATED = "truncated"


@dataclass
class TraceOutcome:
    kind: OutcomeKind
    start: GeodesicState
    crossings: int
    length_sq: Fraction | None
    displacement: tuple[int, int, int] | None
    deck_displacement: tuple[int, int] | None
    states: list[GeodesicState] = field(default_factory=list, repr=False)
    times: list[Fraction] = field(default_factory=list, repr=False)
    singular: SingularHit | None = field(default=None, repr=False)

    @property
    def period_time(self) -> Fraction | None:
        """Closing time measured in multiples of the direction vector."""
        if self.kind in (OutcomeKind.PERIODIC, OutcomeKind.DRIFT_PERIODIC):
            return self.times[-1] - self.times[0]
        return None

    @property
    def period_states(self) -> list[GeodesicState]:
        """Crossing states over one period, excluding the repeated closing state."""
        return self.states[:-1]

    def raise_for_status(self) -> "TraceOutcome":
        if self.kind is OutcomeKind.SINGULAR:
            raise self.singular
        if self.kind is OutcomeKind.TRUNCATED:
            raise TruncatedTrace(f"no recurrence within {self.crossings} crossings")
        return self

    def summary(self) -> dict:
        out = {"kind": self.kind.value, "crossings": self.crossings}
        if self.length_sq is not None:
            out["length_sq"] = int(self.length_sq) if self.length_sq.denominator == 1 else _q(self.length_sq)
        if self.displacement is not None:
            out["displacement"] = list(self.displacement)
            out["deck_displacement"] = list(self.deck_displacement)
        if self.singular is not None:
            out["vertex"] = [int(c) for c in self.singular.vertex]
        return out

    def dump_jsonl(self) -> str:
        return "".join(json.dumps(s.to_record(), sort_keys=True) + "\n" for s in self.states)


def default_max_crossings(d: Sequence[int]) -> int:
    return 8 * (abs(d[0]) + abs(d[1])) + 16


def start_state(direction: Direction | Sequence[int], point=DEFAULT_START,
                square: SquareId = FAVORITE_SQUARE) -> GeodesicState:
    vec = direction.vector() if isinstance(direction, Direction) else tuple(direction)
    if not isinstance(direction, Direction):
        Direction(*vec)
    return GeodesicState(square, tuple(Fraction(c) for c in point), vec)


def line_meets_cone_point(point: Sequence, d: Sequence[int]) -> bool:
    """Whether the full straight line through ``point`` with primitive direction ``d`` meets a corner.

    Unfolded along the trajectory every corner sits on the integer lattice, and
    b*x - a*y takes every integer value there, so the line is singular exactly
    when b*x0 - a*y0 is an integer.
    """
    a, b = d
    return (b * Fraction(point[0]) - a * Fraction(point[1])).denominator == 1


_FALLBACK_STARTS = (
    DEFAULT_START,
    (Fraction(1, 3), Fraction(1, 5)),
    (Fraction(2, 7), Fraction(1, 11)),
    (Fraction(1, 13), Fraction(5, 17)),
)


def generic_start(d: Direction | Sequence[int]) -> tuple[Fraction, Fraction]:
    """First point of a fixed list whose line in direction ``d`` avoids every cone point."""
    vec = d.vector() if isinstance(d, Direction) else tuple(d)
    for point in _FALLBACK_STARTS:
        if not line_meets_cone_point(point, vec):
            return point
    # with an odd p > |b|, b/p - a/2 is never an integer
    return (Fraction(1, 2 * abs(vec[1]) + 3), Fraction(1, 2))


def iter_crossings(start: GeodesicState) -> Iterator[tuple[GeodesicState, Fraction]]:
    """Yield (state, elapsed time) at each successive edge crossing."""
    state, clock = start, Fraction(0)
    while True:
        try:
            state, tau = advance(state)
        except SingularHit as hit:
            hit.time = clock + hit.time
            raise
        clock += tau
        yield state, clock


def trace(start: GeodesicState, max_crossings: int | None = None) -> TraceOutcome:
    """Follow the trajectory until its quotient state repeats, a cone point is hit, or the budget runs out."""
    if gcd(*start.dir) != 1:
        raise ValueError(f"direction {start.dir} is not primitive")
    if max_crossings is None:
        max_crossings = default_max_crossings(start.dir)
    a, b = start.dir
    norm_sq = a * a + b * b
    seen: dict[tuple, int] = {}
    states: list[GeodesicState] = []
    times: list[Fraction] = []
    try:
        for state, clock in iter_crossings(start):
            key = state.h_key()
            if key in seen:
                first = seen[key]
                states.append(state)
                times.append(clock)
                if first != 0:
                    raise AssertionError("flow is not invertible on the quotient")
                states, times = states[first:], times[first:]
                shift = vsub(state.square.base, states[0].square.base)
                kind = OutcomeKind.PERIODIC if shift == (0, 0, 0) else OutcomeKind.DRIFT_PERIODIC
                period = times[-1] - times[0]
                return TraceOutcome(
                    kind, start, len(states) - 1, period * period * norm_sq,
                    shift, (shift[0], -shift[2]), states, times,
                )
            if len(states) >= max_crossings:
                return TraceOutcome(OutcomeKind.TRUNCATED, start, len(states), None, None, None, states, times)
            seen[key] = len(states)
            states.append(state)
            times.append(clock)
    except SingularHit as hit:
        return TraceOutcome(OutcomeKind.SINGULAR, start, len(states), None, None, None, states, times, hit)
    raise AssertionError("unreachable")


def classify_direction(d: Direction) -> OutcomeKind:
    """Odd/odd directions are completely periodic; all others drift."""
    return OutcomeKind.PERIODIC if d.is_odd else OutcomeKind.DRIFT_PERIODIC


def trace_direction(d: Direction, point=DEFAULT_START, max_crossings: int | None = None) -> TraceOutcome:
    return trace(start_state(d, point), max_crossings)


# --- sixfold symmetry -------------------------------------------------------

def _isometry_between(src: GeodesicState, dst: GeodesicState) -> NeckerIsometry | None:
    p, q = embed(src), embed(dst)
    u, w = space_direction(src), space_direction(dst)
    for mat in SIGNED_PERMUTATIONS:
        g0 = NeckerIsometry(mat, (0, 0, 0))
        if g0.linear(u) != w:
            continue
        shift = vsub(q, g0(p))
        if level(shift) != 0 or any(c.denominator != 1 for c in shift):
            continue
        g = NeckerIsometry(mat, shift)
        if apply_isometry(g, src.square) == dst.square:
            return g
    return None


def maps_state(g: NeckerIsometry, src: GeodesicState, dst: GeodesicState) -> bool:
    return (
        apply_isometry(g, src.square) == dst.square
        and g(embed(src)) == embed(dst)
        and g.linear(space_direction(src)) == space_direction(dst)
    )


class WitnessNotFound(RuntimeError):
    pass


def sixfold_witness(outcome: TraceOutcome) -> NeckerIsometry:
    """Order-six isometry advancing the closed geodesic by a sixth of its period."""
    if outcome.kind is not OutcomeKind.PERIODIC:
        raise ValueError("a periodic trace is required")
    states = outcome.period_states
    times = outcome.times
    n = len(states)
    sixth = outcome.period_time / 6
    target = times[0] + sixth
    try:
        j = times.index(target)
    except ValueError as exc:
        raise WitnessNotFound("no crossing one sixth of a period downstream") from exc
    xi = _isometry_between(states[0], states[j])
    if xi is None or xi.order(6) != 6:
        raise WitnessNotFound("no order-six isometry matches the shifted state")
    for i, s in enumerate(states):
        if not maps_state(xi, s, states[(i + j) % n]):
            raise WitnessNotFound(f"shift fails at crossing {i}")
    return xi
