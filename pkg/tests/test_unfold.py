from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from necker.flow import Direction, SingularHit, generic_start, iter_crossings, start_state
from necker.unfold import UnfoldedLine, walk

from test_flow import primitive_pairs


@settings(max_examples=60)
@given(primitive_pairs(25))
def test_walk_matches_exact_tracer(d):
    start = start_state(d, generic_start(d))
    records, count = walk(start, 200, record_all=True)
    assert count == 200
    for rec, (state, clock) in zip(records, iter_crossings(start)):
        assert rec.state == state
        assert rec.time == clock


def test_walk_reports_singular_hit():
    start = start_state(Direction(1, 1), (Fraction(1, 2), Fraction(1, 2)))
    with pytest.raises(SingularHit):
        walk(start, 10, record_all=True)


def test_clock_for_length_is_the_first_reaching_clock():
    start = start_state(Direction(3, 5))
    line = UnfoldedLine(start)
    for length_sq in (1, 2, 17, 1000, 4**9):
        k = line.clock_for_length(length_sq)
        t = line.time(k)
        assert t * t * 34 >= length_sq
        t_prev = line.time(k - 1)
        assert t_prev * t_prev * 34 < length_sq


def test_samples_land_on_first_crossing_past_each_threshold():
    start = start_state(Direction(2, 7), generic_start((2, 7)))
    line = UnfoldedLine(start)
    clocks = [line.clock_for_length(4**k) for k in range(6)]
    sampled, _ = walk(start, 400, clocks)
    every, _ = walk(start, 400, record_all=True)
    expected = []
    for c in clocks:
        first = next(r.crossing for r in every if r.time * line.clock_unit >= c)
        if first not in expected:
            expected.append(first)
    assert [r.crossing for r in sampled] == expected


def test_extent_is_running_maximum():
    start = start_state(Direction(0, 1))
    records, _ = walk(start, 50, record_all=True)
    extents = [r.extent_sq for r in records]
    assert extents == sorted(extents)
    assert extents[-1] > 0
