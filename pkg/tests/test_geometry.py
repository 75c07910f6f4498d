from fractions import Fraction

from hypothesis import given, strategies as st

from necker.geometry import (
    clip_box,
    drop_collinear,
    is_simple_polygon,
    point_in_polygon,
    segments_intersect,
    signed_area,
    triangles_overlap,
    triangulate,
)

F = Fraction
SQUARE = [(0, 0), (2, 0), (2, 2), (0, 2)]


def test_segments():
    assert segments_intersect((0, 0), (2, 2), (0, 2), (2, 0))
    assert segments_intersect((0, 0), (1, 0), (1, 0), (2, 5))  # shared endpoint counts
    assert not segments_intersect((0, 0), (1, 0), (0, 1), (1, 1))
    assert not segments_intersect((0, 0), (1, 0), (2, 0), (3, 0))


def test_signed_area_and_orientation():
    assert signed_area(SQUARE) == 4
    assert signed_area(SQUARE[::-1]) == -4


def test_point_in_polygon():
    assert point_in_polygon((1, 1), SQUARE) == 1
    assert point_in_polygon((2, 1), SQUARE) == 0
    assert point_in_polygon((3, 1), SQUARE) == -1


def test_clip_box():
    tri = [(F(-1), F(-1)), (F(3), F(-1)), (F(-1), F(3))]
    clipped = clip_box(tri, (0, 0), (1, 1))
    assert abs(signed_area(clipped)) == 1


def test_simple_polygon():
    assert is_simple_polygon(SQUARE)
    assert not is_simple_polygon([(0, 0), (2, 2), (2, 0), (0, 2)])


def test_drop_collinear():
    assert drop_collinear([(0, 0), (1, 0), (2, 0), (2, 2), (0, 2)]) == [(0, 0), (2, 0), (2, 2), (0, 2)]


L_SHAPE = [(0, 0), (3, 0), (3, 1), (1, 1), (1, 3), (0, 3)]


def test_triangulate_concave():
    tris = triangulate(L_SHAPE)
    assert len(tris) == 4
    assert sum(signed_area(t) for t in tris) == signed_area(L_SHAPE)
    for i in range(len(tris)):
        for j in range(i + 1, len(tris)):
            assert not triangles_overlap(tris[i], tris[j])


@given(st.integers(-4, 4), st.integers(-4, 4))
def test_translated_triangles_overlap_iff_shift_small(dx, dy):
    tri = [(0, 0), (2, 0), (0, 2)]
    moved = [(x + dx, y + dy) for x, y in tri]
    # overlap iff the shifted triangle's interior meets the original's
    expected = (dx, dy) == (0, 0) or (abs(dx) < 2 and abs(dy) < 2 and dx + dy < 2 and dx + dy > -2)
    assert triangles_overlap(tri, moved) == expected
