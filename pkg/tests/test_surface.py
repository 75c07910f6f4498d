from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from necker.surface import (
    CHART_CORNERS,
    FAVORITE_SQUARE,
    NeckerIsometry,
    SIGNED_PERMUTATIONS,
    SquareId,
    adjacent_square,
    apply_isometry,
    chart_to_space,
    cone_angle,
    deck_coordinate,
    iter_window_squares,
    lattice_coordinates,
    level,
    project,
    squares_at_vertex,
    square_vertices,
)

W1 = (1, -1, 0)
W2 = (0, 1, -1)

bases = st.tuples(st.integers(-6, 6), st.integers(-6, 6)).map(lambda mn: (-1 + mn[0], -mn[0] + mn[1], -mn[1]))
squares = st.builds(lambda b, k: SquareId(b, (k, (k + 1) % 3)), bases, st.integers(0, 2))
sides = st.integers(0, 3)


def translated(sq, w):
    return SquareId(tuple(b + c for b, c in zip(sq.base, w)), sq.axes)


def test_favorite_square_vertices():
    assert square_vertices(FAVORITE_SQUARE) == ((-1, 0, 0), (-1, 0, 1), (0, 0, 1), (0, 0, 0))


def test_vertex_levels_cycle():
    sq = SquareId((-1, 0, 0), (0, 1))
    assert [level(v) for v in square_vertices(sq)] == [-1, 0, 1, 0]


def test_square_rejects_noncanonical_axes():
    with pytest.raises(ValueError):
        SquareId((-1, 0, 0), (1, 0))
    with pytest.raises(ValueError):
        SquareId((0, 0, 0), (0, 1))


@given(squares)
def test_vertex_levels_for_any_square(sq):
    assert [level(v) for v in square_vertices(sq)] == [-1, 0, 1, 0]


def test_adjacency_examples():
    base = (-1, 0, 0)
    k, l, m = 0, 1, 2
    sq = SquareId(base, (k, l))
    assert adjacent_square(sq, 0).square == SquareId.from_axis_set(base, k, m)
    across_side1 = adjacent_square(sq, 1).square
    assert across_side1 == SquareId.from_axis_set((0, 0, -1), m, l)


@given(squares, sides)
def test_adjacency_is_involution(sq, side):
    adj = adjacent_square(sq, side)
    back = adjacent_square(adj.square, adj.side)
    assert back.square == sq and back.side == side
    assert (adj.rotation + back.rotation) % 4 == 0


@given(squares, sides)
def test_adjacency_shares_edge_vertices(sq, side):
    adj = adjacent_square(sq, side)
    mine = square_vertices(sq)
    theirs = square_vertices(adj.square)
    assert {mine[side], mine[(side + 1) % 4]} == {theirs[adj.side], theirs[(adj.side + 1) % 4]}
    # edge parameter reverses
    assert mine[side] == theirs[(adj.side + 1) % 4]


def test_cone_angles():
    assert cone_angle((0, 0, 0)) == 6
    assert cone_angle((-1, 0, 0)) == 3
    assert cone_angle((1, 0, 0)) == 3
    with pytest.raises(ValueError):
        cone_angle((1, 1, 1))


@given(st.tuples(st.integers(-5, 5), st.integers(-5, 5), st.integers(-1, 1)))
def test_cone_angle_by_walking_around_vertex(data):
    # walk around the vertex through adjacency, adding one quarter turn per square
    m, n, lev = data
    p = (m + (1 if lev >= 0 else 0) + (1 if lev == 1 else 0), -m + n, -n)
    p = (p[0] + (lev - level(p)), p[1], p[2])
    assert level(p) == lev
    sq, corner = squares_at_vertex(p)[0]
    start = (sq, corner)
    count = 0
    while True:
        adj = adjacent_square(sq, corner)  # side `corner` leaves from this vertex
        sq, corner = adj.square, (adj.side + 1) % 4
        count += 1
        if (sq, corner) == start:
            break
        assert count < 20
    assert count == cone_angle(p)


def test_project_examples():
    assert project((-1, 0, 0)) == (Fraction(-2, 3), Fraction(1, 3), Fraction(1, 3))
    assert project((-1, 0, 1)) == (-1, 0, 1)
    assert project((1, 1, 1)) == (0, 0, 0)


@given(st.tuples(*[st.fractions(max_denominator=20)] * 3))
def test_project_idempotent(x):
    assert project(project(x)) == project(x)
    assert level(project(x)) == 0


def test_projection_injective_on_window_vertices():
    verts = {v for sq in iter_window_squares(3) for v in square_vertices(sq)}
    assert len({project(v) for v in verts}) == len(verts)


def test_rhombille_vertex_degrees():
    # count projected rhombi around every interior projected vertex
    incidence = {}
    for sq in iter_window_squares(4):
        for v in square_vertices(sq):
            incidence.setdefault(project(v), []).append(v)
    for sq in iter_window_squares(1):
        for v in square_vertices(sq):
            expected = 6 if level(v) == 0 else 3
            assert len(incidence[project(v)]) == expected


def test_rhombille_rhombi_interiors_disjoint():
    from necker.geometry import signed_area, triangles_overlap, triangulate

    polys = [[lattice_coordinates(v) for v in square_vertices(sq)] for sq in iter_window_squares(2)]
    # every projected square is a rhombus of the same area, positively oriented
    areas = {signed_area(p) for p in polys}
    assert len(areas) == 1 and next(iter(areas)) > 0
    tris = [triangulate(p) for p in polys]
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            assert not any(triangles_overlap(a, b) for a in tris[i] for b in tris[j])


def test_apply_isometry_examples():
    assert apply_isometry(NeckerIsometry.identity(), FAVORITE_SQUARE) == FAVORITE_SQUARE
    neg = NeckerIsometry(((-1, 0, 0), (0, -1, 0), (0, 0, -1)), (0, 0, 0))
    image = apply_isometry(neg, FAVORITE_SQUARE)
    assert level(image.base) == -1
    assert set(square_vertices(image)) == {tuple(-c for c in v) for v in square_vertices(FAVORITE_SQUARE)}
    shift = NeckerIsometry.translation_by(W1)
    assert apply_isometry(shift, FAVORITE_SQUARE).base == (0, -1, 0)


isometries = st.builds(
    lambda mat, a, b: NeckerIsometry(mat, tuple(a * x + b * y for x, y in zip(W1, W2))),
    st.sampled_from(SIGNED_PERMUTATIONS), st.integers(-3, 3), st.integers(-3, 3),
)


@given(isometries, isometries, squares)
def test_isometry_action_composes(g, h, sq):
    assert apply_isometry(g @ h, sq) == apply_isometry(g, apply_isometry(h, sq))


@given(isometries, squares, sides)
def test_isometry_commutes_with_adjacency(g, sq, side):
    img = apply_isometry(g, sq)
    verts = square_vertices(sq)
    edge = {g(verts[side]), g(verts[(side + 1) % 4])}
    img_verts = square_vertices(img)
    img_side = next(j for j in range(4) if {img_verts[j], img_verts[(j + 1) % 4]} == edge)
    assert apply_isometry(g, adjacent_square(sq, side).square) == adjacent_square(img, img_side).square


def test_deck_coordinates():
    assert deck_coordinate(FAVORITE_SQUARE) == ((0, 0), 2)
    assert deck_coordinate(translated(FAVORITE_SQUARE, W1)) == ((1, 0), 2)
    w = tuple(2 * a + 3 * b for a, b in zip(W1, W2))
    assert deck_coordinate(translated(FAVORITE_SQUARE, w)) == ((2, 3), 2)


def test_charts_positively_oriented():
    # the projected chart axes of every face have the same orientation
    for k in range(3):
        sq = SquareId((-1, 0, 0), (k, (k + 1) % 3))
        o = lattice_coordinates(chart_to_space(sq, CHART_CORNERS[0]))
        e1 = lattice_coordinates(chart_to_space(sq, CHART_CORNERS[1]))
        e2 = lattice_coordinates(chart_to_space(sq, CHART_CORNERS[3]))
        det = (e1[0] - o[0]) * (e2[1] - o[1]) - (e1[1] - o[1]) * (e2[0] - o[0])
        assert det > 0


def test_isometry_validation():
    with pytest.raises(ValueError):
        NeckerIsometry(((0, 1, 0), (1, 0, 0), (0, 0, -1)), (0, 0, 0))
    with pytest.raises(ValueError):
        NeckerIsometry.translation_by((1, 0, 0))


def test_isometry_group_laws():
    g = NeckerIsometry(SIGNED_PERMUTATIONS[3], (1, -1, 0))
    assert g @ g.inverse() == NeckerIsometry.identity()
    assert (g ** 3) == g @ g @ g
    assert g ** -1 == g.inverse()
