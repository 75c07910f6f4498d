import re

import pytest

from necker.flow import Direction, trace_direction
from necker.render import (
    Scene,
    add_rhombille,
    add_trace,
    frame_coordinates,
    render_scene,
    scene_with_background,
)
from necker.surface import iter_window_squares
from necker.tiling import generate_tiling


def test_frame_is_orthonormal_on_the_plane():
    for p, q in [((1, -1, 0), (0, 1, -1)), ((2, -1, -1), (1, 1, -2))]:
        a, b = frame_coordinates(p), frame_coordinates(q)
        dot3 = sum(x * y for x, y in zip(p, q))
        assert a[0] * b[0] + a[1] * b[1] == pytest.approx(dot3, abs=1e-12)
    # the frame ignores the (1,1,1) component
    assert frame_coordinates((1, 1, 1)) == pytest.approx((0.0, 0.0), abs=1e-15)


def test_background_only():
    svg = render_scene(add_rhombille(Scene(), 5))
    assert svg.count("<polygon") == len(list(iter_window_squares(5)))
    assert "<polyline" not in svg


def test_fixed_precision_and_determinism():
    scene = scene_with_background(2, [trace_direction(Direction(1, 1))])
    first = render_scene(scene)
    second = render_scene(scene_with_background(2, [trace_direction(Direction(1, 1))]))
    assert first == second
    coords = " ".join(re.findall(r'(?:points|viewBox)="([^"]*)"', first))
    numbers = re.findall(r"-?\d+\.\d+", coords)
    assert numbers and all(len(n.split(".")[1]) == 9 for n in numbers)
    assert "-0.000000000" not in first


def test_slope_one_trace_closes():
    scene = add_trace(Scene(), trace_direction(Direction(1, 1)))
    pts = scene.layers[0].shapes[0].points
    assert pts[0] == pts[-1]


def test_tiling_layer():
    tiling = generate_tiling(Direction(3, 5), "out", 2)
    svg = render_scene(scene_with_background(2, [tiling]))
    assert svg.count('class="tiling"') == 1
    assert svg.index('class="lattice"') < svg.index('class="tiling"')


def test_empty_scene_rejected():
    with pytest.raises(ValueError):
        render_scene(Scene())
    with pytest.raises(TypeError):
        scene_with_background(1, ["not a figure"])
