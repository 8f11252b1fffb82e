import math

import numpy as np
import numpy.testing as npt
import pytest
from scipy.special import ellipe

from src.convex_geometry import (
    DirectionGrid,
    Disk,
    Ellipse,
    MinkowskiCombo,
    Rotated,
    Scaled,
    SupportFunction,
    Translated,
    area,
    ball_support,
    hausdorff_distance,
    homothety_defect,
    inradius_outradius,
    interpolate_support,
    mean_width,
    min_width,
    minkowski_combine,
    normalize,
    parse_body_spec,
    project_to_convex,
    rotate_samples,
    sample_support,
    steiner_point,
    symmetry_order,
    urysohn_gap,
    width_function,
)
from src.errors import DegenerateBodyError, GridMismatchError, InvalidBodyError


@pytest.mark.parametrize("M", [15, 17, 8])
def test_grid_rejects_bad_sizes(M):
    with pytest.raises(ValueError):
        DirectionGrid(M)


def test_disk_calculus(grid):
    h = sample_support(Disk(1.5), grid)
    npt.assert_allclose(mean_width(h), 3.0, rtol=1e-14)
    npt.assert_allclose(area(h), math.pi * 1.5**2, rtol=1e-14)
    npt.assert_allclose(steiner_point(h), [0.0, 0.0], atol=1e-14)
    npt.assert_allclose(width_function(h), 3.0, rtol=1e-14)
    npt.assert_allclose(urysohn_gap(h), 0.0, atol=1e-12)
    assert h.is_convex()


def test_ellipse_mean_width_matches_perimeter():
    h = sample_support(Ellipse(2.0, 1.0), DirectionGrid(64))
    perimeter = 4.0 * 2.0 * ellipe(0.75)
    npt.assert_allclose(mean_width(h), perimeter / math.pi, rtol=1e-9)


def test_ellipse_area_and_urysohn():
    h = sample_support(Ellipse(2.0, 1.0), DirectionGrid(256))
    npt.assert_allclose(area(h), 2.0 * math.pi, rtol=1e-3)
    assert urysohn_gap(h) > 0.1


def test_steiner_point_follows_translation(grid):
    h = sample_support(Translated((0.3, -0.2), Disk(1.0)), grid)
    npt.assert_allclose(steiner_point(h), [0.3, -0.2], atol=1e-14)
    centred, s = normalize(h)
    npt.assert_allclose(s, [0.3, -0.2], atol=1e-14)
    npt.assert_allclose(centred.values, 1.0, atol=1e-14)


def test_minkowski_combine_is_pointwise(grid, disk, ellipse):
    h0 = sample_support(disk, grid)
    h1 = sample_support(ellipse, grid)
    combo = minkowski_combine([0.25, 0.75], [h0, h1])
    npt.assert_allclose(combo.values, 0.25 * h0.values + 0.75 * h1.values)
    spec = MinkowskiCombo(((0.25, disk), (0.75, ellipse)))
    npt.assert_allclose(sample_support(spec, grid).values, combo.values, rtol=1e-14)


def test_minkowski_combine_validates_weights(grid, disk):
    h = sample_support(disk, grid)
    with pytest.raises(InvalidBodyError):
        minkowski_combine([0.5, 0.6], [h, h])
    with pytest.raises(InvalidBodyError):
        minkowski_combine([1.5, -0.5], [h, h])


def test_grid_mismatch(disk):
    h32 = sample_support(disk, DirectionGrid(32))
    h64 = sample_support(disk, DirectionGrid(64))
    with pytest.raises(GridMismatchError):
        minkowski_combine([0.5, 0.5], [h32, h64])
    with pytest.raises(GridMismatchError):
        SupportFunction(DirectionGrid(32), np.ones(31))


def test_min_width_of_ellipse(grid, ellipse):
    npt.assert_allclose(min_width(sample_support(ellipse, grid)), 2.0, rtol=1e-14)


def test_inradius_outradius(grid, ellipse):
    radii = inradius_outradius(sample_support(ellipse, grid))
    npt.assert_allclose(radii.r_in, 1.0, rtol=1e-7)
    npt.assert_allclose(radii.R_out, 2.0, rtol=1e-7)

    disk_radii = inradius_outradius(sample_support(Translated((0.5, 0.5), Disk(0.7)), grid))
    npt.assert_allclose(disk_radii.r_in, 0.7, rtol=1e-7)
    npt.assert_allclose(disk_radii.c_in, [0.5, 0.5], atol=1e-7)


def test_segment_is_degenerate(grid):
    h = SupportFunction(grid, np.round(np.abs(np.cos(grid.theta)), 12))
    with pytest.raises(DegenerateBodyError):
        inradius_outradius(h)


def test_projection_keeps_convex_bodies(grid, ellipse):
    h = sample_support(ellipse, grid)
    npt.assert_array_equal(project_to_convex(h).values, h.values)


def test_projection_repairs_nonconvex_samples(grid):
    raw = 1.0 + 0.3 * np.cos(3 * grid.theta)
    assert not SupportFunction(grid, raw).is_convex()
    projected = project_to_convex(raw, grid)
    assert projected.is_convex()
    npt.assert_array_equal(project_to_convex(projected).values, projected.values)


def test_projection_needs_a_grid():
    with pytest.raises(ValueError):
        project_to_convex(np.ones(32))


def test_hausdorff_distance_of_translates(grid):
    h0 = sample_support(Disk(1.0), grid)
    h1 = sample_support(Translated((0.25, 0.0), Disk(1.0)), grid)
    npt.assert_allclose(hausdorff_distance(h0, h1), 0.25, rtol=1e-14)


def test_homothety_defect(grid, disk, ellipse):
    h = sample_support(ellipse, grid)
    copy = sample_support(Translated((1.0, -2.0), Scaled(3.0, ellipse)), grid)
    assert homothety_defect(h, copy) < 1e-12
    assert homothety_defect(h, sample_support(disk, grid)) > 0.05


def test_symmetry_order(grid, disk, ellipse, rounded_square):
    assert symmetry_order(sample_support(ellipse, grid)) == 2
    assert symmetry_order(sample_support(Translated((0.3, 0.1), ellipse), grid)) == 2
    assert symmetry_order(sample_support(rounded_square, grid)) == 4
    assert symmetry_order(sample_support(disk, grid)) == grid.M


def test_rotation_helpers(grid, ellipse):
    h = sample_support(ellipse, grid)
    quarter = sample_support(Rotated(math.pi / 2, ellipse), grid)
    npt.assert_allclose(rotate_samples(h, grid.M // 4).values, quarter.values, atol=1e-14)
    npt.assert_allclose(interpolate_support(h, grid.theta), h.values)


def test_ball_support(grid):
    ball = ball_support(grid, 2.0, (1.0, 0.0))
    npt.assert_allclose(ball.values, 2.0 + np.cos(grid.theta))


def test_parse_body_spec_roundtrip(grid, rounded_square):
    spec = MinkowskiCombo(((0.5, Rotated(0.3, rounded_square)), (0.5, Translated((1.0, 2.0), Disk(0.5)))))
    parsed = parse_body_spec(spec.to_dict())
    npt.assert_allclose(sample_support(parsed, grid).values, sample_support(spec, grid).values)


@pytest.mark.parametrize("doc", [
    {"disk": {"R": -1}},
    {"ellipse": {"a": 1}},
    {"hexagon": {}},
    {"regular_ngon": {"n": 2, "circumradius": 1}},
    {"disk": {"R": 1}, "ellipse": {"a": 1, "b": 1}},
])
def test_parse_body_spec_rejects_bad_input(doc):
    with pytest.raises(InvalidBodyError):
        parse_body_spec(doc)
