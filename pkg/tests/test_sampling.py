"""Interior grids, random points, rays, and distance bookkeeping."""

from fractions import Fraction

import numpy as np
import pytest

from torickit import (
    catalog,
    geometric_ts,
    interior_distance,
    interior_grid,
    interior_rays,
    random_interior_points,
    ray_points,
)
from torickit import sampling

F = Fraction


def test_interior_distance_matches_direct_formula():
    p = catalog("simplex", 2)
    x = np.array([0.2, 0.3])
    # distances to x=0, y=0 and the hypotenuse (1-x-y)/sqrt(2)
    want = min(0.2, 0.3, 0.5 / np.sqrt(2))
    assert interior_distance(p, x) == pytest.approx(want, rel=1e-12)
    assert interior_distance(p, np.array([0.0, 0.3])) == 0.0


def test_grid_stays_strictly_inside(catalog_polytope):
    pts = interior_grid(catalog_polytope, 6)
    assert len(pts) > 0
    lam = catalog_polytope.lambdas(pts)
    assert np.all(lam > 0)


def test_grid_respects_margin():
    p = catalog("cube", 2)
    pts = interior_grid(p, 10, margin=0.2)
    d = np.array([interior_distance(p, x) for x in pts])
    assert d.min() >= 0.2 - 1e-12


def test_grid_resolution_floor():
    p = catalog("cube", 2)
    with pytest.raises(ValueError):
        interior_grid(p, 2)
    with pytest.raises(ValueError):
        interior_grid(p, 10, margin=10.0)  # margin swallows the polytope


def test_random_points_deterministic_and_interior(catalog_polytope):
    a = random_interior_points(catalog_polytope, 25, rng=0)
    b = random_interior_points(catalog_polytope, 25, rng=0)
    c = random_interior_points(catalog_polytope, 25, rng=1)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert np.all(catalog_polytope.lambdas(a) > 0)


def test_geometric_ladder():
    ts = geometric_ts(1e-2, 15)
    assert len(ts) == 15
    assert ts[0] == pytest.approx(1e-2)
    assert np.allclose(ts[:-1] / ts[1:], 2.0)
    with pytest.raises(ValueError):
        geometric_ts(1e-2, 40)  # ladder would underflow useful range


def test_interior_rays_point_inward(catalog_polytope):
    p = catalog_polytope
    for v in p.vertices:
        rays = interior_rays(v, 3)
        assert len(rays) == 3
        for d in rays:
            for t in (1e-3, 1e-6):
                assert np.all(p.lambdas(v.as_float() + t * d) > 0)


def test_ray_points_shape():
    p = catalog("cube", 2)
    v = p.vertices[0]
    ray = interior_rays(v, 1)[0]
    ts = geometric_ts(1e-2, 5)
    pts = ray_points(v, ray, ts)
    assert pts.shape == (5, 2)
    assert np.allclose(pts, v.as_float() + ts[:, None] * ray)


def test_default_margin_scales_with_diameter():
    small = catalog("cube", 2)
    big = catalog("cube", 2, 100)
    assert sampling.default_margin(big) == pytest.approx(
        100 * sampling.default_margin(small)
    )
