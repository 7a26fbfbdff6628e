import math

import numpy as np
import pytest

from egr.geometry import (
    Configuration,
    GeometryError,
    SimplexSpec,
    congruence_check,
    embed_from_distances,
    enumerate_copies,
    pairwise_sq_dists,
)
from egr.rectangles import (
    _census_classify,
    count_distance_pairs,
    path_config,
    product_config,
    regular_simplex,
)
from egr.geometry import DEFAULT_TOL


def test_regular_simplex_small():
    seg = regular_simplex(2, 1.0)
    assert np.allclose(seg.points, [[0.0], [1.0]])
    tri = regular_simplex(3, 1.0)
    assert np.allclose(tri.points[2], [0.5, math.sqrt(3.0) / 2.0])


def test_regular_simplex_seven_points():
    cfg = regular_simplex(7, 2.0)
    assert cfg.points.shape == (7, 6)
    sq = pairwise_sq_dists(cfg.points)
    off = sq[np.triu_indices(7, k=1)]
    assert off.shape == (21,)
    assert np.abs(off - 4.0).max() < 1e-11


def test_regular_simplex_rejects_small_n():
    with pytest.raises(GeometryError):
        regular_simplex(1, 1.0)
    with pytest.raises(GeometryError):
        regular_simplex(3, 0.0)


def test_path_config_golden_triangle():
    path = path_config(2, 1.5, 1.0)
    assert np.allclose(path.points[0], [0.0, 0.0])
    assert np.allclose(path.points[2], [1.5, 0.0])
    assert np.allclose(path.points[1], [0.75, math.sqrt(0.4375)], atol=1e-12)


def test_path_config_equilateral():
    path = path_config(2, 1.0, 1.0)
    sq = pairwise_sq_dists(path.points)
    off = sq[np.triu_indices(3, k=1)]
    assert np.abs(off - 1.0).max() < 1e-12


def test_path_config_four_points_concyclic():
    path = path_config(3, 2.9, 1.0)
    path.verify()
    assert path.points.shape == (4, 2)
    # Circumcenter of the first three points must serve the fourth.
    a, b, c = path.points[:3]
    ax, ay = b - a
    bx, by = c - a
    d = 2.0 * (ax * by - ay * bx)
    ux = (by * (ax * ax + ay * ay) - ay * (bx * bx + by * by)) / d
    uy = (ax * (bx * bx + by * by) - bx * (ax * ax + ay * ay)) / d
    center = a + np.array([ux, uy])
    radii = np.linalg.norm(path.points - center, axis=1)
    assert np.abs(radii - path.radius).max() < 1e-9


def test_path_config_rejects_infeasible():
    with pytest.raises(GeometryError):
        path_config(3, 3.1, 1.0)  # t below ceil(x/y)
    with pytest.raises(GeometryError):
        path_config(2, 2.0, 1.0)  # straight-line limit
    with pytest.raises(GeometryError):
        path_config(2, 1.5, -1.0)


def test_product_unit_square():
    seg = regular_simplex(2, 1.0)
    prod = product_config(seg, seg).product
    assert prod.points.shape == (4, 2)
    square = embed_from_distances(SimplexSpec.rectangle(1.0, 1.0))
    assert congruence_check(prod.points, square) is not None


def test_product_distance_law():
    left = regular_simplex(7, 1.0)
    right = path_config(2, 1.5, 1.0).as_configuration()
    prod = product_config(left, right)
    assert prod.product.points.shape == (21, 8)
    rng = np.random.default_rng(5)
    for _ in range(50):
        i, j = rng.integers(0, 7, size=2)
        k, l = rng.integers(0, 3, size=2)
        got = math.dist(prod.product.points[prod.flat_index(i, k)],
                        prod.product.points[prod.flat_index(j, l)]) ** 2
        want = (math.dist(left.points[i], left.points[j]) ** 2
                + math.dist(right.points[k], right.points[l]) ** 2)
        assert abs(got - want) < 1e-12


def test_product_with_single_point_is_copy():
    left = regular_simplex(4, 1.3)
    right = Configuration(points=np.array([[2.0]]))
    prod = product_config(left, right).product
    assert np.abs(pairwise_sq_dists(prod.points) - pairwise_sq_dists(left.points)).max() < 1e-12


def test_product_lifts_named_copies():
    left = regular_simplex(3, 1.5)
    right = path_config(2, 1.5, 1.0).as_configuration()
    prod = product_config(left, right)
    assert len(prod.product.named_copies["fibers"]) == 3
    assert all(len(f) == 3 for f in prod.product.named_copies["fibers"])
    pairs = prod.product.named_copies["right_endpoint_pair"]
    assert len(pairs) == 3
    for i, j in pairs:
        assert abs(math.dist(prod.product.points[i], prod.product.points[j]) - 1.5) < 1e-12


def test_census_m2():
    out = count_distance_pairs(2, 1.5, 1.0)
    assert out == {
        "enumerated": 70,
        "formula_q": 70,
        "fiber_pairs": 63,
        "endpoint_pairs": 7,
    }


def test_census_m3():
    out = count_distance_pairs(3, 2.5, 1.0)
    assert out["formula_q"] == 4 * math.comb(10, 2) + 10 == 190
    assert out["enumerated"] == 190


def test_census_matches_enumerate_copies():
    simplex = regular_simplex(7, 1.5)
    path = path_config(2, 1.5, 1.0).as_configuration()
    prod = product_config(simplex, path).product
    pairs = enumerate_copies(prod, SimplexSpec.pair(1.5))
    assert len(pairs) == count_distance_pairs(2, 1.5, 1.0)["formula_q"]


def test_census_rejects_bad_parameters():
    with pytest.raises(GeometryError):
        count_distance_pairs(3, 1.5, 1.0)  # m != ceil(x/y)
    with pytest.raises(GeometryError):
        count_distance_pairs(2, 1.0, 1.5)  # x <= y


def test_census_aborts_on_unattributable_pair():
    # Right factor with an interior chord at the long distance: the
    # pair (v0, v1) is same-left at distance x but not the endpoint
    # pair, so classification must fail.
    pts = np.array([[0.0, 1.5, 3.0]]).T
    with pytest.raises(GeometryError, match="not generic"):
        _census_classify(pts, 3, 2, 1.5, DEFAULT_TOL)
