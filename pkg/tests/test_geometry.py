import itertools
import math

import numpy as np
import pytest

from egr.geometry import (
    Configuration,
    DEFAULT_TOL,
    GeometryError,
    NonRealizableError,
    SimplexSpec,
    ToleranceConfig,
    cayley_menger_volume,
    congruence_check,
    embed_from_distances,
    enumerate_copies,
    is_nondegenerate,
    is_realizable,
    pairwise_sq_dists,
    squared_distance,
)


def brute_force_congruence(A, B, tol=DEFAULT_TOL):
    """Oracle: try every bijection explicitly."""
    A = np.asarray(A, float)
    B = np.asarray(B, float)
    n = len(A)
    da = pairwise_sq_dists(A)
    db = pairwise_sq_dists(B)
    for perm in itertools.permutations(range(n)):
        ok = True
        for i in range(n):
            for j in range(i):
                if not tol.sq_close(float(da[i, j]), float(db[perm[i], perm[j]])):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return perm
    return None


def random_rigid_motion(rng, dim):
    m = rng.standard_normal((dim, dim))
    q, _ = np.linalg.qr(m)
    t = rng.standard_normal(dim)
    return q, t


def test_squared_distance_basic():
    assert squared_distance([0.0, 0.0], [3.0, 4.0]) == 25.0
    with pytest.raises(GeometryError):
        squared_distance([0.0, 0.0], [1.0, 2.0, 3.0])


def test_tolerance_config_validation():
    with pytest.raises(GeometryError):
        ToleranceConfig(rel_tol=0.0)
    with pytest.raises(GeometryError):
        ToleranceConfig(abs_tol=1.0)
    tol = ToleranceConfig()
    assert tol.sq_close(1.0, 1.0 + 5e-10)
    assert not tol.sq_close(1.0, 1.0 + 5e-9)


def test_configuration_rejects_coincident_points():
    with pytest.raises(GeometryError):
        Configuration(points=np.array([[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]))
    cfg = Configuration(
        points=np.array([[0.0, 0.0], [0.0, 0.0]]), allow_coincident=True
    )
    assert len(cfg) == 2


def test_configuration_validates_copies_and_labels():
    pts = np.array([[0.0, 0.0], [1.0, 0.0]])
    with pytest.raises(GeometryError):
        Configuration(points=pts, labels=["a"])
    with pytest.raises(GeometryError):
        Configuration(points=pts, named_copies={"bad": [(0, 5)]})
    cfg = Configuration(points=pts, labels=["a", "b"], named_copies={"pair": [(0, 1)]})
    assert cfg.named_copies["pair"] == [(0, 1)]


def test_configuration_json_round_trip(tmp_path):
    cfg = Configuration(
        points=np.array([[0.0, 0.1234567890123456], [1.0, 2.0]]),
        labels=["p", "q"],
        named_copies={"pair": [(0, 1)]},
    )
    path = tmp_path / "cfg.json"
    cfg.save(str(path))
    back = Configuration.load(str(path))
    assert np.array_equal(back.points, cfg.points)
    assert back.labels == cfg.labels
    assert back.named_copies == cfg.named_copies


def test_simplex_spec_validation():
    with pytest.raises(GeometryError):
        SimplexSpec(np.array([[0.0, 1.0], [2.0, 0.0]]))  # asymmetric
    with pytest.raises(GeometryError):
        SimplexSpec(np.array([[0.0, 0.0], [0.0, 0.0]]))  # zero off-diagonal
    with pytest.raises(NonRealizableError):
        SimplexSpec.triangle(1.0, 1.0, 5.0)  # violates triangle inequality
    # Degenerate but realizable is allowed.
    spec = SimplexSpec.triangle(1.0, 1.0, 2.0)
    assert spec.k == 3


def test_congruence_unit_square_vs_rotated():
    square = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    rng = np.random.default_rng(7)
    q, t = random_rigid_motion(rng, 2)
    moved = square @ q.T + t
    reflected = moved @ np.diag([1.0, -1.0])
    for other in (moved, reflected):
        perm = congruence_check(square, other)
        assert perm is not None
        assert brute_force_congruence(square, other) is not None


def test_congruence_rejects_rhombus():
    square = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    # Same side lengths, different diagonals.
    h = math.sqrt(3.0) / 2.0
    rhombus = np.array([[0.0, 0.0], [1.0, 0.0], [1.5, h], [0.5, h]])
    assert congruence_check(square, rhombus) is None
    assert brute_force_congruence(square, rhombus) is None


def test_congruence_matches_brute_force_on_random_sets():
    rng = np.random.default_rng(12345)
    for trial in range(60):
        n = int(rng.integers(2, 7))
        dim = int(rng.integers(1, 4))
        a = rng.standard_normal((n, dim))
        if trial % 2 == 0:
            q, t = random_rigid_motion(rng, dim)
            b = a @ q.T + t
            b = b[rng.permutation(n)]
        else:
            b = rng.standard_normal((n, dim))
        fast = congruence_check(a, b)
        slow = brute_force_congruence(a, b)
        assert (fast is None) == (slow is None)
        if fast is not None:
            da = pairwise_sq_dists(a)
            db = pairwise_sq_dists(b)
            for i in range(n):
                for j in range(n):
                    assert DEFAULT_TOL.sq_close(float(da[i, j]), float(db[fast[i], fast[j]]))


def test_congruence_size_mismatch_and_cap():
    with pytest.raises(GeometryError):
        congruence_check(np.zeros((2, 2)), np.zeros((3, 2)))
    with pytest.raises(GeometryError):
        congruence_check(np.zeros((13, 2)), np.zeros((13, 2)))


def test_enumerate_copies_grid_squares():
    grid = np.array([[x, y] for x in range(3) for y in range(3)], dtype=float)
    cfg = Configuration(points=grid)
    spec = SimplexSpec.from_points([[0, 0], [1, 0], [0, 1], [1, 1]])
    copies = enumerate_copies(cfg, spec)
    # Oracle: brute force over all 4-subsets.
    expected = []
    for sub in itertools.combinations(range(9), 4):
        if congruence_check(grid[list(sub)], np.array([[0, 0], [1, 0], [0, 1], [1, 1]], float)):
            expected.append(tuple(sub))
    assert copies == sorted(expected)
    assert len(copies) == 4


def test_enumerate_copies_complete_on_planted_instances():
    rng = np.random.default_rng(99)
    for _ in range(20):
        k = int(rng.integers(2, 5))
        dim = int(rng.integers(2, 4))
        base = rng.standard_normal((k, dim))
        spec = SimplexSpec.from_points(base)
        planted = []
        cloud = 8.0 * rng.standard_normal((int(rng.integers(5, 12)), dim))
        pts = [row for row in cloud]
        n_plants = int(rng.integers(1, 4))
        for p in range(n_plants):
            q, t = random_rigid_motion(rng, dim)
            copy = base @ q.T + t + 40.0 * (p + 1)
            planted.append(tuple(range(len(pts), len(pts) + k)))
            pts.extend(copy)
        cfg = Configuration(points=np.array(pts))
        copies = enumerate_copies(cfg, spec)
        emb = embed_from_distances(spec)
        for tup in copies:
            assert congruence_check(cfg.points[list(tup)], emb) is not None
        for tup in planted:
            assert tuple(sorted(tup)) in copies


def test_enumerate_copies_caps():
    cfg = Configuration(points=np.random.default_rng(0).standard_normal((201, 2)))
    with pytest.raises(GeometryError):
        enumerate_copies(cfg, SimplexSpec.pair(1.0))


def test_cayley_menger_known_volumes():
    area = cayley_menger_volume(SimplexSpec.regular(3, 1.0))
    assert abs(area - math.sqrt(3.0) / 4.0) < 1e-14
    vol = cayley_menger_volume(SimplexSpec.regular(4, 1.0))
    assert abs(vol - math.sqrt(2.0) / 12.0) < 1e-14
    assert cayley_menger_volume(SimplexSpec.triangle(1.0, 1.0, 2.0)) == 0.0


def test_cayley_menger_matches_heron_on_random_triangles():
    rng = np.random.default_rng(2024)
    count = 0
    while count < 1000:
        a, b, c = sorted(rng.uniform(0.2, 5.0, size=3))
        if a + b <= c + 1e-6:
            continue
        count += 1
        delta = 2 * (a * b) ** 2 + 2 * (b * c) ** 2 + 2 * (c * a) ** 2 - a**4 - b**4 - c**4
        heron = math.sqrt(max(delta, 0.0)) / 4.0
        got = cayley_menger_volume(SimplexSpec.triangle(a, b, c))
        assert abs(got - heron) <= 1e-12 * max(heron, 1.0)


def test_embed_triangle_2_2_3():
    spec = SimplexSpec.triangle(2.0, 2.0, 3.0)
    pts = embed_from_distances(spec)
    # Base of length 3 on the first axis, apex height = 2*Area/3.
    assert pts[0][0] == 0.0 and pts[0][1] == 0.0
    assert abs(pts[1][0] - 3.0) < 1e-12 and pts[1][1] == 0.0
    assert abs(pts[2][1] - math.sqrt(63.0) / 6.0) < 1e-12


def test_embed_round_trip_random_specs():
    rng = np.random.default_rng(5150)
    for _ in range(50):
        k = int(rng.integers(2, 8))
        dim = int(rng.integers(1, 5))
        base = rng.standard_normal((k, dim)) * rng.uniform(0.5, 4.0)
        spec = SimplexSpec.from_points(base)
        pts = embed_from_distances(spec)
        got = pairwise_sq_dists(pts)
        for i in range(k):
            for j in range(i):
                assert DEFAULT_TOL.sq_close(float(got[i, j]), float(spec.sq_dist[i, j]))
        # Triangular frame: point i has zeros beyond axis i-1.
        for i in range(k):
            assert np.all(pts[i, max(i, 1):] == 0.0)


def test_embed_rejects_unrealizable_quad():
    # Four points pairwise at distance 1 except one pair far apart.
    sq = np.full((4, 4), 1.0)
    np.fill_diagonal(sq, 0.0)
    sq[2, 3] = sq[3, 2] = 16.0
    assert not is_realizable(sq)
    with pytest.raises(NonRealizableError):
        SimplexSpec(sq)


def test_realizability_predicates():
    reg = SimplexSpec.regular(4, 1.0)
    assert is_realizable(reg.sq_dist)
    assert is_nondegenerate(reg.sq_dist)
    flat = SimplexSpec.triangle(1.0, 1.0, 2.0)
    assert is_realizable(flat.sq_dist)
    assert not is_nondegenerate(flat.sq_dist)
