import numpy as np
import pytest

from egr.geometry import Configuration, SimplexSpec, enumerate_copies
from egr.rectangles import path_config, product_config, regular_simplex
from egr.solver import (
    BudgetExceeded,
    COUNTEREXAMPLE,
    FORCED,
    ColoringProblem,
    exhaustive_oracle,
    five_point_logic_scan,
    solve_gr,
    verify_coloring,
)


def pair_problem(r):
    cfg = regular_simplex(2, 1.0)
    return ColoringProblem(cfg=cfg, mono_targets=[(0, 1)], rainbow_targets=[], r=r)


def square_problem(r=2):
    seg = regular_simplex(2, 1.0)
    cfg = product_config(seg, seg).product
    mono = enumerate_copies(cfg, SimplexSpec.pair(1.0))
    rainbow = enumerate_copies(cfg, SimplexSpec.rectangle(1.0, 1.0))
    assert len(mono) == 4 and len(rainbow) == 1
    return ColoringProblem(cfg=cfg, mono_targets=mono, rainbow_targets=rainbow, r=r)


def long_pair_census_problem(r):
    """Distance-1.5 clique pairs plus 1.5 x 1.0 rectangle quadruples."""
    simplex = regular_simplex(7, 1.5)
    path = path_config(2, 1.5, 1.0).as_configuration()
    cfg = product_config(simplex, path).product
    mono = enumerate_copies(cfg, SimplexSpec.pair(1.5))
    rainbow = enumerate_copies(cfg, SimplexSpec.rectangle(1.5, 1.0))
    assert len(mono) == 70
    assert len(rainbow) == 42
    return ColoringProblem(cfg=cfg, mono_targets=mono, rainbow_targets=rainbow, r=r)


def test_single_pair_one_color_forced():
    out = solve_gr(pair_problem(1))
    assert out.verdict == FORCED
    assert out.witness is None
    assert exhaustive_oracle(pair_problem(1)).verdict == FORCED


def test_single_pair_two_colors_counterexample():
    out = solve_gr(pair_problem(2))
    assert out.verdict == COUNTEREXAMPLE
    assert verify_coloring(pair_problem(2), out.witness)["clean"]


def test_unit_square_two_colors():
    p = square_problem()
    out = solve_gr(p)
    assert out.verdict == COUNTEREXAMPLE
    report = verify_coloring(p, out.witness)
    assert report["clean"]
    assert exhaustive_oracle(p).verdict == COUNTEREXAMPLE


def test_unit_square_needs_rainbow_rule():
    # Without the rainbow quadruple, 4 colors trivially avoid the sides;
    # with it and r=1 the side pairs force immediately.
    p = square_problem(r=1)
    assert solve_gr(p).verdict == FORCED


def test_clique_bound_forces_r4():
    p = long_pair_census_problem(4)
    out = solve_gr(p)
    assert out.verdict == FORCED
    assert out.witness is None


def test_long_pair_census_forced_r7():
    p = long_pair_census_problem(7)
    out = solve_gr(p)
    assert out.verdict == FORCED
    assert out.witness is None


def test_hand_built_column_coloring_rejected():
    p = long_pair_census_problem(7)
    # Color each 7-point fiber with all 7 colors, identically across
    # the three fibers; the end-to-end pairs then collide.
    coloring = [0] * 21
    for i in range(7):
        for j in range(3):
            coloring[i * 3 + j] = i
    report = verify_coloring(p, coloring)
    assert not report["clean"]
    assert report["mono_violations"]


def test_budget_exceeded_is_an_error():
    p = long_pair_census_problem(7)
    with pytest.raises(BudgetExceeded):
        solve_gr(p, budget=0.0)


def random_problem(rng):
    n = int(rng.integers(4, 9))
    r = int(rng.integers(2, 4))
    pts = rng.uniform(0.0, 1.0, size=(n, 2))
    cfg = Configuration(points=pts, allow_coincident=True)
    mono = []
    rainbow = []
    for _ in range(int(rng.integers(1, 6))):
        k = int(rng.integers(2, 4))
        mono.append(tuple(rng.choice(n, size=k, replace=False)))
    for _ in range(int(rng.integers(0, 4))):
        k = int(rng.integers(2, min(n, 4) + 1))
        rainbow.append(tuple(rng.choice(n, size=k, replace=False)))
    return ColoringProblem(cfg=cfg, mono_targets=mono, rainbow_targets=rainbow, r=r)


def test_solver_matches_oracle_on_random_instances():
    rng = np.random.default_rng(424242)
    for _ in range(50):
        p = random_problem(rng)
        got = solve_gr(p)
        want = exhaustive_oracle(p)
        assert got.verdict == want.verdict
        if got.verdict == COUNTEREXAMPLE:
            assert verify_coloring(p, got.witness)["clean"]
            assert verify_coloring(p, want.witness)["clean"]


def test_forced_verdict_stable_under_point_permutation():
    rng = np.random.default_rng(7)
    base = square_problem()
    for _ in range(5):
        perm = rng.permutation(4)
        inv = np.argsort(perm)
        cfg = Configuration(points=base.cfg.points[perm])
        remap = lambda t: tuple(int(inv[i]) for i in t)
        p = ColoringProblem(
            cfg=cfg,
            mono_targets=[remap(t) for t in base.mono_targets],
            rainbow_targets=[remap(t) for t in base.rainbow_targets],
            r=base.r,
        )
        assert solve_gr(p).verdict == solve_gr(base).verdict


def test_verify_coloring_reports():
    p = square_problem()
    report = verify_coloring(p, [0, 0, 0, 0])
    assert len(report["mono_violations"]) == 4
    assert not report["rainbow_violations"]
    with pytest.raises(ValueError):
        verify_coloring(p, [0, 0, 0])
    with pytest.raises(ValueError):
        verify_coloring(p, [0, 0, 0, 5])


def test_problem_validation():
    cfg = regular_simplex(3, 1.0)
    with pytest.raises(ValueError):
        ColoringProblem(cfg=cfg, mono_targets=[(0,)], rainbow_targets=[], r=2)
    with pytest.raises(ValueError):
        ColoringProblem(cfg=cfg, mono_targets=[(0, 0)], rainbow_targets=[], r=2)
    with pytest.raises(ValueError):
        ColoringProblem(cfg=cfg, mono_targets=[(0, 3)], rainbow_targets=[], r=2)
    with pytest.raises(ValueError):
        ColoringProblem(cfg=cfg, mono_targets=[], rainbow_targets=[], r=0)


def test_problem_json_round_trip():
    p = square_problem()
    payload = p.to_json_dict()
    back = ColoringProblem.from_json_dict(payload)
    assert back.mono_targets == p.mono_targets
    assert back.rainbow_targets == p.rainbow_targets
    assert back.r == p.r
    assert np.array_equal(back.cfg.points, p.cfg.points)


def test_oracle_cap():
    cfg = Configuration(points=np.zeros((11, 1)), allow_coincident=True)
    p = ColoringProblem(cfg=cfg, mono_targets=[(0, 1)], rainbow_targets=[], r=5)
    with pytest.raises(ValueError):
        exhaustive_oracle(p)


def test_five_point_scan_zero_violations():
    for r in (3, 4, 5):
        out = five_point_logic_scan(r)
        assert out["violations"] == 0
        assert out["conforming"] > 0
    with pytest.raises(ValueError):
        five_point_logic_scan(6)
    with pytest.raises(ValueError):
        five_point_logic_scan(2)
