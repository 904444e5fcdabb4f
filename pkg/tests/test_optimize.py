"""Search modes: exhaustive, column scan, annealing, Pareto filtering."""

import math
import random

import pytest

from oracles import brute_force_best, naive_loading_total, pareto_naive
from warecell.model import CellKind, MoveWeights, WarehouseConfig
from warecell.objective import ObjectiveParams, CostModel
from warecell.optimize import (
    SearchParams,
    SizeGuardError,
    anneal,
    column_scan,
    exhaustive,
    pareto,
    search,
)

INF = math.inf


def oracle_norms(dims, loading=(0, 0, 0)):
    """Self-norms recomputed outside the package: all-three-axis reference."""
    n = dims[0] * dims[1] * dims[2]
    all_t = WarehouseConfig.uniform(dims, CellKind.THREE_AXIS, loading)
    return naive_loading_total(all_t, MoveWeights()), float(n)


@pytest.mark.parametrize("dims", [(2, 2, 1), (2, 2, 2)])
@pytest.mark.parametrize("alpha", [1.0, 0.5, 0.1])
def test_exhaustive_matches_brute_force(dims, alpha):
    norms = oracle_norms(dims)
    best_value, best_masks = brute_force_best(dims, (0, 0, 0), alpha, norms)
    params = ObjectiveParams(alpha=alpha, f_speed_norm=norms[0], f_cost_norm=norms[1])
    result = exhaustive(dims, (0, 0, 0), params=params)
    cfg, ev = result.best[0]
    assert ev.f_target == pytest.approx(best_value, abs=1e-9)
    winner_mask = sum(
        1 << i for i, k in enumerate(cfg.kinds) if k is CellKind.THREE_AXIS
    )
    assert winner_mask in best_masks


def test_exhaustive_self_norms_default():
    explicit = ObjectiveParams(alpha=0.5, f_speed_norm=12.0, f_cost_norm=8.0)
    with_params = exhaustive((2, 2, 2), (0, 0, 0), params=explicit)
    defaulted = exhaustive((2, 2, 2), (0, 0, 0), alpha=0.5)
    assert with_params.to_json() == defaulted.to_json()
    assert defaulted.best[0][0].kinds_string() == "TDDDDDDD"
    assert defaulted.best[0][1].f_target == pytest.approx(0.825)


def test_exhaustive_size_guard():
    with pytest.raises(SizeGuardError, match="16 cells"):
        exhaustive((4, 2, 2), (0, 0, 0))
    # the guard is a named override, not a hard wall
    result = exhaustive((4, 2, 2), (0, 0, 0), max_cells=16, k=1)
    assert result.best


def test_exhaustive_ranking_tie_breaks():
    # alpha 0 scores cost only, so targets tie in droves: fewer three-axis
    # cells win, then the lexicographically smaller kinds string
    params = ObjectiveParams(alpha=0.0, f_speed_norm=4.0, f_cost_norm=4.0)
    result = exhaustive((2, 2, 1), (0, 0, 0), params=params, k=5)
    ranked = [cfg.kinds_string() for cfg, _ in result.best]
    assert ranked == ["DDDD", "DDDT", "DDTD", "DTDD", "TDDD"]


def test_exhaustive_degenerate_single_cell():
    # 1x1x1: the reference speed norm is 0; the 0/0 ratio counts as 1
    result = exhaustive((1, 1, 1), (0, 0, 0), alpha=1.0)
    cfg, ev = result.best[0]
    assert cfg.kinds_string() == "D"
    assert ev.f_target == 1.0


def test_exhaustive_trace_runs_the_whole_space():
    result = exhaustive((2, 2, 1), (0, 0, 0), alpha=1.0)
    assert len(result.trace) == 16
    finite = [t for t in result.trace if math.isfinite(t)]
    assert finite == sorted(finite, reverse=True)


def test_pareto_filter_matches_naive():
    rng = random.Random(88)
    for _ in range(50):
        points = [
            (float(rng.randint(0, 20)), float(rng.randint(0, 20)))
            for _ in range(rng.randrange(1, 30))
        ]
        got = pareto(points)
        assert set(got) == pareto_naive(points)
        costs = [fc for _, fc in got]
        assert costs == sorted(costs)


def test_search_result_pareto_front_is_true_front():
    dims = (2, 2, 2)
    norms = oracle_norms(dims)
    params = ObjectiveParams(alpha=0.5, f_speed_norm=norms[0], f_cost_norm=norms[1])
    result = exhaustive(dims, (0, 0, 0), params=params)
    n = 8
    points = []
    for mask in range(1 << n):
        kinds = tuple(
            CellKind.THREE_AXIS if mask >> i & 1 else CellKind.TWO_AXIS
            for i in range(n)
        )
        cfg = WarehouseConfig(dims=dims, kinds=kinds)
        speed = naive_loading_total(cfg, MoveWeights())
        if speed is None:
            continue
        cost = CostModel().total(kinds)
        points.append((speed, cost))
    expected = pareto_naive(points)
    got = {(p.f_speed, p.f_cost) for p in result.pareto}
    assert got == expected
    for p in result.pareto:
        assert naive_loading_total(p.config, MoveWeights()) == pytest.approx(p.f_speed)


def test_column_scan_restricts_to_uniform_columns():
    result = column_scan((2, 2, 2), (0, 0, 0), alpha=0.5, k=3)
    for cfg, _ in result.best:
        for x in range(2):
            for y in range(2):
                column = {cfg.kind_at((x, y, z)) for z in range(2)}
                assert len(column) == 1
    best_cfg, best_ev = result.best[0]
    assert best_cfg.kinds_string() == "TDDDTDDD"
    assert best_ev.f_target == pytest.approx(0.85)
    assert len(result.trace) == 16  # 2^4 column choices


def test_column_scan_size_guard():
    with pytest.raises(SizeGuardError, match="25 columns"):
        column_scan((5, 5, 1), (0, 0, 0))
    with pytest.raises(SizeGuardError, match="4 columns"):
        column_scan((2, 2, 1), (0, 0, 0), max_columns=3)


def test_anneal_requires_seed():
    with pytest.raises(ValueError, match="seed"):
        anneal((2, 2, 2), (0, 0, 0), search_params=SearchParams(mode="anneal"))


def test_anneal_is_deterministic_per_seed():
    sp = SearchParams(mode="anneal", seed=11, iterations=500)
    one = anneal((2, 2, 2), (0, 0, 0), search_params=sp, alpha=0.5)
    two = anneal((2, 2, 2), (0, 0, 0), search_params=sp, alpha=0.5)
    assert one.to_json() == two.to_json()
    assert len(one.trace) == 501


def test_anneal_finds_the_small_cube_optimum():
    sp = SearchParams(mode="anneal", seed=4, iterations=2000)
    result = anneal((2, 2, 2), (0, 0, 0), search_params=sp, alpha=0.5)
    assert result.best[0][1].f_target == pytest.approx(0.825)
    assert result.best[0][0].kinds_string() == "TDDDDDDD"


def test_anneal_initial_config():
    start = WarehouseConfig.from_kinds_string((2, 2, 2), "TTTTDDDD")
    sp = SearchParams(mode="anneal", seed=5, iterations=200)
    result = anneal((2, 2, 2), (0, 0, 0), search_params=sp, alpha=0.5, initial=start)
    assert result.best
    wrong = WarehouseConfig.uniform((2, 2, 1), CellKind.THREE_AXIS)
    with pytest.raises(ValueError, match="dims"):
        anneal((2, 2, 2), (0, 0, 0), search_params=sp, initial=wrong)


def test_anneal_trace_is_nonincreasing():
    sp = SearchParams(mode="anneal", seed=21, iterations=300)
    result = anneal((2, 2, 2), (0, 0, 0), search_params=sp, alpha=0.1)
    finite = [t for t in result.trace if math.isfinite(t)]
    assert finite == sorted(finite, reverse=True)
    assert math.isfinite(result.trace[0])  # the all-three-axis start is feasible


def test_search_dispatch_and_mode_alias():
    params = SearchParams(mode="column_scan", k=1)
    result = search((2, 2, 2), (0, 0, 0), search_params=params, alpha=0.5)
    assert result.best[0][0].kinds_string() == "TDDDTDDD"
    with pytest.raises(ValueError, match="unknown search mode"):
        search((2, 2, 1), (0, 0, 0), search_params=SearchParams(mode="gradient"))


def test_search_params_validation():
    with pytest.raises(ValueError):
        SearchParams(iterations=-1)
    with pytest.raises(ValueError):
        SearchParams(t0=0.0)
    with pytest.raises(ValueError):
        SearchParams(cooling=0.0)
    with pytest.raises(ValueError):
        SearchParams(cooling=1.5)
    with pytest.raises(ValueError):
        SearchParams(k=0)


def test_search_result_json_shape():
    result = exhaustive((2, 2, 2), (0, 0, 0), alpha=1.0, k=1)
    doc = result.to_json_dict()
    assert set(doc) == {"best", "pareto", "trace"}
    assert doc["best"][0]["config"]["dims"] == [2, 2, 2]
    assert doc["best"][0]["evaluation"]["alpha"] == 1.0
    # infeasible prefixes of the enumeration serialize as null
    assert doc["trace"][0] is None
    assert doc["trace"][-1] is not None


def test_every_reported_config_is_feasible():
    for alpha in (1.0, 0.5, 0.1):
        result = exhaustive((2, 2, 2), (0, 0, 0), alpha=alpha, k=4)
        for cfg, ev in result.best:
            assert ev.f_speed is not None
            assert naive_loading_total(cfg, MoveWeights()) is not None
        for point in result.pareto:
            assert naive_loading_total(point.config, MoveWeights()) is not None
