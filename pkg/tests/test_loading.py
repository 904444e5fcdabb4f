"""Loading simulation: pathfinding, plan order, feasibility, fast path."""

import math
import random

import pytest

from oracles import bellman_ford, capability_edges, naive_loading_total
from warecell.loading import (
    GridPaths,
    empty_distance_sum,
    kinds_mask,
    loading_plan,
    shortest_path,
    simulate_loading,
)
from warecell.model import CellKind, ConfigError, MoveWeights, WarehouseConfig

INF = math.inf


def random_config(rng, dims, loading=(0, 0, 0)):
    n = dims[0] * dims[1] * dims[2]
    cells = "".join(rng.choice("TD") for _ in range(n))
    return WarehouseConfig.from_kinds_string(dims, cells, loading)


def test_shortest_path_straight_line():
    cfg = WarehouseConfig.uniform((4, 1, 1), CellKind.TWO_AXIS)
    found = shortest_path(cfg, (0, 0, 0), (3, 0, 0))
    assert found.cost == 3.0
    assert found.cells == ((0, 0, 0), (1, 0, 0), (2, 0, 0), (3, 0, 0))


def test_shortest_path_detours_around_occupied():
    cfg = WarehouseConfig.uniform((3, 2, 1), CellKind.TWO_AXIS)
    found = shortest_path(cfg, (0, 0, 0), (2, 0, 0), occupied=[(1, 0, 0)])
    assert found.cost == 4.0
    assert (1, 0, 0) not in found.cells


def test_shortest_path_blocked_entirely():
    cfg = WarehouseConfig.uniform((3, 1, 1), CellKind.TWO_AXIS)
    assert shortest_path(cfg, (0, 0, 0), (2, 0, 0), occupied=[(1, 0, 0)]) is None


def test_shortest_path_occupied_start_rejected():
    cfg = WarehouseConfig.uniform((2, 1, 1), CellKind.TWO_AXIS)
    with pytest.raises(ValueError, match="occupied"):
        shortest_path(cfg, (0, 0, 0), (1, 0, 0), occupied=[(0, 0, 0)])


def test_shortest_path_vertical_needs_three_axis():
    up_ok = WarehouseConfig.from_kinds_string((1, 1, 2), "TD")
    assert shortest_path(up_ok, (0, 0, 0), (0, 0, 1)).cost == 1.0
    up_blocked = WarehouseConfig.from_kinds_string((1, 1, 2), "DT")
    assert shortest_path(up_blocked, (0, 0, 0), (0, 0, 1)) is None


def test_shortest_path_trivial_and_invalid():
    cfg = WarehouseConfig.uniform((2, 2, 1), CellKind.TWO_AXIS)
    found = shortest_path(cfg, (1, 1, 0), (1, 1, 0))
    assert found.cells == ((1, 1, 0),)
    assert found.cost == 0.0
    broken = WarehouseConfig(dims=(2, 2, 1), kinds=(CellKind.TWO_AXIS,))
    with pytest.raises(ConfigError):
        shortest_path(broken, (0, 0, 0), (1, 0, 0))


def test_shortest_path_matches_bellman_ford_cost():
    rng = random.Random(71)
    for _ in range(60):
        dims = (rng.randint(1, 3), rng.randint(1, 3), rng.randint(1, 2))
        cfg = random_config(rng, dims)
        weights = MoveWeights(
            rng.choice([0.5, 1.0, 2.0]),
            rng.choice([0.5, 1.0, 2.0]),
            rng.choice([0.5, 1.0, 3.0]),
        )
        edges = capability_edges(cfg, weights)
        n = cfg.cell_count
        dist = bellman_ford(n, edges, 0)
        for goal in range(n):
            found = shortest_path(cfg, (0, 0, 0), cfg.coord(goal), weights=weights)
            if dist[goal] == INF:
                assert found is None
            else:
                assert found.cost == pytest.approx(dist[goal])


def test_path_costs_follow_weights():
    cfg = WarehouseConfig.uniform((2, 2, 2), CellKind.THREE_AXIS)
    weights = MoveWeights(1.0, 10.0, 100.0)
    found = shortest_path(cfg, (0, 0, 0), (1, 1, 1), weights=weights)
    assert found.cost == 111.0


def test_loading_plan_is_farthest_first():
    cfg = WarehouseConfig.uniform((2, 2, 1), CellKind.TWO_AXIS)
    plan = loading_plan(cfg)
    assert plan.order == ((1, 1, 0), (0, 1, 0), (1, 0, 0), (0, 0, 0))
    assert plan.feasible
    assert plan.distances[(1, 1, 0)] == 2.0


def test_loading_plan_tie_break_prefers_higher_coordinates():
    cfg = WarehouseConfig.uniform((3, 3, 1), CellKind.TWO_AXIS)
    plan = loading_plan(cfg)
    # distance-2 cells: (2,0,0), (1,1,0), (0,2,0); filled in descending index order
    two_away = [c for c in plan.order if plan.distances[c] == 2.0]
    assert two_away == [(0, 2, 0), (1, 1, 0), (2, 0, 0)]


def test_loading_plan_reports_unreachable():
    cfg = WarehouseConfig.uniform((2, 2, 2), CellKind.TWO_AXIS)
    plan = loading_plan(cfg)
    assert not plan.feasible
    assert set(plan.unreachable) == {(x, y, 1) for x in range(2) for y in range(2)}


def test_simulate_loading_full_square():
    report = simulate_loading(WarehouseConfig.uniform((2, 2, 1), CellKind.TWO_AXIS))
    assert report.feasible
    assert report.f_speed == 4.0
    assert len(report.loads) == 4
    assert report.loads[-1].destination == (0, 0, 0)
    assert report.loads[-1].cost == 0.0


def test_simulate_loading_infeasible_all_two_axis_tower():
    report = simulate_loading(WarehouseConfig.uniform((1, 1, 3), CellKind.TWO_AXIS))
    assert not report.feasible
    assert report.f_speed is None
    assert report.to_json_dict()["f_speed"] == "infeasible"


def test_simulate_loading_matches_naive_oracle():
    rng = random.Random(2024)
    for _ in range(80):
        dims = (rng.randint(1, 3), rng.randint(1, 3), rng.randint(1, 2))
        cfg = random_config(rng, dims)
        expected = naive_loading_total(cfg, MoveWeights())
        report = simulate_loading(cfg)
        if expected is None:
            assert report.f_speed is None
        else:
            assert report.f_speed == pytest.approx(expected)


def test_simulated_speed_equals_empty_distance_sum_for_positive_weights():
    rng = random.Random(555)
    for _ in range(60):
        dims = (rng.randint(1, 3), rng.randint(1, 3), rng.randint(1, 3))
        cfg = random_config(rng, dims)
        weights = MoveWeights(
            rng.choice([0.5, 1.0, 2.0]),
            rng.choice([0.5, 1.0, 2.0]),
            rng.choice([1.0, 4.0]),
        )
        total = empty_distance_sum(cfg, weights)
        report = simulate_loading(cfg, weights)
        if total == INF:
            assert report.f_speed is None
        else:
            assert report.f_speed == pytest.approx(total)


def test_zero_weight_axis_is_supported():
    # wz = 0 disables the fast path; the plain simulation must still agree
    cfg = WarehouseConfig.uniform((2, 2, 2), CellKind.THREE_AXIS)
    weights = MoveWeights(1.0, 1.0, 0.0)
    report = simulate_loading(cfg, weights)
    assert report.feasible
    assert report.f_speed == pytest.approx(naive_loading_total(cfg, weights))


def test_grid_paths_distance_sum_uniform_equals_weighted():
    # the BFS shortcut for uniform weights must match the general engine
    rng = random.Random(9)
    for _ in range(40):
        dims = (rng.randint(1, 3), rng.randint(1, 3), rng.randint(1, 3))
        cfg = random_config(rng, dims)
        mask = kinds_mask(cfg.kinds)
        uniform = GridPaths(dims, MoveWeights(2.0, 2.0, 2.0))
        general = GridPaths(dims, MoveWeights(2.0, 2.0, 2.0 + 1e-12))
        a = uniform.distance_sum(mask, 0)
        b = general.distance_sum(mask, 0)
        if a == INF:
            assert b == INF
        else:
            assert a == pytest.approx(b)


def test_empty_distance_sum_known_values():
    all_t = WarehouseConfig.uniform((4, 4, 3), CellKind.THREE_AXIS)
    assert empty_distance_sum(all_t) == 192.0
    layer = WarehouseConfig.uniform((3, 3, 1), CellKind.TWO_AXIS)
    assert empty_distance_sum(layer) == 18.0
