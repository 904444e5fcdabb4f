"""Cost model, objective arithmetic, display rounding, evaluations."""

import math

import pytest

from warecell.model import CellKind, ConfigError, MoveWeights, WarehouseConfig
from warecell.objective import (
    CostModel,
    Evaluation,
    ObjectiveParams,
    display_round,
    evaluate,
    objective,
    self_norms,
    warehouse_cost,
)

# reference criterion pairs for the 4x4x3 warehouse family, with the
# normalizing values (7808, 48); the rounded targets are frozen below
REFERENCE_ROWS = [
    (48, 7808.0, 48.0),
    (45, 7820.0, 46.8),
    (15, 8144.0, 34.8),
    (12, 8360.0, 33.6),
    (6, 8960.0, 31.2),
]
REFERENCE_NORMS = (7808.0, 48.0)
REFERENCE_TARGETS = {
    1.0: [1.0, 1.002, 1.043, 1.071, 1.148],
    0.5: [1.0, 0.988, 0.884, 0.885, 0.899],
    0.1: [1.0, 0.978, 0.757, 0.737, 0.700],
}


def test_unit_costs_are_exact():
    cm = CostModel()
    assert cm.three_axis_cost == 1.0
    assert cm.two_axis_cost == 0.6
    assert cm.cell_cost(CellKind.THREE_AXIS) == 1.0
    assert cm.cell_cost(CellKind.TWO_AXIS) == 0.6


def test_reference_cost_column():
    cm = CostModel()
    for triaxial, _speed, cost in REFERENCE_ROWS:
        assert cm.total_by_counts(triaxial, 48 - triaxial) == pytest.approx(cost, abs=1e-9)


def test_warehouse_cost_counts_kinds():
    cfg = WarehouseConfig.from_kinds_string((2, 2, 1), "TDTD")
    assert warehouse_cost(cfg) == pytest.approx(3.2, abs=1e-12)
    custom = CostModel(frame=0.1, x_drives=0.1, y_drives=0.1, z_drives=0.7)
    assert custom.three_axis_cost == pytest.approx(1.0)
    assert warehouse_cost(cfg, custom) == pytest.approx(2.6, abs=1e-12)


def test_objective_reproduces_reference_targets():
    for alpha, expected_column in REFERENCE_TARGETS.items():
        params = ObjectiveParams(
            alpha=alpha, f_speed_norm=REFERENCE_NORMS[0], f_cost_norm=REFERENCE_NORMS[1]
        )
        for (_, f_speed, f_cost), expected in zip(REFERENCE_ROWS, expected_column):
            value = display_round(objective(f_speed, f_cost, params))
            assert value == pytest.approx(expected, abs=0.0005)


def test_objective_none_passthrough():
    params = ObjectiveParams(alpha=0.5, f_speed_norm=10.0, f_cost_norm=10.0)
    assert objective(None, 5.0, params) is None


def test_objective_zero_norm_convention():
    params = ObjectiveParams(alpha=1.0, f_speed_norm=0.0, f_cost_norm=1.0)
    assert objective(0.0, 1.0, params) == 1.0
    assert objective(3.0, 1.0, params) == math.inf


def test_objective_params_validation():
    with pytest.raises(ValueError):
        ObjectiveParams(alpha=1.5, f_speed_norm=1.0, f_cost_norm=1.0)
    with pytest.raises(ValueError):
        ObjectiveParams(alpha=-0.1, f_speed_norm=1.0, f_cost_norm=1.0)
    with pytest.raises(ValueError):
        ObjectiveParams(alpha=0.5, f_speed_norm=-1.0, f_cost_norm=1.0)
    with pytest.raises(ValueError):
        ObjectiveParams(alpha=0.5, f_speed_norm=1.0, f_cost_norm=0.0)


def test_display_round_half_up():
    assert display_round(0.8845) == 0.885
    assert display_round(1.0705) == 1.071
    assert display_round(0.0005) == 0.001
    assert display_round(-0.0005) == -0.001
    assert display_round(2.675, places=2) == 2.68
    assert display_round(1.0) == 1.0


def test_self_norms_small_cube():
    assert self_norms((2, 2, 2)) == (12.0, 8.0)
    assert self_norms((2, 2, 1)) == (4.0, 4.0)


def test_self_norms_unloadable_reference():
    with pytest.raises(ConfigError):
        self_norms((1, 1, 1), loading=(5, 5, 5))


def test_evaluate_all_three_axis_is_unity():
    cfg = WarehouseConfig.uniform((2, 2, 2), CellKind.THREE_AXIS)
    ev = evaluate(cfg, alpha=1.0)
    assert ev.f_target == 1.0
    assert ev.f_speed == 12.0
    assert ev.f_cost == 8.0
    assert ev.norms == (12.0, 8.0)
    assert ev.triaxial == 8


def test_evaluate_single_lift_cube():
    cfg = WarehouseConfig.from_kinds_string((2, 2, 2), "TDDDDDDD")
    ev = evaluate(cfg, alpha=0.5)
    assert ev.f_speed == 12.0
    assert ev.f_cost == pytest.approx(5.2, abs=1e-12)
    assert display_round(ev.f_target) == 0.825


def test_evaluate_with_norm_overrides():
    cfg = WarehouseConfig.uniform((4, 4, 3), CellKind.THREE_AXIS)
    params = ObjectiveParams(alpha=1.0, f_speed_norm=7808.0, f_cost_norm=48.0)
    ev = evaluate(cfg, params=params)
    assert ev.f_cost == 48.0
    assert ev.f_speed == 192.0
    assert ev.norms == (7808.0, 48.0)
    assert ev.f_target == pytest.approx(192.0 / 7808.0)


def test_evaluate_infeasible_json():
    cfg = WarehouseConfig.uniform((2, 2, 2), CellKind.TWO_AXIS)
    ev = evaluate(cfg, alpha=0.5)
    assert not ev.feasible
    doc = ev.to_json_dict()
    assert doc["f_speed"] == "infeasible"
    assert doc["f_target"] == "infeasible"
    assert doc["f_cost"] == pytest.approx(4.8)


def test_evaluate_weights_change_speed():
    cfg = WarehouseConfig.uniform((2, 2, 2), CellKind.THREE_AXIS)
    heavy_lift = evaluate(cfg, MoveWeights(1.0, 1.0, 5.0), alpha=1.0)
    assert heavy_lift.f_speed == 28.0  # four vertical transfers at cost 5
    assert heavy_lift.f_target == 1.0  # self-norms scale along


def test_evaluation_is_frozen_record():
    ev = Evaluation(
        triaxial=1, f_speed=2.0, f_cost=3.0, f_target=0.5, alpha=1.0, norms=(4.0, 6.0)
    )
    with pytest.raises(AttributeError):
        ev.f_speed = 9.0
