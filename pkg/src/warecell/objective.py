"""Warehouse cost model and the weighted two-criteria objective.

A three-axis cell is priced as frame plus all three drive sets; a two-axis
cell is the same build without the vertical drive set. The objective blends
normalized loading speed and normalized hardware cost:

    f_target = alpha * f_speed / f_speed_norm + (1 - alpha) * f_cost / f_cost_norm

and is minimized. Normalizers default to the all-three-axis warehouse of
the same dimensions, so that reference build always scores exactly 1.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Sequence

from .loading import simulate_loading
from .model import CellKind, ConfigError, Coord, MoveWeights, WarehouseConfig


@dataclass(frozen=True)
class CostModel:
    """Component prices in cost units."""

    frame: float = 0.2
    x_drives: float = 0.2
    y_drives: float = 0.2
    z_drives: float = 0.4

    @property
    def three_axis_cost(self) -> float:
        return math.fsum((self.frame, self.x_drives, self.y_drives, self.z_drives))

    @property
    def two_axis_cost(self) -> float:
        # full build minus the vertical drives; with default prices this is
        # exactly 0.6, which direct summation of 0.2s would miss by one ulp
        return self.three_axis_cost - self.z_drives

    def cell_cost(self, kind: CellKind) -> float:
        return self.three_axis_cost if kind is CellKind.THREE_AXIS else self.two_axis_cost

    def total(self, kinds: Iterable[CellKind]) -> float:
        triaxial = 0
        count = 0
        for kind in kinds:
            count += 1
            if kind is CellKind.THREE_AXIS:
                triaxial += 1
        return self.total_by_counts(triaxial, count - triaxial)

    def total_by_counts(self, triaxial: int, duo: int) -> float:
        return math.fsum((triaxial * self.three_axis_cost, duo * self.two_axis_cost))


def warehouse_cost(cfg: WarehouseConfig, cost_model: CostModel = CostModel()) -> float:
    """Total hardware cost of a configuration."""
    return cost_model.total(cfg.kinds)


@dataclass(frozen=True)
class ObjectiveParams:
    """Blend factor and normalizers for the combined objective."""

    alpha: float
    f_speed_norm: float
    f_cost_norm: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha!r}")
        if not math.isfinite(self.f_speed_norm) or self.f_speed_norm < 0:
            raise ValueError(f"f_speed_norm must be finite and >= 0, got {self.f_speed_norm!r}")
        if not math.isfinite(self.f_cost_norm) or self.f_cost_norm <= 0:
            raise ValueError(f"f_cost_norm must be finite and positive, got {self.f_cost_norm!r}")


def objective(f_speed: float | None, f_cost: float, params: ObjectiveParams) -> float | None:
    """Weighted sum of the normalized criteria; None passes infeasibility through.

    A zero speed normalizer only arises from degenerate single-cell
    warehouses whose reference speed is 0; the ratio 0/0 is taken as 1 so
    the normalizing build still scores 1.
    """
    if f_speed is None:
        return None
    if params.f_speed_norm == 0:
        speed_ratio = 1.0 if f_speed == 0 else math.inf
    else:
        speed_ratio = f_speed / params.f_speed_norm
    cost_ratio = f_cost / params.f_cost_norm
    return params.alpha * speed_ratio + (1.0 - params.alpha) * cost_ratio


def display_round(value: float, places: int = 3) -> float:
    """Round for display: fixed decimal places, halves away from zero."""
    quantum = Decimal(1).scaleb(-places)
    return float(Decimal(repr(value)).quantize(quantum, rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class Evaluation:
    """Scored configuration summary."""

    triaxial: int
    f_speed: float | None
    f_cost: float
    f_target: float | None
    alpha: float
    norms: tuple[float, float]

    @property
    def feasible(self) -> bool:
        return self.f_speed is not None

    def to_json_dict(self) -> dict:
        return {
            "triaxial": self.triaxial,
            "f_speed": self.f_speed if self.f_speed is not None else "infeasible",
            "f_cost": self.f_cost,
            "f_target": self.f_target if self.f_target is not None else "infeasible",
            "alpha": self.alpha,
            "norms": [self.norms[0], self.norms[1]],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def self_norms(
    dims: Coord,
    loading: Coord = (0, 0, 0),
    weights: MoveWeights = MoveWeights(),
    cost_model: CostModel = CostModel(),
) -> tuple[float, float]:
    """Normalizers taken from the all-three-axis warehouse of these dims."""
    reference = WarehouseConfig.uniform(dims, CellKind.THREE_AXIS, loading)
    report = simulate_loading(reference, weights)
    if report.f_speed is None:
        raise ConfigError(f"all-three-axis reference for dims {dims!r} is not loadable")
    return report.f_speed, warehouse_cost(reference, cost_model)


def evaluate(
    cfg: WarehouseConfig,
    weights: MoveWeights = MoveWeights(),
    cost_model: CostModel = CostModel(),
    params: ObjectiveParams | None = None,
    alpha: float = 1.0,
) -> Evaluation:
    """Simulate, price, and score one configuration.

    Without explicit params the normalizers are self-computed for the
    configuration's own dimensions and loading cell.
    """
    if params is None:
        sn, cn = self_norms(cfg.dims, cfg.loading, weights, cost_model)
        params = ObjectiveParams(alpha=alpha, f_speed_norm=sn, f_cost_norm=cn)
    report = simulate_loading(cfg, weights)
    f_cost = warehouse_cost(cfg, cost_model)
    f_target = objective(report.f_speed, f_cost, params)
    return Evaluation(
        triaxial=cfg.triaxial_count,
        f_speed=report.f_speed,
        f_cost=f_cost,
        f_target=f_target,
        alpha=params.alpha,
        norms=(params.f_speed_norm, params.f_cost_norm),
    )
