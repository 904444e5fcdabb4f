"""Configuration search: exhaustive, per-column scan, simulated annealing.

All searches score candidates with the same machinery: loading speed from
the sequential simulation (via the provably equivalent distance-sum fast
path when all axis weights are positive), hardware cost from the cost
model, and the blended objective from ObjectiveParams. Results carry the
k best configurations, the Pareto front of (f_speed, f_cost), and a
per-evaluation trace of the best objective seen so far.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .loading import GridPaths, kinds_mask, simulate_loading
from .model import CellKind, Coord, MoveWeights, WarehouseConfig
from .objective import CostModel, Evaluation, ObjectiveParams, evaluate, objective

INF = math.inf


class SizeGuardError(ValueError):
    """Raised when a search family is asked to enumerate too large a space."""


@dataclass(frozen=True)
class SearchParams:
    """Knobs shared by the search entry point.

    `seed` is required by the annealer (there is no hidden entropy source);
    the enumerating modes ignore it.
    """

    mode: str = "anneal"
    seed: int | None = None
    iterations: int = 20000
    t0: float = 1.0
    cooling: float = 0.995
    k: int = 2

    def __post_init__(self) -> None:
        if self.iterations < 0:
            raise ValueError(f"iterations must be >= 0, got {self.iterations!r}")
        if self.t0 <= 0 or not math.isfinite(self.t0):
            raise ValueError(f"t0 must be positive, got {self.t0!r}")
        if not 0 < self.cooling <= 1:
            raise ValueError(f"cooling must lie in (0, 1], got {self.cooling!r}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k!r}")


@dataclass(frozen=True)
class ParetoPoint:
    f_speed: float
    f_cost: float
    config: WarehouseConfig


@dataclass
class SearchResult:
    """Ranked winners, Pareto front, and the running-best trace."""

    best: list[tuple[WarehouseConfig, Evaluation]]
    pareto: list[ParetoPoint]
    trace: list[float]

    def to_json_dict(self) -> dict:
        return {
            "best": [
                {"config": cfg.to_json_dict(), "evaluation": ev.to_json_dict()}
                for cfg, ev in self.best
            ],
            "pareto": [
                {
                    "f_speed": p.f_speed,
                    "f_cost": p.f_cost,
                    "config": p.config.to_json_dict(),
                }
                for p in self.pareto
            ],
            "trace": [t if math.isfinite(t) else None for t in self.trace],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def pareto(points: Sequence[tuple[float, float]]) -> list[tuple[float, float]]:
    """Non-dominated subset of (f_speed, f_cost) points, minimizing both.

    Duplicates collapse to one point. The result is ordered by f_cost
    ascending.
    """
    best_cost: dict[float, float] = {}
    for fs, fc in points:
        cur = best_cost.get(fs)
        if cur is None or fc < cur:
            best_cost[fs] = fc
    kept: list[tuple[float, float]] = []
    low = INF
    for fs in sorted(best_cost):
        fc = best_cost[fs]
        if fc < low:
            kept.append((fs, fc))
            low = fc
    kept.sort(key=lambda p: (p[1], p[0]))
    return kept


def _string_rank(mask: int, n: int) -> int:
    """Bit-reversed mask; compares like the serialized kinds string."""
    rev = 0
    for i in range(n):
        if mask >> i & 1:
            rev |= 1 << (n - 1 - i)
    return rev


class _Scorer:
    """Scores kind bitmasks for one (dims, loading, weights, prices, params)."""

    def __init__(
        self,
        dims: Coord,
        loading: Coord,
        weights: MoveWeights,
        cost_model: CostModel,
        params: ObjectiveParams,
    ):
        self.dims = dims
        self.loading = loading
        self.weights = weights
        self.cost_model = cost_model
        self.params = params
        self.engine = GridPaths(dims, weights)
        self.n = self.engine.n
        self.src = self.engine.index(loading)
        # for strictly positive weights the simulated f_speed equals the
        # empty-warehouse distance sum (see GridPaths.distance_sum)
        self.fast = weights.all_positive
        self.three = cost_model.three_axis_cost
        self.two = cost_model.two_axis_cost

    def config(self, mask: int) -> WarehouseConfig:
        kinds = tuple(
            CellKind.THREE_AXIS if mask >> i & 1 else CellKind.TWO_AXIS
            for i in range(self.n)
        )
        return WarehouseConfig(dims=self.dims, kinds=kinds, loading=self.loading)

    def score(self, mask: int) -> tuple[float, float, float]:
        """(f_speed, f_cost, f_target); infeasible masks score INF."""
        if self.fast:
            f_speed = self.engine.distance_sum(mask, self.src)
        else:
            report = simulate_loading(self.config(mask), self.weights)
            f_speed = report.f_speed if report.f_speed is not None else INF
        triaxial = mask.bit_count()
        f_cost = self.cost_model.total_by_counts(triaxial, self.n - triaxial)
        if f_speed == INF:
            return INF, f_cost, INF
        f_target = objective(f_speed, f_cost, self.params)
        return f_speed, f_cost, f_target

    def evaluation(self, mask: int) -> Evaluation:
        return evaluate(
            self.config(mask), self.weights, self.cost_model, params=self.params
        )


class _Collector:
    """Accumulates top-k ranking, Pareto frontier, and the trace."""

    def __init__(self, scorer: _Scorer, k: int):
        self.scorer = scorer
        self.k = k
        self.top: list[tuple[float, int, int, int]] = []  # (ft, triaxial, rank, mask)
        self.frontier: dict[float, tuple[float, int, int, int]] = {}
        self.trace: list[float] = []
        self.best_ft = INF

    def offer(self, mask: int, fs: float, fc: float, ft: float) -> None:
        if ft < self.best_ft:
            self.best_ft = ft
        self.trace.append(self.best_ft)
        if fs == INF:
            return
        triaxial = mask.bit_count()
        worst = self.top[-1] if len(self.top) >= self.k else None
        if worst is None or (ft, triaxial) <= (worst[0], worst[1]):
            entry = (ft, triaxial, _string_rank(mask, self.scorer.n), mask)
            if entry not in self.top:
                self.top.append(entry)
                self.top.sort()
                del self.top[self.k :]
        cur = self.frontier.get(fs)
        if cur is None or fc < cur[0]:
            self.frontier[fs] = (fc, triaxial, _string_rank(mask, self.scorer.n), mask)
        elif fc == cur[0]:
            entry = (fc, triaxial, _string_rank(mask, self.scorer.n), mask)
            if entry < cur:
                self.frontier[fs] = entry

    def result(self) -> SearchResult:
        best = [
            (self.scorer.config(mask), self.scorer.evaluation(mask))
            for _ft, _tri, _rank, mask in self.top
        ]
        kept: list[ParetoPoint] = []
        low = INF
        for fs in sorted(self.frontier):
            fc, _tri, _rank, mask = self.frontier[fs]
            if fc < low:
                kept.append(ParetoPoint(f_speed=fs, f_cost=fc, config=self.scorer.config(mask)))
                low = fc
        kept.sort(key=lambda p: (p.f_cost, p.f_speed))
        return SearchResult(best=best, pareto=kept, trace=self.trace)


def exhaustive(
    dims: Coord,
    loading: Coord,
    weights: MoveWeights = MoveWeights(),
    cost_model: CostModel = CostModel(),
    params: ObjectiveParams | None = None,
    *,
    alpha: float = 1.0,
    k: int = 2,
    max_cells: int = 12,
) -> SearchResult:
    """Score every kind assignment. Guarded to small warehouses."""
    params = _resolve_params(dims, loading, weights, cost_model, params, alpha)
    nx, ny, nz = dims
    n = nx * ny * nz
    if n > max_cells:
        raise SizeGuardError(
            f"exhaustive search over {n} cells exceeds the {max_cells}-cell guard"
        )
    scorer = _Scorer(dims, loading, weights, cost_model, params)
    collector = _Collector(scorer, k)
    for mask in range(1 << n):
        fs, fc, ft = scorer.score(mask)
        collector.offer(mask, fs, fc, ft)
    return collector.result()


def column_scan(
    dims: Coord,
    loading: Coord,
    weights: MoveWeights = MoveWeights(),
    cost_model: CostModel = CostModel(),
    params: ObjectiveParams | None = None,
    *,
    alpha: float = 1.0,
    k: int = 2,
    max_columns: int = 20,
) -> SearchResult:
    """Score every per-column uniform assignment (a column is one (x, y))."""
    params = _resolve_params(dims, loading, weights, cost_model, params, alpha)
    nx, ny, nz = dims
    columns = nx * ny
    if columns > max_columns:
        raise SizeGuardError(
            f"column scan over {columns} columns exceeds the {max_columns}-column guard"
        )
    column_bits = []
    for c in range(columns):
        bits = 0
        for z in range(nz):
            bits |= 1 << (c + z * columns)
        column_bits.append(bits)
    scorer = _Scorer(dims, loading, weights, cost_model, params)
    collector = _Collector(scorer, k)
    for colmask in range(1 << columns):
        mask = 0
        rest = colmask
        while rest:
            low = rest & -rest
            mask |= column_bits[low.bit_length() - 1]
            rest ^= low
        fs, fc, ft = scorer.score(mask)
        collector.offer(mask, fs, fc, ft)
    return collector.result()


def anneal(
    dims: Coord,
    loading: Coord,
    weights: MoveWeights = MoveWeights(),
    cost_model: CostModel = CostModel(),
    params: ObjectiveParams | None = None,
    search_params: SearchParams = SearchParams(),
    *,
    alpha: float = 1.0,
    initial: WarehouseConfig | None = None,
) -> SearchResult:
    """Simulated annealing over kind assignments.

    The chain starts from the all-three-axis build (always feasible),
    flips one uniformly random cell per iteration, and accepts worse
    states with probability exp(-delta/T) under multiplicative cooling.
    Infeasible proposals score infinity and are never accepted from a
    feasible state. Fully deterministic for a given seed.
    """
    params = _resolve_params(dims, loading, weights, cost_model, params, alpha)
    if search_params.seed is None:
        raise ValueError("anneal requires an explicit seed in SearchParams")
    nx, ny, nz = dims
    n = nx * ny * nz
    scorer = _Scorer(dims, loading, weights, cost_model, params)
    collector = _Collector(scorer, search_params.k)
    if initial is None:
        current = (1 << n) - 1
    else:
        if initial.dims != tuple(dims):
            raise ValueError("initial config dims do not match the search dims")
        current = kinds_mask(initial.kinds)
    cache: dict[int, tuple[float, float, float]] = {}

    def cached_score(mask: int) -> tuple[float, float, float]:
        found = cache.get(mask)
        if found is None:
            found = scorer.score(mask)
            cache[mask] = found
            collector.offer(mask, *found)
        else:
            collector.trace.append(collector.best_ft)
        return found

    rng = random.Random(search_params.seed)
    current_ft = cached_score(current)[2]
    temperature = search_params.t0
    for _ in range(search_params.iterations):
        candidate = current ^ (1 << rng.randrange(n))
        candidate_ft = cached_score(candidate)[2]
        if candidate_ft <= current_ft:
            current, current_ft = candidate, candidate_ft
        else:
            delta = candidate_ft - current_ft
            if rng.random() < math.exp(-delta / temperature):
                current, current_ft = candidate, candidate_ft
        temperature *= search_params.cooling
    return collector.result()


def search(
    dims: Coord,
    loading: Coord,
    weights: MoveWeights = MoveWeights(),
    cost_model: CostModel = CostModel(),
    params: ObjectiveParams | None = None,
    search_params: SearchParams = SearchParams(),
    *,
    alpha: float = 1.0,
) -> SearchResult:
    """Dispatch on SearchParams.mode."""
    mode = search_params.mode.replace("_", "-")
    if mode == "exhaustive":
        return exhaustive(
            dims, loading, weights, cost_model, params, alpha=alpha, k=search_params.k
        )
    if mode == "column-scan":
        return column_scan(
            dims, loading, weights, cost_model, params, alpha=alpha, k=search_params.k
        )
    if mode == "anneal":
        return anneal(
            dims, loading, weights, cost_model, params, search_params, alpha=alpha
        )
    raise ValueError(f"unknown search mode {search_params.mode!r}")


def _resolve_params(
    dims: Coord,
    loading: Coord,
    weights: MoveWeights,
    cost_model: CostModel,
    params: ObjectiveParams | None,
    alpha: float,
) -> ObjectiveParams:
    if params is not None:
        return params
    from .objective import self_norms

    sn, cn = self_norms(dims, loading, weights, cost_model)
    return ObjectiveParams(alpha=alpha, f_speed_norm=sn, f_cost_norm=cn)
