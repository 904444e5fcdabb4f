"""Sequential loading simulation over the transfer graph.

Loads enter at the loading cell and are routed one at a time to their
destinations, farthest first, so that already-placed loads sit behind the
traffic instead of in front of it. The speed criterion f_speed is the sum
of per-load transfer costs.
"""

from __future__ import annotations

import heapq
import json
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .model import CellKind, ConfigError, Coord, MoveWeights, WarehouseConfig

INF = math.inf


@dataclass(frozen=True)
class PathResult:
    """A concrete cell-to-cell route and its transfer cost."""

    cells: tuple[Coord, ...]
    cost: float


@dataclass(frozen=True)
class LoadStep:
    destination: Coord
    path: tuple[Coord, ...]
    cost: float


@dataclass(frozen=True)
class LoadingPlan:
    """Destination order for filling the warehouse (loading cell last)."""

    order: tuple[Coord, ...]
    distances: dict[Coord, float]
    unreachable: tuple[Coord, ...]

    @property
    def feasible(self) -> bool:
        return not self.unreachable


@dataclass(frozen=True)
class SimReport:
    """Outcome of simulating the full loading sequence."""

    loads: tuple[LoadStep, ...]
    f_speed: float | None

    @property
    def feasible(self) -> bool:
        return self.f_speed is not None

    def to_json_dict(self) -> dict:
        return {
            "f_speed": self.f_speed if self.feasible else "infeasible",
            "loads": [
                {
                    "dest": list(step.destination),
                    "cost": step.cost,
                    "path": [list(c) for c in step.path],
                }
                for step in self.loads
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


class GridPaths:
    """Reusable index-based search engine for one (dims, weights) pair.

    Cell kinds are passed per query as a bitmask (bit i set = cell i is
    three-axis), so one engine can score many configurations. Vertical
    edges exist only out of three-axis source cells; X and Y edges are
    unconditional.
    """

    def __init__(self, dims: Coord, weights: MoveWeights = MoveWeights()):
        nx, ny, nz = dims
        if nx < 1 or ny < 1 or nz < 1:
            raise ValueError(f"dims must be positive, got {dims!r}")
        self.dims = dims
        self.weights = weights
        self.n = nx * ny * nz
        area = nx * ny
        xy: list[tuple[tuple[int, float], ...]] = []
        vertical: list[tuple[tuple[int, float], ...]] = []
        for i in range(self.n):
            x = i % nx
            y = (i // nx) % ny
            z = i // area
            out: list[tuple[int, float]] = []
            if y > 0:
                out.append((i - nx, weights.wy))
            if x > 0:
                out.append((i - 1, weights.wx))
            if x < nx - 1:
                out.append((i + 1, weights.wx))
            if y < ny - 1:
                out.append((i + nx, weights.wy))
            xy.append(tuple(out))
            vert: list[tuple[int, float]] = []
            if z > 0:
                vert.append((i - area, weights.wz))
            if z < nz - 1:
                vert.append((i + area, weights.wz))
            vertical.append(tuple(vert))
        self.xy = xy
        self.vertical = vertical
        self.uniform = weights.wx == weights.wy == weights.wz and weights.wx > 0

    def index(self, coord: Coord) -> int:
        x, y, z = coord
        nx, ny, _ = self.dims
        return x + nx * (y + ny * z)

    def coord(self, index: int) -> Coord:
        nx, ny, _ = self.dims
        return (index % nx, (index // nx) % ny, index // (nx * ny))

    def distances(
        self, mask: int, src: int, occupied: frozenset[int] | set[int] = frozenset()
    ) -> list[float]:
        """Cost of the cheapest route from src to every cell (INF unreached).

        Ties in the search are settled toward the smaller linear index,
        i.e. lexicographically smaller (z, y, x).
        """
        dist = [INF] * self.n
        dist[src] = 0.0
        heap = [(0.0, src)]
        xy = self.xy
        vertical = self.vertical
        push = heapq.heappush
        pop = heapq.heappop
        while heap:
            d, u = pop(heap)
            if d > dist[u]:
                continue
            for v, w in xy[u]:
                if v in occupied:
                    continue
                nd = d + w
                if nd < dist[v]:
                    dist[v] = nd
                    push(heap, (nd, v))
            if mask >> u & 1:
                for v, w in vertical[u]:
                    if v in occupied:
                        continue
                    nd = d + w
                    if nd < dist[v]:
                        dist[v] = nd
                        push(heap, (nd, v))
        return dist

    def path(
        self,
        mask: int,
        src: int,
        dst: int,
        occupied: frozenset[int] | set[int] = frozenset(),
    ) -> tuple[tuple[int, ...], float] | None:
        """Cheapest route src -> dst avoiding occupied cells, or None."""
        if src == dst:
            return (src,), 0.0
        if dst in occupied:
            return None
        dist = [INF] * self.n
        dist[src] = 0.0
        parent = [-1] * self.n
        heap = [(0.0, src)]
        xy = self.xy
        vertical = self.vertical
        push = heapq.heappush
        pop = heapq.heappop
        while heap:
            d, u = pop(heap)
            if u == dst:
                break
            if d > dist[u]:
                continue
            edges = xy[u] if not mask >> u & 1 else xy[u] + vertical[u]
            for v, w in edges:
                if v in occupied:
                    continue
                nd = d + w
                if nd < dist[v]:
                    dist[v] = nd
                    parent[v] = u
                    push(heap, (nd, v))
        if parent[dst] == -1:
            return None
        cells = [dst]
        while cells[-1] != src:
            cells.append(parent[cells[-1]])
        cells.reverse()
        return tuple(cells), dist[dst]

    def distance_sum(self, mask: int, src: int) -> float:
        """Sum of empty-warehouse route costs from src to every cell.

        Returns INF when any cell is unreachable. For strictly positive
        weights this equals the simulated f_speed: every cell on a cheapest
        route to a destination has a strictly smaller empty distance, so
        the farthest-first plan never parks a load on a later route.
        """
        if self.uniform:
            # uniform weights: plain BFS on hop counts, scaled once
            dist = [-1] * self.n
            dist[src] = 0
            queue = deque((src,))
            xy = self.xy
            vertical = self.vertical
            seen = 1
            total = 0
            while queue:
                u = queue.popleft()
                du = dist[u] + 1
                for v, _w in xy[u]:
                    if dist[v] < 0:
                        dist[v] = du
                        total += du
                        seen += 1
                        queue.append(v)
                if mask >> u & 1:
                    for v, _w in vertical[u]:
                        if dist[v] < 0:
                            dist[v] = du
                            total += du
                            seen += 1
                            queue.append(v)
            if seen < self.n:
                return INF
            return total * self.weights.wx
        dist = self.distances(mask, src)
        return sum(dist)


def kinds_mask(kinds: Sequence[CellKind]) -> int:
    """Bitmask form of a kind sequence (bit i = cell i is three-axis)."""
    mask = 0
    for i, kind in enumerate(kinds):
        if kind is CellKind.THREE_AXIS:
            mask |= 1 << i
    return mask


def _checked(cfg: WarehouseConfig) -> None:
    problems = cfg.validate()
    if problems:
        raise ConfigError("; ".join(problems))


def shortest_path(
    cfg: WarehouseConfig,
    start: Coord,
    goal: Coord,
    occupied: Iterable[Coord] = (),
    weights: MoveWeights = MoveWeights(),
) -> PathResult | None:
    """Cheapest route between two cells avoiding occupied cells.

    Returns None when no route exists. Cost ties are settled toward the
    lexicographically smaller (z, y, x) successor.
    """
    _checked(cfg)
    engine = GridPaths(cfg.dims, weights)
    blocked = frozenset(engine.index(c) for c in occupied)
    src = engine.index(start)
    if src in blocked:
        raise ValueError(f"start cell {start!r} is occupied")
    found = engine.path(kinds_mask(cfg.kinds), src, engine.index(goal), blocked)
    if found is None:
        return None
    cells, cost = found
    return PathResult(cells=tuple(engine.coord(i) for i in cells), cost=cost)


def loading_plan(cfg: WarehouseConfig, weights: MoveWeights = MoveWeights()) -> LoadingPlan:
    """Destination order: farthest first by empty-warehouse route cost.

    Distance ties are filled higher-z first, then higher y, then higher x.
    The loading cell itself is always the final destination.
    """
    _checked(cfg)
    engine = GridPaths(cfg.dims, weights)
    src = engine.index(cfg.loading)
    dist = engine.distances(kinds_mask(cfg.kinds), src)
    unreachable = tuple(engine.coord(i) for i in range(engine.n) if dist[i] == INF)
    reachable = [i for i in range(engine.n) if dist[i] != INF and i != src]
    reachable.sort(key=lambda i: (-dist[i], -i))
    order = tuple(engine.coord(i) for i in reachable) + (cfg.loading,)
    distances = {engine.coord(i): dist[i] for i in range(engine.n) if dist[i] != INF}
    return LoadingPlan(order=order, distances=distances, unreachable=unreachable)


def simulate_loading(
    cfg: WarehouseConfig, weights: MoveWeights = MoveWeights()
) -> SimReport:
    """Fill every cell in plan order, one load at a time.

    Each load takes the cheapest currently-free route from the loading
    cell. The first destination that cannot be reached at its turn makes
    the whole configuration infeasible (loads are never reordered). The
    final load occupies the loading cell at cost zero.
    """
    plan = loading_plan(cfg, weights)
    if not plan.feasible:
        return SimReport(loads=(), f_speed=None)
    engine = GridPaths(cfg.dims, weights)
    mask = kinds_mask(cfg.kinds)
    src = engine.index(cfg.loading)
    occupied: set[int] = set()
    loads: list[LoadStep] = []
    total = 0.0
    for dest in plan.order:
        dst = engine.index(dest)
        found = engine.path(mask, src, dst, occupied)
        if found is None:
            return SimReport(loads=tuple(loads), f_speed=None)
        cells, cost = found
        loads.append(
            LoadStep(
                destination=dest,
                path=tuple(engine.coord(i) for i in cells),
                cost=cost,
            )
        )
        total += cost
        occupied.add(dst)
    return SimReport(loads=tuple(loads), f_speed=total)


def empty_distance_sum(cfg: WarehouseConfig, weights: MoveWeights = MoveWeights()) -> float:
    """Sum of empty-warehouse route costs to all cells (INF if any unreachable)."""
    _checked(cfg)
    engine = GridPaths(cfg.dims, weights)
    return engine.distance_sum(kinds_mask(cfg.kinds), engine.index(cfg.loading))
