"""Grid model for warehouses assembled from cubic transport-storage cells.

A warehouse is a dense cuboid of cells. Every cell can hand a load to a
face-adjacent neighbour along X or Y; only three-axis cells can also move
loads up or down. Cell placement is addressed with zero-based (x, y, z)
coordinates, and linear cell order runs x-fastest, then y, then z.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Sequence

Coord = tuple[int, int, int]

# Face numbering on a cell: 1 +X, 2 -X, 3 +Y, 4 -Y, 5 +Z, 6 -Z.
FACES: tuple[int, ...] = (1, 2, 3, 4, 5, 6)

FACE_DIRECTIONS: dict[int, Coord] = {
    1: (1, 0, 0),
    2: (-1, 0, 0),
    3: (0, 1, 0),
    4: (0, -1, 0),
    5: (0, 0, 1),
    6: (0, 0, -1),
}

_FACE_AXIS = {1: 0, 2: 0, 3: 1, 4: 1, 5: 2, 6: 2}


class ConfigError(ValueError):
    """Raised when a warehouse description cannot be parsed or is invalid."""


def face_direction(face: int) -> Coord:
    """Unit displacement of the given face index."""
    try:
        return FACE_DIRECTIONS[face]
    except KeyError:
        raise ValueError(f"invalid face index {face!r}, expected 1..6") from None


def opposite_face(face: int) -> int:
    """The face that touches `face` on an adjacent cell."""
    if face not in FACE_DIRECTIONS:
        raise ValueError(f"invalid face index {face!r}, expected 1..6")
    return face + 1 if face % 2 == 1 else face - 1


def face_axis(face: int) -> int:
    """Axis (0=x, 1=y, 2=z) that the face moves along."""
    if face not in _FACE_AXIS:
        raise ValueError(f"invalid face index {face!r}, expected 1..6")
    return _FACE_AXIS[face]


class CellKind(Enum):
    """Cell build level. The enum value doubles as the serialized character."""

    TWO_AXIS = "D"
    THREE_AXIS = "T"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


@dataclass(frozen=True)
class MoveWeights:
    """Per-axis cost of one inter-cell transfer."""

    wx: float = 1.0
    wy: float = 1.0
    wz: float = 1.0

    def __post_init__(self) -> None:
        for name, value in (("wx", self.wx), ("wy", self.wy), ("wz", self.wz)):
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and nonnegative, got {value!r}")

    def axis_weight(self, axis: int) -> float:
        return (self.wx, self.wy, self.wz)[axis]

    @property
    def all_positive(self) -> bool:
        return self.wx > 0 and self.wy > 0 and self.wz > 0


@dataclass(frozen=True)
class WarehouseConfig:
    """Cuboid warehouse: dimensions, per-cell kinds, loading cell."""

    dims: Coord
    kinds: tuple[CellKind, ...]
    loading: Coord = (0, 0, 0)

    @classmethod
    def uniform(cls, dims: Coord, kind: CellKind, loading: Coord = (0, 0, 0)) -> "WarehouseConfig":
        nx, ny, nz = dims
        return cls(dims=tuple(dims), kinds=(kind,) * (nx * ny * nz), loading=tuple(loading))

    @classmethod
    def from_kinds_string(
        cls, dims: Coord, cells: str, loading: Coord = (0, 0, 0)
    ) -> "WarehouseConfig":
        try:
            kinds = tuple(CellKind(c) for c in cells)
        except ValueError as exc:
            raise ConfigError(f"cells string: {exc}") from None
        return cls(dims=tuple(dims), kinds=kinds, loading=tuple(loading))

    @property
    def cell_count(self) -> int:
        nx, ny, nz = self.dims
        return nx * ny * nz

    def index(self, coord: Coord) -> int:
        """Linear index of a coordinate (x-fastest, then y, then z)."""
        x, y, z = coord
        nx, ny, _ = self.dims
        return x + nx * (y + ny * z)

    def coord(self, index: int) -> Coord:
        nx, ny, _ = self.dims
        x = index % nx
        y = (index // nx) % ny
        z = index // (nx * ny)
        return (x, y, z)

    def kind_at(self, coord: Coord) -> CellKind:
        return self.kinds[self.index(coord)]

    def in_bounds(self, coord: Coord) -> bool:
        return all(0 <= c < d for c, d in zip(coord, self.dims))

    def iter_coords(self) -> Iterator[Coord]:
        """All cell coordinates in linear (x-fastest) order."""
        nx, ny, nz = self.dims
        for z in range(nz):
            for y in range(ny):
                for x in range(nx):
                    yield (x, y, z)

    def kinds_string(self) -> str:
        return "".join(k.value for k in self.kinds)

    @property
    def triaxial_count(self) -> int:
        return sum(1 for k in self.kinds if k is CellKind.THREE_AXIS)

    def with_kind(self, coord: Coord, kind: CellKind) -> "WarehouseConfig":
        """Copy of this config with one cell replaced."""
        i = self.index(coord)
        kinds = self.kinds[:i] + (kind,) + self.kinds[i + 1 :]
        return WarehouseConfig(dims=self.dims, kinds=kinds, loading=self.loading)

    def validate(self) -> list[str]:
        """Check structural invariants. Returns a list of violations, empty if valid."""
        problems: list[str] = []
        if len(self.dims) != 3 or any(not isinstance(d, int) or d < 1 for d in self.dims):
            problems.append(f"dims must be three positive integers, got {self.dims!r}")
            return problems
        expected = self.cell_count
        if len(self.kinds) != expected:
            problems.append(
                f"kinds length {len(self.kinds)} does not match cell count {expected}"
            )
        if any(not isinstance(k, CellKind) for k in self.kinds):
            problems.append("kinds must all be CellKind values")
        if len(self.loading) != 3 or not self.in_bounds(self.loading):
            problems.append(
                f"loading out of bounds: {self.loading!r} not inside dims {self.dims!r}"
            )
        return problems

    def to_json_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "loading": list(self.loading),
            "cells": self.kinds_string(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json_dict(cls, data: dict) -> "WarehouseConfig":
        if not isinstance(data, dict):
            raise ConfigError("config document must be a JSON object")
        missing = [key for key in ("dims", "loading", "cells") if key not in data]
        if missing:
            raise ConfigError(f"config document missing keys: {', '.join(missing)}")
        dims = data["dims"]
        loading = data["loading"]
        cells = data["cells"]
        if not isinstance(dims, list) or len(dims) != 3:
            raise ConfigError(f"dims must be a list of three integers, got {dims!r}")
        if not isinstance(loading, list) or len(loading) != 3:
            raise ConfigError(f"loading must be a list of three integers, got {loading!r}")
        if not isinstance(cells, str):
            raise ConfigError("cells must be a string of 'T'/'D' characters")
        cfg = cls.from_kinds_string(tuple(dims), cells, tuple(loading))
        problems = cfg.validate()
        if problems:
            raise ConfigError("; ".join(problems))
        return cfg

    @classmethod
    def from_json(cls, text: str) -> "WarehouseConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config JSON parse error at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
        return cls.from_json_dict(data)


def capability_graph(
    cfg: WarehouseConfig, weights: MoveWeights = MoveWeights()
) -> dict[Coord, list[tuple[Coord, float]]]:
    """Directed transfer graph over cell coordinates.

    X and Y edges exist between all face-adjacent cells in both directions.
    Z edges (up and down) exist only when the source cell is three-axis.
    Successor lists are ordered by the successor's linear index, which is
    lexicographic (z, y, x) ascending.
    """
    graph: dict[Coord, list[tuple[Coord, float]]] = {}
    nx, ny, nz = cfg.dims
    for coord in cfg.iter_coords():
        x, y, z = coord
        out: list[tuple[Coord, float]] = []
        if z > 0 and cfg.kind_at(coord) is CellKind.THREE_AXIS:
            out.append(((x, y, z - 1), weights.wz))
        if y > 0:
            out.append(((x, y - 1, z), weights.wy))
        if x > 0:
            out.append(((x - 1, y, z), weights.wx))
        if x < nx - 1:
            out.append(((x + 1, y, z), weights.wx))
        if y < ny - 1:
            out.append(((x, y + 1, z), weights.wy))
        if z < nz - 1 and cfg.kind_at(coord) is CellKind.THREE_AXIS:
            out.append(((x, y, z + 1), weights.wz))
        graph[coord] = out
    return graph
