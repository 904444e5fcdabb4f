"""Mesh addressing protocol: flood simulation, route discovery, map building.

Every cell carries a 96-bit id and up to six links, one per face. A cell
starts a discovery flood by sending a one-record packet out of every
connected face. Receivers append themselves and forward everywhere except
the ingress face. A packet returning to its originator is stored as a
route; a packet revisiting any other cell already on its record list is a
crisscross and is dropped.

Delivery uses a single global FIFO queue. Packets emitted by one reception
are enqueued in ascending egress-face order, so identical inputs always
replay the same event sequence.
"""

from __future__ import annotations

import json
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .model import Coord, face_direction

logger = logging.getLogger(__name__)

MAX_CELL_ID = (1 << 96) - 1


class TopologyError(ValueError):
    """Raised when a link topology is malformed or cannot be parsed."""


class TopologyFault(RuntimeError):
    """Raised when discovery observes receptions that contradict each other."""


class MapInconsistency(RuntimeError):
    """Raised when adjacency claims cannot be embedded in a cubic grid."""


def cell_id_to_hex(cell: int) -> str:
    return format(cell, "024x")


def cell_id_from_hex(text: str) -> int:
    try:
        cell = int(text, 16)
    except (TypeError, ValueError):
        raise TopologyError(f"invalid cell id {text!r}, expected hex digits") from None
    if not 0 <= cell <= MAX_CELL_ID:
        raise TopologyError(f"cell id {text!r} does not fit in 96 bits")
    return cell


class HopRecord(NamedTuple):
    """One packet record: the cell traversed and the face it forwarded on."""

    cell: int
    egress: int


@dataclass(frozen=True)
class AddressingPacket:
    """Immutable record list carried by one discovery packet."""

    records: tuple[HopRecord, ...]

    @classmethod
    def initial(cls, origin: int, egress: int) -> "AddressingPacket":
        return cls((HopRecord(origin, egress),))

    @property
    def origin(self) -> int:
        return self.records[0].cell

    def cells(self) -> tuple[int, ...]:
        return tuple(r.cell for r in self.records)

    def carries(self, cell: int) -> bool:
        return any(r.cell == cell for r in self.records)

    def extended(self, cell: int, egress: int) -> "AddressingPacket":
        return AddressingPacket(self.records + (HopRecord(cell, egress),))

    def problems(self) -> list[str]:
        out = []
        if not self.records:
            out.append("packet has no records")
        for rec in self.records:
            if not 0 <= rec.cell <= MAX_CELL_ID:
                out.append(f"record cell id {rec.cell!r} out of range")
            if rec.egress not in (1, 2, 3, 4, 5, 6):
                out.append(f"record egress face {rec.egress!r} out of range 1..6")
        return out


@dataclass(frozen=True)
class Link:
    """Symmetric wire between face `fa` of cell `a` and face `fb` of cell `b`."""

    a: int
    fa: int
    b: int
    fb: int


@dataclass(frozen=True)
class LinkTopology:
    """Cells and the physical links between their faces."""

    cells: tuple[int, ...]
    links: tuple[Link, ...]

    def validate(self) -> list[str]:
        problems: list[str] = []
        seen_cells = set()
        for cell in self.cells:
            if not 0 <= cell <= MAX_CELL_ID:
                problems.append(f"cell id {cell!r} out of 96-bit range")
            if cell in seen_cells:
                problems.append(f"duplicate cell id {cell_id_to_hex(cell)}")
            seen_cells.add(cell)
        used_ports: set[tuple[int, int]] = set()
        for link in self.links:
            for cell, face in ((link.a, link.fa), (link.b, link.fb)):
                if face not in (1, 2, 3, 4, 5, 6):
                    problems.append(f"link face {face!r} out of range 1..6")
                if cell not in seen_cells:
                    problems.append(f"link references unknown cell {cell_id_to_hex(cell)}")
                if (cell, face) in used_ports:
                    problems.append(
                        f"port used twice: cell {cell_id_to_hex(cell)} face {face}"
                    )
                used_ports.add((cell, face))
            if link.a == link.b:
                problems.append(f"link connects cell {cell_id_to_hex(link.a)} to itself")
        return problems

    def port_map(self) -> dict[tuple[int, int], tuple[int, int]]:
        """(cell, face) -> (peer, peer face). Raises TopologyError on reused ports."""
        ports: dict[tuple[int, int], tuple[int, int]] = {}
        for link in self.links:
            for (cell, face), peer in (
                ((link.a, link.fa), (link.b, link.fb)),
                ((link.b, link.fb), (link.a, link.fa)),
            ):
                if (cell, face) in ports:
                    raise TopologyError(
                        f"port used twice: cell {cell_id_to_hex(cell)} face {face}"
                    )
                ports[(cell, face)] = peer
        return ports

    def to_json_dict(self) -> dict:
        return {
            "cells": [{"id": cell_id_to_hex(c)} for c in self.cells],
            "links": [
                {"a": cell_id_to_hex(l.a), "fa": l.fa, "b": cell_id_to_hex(l.b), "fb": l.fb}
                for l in self.links
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json_dict(cls, data: dict) -> "LinkTopology":
        if not isinstance(data, dict) or "cells" not in data or "links" not in data:
            raise TopologyError("topology document must contain 'cells' and 'links'")
        cells = []
        for entry in data["cells"]:
            if not isinstance(entry, dict) or "id" not in entry:
                raise TopologyError(f"cell entry must be an object with 'id', got {entry!r}")
            cells.append(cell_id_from_hex(entry["id"]))
        links = []
        for entry in data["links"]:
            try:
                links.append(
                    Link(
                        a=cell_id_from_hex(entry["a"]),
                        fa=int(entry["fa"]),
                        b=cell_id_from_hex(entry["b"]),
                        fb=int(entry["fb"]),
                    )
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise TopologyError(f"bad link entry {entry!r}: {exc}") from None
        # structural parsing only; wiring mistakes are validate()'s business
        return cls(cells=tuple(cells), links=tuple(links))

    @classmethod
    def from_json(cls, text: str) -> "LinkTopology":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise TopologyError(
                f"topology JSON parse error at line {exc.lineno} column {exc.colno}: {exc.msg}"
            ) from None
        return cls.from_json_dict(data)


@dataclass
class CellState:
    """Mutable per-cell protocol state during a simulation."""

    cell: int
    faces: tuple[int, ...]
    routes: list[AddressingPacket] = field(default_factory=list)
    crisscross: int = 0


@dataclass(frozen=True)
class PacketDecision:
    """Outcome of one packet reception."""

    kind: str  # "store" | "crisscross" | "expired" | "forward" | "error"
    forwards: tuple[tuple[int, AddressingPacket], ...] = ()
    reason: str = ""


def handle_packet(
    state: CellState,
    ingress: int,
    packet: AddressingPacket,
    hop_limit: int | None = None,
) -> PacketDecision:
    """Apply the reception rules to one packet arriving at one cell.

    Order of checks: own returning packet is stored; a packet that already
    visited this cell is a crisscross; a packet at the hop limit expires;
    anything else is forwarded on every connected face except the ingress.
    """
    problems = packet.problems()
    if problems:
        logger.warning("cell %s dropped malformed packet: %s",
                       cell_id_to_hex(state.cell), "; ".join(problems))
        return PacketDecision(kind="error", reason="; ".join(problems))
    if packet.origin == state.cell:
        state.routes.append(packet)
        return PacketDecision(kind="store")
    if packet.carries(state.cell):
        state.crisscross += 1
        return PacketDecision(kind="crisscross")
    if hop_limit is not None and len(packet.records) >= hop_limit:
        return PacketDecision(kind="expired")
    forwards = tuple(
        (face, packet.extended(state.cell, face))
        for face in state.faces
        if face != ingress
    )
    return PacketDecision(kind="forward", forwards=forwards)


@dataclass(frozen=True)
class RouteSet:
    """Routes stored at one origin after a flood settles.

    `discards` keeps the crisscrossed packets with the cell that dropped
    them; it is diagnostic state and is not serialized.
    """

    origin: int
    routes: tuple[AddressingPacket, ...]
    discards: tuple[tuple[AddressingPacket, int], ...] = ()
    expired: int = 0

    @property
    def rejected(self) -> int:
        return len(self.discards)

    def route_cells(self) -> list[tuple[int, ...]]:
        """Each route as the cell sequence it traversed (origin first)."""
        return [route.cells() for route in self.routes]

    def to_json_dict(self) -> dict:
        return {
            "origin": cell_id_to_hex(self.origin),
            "rejected": self.rejected,
            "routes": [
                [{"cell": cell_id_to_hex(r.cell), "egress": r.egress} for r in route.records]
                for route in self.routes
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


class MeshSimulation:
    """Deterministic flood simulator over one link topology."""

    def __init__(self, topology: LinkTopology, hop_limit: int | None = None):
        if hop_limit is not None and hop_limit < 1:
            raise ValueError(f"hop limit must be positive, got {hop_limit!r}")
        self.topology = topology
        self.hop_limit = hop_limit
        self.ports = topology.port_map()
        faces_by_cell: dict[int, list[int]] = {cell: [] for cell in topology.cells}
        for cell, face in self.ports:
            faces_by_cell[cell].append(face)
        self.states = {
            cell: CellState(cell=cell, faces=tuple(sorted(faces)))
            for cell, faces in faces_by_cell.items()
        }
        self.route_sets: dict[int, RouteSet] = {}

    def flood(self, origin: int) -> RouteSet:
        """Flood from `origin` until the event queue drains; store its routes."""
        state = self._state(origin)
        state.routes.clear()
        routes: list[AddressingPacket] = []
        discards: list[tuple[AddressingPacket, int]] = []
        expired = 0
        queue: deque[tuple[int, int, AddressingPacket]] = deque()
        for face in state.faces:
            peer, peer_face = self.ports[(origin, face)]
            queue.append((peer, peer_face, AddressingPacket.initial(origin, face)))
        while queue:
            dest, ingress, packet = queue.popleft()
            decision = handle_packet(self.states[dest], ingress, packet, self.hop_limit)
            if decision.kind == "store":
                routes.append(packet)
            elif decision.kind == "crisscross":
                discards.append((packet, dest))
            elif decision.kind == "expired":
                expired += 1
            elif decision.kind == "forward":
                for face, forwarded in decision.forwards:
                    peer, peer_face = self.ports[(dest, face)]
                    queue.append((peer, peer_face, forwarded))
        result = RouteSet(
            origin=origin,
            routes=tuple(routes),
            discards=tuple(discards),
            expired=expired,
        )
        self.route_sets[origin] = result
        return result

    def reinitiate(self, cell: int) -> RouteSet:
        """Reboot one cell: drop its stored routes and flood again."""
        self._state(cell)
        self.route_sets.pop(cell, None)
        return self.flood(cell)

    def _state(self, cell: int) -> CellState:
        try:
            return self.states[cell]
        except KeyError:
            raise ValueError(f"unknown cell id {cell_id_to_hex(cell)}") from None


def run_flood(topology: LinkTopology, origin: int, hop_limit: int | None = None) -> RouteSet:
    """Run one discovery flood on a fresh simulation and return its RouteSet."""
    return MeshSimulation(topology, hop_limit=hop_limit).flood(origin)


def neighbor_discovery(topology: LinkTopology) -> dict[tuple[int, int], int]:
    """Learn (cell, face) -> neighbour from one-hop floods of every cell.

    Each cell sends its one-record packet out of every connected face; the
    reception alone identifies the sender behind that face (the packet then
    expires at hop limit 1). Two senders claiming the same (cell, face) is a
    wiring fault.
    """
    adjacency: dict[tuple[int, int], int] = {}
    endpoints: dict[int, list[tuple[int, int, int]]] = {cell: [] for cell in topology.cells}
    for link in topology.links:
        if link.a not in endpoints or link.b not in endpoints:
            raise TopologyError("link references unknown cell")
        endpoints[link.a].append((link.fa, link.b, link.fb))
        endpoints[link.b].append((link.fb, link.a, link.fa))
    for cell in sorted(endpoints):
        for _egress, peer, peer_face in sorted(endpoints[cell]):
            key = (peer, peer_face)
            if key in adjacency and adjacency[key] != cell:
                raise TopologyFault(
                    f"face {peer_face} of cell {cell_id_to_hex(peer)} hears both "
                    f"{cell_id_to_hex(adjacency[key])} and {cell_id_to_hex(cell)}"
                )
            adjacency[key] = cell
    return adjacency


@dataclass(frozen=True)
class TopologyMap:
    """Relative cell coordinates reconstructed from adjacency claims."""

    root: int
    coords: dict[int, Coord]
    adjacency: dict[tuple[int, int], int]

    def to_json_dict(self) -> dict:
        return {
            "root": cell_id_to_hex(self.root),
            "coords": {
                cell_id_to_hex(cell): list(self.coords[cell]) for cell in sorted(self.coords)
            },
            "adjacency": [
                {
                    "cell": cell_id_to_hex(cell),
                    "face": face,
                    "neighbor": cell_id_to_hex(self.adjacency[(cell, face)]),
                }
                for cell, face in sorted(self.adjacency)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def build_map(adjacency: dict[tuple[int, int], int], root: int) -> TopologyMap:
    """Embed adjacency claims into grid coordinates, rooted at (0, 0, 0).

    Every claim is checked against coordinates already assigned; a claim
    that relocates a placed cell, or lands two cells on one coordinate,
    raises MapInconsistency. Cells unreachable from the root are left out.
    """
    by_cell: dict[int, list[tuple[int, int]]] = {}
    for (cell, face), neighbor in adjacency.items():
        by_cell.setdefault(cell, []).append((face, neighbor))
    for claims in by_cell.values():
        claims.sort()
    coords: dict[int, Coord] = {root: (0, 0, 0)}
    occupant: dict[Coord, int] = {(0, 0, 0): root}
    queue: deque[int] = deque([root])
    while queue:
        cell = queue.popleft()
        cx, cy, cz = coords[cell]
        for face, neighbor in by_cell.get(cell, ()):
            dx, dy, dz = face_direction(face)
            target = (cx + dx, cy + dy, cz + dz)
            placed = coords.get(neighbor)
            if placed is not None:
                if placed != target:
                    raise MapInconsistency(
                        f"cell {cell_id_to_hex(neighbor)} claimed at {target} via face "
                        f"{face} of {cell_id_to_hex(cell)}, but already placed at {placed}"
                    )
                continue
            if target in occupant:
                raise MapInconsistency(
                    f"cells {cell_id_to_hex(occupant[target])} and "
                    f"{cell_id_to_hex(neighbor)} both land on {target}"
                )
            coords[neighbor] = target
            occupant[target] = neighbor
            queue.append(neighbor)
    return TopologyMap(root=root, coords=coords, adjacency=dict(adjacency))


def grid_topology(dims: Coord, ids: Iterable[int] | None = None) -> LinkTopology:
    """Fully wired cuboid grid topology with face-true links.

    Cell ids default to 1..n in linear (x-fastest) order.
    """
    nx, ny, nz = dims
    count = nx * ny * nz
    if ids is None:
        cell_ids = list(range(1, count + 1))
    else:
        cell_ids = list(ids)
        if len(cell_ids) != count:
            raise ValueError(f"expected {count} ids, got {len(cell_ids)}")

    def cid(x: int, y: int, z: int) -> int:
        return cell_ids[x + nx * (y + ny * z)]

    links = []
    for z in range(nz):
        for y in range(ny):
            for x in range(nx):
                if x + 1 < nx:
                    links.append(Link(cid(x, y, z), 1, cid(x + 1, y, z), 2))
                if y + 1 < ny:
                    links.append(Link(cid(x, y, z), 3, cid(x, y + 1, z), 4))
                if z + 1 < nz:
                    links.append(Link(cid(x, y, z), 5, cid(x, y, z + 1), 6))
    return LinkTopology(cells=tuple(cell_ids), links=tuple(links))
