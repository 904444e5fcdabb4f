"""Deterministic simulator and optimizer for warehouses built from
self-propelled cubic storage cells.

The package splits into the data model (`model`), the mesh flooding
protocol and map reconstruction (`mesh`, `wire`), the sequential loading
simulation (`loading`), the two-criteria objective (`objective`), the
configuration searches (`optimize`), figure rendering (`plots`), and the
command line front end (`cli`).
"""

from .loading import (
    GridPaths,
    LoadingPlan,
    LoadStep,
    PathResult,
    SimReport,
    empty_distance_sum,
    loading_plan,
    shortest_path,
    simulate_loading,
)
from .mesh import (
    AddressingPacket,
    HopRecord,
    Link,
    LinkTopology,
    MapInconsistency,
    MeshSimulation,
    RouteSet,
    TopologyError,
    TopologyFault,
    TopologyMap,
    build_map,
    grid_topology,
    neighbor_discovery,
    run_flood,
)
from .model import (
    FACES,
    CellKind,
    ConfigError,
    MoveWeights,
    WarehouseConfig,
    capability_graph,
    face_axis,
    face_direction,
    opposite_face,
)
from .objective import (
    CostModel,
    Evaluation,
    ObjectiveParams,
    display_round,
    evaluate,
    objective,
    self_norms,
    warehouse_cost,
)
from .optimize import (
    ParetoPoint,
    SearchParams,
    SearchResult,
    SizeGuardError,
    anneal,
    column_scan,
    exhaustive,
    pareto,
    search,
)
from .wire import FrameError, crc16_ccitt_false, decode_frame, decode_stream, encode_frame

__version__ = "0.1.0"

__all__ = [
    "AddressingPacket",
    "CellKind",
    "ConfigError",
    "CostModel",
    "Evaluation",
    "FACES",
    "FrameError",
    "GridPaths",
    "HopRecord",
    "Link",
    "LinkTopology",
    "LoadStep",
    "LoadingPlan",
    "MapInconsistency",
    "MeshSimulation",
    "MoveWeights",
    "ObjectiveParams",
    "ParetoPoint",
    "PathResult",
    "RouteSet",
    "SearchParams",
    "SearchResult",
    "SimReport",
    "SizeGuardError",
    "TopologyError",
    "TopologyFault",
    "TopologyMap",
    "WarehouseConfig",
    "anneal",
    "build_map",
    "capability_graph",
    "column_scan",
    "crc16_ccitt_false",
    "decode_frame",
    "decode_stream",
    "display_round",
    "empty_distance_sum",
    "encode_frame",
    "evaluate",
    "exhaustive",
    "face_axis",
    "face_direction",
    "grid_topology",
    "loading_plan",
    "neighbor_discovery",
    "objective",
    "opposite_face",
    "pareto",
    "run_flood",
    "search",
    "self_norms",
    "shortest_path",
    "simulate_loading",
    "warehouse_cost",
    "__version__",
]
