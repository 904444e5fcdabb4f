"""Command line front end.

Subcommands:
  discover   flood a mesh topology, write routes and the reconstructed map
  evaluate   score one warehouse configuration
  optimize   search kind assignments for fixed dimensions
  sweep      optimize across several alpha values, emit a CSV/JSON table
  render     print per-layer grids plus the machine-readable config line

Exit codes:
  0  success
  2  usage errors, unreadable or invalid input files
  3  topology fault or map inconsistency
  4  configuration evaluates as infeasible
  5  search size guard tripped
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field

from .mesh import (
    LinkTopology,
    MapInconsistency,
    TopologyError,
    TopologyFault,
    build_map,
    neighbor_discovery,
    run_flood,
)
from .model import CellKind, ConfigError, Coord, MoveWeights, WarehouseConfig
from .objective import (
    CostModel,
    Evaluation,
    ObjectiveParams,
    display_round,
    evaluate,
    objective,
)
from .optimize import SearchParams, SearchResult, SizeGuardError, search
from .wire import encode_frame

OK = 0
USAGE = 2
FAULT = 3
INFEASIBLE = 4
GUARD = 5

COMMANDS = ("discover", "evaluate", "optimize", "render", "sweep")

ANSI = {CellKind.TWO_AXIS: "\x1b[32m", CellKind.THREE_AXIS: "\x1b[34m"}
ANSI_RESET = "\x1b[0m"


@dataclass(frozen=True)
class RunManifest:
    """What a CLI invocation read, wrote, and overrode."""

    command: str
    inputs: tuple[str, ...] = ()
    output: str | None = None
    overrides: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")

    def missing_inputs(self) -> list[str]:
        return [path for path in self.inputs if not os.path.isfile(path)]

    def to_json_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs": list(self.inputs),
            "output": self.output,
            "overrides": dict(sorted(self.overrides.items())),
        }


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _dump_json(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)


def _read_text(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


# ---------------------------------------------------------------------------
# argument parsing


def _dims_arg(text: str) -> Coord:
    parts = text.lower().split("x")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected NXxNYxNZ, got {text!r}")
    try:
        dims = tuple(int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected NXxNYxNZ, got {text!r}") from None
    if any(d < 1 for d in dims):
        raise argparse.ArgumentTypeError(f"dimensions must be >= 1, got {text!r}")
    return dims  # type: ignore[return-value]


def _coord_arg(text: str) -> Coord:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected x,y,z, got {text!r}")
    try:
        return tuple(int(p) for p in parts)  # type: ignore[return-value]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected x,y,z, got {text!r}") from None


def _weights_arg(text: str) -> MoveWeights:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected wx,wy,wz, got {text!r}")
    try:
        return MoveWeights(*(float(p) for p in parts))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _norms_arg(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected s,c, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected s,c, got {text!r}") from None


def _alphas_arg(text: str) -> tuple[float, ...]:
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise argparse.ArgumentTypeError("alphas list is empty")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated floats, got {text!r}") from None


def _row_arg(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected f_speed,f_cost, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected f_speed,f_cost, got {text!r}") from None


def _cell_id_arg(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a cell id, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("cell ids are non-negative")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="warecell",
        description="Deterministic warehouse-of-cells simulator and optimizer.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("discover", help="flood a topology and reconstruct its map")
    p.add_argument("topology", help="link topology JSON file")
    p.add_argument("--origin", type=_cell_id_arg, required=True, help="flooding cell id")
    p.add_argument("--hop-limit", type=int, default=None, help="max hops per packet")
    p.add_argument("--routes-out", default="routes.json", help="route set JSON path")
    p.add_argument("--map-out", default="map.json", help="topology map JSON path")
    p.add_argument("--packet-dump", default=None, help="binary dump of stored route frames")
    p.add_argument("--json", action="store_true", help="print machine-readable JSON")

    p = sub.add_parser("evaluate", help="score one configuration")
    p.add_argument("config", help="warehouse configuration JSON file")
    p.add_argument("--alpha", type=float, default=1.0, help="speed weight in [0,1]")
    p.add_argument("--weights", type=_weights_arg, default=MoveWeights(), metavar="WX,WY,WZ")
    p.add_argument("--norms", type=_norms_arg, default=None, metavar="S,C",
                   help="normalizing values; default: all-three-axis reference")
    p.add_argument("--out", default=None, help="write the evaluation JSON here too")
    p.add_argument("--json", action="store_true", help="print machine-readable JSON")

    p = sub.add_parser("optimize", help="search kind assignments")
    p.add_argument("--dims", type=_dims_arg, required=True, metavar="NXxNYxNZ")
    p.add_argument("--loading", type=_coord_arg, default=(0, 0, 0), metavar="X,Y,Z")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--weights", type=_weights_arg, default=MoveWeights(), metavar="WX,WY,WZ")
    p.add_argument("--norms", type=_norms_arg, default=None, metavar="S,C")
    p.add_argument("--mode", default="exhaustive",
                   choices=["exhaustive", "column-scan", "column_scan", "anneal"])
    p.add_argument("--seed", type=int, default=None, help="required for anneal mode")
    p.add_argument("--iterations", type=int, default=20000)
    p.add_argument("--t0", type=float, default=1.0)
    p.add_argument("--cooling", type=float, default=0.995)
    p.add_argument("--k", type=int, default=2, help="how many ranked results to keep")
    p.add_argument("--out", default=None, help="search result JSON path")
    p.add_argument("--trace", default=None, help="CSV of the running best objective")
    p.add_argument("--figure", default=None, help="Pareto front figure path (PNG)")
    p.add_argument("--json", action="store_true", help="print machine-readable JSON")

    p = sub.add_parser("sweep", help="optimize across alpha values")
    p.add_argument("--dims", type=_dims_arg, default=None, metavar="NXxNYxNZ")
    p.add_argument("--loading", type=_coord_arg, default=(0, 0, 0), metavar="X,Y,Z")
    p.add_argument("--alphas", type=_alphas_arg, required=True, metavar="A1,A2,...")
    p.add_argument("--weights", type=_weights_arg, default=MoveWeights(), metavar="WX,WY,WZ")
    p.add_argument("--norms", type=_norms_arg, default=None, metavar="S,C")
    p.add_argument("--mode", default="exhaustive",
                   choices=["exhaustive", "column-scan", "column_scan", "anneal"])
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--iterations", type=int, default=20000)
    p.add_argument("--t0", type=float, default=1.0)
    p.add_argument("--cooling", type=float, default=0.995)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--row", type=_row_arg, action="append", default=None,
                   metavar="F_SPEED,F_COST",
                   help="score fixed criterion pairs instead of searching; "
                        "repeatable, requires --norms")
    p.add_argument("--out", default=None, help="sweep JSON path")
    p.add_argument("--csv", default=None, help="sweep CSV path")
    p.add_argument("--figure", default=None, help="objective-vs-alpha figure path (PNG)")
    p.add_argument("--json", action="store_true", help="print machine-readable JSON")

    p = sub.add_parser("render", help="print per-layer grids")
    p.add_argument("config", help="warehouse configuration JSON file")
    p.add_argument("--color", action="store_true", help="ANSI colors: two-axis green, three-axis blue")
    p.add_argument("--figure", default=None, help="layer figure path (PNG)")
    p.add_argument("--json", action="store_true", help="print only the config JSON")

    return parser


# ---------------------------------------------------------------------------
# commands


def _load_config(path: str) -> WarehouseConfig | int:
    if not os.path.isfile(path):
        return _fail(USAGE, f"config file not found: {path}")
    try:
        cfg = WarehouseConfig.from_json(_read_text(path))
    except ConfigError as exc:
        return _fail(USAGE, f"invalid config {path}: {exc}")
    problems = cfg.validate()
    if problems:
        return _fail(USAGE, f"invalid config {path}: " + "; ".join(problems))
    return cfg


def _objective_params(alpha: float, norms: tuple[float, float] | None) -> ObjectiveParams | None:
    if norms is None:
        return None
    return ObjectiveParams(alpha=alpha, f_speed_norm=norms[0], f_cost_norm=norms[1])


def cmd_discover(args: argparse.Namespace) -> int:
    manifest = RunManifest(
        command="discover",
        inputs=(args.topology,),
        output=args.routes_out,
        overrides={"hop_limit": args.hop_limit, "origin": args.origin},
    )
    missing = manifest.missing_inputs()
    if missing:
        return _fail(USAGE, f"topology file not found: {missing[0]}")
    try:
        topology = LinkTopology.from_json(_read_text(args.topology))
    except TopologyError as exc:
        return _fail(USAGE, f"invalid topology {args.topology}: {exc}")
    problems = topology.validate()
    if problems:
        return _fail(FAULT, "topology fault: " + "; ".join(problems))
    if args.hop_limit is not None and args.hop_limit < 0:
        return _fail(USAGE, "hop limit must be >= 0")
    try:
        routes = run_flood(topology, args.origin, args.hop_limit)
        adjacency = neighbor_discovery(topology)
        topo_map = build_map(adjacency, args.origin)
    except ValueError as exc:
        return _fail(USAGE, str(exc))
    except (TopologyFault, MapInconsistency) as exc:
        return _fail(FAULT, str(exc))

    _write_text(args.routes_out, _dump_json(routes.to_json_dict()))
    _write_text(args.map_out, _dump_json(topo_map.to_json_dict()))
    if args.packet_dump:
        frames = b"".join(encode_frame(route.records) for route in routes.routes)
        with open(args.packet_dump, "wb") as handle:
            handle.write(frames)
    if args.json:
        doc = {
            "manifest": manifest.to_json_dict(),
            "map": topo_map.to_json_dict(),
            "routes": routes.to_json_dict(),
        }
        sys.stdout.write(_dump_json(doc))
    else:
        print(f"routes stored: {len(routes.routes)}")
        print(f"crisscross rejected: {routes.rejected}")
        print(f"cells mapped: {len(topo_map.coords)}")
        print(f"wrote {args.routes_out} and {args.map_out}")
    return OK


def _human_evaluation(ev: Evaluation) -> list[str]:
    lines = [f"triaxial: {ev.triaxial}"]
    if ev.f_speed is None:
        lines.append("f_speed: infeasible")
        lines.append(f"f_cost: {ev.f_cost}")
        lines.append("f_target: infeasible")
    else:
        lines.append(f"f_speed: {ev.f_speed}")
        lines.append(f"f_cost: {ev.f_cost}")
        lines.append(f"f_target: {display_round(ev.f_target)}")
    lines.append(f"alpha: {ev.alpha}")
    lines.append(f"norms: {ev.norms[0]},{ev.norms[1]}")
    return lines


def cmd_evaluate(args: argparse.Namespace) -> int:
    cfg = _load_config(args.config)
    if isinstance(cfg, int):
        return cfg
    try:
        params = _objective_params(args.alpha, args.norms)
        ev = evaluate(cfg, args.weights, CostModel(), params=params, alpha=args.alpha)
    except (ConfigError, ValueError) as exc:
        return _fail(USAGE, str(exc))
    doc = ev.to_json_dict()
    if args.out:
        _write_text(args.out, _dump_json(doc))
    if args.json:
        sys.stdout.write(_dump_json(doc))
    else:
        for line in _human_evaluation(ev):
            print(line)
    return OK if ev.feasible else INFEASIBLE


def _search_params(args: argparse.Namespace) -> SearchParams:
    return SearchParams(
        mode=args.mode,
        seed=args.seed,
        iterations=args.iterations,
        t0=args.t0,
        cooling=args.cooling,
        k=args.k,
    )


def _trace_csv(result: SearchResult) -> str:
    lines = ["step,best_f_target"]
    for step, value in enumerate(result.trace):
        cell = repr(value) if math.isfinite(value) else ""
        lines.append(f"{step},{cell}")
    return "\n".join(lines) + "\n"


def _human_search(result: SearchResult) -> list[str]:
    lines = []
    for rank, (cfg, ev) in enumerate(result.best, start=1):
        target = "infeasible" if ev.f_target is None else display_round(ev.f_target)
        lines.append(
            f"#{rank} kinds={cfg.kinds_string()} triaxial={ev.triaxial} "
            f"f_speed={ev.f_speed} f_cost={ev.f_cost} f_target={target}"
        )
    lines.append(f"pareto points: {len(result.pareto)}")
    return lines


def cmd_optimize(args: argparse.Namespace) -> int:
    manifest = RunManifest(
        command="optimize",
        output=args.out,
        overrides={
            "alpha": args.alpha,
            "mode": args.mode,
            "norms": list(args.norms) if args.norms else None,
            "seed": args.seed,
            "weights": [args.weights.wx, args.weights.wy, args.weights.wz],
        },
    )
    try:
        params = _objective_params(args.alpha, args.norms)
        search_params = _search_params(args)
        result = search(
            args.dims,
            args.loading,
            args.weights,
            CostModel(),
            params,
            search_params,
            alpha=args.alpha,
        )
    except SizeGuardError as exc:
        return _fail(GUARD, str(exc))
    except (ConfigError, ValueError) as exc:
        return _fail(USAGE, str(exc))
    doc = {"manifest": manifest.to_json_dict(), "result": result.to_json_dict()}
    if args.out:
        _write_text(args.out, _dump_json(doc))
    if args.trace:
        _write_text(args.trace, _trace_csv(result))
    if args.figure:
        from .plots import save_pareto_figure

        save_pareto_figure([(p.f_speed, p.f_cost) for p in result.pareto], args.figure)
    if args.json:
        sys.stdout.write(_dump_json(doc))
    else:
        for line in _human_search(result):
            print(line)
    return OK


def _sweep_sections_rows(
    alphas: tuple[float, ...],
    rows: list[tuple[float, float]],
    norms: tuple[float, float],
) -> list[dict]:
    sections = []
    for alpha in alphas:
        params = ObjectiveParams(alpha=alpha, f_speed_norm=norms[0], f_cost_norm=norms[1])
        body = []
        for f_speed, f_cost in rows:
            target = objective(f_speed, f_cost, params)
            body.append(
                {
                    "triaxial": None,
                    "f_speed": display_round(f_speed),
                    "f_cost": display_round(f_cost),
                    "f_target": display_round(target),
                }
            )
        sections.append({"alpha": alpha, "rows": body})
    return sections


def _sweep_sections_search(args: argparse.Namespace) -> list[dict]:
    sections = []
    for alpha in args.alphas:
        params = _objective_params(alpha, args.norms)
        result = search(
            args.dims,
            args.loading,
            args.weights,
            CostModel(),
            params,
            _search_params(args),
            alpha=alpha,
        )
        body = []
        for _cfg, ev in result.best:
            body.append(
                {
                    "triaxial": ev.triaxial,
                    "f_speed": None if ev.f_speed is None else display_round(ev.f_speed),
                    "f_cost": display_round(ev.f_cost),
                    "f_target": None if ev.f_target is None else display_round(ev.f_target),
                }
            )
        sections.append({"alpha": alpha, "rows": body})
    return sections


def _sweep_csv(sections: list[dict]) -> str:
    lines = ["alpha,triaxial,f_speed,f_cost,f_target"]
    for section in sections:
        for row in section["rows"]:
            cells = [str(section["alpha"])]
            for key in ("triaxial", "f_speed", "f_cost", "f_target"):
                value = row[key]
                cells.append("" if value is None else str(value))
            lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def cmd_sweep(args: argparse.Namespace) -> int:
    manifest = RunManifest(
        command="sweep",
        output=args.out,
        overrides={
            "alphas": list(args.alphas),
            "mode": args.mode,
            "norms": list(args.norms) if args.norms else None,
            "seed": args.seed,
        },
    )
    try:
        if args.row is not None:
            if args.norms is None:
                return _fail(USAGE, "--row mode requires --norms")
            for alpha in args.alphas:
                if not 0 <= alpha <= 1:
                    return _fail(USAGE, f"alpha must lie in [0, 1], got {alpha!r}")
            sections = _sweep_sections_rows(args.alphas, args.row, args.norms)
        else:
            if args.dims is None:
                return _fail(USAGE, "--dims is required unless --row is used")
            sections = _sweep_sections_search(args)
    except SizeGuardError as exc:
        return _fail(GUARD, str(exc))
    except (ConfigError, ValueError) as exc:
        return _fail(USAGE, str(exc))
    doc = {"manifest": manifest.to_json_dict(), "sections": sections}
    csv_text = _sweep_csv(sections)
    if args.out:
        _write_text(args.out, _dump_json(doc))
    if args.csv:
        _write_text(args.csv, csv_text)
    if args.figure:
        from .plots import save_sweep_figure

        best = [
            min(
                (r["f_target"] for r in s["rows"] if r["f_target"] is not None),
                default=math.nan,
            )
            for s in sections
        ]
        save_sweep_figure(list(args.alphas), best, args.figure)
    if args.json:
        sys.stdout.write(_dump_json(doc))
    else:
        sys.stdout.write(csv_text)
    return OK


def render_lines(cfg: WarehouseConfig, color: bool = False) -> list[str]:
    """Per-layer text grids; the loading cell letter gets an '@' suffix."""
    nx, ny, nz = cfg.dims
    lines: list[str] = []
    for z in range(nz):
        if z:
            lines.append("")
        lines.append(f"layer z={z}:")
        for y in range(ny):
            row = []
            for x in range(nx):
                kind = cfg.kind_at((x, y, z))
                letter = kind.value
                if color:
                    letter = f"{ANSI[kind]}{letter}{ANSI_RESET}"
                if (x, y, z) == cfg.loading:
                    letter += "@"
                row.append(letter)
            lines.append(" ".join(row))
    return lines


def cmd_render(args: argparse.Namespace) -> int:
    cfg = _load_config(args.config)
    if isinstance(cfg, int):
        return cfg
    if args.figure:
        from .plots import save_layer_figure

        save_layer_figure(cfg, args.figure)
    if args.json:
        print(cfg.to_json())
        return OK
    for line in render_lines(cfg, color=args.color):
        print(line)
    print()
    print(cfg.to_json())
    return OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "discover": cmd_discover,
        "evaluate": cmd_evaluate,
        "optimize": cmd_optimize,
        "sweep": cmd_sweep,
        "render": cmd_render,
    }
    return handlers[args.command](args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
