"""Command-line front end.

Exit codes: 0 success, 1 validation diagnostics, 2 parse error,
3 query-domain error, 4 unknown target, 5 persistence error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Callable, Sequence, TextIO

from . import bundled_path
from .concept_tree import ConceptTreeStore
from .concept_tree import render_view as render_trees
from .ensemble import EnsembleStore, format_keys
from .ensemble import render_view as render_ensembles
from .export import to_dot, to_json
from .network import SymNetwork, node_for_concept, validate
from .paths import (
    DEFAULT_MAX_LENGTH,
    NotACycleConceptError,
    Schedule,
    dead_ends,
    derive_schedule,
    enumerate_cycles,
    shortest_cycles,
)
from .registry import activate, query_horn
from .script_io import CplScript, ScriptParseError, parse_cpl
from .workspace import DuplicateKeyError, PersistenceError, Workspace, dumps, loads

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARSE = 2
EXIT_QUERY = 3
EXIT_TARGET = 4
EXIT_PERSIST = 5


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    p = Path(path)
    if not p.is_file():
        raise CliError(EXIT_TARGET, f"unknown target {path!r}")
    return p.read_text(encoding="utf-8")


def resolve_script(ws: Workspace, target: str) -> CplScript:
    """A stored script name, ``@bundled_name``, or a path to a CPL file."""
    if target in ws.scripts:
        return ws.scripts[target]
    if target.startswith("@"):
        try:
            path = bundled_path(target[1:] + ".cpl")
        except FileNotFoundError:
            raise CliError(EXIT_TARGET, f"unknown bundled script {target!r}") from None
        text = path.read_text(encoding="utf-8")
    else:
        text = _read(target)
    try:
        return parse_cpl(text)
    except ScriptParseError as exc:
        raise CliError(EXIT_PARSE, f"{target}: {exc}") from None


def _network(ws: Workspace, target: str) -> tuple[CplScript, SymNetwork]:
    script = resolve_script(ws, target)
    if not script.triples:
        raise CliError(EXIT_PARSE, f"{target}: script has no steps")
    if ws.scripts.get(script.name) == script:
        return script, ws.networks[script.name]
    return script, ws.add_script(script)


def format_schedule(schedule: Schedule) -> str:
    lines = [
        f"{s.index}. " + " - ".join(c.label for c in s.realized) for s in schedule.steps
    ]
    lines.append(f"{len(schedule.steps) + 1}. all concepts realized")
    return "\n".join(lines) + "\n"


def _ids(nodes) -> str:
    ids = sorted(n.id for n in nodes)
    return f"{len(ids)}" + (" (" + " ".join(ids) + ")" if ids else "")


def cmd_build(args, ws: Workspace, out: TextIO) -> int:
    script, network = _network(ws, args.target)
    diagnostics = validate(network)
    out.write(f"script: {script.name}\n")
    out.write(f"role nodes: {len(network.layer(0))}\n")
    out.write(f"shared concepts: {_ids(network.layer(1))}\n")
    out.write(f"triples: {len(network.layer(2))}\n")
    out.write(f"upper shared: {_ids(network.layer(3))}\n")
    out.write(f"dead ends: {_ids(dead_ends(network))}\n")
    if diagnostics:
        for d in diagnostics:
            out.write(f"diagnostic: {d}\n")
        return EXIT_INVALID
    out.write("validation: ok\n")
    return EXIT_OK


def cmd_cycles(args, ws: Workspace, out: TextIO) -> int:
    _, network = _network(ws, args.target)
    if args.concept is None:
        for c in enumerate_cycles(network, args.max_cycle_len):
            out.write(str(c) + "\n")
        return EXIT_OK
    try:
        cycles = shortest_cycles(network, args.concept)
    except NotACycleConceptError as exc:
        raise CliError(EXIT_QUERY, f"not a cycle concept: {exc}") from None
    start = node_for_concept(network, args.concept)
    for c in cycles:
        out.write(" ".join(c.starting_at(start.id)) + "\n")
    return EXIT_OK


def cmd_schedule(args, ws: Workspace, out: TextIO) -> int:
    script, network = _network(ws, args.target)
    out.write(format_schedule(derive_schedule(network, script)))
    return EXIT_OK


def cmd_ingest(args, ws: Workspace, out: TextIO) -> int:
    text = _read(args.path)
    try:
        results = ws.ingest_text(text)
    except (ScriptParseError, DuplicateKeyError) as exc:
        raise CliError(EXIT_PARSE, f"{args.path}: {exc}") from None
    for part, e, t in results:
        out.write(
            f"{part.link_key.key}: ensemble {e.merge_kind} +{e.nodes_created}, "
            f"trees {t.merge_kind} +{t.nodes_created}\n"
        )
    return EXIT_OK


def cmd_view(args, ws: Workspace, out: TextIO) -> int:
    if args.level == "ensemble":
        out.write(render_ensembles(ws.ensembles, show_keys=True))
    else:
        out.write(render_trees(ws.trees, show_keys=True))
    return EXIT_OK


def _paths(roots) -> dict[int, str]:
    found = {}

    def walk(node, prefix: str) -> None:
        path = prefix + node.concept_label
        found[id(node)] = path
        for c in node.children:
            walk(c, path + "/")

    for r in roots:
        walk(r, "")
    return found


def _write_activation(result, ws: Workspace, out: TextIO) -> None:
    ens_paths = _paths(ws.ensembles.roots)
    tree_paths = _paths(ws.trees.trees)
    out.write(f"concept: {result.concept_label}\n")
    out.write(f"ensemble: {len(result.ensemble)}\n")
    for n in result.ensemble:
        out.write(f"  {ens_paths[id(n)]} {format_keys(n.keys)}\n")
    out.write(f"trees: {len(result.trees)}\n")
    for n in result.trees:
        out.write(f"  {tree_paths[id(n)]} {format_keys(n.keys)}\n")
    out.write(f"network: {result.network.id if result.network else 'none'}\n")


def _script_choice(args, ws: Workspace) -> str | None:
    if args.script is None:
        return ws.current_script
    if args.script not in ws.scripts:
        script = resolve_script(ws, args.script)
        ws.add_script(script)
        return script.name
    return args.script


def cmd_activate(args, ws: Workspace, out: TextIO) -> int:
    registry = ws.registry(_script_choice(args, ws))
    result = activate(registry, args.concept)
    if result.unknown:
        raise CliError(EXIT_QUERY, f"unknown concept {args.concept!r}")
    _write_activation(result, ws, out)
    return EXIT_OK


def cmd_query(args, ws: Workspace, out: TextIO) -> int:
    name = _script_choice(args, ws)
    result = query_horn(ws.registry(name), ws.networks.get(name) if name else None, set(args.concepts))
    for c in result.covering_cycles:
        out.write(f"cycle: {c}\n")
    for b in result.instance_bindings:
        out.write(
            f"binding: {b.concept_label} ensemble={len(b.ensemble)} trees={len(b.trees)} "
            f"network={b.network.id if b.network else 'none'}\n"
        )
    out.write(f"complete: {'yes' if result.complete else 'no'}\n")
    return EXIT_OK


def _emit(text: str, target: str | None, out: TextIO) -> None:
    if target is None:
        out.write(text)
    else:
        Path(target).write_text(text, encoding="utf-8")


def cmd_export(args, ws: Workspace, out: TextIO) -> int:
    _, network = _network(ws, args.target)
    fmt = args.export_format or args.format
    _emit(to_dot(network) if fmt == "dot" else to_json(network), args.output, out)
    return EXIT_OK


def cmd_report(args, ws: Workspace, out: TextIO) -> int:
    from .plotting import plot_network, plot_schedule

    script, network = _network(ws, args.target)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    stem = outdir / script.name
    schedule = derive_schedule(network, script)
    dead = dead_ends(network)
    written = [
        _write(stem.with_suffix(".json"), to_json(network)),
        _write(stem.with_suffix(".dot"), to_dot(network)),
        _write(Path(f"{stem}.cycles.txt"),
               "".join(str(c) + "\n" for c in enumerate_cycles(network, args.max_cycle_len))),
        _write(Path(f"{stem}.schedule.txt"), format_schedule(schedule)),
        plot_network(network, f"{stem}.network.png", {n.id for n in dead}),
        plot_schedule(schedule, f"{stem}.schedule.png", script.name),
    ]
    for p in written:
        out.write(f"{p}\n")
    return EXIT_OK


def _write(path: Path, text: str) -> Path:
    path.write_text(text, encoding="utf-8")
    return path


def cmd_save(args, ws: Workspace, out: TextIO) -> int:
    Path(args.path).write_text(dumps(ws), encoding="utf-8")
    return EXIT_OK


def cmd_load(args, ws: Workspace, out: TextIO) -> int:
    loaded = _load(args.path)
    ws.__dict__.update(loaded.__dict__)
    out.write(
        f"loaded {len(ws.log)} events, {len(ws.ensembles.roots)} ensembles, "
        f"{len(ws.trees.trees)} trees, {len(ws.scripts)} scripts\n"
    )
    return EXIT_OK


def _load(path: str) -> Workspace:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise CliError(EXIT_PERSIST, f"cannot read workspace {path!r}: {exc}") from None
    try:
        return loads(text)
    except PersistenceError as exc:
        raise CliError(EXIT_PERSIST, f"{path}: {exc}") from None


MUTATING = {"build", "cycles", "schedule", "ingest", "export", "report", "load", "activate", "query"}

COMMANDS: dict[str, Callable[..., int]] = {
    "build": cmd_build,
    "cycles": cmd_cycles,
    "schedule": cmd_schedule,
    "ingest": cmd_ingest,
    "view": cmd_view,
    "activate": cmd_activate,
    "query": cmd_query,
    "export": cmd_export,
    "report": cmd_report,
    "save": cmd_save,
    "load": cmd_load,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cogweave",
        description="Build layered concept networks from CPL scripts and ontology parts.",
    )
    parser.add_argument("--workspace", help="workspace file, loaded first and updated after each command")
    parser.add_argument("--max-cycle-len", type=int, default=DEFAULT_MAX_LENGTH,
                        help="longest cycle (in nodes) to enumerate (default %(default)s)")
    parser.add_argument("--format", choices=("dot", "json"), default="json",
                        help="export format (default %(default)s)")
    sub = parser.add_subparsers(dest="command", required=True)

    target_help = "CPL file, stored script name, or @bundled name"
    p = sub.add_parser("build", help="build a network and print its summary")
    p.add_argument("target", help=target_help)

    p = sub.add_parser("cycles", help="list cycles, or the shortest ones through a concept")
    p.add_argument("target", help=target_help)
    p.add_argument("--concept")

    p = sub.add_parser("schedule", help="derive the acquisition schedule")
    p.add_argument("target", help=target_help)

    p = sub.add_parser("ingest", help="present ontology parts to the stores")
    p.add_argument("path")

    p = sub.add_parser("view", help="print the ensemble or concept-tree store")
    p.add_argument("level", choices=("ensemble", "trees"))

    p = sub.add_parser("activate", help="list every instance of a concept type")
    p.add_argument("concept")
    p.add_argument("--script")

    p = sub.add_parser("query", help="cover concepts with shortest cycles and bind instances")
    p.add_argument("concepts", nargs="+")
    p.add_argument("--script")

    p = sub.add_parser("export", help="write a network as DOT or JSON")
    p.add_argument("target", help=target_help)
    p.add_argument("--format", dest="export_format", choices=("dot", "json"))
    p.add_argument("-o", "--output")

    p = sub.add_parser("report", help="write JSON, DOT, text listings and PNG figures")
    p.add_argument("target", help=target_help)
    p.add_argument("--out", default="report")

    p = sub.add_parser("save", help="write the workspace to a file")
    p.add_argument("path")

    p = sub.add_parser("load", help="read a saved workspace")
    p.add_argument("path")
    return parser


def main(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        if args.max_cycle_len < 4:
            raise CliError(EXIT_QUERY, "--max-cycle-len must be at least 4")
        ws = Workspace()
        if args.workspace and Path(args.workspace).exists():
            ws = _load(args.workspace)
        code = COMMANDS[args.command](args, ws, out)
        if args.workspace and args.command in MUTATING:
            Path(args.workspace).write_text(dumps(ws), encoding="utf-8")
        return code
    except CliError as exc:
        err.write(f"error: {exc}\n")
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
