"""Cycle search, dead-end detection and schedule derivation.

Cycles run over the concept (layers 1 and 3) and triple (layer 2) nodes
only; role-type nodes would close spurious loops through mere role
co-membership. Every cycle therefore alternates concept and triple nodes.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .network import NetworkNode, SymNetwork, node_for_concept
from .script_io import ConceptSymbol, CplScript

DEFAULT_MAX_LENGTH = 8


class NotACycleConceptError(LookupError):
    """The concept has no layer-1 or layer-3 node, so no cycle can hold it."""


@dataclass(frozen=True)
class Cycle:
    nodes: tuple[NetworkNode, ...]

    @property
    def length(self) -> int:
        return len(self.nodes)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(n.id for n in self.nodes)

    def starting_at(self, node_id: str) -> tuple[str, ...]:
        """Node ids rotated to begin at ``node_id``, heading to its lesser neighbour."""
        ids = self.ids
        i = ids.index(node_id)
        rotated = ids[i:] + ids[:i]
        if len(rotated) > 2 and rotated[-1] < rotated[1]:
            rotated = (rotated[0],) + tuple(reversed(rotated[1:]))
        return rotated

    def __str__(self) -> str:
        return " ".join(self.ids)


@dataclass(frozen=True)
class ScheduleStep:
    index: int
    triple_ref: int
    realized: tuple[ConceptSymbol, ...]


@dataclass(frozen=True)
class Schedule:
    steps: tuple[ScheduleStep, ...]
    final_realized: tuple[ConceptSymbol, ...]
    final_marker: bool = True


def _cycle_graph(network: SymNetwork) -> dict[str, list[str]]:
    keep = {n.id for n in network.nodes if n.layer != 0}
    return {
        nid: [m for m in network.adjacency[nid] if m in keep] for nid in sorted(keep)
    }


def _cycles_from(graph: dict[str, list[str]], start: str, max_length: int) -> list[tuple[str, ...]]:
    """Canonical cycles whose least node id is ``start``."""
    found = []
    path = [start]
    on_path = {start}

    def extend(node: str) -> None:
        for nxt in graph[node]:
            if nxt == start:
                if len(path) >= 3 and path[1] < path[-1]:
                    found.append(tuple(path))
            elif nxt > start and nxt not in on_path and len(path) < max_length:
                path.append(nxt)
                on_path.add(nxt)
                extend(nxt)
                path.pop()
                on_path.discard(nxt)

    extend(start)
    return found


def _as_cycle(network: SymNetwork, ids: tuple[str, ...]) -> Cycle:
    return Cycle(tuple(network.by_id[i] for i in ids))


def enumerate_cycles(network: SymNetwork, max_length: int = DEFAULT_MAX_LENGTH) -> list[Cycle]:
    """All simple cycles of at most ``max_length`` nodes, canonical and sorted.

    Canonical form starts at the least node id and proceeds toward its
    lesser neighbour on the cycle.
    """
    if max_length < 4:
        raise ValueError("max_length must be at least 4")
    graph = _cycle_graph(network)
    ids = [c for start in graph for c in _cycles_from(graph, start, max_length)]
    ids.sort(key=lambda c: (len(c), c))
    return [_as_cycle(network, c) for c in ids]


def _canonical(ids: tuple[str, ...]) -> tuple[str, ...]:
    i = ids.index(min(ids))
    rotated = ids[i:] + ids[:i]
    if rotated[-1] < rotated[1]:
        rotated = (rotated[0],) + tuple(reversed(rotated[1:]))
    return rotated


def _cycles_through(graph: dict[str, list[str]], node: str, length: int) -> set[tuple[str, ...]]:
    found = set()
    path = [node]
    on_path = {node}

    def extend(current: str) -> None:
        for nxt in graph[current]:
            if nxt == node and len(path) == length:
                found.add(_canonical(tuple(path)))
            elif nxt not in on_path and len(path) < length:
                path.append(nxt)
                on_path.add(nxt)
                extend(nxt)
                path.pop()
                on_path.discard(nxt)

    extend(node)
    return found


def shortest_cycles(network: SymNetwork, concept_label: str) -> list[Cycle]:
    """Every minimum-length cycle through the concept's node (ties included)."""
    node = node_for_concept(network, concept_label)
    if node is None:
        raise NotACycleConceptError(
            f"{concept_label!r} is not housed on a concept layer of {network.script_ref}"
        )
    graph = _cycle_graph(network)
    if node.id not in _on_some_cycle(graph):
        return []
    for length in range(3, len(graph) + 1):
        found = _cycles_through(graph, node.id, length)
        if found:
            return [_as_cycle(network, c) for c in sorted(found)]
    return []


def _on_some_cycle(graph: dict[str, list[str]]) -> set[str]:
    """Nodes incident to a non-bridge edge, i.e. lying on at least one cycle."""
    disc: dict[str, int] = {}
    low: dict[str, int] = {}
    bridges = set()
    counter = 0
    for root in graph:
        if root in disc:
            continue
        disc[root] = low[root] = counter
        counter += 1
        stack = [(root, None, iter(graph[root]))]
        while stack:
            node, parent, it = stack[-1]
            advanced = False
            for nxt in it:
                if nxt == parent:
                    continue
                if nxt in disc:
                    low[node] = min(low[node], disc[nxt])
                else:
                    disc[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append((nxt, node, iter(graph[nxt])))
                    advanced = True
                    break
            if advanced:
                continue
            stack.pop()
            if parent is not None:
                low[parent] = min(low[parent], low[node])
                if low[node] > disc[parent]:
                    bridges.add(frozenset((parent, node)))
    on_cycle = set()
    for a in graph:
        for b in graph[a]:
            if frozenset((a, b)) not in bridges:
                on_cycle.update((a, b))
    return on_cycle


def dead_ends(network: SymNetwork) -> list[NetworkNode]:
    on_cycle = _on_some_cycle(_cycle_graph(network))
    return [n for n in network.layer(2) if n.id not in on_cycle]


def leaf_concepts(network: SymNetwork, script: CplScript) -> list[ConceptSymbol]:
    """Concepts used by exactly one triple and housed on no concept layer."""
    housed = {n.concepts[0].symbol for n in network.nodes if n.is_concept}
    uses: dict[str, int] = defaultdict(int)
    for t in script.triples:
        for c in t.concepts:
            uses[c.symbol] += 1
    return [c for c in script.concepts() if uses[c.symbol] == 1 and c.symbol not in housed]


def derive_schedule(network: SymNetwork, script: CplScript) -> Schedule:
    """Order the acquisition steps that bring leaf concepts into play.

    Each triple holding a leaf concept yields one step. A step is placed at
    the point in the script where any of its concepts is first needed, ties
    going to the earlier triple, so a step realizing a concept comes before
    the steps that go on to use it. Steps list concepts source first, then
    effector, then object, skipping those already realized.
    """
    if network.script_ref != script.name:
        raise ValueError(f"network was built from {network.script_ref!r}, not {script.name!r}")
    leaves = {c.symbol for c in leaf_concepts(network, script)}
    first_use: dict[str, int] = {}
    for t in script.triples:
        for c in t.concepts:
            first_use.setdefault(c.symbol, t.ordinal)

    leaf_triples = [t for t in script.triples if any(c.symbol in leaves for c in t.concepts)]
    leaf_triples.sort(key=lambda t: (min(first_use[c.symbol] for c in t.concepts), t.ordinal))

    realized: set[str] = set()
    steps = []
    for t in leaf_triples:
        fresh = tuple(c for c in (t.source, t.effector, t.object) if c.symbol not in realized)
        realized.update(c.symbol for c in fresh)
        steps.append(ScheduleStep(len(steps) + 1, t.ordinal, fresh))
    remaining = tuple(c for c in script.concepts() if c.symbol not in realized)
    return Schedule(tuple(steps), remaining)
