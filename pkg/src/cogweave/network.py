"""Layered symbolic network built from a CPL script.

Layers, bottom to top:

0. role-type nodes: every object, every effector, every source
1. shared concepts: a concept found in two or more role sets
2. one node per triple, linked to the layer-1 concepts it contains
3. upper shared concepts: a concept in two or more triples that is not
   already on layer 1, linked to those triples

A triple with no layer-1 link falls back to edges to the role-type nodes.
Edges are undirected.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Literal

from .script_io import ROLES, ConceptSymbol, CplScript

NodeKind = Literal["role-type", "shared-concept", "triple", "upper-shared"]

KIND_BY_LAYER: dict[int, NodeKind] = {
    0: "role-type",
    1: "shared-concept",
    2: "triple",
    3: "upper-shared",
}
MAX_LAYERS = 4


@dataclass(frozen=True)
class NetworkNode:
    id: str
    kind: NodeKind
    layer: int
    concepts: tuple[ConceptSymbol, ...]
    role: str | None = None

    @property
    def is_concept(self) -> bool:
        return self.layer in (1, 3)


@dataclass(frozen=True)
class SymNetwork:
    nodes: tuple[NetworkNode, ...]
    edges: frozenset[tuple[str, str]]
    script_ref: str

    @cached_property
    def by_id(self) -> dict[str, NetworkNode]:
        return {n.id: n for n in self.nodes}

    @cached_property
    def adjacency(self) -> dict[str, tuple[str, ...]]:
        adj: dict[str, set[str]] = {n.id: set() for n in self.nodes}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return {k: tuple(sorted(v)) for k, v in adj.items()}

    def layer(self, index: int) -> list[NetworkNode]:
        return [n for n in self.nodes if n.layer == index]

    def degree(self, node_id: str) -> int:
        return len(self.adjacency[node_id])


def edge(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


def _unique(candidate: str, taken: set[str]) -> str:
    while candidate in taken:
        candidate += "'"
    taken.add(candidate)
    return candidate


def build_network(script: CplScript) -> SymNetwork:
    if not script.triples:
        raise ValueError(f"script {script.name!r} has no steps")

    role_members: dict[str, list[ConceptSymbol]] = {r: [] for r in ROLES}
    roles_of: dict[str, set[str]] = defaultdict(set)
    triples_of: dict[str, set[int]] = defaultdict(set)
    for t in script.triples:
        for role, c in zip(ROLES, t.concepts):
            if c not in role_members[role]:
                role_members[role].append(c)
            roles_of[c.symbol].add(role)
            triples_of[c.symbol].add(t.ordinal)

    concepts = script.concepts()
    shared = [c for c in concepts if len(roles_of[c.symbol]) >= 2]
    shared_set = {c.symbol for c in shared}
    upper = [
        c for c in concepts if c.symbol not in shared_set and len(triples_of[c.symbol]) >= 2
    ]

    taken = set(ROLES)
    nodes = [
        NetworkNode(role, "role-type", 0, tuple(role_members[role]), role) for role in ROLES
    ]
    concept_id: dict[str, str] = {}
    for layer, group in ((1, shared), (3, upper)):
        for c in group:
            concept_id[c.symbol] = _unique(c.symbol, taken)
            nodes.append(NetworkNode(concept_id[c.symbol], KIND_BY_LAYER[layer], layer, (c,)))

    edges = set()
    for c in shared:
        for role in ROLES:
            if role in roles_of[c.symbol]:
                edges.add(edge(concept_id[c.symbol], role))

    for t in script.triples:
        tid = _unique(t.token, taken)
        nodes.append(NetworkNode(tid, "triple", 2, t.concepts))
        linked = False
        for c in t.concepts:
            if c.symbol in concept_id:
                edges.add(edge(tid, concept_id[c.symbol]))
                linked = linked or c.symbol in shared_set
        if not linked:
            for role in ROLES:
                edges.add(edge(tid, role))

    nodes.sort(key=lambda n: (n.layer, n.id))
    return SymNetwork(tuple(nodes), frozenset(edges), script.name)


def validate(network: SymNetwork) -> list[str]:
    """Structural diagnostics; an empty list means the network is sound."""
    out = []
    by_id = network.by_id
    for n in network.nodes:
        if not 0 <= n.layer < MAX_LAYERS:
            out.append(f"node {n.id}: layer {n.layer} outside 0..{MAX_LAYERS - 1}")
        elif KIND_BY_LAYER[n.layer] != n.kind:
            out.append(f"node {n.id}: kind {n.kind} on layer {n.layer}")

    layer0 = network.layer(0)
    if len(layer0) != 3:
        out.append(f"expected 3 role-type nodes, found {len(layer0)}")

    in_l1 = {c.symbol for n in network.layer(1) for c in n.concepts}
    in_l3 = {c.symbol for n in network.layer(3) for c in n.concepts}
    for sym in sorted(in_l1 & in_l3):
        out.append(f"concept {sym} housed on both layer 1 and layer 3")

    for a, b in sorted(network.edges):
        if a not in by_id or b not in by_id:
            out.append(f"edge {a}-{b} references a missing node")
            continue
        layers = sorted((by_id[a].layer, by_id[b].layer))
        if layers not in ([0, 1], [1, 2], [2, 3], [0, 2]):
            out.append(f"edge {a}-{b} joins layers {layers[0]} and {layers[1]}")

    adj = network.adjacency
    role_sets = {n.role: {c.symbol for c in n.concepts} for n in layer0}
    triples = network.layer(2)
    for n in network.layer(1):
        sym = n.concepts[0].symbol
        if sum(sym in s for s in role_sets.values()) < 2:
            out.append(f"layer-1 concept {sym} is in fewer than 2 role sets")
    for n in network.layer(3):
        sym = n.concepts[0].symbol
        if sum(any(c.symbol == sym for c in t.concepts) for t in triples) < 2:
            out.append(f"layer-3 concept {sym} is in fewer than 2 triples")
    for t in triples:
        neighbours = [by_id[x].layer for x in adj.get(t.id, ()) if x in by_id]
        if not neighbours:
            out.append(f"triple node {t.id} is isolated")
            continue
        if (1 in neighbours) == (0 in neighbours):
            out.append(f"triple node {t.id}: role-type edges must replace missing layer-1 edges")
    return out


def node_for_concept(network: SymNetwork, concept_label: str) -> NetworkNode | None:
    """The layer-1 or layer-3 node housing a concept, matched by label or symbol."""
    housed = [n for n in network.nodes if n.is_concept]
    for n in housed:
        if n.concepts[0].label == concept_label:
            return n
    for n in housed:
        if n.concepts[0].symbol == concept_label:
            return n
    return None
