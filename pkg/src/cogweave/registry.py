"""Type registry linking concept instances across the three levels.

One entry per concept label. An activation is type-level: asking for
"items" returns every ``items`` node in the ensembles and concept trees,
plus the network node housing that concept, if any.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .concept_tree import ConceptTreeNode, ConceptTreeStore, find_nodes
from .ensemble import EnsembleNode, EnsembleStore, find_instances
from .network import NetworkNode, SymNetwork, node_for_concept
from .paths import Cycle, shortest_cycles


@dataclass(frozen=True)
class TypeEntry:
    concept_label: str
    ensemble_refs: tuple[EnsembleNode, ...] = ()
    tree_refs: tuple[ConceptTreeNode, ...] = ()
    network_ref: NetworkNode | None = None


@dataclass(frozen=True)
class ActivationResult:
    concept_label: str
    ensemble: tuple[EnsembleNode, ...] = ()
    trees: tuple[ConceptTreeNode, ...] = ()
    network: NetworkNode | None = None
    unknown: bool = False

    @property
    def instance_count(self) -> int:
        return len(self.ensemble) + len(self.trees) + (self.network is not None)


@dataclass(frozen=True)
class HornQueryResult:
    requested: frozenset[str]
    covering_cycles: tuple[Cycle, ...]
    instance_bindings: tuple[ActivationResult, ...]
    complete: bool


@dataclass(frozen=True)
class TypeRegistry:
    entries: dict[str, TypeEntry] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries)

    def labels(self) -> list[str]:
        return sorted(self.entries)


def rebuild(
    ensembles: EnsembleStore, trees: ConceptTreeStore, network: SymNetwork | None = None
) -> TypeRegistry:
    labels = {n.concept_label for n in ensembles.walk()}
    labels |= {n.concept_label for n in trees.walk()}
    if network is not None:
        labels |= {n.concepts[0].label for n in network.nodes if n.is_concept}

    entries = {}
    for label in sorted(labels):
        net = None
        if network is not None:
            node = node_for_concept(network, label)
            if node is not None and node.concepts[0].label == label:
                net = node
        entries[label] = TypeEntry(
            label,
            tuple(find_instances(ensembles, label)),
            tuple(find_nodes(trees, label)),
            net,
        )
    return TypeRegistry(entries)


def activate(registry: TypeRegistry, concept_label: str) -> ActivationResult:
    entry = registry.entries.get(concept_label)
    if entry is None:
        return ActivationResult(concept_label, unknown=True)
    return ActivationResult(
        concept_label, entry.ensemble_refs, entry.tree_refs, entry.network_ref
    )


def query_horn(
    registry: TypeRegistry, network: SymNetwork | None, concepts: set[str] | frozenset[str]
) -> HornQueryResult:
    """Cover the requested concepts with shortest cycles and bind their instances.

    Concepts may be given by label or by network symbol. Coverage is greedy:
    the first uncovered concept (by label) picks, among its own shortest
    cycles, the one covering the most still-uncovered concepts.
    """
    if not concepts:
        raise ValueError("query needs at least one concept")
    requested = frozenset(concepts)

    housed: dict[str, NetworkNode] = {}
    labels: dict[str, str] = {}
    for c in sorted(requested):
        node = node_for_concept(network, c) if network is not None else None
        if node is not None:
            housed[c] = node
            labels[c] = node.concepts[0].label
        else:
            labels[c] = c

    chosen: list[Cycle] = []
    uncovered = set(housed)
    stranded = set()
    while uncovered - stranded:
        c = min(uncovered - stranded, key=lambda x: labels[x])
        options = shortest_cycles(network, c)
        if not options:
            stranded.add(c)
            continue

        def gain(cycle: Cycle) -> int:
            ids = set(cycle.ids)
            return sum(housed[u].id in ids for u in uncovered)

        best = max(options, key=gain)
        chosen.append(best)
        ids = set(best.ids)
        uncovered = {u for u in uncovered if housed[u].id not in ids}

    bindings = [
        activate(registry, labels[c])
        for c in sorted(requested, key=lambda x: labels[x])
        if labels[c] in registry.entries
    ]

    chosen.sort(key=lambda cy: (cy.length, cy.ids))
    complete = len(housed) == len(requested) == len(bindings) and not uncovered
    return HornQueryResult(requested, tuple(chosen), tuple(bindings), complete)
