"""Independent reference computations used to check the library.

Nothing here imports the code paths under test beyond plain data types.
"""
from __future__ import annotations

from cogweave.script_io import CplScript, OntologyNode


def hand_layers(script: CplScript) -> tuple[set[str], set[str]]:
    """Shared (layer 1) and upper (layer 3) concept symbols, straight from the rules.

    Layer 1: symbol appears in at least two of the object/effector/source columns.
    Layer 3: symbol appears in at least two triples and is not on layer 1.
    """
    columns = [
        {t.object.symbol for t in script.triples},
        {t.effector.symbol for t in script.triples},
        {t.source.symbol for t in script.triples},
    ]
    symbols = set().union(*columns)
    l1 = {s for s in symbols if sum(s in col for col in columns) >= 2}
    l3 = set()
    for s in symbols - l1:
        hits = [t for t in script.triples if s in (t.object.symbol, t.effector.symbol, t.source.symbol)]
        if len(hits) >= 2:
            l3.add(s)
    return l1, l3


def brute_force_cycles(nodes: dict[str, int], edges, max_length: int) -> set[frozenset]:
    """Every simple cycle of 3..max_length nodes, as a frozenset of undirected edges.

    ``nodes`` maps node id to layer; layer-0 nodes are dropped. Every simple
    path is walked from every start vertex in both directions, so each cycle
    is found many times and deduplicated by its edge set.
    """
    keep = {n for n, layer in nodes.items() if layer != 0}
    adj: dict[str, set[str]] = {n: set() for n in keep}
    for a, b in edges:
        if a in keep and b in keep:
            adj[a].add(b)
            adj[b].add(a)

    found = set()

    def walk(path: list[str]) -> None:
        for nxt in adj[path[-1]]:
            if nxt == path[0] and len(path) >= 3:
                ring = path + [path[0]]
                found.add(frozenset(frozenset(p) for p in zip(ring, ring[1:])))
            elif nxt not in path and len(path) < max_length:
                walk(path + [nxt])

    for start in keep:
        walk([start])
    return found


def cycle_is_valid(ids: tuple[str, ...], layers: dict[str, int]) -> bool:
    """Cycle invariants: distinct nodes, no layer 0, concept/triple alternation, even length >= 4."""
    if len(set(ids)) != len(ids) or len(ids) < 4 or len(ids) % 2:
        return False
    if any(layers[i] == 0 for i in ids):
        return False
    kinds = [layers[i] == 2 for i in ids]
    return all(kinds[i] != kinds[(i + 1) % len(ids)] for i in range(len(ids)))


def edge_set(ids: tuple[str, ...]) -> frozenset:
    ring = list(ids) + [ids[0]]
    return frozenset(frozenset(p) for p in zip(ring, ring[1:]))


def as_nested(node) -> dict:
    """Label-keyed nested dict of a tree, aggregating same-label siblings."""
    children = node.children
    label = node.label if isinstance(node, OntologyNode) else node.concept_label
    out: dict = {}
    for c in children:
        sub = as_nested(c)
        (k, v), = sub.items()
        merged = out.setdefault(k, {})
        _deep_merge(merged, v)
    return {label: out}


def _deep_merge(into: dict, other: dict) -> None:
    for k, v in other.items():
        _deep_merge(into.setdefault(k, {}), v)


def nested_embeds_at(small: dict, big: dict) -> bool:
    """``small`` (one label -> children) embeds with its root at ``big``'s root."""
    (sl, sc), = small.items()
    (bl, bc), = big.items()
    if sl != bl:
        return False
    return all(k in bc and nested_embeds_at({k: v}, {k: bc[k]}) for k, v in sc.items())


def nested_embeds_anywhere(small: dict, big: dict) -> bool:
    if nested_embeds_at(small, big):
        return True
    (_, bc), = big.items()
    return any(nested_embeds_anywhere(small, {k: v}) for k, v in bc.items())
