"""DOT and JSON renderings of a symbolic network."""
from __future__ import annotations

import json
from typing import Any

from .network import KIND_BY_LAYER, MAX_LAYERS, NetworkNode, SymNetwork
from .script_io import ROLES, ConceptSymbol

ROLE_COLORS = {"objects": "blue", "effectors": "red", "sources": "green"}


def network_to_dict(network: SymNetwork) -> dict[str, Any]:
    return {
        "script": network.script_ref,
        "nodes": [
            {
                "id": n.id,
                "kind": n.kind,
                "layer": n.layer,
                "role": n.role,
                "concepts": [{"symbol": c.symbol, "label": c.label} for c in n.concepts],
            }
            for n in sorted(network.nodes, key=lambda n: n.id)
        ],
        "edges": [list(e) for e in sorted(network.edges)],
    }


def network_from_dict(data: dict[str, Any]) -> SymNetwork:
    nodes = []
    for raw in data["nodes"]:
        layer = int(raw["layer"])
        if raw["kind"] != KIND_BY_LAYER.get(layer):
            raise ValueError(f"node {raw['id']}: kind {raw['kind']} does not match layer {layer}")
        concepts = tuple(ConceptSymbol(c["symbol"], c["label"]) for c in raw["concepts"])
        nodes.append(NetworkNode(raw["id"], raw["kind"], layer, concepts, raw["role"]))
    nodes.sort(key=lambda n: (n.layer, n.id))
    edges = frozenset((a, b) for a, b in data["edges"])
    return SymNetwork(tuple(nodes), edges, data["script"])


def to_json(network: SymNetwork) -> str:
    return json.dumps(network_to_dict(network), indent=2, sort_keys=True) + "\n"


def concept_roles(network: SymNetwork) -> dict[str, str]:
    """Colour role of each concept: the first of object, effector, source it plays."""
    first: dict[str, str] = {}
    for role in ROLES:
        for n in network.layer(0):
            if n.role == role:
                for c in n.concepts:
                    first.setdefault(c.symbol, role)
    return first


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _dot_node(n: NetworkNode, roles: dict[str, str]) -> str:
    if n.layer == 0:
        label = n.role + ": " + " ".join(c.symbol for c in n.concepts)
        attrs = f"label={_quote(label)}, color={ROLE_COLORS[n.role]}, shape=box"
    elif n.layer == 2:
        parts = "".join(
            f'<font color="{ROLE_COLORS[role]}">{c.symbol}</font>'
            for role, c in zip(ROLES, n.concepts)
        )
        attrs = f"label=<{parts}>, shape=ellipse"
    else:
        c = n.concepts[0]
        color = ROLE_COLORS[roles.get(c.symbol, "objects")]
        attrs = f"label={_quote(c.symbol)}, tooltip={_quote(c.label)}, color={color}, shape=circle"
    return f"    {_quote(n.id)} [{attrs}];"


def to_dot(network: SymNetwork) -> str:
    """Undirected graph with one ``rank=same`` group per layer, types at the bottom."""
    roles = concept_roles(network)
    out = [f"graph {_quote(network.script_ref)} {{", "  rankdir=BT;"]
    for layer in range(MAX_LAYERS):
        out.append(f"  subgraph layer{layer} {{")
        out.append("    rank=same;")
        for n in sorted(network.layer(layer), key=lambda n: n.id):
            out.append(_dot_node(n, roles))
        out.append("  }")
    for a, b in sorted(network.edges):
        out.append(f"  {_quote(a)} -- {_quote(b)};")
    out.append("}")
    return "\n".join(out) + "\n"
