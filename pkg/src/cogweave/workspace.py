"""Session state shared by CLI commands, and its JSON persistence."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable

from . import concept_tree, ensemble
from .concept_tree import ConceptTreeNode, ConceptTreeStore
from .ensemble import EnsembleNode, EnsembleStore, MergeReport
from .export import network_from_dict, network_to_dict
from .network import SymNetwork, build_network
from .registry import TypeRegistry, rebuild
from .script_io import CplScript, LinkKey, OntologyPart, parse_cpl, parse_ontology_parts, serialize_cpl

FORMAT = "cogweave/1"


class PersistenceError(ValueError):
    pass


class DuplicateKeyError(ValueError):
    pass


@dataclass
class Workspace:
    ensembles: EnsembleStore = field(default_factory=EnsembleStore)
    trees: ConceptTreeStore = field(default_factory=ConceptTreeStore)
    scripts: dict[str, CplScript] = field(default_factory=dict)
    networks: dict[str, SymNetwork] = field(default_factory=dict)
    log: list[LinkKey] = field(default_factory=list)
    current_script: str | None = None

    def ingest_text(self, text: str) -> list[tuple[OntologyPart, MergeReport, MergeReport]]:
        n = len(self.log)
        parts = parse_ontology_parts(text, first_ordinal=n + 1, auto_offset=n)
        known = {k.key for k in self.log}
        for p in parts:
            if p.link_key.key in known:
                raise DuplicateKeyError(f"link key {p.link_key.key} already ingested")
        return [self.ingest(p) for p in parts]

    def ingest(self, part: OntologyPart) -> tuple[OntologyPart, MergeReport, MergeReport]:
        if self.log and part.link_key.timestamp_ordinal <= self.log[-1].timestamp_ordinal:
            raise ValueError("link key ordinals must increase with ingestion order")
        self.log.append(part.link_key)
        return part, ensemble.add_part(self.ensembles, part), concept_tree.add_event(self.trees, part)

    def add_script(self, script: CplScript) -> SymNetwork:
        network = build_network(script)
        self.scripts[script.name] = script
        self.networks[script.name] = network
        self.current_script = script.name
        return network

    def registry(self, script_name: str | None = None) -> TypeRegistry:
        name = script_name or self.current_script
        return rebuild(self.ensembles, self.trees, self.networks.get(name) if name else None)


def _ensemble_to_dict(node: EnsembleNode) -> dict[str, Any]:
    return {
        "label": node.concept_label,
        "keys": [k.key for k in sorted(node.keys)],
        "children": [_ensemble_to_dict(c) for c in node.children],
    }


def _tree_to_dict(node: ConceptTreeNode, ids: dict[int, int]) -> dict[str, Any]:
    return {
        "id": ids[id(node)],
        "label": node.concept_label,
        "keys": [k.key for k in sorted(node.keys)],
        "refs": [ids[id(r)] for r in node.references],
        "children": [_tree_to_dict(c, ids) for c in node.children],
    }


def to_document(ws: Workspace) -> dict[str, Any]:
    tree_ids = {id(n): i for i, n in enumerate(ws.trees.walk())}
    return {
        "format": FORMAT,
        "log": [{"key": k.key, "ordinal": k.timestamp_ordinal} for k in ws.log],
        "ensembles": [_ensemble_to_dict(r) for r in ws.ensembles.roots],
        "trees": [_tree_to_dict(t, tree_ids) for t in ws.trees.trees],
        "scripts": [
            {"name": name, "cpl": serialize_cpl(ws.scripts[name]), "network": network_to_dict(ws.networks[name])}
            for name in sorted(ws.scripts)
        ],
        "current_script": ws.current_script,
    }


def dumps(ws: Workspace) -> str:
    return json.dumps(to_document(ws), indent=2, sort_keys=True) + "\n"


def _keys(names: Iterable[str], by_name: dict[str, LinkKey]) -> set[LinkKey]:
    try:
        return {by_name[k] for k in names}
    except KeyError as exc:
        raise PersistenceError(f"unknown link key {exc.args[0]!r}") from None


def from_document(doc: Any) -> Workspace:
    if not isinstance(doc, dict) or doc.get("format") != FORMAT:
        found = doc.get("format") if isinstance(doc, dict) else type(doc).__name__
        raise PersistenceError(f"expected format {FORMAT!r}, found {found!r}")
    try:
        log = [LinkKey(int(e["ordinal"]), str(e["key"])) for e in doc["log"]]
        by_name = {k.key: k for k in log}

        def ens(d: dict[str, Any]) -> EnsembleNode:
            return EnsembleNode(d["label"], [ens(c) for c in d["children"]], _keys(d["keys"], by_name))

        nodes: dict[int, ConceptTreeNode] = {}
        pending: list[tuple[ConceptTreeNode, list[int]]] = []

        def tree(d: dict[str, Any]) -> ConceptTreeNode:
            node = ConceptTreeNode(d["label"], [tree(c) for c in d["children"]], _keys(d["keys"], by_name))
            nodes[int(d["id"])] = node
            pending.append((node, d["refs"]))
            return node

        ws = Workspace(log=log)
        ws.ensembles.roots = [ens(d) for d in doc["ensembles"]]
        ws.trees.trees = [tree(d) for d in doc["trees"]]
        for node, refs in pending:
            node.references = [nodes[int(r)] for r in refs]
        for entry in doc["scripts"]:
            script = parse_cpl(entry["cpl"])
            if script.name != entry["name"]:
                raise PersistenceError(f"script entry {entry['name']!r} holds {script.name!r}")
            ws.scripts[script.name] = script
            ws.networks[script.name] = network_from_dict(entry["network"])
        current = doc["current_script"]
        if current is not None and current not in ws.scripts:
            raise PersistenceError(f"current script {current!r} is not stored")
        ws.current_script = current
    except PersistenceError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise PersistenceError(f"corrupt workspace document: {exc!r}") from exc
    return ws


def loads(text: str) -> Workspace:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PersistenceError(f"not a JSON document: {exc}") from exc
    return from_document(doc)
