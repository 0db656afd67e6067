"""Middle-level concept trees.

Each event becomes its own tree, with same-label siblings aggregated into a
single node. Trees merge only when one is wholly contained in another;
trees that merely overlap stay separate. A node's key set records which
events touched it, and ancestors always carry at least the keys of their
descendants, so a node's occurrence count never exceeds its parent's
unless keys are injected from outside.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .ensemble import MergeReport, format_keys
from .script_io import LinkKey, OntologyNode, OntologyPart

__all__ = [
    "ConceptTreeNode",
    "ConceptTreeStore",
    "CountingViolation",
    "LinkKey",
    "StaleViolationError",
    "add_event",
    "check_counting_rule",
    "find_nodes",
    "render_view",
    "restructure",
]


@dataclass(eq=False)
class ConceptTreeNode:
    concept_label: str
    children: list["ConceptTreeNode"] = field(default_factory=list)
    keys: set[LinkKey] = field(default_factory=set)
    # directed links to base concepts split off by restructure()
    references: list["ConceptTreeNode"] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.keys)

    def child(self, label: str) -> "ConceptTreeNode | None":
        for c in self.children:
            if c.concept_label == label:
                return c
        return None

    def walk(self) -> Iterator["ConceptTreeNode"]:
        yield self
        for c in self.children:
            yield from c.walk()

    def __repr__(self) -> str:
        return f"ConceptTreeNode({self.concept_label!r}, keys={sorted(k.key for k in self.keys)})"


@dataclass
class ConceptTreeStore:
    trees: list[ConceptTreeNode] = field(default_factory=list)

    def walk(self) -> Iterator[ConceptTreeNode]:
        for t in self.trees:
            yield from t.walk()

    def parent_of(self, node: ConceptTreeNode) -> ConceptTreeNode | None:
        for n in self.walk():
            if any(c is node for c in n.children):
                return n
        return None


@dataclass(frozen=True)
class CountingViolation:
    parent: ConceptTreeNode
    child: ConceptTreeNode
    parent_count: int
    child_count: int


class StaleViolationError(ValueError):
    pass


def _aggregate(part_node: OntologyNode, key: LinkKey) -> ConceptTreeNode:
    node = ConceptTreeNode(part_node.label, keys={key})
    for pc in part_node.children:
        _absorb(node, _aggregate(pc, key))
    return node


def _absorb(parent: ConceptTreeNode, incoming: ConceptTreeNode) -> None:
    # fold same-label siblings together
    existing = parent.child(incoming.concept_label)
    if existing is None:
        parent.children.append(incoming)
        return
    existing.keys |= incoming.keys
    for c in incoming.children:
        _absorb(existing, c)


def _embedding(small: ConceptTreeNode, big: ConceptTreeNode) -> list[tuple[ConceptTreeNode, ConceptTreeNode]] | None:
    """Pairs (small node, big node) if ``small`` embeds with its root at ``big``."""
    if small.concept_label != big.concept_label:
        return None
    pairs = [(small, big)]
    for sc in small.children:
        bc = big.child(sc.concept_label)
        if bc is None:
            return None
        sub = _embedding(sc, bc)
        if sub is None:
            return None
        pairs.extend(sub)
    return pairs


def _find_site(
    small: ConceptTreeNode, big: ConceptTreeNode
) -> tuple[list[ConceptTreeNode], list[tuple[ConceptTreeNode, ConceptTreeNode]]] | None:
    """First pre-order node of ``big`` where ``small`` embeds.

    Returns (ancestors of the site, embedding pairs).
    """
    stack: list[tuple[ConceptTreeNode, list[ConceptTreeNode]]] = [(big, [])]
    while stack:
        node, ancestors = stack.pop()
        pairs = _embedding(small, node)
        if pairs is not None:
            return ancestors, pairs
        for c in reversed(node.children):
            stack.append((c, ancestors + [node]))
    return None


def _size(node: ConceptTreeNode) -> int:
    return sum(1 for _ in node.walk())


def _fold(
    store: ConceptTreeStore,
    ancestors: list[ConceptTreeNode],
    pairs: list[tuple[ConceptTreeNode, ConceptTreeNode]],
) -> int:
    """Merge a contained tree's keys into its host; returns nodes extended."""
    extended = 0
    redirect = {}
    for small, big in pairs:
        extended += bool(small.keys - big.keys)
        big.keys |= small.keys
        big.references.extend(r for r in small.references if r not in big.references)
        redirect[id(small)] = big
    root_keys = pairs[0][0].keys
    for a in ancestors:
        extended += bool(root_keys - a.keys)
        a.keys |= root_keys
    for n in store.walk():
        n.references = [redirect.get(id(r), r) for r in n.references]
    return extended


def _graft(event: ConceptTreeNode, site: ConceptTreeNode, tree: ConceptTreeNode) -> tuple[ConceptTreeNode, int, int]:
    """Rebuild ``event`` with the existing ``tree`` standing in for ``site``.

    Returns (new root, nodes created, existing nodes given the new key).
    """
    created = 0
    extended = 0

    def merge(existing: ConceptTreeNode, incoming: ConceptTreeNode) -> None:
        nonlocal created, extended
        extended += bool(incoming.keys - existing.keys)
        existing.keys |= incoming.keys
        for c in incoming.children:
            match = existing.child(c.concept_label)
            if match is None:
                existing.children.append(c)
                created += _size(c)
            else:
                merge(match, c)

    def rebuild(node: ConceptTreeNode) -> ConceptTreeNode:
        nonlocal created
        if node is site:
            merge(tree, node)
            return tree
        created += 1
        node.children = [rebuild(c) for c in node.children]
        return node

    root = rebuild(event)
    # ancestors of the grafted tree must dominate its keys
    _lift_keys(root)
    return root, created, extended


def _lift_keys(node: ConceptTreeNode) -> set[LinkKey]:
    for c in node.children:
        node.keys |= _lift_keys(c)
    return node.keys


def _sweep(store: ConceptTreeStore) -> None:
    """Fold any tree wholly contained in another until none remain."""
    changed = True
    while changed:
        changed = False
        bases = {id(r) for n in store.walk() for r in n.references}
        for i, small in enumerate(store.trees):
            if id(small) in bases:
                continue
            for j, big in enumerate(store.trees):
                if i == j:
                    continue
                found = _find_site(small, big)
                if found is not None:
                    _fold(store, *found)
                    del store.trees[i]
                    changed = True
                    break
            if changed:
                break


def add_event(store: ConceptTreeStore, part: OntologyPart) -> MergeReport:
    key = part.link_key
    event = _aggregate(part.root, key)

    for tree in store.trees:
        found = _find_site(event, tree)
        if found is not None:
            extended = _fold(store, *found)
            return MergeReport(0, extended, "contained")

    for index, tree in enumerate(store.trees):
        found = _find_site(tree, event)
        if found is not None:
            site = found[1][0][1]
            root, created, extended = _graft(event, site, tree)
            store.trees[index] = root
            _sweep(store)
            return MergeReport(created, extended, "overlapped")

    store.trees.append(event)
    return MergeReport(_size(event), 0, "new-root")


def find_nodes(store: ConceptTreeStore, concept_label: str) -> list[ConceptTreeNode]:
    return [n for n in store.walk() if n.concept_label == concept_label]


def check_counting_rule(store: ConceptTreeStore) -> list[CountingViolation]:
    out = []
    for parent in store.walk():
        for child in parent.children:
            if child.count > parent.count:
                out.append(CountingViolation(parent, child, parent.count, child.count))
    return out


def restructure(store: ConceptTreeStore, violation: CountingViolation) -> MergeReport:
    """Split the offending child off as a base concept of its own.

    The parent keeps a directed reference to the new root in place of the
    child edge.
    """
    parent, child = violation.parent, violation.child
    if (
        not any(c is child for c in parent.children)
        or parent.count != violation.parent_count
        or child.count != violation.child_count
        or child.count <= parent.count
    ):
        raise StaleViolationError(
            f"violation {parent.concept_label} -> {child.concept_label} no longer holds"
        )
    parent.children = [c for c in parent.children if c is not child]
    parent.references.append(child)
    store.trees.append(child)
    return MergeReport(0, 0, "new-root")


def render_view(store: ConceptTreeStore, show_keys: bool = True) -> str:
    """One block per tree, separated by blank lines."""
    blocks = []
    for tree in store.trees:
        lines: list[str] = []

        def emit(node: ConceptTreeNode, depth: int) -> None:
            text = "  " * depth + node.concept_label
            if show_keys:
                text += " " + format_keys(node.keys)
            lines.append(text)
            for ref in node.references:
                lines.append("  " * (depth + 1) + "-> " + ref.concept_label)
            for c in node.children:
                emit(c, depth + 1)

        emit(tree, 0)
        blocks.append("".join(line + "\n" for line in lines))
    return "\n".join(blocks)
