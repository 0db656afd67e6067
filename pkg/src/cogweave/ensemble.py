"""Bottom-level ensemble store.

Ensembles keep every presented structure exactly, so the same label may
occur several times among one node's children. A new part is absorbed in
one of three ways, tried in this order over the roots in insertion order:

1. contained: the part embeds somewhere inside an existing root; only the
   link keys along the embedding are extended.
2. overlapped: the part's root matches an existing root's label; the part
   is merged into it from the top, reusing matching children.
3. overlapped (absorbing): an existing root embeds inside the part; the
   part is built around that root, which is reused in place.

Otherwise the part becomes a new root.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Literal

from .script_io import LinkKey, OntologyNode, OntologyPart

MergeKind = Literal["new-root", "contained", "overlapped"]


@dataclass(eq=False)
class EnsembleNode:
    concept_label: str
    children: list["EnsembleNode"] = field(default_factory=list)
    keys: set[LinkKey] = field(default_factory=set)

    def walk(self) -> Iterator["EnsembleNode"]:
        yield self
        for c in self.children:
            yield from c.walk()

    def __repr__(self) -> str:
        return f"EnsembleNode({self.concept_label!r}, keys={sorted(k.key for k in self.keys)})"


@dataclass
class EnsembleStore:
    roots: list[EnsembleNode] = field(default_factory=list)

    def walk(self) -> Iterator[EnsembleNode]:
        for r in self.roots:
            yield from r.walk()

    def node_count(self) -> int:
        return sum(1 for _ in self.walk())


@dataclass(frozen=True)
class MergeReport:
    nodes_created: int
    nodes_key_extended: int
    merge_kind: MergeKind


def embed(small: OntologyNode, big: EnsembleNode) -> list[EnsembleNode] | None:
    """Injective, label-preserving embedding of ``small`` rooted at ``big``.

    Returns the matched ensemble nodes (pre-order of ``small``) or None.
    Children are matched with backtracking because repeated labels can make
    a greedy choice fail where another assignment succeeds.
    """
    if small.label != big.concept_label:
        return None
    matched = [big]

    def assign(i: int, used: set[int]) -> bool:
        if i == len(small.children):
            return True
        for cand in big.children:
            if id(cand) in used:
                continue
            sub = embed(small.children[i], cand)
            if sub is None:
                continue
            used.add(id(cand))
            if assign(i + 1, used):
                matched.extend(sub)
                return True
            used.discard(id(cand))
        return False

    return matched if assign(0, set()) else None


def _contains_ensemble(big: OntologyNode, small: EnsembleNode) -> bool:
    # existing root inside a new part: same search, roles swapped
    if small.concept_label != big.label:
        return False

    def assign(i: int, used: set[int]) -> bool:
        if i == len(small.children):
            return True
        for j, cand in enumerate(big.children):
            if j in used or not _contains_ensemble(cand, small.children[i]):
                continue
            used.add(j)
            if assign(i + 1, used):
                return True
            used.discard(j)
        return False

    return assign(0, set())


def _sites(node: OntologyNode, path: tuple[int, ...] = ()) -> Iterator[tuple[tuple[int, ...], OntologyNode]]:
    yield path, node
    for i, c in enumerate(node.children):
        yield from _sites(c, path + (i,))


class _Counter:
    def __init__(self) -> None:
        self.created = 0
        self.extended = 0

    def touch(self, node: EnsembleNode, key: LinkKey) -> None:
        if key not in node.keys:
            node.keys.add(key)
            self.extended += 1


def _fresh(part_node: OntologyNode, key: LinkKey, counter: _Counter) -> EnsembleNode:
    counter.created += 1
    return EnsembleNode(
        part_node.label, [_fresh(c, key, counter) for c in part_node.children], {key}
    )


def _merge_into(node: EnsembleNode, part_node: OntologyNode, key: LinkKey, counter: _Counter) -> None:
    counter.touch(node, key)
    used: set[int] = set()
    for pc in part_node.children:
        same = [c for c in node.children if c.concept_label == pc.label and id(c) not in used]
        target = next((c for c in same if embed(pc, c) is not None), None)
        if target is None and same:
            target = same[0]
        if target is None:
            target = _fresh(pc, key, counter)
            node.children.append(target)
        else:
            _merge_into(target, pc, key, counter)
        used.add(id(target))


def _build_around(
    part_node: OntologyNode,
    site: tuple[int, ...],
    existing: EnsembleNode,
    key: LinkKey,
    counter: _Counter,
) -> EnsembleNode:
    if not site:
        _merge_into(existing, part_node, key, counter)
        return existing
    counter.created += 1
    children = []
    for i, c in enumerate(part_node.children):
        if i == site[0]:
            children.append(_build_around(c, site[1:], existing, key, counter))
        else:
            children.append(_fresh(c, key, counter))
    return EnsembleNode(part_node.label, children, {key})


def add_part(store: EnsembleStore, part: OntologyPart) -> MergeReport:
    key = part.link_key
    counter = _Counter()

    for root in store.roots:
        for site in root.walk():
            matched = embed(part.root, site)
            if matched is not None:
                for node in matched:
                    counter.touch(node, key)
                return MergeReport(0, counter.extended, "contained")

    for root in store.roots:
        if root.concept_label == part.root.label:
            _merge_into(root, part.root, key, counter)
            return MergeReport(counter.created, counter.extended, "overlapped")

    for index, root in enumerate(store.roots):
        for site, sub in _sites(part.root):
            if site and _contains_ensemble(sub, root):
                store.roots[index] = _build_around(part.root, site, root, key, counter)
                return MergeReport(counter.created, counter.extended, "overlapped")

    store.roots.append(_fresh(part.root, key, counter))
    return MergeReport(counter.created, 0, "new-root")


def find_instances(store: EnsembleStore, concept_label: str) -> list[EnsembleNode]:
    return [n for n in store.walk() if n.concept_label == concept_label]


def format_keys(keys: set[LinkKey]) -> str:
    return "[" + ", ".join(k.key for k in sorted(keys)) + "]"


def render_view(store: EnsembleStore, show_keys: bool = False) -> str:
    lines: list[str] = []

    def emit(node: EnsembleNode, depth: int) -> None:
        text = "  " * depth + node.concept_label
        if show_keys:
            text += " " + format_keys(node.keys)
        lines.append(text)
        for c in node.children:
            emit(c, depth + 1)

    for root in store.roots:
        emit(root, 0)
    return "".join(line + "\n" for line in lines)
