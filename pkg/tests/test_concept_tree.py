from pathlib import Path

import pytest

from cogweave.concept_tree import (
    ConceptTreeNode,
    ConceptTreeStore,
    StaleViolationError,
    add_event,
    check_counting_rule,
    find_nodes,
    render_view,
    restructure,
)
from cogweave.script_io import LinkKey, OntologyNode, OntologyPart
from conftest import path_part

GOLDEN = Path(__file__).parent / "golden"


def keys(node):
    return sorted(k.timestamp_ordinal for k in node.keys)


def ingest(parts):
    store = ConceptTreeStore()
    reports = [add_event(store, p) for p in parts]
    return store, reports


def test_m017_key_merge():
    store, (_, second) = ingest([
        path_part("Home>Kitchen>motion_sensors>M017", "Link_6", 6),
        path_part("Home>Kitchen>motion_sensors", "Link_8", 8),
    ])
    assert second.merge_kind == "contained" and second.nodes_created == 0
    assert len(store.trees) == 1
    got = {n.concept_label: keys(n) for n in store.walk()}
    assert got == {"Home": [6, 8], "Kitchen": [6, 8], "motion_sensors": [6, 8], "M017": [6]}
    assert "    motion_sensors [Link_6, Link_8]\n      M017 [Link_6]\n" in render_view(store)


def test_identical_events_merge():
    store, _ = ingest([path_part("A>B>C", "k1", 1), path_part("A>B>C", "k2", 2)])
    assert len(store.trees) == 1
    assert all(keys(n) == [1, 2] for n in store.walk())


def test_overlap_does_not_merge():
    store, reports = ingest([
        path_part("Home>Kitchen>items>Pot", "k1", 1),
        path_part("Home>Kitchen>items>Sink", "k2", 2),
    ])
    assert [r.merge_kind for r in reports] == ["new-root", "new-root"]
    assert len(store.trees) == 2
    assert len(find_nodes(store, "Kitchen")) == 2


def test_siblings_aggregate_within_an_event():
    part = OntologyPart(LinkKey(1, "k1"), OntologyNode("Home", (
        OntologyNode("items", (OntologyNode("TV"),)),
        OntologyNode("items", (OntologyNode("Bed"),)),
    )))
    store, _ = ingest([part])
    (tree,) = store.trees
    assert [c.concept_label for c in tree.children] == ["items"]
    assert [c.concept_label for c in tree.children[0].children] == ["TV", "Bed"]


def test_contained_below_root_lifts_key_to_ancestors():
    store, (_, report) = ingest([
        path_part("Home>Kitchen>items", "k1", 1),
        path_part("Kitchen>items", "k2", 2),
    ])
    assert report.merge_kind == "contained"
    assert {n.concept_label: keys(n) for n in store.walk()} == {
        "Home": [1, 2], "Kitchen": [1, 2], "items": [1, 2]
    }
    assert check_counting_rule(store) == []


def test_event_containing_existing_tree_grows_it_in_place():
    store, _ = ingest([path_part("Kitchen>items", "k1", 1)])
    kitchen = store.trees[0]
    report = add_event(store, path_part("Home>Kitchen>items>Pot", "k2", 2))
    assert report.merge_kind == "overlapped"
    assert report.nodes_created == 2
    (tree,) = store.trees
    assert tree.concept_label == "Home"
    assert tree.children[0] is kitchen
    assert {n.concept_label: keys(n) for n in store.walk()} == {
        "Home": [1, 2], "Kitchen": [1, 2], "items": [1, 2], "Pot": [2]
    }


def test_growing_folds_other_contained_trees():
    store, _ = ingest([path_part("K>i", "k1", 1), path_part("B>i", "k2", 2)])
    part = OntologyPart(LinkKey(3, "k3"), OntologyNode("H", (
        OntologyNode("K", (OntologyNode("i"),)), OntologyNode("B", (OntologyNode("i"),)),
    )))
    add_event(store, part)
    (tree,) = store.trees
    assert {n.concept_label: keys(n) for n in tree.walk() if n.concept_label != "i"} == {
        "H": [1, 2, 3], "K": [1, 3], "B": [2, 3]
    }


def test_trees_span_domains():
    store, _ = ingest([
        path_part("Home>Dining Room>items", "k1", 1),
        path_part("Dining Room>items>Table", "k2", 2),
    ])
    assert [t.concept_label for t in store.trees] == ["Home", "Dining Room"]
    assert len(find_nodes(store, "Dining Room")) == 2


def test_smart_home_trees(smart_home):
    store, _ = ingest(smart_home)
    assert render_view(store) == (GOLDEN / "smart_home.trees.txt").read_text()
    assert len(store.trees) == 8
    kitchens = find_nodes(store, "Kitchen")
    containing = [t for t in store.trees if any(n.concept_label == "Kitchen" for n in t.walk())]
    assert len(kitchens) == len(containing) == 4
    (m017,) = find_nodes(store, "M017")
    assert [k.key for k in sorted(m017.keys)] == ["Link_6"]
    assert check_counting_rule(store) == []


def test_empty_store():
    store = ConceptTreeStore()
    assert find_nodes(store, "Kitchen") == []
    assert check_counting_rule(store) == []
    assert render_view(store) == ""


def _injected():
    """Home counted 3 times, Kitchen 5 times: the counting rule is broken."""
    ks = [LinkKey(i, f"Link_{i}") for i in range(1, 6)]
    pot = ConceptTreeNode("Pot", keys=set(ks[:2]))
    kitchen = ConceptTreeNode("Kitchen", [pot], set(ks))
    home = ConceptTreeNode("Home", [kitchen, ConceptTreeNode("Hall", keys=set(ks[:1]))], set(ks[:3]))
    return ConceptTreeStore([home]), home, kitchen


def test_counting_violation_found():
    store, home, kitchen = _injected()
    (v,) = check_counting_rule(store)
    assert (v.parent, v.child, v.parent_count, v.child_count) == (home, kitchen, 3, 5)


def test_restructure_makes_base_concept():
    store, home, kitchen = _injected()
    (v,) = check_counting_rule(store)
    restructure(store, v)
    assert store.trees == [home, kitchen]
    assert [c.concept_label for c in home.children] == ["Hall"]
    assert home.references == [kitchen]
    assert check_counting_rule(store) == []
    assert "  -> Kitchen\n" in render_view(store)
    with pytest.raises(StaleViolationError):
        restructure(store, v)


def test_restructure_deep_violation_leaves_ancestors():
    ks = [LinkKey(i, f"k{i}") for i in range(1, 5)]
    leaf = ConceptTreeNode("Leaf", keys=set(ks))
    mid = ConceptTreeNode("Mid", [leaf], set(ks[:2]))
    top = ConceptTreeNode("Top", [mid], set(ks))
    root = ConceptTreeNode("Root", [top], set(ks))
    store = ConceptTreeStore([root])
    (v,) = check_counting_rule(store)
    assert (v.parent, v.child) == (mid, leaf)
    restructure(store, v)
    assert root.children == [top] and top.children == [mid] and mid.children == []
    assert store.trees == [root, leaf]
    assert all(n.count == 4 for n in (root, top))


def test_stale_after_counts_change():
    store, home, kitchen = _injected()
    (v,) = check_counting_rule(store)
    home.keys |= {LinkKey(9, "Link_9"), LinkKey(10, "Link_10"), LinkKey(11, "Link_11")}
    with pytest.raises(StaleViolationError):
        restructure(store, v)
