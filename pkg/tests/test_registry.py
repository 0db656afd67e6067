import pytest
from hypothesis import given, settings

from cogweave.concept_tree import ConceptTreeStore, add_event
from cogweave.ensemble import EnsembleStore, add_part
from cogweave.network import build_network
from cogweave.registry import TypeRegistry, activate, query_horn, rebuild
from conftest import part_sequences


def stores(parts):
    es, ts = EnsembleStore(), ConceptTreeStore()
    for p in parts:
        add_part(es, p)
        add_event(ts, p)
    return es, ts


def test_items_activation_spans_levels(smart_home):
    es, ts = stores(smart_home)
    reg = rebuild(es, ts)
    result = activate(reg, "items")
    assert len(result.ensemble) == 5
    assert sorted(min(n.keys).timestamp_ordinal for n in result.trees) == [1, 3, 4, 5, 7, 9, 10]
    assert result.network is None and not result.unknown
    assert all(n.concept_label == "items" for n in result.ensemble + result.trees)


def test_unknown_concept():
    result = activate(TypeRegistry(), "Nothing")
    assert result.unknown and result.instance_count == 0


def test_network_concepts_join_by_label(egg, smart_home):
    es, ts = stores(smart_home)
    net = build_network(egg)
    reg = rebuild(es, ts, net)
    assert activate(reg, "Pot").network.id == "P"
    assert len(activate(reg, "Pot").ensemble) == 1
    assert activate(reg, "Kitchen").network is None
    assert len(activate(reg, "Kitchen").ensemble) == 1


def test_horn_query_covers_with_one_cycle(egg):
    net = build_network(egg)
    reg = rebuild(EnsembleStore(), ConceptTreeStore(), net)
    result = query_horn(reg, net, {"Water", "Pot"})
    assert [set(c.ids) for c in result.covering_cycles] == [{"W", "EWP", "P", "PWT"}]
    assert result.complete
    assert {b.concept_label for b in result.instance_bindings} == {"Water", "Pot"}


def test_horn_query_unhoused_concept_is_incomplete(egg):
    net = build_network(egg)
    reg = rebuild(EnsembleStore(), ConceptTreeStore(), net)
    result = query_horn(reg, net, {"Kitchen"})
    assert not result.complete and result.covering_cycles == ()


def test_empty_registry_query():
    result = query_horn(TypeRegistry(), None, {"Pot"})
    assert not result.complete
    assert result.covering_cycles == ()
    assert all(b.instance_count == 0 for b in result.instance_bindings)


def test_empty_request_rejected(egg):
    with pytest.raises(ValueError):
        query_horn(TypeRegistry(), build_network(egg), set())


@given(part_sequences())
@settings(max_examples=80, deadline=None)
def test_registry_integrity(parts):
    es, ts = stores(parts)
    reg = rebuild(es, ts)
    live_e = {id(n) for n in es.walk()}
    live_t = {id(n) for n in ts.walk()}
    for label, entry in reg.entries.items():
        assert all(id(n) in live_e and n.concept_label == label for n in entry.ensemble_refs)
        assert all(id(n) in live_t and n.concept_label == label for n in entry.tree_refs)
        assert activate(reg, label).instance_count >= 1
    again = rebuild(es, ts)
    assert reg.labels() == again.labels()
    for label in reg.labels():
        a, b = reg.entries[label], again.entries[label]
        assert [id(n) for n in a.ensemble_refs] == [id(n) for n in b.ensemble_refs]
        assert [id(n) for n in a.tree_refs] == [id(n) for n in b.tree_refs]
