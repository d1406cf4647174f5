import random
from pathlib import Path

import pytest

from recoin.errors import NotFoundError, SnapshotError
from recoin.index import (
    IndexConfig,
    build_index,
    class_of,
    frequency,
    percent_display,
    read_snapshot,
    write_snapshot,
)
from recoin.ingest import Entity, EntityStore, load_dump

from .oracles import naive_index, random_store

GOLDEN = Path(__file__).parent / "data" / "astro.idx.golden"


class TestClassOf:
    def test_human_routes_to_occupation(self):
        entity = Entity("Q1", {"P31": {"Q5"}, "P106": {"Qx"}})
        assignment = class_of(entity)
        assert assignment.classes == {"Qx"}
        assert assignment.via_occupation is True

    def test_plain_instance_of(self):
        entity = Entity("Q1", {"P31": {"Qc1", "Qc2"}})
        assignment = class_of(entity)
        assert assignment.classes == {"Qc1", "Qc2"}
        assert assignment.via_occupation is False

    def test_human_without_occupation_has_no_classes(self):
        entity = Entity("Q1", {"P31": {"Q5"}})
        assignment = class_of(entity)
        assert assignment.classes == set()
        assert assignment.via_occupation is True

    def test_no_claims_at_all(self):
        assignment = class_of(Entity("Q1", {}))
        assert assignment.classes == set()
        assert assignment.via_occupation is False

    def test_configurable_identifiers(self):
        config = IndexConfig(instance_of="P1", human="H", occupation="P2")
        entity = Entity("Q1", {"P1": {"H"}, "P2": {"office"}})
        assert class_of(entity, config).classes == {"office"}


class TestBuildIndex:
    def test_astro_mini_counts(self, astro_index):
        assert astro_index.class_sizes == {"QAST": 4}
        assert astro_index.property_counts["QAST"] == {
            "P31": 4, "P106": 4, "P1": 4, "P2": 3, "P3": 2, "P4": 1,
        }

    def test_empty_store(self):
        index = build_index(EntityStore())
        assert index.class_sizes == {}
        assert index.property_counts == {}

    def test_singleton(self):
        store = EntityStore()
        store.entities["Q1"] = Entity("Q1", {"P31": {"Qc"}, "P9": {"v"}})
        index = build_index(store)
        assert index.class_sizes == {"Qc": 1}
        assert index.property_counts["Qc"] == {"P31": 1, "P9": 1}

    def test_multi_class_entity_counts_once_per_class(self):
        store = EntityStore()
        store.entities["Q1"] = Entity("Q1", {"P31": {"Qa", "Qb", "Qc"}})
        index = build_index(store)
        assert sum(index.class_sizes.values()) == 3

    def test_agrees_with_naive_recount(self):
        rng = random.Random(20260810)
        for _ in range(50):
            store = random_store(rng)
            index = build_index(store)
            sizes, counts = naive_index(store)
            assert index.class_sizes == sizes
            flat = {(c, p): n for c, per in index.property_counts.items()
                    for p, n in per.items()}
            assert flat == counts

    def test_adding_a_property_only_raises_its_own_cells(self):
        rng = random.Random(7)
        for _ in range(20):
            store = random_store(rng)
            target = next((e for e in store.entities.values()
                           if class_of(e).classes), None)
            if target is None:
                continue
            before = build_index(store)
            grown = Entity(target.id, {p: set(v) for p, v in target.claims.items()})
            grown.add_claim("P999", "new")
            store2 = EntityStore(dict(store.entities))
            store2.entities[target.id] = grown
            after = build_index(store2)
            assert after.class_sizes == before.class_sizes
            changed = class_of(target).classes
            for cls, per in after.property_counts.items():
                for prop, count in per.items():
                    old = before.count(cls, prop)
                    if prop == "P999" and cls in changed:
                        assert count == old + 1
                    else:
                        assert count == old
                    assert count >= old


class TestFrequency:
    def test_paper_ratio_display(self):
        assert percent_display(549, 819) == "67.03%"

    def test_astro_p2(self, astro_index):
        assert frequency(astro_index, "QAST", "P2") == 0.75

    def test_singleton_own_property_is_one(self):
        store = EntityStore()
        store.entities["Q1"] = Entity("Q1", {"P31": {"Qc"}, "P9": {"v"}})
        index = build_index(store)
        assert frequency(index, "Qc", "P9") == 1.0

    def test_absent_pair_is_zero(self, astro_index):
        assert frequency(astro_index, "QAST", "P777") == 0.0

    def test_unknown_class_raises(self, astro_index):
        with pytest.raises(NotFoundError):
            frequency(astro_index, "QNOPE", "P1")

    def test_in_unit_interval(self, astro_index):
        for cls, per in astro_index.property_counts.items():
            for prop in per:
                assert 0 < frequency(astro_index, cls, prop) <= 1


class TestSnapshot:
    def test_round_trip_identity(self, astro_snapshot, astro_index, astro_store):
        index, store = read_snapshot(str(astro_snapshot))
        assert index == astro_index
        assert store == astro_store

    def test_golden_file(self, astro_snapshot):
        assert astro_snapshot.read_text() == GOLDEN.read_text()

    def test_checksum_detects_corruption(self, astro_snapshot):
        text = astro_snapshot.read_text().replace("P2 3", "P2 4")
        astro_snapshot.write_text(text)
        with pytest.raises(SnapshotError, match="checksum"):
            read_snapshot(str(astro_snapshot))

    def test_bad_header(self, tmp_path):
        path = tmp_path / "bad.idx"
        path.write_text("not-a-snapshot 9\nchecksum 00\n")
        with pytest.raises(SnapshotError, match="header"):
            read_snapshot(str(path))

    def test_missing_file(self, tmp_path):
        with pytest.raises(SnapshotError):
            read_snapshot(str(tmp_path / "absent.idx"))

    def test_random_store_round_trips(self, tmp_path):
        rng = random.Random(99)
        for i in range(10):
            store = random_store(rng)
            index = build_index(store)
            path = tmp_path / f"s{i}.idx"
            write_snapshot(str(path), index, store)
            index2, store2 = read_snapshot(str(path))
            assert index2 == index
            assert store2 == store
