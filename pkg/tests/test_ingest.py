import json
import tracemalloc

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from recoin.errors import ParseError
from recoin.ingest import (
    Entity,
    dump_store,
    entity_to_line,
    load_dump,
    load_dump_path,
    load_wikidata_dump,
    parse_entity,
    reduce_wikidata_record,
    store_fingerprint,
)


class TestParseEntity:
    def test_direct_transcription(self):
        entity = parse_entity('{"id":"Q1","claims":{"P31":["Q5"],"P106":["Q999"]}}')
        assert entity.id == "Q1"
        assert entity.claims == {"P31": {"Q5"}, "P106": {"Q999"}}

    def test_empty_claims(self):
        entity = parse_entity('{"id":"Q2","claims":{}}')
        assert entity.id == "Q2"
        assert entity.claims == {}

    def test_duplicate_property_keys_union(self):
        entity = parse_entity('{"id":"Q3","claims":{"P1":["a"],"P1":["b"]}}')
        assert entity.claims == {"P1": {"a", "b"}}

    def test_duplicate_values_collapse(self):
        entity = parse_entity('{"id":"Q3","claims":{"P1":["a","a","b"]}}')
        assert entity.claims == {"P1": {"a", "b"}}

    def test_empty_value_array_drops_property(self):
        entity = parse_entity('{"id":"Q4","claims":{"P1":[]}}')
        assert entity.claims == {}

    def test_malformed_json_names_byte_offset(self):
        with pytest.raises(ParseError) as exc:
            parse_entity('{"id":"Q1","claims":{bad}}')
        assert exc.value.offset == 21
        assert "byte 21" in str(exc.value)

    def test_byte_offset_counts_multibyte_characters(self):
        # ü is two bytes in UTF-8; the char offset of the error stays the same
        line = '{"id":"Qü",zz}'
        with pytest.raises(ParseError) as exc:
            parse_entity(line)
        char_pos = line.index("zz")
        assert exc.value.offset == len(line[:char_pos].encode("utf-8"))

    @pytest.mark.parametrize("line,fragment", [
        ('{"claims":{}}', "missing 'id'"),
        ('{"id":"Q1"}', "missing 'claims'"),
        ('{"id":"Q1","claims":[]}', "not a JSON object"),
        ('{"id":"Q1","claims":{"X1":["a"]}}', "invalid property"),
        ('{"id":"Q1","claims":{"P1":"a"}}', "not an array"),
        ('{"id":"Q1","claims":{"P1":[1]}}', "non-string"),
        ('{"id":"","claims":{}}', "invalid item id"),
        ('{"id":"Q1","id":"Q2","claims":{}}', "duplicate 'id'"),
        ('[1,2]', "not a JSON object"),
    ])
    def test_malformed_records(self, line, fragment):
        with pytest.raises(ParseError, match=fragment):
            parse_entity(line)

    def test_unknown_keys_ignored_unless_strict(self):
        line = '{"id":"Q1","claims":{},"labels":{}}'
        assert parse_entity(line).id == "Q1"
        with pytest.raises(ParseError, match="unknown key"):
            parse_entity(line, strict=True)


class TestLoadDump:
    def test_empty_stream(self):
        store = load_dump(iter([]))
        assert store.count == 0

    def test_astro_mini_counts_four(self, astro_lines):
        store = load_dump(iter(astro_lines))
        assert store.count == 4

    def test_lenient_skips_bad_lines(self, astro_lines):
        lines = astro_lines[:3] + [b"{broken"]
        store = load_dump(iter(lines))
        assert store.count == 3
        assert store.skipped == 1

    def test_strict_raises_with_line_number(self, astro_lines):
        lines = astro_lines[:2] + [b"{broken"]
        with pytest.raises(ParseError) as exc:
            load_dump(iter(lines), strict=True)
        assert exc.value.line == 3

    def test_duplicate_id_last_wins(self):
        lines = [
            b'{"id":"Q1","claims":{"P1":["a"]}}',
            b'{"id":"Q1","claims":{"P2":["b"]}}',
        ]
        store = load_dump(iter(lines))
        assert store.count == 1
        assert store.duplicates == 1
        assert store.entities["Q1"].claims == {"P2": {"b"}}

    def test_order_insensitive(self, astro_lines):
        forward = load_dump(iter(astro_lines))
        backward = load_dump(iter(list(reversed(astro_lines))))
        assert forward == backward
        assert store_fingerprint(forward) == store_fingerprint(backward)

    def test_path_io_error(self, tmp_path):
        with pytest.raises(OSError):
            load_dump_path(str(tmp_path / "missing.jsonl"))

    def test_memory_tracks_longest_line_not_total_input(self):
        # one pathologically padded line among many; peak must stay within a
        # small multiple of the single longest line
        pad = b" " * (4 * 1024 * 1024)
        def lines():
            yield b'{"id":"Q1","claims":{"P1":["a"]}}' + pad + b"\n"
            for i in range(2, 40):
                yield b'{"id":"Q%d","claims":{"P1":["a"]}}\n' % i
        tracemalloc.start()
        store = load_dump(lines())
        _, peak = tracemalloc.get_traced_memory()
        tracemalloc.stop()
        assert store.count == 39
        assert peak < 4 * len(pad)


entity_ids = st.from_regex(r"Q[0-9]{1,6}", fullmatch=True)
property_ids = st.from_regex(r"P[0-9]{1,4}", fullmatch=True)
values = st.text(st.characters(exclude_categories=("Cs",)), min_size=1, max_size=8)
claims_st = st.dictionaries(property_ids, st.sets(values, min_size=1, max_size=3),
                            max_size=6)


class TestRoundTrip:
    @given(entity_ids, claims_st)
    @settings(max_examples=200)
    def test_serialize_then_parse_is_identity(self, item_id, claims):
        entity = Entity(item_id, claims)
        assert parse_entity(entity_to_line(entity)) == entity

    def test_store_round_trip(self, astro_store):
        text = dump_store(astro_store)
        again = load_dump(line.encode() for line in text.splitlines())
        assert again == astro_store


class TestWikidataAdapter:
    RECORD = {
        "id": "Q1076962",
        "type": "item",
        "labels": {"en": {"language": "en", "value": "example"}},
        "claims": {
            "P31": [
                {"mainsnak": {"snaktype": "value",
                              "datavalue": {"type": "wikibase-entityid",
                                            "value": {"id": "Q5"}}},
                 "rank": "normal"},
            ],
            "P2044": [
                {"mainsnak": {"snaktype": "value",
                              "datavalue": {"type": "quantity",
                                            "value": {"amount": "+123", "unit": "1"}}},
                 "rank": "normal"},
                {"mainsnak": {"snaktype": "value",
                              "datavalue": {"type": "quantity",
                                            "value": {"amount": "+999", "unit": "1"}}},
                 "rank": "deprecated"},
            ],
            "P569": [
                {"mainsnak": {"snaktype": "somevalue"}, "rank": "normal"},
            ],
        },
    }

    def test_reduces_to_simplified_form(self):
        entity = reduce_wikidata_record(self.RECORD)
        assert entity.id == "Q1076962"
        assert entity.claims == {"P31": {"Q5"}, "P2044": {"+123"}}

    def test_streaming_with_array_framing(self):
        body = json.dumps(self.RECORD).encode()
        lines = [b"[", body + b",", b"]"]
        store = load_wikidata_dump(iter(lines))
        assert store.count == 1
        assert store.entities["Q1076962"].claims["P31"] == {"Q5"}
