import json

import pytest

from sperner.constructions import ProductParams, build_product_tuple, build_pair_sum
from sperner.errors import WitnessFormatError
from sperner.witness import (
    check_witness,
    dumps_witness,
    load_witness,
    parse_witness,
    tuple_of_witness,
    witness_payload,
    write_witness,
)


@pytest.fixture
def payload():
    t = build_product_tuple(ProductParams(5, 2))
    return witness_payload(
        t, provenance={"builder": "product", "parameters": {"n": 5, "k": 2}}
    )


def test_payload_shape(payload):
    assert payload["schema_version"] == 1
    assert payload["encoding"] == "mask"
    assert payload["n"] == 5 and payload["k"] == 2
    assert len(payload["families"]) == 2
    assert payload["families"] == sorted(payload["families"])
    for fam in payload["families"]:
        assert fam == sorted(fam)
    assert set(payload["measures"]) == {"sum", "product"}


def test_round_trip_is_byte_identical(payload):
    text = dumps_witness(payload)
    again = dumps_witness(parse_witness(text))
    assert again == text
    assert text.endswith("\n")


def test_file_round_trip(tmp_path, payload):
    path = tmp_path / "w.json"
    write_witness(str(path), payload)
    loaded = load_witness(str(path))
    assert loaded == parse_witness(dumps_witness(payload))
    assert dumps_witness(loaded) == path.read_text()


def test_tuple_round_trip(payload):
    t = tuple_of_witness(payload)
    assert witness_payload(t, created=payload["created"],
                           provenance=payload["provenance"]) == payload


def test_check_witness_accepts_good(payload):
    assert check_witness(payload) == []


def test_elements_encoding_accepted():
    doc = {
        "schema_version": 1,
        "n": 3,
        "k": 2,
        "encoding": "elements",
        "families": [[[2]], [[1], [3]]],
        "measures": {"sum": 3, "product": 2},
        "created": "2026-01-01T00:00:00Z",
    }
    p = parse_witness(json.dumps(doc))
    assert p["encoding"] == "mask"
    assert p["families"] == [[1, 4], [2]]
    assert check_witness(p) == []


def test_canonical_order_restored_on_parse(payload):
    doc = json.loads(dumps_witness(payload))
    doc["families"] = [list(reversed(f)) for f in reversed(doc["families"])]
    assert parse_witness(json.dumps(doc))["families"] == payload["families"]


def _base():
    return {
        "schema_version": 1,
        "n": 3,
        "k": 2,
        "encoding": "mask",
        "families": [[1], [2]],
        "measures": {"sum": 2, "product": 1},
        "created": "2026-01-01T00:00:00Z",
    }


@pytest.mark.parametrize(
    "mutate,hint",
    [
        (lambda d: d.update(schema_version=2), "schema_version"),
        (lambda d: d.update(extra=1), "unknown"),
        (lambda d: d.pop("measures"), "missing"),
        (lambda d: d.update(n="3"), "integer"),
        (lambda d: d.update(n=0), "outside"),
        (lambda d: d.update(n=99), "outside"),
        (lambda d: d.update(k=0), "positive"),
        (lambda d: d.update(encoding="sets"), "encoding"),
        (lambda d: d.update(families=[[1]]), "expected k"),
        (lambda d: d.update(families=[[1], []]), "non-empty"),
        (lambda d: d.update(families=[[1], [0]]), "proper"),
        (lambda d: d.update(families=[[1], [7]]), "proper"),
        (lambda d: d.update(families=[[1], [8]]), "proper"),
        (lambda d: d.update(families=[[1, 1], [2]]), "repeats"),
        (lambda d: d.update(families=[[1], [True]]), "integer"),
        (lambda d: d.update(measures={"sum": 2}), "measures"),
        (lambda d: d.update(measures={"sum": 2, "product": 1, "max": 1}), "measures"),
        (lambda d: d.update(created=7), "string"),
        (lambda d: d.update(provenance=[1]), "provenance"),
    ],
)
def test_parse_rejects_malformed(mutate, hint):
    doc = _base()
    mutate(doc)
    with pytest.raises(WitnessFormatError, match=hint):
        parse_witness(json.dumps(doc))


def test_parse_rejects_non_json():
    with pytest.raises(WitnessFormatError, match="JSON"):
        parse_witness("{nope")
    with pytest.raises(WitnessFormatError, match="object"):
        parse_witness("[1, 2]")


def test_elements_encoding_rejects_bad_elements():
    doc = _base()
    doc["encoding"] = "elements"
    doc["families"] = [[[1]], [[2, 9]]]
    with pytest.raises(WitnessFormatError, match="outside"):
        parse_witness(json.dumps(doc))
    doc["families"] = [[[1]], [[2, 2]]]
    with pytest.raises(WitnessFormatError, match="repeated"):
        parse_witness(json.dumps(doc))
    doc["families"] = [[[1]], [2]]
    with pytest.raises(WitnessFormatError, match="list"):
        parse_witness(json.dumps(doc))


def test_check_witness_flags_bad_measures():
    doc = _base()
    doc["measures"] = {"sum": 5, "product": 9}
    problems = check_witness(parse_witness(json.dumps(doc)))
    assert len(problems) == 2
    assert any("sum" in p for p in problems)
    assert any("product" in p for p in problems)


def test_check_witness_flags_comparability():
    doc = _base()
    doc["families"] = [[1], [3]]
    doc["measures"] = {"sum": 2, "product": 1}
    problems = check_witness(parse_witness(json.dumps(doc)))
    assert any("cross-Sperner" in p for p in problems)


def test_check_witness_flags_shared_set():
    doc = _base()
    doc["families"] = [[1, 2], [2, 4]]
    doc["measures"] = {"sum": 4, "product": 4}
    problems = check_witness(parse_witness(json.dumps(doc)))
    assert problems


def test_pair_sum_witness_checks():
    t = build_pair_sum(6)
    p = witness_payload(t)
    assert check_witness(p) == []
    assert "provenance" not in p
