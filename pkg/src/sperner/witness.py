"""Witness files: a small JSON format for cross-Sperner tuples.

A witness records one concrete tuple together with its measures and
enough provenance to rebuild it.  Serialization is canonical (sorted
keys, two-space indent, families in canonical order, trailing newline),
so a loaded witness re-serializes to the identical bytes and witnesses
can be compared as files.

Loading validates the *format* only and raises WitnessFormatError on
any malformed input.  Whether the tuple actually is cross-Sperner and
whether the recorded measures match is a semantic question answered by
:func:`check_witness`.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from typing import Any

from .errors import WitnessFormatError
from .lattice import MAX_GROUND, Family, FamilyTuple, is_cross_sperner

SCHEMA_VERSION = 1

_TOP_KEYS = {
    "schema_version",
    "n",
    "k",
    "encoding",
    "families",
    "measures",
    "provenance",
    "created",
}
_REQUIRED_KEYS = _TOP_KEYS - {"provenance"}


def _utc_now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def witness_payload(
    t: FamilyTuple,
    provenance: dict[str, Any] | None = None,
    created: str | None = None,
) -> dict[str, Any]:
    """Build the witness dict for a tuple, families in canonical order."""
    payload: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "n": t.n,
        "k": t.k,
        "encoding": "mask",
        "families": [list(masks) for masks in t.canonical_key()],
        "measures": {"sum": t.sum_size(), "product": t.product_size()},
        "created": created if created is not None else _utc_now(),
    }
    if provenance is not None:
        payload["provenance"] = provenance
    return payload


def dumps_witness(payload: dict[str, Any]) -> str:
    """Canonical serialization: byte-stable across dump/load/dump."""
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def write_witness(path: str, payload: dict[str, Any]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_witness(payload))


def _fail(msg: str) -> None:
    raise WitnessFormatError(msg)


def _check_int(value: Any, what: str) -> int:
    # bool is an int subclass but never a set encoding
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(f"{what} must be an integer, got {value!r}")
    return value


def _mask_from_elements(raw: Any, n: int, where: str) -> int:
    if not isinstance(raw, list):
        _fail(f"{where} must be a list of elements")
    mask = 0
    for e in raw:
        _check_int(e, f"element in {where}")
        if not 1 <= e <= n:
            _fail(f"element {e} in {where} outside 1..{n}")
        bit = 1 << (e - 1)
        if mask & bit:
            _fail(f"repeated element {e} in {where}")
        mask |= bit
    return mask


def parse_witness(text: str) -> dict[str, Any]:
    """Parse and validate witness JSON, normalizing to mask encoding.

    The returned payload always has encoding "mask" with families in
    canonical order; for a canonically dumped input this is a no-op and
    dumps_witness(parse_witness(text)) == text.
    """
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise WitnessFormatError(f"not valid JSON: {e}") from None
    if not isinstance(payload, dict):
        _fail("top level must be a JSON object")

    unknown = set(payload) - _TOP_KEYS
    if unknown:
        _fail(f"unknown keys: {sorted(unknown)}")
    missing = _REQUIRED_KEYS - set(payload)
    if missing:
        _fail(f"missing keys: {sorted(missing)}")

    if payload["schema_version"] != SCHEMA_VERSION:
        _fail(f"unsupported schema_version {payload['schema_version']!r}")
    n = _check_int(payload["n"], "n")
    if not 1 <= n <= MAX_GROUND:
        _fail(f"n={n} outside 1..{MAX_GROUND}")
    k = _check_int(payload["k"], "k")
    if k < 1:
        _fail(f"k={k} must be positive")

    encoding = payload["encoding"]
    if encoding not in ("mask", "elements"):
        _fail(f"unknown encoding {encoding!r}")

    families = payload["families"]
    if not isinstance(families, list):
        _fail("families must be a list")
    if len(families) != k:
        _fail(f"families has {len(families)} entries, expected k={k}")

    norm: list[list[int]] = []
    for i, fam in enumerate(families):
        if not isinstance(fam, list) or not fam:
            _fail(f"family {i} must be a non-empty list")
        masks: list[int] = []
        for item in fam:
            if encoding == "mask":
                m = _check_int(item, f"mask in family {i}")
            else:
                m = _mask_from_elements(item, n, f"set in family {i}")
            if not 0 < m < (1 << n) - 1:
                _fail(
                    f"mask {m} in family {i} is not a proper non-empty "
                    f"subset of [{n}]"
                )
            masks.append(m)
        if len(set(masks)) != len(masks):
            _fail(f"family {i} repeats a set")
        norm.append(sorted(masks))
    norm.sort()

    measures = payload["measures"]
    if not isinstance(measures, dict) or set(measures) != {"sum", "product"}:
        _fail("measures must be an object with exactly the keys sum and product")
    _check_int(measures["sum"], "measures.sum")
    _check_int(measures["product"], "measures.product")

    created = payload["created"]
    if not isinstance(created, str):
        _fail("created must be a string timestamp")
    if "provenance" in payload and not isinstance(payload["provenance"], dict):
        _fail("provenance must be an object")

    out: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "n": n,
        "k": k,
        "encoding": "mask",
        "families": norm,
        "measures": {"sum": measures["sum"], "product": measures["product"]},
        "created": created,
    }
    if "provenance" in payload:
        out["provenance"] = payload["provenance"]
    return out


def load_witness(path: str) -> dict[str, Any]:
    with open(path, encoding="utf-8") as fh:
        return parse_witness(fh.read())


def tuple_of_witness(payload: dict[str, Any]) -> FamilyTuple:
    """Materialize the recorded tuple.  Raises the usual construction
    errors if the families are not disjoint."""
    fams = tuple(Family.from_masks(payload["n"], f) for f in payload["families"])
    return FamilyTuple(payload["n"], fams)


def check_witness(payload: dict[str, Any]) -> list[str]:
    """Semantic checks on a parsed witness: the tuple must be
    cross-Sperner and the recorded measures must match.  Returns the
    list of problems, empty when the witness is good."""
    problems: list[str] = []
    try:
        t = tuple_of_witness(payload)
    except Exception as e:
        return [f"families do not form a tuple: {e}"]
    check = is_cross_sperner(t)
    if not check.ok:
        v = check.violation
        problems.append(
            f"not cross-Sperner: mask {v.mask_i} in family {v.i} is "
            f"comparable to mask {v.mask_j} in family {v.j}"
        )
    if t.sum_size() != payload["measures"]["sum"]:
        problems.append(
            f"sum measure is {t.sum_size()}, file says {payload['measures']['sum']}"
        )
    if t.product_size() != payload["measures"]["product"]:
        problems.append(
            f"product measure is {t.product_size()}, "
            f"file says {payload['measures']['product']}"
        )
    return problems
