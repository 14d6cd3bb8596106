"""Feature records and predictions, plus schema conformance and identity keys."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

from ..errors import FormatError
from ..speclang.schema import Schema, is_number, value_errors


@dataclass(frozen=True)
class FeatureRecord:
    """One classifier input: field name -> value, with an optional id."""

    fields: dict[str, Any] = field(default_factory=dict)
    id: Optional[str] = None


@dataclass(frozen=True)
class Prediction:
    """A classifier output: a label and an optional confidence in [0, 1]."""

    label: str
    confidence: Optional[float] = None


def conformance_errors(fields: Mapping[str, Any], schema: Schema) -> list[str]:
    """Every way the record fails its schema: missing fields, unknown fields,
    and per-field type violations. Empty when the record conforms."""
    errors: list[str] = []
    for name in schema.fields:
        if name not in fields:
            errors.append(f"missing field {name!r}")
    for name in fields:
        if name not in schema.fields:
            errors.append(f"unknown field {name!r}")
    for name, ftype in schema.fields.items():
        if name in fields:
            errors.extend(value_errors(name, ftype, fields[name]))
    return errors


def prediction_errors(prediction: Prediction, schema: Schema) -> list[str]:
    """Check a prediction against the schema's label alphabet."""
    errors: list[str] = []
    if prediction.label not in schema.labels:
        errors.append(f"label {prediction.label!r} is not in the alphabet {list(schema.labels)}")
    if prediction.confidence is not None:
        if not is_number(prediction.confidence) or not 0.0 <= float(prediction.confidence) <= 1.0:
            errors.append(f"confidence {prediction.confidence!r} is not in [0, 1]")
    return errors


def _canonical_value(value: Any) -> Any:
    if isinstance(value, bool):
        return ["b", value]
    if isinstance(value, (int, float)):
        # %.17g round-trips every float; +0.0 so -0.0 and 0.0 collapse.
        return ["n", "%.17g" % (float(value) + 0.0,)]
    if isinstance(value, str):
        return ["s", value]
    if isinstance(value, list):
        return ["l", [_canonical_value(v) for v in value]]
    raise FormatError(f"value {value!r} cannot appear in a record")


def canonical_key(fields: Mapping[str, Any]) -> str:
    """A stable text identity for a record's input fields.

    Two field maps get the same key exactly when they hold the same values
    (3 and 3.0 collapse, -0.0 and 0.0 collapse, key order never matters).
    Used for deduplication and reachability memoization.
    """
    shaped = {name: _canonical_value(value) for name, value in fields.items()}
    return json.dumps(shaped, sort_keys=True, separators=(",", ":"))


def record_from_json_dict(data: Any) -> FeatureRecord:
    """Read {"id"?: str, <field>: value, ...} or {"id"?, "input": {...}}."""
    if not isinstance(data, dict):
        raise FormatError(f"record must be a JSON object, got {type(data).__name__}")
    rid = data.get("id")
    if rid is not None and not isinstance(rid, str):
        raise FormatError(f"record id must be a string, got {rid!r}")
    if "input" in data:
        inner = data["input"]
        if not isinstance(inner, dict):
            raise FormatError("record key 'input' must be an object")
        return FeatureRecord(dict(inner), rid)
    fields = {k: v for k, v in data.items() if k != "id"}
    return FeatureRecord(fields, rid)


def record_to_json_dict(record: FeatureRecord) -> dict:
    data: dict[str, Any] = {"input": dict(record.fields)}
    if record.id is not None:
        data["id"] = record.id
    return data
