"""Input transformations and output transforms for metamorphic relations.

A Transformation rewrites an input record (shift a grid, scale a field,
remap fields through expressions). An OutputTransform says what the expected
prediction becomes: unchanged (invariant) or relabeled (equivariant).
"""
from __future__ import annotations

import copy
from dataclasses import dataclass
from typing import Any, Mapping, Union

from ..errors import FormatError, TransformError
from ..speclang.ast import Expression, to_source
from ..speclang.evaluate import evaluate
from ..speclang.parser import parse
from ..speclang.schema import (
    BooleanType,
    CategoryType,
    GridType,
    IntegerType,
    NumberType,
    Schema,
    is_number,
    value_errors,
)
from ..speclang.typecheck import BOOLEAN, NUMBER, STRING, type_errors, typecheck
from .records import FeatureRecord, Prediction

# --------------------------------------------------------------------------
# input transformations


@dataclass(frozen=True)
class ShiftGrid:
    """Translate a grid by (dx, dy): dx columns rightward, dy rows downward.
    Cells shifted in from outside take the fill value."""

    field: str
    dx: int = 0
    dy: int = 0
    fill: float = 0.0


@dataclass(frozen=True)
class Scale:
    field: str
    k: float = 1.0


@dataclass(frozen=True)
class AddOffset:
    field: str
    c: float = 0.0


@dataclass(frozen=True)
class SetField:
    field: str
    value: Any = None


@dataclass(frozen=True)
class FieldMap:
    """field -> input-only expression, all evaluated against the original
    record, then written at once."""

    assignments: tuple[tuple[str, Expression], ...]


Op = Union[ShiftGrid, Scale, AddOffset, SetField, FieldMap]


@dataclass(frozen=True)
class Transformation:
    name: str
    op: Op


_TAG_OF_FIELD = {
    NumberType: NUMBER,
    IntegerType: NUMBER,
    BooleanType: BOOLEAN,
    CategoryType: STRING,
}


def validate_transformation(t: Transformation, schema: Schema) -> list[str]:
    """Every way t fails to fit schema; empty when valid."""
    errors: list[str] = []
    op = t.op
    if isinstance(op, (ShiftGrid, Scale, AddOffset, SetField)):
        ftype = schema.fields.get(op.field)
        if ftype is None:
            errors.append(f"transformation {t.name!r} references unknown field {op.field!r}")
            return errors
        if isinstance(op, ShiftGrid):
            if not isinstance(ftype, GridType):
                errors.append(f"shift_grid in {t.name!r} needs a grid field, {op.field!r} is not")
            if not is_number(op.fill):
                errors.append(f"shift_grid fill in {t.name!r} must be a number")
        elif isinstance(op, (Scale, AddOffset)):
            if not isinstance(ftype, (NumberType, IntegerType, GridType)):
                errors.append(
                    f"transformation {t.name!r} needs a numeric or grid field, "
                    f"{op.field!r} is not"
                )
            amount = op.k if isinstance(op, Scale) else op.c
            if not is_number(amount):
                errors.append(f"transformation {t.name!r} amount must be a number")
        else:  # SetField
            errors.extend(
                f"transformation {t.name!r}: {e}" for e in value_errors(op.field, ftype, op.value)
            )
        return errors
    # FieldMap
    for field, expr in op.assignments:
        ftype = schema.fields.get(field)
        if ftype is None:
            errors.append(f"transformation {t.name!r} assigns unknown field {field!r}")
            continue
        if isinstance(ftype, GridType):
            errors.append(f"transformation {t.name!r}: field_map cannot assign grid {field!r}")
            continue
        expr_errors = type_errors(expr, schema, output_allowed=False)
        if expr_errors:
            errors.extend(f"transformation {t.name!r}, field {field!r}: {e}" for e in expr_errors)
            continue
        tag = typecheck(expr, schema, output_allowed=False)
        want = _TAG_OF_FIELD[type(ftype)]
        if tag != want:
            errors.append(
                f"transformation {t.name!r} assigns a {tag} to {field!r}, which holds a {want}"
            )
    return errors


def _require_integral(t: Transformation, field: str, value: float) -> float:
    if float(value) != int(value):
        raise TransformError(
            f"transformation {t.name!r} produced non-integer {value!r} "
            f"for integer field {field!r}"
        )
    return float(value)


def _shift_grid(op: ShiftGrid, grid: list) -> list:
    n_rows = len(grid)
    n_cols = len(grid[0]) if grid else 0
    out = []
    for r in range(n_rows):
        row = []
        for c in range(n_cols):
            src_r, src_c = r - op.dy, c - op.dx
            if 0 <= src_r < n_rows and 0 <= src_c < n_cols:
                row.append(grid[src_r][src_c])
            else:
                row.append(op.fill)
        out.append(row)
    return out


def apply_transformation(
    t: Transformation, record: FeatureRecord, schema: Schema
) -> FeatureRecord:
    """Apply t to a record, returning a fresh record (no id, original untouched).

    Raises TransformError when the record's shape defeats the operation or an
    integer field would receive a non-integer value.
    """
    fields = copy.deepcopy(dict(record.fields))
    op = t.op
    if isinstance(op, (ShiftGrid, Scale, AddOffset, SetField)):
        if op.field not in fields:
            raise TransformError(f"transformation {t.name!r}: record has no field {op.field!r}")
        ftype = schema.fields.get(op.field)
        value = fields[op.field]
        if isinstance(op, ShiftGrid):
            if not isinstance(value, list) or any(not isinstance(r, list) for r in value):
                raise TransformError(f"transformation {t.name!r}: {op.field!r} is not a grid")
            fields[op.field] = _shift_grid(op, value)
        elif isinstance(op, (Scale, AddOffset)):
            def change(x: float) -> float:
                return x * op.k if isinstance(op, Scale) else x + op.c

            if isinstance(value, list):
                fields[op.field] = [[change(cell) for cell in row] for row in value]
            else:
                if not is_number(value):
                    raise TransformError(
                        f"transformation {t.name!r}: {op.field!r} is not numeric"
                    )
                result = change(float(value))
                if isinstance(ftype, IntegerType):
                    result = _require_integral(t, op.field, result)
                fields[op.field] = result
        else:
            fields[op.field] = copy.deepcopy(op.value)
    else:
        originals = dict(record.fields)
        updates: dict[str, Any] = {}
        for field, expr in op.assignments:
            try:
                result = evaluate(expr, originals)
            except Exception as exc:
                raise TransformError(
                    f"transformation {t.name!r}, field {field!r}: {exc}"
                ) from exc
            if isinstance(schema.fields.get(field), IntegerType):
                result = _require_integral(t, field, result)
            updates[field] = result
        fields.update(updates)
    return FeatureRecord(fields, id=None)


# --------------------------------------------------------------------------
# output transforms


@dataclass(frozen=True)
class IdentityOutput:
    pass


@dataclass(frozen=True)
class LabelMap:
    mapping: tuple[tuple[str, str], ...]


OutputTransform = Union[IdentityOutput, LabelMap]


def validate_output_transform(g: OutputTransform, schema: Schema) -> list[str]:
    if isinstance(g, IdentityOutput):
        return []
    errors = []
    mapping = dict(g.mapping)
    for label in schema.labels:
        if label not in mapping:
            errors.append(f"label_map misses label {label!r}")
    for src, dst in g.mapping:
        if src not in schema.labels:
            errors.append(f"label_map maps unknown label {src!r}")
        if dst not in schema.labels:
            errors.append(f"label_map targets unknown label {dst!r}")
    return errors


def apply_output_transform(g: OutputTransform, prediction: Prediction) -> Prediction:
    if isinstance(g, IdentityOutput):
        return prediction
    mapping = dict(g.mapping)
    if prediction.label not in mapping:
        raise TransformError(f"label_map has no entry for label {prediction.label!r}")
    return Prediction(mapping[prediction.label], prediction.confidence)


# --------------------------------------------------------------------------
# JSON forms


def transformation_from_json_dict(data: Any) -> Transformation:
    if not isinstance(data, dict):
        raise FormatError("transformation must be a JSON object")
    name = data.get("name")
    if not isinstance(name, str) or not name:
        raise FormatError("transformation needs a non-empty string 'name'")
    kind = data.get("kind")

    def num(key: str, default: float | None = None) -> float:
        value = data.get(key, default)
        if not is_number(value):
            raise FormatError(f"transformation {name!r} key {key!r} must be a number")
        return float(value)

    def field_name() -> str:
        field = data.get("field")
        if not isinstance(field, str):
            raise FormatError(f"transformation {name!r} needs a string 'field'")
        return field

    if kind == "shift_grid":
        return Transformation(
            name,
            ShiftGrid(field_name(), int(num("dx", 0)), int(num("dy", 0)), num("fill", 0.0)),
        )
    if kind == "scale":
        return Transformation(name, Scale(field_name(), num("k")))
    if kind == "add":
        return Transformation(name, AddOffset(field_name(), num("c")))
    if kind == "set":
        if "value" not in data:
            raise FormatError(f"transformation {name!r} needs a 'value'")
        return Transformation(name, SetField(field_name(), data["value"]))
    if kind == "field_map":
        raw = data.get("map")
        if not isinstance(raw, dict) or not raw:
            raise FormatError(f"transformation {name!r} needs a non-empty 'map' object")
        assignments = []
        for field, source in sorted(raw.items()):
            if not isinstance(source, str):
                raise FormatError(f"transformation {name!r} field {field!r} must map to a string")
            assignments.append((field, parse(source)))
        return Transformation(name, FieldMap(tuple(assignments)))
    raise FormatError(f"transformation {name!r} has unknown kind {kind!r}")


def transformation_to_json_dict(t: Transformation) -> dict:
    op = t.op
    if isinstance(op, ShiftGrid):
        return {
            "name": t.name,
            "kind": "shift_grid",
            "field": op.field,
            "dx": op.dx,
            "dy": op.dy,
            "fill": op.fill,
        }
    if isinstance(op, Scale):
        return {"name": t.name, "kind": "scale", "field": op.field, "k": op.k}
    if isinstance(op, AddOffset):
        return {"name": t.name, "kind": "add", "field": op.field, "c": op.c}
    if isinstance(op, SetField):
        return {"name": t.name, "kind": "set", "field": op.field, "value": op.value}
    return {
        "name": t.name,
        "kind": "field_map",
        "map": {field: to_source(expr) for field, expr in op.assignments},
    }


def output_transform_from_json_dict(data: Any) -> OutputTransform:
    if not isinstance(data, dict):
        raise FormatError("output transform must be a JSON object")
    kind = data.get("kind")
    if kind == "identity":
        return IdentityOutput()
    if kind == "label_map":
        raw = data.get("map")
        if not isinstance(raw, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in raw.items()
        ):
            raise FormatError("label_map needs a 'map' of string to string")
        return LabelMap(tuple(sorted(raw.items())))
    raise FormatError(f"output transform has unknown kind {kind!r}")


def output_transform_to_json_dict(g: OutputTransform) -> dict:
    if isinstance(g, IdentityOutput):
        return {"kind": "identity"}
    return {"kind": "label_map", "map": dict(g.mapping)}
