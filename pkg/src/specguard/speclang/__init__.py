"""Typed expression language for behavioural conditions over classifier IO."""
from .ast import Binary, Bool, Call, Expression, InputRef, Num, OutputRef, Str, Unary, to_source
from .evaluate import EQ_TOLERANCE, evaluate, evaluate_condition, numbers_equal
from .parser import parse
from .schema import (
    BooleanType,
    CategoryType,
    FieldType,
    GridType,
    IntegerType,
    NumberType,
    Schema,
    schema_from_json_dict,
    schema_to_json_dict,
    value_errors,
)
from .typecheck import type_errors, typecheck

__all__ = [
    "Binary",
    "Bool",
    "BooleanType",
    "Call",
    "CategoryType",
    "EQ_TOLERANCE",
    "Expression",
    "FieldType",
    "GridType",
    "InputRef",
    "IntegerType",
    "Num",
    "NumberType",
    "OutputRef",
    "Schema",
    "Str",
    "Unary",
    "evaluate",
    "evaluate_condition",
    "numbers_equal",
    "parse",
    "schema_from_json_dict",
    "schema_to_json_dict",
    "to_source",
    "type_errors",
    "typecheck",
    "value_errors",
]
