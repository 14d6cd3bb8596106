"""The condition language: parse, typecheck, evaluate.

Conditions over classifier inputs and outputs are ordinary boolean
expressions: field references, arithmetic, comparisons, boolean connectives,
and a few grid helpers. This demo walks one expression through all three
stages and then shows the kinds of mistakes each stage catches.
"""
from specguard.errors import EvalError, SpecSyntaxError, TypeCheckError
from specguard.speclang.ast import to_source
from specguard.speclang.parser import parse
from specguard.speclang.schema import GridType, NumberType, Schema
from specguard.speclang.typecheck import typecheck
from specguard.speclang.evaluate import evaluate

schema = Schema(
    {"height": NumberType(), "img": GridType(3, 3)},
    labels=("pedestrian", "not_pedestrian"),
)

source = "input.height > 1.2 && sum(input.img) >= 3"
expr = parse(source)
print("source:   ", source)
print("reprinted:", to_source(expr))
print("type:     ", typecheck(expr, schema, output_allowed=False))

fields = {"height": 1.8, "img": [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]}
print("value:    ", evaluate(expr, fields))

# The parser reports positions; comparisons do not chain.
try:
    parse("1 < input.height < 3")
except SpecSyntaxError as exc:
    print("\nparse failure:", exc)

# The typechecker collects every error, not just the first.
try:
    typecheck(parse("input.height + true || input.ghost"), schema, output_allowed=False)
except TypeCheckError as exc:
    print("\ntype errors:")
    for err in exc.errors:
        print("  -", err)

# Output references are only legal where an output exists (postconditions).
post = parse('output.label == "pedestrian" && output.confidence > 0.5')
print("\npostcondition type:", typecheck(post, schema, output_allowed=True))
try:
    typecheck(post, schema, output_allowed=False)
except TypeCheckError as exc:
    print("same expression as a precondition:", exc.errors[0])

# Evaluation failures carry context too.
try:
    evaluate(parse("input.height / 0"), fields)
except EvalError as exc:
    print("\nevaluation error:", exc)
