"""Partial behavioural specifications and offline model checks.

A partial spec does not say what the right label is for every input. It
pins down what any acceptable classifier must do: a precondition on inputs,
a postcondition on outputs, sufficient conditions that force a label,
necessary conditions every member of a label must meet, and metamorphic
relations (invariants and equivariants) between transformed inputs.
"""
from specguard.speccore.classifiers import ExpressionClassifier
from specguard.speccore.records import FeatureRecord, Prediction
from specguard.speccore.spec import (
    PartialSpec,
    check_equivariant,
    check_invariant,
    validate_spec,
)
from specguard.speccore.transforms import AddOffset, LabelMap, Scale, Transformation
from specguard.speclang.parser import parse
from specguard.speclang.schema import NumberType, Schema

schema = Schema({"height": NumberType()}, ("pedestrian", "not_pedestrian"))

spec = PartialSpec(
    schema=schema,
    precondition=parse("input.height > 0"),
    postcondition=parse("output.confidence >= 0.1"),
    sufficient={"pedestrian": (parse("input.height > 6 && input.height < 7"),)},
    necessary={"pedestrian": (parse("input.height < 8"),)},
    invariants=(Transformation("tiny_nudge", AddOffset("height", 0.001)),),
    equivariants=(
        (
            Transformation("mirror", Scale("height", -1.0)),
            LabelMap((("pedestrian", "not_pedestrian"), ("not_pedestrian", "pedestrian"))),
        ),
    ),
)

# A model under scrutiny: pedestrians are anything under 8 units tall.
model = ExpressionClassifier(
    ((parse("input.height < 8"), "pedestrian", 0.9),),
    default=Prediction("not_pedestrian", 0.9),
)

# Well-formedness: can the spec itself force contradictions on sample inputs?
samples = [FeatureRecord({"height": h}, f"s{i}") for i, h in enumerate((1.0, 6.5, 9.0))]
report = validate_spec(spec, samples)
print("spec static errors: ", list(report.static_errors))
print("forcing conflicts:  ", list(report.conflicts))
print("admits no output:   ", list(report.admits_no_output))

# Metamorphic checks compare the model against itself across transforms.
record = FeatureRecord({"height": 5.0}, "probe")
inv = check_invariant(model, spec.invariants[0], record, schema)
print("\ninvariant holds:", inv.holds, f"({inv.rhs.label} vs {inv.lhs.label})")

# The mirror equivariant catches this model: negating the height should
# swap the label, but the model calls anything under 8 a pedestrian.
eq = check_equivariant(model, spec.equivariants[0], record, schema)
print("equivariant holds:", eq.holds, f"(expected {eq.rhs.label}, model said {eq.lhs.label})")

# A spec survives serialization: what ships is a reviewable JSON document.
from specguard.speccore.spec import spec_to_json_dict

import json

print("\nspec as JSON:")
print(json.dumps(spec_to_json_dict(spec), indent=2, sort_keys=True)[:400], "...")
