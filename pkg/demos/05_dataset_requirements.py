"""Data set requirements for a pedestrian-height classifier.

Coverage cells come from the Cartesian product of partitionings, each cell
scaled by risk; boundary mining finds records that sit near partition edges;
spec-declared invariants and equivariants synthesize labeled records;
seeded stratified splitting is reproducible byte for byte; and the
uncertainty check sorts new inputs into known / known-unknown /
unknown-unknown territory.
"""
from specguard.dataset import (
    DataSetRequirements,
    LabeledRecord,
    Partition,
    Partitioning,
    SplitSpec,
    augment,
    boundary_cases,
    categorize_uncertainty,
    coverage_report,
    split,
)
from specguard.speccore.records import FeatureRecord
from specguard.speccore.spec import PartialSpec
from specguard.speccore.transforms import (
    AddOffset,
    FieldMap,
    LabelMap,
    Transformation,
)
from specguard.speclang.parser import parse
from specguard.speclang.schema import NumberType, Schema

schema = Schema(
    {"height": NumberType(), "distance": NumberType()},
    ("pedestrian", "not_pedestrian"),
)

stature = Partitioning(
    "stature",
    (
        Partition("short", parse("input.height < 8"), risk_weight=1),
        Partition("tall", parse("input.height >= 8"), risk_weight=2),
    ),
)
rng = Partitioning(
    "range",
    (
        Partition("near", parse("input.distance < 20"), risk_weight=2),
        Partition("far", parse("input.distance >= 20"), risk_weight=1),
    ),
)
reqs = DataSetRequirements(
    schema, (stature, rng), base_min_samples=1, risk_multiplier=2.0
)


def rec(rid, height, distance, label="pedestrian"):
    return LabeledRecord(FeatureRecord({"height": height, "distance": distance}, rid), label)


data = [
    rec("r1", 5.0, 10.0),
    rec("r2", 6.0, 12.0),
    rec("r3", 5.5, 30.0),
    rec("r4", 9.0, 8.0, "not_pedestrian"),
    rec("r5", 9.5, 9.0, "not_pedestrian"),
    rec("r6", 10.0, 40.0, "not_pedestrian"),
]

report = coverage_report(data, reqs)
print("coverage pass:", report.passed, f"({report.cell_coverage:.2f} of cells)")
for cell in report.cells:
    if cell["status"] != "satisfied":
        print("  lacking:", cell["cell"], f"{cell['count']}/{cell['required']:g} samples")

# The tall/far cell carries risk 2, so one sample is not enough. Collect more.
data.append(rec("r7", 11.0, 35.0, "not_pedestrian"))
print("after r7:", "pass" if coverage_report(data, reqs).passed else "fail")

# Records within half a unit of the stature boundary at height 8.
data.append(rec("r8", 7.8, 15.0))
cases, notices = boundary_cases(stature, data, epsilon=0.5)
for case in cases:
    print("boundary:", case["record"], "near", case["partition"], "by", case["distance"])
print("notices:", notices)

# Augmentation reuses the spec's declared symmetries. Jittering the distance
# never changes the label; reflecting the height across 8 flips it.
spec = PartialSpec(
    schema=schema,
    invariants=(Transformation("jitter", AddOffset("distance", 0.5)),),
    equivariants=(
        (
            Transformation(
                "reflect", FieldMap((("height", parse("16 - input.height")),))
            ),
            LabelMap({"pedestrian": "not_pedestrian", "not_pedestrian": "pedestrian"}),
        ),
    ),
)
grown = augment(data, spec)
print("\naugmented", len(data), "->", len(grown.records), "records, errors:", grown.errors)
sample = grown.records[-1]
print("sample:", sample.input.id, sample.label, sample.provenance)

# Splitting is seeded and stratified; the same seed always lands the same
# records in the same buckets.
split_spec = SplitSpec((0.6, 0.2, 0.2), seed=7, stratify_by=stature)
first = split(grown.records, split_spec)
second = split(list(reversed(grown.records)), split_spec)
print("\nsplit sizes:", first.sizes(), "notices:", first.notices)
print(
    "order-independent:",
    [r.input.id for r in first.train] == [r.input.id for r in second.train],
)

# Which probes does the data set (plus its symmetries) actually speak for?
probes = [
    FeatureRecord({"height": 5.0, "distance": 10.0}, "seen"),
    FeatureRecord({"height": 5.0, "distance": 11.0}, "two_jitters_away"),
    FeatureRecord({"height": 50.0, "distance": 10.0}, "giant"),
]
uncertainty = categorize_uncertainty(
    data, probes, [Transformation("jitter", AddOffset("distance", 0.5))], 4, schema
)
for entry in uncertainty.per_probe:
    print(entry)
print("fractions:", uncertainty.fractions)
