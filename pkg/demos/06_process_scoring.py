"""Process-level support: method scoring, the ML decision gate, diagnosis.

The method catalog records, per development method, how strongly each ASIL
recommends it and whether it survives two ML handicaps: no complete
specification, no interpretable internals. Scoring a catalog under a
condition yields the fraction of recommendation weight that remains. The
gate walks a four-question chain before ML is allowed at all, and the
diagnosis planner orders the review questions to ask once a failure shows up.
"""
from specguard.process.catalog import (
    Asil,
    MethodType,
    ScoringCondition,
    filter_catalog,
    impact_table,
    load_catalog,
    mean_and_std,
    packaged_catalog_path,
    render_impact_text,
    render_score,
    score,
)
from specguard.process.diagnosis import FailureRecord, diagnose
from specguard.process.gate import GateQuestionnaire, gate_assess

# Fault-tolerance mechanisms keep most of their value without a complete
# spec: they constrain outputs rather than verify them against one.
error_handling = load_catalog(packaged_catalog_path("error-handling"))
print("error-handling methods:", [m.id for m in error_handling])
per_asil = [
    score(error_handling, ScoringCondition.NO_SPECIFICATION, asil) for asil in Asil
]
for asil, value in zip(Asil, per_asil):
    print(f"  ASIL {asil.value}: {render_score(value)}")
mean, std = mean_and_std(per_asil)
print(f"  mean {render_score(mean)}  std {std:.4f}")

# The full catalog shows where the handicaps actually bite: verification
# collapses without a spec, testing barely notices missing interpretability.
full = load_catalog(packaged_catalog_path("full"))
print("\nfull catalog:", len(full), "methods")
print(render_impact_text(impact_table(full)))
testing = filter_catalog(full, method_type=MethodType.TESTING)
print("testing methods alone:", len(testing))

# Gate: is ML even the right tool for this requirement?
questionnaire = GateQuestionnaire(
    completely_specifiable=False,
    strengthenable=True,
    strengthened_functionality_acceptable=False,
    splittable=True,
    rationales={"splittable": "preprocessing is rule-based; only ranking needs ML"},
)
decision = gate_assess(questionnaire)
print("\ngate verdict:", decision.verdict.value)
print("because:", decision.rationale)

# Diagnosis: a failure seen during testing starts the review at the testing
# questions and then falls back to the canonical order.
plan = diagnose(
    FailureRecord(
        "misses pedestrians at dusk",
        phase_hint="testing",
        failing_record_ids=("t41", "t87"),
    )
)
print("\ndiagnosis order:")
for group in plan.groups[:4]:
    print(f"  [{group.phase.value}] {', '.join(group.requirement_ids)}")
print(f"  ... {len(plan.groups) - 4} more groups")
