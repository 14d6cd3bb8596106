"""Process-level utilities: method catalogs and impact scoring, the ML
decision gate, failure diagnosis plans, and safety-case traceability."""
from .catalog import (
    CATEGORIES,
    Asil,
    ImpactCell,
    Method,
    MethodType,
    Recommendation,
    ScoringCondition,
    catalog_from_json,
    filter_catalog,
    impact_table,
    load_catalog,
    mean_and_std,
    method_from_json_dict,
    method_to_json_dict,
    packaged_catalog_path,
    render_impact_text,
    render_score,
    score,
)
from .diagnosis import (
    CANONICAL_PLAN,
    DiagnosisPlan,
    FailureRecord,
    LifecyclePhase,
    QuestionGroup,
    diagnose,
    failure_from_json_dict,
    load_failure,
)
from .gate import (
    GateDecision,
    GateQuestionnaire,
    GateVerdict,
    gate_assess,
    load_questionnaire,
    questionnaire_from_json_dict,
)
from .safetycase import (
    Edge,
    EdgeKind,
    EvidenceKind,
    Gap,
    GapKind,
    GapReport,
    Node,
    NodeKind,
    RequirementKind,
    SafetyCaseGraph,
    graph_from_json_dict,
    load_graph,
    trace_check,
)

__all__ = [
    "CATEGORIES",
    "Asil",
    "ImpactCell",
    "Method",
    "MethodType",
    "Recommendation",
    "ScoringCondition",
    "catalog_from_json",
    "filter_catalog",
    "impact_table",
    "load_catalog",
    "mean_and_std",
    "method_from_json_dict",
    "method_to_json_dict",
    "packaged_catalog_path",
    "render_impact_text",
    "render_score",
    "score",
    "CANONICAL_PLAN",
    "DiagnosisPlan",
    "FailureRecord",
    "LifecyclePhase",
    "QuestionGroup",
    "diagnose",
    "failure_from_json_dict",
    "load_failure",
    "GateDecision",
    "GateQuestionnaire",
    "GateVerdict",
    "gate_assess",
    "load_questionnaire",
    "questionnaire_from_json_dict",
    "Edge",
    "EdgeKind",
    "EvidenceKind",
    "Gap",
    "GapKind",
    "GapReport",
    "Node",
    "NodeKind",
    "RequirementKind",
    "SafetyCaseGraph",
    "graph_from_json_dict",
    "load_graph",
    "trace_check",
]
