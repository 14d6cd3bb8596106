"""Fault-tolerance architecture patterns around classifiers.

Six composable wrappers: ensembles with vote fusion, a simplex fallback on
low confidence, spec-gated classification, a safety envelope splitting
safety-critical from advisory output, low-confidence input harvesting, and an
exhaustive simulation harness measuring each pattern's effect on error rate.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Mapping, Optional, Sequence, Union

from .errors import (
    ClassifierError,
    EvalError,
    FormatError,
    PatternConfigError,
    PatternError,
)
from .monitor import TraceRecord
from .speccore.classifiers import (
    Classifier,
    ExpressionClassifier,
    load_classifier,
)
from .speccore.records import FeatureRecord, Prediction
from .speccore.spec import PartialSpec, load_spec
from .speclang.evaluate import evaluate_condition
from .speclang.schema import is_number


class FusionMode(Enum):
    MAJORITY = "MAJORITY"
    CONFIDENCE_WEIGHTED = "CONFIDENCE_WEIGHTED"


class DecisionSource(Enum):
    PRIMARY = "PRIMARY"
    FALLBACK = "FALLBACK"
    SPEC = "SPEC"
    ML = "ML"
    ENSEMBLE = "ENSEMBLE"
    SAFETY = "SAFETY"
    CLASSIFIER = "CLASSIFIER"


# --------------------------------------------------------------------------
# configs


@dataclass(frozen=True)
class EnsembleConfig:
    members: tuple[Classifier, ...]
    fusion: FusionMode = FusionMode.MAJORITY

    def __post_init__(self) -> None:
        if not self.members:
            raise PatternConfigError("an ensemble needs at least one member")


@dataclass(frozen=True)
class SimplexConfig:
    primary: Classifier
    fallback: Classifier
    threshold: float = 0.5

    def __post_init__(self) -> None:
        if not 0.0 <= self.threshold <= 1.0:
            raise PatternConfigError("simplex threshold must be in [0, 1]")


@dataclass(frozen=True)
class GatedConfig:
    spec: PartialSpec
    ml: Classifier


@dataclass(frozen=True)
class EnvelopeConfig:
    """safety must be a programmed (expression) classifier: the guarantee is
    that the safety-critical output never comes from a learned component."""

    safety: ExpressionClassifier
    advisory: Classifier

    def __post_init__(self) -> None:
        if not isinstance(self.safety, ExpressionClassifier):
            raise PatternConfigError("the envelope safety classifier must be expression-driven")


Pattern = Union[EnsembleConfig, SimplexConfig, GatedConfig, EnvelopeConfig]
Subject = Union[Pattern, Classifier]


# --------------------------------------------------------------------------
# decisions


@dataclass(frozen=True)
class EnsembleDecision:
    prediction: Prediction
    tie: bool
    mass: dict[str, float]  # per-label vote mass


@dataclass(frozen=True)
class SimplexDecision:
    prediction: Prediction
    source: DecisionSource  # PRIMARY | FALLBACK


@dataclass(frozen=True)
class GatedDecision:
    prediction: Prediction
    source: DecisionSource  # SPEC | ML
    mode: Optional[str] = None  # "sufficient" | "elimination" for SPEC
    note: Optional[str] = None


@dataclass(frozen=True)
class EnvelopeDecision:
    safety_prediction: Prediction
    advisory_prediction: Optional[Prediction]
    advisory_error: Optional[str] = None


# --------------------------------------------------------------------------
# pattern operations


def ensemble_fuse(config: EnsembleConfig, fields: Mapping[str, Any]) -> EnsembleDecision:
    """Fuse member predictions into one.

    MAJORITY gives each member one vote; CONFIDENCE_WEIGHTED weights a vote
    by its confidence (missing confidence counts 1.0). The fused confidence
    is winning mass / total mass. Ties go to the lexicographically smallest
    label and are flagged.
    """
    mass: dict[str, float] = {}
    total = 0.0
    for index, member in enumerate(config.members):
        try:
            prediction = member.classify(fields)
        except (ClassifierError, EvalError) as exc:
            raise PatternError(f"ensemble member {index} failed: {exc}") from exc
        if config.fusion is FusionMode.MAJORITY:
            weight = 1.0
        else:
            weight = 1.0 if prediction.confidence is None else float(prediction.confidence)
        mass[prediction.label] = mass.get(prediction.label, 0.0) + weight
        total += weight
    best = max(mass.values())
    winners = sorted(label for label, m in mass.items() if m == best)
    label = winners[0]
    confidence = (best / total) if total > 0 else 0.0
    return EnsembleDecision(Prediction(label, confidence), len(winners) > 1, mass)


def simplex_decide(config: SimplexConfig, fields: Mapping[str, Any]) -> SimplexDecision:
    """Use the primary when its confidence clears the threshold, otherwise
    fall back to the (verified, conservative) fallback classifier."""
    try:
        primary = config.primary.classify(fields)
    except (ClassifierError, EvalError) as exc:
        raise PatternError(f"simplex primary failed: {exc}") from exc
    if primary.confidence is None:
        raise PatternConfigError(
            "simplex primary produced no confidence; the pattern cannot arbitrate"
        )
    if primary.confidence >= config.threshold:
        return SimplexDecision(primary, DecisionSource.PRIMARY)
    try:
        fallback = config.fallback.classify(fields)
    except (ClassifierError, EvalError) as exc:
        raise PatternError(f"simplex fallback failed: {exc}") from exc
    return SimplexDecision(fallback, DecisionSource.FALLBACK)


def gated_classify(config: GatedConfig, fields: Mapping[str, Any]) -> GatedDecision:
    """Let the spec decide when it can; consult the ML component otherwise.

    A label with a satisfied sufficient condition wins outright. Failing
    that, labels whose necessary conditions are violated are eliminated; if
    exactly one label survives, it wins (mode "elimination" marks this
    extension). Everything else passes through to the ML classifier.
    """
    spec = config.spec
    satisfied = []
    for label, exprs in spec.sufficient.items():
        if any(evaluate_condition(e, fields) for e in exprs):
            satisfied.append(label)
    if len(satisfied) > 1:
        raise PatternError(
            "sufficient conditions of labels "
            + ", ".join(repr(l) for l in sorted(satisfied))
            + " all hold on this input; the spec is inconsistent (see validate_spec)"
        )
    if len(satisfied) == 1:
        return GatedDecision(
            Prediction(satisfied[0], 1.0), DecisionSource.SPEC, mode="sufficient"
        )
    remaining = []
    for label in spec.schema.labels:
        eliminated = any(
            not evaluate_condition(e, fields) for e in spec.necessary.get(label, ())
        )
        if not eliminated:
            remaining.append(label)
    if len(remaining) == 1:
        return GatedDecision(
            Prediction(remaining[0], 1.0), DecisionSource.SPEC, mode="elimination"
        )
    note = "all labels eliminated by necessary conditions" if not remaining else None
    try:
        prediction = config.ml.classify(fields)
    except (ClassifierError, EvalError) as exc:
        raise PatternError(f"gated ML member failed: {exc}") from exc
    return GatedDecision(prediction, DecisionSource.ML, note=note)


def envelope_route(config: EnvelopeConfig, fields: Mapping[str, Any]) -> EnvelopeDecision:
    """Run the programmed safety classifier and the ML advisory component
    side by side; never fuse them. Advisory failure is reported, not raised."""
    try:
        safety = config.safety.classify(fields)
    except (ClassifierError, EvalError) as exc:
        raise PatternError(f"envelope safety classifier failed: {exc}") from exc
    try:
        advisory: Optional[Prediction] = config.advisory.classify(fields)
        advisory_error = None
    except (ClassifierError, EvalError) as exc:
        advisory = None
        advisory_error = str(exc)
    return EnvelopeDecision(safety, advisory, advisory_error)


# --------------------------------------------------------------------------
# data harvesting


@dataclass
class HarvestStore:
    """Append-only store of inputs the classifier was unsure about."""

    threshold: float = 0.5
    entries: list[tuple[TraceRecord, str]] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not 0.0 <= self.threshold <= 1.0:
            raise PatternConfigError("harvest threshold must be in [0, 1]")


def harvest(store: HarvestStore, record: TraceRecord) -> bool:
    """Store the record iff its confidence is below the threshold or absent."""
    confidence = record.output.confidence
    if confidence is None:
        store.entries.append((record, "no confidence"))
        return True
    if confidence < store.threshold:
        store.entries.append((record, f"confidence {confidence} < {store.threshold}"))
        return True
    return False


# --------------------------------------------------------------------------
# simulation harness


def decide(subject: Subject, fields: Mapping[str, Any]) -> tuple[Prediction, DecisionSource]:
    """One prediction plus its source tag, for any pattern or bare classifier.
    The envelope's subject output is its safety prediction (the safety
    channel is the one carrying guarantees)."""
    if isinstance(subject, EnsembleConfig):
        return ensemble_fuse(subject, fields).prediction, DecisionSource.ENSEMBLE
    if isinstance(subject, SimplexConfig):
        decision = simplex_decide(subject, fields)
        return decision.prediction, decision.source
    if isinstance(subject, GatedConfig):
        gated = gated_classify(subject, fields)
        return gated.prediction, gated.source
    if isinstance(subject, EnvelopeConfig):
        return envelope_route(subject, fields).safety_prediction, DecisionSource.SAFETY
    try:
        return subject.classify(fields), DecisionSource.CLASSIFIER
    except (ClassifierError, EvalError) as exc:
        raise PatternError(f"classifier failed: {exc}") from exc


@dataclass
class ErrorReport:
    """simulate() output: how often the subject disagrees with the oracle."""

    total: int
    mismatches: list[dict]
    per_source: dict[str, dict[str, int]]
    errors: list[dict]

    @property
    def error_rate(self) -> float:
        if self.total == 0:
            return 0.0
        return len(self.mismatches) / self.total

    def to_json_dict(self) -> dict:
        return {
            "total": self.total,
            "error_rate": self.error_rate,
            "mismatch_count": len(self.mismatches),
            "mismatches": self.mismatches,
            "per_source": self.per_source,
            "errors": self.errors,
        }


def simulate(
    domain: Sequence[FeatureRecord], oracle: Classifier, subject: Subject
) -> ErrorReport:
    """Compare the subject against the oracle on every record of the domain.

    The oracle is ground truth: its failure on any record aborts the run. A
    subject failure counts as a mismatch (a wrong answer is a wrong answer)
    and is additionally listed under errors.
    """
    mismatches: list[dict] = []
    errors: list[dict] = []
    per_source: dict[str, dict[str, int]] = {}
    for index, record in enumerate(domain):
        ref = record.id if record.id is not None else f"#{index}"
        try:
            expected = oracle.classify(record.fields)
        except (ClassifierError, EvalError) as exc:
            raise PatternError(f"oracle failed on record {ref}: {exc}") from exc
        try:
            prediction, source = decide(subject, record.fields)
        except (PatternError, PatternConfigError) as exc:
            errors.append({"record": ref, "error": str(exc)})
            mismatches.append(
                {"record": ref, "source": "ERROR", "expected": expected.label}
            )
            bucket = per_source.setdefault("ERROR", {"records": 0, "mismatches": 0})
            bucket["records"] += 1
            bucket["mismatches"] += 1
            continue
        bucket = per_source.setdefault(source.value, {"records": 0, "mismatches": 0})
        bucket["records"] += 1
        if prediction.label != expected.label:
            bucket["mismatches"] += 1
            mismatches.append(
                {
                    "record": ref,
                    "source": source.value,
                    "predicted": prediction.label,
                    "expected": expected.label,
                }
            )
    return ErrorReport(len(domain), mismatches, per_source, errors)


# --------------------------------------------------------------------------
# harness files


def load_harness(path: Union[str, Path]) -> Subject:
    """Read a pattern harness: JSON naming the pattern and its parts, with
    classifier and spec files referenced relative to the harness file.

    {"pattern": "ensemble", "members": [...], "fusion": "majority"}
    {"pattern": "simplex", "primary": p, "fallback": f, "threshold": 0.5}
    {"pattern": "gated", "spec": s, "ml": m}
    {"pattern": "envelope", "safety": s, "advisory": a}
    {"pattern": "classifier", "classifier": c}
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise FormatError(f"cannot read harness file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"harness file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise FormatError("harness must be a JSON object")
    base = path.parent

    def sub_classifier(key: str) -> Classifier:
        ref = data.get(key)
        if not isinstance(ref, str):
            raise FormatError(f"harness key {key!r} must be a classifier file path")
        return load_classifier(base / ref)

    kind = data.get("pattern")
    if kind == "ensemble":
        refs = data.get("members")
        if not isinstance(refs, list) or not refs or not all(isinstance(r, str) for r in refs):
            raise FormatError("ensemble harness needs a non-empty 'members' list of paths")
        fusion_name = data.get("fusion", "majority")
        try:
            fusion = FusionMode[str(fusion_name).upper()]
        except KeyError:
            raise FormatError(f"unknown fusion mode {fusion_name!r}") from None
        return EnsembleConfig(tuple(load_classifier(base / r) for r in refs), fusion)
    if kind == "simplex":
        threshold = data.get("threshold", 0.5)
        if not is_number(threshold):
            raise FormatError("simplex threshold must be a number")
        return SimplexConfig(
            sub_classifier("primary"), sub_classifier("fallback"), float(threshold)
        )
    if kind == "gated":
        ref = data.get("spec")
        if not isinstance(ref, str):
            raise FormatError("gated harness needs a 'spec' file path")
        return GatedConfig(load_spec(base / ref), sub_classifier("ml"))
    if kind == "envelope":
        safety = sub_classifier("safety")
        if not isinstance(safety, ExpressionClassifier):
            raise FormatError("envelope 'safety' must be an expression classifier")
        return EnvelopeConfig(safety, sub_classifier("advisory"))
    if kind == "classifier":
        return sub_classifier("classifier")
    raise FormatError(f"harness has unknown pattern {kind!r}")
