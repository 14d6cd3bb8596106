"""Monitor: per-sample checks, policy-driven state machine, tumbling windows,
trace reading, and concatenation behaviour."""
from __future__ import annotations

import json
import random

import pytest

from specguard.errors import FormatError
from specguard.monitor import (
    MalformedLine,
    MonitorPolicy,
    MonitorState,
    PolicyAction,
    TraceRecord,
    ViolationKind,
    check_batch_probabilistic,
    check_sample,
    read_trace,
    run_trace,
)
from specguard.speccore.records import FeatureRecord, Prediction
from specguard.speccore.spec import MeanConstraint, PartialSpec, RangeConstraint
from specguard.speclang.parser import parse
from specguard.speclang.schema import NumberType, Schema

SCHEMA = Schema({"height": NumberType()}, ("pedestrian", "not_pedestrian"))


def make_spec(**overrides):
    base = dict(
        schema=SCHEMA,
        precondition=parse("input.height > 0"),
        postcondition=parse("output.confidence > 0.1"),
        sufficient={"pedestrian": (parse("input.height > 6"),)},
        necessary={"pedestrian": (parse("input.height < 8"),)},
    )
    base.update(overrides)
    return PartialSpec(**base)


def tr(rid, height, label="not_pedestrian", confidence=0.9):
    return TraceRecord(rid, FeatureRecord({"height": height}, rid), Prediction(label, confidence))


def kinds(violations):
    return [v.kind for v in violations]


class TestCheckSample:
    def test_clean_record(self):
        assert check_sample(make_spec(), tr("a", 5.0), MonitorPolicy()) == []

    def test_pre_violation_short_circuits_everything_else(self):
        # height -1 also breaks the sufficient/necessary conditions' spirit,
        # but a failed precondition suspends all later checks
        violations = check_sample(make_spec(), tr("a", -1.0, "pedestrian", 0.05), MonitorPolicy())
        assert kinds(violations) == [ViolationKind.PRE]
        assert violations[0].detail["output_untrusted"] is True

    def test_post_violation(self):
        violations = check_sample(make_spec(), tr("a", 5.0, confidence=0.05), MonitorPolicy())
        assert kinds(violations) == [ViolationKind.POST]

    def test_sufficient_violation(self):
        violations = check_sample(make_spec(), tr("a", 7.0, "not_pedestrian"), MonitorPolicy())
        assert kinds(violations) == [ViolationKind.SUFFICIENT]
        assert violations[0].detail["label"] == "pedestrian"

    def test_necessary_violation(self):
        violations = check_sample(make_spec(), tr("a", 9.0, "pedestrian"), MonitorPolicy())
        assert kinds(violations) == [ViolationKind.NECESSARY]

    def test_one_record_can_break_several_checks(self):
        violations = check_sample(
            make_spec(), tr("a", 9.0, "pedestrian", 0.05), MonitorPolicy()
        )
        assert kinds(violations) == [ViolationKind.POST, ViolationKind.NECESSARY]

    def test_eval_error_in_pre_suspends_the_sample(self):
        record = TraceRecord("a", FeatureRecord({}, "a"), Prediction("pedestrian", 0.9))
        violations = check_sample(make_spec(), record, MonitorPolicy())
        assert kinds(violations) == [ViolationKind.EVAL_ERROR]
        assert violations[0].detail["stage"] == "pre"


class TestPolicyValidation:
    def test_post_action_cannot_be_mark_untrusted(self):
        with pytest.raises(FormatError, match="DEGRADE or FAILSAFE"):
            MonitorPolicy(on_post_class_violation=PolicyAction.MARK_UNTRUSTED)

    def test_window_must_be_positive(self):
        with pytest.raises(FormatError, match=">= 1"):
            MonitorPolicy(probabilistic_window=0)


GOLDEN_TRACE = [
    tr("r1", 5.0),
    tr("r2", 4.0),
    tr("r3", -1.0),  # PRE: height must be positive
    tr("r4", 5.0),
    tr("r5", 3.0),
    tr("r6", 5.0, confidence=0.05),  # POST: confidence too low
    tr("r7", 2.0),
    tr("r8", 7.0, "pedestrian"),
    tr("r9", 9.0, "pedestrian"),  # NECESSARY: pedestrians are under 8
    tr("r10", 4.0),
]


class TestStateMachine:
    def run(self, **policy):
        return run_trace(make_spec(), GOLDEN_TRACE, MonitorPolicy(**policy))

    def test_golden_trace_violation_set(self):
        report = self.run()
        assert [(v.record_id, v.kind) for v in report.violations] == [
            ("r3", ViolationKind.PRE),
            ("r6", ViolationKind.POST),
            ("r9", ViolationKind.NECESSARY),
        ]
        assert report.records_processed == 10
        assert report.counts["PRE"] == 1
        assert report.counts["POST"] == 1
        assert report.counts["NECESSARY"] == 1

    @pytest.mark.parametrize(
        "pre,post,expected",
        [
            (PolicyAction.MARK_UNTRUSTED, PolicyAction.DEGRADE, MonitorState.DEGRADED),
            (PolicyAction.MARK_UNTRUSTED, PolicyAction.FAILSAFE, MonitorState.FAILSAFE),
            (PolicyAction.DEGRADE, PolicyAction.DEGRADE, MonitorState.DEGRADED),
            (PolicyAction.DEGRADE, PolicyAction.FAILSAFE, MonitorState.FAILSAFE),
            (PolicyAction.FAILSAFE, PolicyAction.DEGRADE, MonitorState.FAILSAFE),
            (PolicyAction.FAILSAFE, PolicyAction.FAILSAFE, MonitorState.FAILSAFE),
        ],
    )
    def test_final_state_under_every_policy_combination(self, pre, post, expected):
        report = self.run(on_pre_violation=pre, on_post_class_violation=post)
        assert report.final_state is expected

    def test_state_never_goes_backward(self):
        # FAILSAFE at r3; later DEGRADE-grade violations must not lower it
        report = self.run(on_pre_violation=PolicyAction.FAILSAFE)
        assert report.final_state is MonitorState.FAILSAFE

    def test_post_failsafe_flags_only_later_violations(self):
        report = self.run(on_pre_violation=PolicyAction.FAILSAFE)
        flags = {v.record_id: v.post_failsafe for v in report.violations}
        assert flags == {"r3": False, "r6": True, "r9": True}

    def test_mark_untrusted_leaves_state_nominal(self):
        report = run_trace(
            make_spec(), [tr("r1", -1.0)], MonitorPolicy(on_pre_violation=PolicyAction.MARK_UNTRUSTED)
        )
        assert report.final_state is MonitorState.NOMINAL
        assert kinds(report.violations) == [ViolationKind.PRE]

    def test_conformance_failure_gates_the_sample_checks(self):
        bad = TraceRecord(
            "weird",
            FeatureRecord({"height": 5.0, "bonus": 1}, "weird"),
            Prediction("pedestrian", 0.9),
        )
        report = run_trace(make_spec(), [bad])
        assert kinds(report.violations) == [ViolationKind.EVAL_ERROR]
        assert report.violations[0].detail["stage"] == "conformance"
        assert report.final_state is MonitorState.DEGRADED

    def test_unknown_label_is_a_conformance_violation(self):
        bad = tr("x", 5.0, label="bicycle")
        report = run_trace(make_spec(), [bad])
        assert report.violations[0].detail["stage"] == "conformance"

    def test_malformed_lines_degrade(self):
        report = run_trace(make_spec(), [tr("r1", 5.0), MalformedLine(2, "boom")])
        assert report.final_state is MonitorState.DEGRADED
        assert report.records_processed == 2
        assert report.violations[0].detail["stage"] == "trace"


class TestProbabilisticWindows:
    def make(self):
        return make_spec(
            postcondition=None,
            probabilistic=(RangeConstraint("height", 0.0, 6.0, max_violation_fraction=0.25),),
        )

    def test_full_window_fires(self):
        trace = [tr(f"r{i}", 7.0) for i in range(4)]
        report = run_trace(self.make(), trace, MonitorPolicy(probabilistic_window=4))
        prob = [v for v in report.violations if v.kind is ViolationKind.PROBABILISTIC]
        assert len(prob) == 1
        assert prob[0].detail["window"] == 0
        assert prob[0].detail["observed_fraction"] == 1.0
        assert report.final_state is MonitorState.DEGRADED

    def test_partial_trailing_window_never_fires(self):
        trace = [tr(f"r{i}", 7.0) for i in range(3)]
        report = run_trace(self.make(), trace, MonitorPolicy(probabilistic_window=4))
        assert all(v.kind is not ViolationKind.PROBABILISTIC for v in report.violations)

    def test_windows_tumble_without_overlap(self):
        # first window all high, second window all fine
        trace = [tr(f"a{i}", 7.0) for i in range(4)] + [tr(f"b{i}", 3.0) for i in range(4)]
        report = run_trace(self.make(), trace, MonitorPolicy(probabilistic_window=4))
        prob = [v for v in report.violations if v.kind is ViolationKind.PROBABILISTIC]
        assert [v.detail["window"] for v in prob] == [0]

    def test_fraction_at_the_limit_does_not_fire(self):
        trace = [tr("a", 7.0)] + [tr(f"b{i}", 3.0) for i in range(3)]
        report = run_trace(self.make(), trace, MonitorPolicy(probabilistic_window=4))
        assert all(v.kind is not ViolationKind.PROBABILISTIC for v in report.violations)

    def test_mean_constraint(self):
        spec = make_spec(
            postcondition=None,
            probabilistic=(MeanConstraint("height", 4.0, 0.5),),
        )
        violations = check_batch_probabilistic(
            spec, [FeatureRecord({"height": h}) for h in (7.0, 8.0)]
        )
        assert len(violations) == 1
        assert violations[0].detail["observed_mean"] == 7.5

    def test_missing_field_is_an_eval_error_and_excluded(self):
        spec = self.make()
        violations = check_batch_probabilistic(
            spec, [FeatureRecord({"height": 3.0}, "ok"), FeatureRecord({}, "gone")]
        )
        assert kinds(violations) == [ViolationKind.EVAL_ERROR]
        assert violations[0].record_id == "gone"


class TestConcatenation:
    def test_concatenated_traces_report_the_same_violations(self):
        # without probabilistic constraints the monitor is per-record, so
        # running two halves separately finds the same (id, kind) multiset
        rng = random.Random(7)
        trace = [
            tr(
                f"r{i}",
                rng.uniform(-2, 10),
                rng.choice(["pedestrian", "not_pedestrian"]),
                rng.uniform(0, 1),
            )
            for i in range(60)
        ]
        spec = make_spec()
        whole = run_trace(spec, trace)
        first = run_trace(spec, trace[:30])
        second = run_trace(spec, trace[30:])
        key = lambda report: sorted(
            (v.record_id, v.kind.value) for v in report.violations
        )
        assert key(whole) == sorted(key(first) + key(second))
        assert whole.records_processed == first.records_processed + second.records_processed


class TestReadTrace:
    def test_reads_records_and_flags_bad_lines(self, tmp_path):
        lines = [
            json.dumps(
                {"id": "r1", "input": {"height": 5.0}, "output": {"label": "pedestrian"}}
            ),
            "{not json",
            json.dumps({"id": "r2", "input": {"height": 2.0}, "output": {"label": "x"}}),
            json.dumps({"input": {}, "output": {"label": "x"}}),  # id missing
            "",
        ]
        path = tmp_path / "trace.jsonl"
        path.write_text("\n".join(lines), encoding="utf-8")
        items = list(read_trace(path))
        assert isinstance(items[0], TraceRecord) and items[0].id == "r1"
        assert isinstance(items[1], MalformedLine) and items[1].line == 2
        assert isinstance(items[2], TraceRecord)
        assert isinstance(items[3], MalformedLine) and "id" in items[3].error
        assert len(items) == 4  # blank line skipped

    def test_confidence_is_optional(self, tmp_path):
        path = tmp_path / "trace.jsonl"
        path.write_text(
            json.dumps({"id": "r", "input": {"height": 1}, "output": {"label": "pedestrian"}}),
            encoding="utf-8",
        )
        (record,) = read_trace(path)
        assert record.output.confidence is None

    def test_missing_file_raises(self, tmp_path):
        with pytest.raises(FormatError, match="cannot read"):
            list(read_trace(tmp_path / "absent.jsonl"))

    def test_report_json_shape(self):
        report = run_trace(make_spec(), GOLDEN_TRACE)
        data = report.to_json_dict()
        assert data["final_state"] == "DEGRADED"
        assert data["records_processed"] == 10
        assert len(data["violations"]) == 3
        json.dumps(data)
