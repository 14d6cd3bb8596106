"""Command-line entry point.

One executable, `specguard`, exposing every capability as a subcommand with
machine-readable JSON output on stdout. Exit codes separate findings from
failures: 0 means the check ran and found nothing, 1 means the check ran and
found something (violations, gaps, insufficient coverage), 2 means the
invocation itself failed (usage, missing file, parse error). All errors go
to stderr as a JSON object {"error", "detail"}. Output is byte-identical
across identical invocations unless --timestamps is given.
"""
from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
from pathlib import Path
from typing import Optional

from . import dataset as ds
from .errors import SpecGuardError
from .monitor import (
    MonitorPolicy,
    PolicyAction,
    read_trace,
    run_trace,
)
from .patterns import load_harness, simulate
from .process.catalog import (
    Asil,
    MethodType,
    ScoringCondition,
    filter_catalog,
    impact_table,
    load_catalog,
    mean_and_std,
    render_impact_text,
    render_score,
    score,
)
from .process.diagnosis import diagnose, load_failure
from .process.gate import gate_assess, load_questionnaire
from .process.safetycase import load_graph, trace_check
from .speccore.classifiers import load_classifier
from .speccore.records import record_from_json_dict
from .speccore.spec import load_spec, load_spec_lenient, validate_spec
from .errors import FormatError


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise _UsageError(message)


def _add_globals(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format",
        choices=["json", "text"],
        default=argparse.SUPPRESS,
        help="output format (default json)",
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=argparse.SUPPRESS,
        help="random seed where applicable (default 0)",
    )
    parser.add_argument(
        "--timestamps",
        action="store_true",
        default=argparse.SUPPRESS,
        help="include a generation timestamp in JSON output",
    )


def build_parser() -> _Parser:
    parser = _Parser(prog="specguard", description=__doc__)
    _add_globals(parser)
    commands = parser.add_subparsers(dest="command", metavar="command")

    p_spec = commands.add_parser("spec", help="behavioural specification checks")
    spec_sub = p_spec.add_subparsers(dest="subcommand", metavar="subcommand")
    p_validate = spec_sub.add_parser("validate", help="well-formedness of a spec file")
    p_validate.add_argument(
        "spec",
        nargs="?",
        default=None,
        help="spec file (default: $SPECGUARD_SPEC)",
    )
    p_validate.add_argument("--samples", help="JSON Lines records for conflict search")
    _add_globals(p_validate)

    p_monitor = commands.add_parser("monitor", help="trace monitoring")
    monitor_sub = p_monitor.add_subparsers(dest="subcommand", metavar="subcommand")
    p_run = monitor_sub.add_parser("run", help="replay a trace against a spec")
    p_run.add_argument("--spec", required=True)
    p_run.add_argument("--trace", required=True, help="JSON Lines trace file")
    p_run.add_argument("--policy", help="policy JSON file")
    _add_globals(p_run)

    p_dataset = commands.add_parser("dataset", help="data set checks and tools")
    dataset_sub = p_dataset.add_subparsers(dest="subcommand", metavar="subcommand")
    p_coverage = dataset_sub.add_parser("coverage", help="coverage vs requirements")
    p_coverage.add_argument("--data", required=True)
    p_coverage.add_argument("--requirements", required=True)
    _add_globals(p_coverage)
    p_augment = dataset_sub.add_parser("augment", help="grow a set via spec transforms")
    p_augment.add_argument("--spec", required=True)
    p_augment.add_argument("--data", required=True)
    _add_globals(p_augment)
    p_split = dataset_sub.add_parser("split", help="deterministic three-way split")
    p_split.add_argument("--data", required=True)
    p_split.add_argument("--ratios", required=True, help="train,validation,test")
    p_split.add_argument("--stratify", help="partitioning JSON file")
    _add_globals(p_split)
    p_uncertainty = dataset_sub.add_parser(
        "uncertainty", help="categorize probes by distance from known data"
    )
    p_uncertainty.add_argument("--known", required=True, help="labeled JSON Lines")
    p_uncertainty.add_argument("--probes", required=True, help="JSON Lines inputs")
    p_uncertainty.add_argument("--spec", required=True)
    p_uncertainty.add_argument("--depth", type=int, default=1)
    _add_globals(p_uncertainty)

    p_patterns = commands.add_parser("patterns", help="architecture patterns")
    patterns_sub = p_patterns.add_subparsers(dest="subcommand", metavar="subcommand")
    p_simulate = patterns_sub.add_parser("simulate", help="error rate vs an oracle")
    p_simulate.add_argument("--harness", required=True)
    p_simulate.add_argument("--domain", required=True, help="JSON Lines inputs")
    p_simulate.add_argument("--oracle", required=True, help="classifier JSON file")
    _add_globals(p_simulate)

    p_catalog = commands.add_parser("catalog", help="method catalog scoring")
    catalog_sub = p_catalog.add_subparsers(dest="subcommand", metavar="subcommand")
    p_score = catalog_sub.add_parser("score", help="applicability score per ASIL")
    p_score.add_argument("--catalog", required=True)
    p_score.add_argument("--condition", required=True, choices=["no-spec", "no-interp"])
    p_score.add_argument("--asil", choices=["A", "B", "C", "D"])
    p_score.add_argument(
        "--method-type",
        choices=[t.value for t in MethodType],
        help="score only methods of this type",
    )
    _add_globals(p_score)
    p_impact = catalog_sub.add_parser("impact", help="mean/std per condition and type")
    p_impact.add_argument("--catalog", required=True)
    _add_globals(p_impact)

    p_gate = commands.add_parser("gate", help="ML decision gate")
    gate_sub = p_gate.add_subparsers(dest="subcommand", metavar="subcommand")
    p_assess = gate_sub.add_parser("assess", help="verdict from a questionnaire")
    p_assess.add_argument("--questionnaire", required=True)
    _add_globals(p_assess)

    p_diagnose = commands.add_parser("diagnose", help="failure diagnosis plan")
    p_diagnose.add_argument("--failure", required=True)
    _add_globals(p_diagnose)

    p_safetycase = commands.add_parser("safetycase", help="traceability checks")
    safetycase_sub = p_safetycase.add_subparsers(dest="subcommand", metavar="subcommand")
    p_check = safetycase_sub.add_parser("check", help="gap analysis of a graph")
    p_check.add_argument("--graph", required=True)
    _add_globals(p_check)

    return parser


# ----------------------------------------------------------------------
# handlers: each returns (payload dict, text rendering, exit code)


def _cmd_spec_validate(args) -> tuple[dict, str, int]:
    spec_path = args.spec or os.environ.get("SPECGUARD_SPEC")
    if not spec_path:
        raise _UsageError("spec path required (argument or SPECGUARD_SPEC)")
    spec, findings = load_spec_lenient(spec_path)
    payload: dict = {"spec": str(spec_path), "findings": list(findings)}
    if spec is not None and args.samples:
        samples = _read_records(args.samples)
        report = validate_spec(spec, samples)
        payload["samples_report"] = report.to_json_dict()
        findings = findings + [
            f"conflict: {c}" for c in report.conflicts
        ] + [
            f"admits no output: {c}" for c in report.admits_no_output
        ] + [
            f"evaluation error: {e}" for e in report.eval_errors
        ]
        payload["findings"] = list(findings)
    payload["ok"] = not findings
    text = "ok" if not findings else "\n".join(str(f) for f in findings)
    return payload, text, 0 if not findings else 1


def _policy_from_file(path: str) -> MonitorPolicy:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise FormatError(f"cannot read policy {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"policy {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise FormatError("policy file must be a JSON object")
    kwargs = {}
    for key in ("on_pre_violation", "on_post_class_violation"):
        if key in data:
            try:
                kwargs[key] = PolicyAction(data[key])
            except ValueError:
                valid = ", ".join(a.value for a in PolicyAction)
                raise FormatError(f"policy {key} must be one of: {valid}") from None
    if "probabilistic_window" in data:
        kwargs["probabilistic_window"] = data["probabilistic_window"]
    unknown = set(data) - {"on_pre_violation", "on_post_class_violation", "probabilistic_window"}
    if unknown:
        raise FormatError(f"unknown policy key(s): {', '.join(sorted(unknown))}")
    return MonitorPolicy(**kwargs)


def _cmd_monitor_run(args) -> tuple[dict, str, int]:
    spec = load_spec(args.spec)
    policy = _policy_from_file(args.policy) if args.policy else MonitorPolicy()
    report = run_trace(spec, read_trace(args.trace), policy)
    payload = report.to_json_dict()
    lines = [
        f"final state: {report.final_state.value}",
        f"records: {report.records_processed}",
        f"violations: {len(report.violations)}",
    ]
    lines += [
        f"  {v.kind.value} record={v.record_id} {v.detail}" for v in report.violations
    ]
    return payload, "\n".join(lines), 1 if report.violations else 0


def _read_records(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read records {path}: {exc}") from exc
    records = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            records.append(record_from_json_dict(json.loads(line)))
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}:{line_no}: not valid JSON: {exc}") from exc
        except FormatError as exc:
            raise FormatError(f"{path}:{line_no}: {exc}") from exc
    return records


def _cmd_dataset_coverage(args) -> tuple[dict, str, int]:
    data = ds.read_dataset(args.data)
    reqs = ds.load_requirements(args.requirements)
    report = ds.coverage_report(data, reqs)
    payload = report.to_json_dict()
    lines = [
        f"passed: {report.passed}",
        f"cell coverage: {report.cell_coverage:.4f}",
        f"cover failures: {len(report.cover_failures)}",
        f"eval errors: {len(report.eval_errors)}",
    ]
    lines += [
        f"  cell {'/'.join(c['cell'])}: {c['count']}/{c['required']:g} {c['status']}"
        for c in report.cells
    ]
    code = 0 if report.passed and not report.eval_errors else 1
    return payload, "\n".join(lines), code


def _cmd_dataset_augment(args) -> tuple[dict, str, int]:
    spec = load_spec(args.spec)
    data = ds.read_dataset(args.data)
    result = ds.augment(data, spec)
    payload = {
        "records": [ds.labeled_record_to_json_dict(r) for r in result.records],
        "added": len(result.records) - len(data),
        "errors": result.errors,
    }
    text = f"{payload['added']} added, {len(result.errors)} transform errors"
    return payload, text, 1 if result.errors else 0


def _cmd_dataset_split(args, seed: int) -> tuple[dict, str, int]:
    data = ds.read_dataset(args.data)
    try:
        ratios = tuple(float(r) for r in args.ratios.split(","))
    except ValueError:
        raise _UsageError(f"--ratios must be three comma-separated numbers, got {args.ratios!r}")
    if len(ratios) != 3:
        raise _UsageError("--ratios must name exactly three numbers (train,validation,test)")
    stratify = ds.load_partitioning(args.stratify) if args.stratify else None
    result = ds.split(data, ds.SplitSpec(ratios, seed=seed, stratify_by=stratify))
    payload = {
        "train": [ds.labeled_record_to_json_dict(r) for r in result.train],
        "validation": [ds.labeled_record_to_json_dict(r) for r in result.validation],
        "test": [ds.labeled_record_to_json_dict(r) for r in result.test],
        "sizes": dict(zip(("train", "validation", "test"), result.sizes())),
        "notices": result.notices,
        "seed": seed,
    }
    text = "sizes: {}/{}/{}".format(*result.sizes())
    if result.notices:
        text += "\n" + "\n".join(result.notices)
    return payload, text, 0


def _cmd_dataset_uncertainty(args) -> tuple[dict, str, int]:
    known = ds.read_dataset(args.known)
    probes = _read_records(args.probes)
    spec = load_spec(args.spec)
    report = ds.categorize_uncertainty(
        known, probes, spec.transformations(), args.depth, spec.schema
    )
    payload = report.to_json_dict()
    unknown = sum(
        1 for p in report.per_probe if p["category"] == ds.UNKNOWN_UNKNOWN
    )
    text = " ".join(f"{k}={v:.4f}" for k, v in sorted(report.fractions.items()))
    return payload, text, 1 if unknown else 0


def _cmd_patterns_simulate(args) -> tuple[dict, str, int]:
    subject = load_harness(args.harness)
    domain = _read_records(args.domain)
    oracle = load_classifier(args.oracle)
    report = simulate(domain, oracle, subject)
    payload = report.to_json_dict()
    text = (
        f"records: {report.total}  mismatches: {len(report.mismatches)}  "
        f"error rate: {report.error_rate:.4f}"
    )
    return payload, text, 1 if report.mismatches else 0


def _cmd_catalog_score(args) -> tuple[dict, str, int]:
    catalog = load_catalog(args.catalog)
    if args.method_type:
        catalog = tuple(filter_catalog(catalog, method_type=MethodType(args.method_type)))
    condition = ScoringCondition(args.condition)
    asils = [Asil(args.asil)] if args.asil else list(Asil)
    scores = {a: score(catalog, condition, a) for a in asils}
    payload = {
        "catalog": str(args.catalog),
        "condition": condition.value,
        "scores": {a.value: render_score(s) for a, s in scores.items()},
    }
    if len(scores) > 1:
        mean, std = mean_and_std(list(scores.values()))
        payload["mean"] = render_score(mean)
        payload["std"] = f"{std:.12f}"
    lines = [f"{a.value}: {render_score(s)}" for a, s in scores.items()]
    if "mean" in payload:
        lines.append(f"mean: {payload['mean']}  std: {payload['std']}")
    return payload, "\n".join(lines), 0


def _cmd_catalog_impact(args) -> tuple[dict, str, int]:
    catalog = load_catalog(args.catalog)
    cells = impact_table(catalog)
    payload = {"cells": [c.to_json_dict() for c in cells]}
    return payload, render_impact_text(cells), 0


def _cmd_gate_assess(args) -> tuple[dict, str, int]:
    decision = gate_assess(load_questionnaire(args.questionnaire))
    payload = decision.to_json_dict()
    return payload, f"{decision.verdict.value}: {decision.rationale}", 0


def _cmd_diagnose(args) -> tuple[dict, str, int]:
    plan = diagnose(load_failure(args.failure))
    payload = plan.to_json_dict()
    lines = []
    for i, group in enumerate(plan.groups, start=1):
        ids = ", ".join(group.requirement_ids)
        lines.append(f"{i}. [{ids}] ({group.phase.value}) {group.topic}")
        lines += [f"   - {q}" for q in group.questions]
    return payload, "\n".join(lines), 0


def _cmd_safetycase_check(args) -> tuple[dict, str, int]:
    graph = load_graph(args.graph)
    report = trace_check(graph)
    payload = report.to_json_dict()
    if report.ok:
        text = "ok"
    else:
        text = "\n".join(f"{g.kind.value} {g.node_id}: {g.detail}" for g in report.gaps)
    return payload, text, 0 if report.ok else 1


def _dispatch(args) -> tuple[dict, str, int]:
    seed = getattr(args, "seed", 0)
    command = getattr(args, "command", None)
    subcommand = getattr(args, "subcommand", None)
    table = {
        ("spec", "validate"): _cmd_spec_validate,
        ("monitor", "run"): _cmd_monitor_run,
        ("dataset", "coverage"): _cmd_dataset_coverage,
        ("dataset", "augment"): _cmd_dataset_augment,
        ("dataset", "uncertainty"): _cmd_dataset_uncertainty,
        ("patterns", "simulate"): _cmd_patterns_simulate,
        ("catalog", "score"): _cmd_catalog_score,
        ("catalog", "impact"): _cmd_catalog_impact,
        ("gate", "assess"): _cmd_gate_assess,
        ("safetycase", "check"): _cmd_safetycase_check,
    }
    if command is None:
        raise _UsageError("a command is required (see --help)")
    if command == "diagnose":
        return _cmd_diagnose(args)
    if command == "dataset" and subcommand == "split":
        return _cmd_dataset_split(args, seed)
    handler = table.get((command, subcommand))
    if handler is None:
        raise _UsageError(f"a {command} subcommand is required (see '{command} --help')")
    return handler(args)


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        payload, text, code = _dispatch(args)
    except _UsageError as exc:
        _emit_error("usage", str(exc))
        return 2
    except SpecGuardError as exc:
        _emit_error(type(exc).__name__, str(exc))
        return 2
    except OSError as exc:
        _emit_error("io", str(exc))
        return 2
    if getattr(args, "format", "json") == "text":
        print(text)
    else:
        if getattr(args, "timestamps", False):
            payload = {
                **payload,
                "generated_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
            }
        print(json.dumps(payload, sort_keys=True, indent=2))
    return code


def _emit_error(kind: str, detail: str) -> None:
    print(json.dumps({"error": kind, "detail": detail}), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
