"""Classifier realizations: table-driven, expression-driven, and subprocess.

Table and expression classifiers are immutable and safe to share between
threads. A subprocess classifier owns a child process and requires exclusive
access per handle; callers must serialize requests on it.
"""
from __future__ import annotations

import json
import os
import select
import subprocess
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Optional, Sequence, Union

from ..errors import ClassifierError, FormatError
from ..speclang.ast import Expression, to_source
from ..speclang.evaluate import evaluate_condition
from ..speclang.parser import parse
from ..speclang.schema import is_number
from .records import FeatureRecord, Prediction, canonical_key


@dataclass(frozen=True)
class TableClassifier:
    """Explicit input -> prediction map with canonical keys and a default.

    Keys are canonical_key() renderings: fields sorted by name, numbers
    written with 17 significant digits, so lookups survive reserialization.
    """

    entries: dict[str, Prediction] = field(default_factory=dict)
    default: Optional[Prediction] = None

    def classify(self, fields: Mapping[str, Any]) -> Prediction:
        key = canonical_key(fields)
        hit = self.entries.get(key)
        if hit is not None:
            return hit
        if self.default is not None:
            return self.default
        raise ClassifierError("table classifier has no entry for this input and no default")


@dataclass(frozen=True)
class ExpressionClassifier:
    """Ordered (condition, label, confidence) rules; first match wins,
    otherwise the default prediction."""

    rules: tuple[tuple[Expression, str, Optional[float]], ...] = ()
    default: Optional[Prediction] = None

    def classify(self, fields: Mapping[str, Any]) -> Prediction:
        for condition, label, confidence in self.rules:
            try:
                if evaluate_condition(condition, fields):
                    return Prediction(label, confidence)
            except Exception as exc:
                raise ClassifierError(
                    f"rule {to_source(condition)!r} failed to evaluate: {exc}"
                ) from exc
        if self.default is not None:
            return self.default
        raise ClassifierError("no rule matched and the classifier has no default")


class SubprocessClassifier:
    """Child process speaking one JSON object per line on stdin/stdout.

    Request:  {"input": {...fields...}}
    Response: {"label": "...", "confidence": 0.93}   (confidence optional)

    The child starts lazily on the first classify() and is killed on close().
    A timeout or protocol error kills the child; the next call restarts it.
    """

    def __init__(self, command: Sequence[str], timeout: float = 5.0):
        if not command:
            raise FormatError("subprocess classifier needs a non-empty command")
        self.command = list(command)
        self.timeout = float(timeout)
        self._proc: subprocess.Popen | None = None
        self._buffer = b""

    def _start(self) -> None:
        try:
            self._proc = subprocess.Popen(
                self.command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.DEVNULL,
            )
        except OSError as exc:
            raise ClassifierError(f"could not start {self.command[0]!r}: {exc}") from exc
        self._buffer = b""

    def _read_line(self) -> bytes:
        assert self._proc is not None and self._proc.stdout is not None
        fd = self._proc.stdout.fileno()
        deadline = time.monotonic() + self.timeout
        while b"\n" not in self._buffer:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                self.close()
                raise ClassifierError(f"subprocess timed out after {self.timeout} s")
            ready, _, _ = select.select([fd], [], [], remaining)
            if not ready:
                self.close()
                raise ClassifierError(f"subprocess timed out after {self.timeout} s")
            chunk = os.read(fd, 65536)
            if not chunk:
                self.close()
                raise ClassifierError("subprocess closed its output stream")
            self._buffer += chunk
        line, _, self._buffer = self._buffer.partition(b"\n")
        return line

    def classify(self, fields: Mapping[str, Any]) -> Prediction:
        if self._proc is None or self._proc.poll() is not None:
            self._start()
        assert self._proc is not None and self._proc.stdin is not None
        request = json.dumps({"input": dict(fields)}, sort_keys=True) + "\n"
        try:
            self._proc.stdin.write(request.encode("utf-8"))
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            self.close()
            raise ClassifierError(f"subprocess refused the request: {exc}") from exc
        line = self._read_line()
        try:
            data = json.loads(line.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            self.close()
            raise ClassifierError(f"subprocess sent malformed JSON: {exc}") from exc
        if not isinstance(data, dict) or not isinstance(data.get("label"), str):
            self.close()
            raise ClassifierError(f"subprocess response needs a string 'label': {data!r}")
        confidence = data.get("confidence")
        if confidence is not None and not is_number(confidence):
            self.close()
            raise ClassifierError(f"subprocess confidence must be a number: {confidence!r}")
        return Prediction(data["label"], None if confidence is None else float(confidence))

    def close(self) -> None:
        proc, self._proc = self._proc, None
        self._buffer = b""
        if proc is None:
            return
        try:
            if proc.stdin:
                proc.stdin.close()
            proc.terminate()
            try:
                proc.wait(timeout=1.0)
            except subprocess.TimeoutExpired:
                proc.kill()
                proc.wait()
        except OSError:
            pass

    def __enter__(self) -> "SubprocessClassifier":
        return self

    def __exit__(self, *exc_info: object) -> None:
        self.close()

    def __del__(self) -> None:
        try:
            self.close()
        except Exception:
            pass


Classifier = Union[TableClassifier, ExpressionClassifier, SubprocessClassifier]


def classify(classifier: Classifier, record: Union[FeatureRecord, Mapping[str, Any]]) -> Prediction:
    """Run a classifier on a record or bare field mapping."""
    fields = record.fields if isinstance(record, FeatureRecord) else record
    return classifier.classify(fields)


def _prediction_from_json(data: Any, context: str) -> Prediction:
    if isinstance(data, str):
        return Prediction(data)
    if not isinstance(data, dict) or not isinstance(data.get("label"), str):
        raise FormatError(f"{context} must be a label string or an object with 'label'")
    confidence = data.get("confidence")
    if confidence is not None and not is_number(confidence):
        raise FormatError(f"{context} confidence must be a number")
    return Prediction(data["label"], None if confidence is None else float(confidence))


def classifier_from_json_dict(data: Any, base_dir: Union[str, Path, None] = None) -> Classifier:
    """Build a classifier from its JSON form.

    base_dir resolves relative subprocess command paths (harness files refer
    to scripts that live next to them).
    """
    if not isinstance(data, dict):
        raise FormatError("classifier must be a JSON object")
    kind = data.get("kind")
    if kind == "table":
        raw_entries = data.get("entries")
        if not isinstance(raw_entries, list):
            raise FormatError("table classifier needs an 'entries' list")
        entries: dict[str, Prediction] = {}
        for i, entry in enumerate(raw_entries):
            if not isinstance(entry, dict) or not isinstance(entry.get("input"), dict):
                raise FormatError(f"table entry {i} needs an 'input' object")
            entries[canonical_key(entry["input"])] = _prediction_from_json(
                entry, f"table entry {i}"
            )
        default = data.get("default")
        return TableClassifier(
            entries,
            None if default is None else _prediction_from_json(default, "table default"),
        )
    if kind == "expression":
        raw_rules = data.get("rules")
        if not isinstance(raw_rules, list):
            raise FormatError("expression classifier needs a 'rules' list")
        rules = []
        for i, rule in enumerate(raw_rules):
            if (
                not isinstance(rule, dict)
                or not isinstance(rule.get("condition"), str)
                or not isinstance(rule.get("label"), str)
            ):
                raise FormatError(f"expression rule {i} needs 'condition' and 'label' strings")
            confidence = rule.get("confidence")
            if confidence is not None and not is_number(confidence):
                raise FormatError(f"expression rule {i} confidence must be a number")
            rules.append(
                (
                    parse(rule["condition"]),
                    rule["label"],
                    None if confidence is None else float(confidence),
                )
            )
        default = data.get("default")
        return ExpressionClassifier(
            tuple(rules),
            None if default is None else _prediction_from_json(default, "expression default"),
        )
    if kind == "subprocess":
        command = data.get("command")
        if (
            not isinstance(command, list)
            or not command
            or not all(isinstance(c, str) for c in command)
        ):
            raise FormatError("subprocess classifier needs a non-empty 'command' list of strings")
        timeout = data.get("timeout", 5.0)
        if not is_number(timeout) or float(timeout) <= 0:
            raise FormatError("subprocess timeout must be a positive number")
        if base_dir is not None:
            # Arguments naming files next to the JSON resolve against it, so a
            # harness can say ["python3", "model.py"] portably.
            base = Path(base_dir)
            command = [
                str(base / c) if not Path(c).is_absolute() and (base / c).is_file() else c
                for c in command
            ]
        return SubprocessClassifier(command, float(timeout))
    raise FormatError(f"classifier has unknown kind {kind!r}")


def classifier_to_json_dict(classifier: Classifier) -> dict:
    if isinstance(classifier, TableClassifier):
        entries = []
        for key, prediction in classifier.entries.items():
            fields = {
                name: _uncanonical(value) for name, value in json.loads(key).items()
            }
            entry: dict[str, Any] = {"input": fields, "label": prediction.label}
            if prediction.confidence is not None:
                entry["confidence"] = prediction.confidence
            entries.append(entry)
        data: dict[str, Any] = {"kind": "table", "entries": entries}
        if classifier.default is not None:
            data["default"] = _prediction_json(classifier.default)
        return data
    if isinstance(classifier, ExpressionClassifier):
        rules = []
        for condition, label, confidence in classifier.rules:
            rule: dict[str, Any] = {"condition": to_source(condition), "label": label}
            if confidence is not None:
                rule["confidence"] = confidence
            rules.append(rule)
        data = {"kind": "expression", "rules": rules}
        if classifier.default is not None:
            data["default"] = _prediction_json(classifier.default)
        return data
    return {
        "kind": "subprocess",
        "command": list(classifier.command),
        "timeout": classifier.timeout,
    }


def _prediction_json(prediction: Prediction) -> dict:
    data: dict[str, Any] = {"label": prediction.label}
    if prediction.confidence is not None:
        data["confidence"] = prediction.confidence
    return data


def _uncanonical(value: Any) -> Any:
    tag = value[0]
    if tag == "b":
        return value[1]
    if tag == "n":
        number = float(value[1])
        return int(number) if number == int(number) and abs(number) < 1e15 else number
    if tag == "s":
        return value[1]
    return [_uncanonical(v) for v in value[1]]


def load_classifier(path: Union[str, Path]) -> Classifier:
    """Read a classifier JSON file; subprocess commands resolve relative to it."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise FormatError(f"cannot read classifier file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"classifier file {path} is not valid JSON: {exc}") from exc
    return classifier_from_json_dict(data, base_dir=path.parent)
