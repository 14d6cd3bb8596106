"""Evaluator golden cases, plus a differential check against an independently
written second evaluator on randomly generated typed expressions."""
from __future__ import annotations

import operator
import random

import pytest

from specguard.errors import EvalError
from specguard.speccore.records import Prediction
from specguard.speclang.ast import Binary, Bool, Call, InputRef, Num, OutputRef, Str, Unary
from specguard.speclang.evaluate import evaluate, evaluate_condition, numbers_equal
from specguard.speclang.parser import parse

PED = Prediction("pedestrian", 0.9)

GOLDEN = [
    ("1 + 2 * 3", {}, None, 7.0),
    ("(1 + 2) * 3", {}, None, 9.0),
    ("10 / 4", {}, None, 2.5),
    ("-2 * 3", {}, None, -6.0),
    ("abs(-5)", {}, None, 5.0),
    ("min(3, 1, 2)", {}, None, 1.0),
    ("max(3, 1, 2)", {}, None, 3.0),
    ("1 < 2", {}, None, True),
    ("2 <= 2", {}, None, True),
    ("3 > 4", {}, None, False),
    ("0.1 + 0.2 == 0.3", {}, None, True),  # tolerant numeric equality
    ("0.1 + 0.2 != 0.3", {}, None, False),
    ("1 == 1.0000001", {}, None, False),
    ('"a" == "a"', {}, None, True),
    ('"a" != "b"', {}, None, True),
    ("true && false", {}, None, False),
    ("true || false", {}, None, True),
    ("!false", {}, None, True),
    ("input.height + 1", {"height": 7}, None, 8.0),
    ("input.height > 0 && input.height < 8", {"height": 7.5}, None, True),
    ("input.img[1][2]", {"img": [[0, 1, 2], [3, 4, 5], [6, 7, 8]]}, None, 5.0),
    ("sum(input.img)", {"img": [[0, 1, 2], [3, 4, 5], [6, 7, 8]]}, None, 36.0),
    ("rows(input.img)", {"img": [[0, 1], [2, 3], [4, 5]]}, None, 3.0),
    ("cols(input.img)", {"img": [[0, 1], [2, 3], [4, 5]]}, None, 2.0),
    ("len(input.img)", {"img": [[0, 1], [2, 3], [4, 5]]}, None, 6.0),
    ('len("abcd")', {}, None, 4.0),
    ('output.label == "pedestrian"', {}, PED, True),
    ("output.confidence >= 0.5", {}, PED, True),
    ("output.confidence * 2", {}, PED, 1.8),
]


@pytest.mark.parametrize("source,inputs,output,expected", GOLDEN, ids=[g[0] for g in GOLDEN])
def test_golden(source, inputs, output, expected):
    got = evaluate(parse(source), inputs, output)
    if isinstance(expected, bool):
        assert got is expected
    else:
        assert got == pytest.approx(expected)


def test_integer_inputs_come_back_as_floats():
    assert evaluate(parse("input.count"), {"count": 3}) == 3.0
    assert isinstance(evaluate(parse("input.count"), {"count": 3}), float)


def test_short_circuit_skips_the_right_operand():
    assert evaluate(parse("false && 1 / 0 > 0"), {}) is False
    assert evaluate(parse("true || 1 / 0 > 0"), {}) is True
    with pytest.raises(EvalError):
        evaluate(parse("true && 1 / 0 > 0"), {})


ERRORS = [
    ("1 / 0", {}, None, "division by zero"),
    ("input.missing", {}, None, "no field"),
    ("input.img[0][5]", {"img": [[1, 2], [3, 4]]}, None, "outside grid"),
    ("output.label == \"x\"", {}, None, "no prediction is bound"),
    ("1 + true", {}, None, "expected a number"),
    ("!5", {}, None, "expected a boolean"),
    ('1 == "a"', {}, None, "cannot compare"),
    ("input.img == input.img", {"img": [[1]]}, None, "grids cannot be compared"),
    ("len(5)", {}, None, "grid or string"),
    ("sum(input.height)", {"height": 2}, None, "needs a grid"),
]


@pytest.mark.parametrize("source,inputs,output,fragment", ERRORS, ids=[e[0] for e in ERRORS])
def test_eval_errors(source, inputs, output, fragment):
    with pytest.raises(EvalError, match=fragment):
        evaluate(parse(source), inputs, output)


def test_confidence_on_confidence_free_prediction_raises():
    with pytest.raises(EvalError, match="prediction has none"):
        evaluate(parse("output.confidence > 0"), {}, Prediction("pedestrian", None))


def test_evaluate_condition_rejects_non_boolean_results():
    with pytest.raises(EvalError, match="not a boolean"):
        evaluate_condition(parse("1 + 2"), {})
    assert evaluate_condition(parse("1 < 2"), {}) is True


# ---------------------------------------------------------------------------
# Differential testing against a second, independently written evaluator.

_ARITH = {"+": operator.add, "-": operator.sub, "*": operator.mul}
_ORDER = {"<": operator.lt, "<=": operator.le, ">": operator.gt, ">=": operator.ge}


def _oracle(expr, inputs, output):
    """Reference evaluator, written in a table-driven style on purpose."""
    kind = type(expr).__name__
    if kind in ("Num", "Str", "Bool"):
        return expr.value
    if kind == "InputRef":
        value = inputs[expr.field]
        if expr.row is not None:
            return float(value[expr.row][expr.col])
        return float(value) if isinstance(value, int) and not isinstance(value, bool) else value
    if kind == "OutputRef":
        return output.label if expr.attr == "label" else float(output.confidence)
    if kind == "Unary":
        inner = _oracle(expr.operand, inputs, output)
        return (-inner) if expr.op == "-" else (not inner)
    if kind == "Call":
        args = [_oracle(a, inputs, output) for a in expr.args]
        if expr.func == "abs":
            return abs(args[0])
        if expr.func == "min":
            return min(args)
        if expr.func == "max":
            return max(args)
        if expr.func == "sum":
            return float(sum(sum(row) for row in args[0]))
        if expr.func == "rows":
            return float(len(args[0]))
        if expr.func == "cols":
            return float(len(args[0][0]))
        if expr.func == "len":
            grid = args[0]
            if isinstance(grid, str):
                return float(len(grid))
            return float(sum(len(r) for r in grid))
        raise AssertionError(expr.func)
    op = expr.op
    if op == "&&":
        return _oracle(expr.left, inputs, output) and _oracle(expr.right, inputs, output)
    if op == "||":
        return _oracle(expr.left, inputs, output) or _oracle(expr.right, inputs, output)
    left = _oracle(expr.left, inputs, output)
    right = _oracle(expr.right, inputs, output)
    if op in _ARITH:
        return float(_ARITH[op](left, right))
    if op == "/":
        if right == 0.0:
            raise ZeroDivisionError
        return left / right
    if op in _ORDER:
        return _ORDER[op](left, right)
    same = abs(left - right) <= 1e-9 if isinstance(left, float) else left == right
    return same if op == "==" else not same


def _gen_number(rng: random.Random, depth: int):
    if depth <= 0:
        pick = rng.randrange(4)
        if pick == 0:
            return Num(float(rng.randrange(-6, 7)))
        if pick == 1:
            return InputRef("height", None, None)
        if pick == 2:
            return InputRef("img", rng.randrange(3), rng.randrange(3))
        return OutputRef("confidence")
    pick = rng.randrange(6)
    if pick == 0:
        return Unary("-", _gen_number(rng, depth - 1))
    if pick == 1:
        return Call("abs", (_gen_number(rng, depth - 1),))
    if pick == 2:
        return Call(
            rng.choice(["min", "max"]),
            tuple(_gen_number(rng, depth - 1) for _ in range(rng.randrange(2, 4))),
        )
    if pick == 3:
        return Call(rng.choice(["sum", "rows", "cols", "len"]), (InputRef("img", None, None),))
    op = rng.choice(["+", "-", "*", "/"])
    return Binary(op, _gen_number(rng, depth - 1), _gen_number(rng, depth - 1))


def _gen_boolean(rng: random.Random, depth: int):
    if depth <= 0:
        if rng.random() < 0.4:
            return Bool(rng.random() < 0.5)
        op = rng.choice(["<", "<=", ">", ">=", "==", "!="])
        return Binary(op, _gen_number(rng, 1), _gen_number(rng, 1))
    pick = rng.randrange(4)
    if pick == 0:
        return Unary("!", _gen_boolean(rng, depth - 1))
    if pick == 1:
        return Binary(
            "==" if rng.random() < 0.5 else "!=",
            OutputRef("label"),
            Str(rng.choice(["pedestrian", "not_pedestrian"])),
        )
    op = rng.choice(["&&", "||"])
    return Binary(op, _gen_boolean(rng, depth - 1), _gen_boolean(rng, depth - 1))


def _random_inputs(rng: random.Random):
    return {
        "height": round(rng.uniform(-4, 9), 2),
        "img": [[rng.randrange(0, 4) for _ in range(3)] for _ in range(3)],
    }


def test_differential_numeric_expressions():
    rng = random.Random(813)
    mismatches = 0
    for _ in range(400):
        expr = _gen_number(rng, rng.randrange(1, 4))
        inputs = _random_inputs(rng)
        output = Prediction("pedestrian", round(rng.uniform(0, 1), 3))
        try:
            want = _oracle(expr, inputs, output)
        except ZeroDivisionError:
            with pytest.raises(EvalError, match="division by zero"):
                evaluate(expr, inputs, output)
            continue
        got = evaluate(expr, inputs, output)
        if not numbers_equal(got, want):
            mismatches += 1
    assert mismatches == 0


def test_differential_boolean_expressions():
    rng = random.Random(814)
    for _ in range(400):
        expr = _gen_boolean(rng, rng.randrange(1, 4))
        inputs = _random_inputs(rng)
        output = Prediction(rng.choice(["pedestrian", "not_pedestrian"]), 0.5)
        try:
            want = bool(_oracle(expr, inputs, output))
        except ZeroDivisionError:
            # both evaluators walk left-to-right, so both must fail here
            with pytest.raises(EvalError, match="division by zero"):
                evaluate(expr, inputs, output)
            continue
        assert evaluate(expr, inputs, output) is want, (expr, inputs)
