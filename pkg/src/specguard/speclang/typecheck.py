"""Static type rules for condition expressions.

Every expression evaluates to one of four type tags: "number", "boolean",
"string", or "grid". Grids only appear as arguments to len/rows/cols/sum.
"""
from __future__ import annotations

from ..errors import TypeCheckError
from .ast import Binary, Bool, Call, Expression, InputRef, Num, OutputRef, Str, Unary, to_source
from .schema import BooleanType, CategoryType, GridType, IntegerType, NumberType, Schema

NUMBER = "number"
BOOLEAN = "boolean"
STRING = "string"
GRID = "grid"

_ARITH_OPS = ("+", "-", "*", "/")
_ORDER_OPS = ("<", "<=", ">", ">=")
_EQ_OPS = ("==", "!=")
_LOGIC_OPS = ("&&", "||")


class _Checker:
    def __init__(self, schema: Schema, output_allowed: bool):
        self.schema = schema
        self.output_allowed = output_allowed
        self.errors: list[str] = []

    def fail(self, message: str) -> None:
        if message not in self.errors:
            self.errors.append(message)

    def check(self, expr: Expression) -> str | None:
        """Return the expression's type tag, or None after recording errors."""
        if isinstance(expr, Num):
            return NUMBER
        if isinstance(expr, Str):
            return STRING
        if isinstance(expr, Bool):
            return BOOLEAN
        if isinstance(expr, InputRef):
            return self.check_input_ref(expr)
        if isinstance(expr, OutputRef):
            if not self.output_allowed:
                self.fail(f"output.{expr.attr} is not allowed in an input-only expression")
                return None
            return STRING if expr.attr == "label" else NUMBER
        if isinstance(expr, Unary):
            return self.check_unary(expr)
        if isinstance(expr, Binary):
            return self.check_binary(expr)
        if isinstance(expr, Call):
            return self.check_call(expr)
        raise TypeError(f"not an expression node: {expr!r}")

    def check_input_ref(self, expr: InputRef) -> str | None:
        ftype = self.schema.fields.get(expr.field)
        if ftype is None:
            self.fail(f"unknown input field {expr.field!r}")
            return None
        if expr.row is not None:
            if not isinstance(ftype, GridType):
                self.fail(f"field {expr.field!r} is not a grid and cannot be indexed")
                return None
            if not (0 <= expr.row < ftype.rows and 0 <= expr.col < ftype.cols):
                self.fail(
                    f"index [{expr.row}][{expr.col}] is outside the "
                    f"{ftype.rows}x{ftype.cols} grid {expr.field!r}"
                )
                return None
            return NUMBER
        if isinstance(ftype, (NumberType, IntegerType)):
            return NUMBER
        if isinstance(ftype, BooleanType):
            return BOOLEAN
        if isinstance(ftype, CategoryType):
            return STRING
        return GRID

    def check_unary(self, expr: Unary) -> str | None:
        inner = self.check(expr.operand)
        want = NUMBER if expr.op == "-" else BOOLEAN
        if inner is not None and inner != want:
            self.fail(f"operator {expr.op!r} needs a {want}, got {inner} in {to_source(expr)!r}")
            return None
        return want if inner is not None else None

    def check_binary(self, expr: Binary) -> str | None:
        left = self.check(expr.left)
        right = self.check(expr.right)
        op = expr.op
        if op in _ARITH_OPS or op in _ORDER_OPS:
            ok = True
            for side, tag in (("left", left), ("right", right)):
                if tag is not None and tag != NUMBER:
                    self.fail(
                        f"operator {op!r} needs numbers, {side} side is {tag} "
                        f"in {to_source(expr)!r}"
                    )
                    ok = False
            if left is None or right is None or not ok:
                return None
            return NUMBER if op in _ARITH_OPS else BOOLEAN
        if op in _EQ_OPS:
            if left is None or right is None:
                return None
            if GRID in (left, right):
                self.fail(f"grids cannot be compared in {to_source(expr)!r}")
                return None
            if left != right:
                self.fail(f"cannot compare {left} with {right} in {to_source(expr)!r}")
                return None
            return BOOLEAN
        # && and ||
        ok = True
        for side, tag in (("left", left), ("right", right)):
            if tag is not None and tag != BOOLEAN:
                self.fail(
                    f"operator {op!r} needs booleans, {side} side is {tag} "
                    f"in {to_source(expr)!r}"
                )
                ok = False
        if left is None or right is None or not ok:
            return None
        return BOOLEAN

    def check_call(self, expr: Call) -> str | None:
        name = expr.func
        args = [self.check(a) for a in expr.args]
        if name == "abs":
            return self.expect_args(expr, args, [NUMBER])
        if name in ("min", "max"):
            if len(expr.args) < 2:
                self.fail(f"{name}() needs at least two arguments in {to_source(expr)!r}")
                return None
            for tag in args:
                if tag is not None and tag != NUMBER:
                    self.fail(f"{name}() arguments must be numbers in {to_source(expr)!r}")
                    return None
            return None if any(a is None for a in args) else NUMBER
        if name == "len":
            if len(args) != 1:
                self.fail(f"len() takes one argument in {to_source(expr)!r}")
                return None
            if args[0] is None:
                return None
            if args[0] not in (GRID, STRING):
                self.fail(f"len() takes a grid or string, got {args[0]} in {to_source(expr)!r}")
                return None
            return NUMBER
        if name in ("rows", "cols", "sum"):
            return self.expect_args(expr, args, [GRID])
        self.fail(f"unknown function {name!r}")
        return None

    def expect_args(self, expr: Call, got: list[str | None], want: list[str]) -> str | None:
        if len(got) != len(want):
            self.fail(
                f"{expr.func}() takes {len(want)} argument(s), got {len(got)} "
                f"in {to_source(expr)!r}"
            )
            return None
        ok = True
        for i, (g, w) in enumerate(zip(got, want)):
            if g is not None and g != w:
                self.fail(f"{expr.func}() argument {i + 1} must be a {w}, got {g}")
                ok = False
        if not ok or any(g is None for g in got):
            return None
        return NUMBER


def type_errors(expr: Expression, schema: Schema, output_allowed: bool) -> list[str]:
    """All type errors in expr; empty when it typechecks."""
    checker = _Checker(schema, output_allowed)
    checker.check(expr)
    return checker.errors


def typecheck(expr: Expression, schema: Schema, output_allowed: bool) -> str:
    """Return the type tag of expr, raising TypeCheckError listing every error."""
    checker = _Checker(schema, output_allowed)
    tag = checker.check(expr)
    if checker.errors:
        raise TypeCheckError(checker.errors)
    assert tag is not None
    return tag
