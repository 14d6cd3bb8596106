"""Tokenizer for the condition expression language."""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import SpecSyntaxError

# Token kinds
NUMBER = "NUMBER"
STRING = "STRING"
IDENT = "IDENT"
OP = "OP"
EOF = "EOF"

_TWO_CHAR_OPS = ("||", "&&", "<=", ">=", "==", "!=")
_ONE_CHAR_OPS = "()[].,+-*/<>!"

_ESCAPES = {"\\": "\\", '"': '"', "n": "\n", "t": "\t", "r": "\r"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(source: str) -> list[Token]:
    """Split source text into tokens. Raises SpecSyntaxError on bad input."""
    tokens: list[Token] = []
    i = 0
    line = 1
    col = 1
    n = len(source)

    def error(message: str, token: str = "") -> SpecSyntaxError:
        return SpecSyntaxError(message, line, col, token)

    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        start_line, start_col = line, col
        if ch.isdigit() or (ch == "." and i + 1 < n and source[i + 1].isdigit()):
            j = i
            while j < n and source[j].isdigit():
                j += 1
            if j < n and source[j] == ".":
                j += 1
                while j < n and source[j].isdigit():
                    j += 1
            if j < n and source[j] in "eE":
                k = j + 1
                if k < n and source[k] in "+-":
                    k += 1
                if k >= n or not source[k].isdigit():
                    raise error("malformed number exponent", source[i:k])
                j = k
                while j < n and source[j].isdigit():
                    j += 1
            text = source[i:j]
            tokens.append(Token(NUMBER, text, start_line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            text = source[i:j]
            tokens.append(Token(IDENT, text, start_line, start_col))
            col += j - i
            i = j
            continue
        if ch == '"':
            j = i + 1
            parts: list[str] = []
            while True:
                if j >= n or source[j] == "\n":
                    raise error("unterminated string literal", source[i : min(j, i + 20)])
                c = source[j]
                if c == '"':
                    j += 1
                    break
                if c == "\\":
                    if j + 1 >= n or source[j + 1] not in _ESCAPES:
                        raise error(
                            "unknown string escape",
                            source[j : j + 2],
                        )
                    parts.append(_ESCAPES[source[j + 1]])
                    j += 2
                    continue
                parts.append(c)
                j += 1
            tokens.append(Token(STRING, "".join(parts), start_line, start_col))
            col += j - i
            i = j
            continue
        two = source[i : i + 2]
        if two in _TWO_CHAR_OPS:
            tokens.append(Token(OP, two, start_line, start_col))
            i += 2
            col += 2
            continue
        if ch in _ONE_CHAR_OPS:
            tokens.append(Token(OP, ch, start_line, start_col))
            i += 1
            col += 1
            continue
        raise error(f"unexpected character {ch!r}", ch)
    tokens.append(Token(EOF, "", line, col))
    return tokens
