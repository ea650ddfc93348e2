"""Tokenizer for ``.agapia`` source text."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import LexError

KEYWORDS = frozenset(
    """module listen read speak write new if else while while_t while_s while_st
    nil null sn sb tn tb true false""".split()
)

# longest spellings first so that ``<=`` wins over ``<``
OPERATORS = (
    ":=", "==", "!=", "<=", ">=", "&&", "||",
    "%", "#", "$", ";", ",", ":", "|", "*", "(", ")", "{", "}", "=", "<", ">",
    "+", "-", "/", "!", "@", ".", "[", "]",
)

ALIASES = {"∪": "|"}


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT | INT | KW | OP | EOF
    text: str
    line: int
    col: int

    @property
    def pos(self) -> tuple[int, int]:
        return (self.line, self.col)


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch.isspace():
            i, col = i + 1, col + 1
            continue
        if source.startswith("//", i):
            while i < n and source[i] != "\n":
                i += 1
            continue
        start = col
        if ch.isascii() and (ch.isalpha() or ch == "_"):
            j = i
            while j < n and source[j].isascii() and (source[j].isalnum() or source[j] == "_"):
                j += 1
            word = source[i:j]
            tokens.append(Token("KW" if word in KEYWORDS else "IDENT", word, line, start))
        elif ch.isascii() and ch.isdigit():
            j = i
            while j < n and source[j].isascii() and source[j].isdigit():
                j += 1
            word = source[i:j]
            tokens.append(Token("INT", word, line, start))
        elif ch in ALIASES:
            j = i + 1
            tokens.append(Token("OP", ALIASES[ch], line, start))
        else:
            op = next((o for o in OPERATORS if source.startswith(o, i)), None)
            if op is None:
                raise LexError(f"illegal character {ch!r}", (line, col))
            j = i + len(op)
            tokens.append(Token("OP", op, line, start))
        col += j - i
        i = j
    tokens.append(Token("EOF", "", line, col))
    return tokens
