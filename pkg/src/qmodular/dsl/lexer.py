"""Tokeniser for the .qm script language."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List

KEYWORDS = {
    "chart", "even", "odd", "weight", "truncation", "of", "elem", "field", "volume", "on", "with",
    "check", "homological", "modular", "divergence", "bracket", "exact?", "by", "bound", "assert",
    "exp", "base",
}

SYMBOLS = ["==", "{", "}", "(", ")", "[", "]", ";", ",", "=", "+", "-", "*", "/", "^", "@"]


class DSLError(Exception):
    exit_code = 2

    def __init__(self, message: str, line: int = 0, col: int = 0, token: str = ""):
        self.message = message
        self.line = line
        self.col = col
        self.token = token
        where = f"{line}:{col}: " if line else ""
        tok = f" (at {token!r})" if token else ""
        super().__init__(f"{where}{message}{tok}")


class ParseError(DSLError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, KW, INT, RAT, SYM, EOF
    text: str
    line: int
    col: int


def tokenize(source: str) -> List[Token]:
    out: List[Token] = []
    i, line, col = 0, 1, 1
    n = len(source)
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
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        start_col = col
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            if j + 1 < n and source[j] == "/" and source[j + 1].isdigit():
                k = j + 1
                while k < n and source[k].isdigit():
                    k += 1
                out.append(Token("RAT", source[i:k], line, start_col))
                col += k - i
                i = k
            else:
                out.append(Token("INT", source[i:j], line, start_col))
                col += j - i
                i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            word = source[i:j]
            if word == "exact" and j < n and source[j] == "?":
                j += 1
                word = "exact?"
            kind = "KW" if word in KEYWORDS else "IDENT"
            out.append(Token(kind, word, line, start_col))
            col += j - i
            i = j
            continue
        for sym in SYMBOLS:
            if source.startswith(sym, i):
                out.append(Token("SYM", sym, line, start_col))
                i += len(sym)
                col += len(sym)
                break
        else:
            raise ParseError("unexpected character", line, start_col, ch)
    out.append(Token("EOF", "", line, col))
    return out
