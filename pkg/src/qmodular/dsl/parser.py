"""Recursive-descent parser for .qm scripts.

Grammar sketch (``[]`` optional, ``*`` repetition)::

    script    := stmt*
    stmt      := 'chart' NAME ['truncation' INT] '{' coord* '}'
               | 'chart' NAME '=' KIND 'of' NAME ';'
               | 'elem' NAME 'on' NAME '=' expr ';'
               | 'field' NAME 'on' NAME '=' expr ';'
               | 'field' NAME '=' CONSTRUCTION 'of' NAME [',' NAME] ';'
               | 'field' NAME '=' 'lie_algebra' INT '{' ('[' INT ',' INT ']' '=' expr ';')* '}'
               | 'field' NAME '=' 'double' 'of' NAME 'base' '(' [NAME (',' NAME)*] ')' ';'
               | 'volume' NAME 'on' NAME '=' [NUMBER '*'] 'exp' '(' expr ')' ';'
               | 'check' 'homological' NAME ';'
               | 'modular' NAME ['with' 'volume' NAME] ';'
               | 'divergence' NAME NAME ';'
               | 'bracket' NAME NAME ';'
               | 'exact?' expr 'by' NAME 'bound' INT ';'
               | 'assert' expr '==' expr ['on' NAME] ';'
    coord     := ('even' | 'odd') NAME ['weight' '(' INT ',' INT ')'] ';'
    expr      := term (('+' | '-') term)*
    term      := unary (('*' | '/') unary)*
    unary     := '-' unary | power
    power     := atom ['^' INT]
    atom      := NUMBER | NAME | '@' NAME | FUNC '(' expr (',' expr)* ')' | '(' expr ')'
"""

from __future__ import annotations

from fractions import Fraction
from typing import List

from . import ast as A
from .lexer import ParseError, Token, tokenize

DERIVED_CHARTS = ("antitangent", "cotangent", "anticotangent", "chart")
UNARY_CONSTRUCTIONS = ("de_rham", "lie_lift", "interior", "cotangent_lift", "anticotangent_lift",
                       "hamiltonian")
BINARY_CONSTRUCTIONS = ("product",)
FUNCTIONS = {
    "modular": (1, 2),
    "local_rep": (1, 1),
    "div": (1, 2),
    "apply": (2, 2),
    "bracket": (2, 2),
    "schouten": (2, 2),
    "poisson": (2, 2),
    "delta": (1, 2),
}


class Parser:
    def __init__(self, source: str):
        self.tokens: List[Token] = tokenize(source)
        self.i = 0

    # token helpers ----------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def error(self, msg: str, tok: Token = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.col, tok.text or "<end of input>")

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("SYM", "KW")

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error(f"expected {text!r}")
        return self.advance()

    def name(self) -> str:
        if self.tok.kind != "IDENT":
            self.error("expected a name")
        return self.advance().text

    def integer(self) -> int:
        if self.tok.kind != "INT":
            self.error("expected an integer")
        return int(self.advance().text)

    def word(self, text: str):
        """Expect an identifier-like word that is not reserved (e.g. 'lie_algebra')."""
        if self.tok.text != text:
            self.error(f"expected {text!r}")
        return self.advance()

    # statements -------------------------------------------------------------

    def parse(self) -> A.Script:
        stmts = []
        while self.tok.kind != "EOF":
            stmts.append(self.statement())
        return A.Script(tuple(stmts))

    def statement(self):
        t = self.tok
        pos = (t.line, t.col)
        if t.kind == "KW":
            handler = {
                "chart": self.chart_stmt,
                "elem": self.elem_stmt,
                "field": self.field_stmt,
                "volume": self.volume_stmt,
                "check": self.check_stmt,
                "modular": self.modular_stmt,
                "divergence": self.divergence_stmt,
                "bracket": self.bracket_stmt,
                "exact?": self.exact_stmt,
                "assert": self.assert_stmt,
            }.get(t.text)
            if handler is not None:
                self.advance()
                return handler(pos)
        self.error("expected a statement")

    def chart_stmt(self, pos):
        name = self.name()
        if self.at("="):
            self.advance()
            kind = self.tok.text
            if kind not in DERIVED_CHARTS:
                self.error("expected antitangent, cotangent, anticotangent or chart")
            self.advance()
            self.expect("of")
            src = self.name()
            self.expect(";")
            return A.ChartDerived(name, kind, src, pos)
        trunc = None
        if self.at("truncation"):
            self.advance()
            trunc = self.integer()
        self.expect("{")
        coords = []
        while not self.at("}"):
            ct = self.tok
            if not (self.at("even") or self.at("odd")):
                self.error("expected 'even' or 'odd'")
            parity = self.advance().text
            cname = self.name()
            weight = None
            if self.at("weight"):
                self.advance()
                self.expect("(")
                w0 = self.integer()
                self.expect(",")
                w1 = self.integer()
                self.expect(")")
                weight = (w0, w1)
            self.expect(";")
            coords.append(A.CoordDecl(parity, cname, weight, (ct.line, ct.col)))
        self.expect("}")
        return A.ChartDecl(name, trunc, tuple(coords), pos)

    def elem_stmt(self, pos):
        name = self.name()
        self.expect("on")
        chart = self.name()
        self.expect("=")
        e = self.expr()
        self.expect(";")
        return A.ElemDef(name, chart, e, pos)

    def field_stmt(self, pos):
        name = self.name()
        if self.at("on"):
            self.advance()
            chart = self.name()
            self.expect("=")
            e = self.expr()
            self.expect(";")
            return A.FieldDef(name, chart, e, pos)
        self.expect("=")
        kind_tok = self.tok
        kind = kind_tok.text
        if kind in UNARY_CONSTRUCTIONS or kind in BINARY_CONSTRUCTIONS:
            self.advance()
            self.expect("of")
            args = [self.name()]
            if kind in BINARY_CONSTRUCTIONS:
                self.expect(",")
                args.append(self.name())
            self.expect(";")
            return A.FieldConstruct(name, kind, tuple(args), pos)
        if kind == "lie_algebra":
            self.advance()
            dim = self.integer()
            self.expect("{")
            brackets = []
            while not self.at("}"):
                self.expect("[")
                i = self.integer()
                self.expect(",")
                j = self.integer()
                self.expect("]")
                self.expect("=")
                e = self.expr()
                self.expect(";")
                brackets.append((i, j, e))
            self.expect("}")
            return A.LieAlgebraDef(name, dim, tuple(brackets), pos)
        if kind == "double":
            self.advance()
            self.expect("of")
            src = self.name()
            self.expect("base")
            self.expect("(")
            base = []
            if not self.at(")"):
                base.append(self.name())
                while self.at(","):
                    self.advance()
                    base.append(self.name())
            self.expect(")")
            self.expect(";")
            return A.DoubleDef(name, src, tuple(base), pos)
        self.error("expected 'on' or a construction", kind_tok)

    def volume_stmt(self, pos):
        name = self.name()
        self.expect("on")
        chart = self.name()
        self.expect("=")
        scale = None
        if self.tok.kind in ("INT", "RAT"):
            scale = Fraction(self.advance().text)
            self.expect("*")
        self.expect("exp")
        self.expect("(")
        e = self.expr()
        self.expect(")")
        self.expect(";")
        return A.VolumeDef(name, chart, scale, e, pos)

    def check_stmt(self, pos):
        self.expect("homological")
        f = self.name()
        self.expect(";")
        return A.CheckHomological(f, pos)

    def modular_stmt(self, pos):
        f = self.name()
        vol = None
        if self.at("with"):
            self.advance()
            self.expect("volume")
            vol = self.name()
        self.expect(";")
        return A.ModularQuery(f, vol, pos)

    def divergence_stmt(self, pos):
        f = self.name()
        v = self.name()
        self.expect(";")
        return A.DivergenceQuery(f, v, pos)

    def bracket_stmt(self, pos):
        a = self.name()
        b = self.name()
        self.expect(";")
        return A.BracketQuery(a, b, pos)

    def exact_stmt(self, pos):
        e = self.expr()
        self.expect("by")
        f = self.name()
        self.expect("bound")
        n = self.integer()
        self.expect(";")
        return A.ExactQuery(e, f, n, pos)

    def assert_stmt(self, pos):
        lhs = self.expr()
        self.expect("==")
        rhs = self.expr()
        chart = None
        if self.at("on"):
            self.advance()
            chart = self.name()
        self.expect(";")
        return A.Assert(lhs, rhs, chart, pos)

    # expressions ------------------------------------------------------------

    def expr(self):
        left = self.term()
        while self.at("+") or self.at("-"):
            t = self.advance()
            right = self.term()
            left = A.BinOp(t.text, left, right, (t.line, t.col))
        return left

    def term(self):
        left = self.unary()
        while self.at("*") or self.at("/"):
            t = self.advance()
            right = self.unary()
            left = A.BinOp(t.text, left, right, (t.line, t.col))
        return left

    def unary(self):
        if self.at("-"):
            t = self.advance()
            return A.Neg(self.unary(), (t.line, t.col))
        return self.power()

    def power(self):
        base = self.atom()
        if self.at("^"):
            t = self.advance()
            return A.Pow(base, self.integer(), (t.line, t.col))
        return base

    def atom(self):
        t = self.tok
        pos = (t.line, t.col)
        if t.kind in ("INT", "RAT"):
            self.advance()
            return A.Num(Fraction(t.text), pos)
        if t.kind == "SYM" and t.text == "@":
            self.advance()
            return A.Basis(self.name(), pos)
        if t.kind == "SYM" and t.text == "(":
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        if t.text in FUNCTIONS and self.peek().text == "(":
            self.advance()
            self.expect("(")
            args = [self.expr()]
            while self.at(","):
                self.advance()
                args.append(self.expr())
            self.expect(")")
            lo, hi = FUNCTIONS[t.text]
            if not lo <= len(args) <= hi:
                self.error(f"{t.text} takes {lo}..{hi} arguments", t)
            return A.Call(t.text, tuple(args), pos)
        if t.kind == "IDENT":
            self.advance()
            return A.Name(t.text, pos)
        self.error("expected an expression")


def parse(source: str) -> A.Script:
    return Parser(source).parse()
