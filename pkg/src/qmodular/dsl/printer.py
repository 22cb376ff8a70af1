"""Canonical printing of .qm syntax trees."""

from __future__ import annotations

from fractions import Fraction

from . import ast as A

PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def fmt_number(v: Fraction) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _prec(e) -> int:
    if isinstance(e, A.BinOp):
        return PREC[e.op]
    if isinstance(e, A.Neg):
        return 3
    if isinstance(e, A.Pow):
        return 4
    return 5


def print_expr(e) -> str:
    if isinstance(e, A.Num):
        return fmt_number(e.value)
    if isinstance(e, A.Name):
        return e.ident
    if isinstance(e, A.Basis):
        return "@" + e.coord
    if isinstance(e, A.Call):
        return f"{e.func}(" + ", ".join(print_expr(a) for a in e.args) + ")"
    if isinstance(e, A.Neg):
        inner = print_expr(e.operand)
        if _prec(e.operand) < 3:
            inner = f"({inner})"
        return "-" + inner
    if isinstance(e, A.Pow):
        inner = print_expr(e.base)
        # a rational literal or anything below atom level needs grouping
        if _prec(e.base) < 5 or (isinstance(e.base, A.Num) and Fraction(e.base.value).denominator != 1):
            inner = f"({inner})"
        return f"{inner}^{e.exponent}"
    if isinstance(e, A.BinOp):
        p = PREC[e.op]
        left = print_expr(e.left)
        if _prec(e.left) < p:
            left = f"({left})"
        right = print_expr(e.right)
        if _prec(e.right) <= p:
            right = f"({right})"
        if e.op == "*":
            return f"{left}*{right}"
        return f"{left} {e.op} {right}"
    raise TypeError(f"not an expression node: {e!r}")


def print_statement(s) -> str:
    if isinstance(s, A.ChartDecl):
        head = f"chart {s.name}"
        if s.truncation is not None:
            head += f" truncation {s.truncation}"
        lines = [head + " {"]
        for c in s.coords:
            w = f" weight({c.weight[0]}, {c.weight[1]})" if c.weight else ""
            lines.append(f"  {c.parity} {c.name}{w};")
        lines.append("}")
        return "\n".join(lines)
    if isinstance(s, A.ChartDerived):
        return f"chart {s.name} = {s.kind} of {s.source};"
    if isinstance(s, A.ElemDef):
        return f"elem {s.name} on {s.chart} = {print_expr(s.expr)};"
    if isinstance(s, A.FieldDef):
        return f"field {s.name} on {s.chart} = {print_expr(s.expr)};"
    if isinstance(s, A.FieldConstruct):
        return f"field {s.name} = {s.kind} of {', '.join(s.args)};"
    if isinstance(s, A.LieAlgebraDef):
        lines = [f"field {s.name} = lie_algebra {s.dim} {{"]
        for i, j, e in s.brackets:
            lines.append(f"  [{i}, {j}] = {print_expr(e)};")
        lines.append("}")
        return "\n".join(lines)
    if isinstance(s, A.DoubleDef):
        return f"field {s.name} = double of {s.source} base ({', '.join(s.base)});"
    if isinstance(s, A.VolumeDef):
        scale = f"{fmt_number(s.scale)} * " if s.scale is not None else ""
        return f"volume {s.name} on {s.chart} = {scale}exp({print_expr(s.expr)});"
    if isinstance(s, A.CheckHomological):
        return f"check homological {s.field_name};"
    if isinstance(s, A.ModularQuery):
        vol = f" with volume {s.volume}" if s.volume else ""
        return f"modular {s.field_name}{vol};"
    if isinstance(s, A.DivergenceQuery):
        return f"divergence {s.field_name} {s.volume};"
    if isinstance(s, A.BracketQuery):
        return f"bracket {s.left} {s.right};"
    if isinstance(s, A.ExactQuery):
        return f"exact? {print_expr(s.expr)} by {s.field_name} bound {s.bound};"
    if isinstance(s, A.Assert):
        on = f" on {s.chart}" if s.chart else ""
        return f"assert {print_expr(s.lhs)} == {print_expr(s.rhs)}{on};"
    raise TypeError(f"not a statement node: {s!r}")


def print_script(script: A.Script) -> str:
    return "".join(print_statement(s) + "\n" for s in script.statements)
