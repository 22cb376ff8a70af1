"""Syntax tree of .qm scripts.  Positions are excluded from equality."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple

Pos = Tuple[int, int]


def _pos():
    return field(default=(0, 0), compare=False, repr=False)


# expressions ----------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: Fraction
    pos: Pos = _pos()


@dataclass(frozen=True)
class Name:
    ident: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class Basis:
    coord: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class Neg:
    operand: object
    pos: Pos = _pos()


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object
    pos: Pos = _pos()


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int
    pos: Pos = _pos()


@dataclass(frozen=True)
class Call:
    func: str
    args: Tuple[object, ...]
    pos: Pos = _pos()


# statements -----------------------------------------------------------------


@dataclass(frozen=True)
class CoordDecl:
    parity: str
    name: str
    weight: Optional[Tuple[int, int]] = None
    pos: Pos = _pos()


@dataclass(frozen=True)
class ChartDecl:
    name: str
    truncation: Optional[int]
    coords: Tuple[CoordDecl, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class ChartDerived:
    name: str
    kind: str  # antitangent | cotangent | anticotangent | chart
    source: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class ElemDef:
    name: str
    chart: str
    expr: object
    pos: Pos = _pos()


@dataclass(frozen=True)
class FieldDef:
    name: str
    chart: str
    expr: object
    pos: Pos = _pos()


@dataclass(frozen=True)
class FieldConstruct:
    """``field N = kind of a, b;`` for the unary and binary constructions."""

    name: str
    kind: str
    args: Tuple[str, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class LieAlgebraDef:
    name: str
    dim: int
    brackets: Tuple[Tuple[int, int, object], ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class DoubleDef:
    name: str
    source: str
    base: Tuple[str, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class VolumeDef:
    name: str
    chart: str
    scale: Optional[Fraction]
    expr: object
    pos: Pos = _pos()


@dataclass(frozen=True)
class CheckHomological:
    field_name: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class ModularQuery:
    field_name: str
    volume: Optional[str]
    pos: Pos = _pos()


@dataclass(frozen=True)
class DivergenceQuery:
    field_name: str
    volume: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class BracketQuery:
    left: str
    right: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class ExactQuery:
    expr: object
    field_name: str
    bound: int
    pos: Pos = _pos()


@dataclass(frozen=True)
class Assert:
    lhs: object
    rhs: object
    chart: Optional[str] = None
    pos: Pos = _pos()


@dataclass(frozen=True)
class Script:
    statements: Tuple[object, ...]


QUERY_TYPES = (CheckHomological, ModularQuery, DivergenceQuery, BracketQuery, ExactQuery, Assert)
