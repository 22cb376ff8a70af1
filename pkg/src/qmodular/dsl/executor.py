"""Evaluation of parsed .qm scripts into a Report."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional

from .. import brackets as B
from .. import charts as C
from .. import constructions as K
from .. import modular as MOD
from ..algebra import DEFAULT_TRUNCATION, EVEN, ODD, Chart, Coord, GradedElem, GradedError
from ..berezin import BerezinVolume, divergence
from ..geometry import VectorField, apply, bracket, is_homological, square
from ..render import render_elem, render_field_dsl
from . import ast as A
from .lexer import DSLError
from .printer import fmt_number, print_expr, print_statement
from .report import Record, Report


class TypeCheckError(DSLError):
    """Unknown names, chart or parity mismatches, truncation overflow."""

    exit_code = 2


class ExecutionError(DSLError):
    """A failure raised by the underlying algebra while running a statement."""

    exit_code = 3


@dataclass
class Value:
    kind: str  # scalar | elem | field | volume
    data: object

    def render(self) -> str:
        if self.kind == "scalar":
            return fmt_number(self.data)
        if self.kind == "elem":
            return render_elem(self.data)
        if self.kind == "field":
            return render_field_dsl(self.data)
        return str(self.data)


@dataclass
class Environment:
    charts: Dict[str, Chart] = field(default_factory=dict)
    elems: Dict[str, GradedElem] = field(default_factory=dict)
    fields: Dict[str, VectorField] = field(default_factory=dict)
    volumes: Dict[str, BerezinVolume] = field(default_factory=dict)
    algebroids: Dict[str, K.AlgebroidData] = field(default_factory=dict)
    doubles: Dict[str, K.DoubleStructure] = field(default_factory=dict)

    def taken(self, name: str) -> bool:
        return any(name in d for d in (self.charts, self.elems, self.fields, self.volumes))


def _degree(v: Value) -> int:
    if v.kind == "elem":
        return v.data.max_even_degree() if not v.data.is_zero() else 0
    if v.kind == "field":
        return max((c.max_even_degree() for c in v.data.components.values() if not c.is_zero()), default=0)
    return 0


class Executor:
    def __init__(self, default_truncation: Optional[int] = None):
        self.default_truncation = default_truncation or DEFAULT_TRUNCATION
        self.env = Environment()

    # errors -----------------------------------------------------------------

    @staticmethod
    def type_error(msg: str, node) -> TypeCheckError:
        line, col = getattr(node, "pos", (0, 0))
        return TypeCheckError(msg, line, col)

    # expressions ------------------------------------------------------------

    def eval(self, e, chart: Chart) -> Value:
        env = self.env
        if isinstance(e, A.Num):
            return Value("scalar", Fraction(e.value))
        if isinstance(e, A.Name):
            if e.ident in chart:
                return Value("elem", chart.var(e.ident))
            for kind, table in (("elem", env.elems), ("field", env.fields), ("volume", env.volumes)):
                if e.ident in table:
                    obj = table[e.ident]
                    if obj.chart != chart:
                        raise self.type_error(f"{e.ident!r} lives on another chart", e)
                    return Value(kind, obj)
            raise self.type_error(f"unknown identifier {e.ident!r}", e)
        if isinstance(e, A.Basis):
            if e.coord not in chart:
                raise self.type_error(f"unknown coordinate {e.coord!r}", e)
            return Value("field", VectorField.basis(chart, e.coord))
        if isinstance(e, A.Neg):
            v = self.eval(e.operand, chart)
            self._arith(v, e)
            return Value(v.kind, -v.data)
        if isinstance(e, A.BinOp):
            return self._binop(e, self.eval(e.left, chart), self.eval(e.right, chart), chart)
        if isinstance(e, A.Pow):
            v = self._arith(self.eval(e.base, chart), e)
            if v.kind == "field":
                raise self.type_error("vector fields cannot be raised to a power", e)
            if _degree(v) * e.exponent > chart.truncation:
                raise self.type_error(f"truncation exceeded (order {chart.truncation})", e)
            return Value(v.kind, v.data ** e.exponent)
        if isinstance(e, A.Call):
            return self._call(e, chart)
        raise TypeError(f"not an expression node: {e!r}")

    def _arith(self, v: Value, node) -> Value:
        if v.kind == "volume":
            raise self.type_error("volumes cannot be used in arithmetic", node)
        return v

    def _binop(self, e: A.BinOp, a: Value, b: Value, chart: Chart) -> Value:
        self._arith(a, e)
        self._arith(b, e)
        op = e.op
        if op in "+-":
            if "field" in (a.kind, b.kind):
                if a.kind != b.kind:
                    raise self.type_error("cannot add a vector field and a function", e)
                return Value("field", a.data + b.data if op == "+" else a.data - b.data)
            if a.kind == b.kind == "scalar":
                return Value("scalar", a.data + b.data if op == "+" else a.data - b.data)
            x = a.data if a.kind == "elem" else chart.const(a.data)
            y = b.data if b.kind == "elem" else chart.const(b.data)
            return Value("elem", x + y if op == "+" else x - y)
        if op == "/":
            if b.kind != "scalar":
                raise self.type_error("division is only by a rational number", e)
            if b.data == 0:
                raise self.type_error("division by zero", e)
            inv = 1 / b.data
            if a.kind == "field":
                return Value("field", a.data.scale(inv))
            return Value(a.kind, a.data * inv if a.kind == "scalar" else a.data.scale(inv))
        # multiplication
        if _degree(a) + _degree(b) > chart.truncation:
            raise self.type_error(f"truncation exceeded (order {chart.truncation})", e)
        if a.kind == "scalar" and b.kind == "scalar":
            return Value("scalar", a.data * b.data)
        if a.kind == "scalar":
            return Value(b.kind, b.data.scale(a.data))
        if b.kind == "scalar":
            return Value(a.kind, a.data.scale(b.data))
        if a.kind == "elem" and b.kind == "elem":
            return Value("elem", a.data * b.data)
        if a.kind == "elem" and b.kind == "field":
            return Value("field", b.data.left_mul(a.data))
        raise self.type_error("a vector field can only be multiplied by a function on its left", e)

    def _expect(self, v: Value, kind: str, node) -> object:
        if v.kind != kind:
            raise self.type_error(f"expected a {kind}, got a {v.kind}", node)
        return v.data

    def _call(self, e: A.Call, chart: Chart) -> Value:
        args = [self.eval(a, chart) for a in e.args]
        f = e.func

        def arg(i, kind):
            v = args[i]
            if kind == "elem" and v.kind == "scalar":
                return chart.const(v.data)
            return self._expect(v, kind, e.args[i])

        vol = arg(1, "volume") if len(args) > 1 and f in ("modular", "div", "delta") else None
        try:
            if f == "modular":
                return Value("elem", MOD.modular_rep(arg(0, "field"), vol))
            if f == "local_rep":
                return Value("elem", MOD.local_rep(arg(0, "field")))
            if f == "div":
                return Value("elem", divergence(arg(0, "field"), vol))
            if f == "apply":
                return Value("elem", apply(arg(0, "field"), arg(1, "elem")))
            if f == "bracket":
                return Value("field", bracket(arg(0, "field"), arg(1, "field")))
            if f == "schouten":
                return Value("elem", B.schouten(arg(0, "elem"), arg(1, "elem")))
            if f == "poisson":
                return Value("elem", B.poisson(arg(0, "elem"), arg(1, "elem")))
            if f == "delta":
                return Value("elem", B.bv_laplacian(arg(0, "elem"), vol))
        except DSLError:
            raise
        except GradedError as exc:
            line, col = e.pos
            raise ExecutionError(str(exc), line, col) from exc
        raise self.type_error(f"unknown function {f!r}", e)

    # definitions ------------------------------------------------------------

    def _chart(self, name: str, node) -> Chart:
        if name not in self.env.charts:
            raise self.type_error(f"unknown chart {name!r}", node)
        return self.env.charts[name]

    def _field(self, name: str, node) -> VectorField:
        if name not in self.env.fields:
            raise self.type_error(f"unknown field {name!r}", node)
        return self.env.fields[name]

    def _fresh(self, name: str, node):
        if self.env.taken(name):
            raise self.type_error(f"{name!r} is already defined", node)

    def define(self, s) -> None:
        env = self.env
        if not isinstance(s, (A.Assert,) + A.QUERY_TYPES):
            self._fresh(s.name, s)
        if isinstance(s, A.ChartDecl):
            coords = []
            for c in s.coords:
                coords.append(Coord(c.name, EVEN if c.parity == "even" else ODD, c.weight))
            names = [c.name for c in coords]
            if len(set(names)) != len(names):
                raise self.type_error("duplicate coordinate names", s)
            trunc = s.truncation if s.truncation is not None else self.default_truncation
            if trunc < 1:
                raise self.type_error("truncation must be at least 1", s)
            env.charts[s.name] = Chart(tuple(coords), trunc, s.name)
        elif isinstance(s, A.ChartDerived):
            if s.kind == "chart":
                for table in (env.fields, env.elems, env.volumes):
                    if s.source in table:
                        env.charts[s.name] = table[s.source].chart
                        return
                raise self.type_error(f"unknown object {s.source!r}", s)
            base = self._chart(s.source, s)
            maker = {"antitangent": C.antitangent, "cotangent": C.cotangent,
                     "anticotangent": C.anticotangent}[s.kind]
            env.charts[s.name] = self._guard(lambda: maker(base), s)
        elif isinstance(s, A.ElemDef):
            chart = self._chart(s.chart, s)
            v = self.eval(s.expr, chart)
            if v.kind not in ("elem", "scalar"):
                raise self.type_error("an element definition needs a function expression", s)
            env.elems[s.name] = v.data if v.kind == "elem" else chart.const(v.data)
        elif isinstance(s, A.FieldDef):
            chart = self._chart(s.chart, s)
            v = self.eval(s.expr, chart)
            if v.kind != "field":
                raise self.type_error("a field definition needs a vector field expression", s)
            if not v.data.is_homogeneous():
                raise self.type_error("parity mismatch: the vector field is not homogeneous", s)
            env.fields[s.name] = v.data
        elif isinstance(s, A.FieldConstruct):
            env.fields[s.name] = self._construct(s)
        elif isinstance(s, A.LieAlgebraDef):
            data = self._lie_algebra(s)
            env.algebroids[s.name] = data
            env.fields[s.name] = self._guard(lambda: K.lie_algebroid(data), s)
        elif isinstance(s, A.DoubleDef):
            Q = self._field(s.source, s)
            data = env.algebroids.get(s.source)
            if data is None or tuple(data.base.names) != tuple(s.base):
                data = self._guard(lambda: K.AlgebroidData.from_field(Q, s.base), s)
            D = self._guard(lambda: K.double_from_algebroid(data), s)
            env.doubles[s.name] = D
            env.fields[s.name] = D.total
        elif isinstance(s, A.VolumeDef):
            chart = self._chart(s.chart, s)
            v = self.eval(s.expr, chart)
            if v.kind not in ("elem", "scalar"):
                raise self.type_error("a volume needs a function in exp(...)", s)
            g = v.data if v.kind == "elem" else chart.const(v.data)
            if not g.has_parity(EVEN):
                raise self.type_error("parity mismatch: the log-density must be even", s)
            if g.constant_term():
                raise self.type_error("the log-density must vanish at the origin", s)
            scale = s.scale if s.scale is not None else Fraction(1)
            if scale <= 0:
                raise self.type_error("the volume scale must be positive", s)
            env.volumes[s.name] = BerezinVolume(chart, scale, g)
        else:
            raise TypeError(f"not a definition: {s!r}")

    def _guard(self, thunk, node):
        try:
            return thunk()
        except DSLError:
            raise
        except GradedError as exc:
            line, col = node.pos
            raise ExecutionError(str(exc), line, col) from exc

    def _construct(self, s: A.FieldConstruct) -> VectorField:
        k = s.kind
        if k == "de_rham":
            base = self._chart(s.args[0], s)
            return self._guard(lambda: K.de_rham(base), s)
        if k == "hamiltonian":
            name = s.args[0]
            if name not in self.env.elems:
                raise self.type_error(f"unknown element {name!r}", s)
            P = self.env.elems[name]
            if isinstance(P.chart, C.AnticotangentChart):
                return self._guard(lambda: B.hamiltonian_vf_odd(P), s)
            if isinstance(P.chart, C.CotangentChart):
                return self._guard(lambda: B.hamiltonian_vf_even(P), s)
            raise self.type_error("hamiltonian needs an element on a cotangent or anticotangent chart", s)
        if k == "product":
            Q1 = self._field(s.args[0], s)
            Q2 = self._field(s.args[1], s)
            return self._guard(lambda: K.product(Q1.chart, Q1, Q2.chart, Q2)[1], s)
        X = self._field(s.args[0], s)
        maker = {"lie_lift": K.lie_derivative_lift, "interior": K.interior,
                 "cotangent_lift": K.cotangent_lift, "anticotangent_lift": K.anticotangent_lift}[k]
        return self._guard(lambda: maker(X), s)

    def _lie_algebra(self, s: A.LieAlgebraDef) -> K.AlgebroidData:
        if s.dim < 1:
            raise self.type_error("dimension must be positive", s)
        names = [f"e{i}" for i in range(1, s.dim + 1)]
        gens = Chart.from_spec([(n, EVEN) for n in names], 2)
        consts: Dict = {}
        for i, j, expr in s.brackets:
            if not (1 <= i <= s.dim and 1 <= j <= s.dim) or i == j:
                raise self.type_error(f"bad bracket indices [{i}, {j}]", expr)
            v = self.eval(expr, gens)
            g = v.data if v.kind == "elem" else gens.const(v.data)
            if v.kind not in ("elem", "scalar"):
                raise self.type_error("a bracket value must be a combination of e1..en", expr)
            row = {}
            for (exps, _), c in g.terms.items():
                if sum(exps) != 1:
                    raise self.type_error("a bracket value must be linear in e1..en", expr)
                row[exps.index(1) + 1] = c
            key, sign = ((i, j), 1) if i < j else ((j, i), -1)
            if key in consts:
                raise self.type_error(f"bracket [{i}, {j}] given twice", expr)
            consts[key] = {k: sign * c for k, c in row.items()}
        return K.lie_algebra(consts, s.dim)

    # queries ----------------------------------------------------------------

    def _infer_chart(self, s: A.Assert) -> Chart:
        if s.chart is not None:
            return self._chart(s.chart, s)
        env = self.env
        stack = [s.lhs, s.rhs]
        while stack:
            e = stack.pop(0)
            if isinstance(e, A.Name):
                for table in (env.fields, env.elems, env.volumes):
                    if e.ident in table:
                        return table[e.ident].chart
            elif isinstance(e, A.Neg):
                stack.insert(0, e.operand)
            elif isinstance(e, A.BinOp):
                stack[0:0] = [e.left, e.right]
            elif isinstance(e, A.Pow):
                stack.insert(0, e.base)
            elif isinstance(e, A.Call):
                stack[0:0] = list(e.args)
        if len(env.charts) == 1:
            return next(iter(env.charts.values()))
        raise self.type_error("cannot infer the chart of this assertion; add 'on <chart>'", s)

    def query(self, s) -> Record:
        text = print_statement(s)
        line, col = s.pos
        rec = Record(query=text, kind=type(s).__name__, line=line, col=col)
        env = self.env
        if isinstance(s, A.CheckHomological):
            Q = self._field(s.field_name, s)
            ok = self._guard(lambda: is_homological(Q), s)
            rec.inputs = {"field": render_field_dsl(Q)}
            rec.verdict = "homological" if ok else "not homological"
            if not ok:
                rec.value = render_field_dsl(self._guard(lambda: square(Q), s))
        elif isinstance(s, A.ModularQuery):
            Q = self._field(s.field_name, s)
            rho = None
            if s.volume is not None:
                if s.volume not in env.volumes:
                    raise self.type_error(f"unknown volume {s.volume!r}", s)
                rho = env.volumes[s.volume]
            rec.inputs = {"field": render_field_dsl(Q)}
            if rho is not None:
                rec.inputs["volume"] = str(rho)
            rec.value = render_elem(self._guard(lambda: MOD.modular_rep(Q, rho), s))
        elif isinstance(s, A.DivergenceQuery):
            X = self._field(s.field_name, s)
            if s.volume not in env.volumes:
                raise self.type_error(f"unknown volume {s.volume!r}", s)
            rho = env.volumes[s.volume]
            rec.inputs = {"field": render_field_dsl(X), "volume": str(rho)}
            rec.value = render_elem(self._guard(lambda: divergence(X, rho), s))
        elif isinstance(s, A.BracketQuery):
            X = self._field(s.left, s)
            Y = self._field(s.right, s)
            rec.inputs = {"left": render_field_dsl(X), "right": render_field_dsl(Y)}
            rec.value = render_field_dsl(self._guard(lambda: bracket(X, Y), s))
        elif isinstance(s, A.ExactQuery):
            Q = self._field(s.field_name, s)
            v = self.eval(s.expr, Q.chart)
            if v.kind not in ("elem", "scalar"):
                raise self.type_error("exact? needs a function", s)
            f = v.data if v.kind == "elem" else Q.chart.const(v.data)
            verdict = self._guard(lambda: MOD.solve_exactness(f, Q, s.bound), s)
            rec.inputs = {"element": render_elem(f), "field": render_field_dsl(Q)}
            info = verdict.to_record()
            rec.verdict = info["status"]
            rec.witness = render_elem(verdict.witness) if verdict.is_exact else None
            rec.extra = {"bound": s.bound, "complete": info["complete"]}
        elif isinstance(s, A.Assert):
            chart = self._infer_chart(s)
            lhs = self.eval(s.lhs, chart)
            rhs = self.eval(s.rhs, chart)
            lhs, rhs = self._comparable(lhs, rhs, chart, s)
            equal = lhs.data == rhs.data
            rec.verdict = "pass" if equal else "fail"
            rec.inputs = {"lhs": print_expr(s.lhs), "rhs": print_expr(s.rhs)}
            rec.value = lhs.render()
            rec.assertion = True
            rec.passed = equal
            if not equal:
                rec.diff = {"lhs": lhs.render(), "rhs": rhs.render()}
        else:
            raise TypeError(f"not a query: {s!r}")
        return rec

    def _comparable(self, a: Value, b: Value, chart: Chart, node):
        for v in (a, b):
            if v.kind == "volume":
                raise self.type_error("volumes cannot be compared", node)
        if a.kind == "scalar" and b.kind == "elem":
            a = Value("elem", chart.const(a.data))
        if b.kind == "scalar" and a.kind == "elem":
            b = Value("elem", chart.const(b.data))
        if a.kind == "scalar" and b.kind == "scalar":
            return a, b
        if a.kind == "field" and b.kind == "scalar" and b.data == 0:
            b = Value("field", VectorField.zero(chart))
        if b.kind == "field" and a.kind == "scalar" and a.data == 0:
            a = Value("field", VectorField.zero(chart))
        if a.kind != b.kind:
            raise self.type_error(f"cannot compare a {a.kind} with a {b.kind}", node)
        return a, b

    # driver -----------------------------------------------------------------

    def run(self, script: A.Script, queries: bool = True) -> Report:
        report = Report()
        for s in script.statements:
            is_query = isinstance(s, A.QUERY_TYPES)
            if is_query and not queries:
                continue
            start = time.perf_counter()
            try:
                if is_query:
                    rec = self.query(s)
                else:
                    self.define(s)
                    report.definitions += 1
                    continue
            except DSLError as exc:
                report.error = exc
                break
            except (GradedError, ArithmeticError, ValueError) as exc:
                line, col = s.pos
                report.error = ExecutionError(str(exc), line, col)
                break
            rec.timing = time.perf_counter() - start
            report.records.append(rec)
        return report


def execute(script: A.Script, default_truncation: Optional[int] = None, queries: bool = True) -> Report:
    return Executor(default_truncation).run(script, queries)
