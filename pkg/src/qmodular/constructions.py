"""Factories for the derived Q-manifolds: lifts, algebroids, Nijenhuis and doubles.

Every lift is built from its defining bracket or Hamiltonian and, where a
closed coordinate form exists, compared against it; a mismatch raises
`ConstructionMismatch` since it can only mean a sign error.

Fibre index parities: for an algebroid on Pi A with fibre coordinates xi^alpha,
signs are written in terms of the actual parity of xi^alpha.  A formula
quoted with the parity of the fibre coordinate of A itself differs by one,
so (-1)^{a(alpha+1)} there is (-1)^{a |xi^alpha|} here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, Mapping, Optional, Sequence, Tuple

from .algebra import ODD, Chart, ChartMismatch, Coord, GradedElem, GradedError
from .brackets import hamiltonian_vf_even, hamiltonian_vf_odd
from .charts import anticotangent, antitangent, cotangent, product_chart
from .geometry import ChartMorphism, VectorField, apply, bracket, is_homological
from .modular import NotHomological, local_rep
from .tensors import symmetrise


class ConstructionMismatch(GradedError):
    """Two independent constructions of the same object disagree."""


class AlgebroidAxiomError(NotHomological):
    pass


class NotNijenhuis(NotHomological):
    pass


class NotCommuting(GradedError):
    pass


def _require_homological(Q: VectorField, what: str = "vector field"):
    if not is_homological(Q):
        raise NotHomological(f"{what} is not homological")


# de Rham, interior products and Lie derivatives ----------------------------


def de_rham(base: Chart) -> VectorField:
    """d = dx^a d/dx^a on the antitangent chart."""
    T = antitangent(base)
    return VectorField(T, {c.name: T.var(T.fibre(c.name)) for c in base.coords}, ODD)


def interior(X: VectorField) -> VectorField:
    """i_X = (-1)^{|X|} X^a d/d(dx^a); parity |X| + 1."""
    if X.parity is None:
        raise GradedError("interior product needs a homogeneous field")
    T = antitangent(X.chart)
    sign = -1 if X.parity else 1
    comps = {T.fibre(n): c.rechart(T).scale(sign) for n, c in X.components.items()}
    return VectorField(T, comps, (X.parity + 1) % 2)


def lie_derivative_closed_form(X: VectorField) -> VectorField:
    """X^a d/dx^a + (-1)^{|X|} d(X^a) d/d(dx^a).

    For odd Q this is Q^a d_a - dx^b (d_b Q^a) d/d(dx^a).
    """
    base = X.chart
    T = antitangent(base)
    d = de_rham(base)
    comps = {}
    for n, c in X.components.items():
        lifted = c.rechart(T)
        comps[n] = lifted
        dX = apply(d, lifted)
        comps[T.fibre(n)] = -dX if X.parity else dX
    return VectorField(T, comps, X.parity)


def lie_derivative_lift(X: VectorField) -> VectorField:
    """L_X = [d, i_X] on the antitangent chart, checked against the closed form."""
    if X.parity is None:
        raise GradedError("Lie derivative lift needs a homogeneous field")
    L = bracket(de_rham(X.chart), interior(X))
    if L != lie_derivative_closed_form(X):
        raise ConstructionMismatch("[d, i_X] disagrees with the closed coordinate form")
    return L


def cotangent_lift(Q: VectorField) -> VectorField:
    """{S, .} for the symbol S = Q^a p_a on T*M."""
    _require_homological(Q)
    base = Q.chart
    C = cotangent(base)
    S = C.zero()
    for n, c in Q.components.items():
        S = S + c.rechart(C) * C.var(C.fibre(n))
    L = hamiltonian_vf_even(S) if Q.components else VectorField.zero(C, ODD)
    closed = {}
    for c in base.coords:
        a = c.parity
        if not Q[c.name].is_zero():
            closed[c.name] = Q[c.name].rechart(C)
        acc = C.zero()
        for b in base.coords:
            acc = acc + Q[b.name].left_partial(c.name).rechart(C) * C.var(C.fibre(b.name))
        closed[C.fibre(c.name)] = acc if a else -acc
    if L != VectorField(C, closed, ODD):
        raise ConstructionMismatch("Hamiltonian lift disagrees with the closed coordinate form")
    return L


def anticotangent_lift(Q: VectorField) -> VectorField:
    """[[P, .]] for the even symbol P = Q^a x*_a on Pi T*M."""
    _require_homological(Q)
    base = Q.chart
    A = anticotangent(base)
    P = A.zero()
    for n, c in Q.components.items():
        P = P + c.rechart(A) * A.var(A.fibre(n))
    L = hamiltonian_vf_odd(P)
    closed = {}
    for c in base.coords:
        if not Q[c.name].is_zero():
            closed[c.name] = Q[c.name].rechart(A)
        acc = A.zero()
        for b in base.coords:
            acc = acc + Q[b.name].left_partial(c.name).rechart(A) * A.var(A.fibre(b.name))
        closed[A.fibre(c.name)] = acc if c.parity else -acc
    if L != VectorField(A, closed, ODD):
        raise ConstructionMismatch("Schouten lift disagrees with the closed coordinate form")
    return L


def _exp_apply(X: VectorField, f: GradedElem, sign: int = 1, max_terms: int = 64) -> GradedElem:
    """sum_k (sign X)^k f / k!, stopping once a term vanishes."""
    total = f
    term = f
    for k in range(1, max_terms):
        term = apply(X, term).scale(Fraction(sign, k))
        if term.is_zero():
            return total
        total = total + term
    raise GradedError("exponential series did not terminate")


def mqk_conjugate(Q: VectorField, f: GradedElem) -> GradedElem:
    """(e^{-i_Q} d e^{i_Q}) f on the antitangent chart of Q's chart."""
    _require_homological(Q)
    T = antitangent(Q.chart)
    if f.chart != T:
        raise ChartMismatch("element must live on the antitangent chart")
    iQ = interior(Q)
    d = de_rham(Q.chart)
    return _exp_apply(iQ, apply(d, _exp_apply(iQ, f, 1)), -1)


def anchor(Q: VectorField) -> ChartMorphism:
    """a_Q: M -> Pi TM with a_Q^*(x^a, dx^b) = (x^a, Q^b)."""
    _require_homological(Q)
    M = Q.chart
    T = antitangent(M)
    images = {}
    for c in M.coords:
        images[c.name] = M.var(c.name)
        images[T.fibre(c.name)] = Q[c.name]
    return ChartMorphism(M, T, images)


# products ------------------------------------------------------------------


def _renamed(chart: Chart, renames: Mapping[str, str]) -> Chart:
    coords = tuple(Coord(renames.get(c.name, c.name), c.parity, c.weight) for c in chart.coords)
    return Chart(coords, chart.truncation, chart.label)


def _transport(f: GradedElem, chart: Chart) -> GradedElem:
    """Same terms on a chart that differs only in coordinate names."""
    return GradedElem(chart, f.terms)


def product(M1: Chart, Q1: VectorField, M2: Chart, Q2: VectorField):
    """Q-manifold product (M1 x M2, Q1 + Q2).

    Returns ``(chart, field, renames)``; colliding names of the second factor
    are renamed and reported in ``renames``.
    """
    if Q1.chart != M1 or Q2.chart != M2:
        raise ChartMismatch("fields do not live on the given charts")
    _require_homological(Q1, "first factor")
    _require_homological(Q2, "second factor")
    P, renames = product_chart(M1, M2)
    M2r = _renamed(M2, renames)
    comps = {}
    for n, c in Q1.components.items():
        comps[n] = c.rechart(P)
    for n, c in Q2.components.items():
        comps[renames.get(n, n)] = _transport(c, M2r).rechart(P)
    Q = VectorField(P, comps, ODD)
    assert is_homological(Q)
    return P, Q, renames


def lift_to_product(f: GradedElem, P: Chart, renames: Optional[Mapping[str, str]] = None) -> GradedElem:
    """Pull a factor's function back to the product chart."""
    if renames:
        f = _transport(f, _renamed(f.chart, renames))
    return f.rechart(P)


# algebroids ----------------------------------------------------------------

Key = Tuple[str, ...]


@dataclass(frozen=True)
class AlgebroidData:
    """Structure functions of an L-infinity algebroid on Pi A.

    ``components[T][(alpha_n, ..., alpha_1)]`` is Q^T_{alpha_n ... alpha_1}(x),
    an element over the base chart, for every target coordinate T (base or
    fibre).  The assembled field is

        Q^T = sum_n (1/n!) xi^{alpha_1} ... xi^{alpha_n} Q^T_{alpha_n ... alpha_1}

    summed over all orderings, so the table must be graded-symmetric; use
    `AlgebroidData.build` to fill it from one ordering per index set.
    Q^T_{alpha_n..alpha_1} equals d_{alpha_n} ... d_{alpha_1} Q^T at xi = 0.
    """

    base: Chart
    fibre: Tuple[Coord, ...]
    components: Mapping[str, Mapping[Key, GradedElem]]
    truncation: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "fibre", tuple(self.fibre))
        chart = self.chart
        names = set(chart.names)
        for T, table in self.components.items():
            if T not in names:
                raise GradedError(f"unknown target coordinate {T!r}")
            for key, val in table.items():
                if any(k not in self.fibre_names for k in key):
                    raise GradedError(f"component index {key} is not made of fibre names")
                if val.chart != self.base:
                    raise ChartMismatch("structure functions must live on the base chart")

    @property
    def fibre_names(self) -> Tuple[str, ...]:
        return tuple(c.name for c in self.fibre)

    @property
    def chart(self) -> Chart:
        trunc = self.truncation if self.truncation is not None else self.base.truncation
        return Chart(self.base.coords + self.fibre, trunc, self.base.label)

    def parity_of(self, name: str) -> int:
        return self.chart.parity(name)

    @classmethod
    def build(cls, base: Chart, fibre: Sequence[Coord], components, truncation=None) -> "AlgebroidData":
        tmp = cls(base, tuple(fibre), {}, truncation)
        full = {T: symmetrise(table, tmp.parity_of) for T, table in components.items()}
        return cls(base, tuple(fibre), full, truncation)

    def field(self) -> VectorField:
        chart = self.chart
        comps: Dict[str, GradedElem] = {}
        for T, table in self.components.items():
            acc = chart.zero()
            for key, val in table.items():
                mono = chart.one()
                for a in reversed(key):
                    mono = mono * chart.var(a)
                acc = acc + (mono * val.rechart(chart)).scale(Fraction(1, factorial(len(key))))
            comps[T] = acc
        return VectorField(chart, comps)

    @classmethod
    def from_field(cls, Q: VectorField, base_names: Sequence[str], max_order: Optional[int] = None):
        """Read all structure functions off a field by repeated fibre derivatives."""
        chart = Q.chart
        base = Chart(tuple(chart.coord(n) for n in base_names), chart.truncation, chart.label)
        fibre = tuple(c for c in chart.coords if c.name not in set(base_names))
        fnames = [c.name for c in fibre]
        if max_order is None:
            max_order = _max_fibre_degree(Q, fnames)
        comps: Dict[str, Dict[Key, GradedElem]] = {}
        for T, QT in Q.components.items():
            table = {}
            layer = {(): QT}
            for n in range(0, max_order + 1):
                nxt = {}
                for key, elem in layer.items():
                    val = elem.restrict(fnames, base)
                    if not val.is_zero():
                        table[key] = val
                    if n < max_order:
                        for a in fnames:
                            d = elem.left_partial(a)
                            if not d.is_zero():
                                nxt[(a,) + key] = d
                layer = nxt
            comps[T] = table
        data = cls(base, fibre, comps, chart.truncation)
        if data.field() != Q.rechart(data.chart):
            raise ConstructionMismatch("structure functions do not reassemble the field")
        return data

    def max_order(self) -> int:
        return max((len(k) for t in self.components.values() for k in t), default=0)


def _max_fibre_degree(Q: VectorField, fibre_names) -> int:
    chart = Q.chart
    fset = set(fibre_names)
    best = 0
    for comp in Q.components.values():
        for e, s in comp.terms:
            deg = 0
            for i, k in enumerate(e):
                if chart.coords[chart.even_positions[i]].name in fset:
                    deg += k
            for j in s:
                if chart.coords[chart.odd_positions[j]].name in fset:
                    deg += 1
            best = max(best, deg)
    return best


def lie_algebroid_data(base: Chart, fibre: Sequence[Coord], anchor_map=None, structure=None,
                       truncation=None) -> AlgebroidData:
    """Lie algebroid data from Q_alpha^a and Q_{beta alpha}^gamma.

    ``anchor_map[(alpha, a)] = Q_alpha^a`` and
    ``structure[(beta, alpha, gamma)] = Q_{beta alpha}^gamma``; the opposite
    ordering of (beta, alpha) is filled in by graded symmetry.
    """
    comps: Dict[str, Dict[Key, GradedElem]] = {}
    for (alpha, a), f in (anchor_map or {}).items():
        comps.setdefault(a, {})[(alpha,)] = f
    for (beta, alpha, gamma), f in (structure or {}).items():
        comps.setdefault(gamma, {})[(beta, alpha)] = f
    return AlgebroidData.build(base, fibre, comps, truncation)


POINT = Chart((), 8, "pt")


def lie_algebra(structure_constants: Mapping[Tuple[int, int], Mapping[int, Fraction]], dim: int,
                prefix: str = "xi") -> AlgebroidData:
    """Chevalley-Eilenberg data of [e_i, e_j] = c^k_{ij} e_k (indices from 1).

    The convention Q_{ji}^k = c^k_{ij} gives Q = sum_{i<j} c^k_{ij} xi^i xi^j d/dxi^k,
    whose local representative is -tr(ad e_i) xi^i.
    """
    fibre = tuple(Coord(f"{prefix}{i}", ODD) for i in range(1, dim + 1))
    structure = {}
    for (i, j), row in structure_constants.items():
        for k, c in row.items():
            structure[(f"{prefix}{j}", f"{prefix}{i}", f"{prefix}{k}")] = POINT.const(c)
    return lie_algebroid_data(POINT, fibre, structure=structure)


def lie_algebroid(data: AlgebroidData) -> VectorField:
    """Assemble d_A; the algebroid axioms are exactly is_homological(d_A)."""
    Q = data.field()
    if not is_homological(Q):
        raise AlgebroidAxiomError("structure functions violate the algebroid axioms (Q^2 != 0)")
    if _is_lie_shaped(data) and local_rep(Q) != lie_algebroid_formula(data):
        raise ConstructionMismatch("local representative disagrees with the Lie algebroid formula")
    return Q


def _is_lie_shaped(data: AlgebroidData) -> bool:
    fset = set(data.fibre_names)
    for T, table in data.components.items():
        want = 2 if T in fset else 1
        if any(len(k) != want for k in table):
            return False
    return True


def lie_algebroid_formula(data: AlgebroidData) -> GradedElem:
    """xi^alpha ((-1)^{a |xi^alpha|} d_a Q_alpha^a + Q^beta_{alpha beta})."""
    chart = data.chart
    out = chart.zero()
    for alpha in data.fibre_names:
        pa = data.parity_of(alpha)
        coeff = chart.zero()
        for b in data.base.names:
            comp = data.components.get(b, {}).get((alpha,))
            if comp is not None:
                t = comp.left_partial(b).rechart(chart)
                coeff = coeff - t if (pa and data.parity_of(b)) else coeff + t
        for beta in data.fibre_names:
            comp = data.components.get(beta, {}).get((alpha, beta))
            if comp is not None:
                coeff = coeff + comp.rechart(chart)
        out = out + chart.var(alpha) * coeff
    return out


def l_infinity_formula(data: AlgebroidData) -> GradedElem:
    """The L-infinity representative written in structure functions.

    sum_n (-1)^eps / n! xi^{a_1}..xi^{a_n} d_a Q^a_{a_n..a_1}
      + sum_{n>=1} 1/(n-1)! xi^{a_1}..xi^{a_{n-1}} Q^beta_{a_{n-1}..a_1 beta}

    with eps = |a| (|xi^{a_1}| + ... + |xi^{a_n}|).
    """
    chart = data.chart
    fset = set(data.fibre_names)
    out = chart.zero()
    for T, table in data.components.items():
        for key, val in table.items():
            if T not in fset:
                eps = data.parity_of(T) * sum(data.parity_of(k) for k in key)
                mono = chart.one()
                for a in reversed(key):
                    mono = mono * chart.var(a)
                term = (mono * val.left_partial(T).rechart(chart)).scale(Fraction(1, factorial(len(key))))
                out = out - term if eps % 2 else out + term
            elif key and key[-1] == T:
                mono = chart.one()
                for a in reversed(key[:-1]):
                    mono = mono * chart.var(a)
                out = out + (mono * val.rechart(chart)).scale(Fraction(1, factorial(len(key) - 1)))
    return out


def l_infinity_local_rep(data: AlgebroidData) -> GradedElem:
    Q = data.field()
    if not is_homological(Q):
        raise AlgebroidAxiomError("structure functions violate the algebroid axioms (Q^2 != 0)")
    rep = local_rep(Q)
    if rep != l_infinity_formula(data):
        raise ConstructionMismatch("local representative disagrees with the L-infinity formula")
    return rep


# Nijenhuis structures ------------------------------------------------------


def nijenhuis_field(N: Sequence[Sequence[GradedElem]], base: Chart, validate: bool = True) -> VectorField:
    """Q = dx^b N_b^a d_a + 1/2 dx^a dx^b (d_b N_a^c - d_a N_b^c) d/d(dx^c).

    ``N[b][a]`` holds N_b^a; the base must be purely even.
    """
    if base.n_odd:
        raise GradedError("Nijenhuis fields are built over purely even bases")
    names = base.names
    n = len(names)
    if len(N) != n or any(len(row) != n for row in N):
        raise GradedError("N must be a square matrix matching the base dimension")
    T = antitangent(base)
    Nl = [[N[b][a].rechart(T) for a in range(n)] for b in range(n)]
    dx = [T.var(T.fibre(x)) for x in names]
    comps = {}
    for a, xa in enumerate(names):
        acc = T.zero()
        for b in range(n):
            acc = acc + dx[b] * Nl[b][a]
        comps[xa] = acc
    for c in range(n):
        acc = T.zero()
        for a in range(n):
            for b in range(n):
                inner = Nl[a][c].left_partial(names[b]) - Nl[b][c].left_partial(names[a])
                if inner:
                    acc = acc + dx[a] * dx[b] * inner
        comps[T.fibre(names[c])] = acc.scale(Fraction(1, 2))
    Q = VectorField(T, comps, ODD)
    if validate and not is_homological(Q):
        raise NotNijenhuis("the (1,1)-tensor is not Nijenhuis: Q^2 != 0")
    return Q


def trace_differential(N: Sequence[Sequence[GradedElem]], base: Chart) -> GradedElem:
    """d tr(N) = dx^a d_a N_b^b on the antitangent chart."""
    T = antitangent(base)
    tr = base.zero()
    for i in range(len(N)):
        tr = tr + N[i][i]
    return apply(de_rham(base), tr.rechart(T))


# Q-algebroids ---------------------------------------------------------------


def q_algebroid_sum(d_A: VectorField, Xi: VectorField) -> VectorField:
    """d_A + Xi for a commuting pair of homological fields."""
    _require_homological(d_A, "d_A")
    _require_homological(Xi, "Xi")
    if not bracket(d_A, Xi).is_zero():
        raise NotCommuting("[d_A, Xi] != 0")
    return d_A + Xi


def q_algebroid_formula(d_A: VectorField, Xi: VectorField, base_names: Sequence[str]) -> GradedElem:
    """(d_a Q^a + Q_alpha^alpha) + xi^alpha ((-1)^{a |xi^alpha|} d_a Q_alpha^a + Q^beta_{alpha beta}).

    Q^a and Q_alpha^gamma are read from the weight-zero field Xi, the rest from
    d_A.  The identity with local_rep(d_A + Xi) is purely algebraic and holds
    whether or not the pair is homological.
    """
    chart = d_A.chart
    fnames = [n for n in chart.names if n not in set(base_names)]
    base = Chart(tuple(chart.coord(n) for n in base_names), chart.truncation)
    out = chart.zero()
    for a in base_names:
        out = out + Xi[a].restrict(fnames, base).left_partial(a).rechart(chart)
    for g in fnames:
        out = out + Xi[g].left_partial(g).restrict(fnames, base).rechart(chart)
    data = AlgebroidData.from_field(d_A, base_names, 2)
    return out + lie_algebroid_formula(data).rechart(chart)


# double Lie algebroids ------------------------------------------------------


@dataclass(frozen=True)
class DoubleStructure:
    """Commuting homological fields of bi-weight (0,1) and (1,0) on Pi^2 D.

    Coordinate roles: ``base`` (0,0), ``xi`` (0,1), ``theta`` (1,0), ``z`` (1,1).
    """

    chart: Chart
    Q01: VectorField
    Q10: VectorField
    base: Tuple[str, ...]
    xi: Tuple[str, ...]
    theta: Tuple[str, ...]
    z: Tuple[str, ...]
    validate: bool = field(default=True, compare=False)

    def __post_init__(self):
        if self.Q01.chart != self.chart or self.Q10.chart != self.chart:
            raise ChartMismatch("double structure fields live on another chart")
        if self.validate:
            _require_homological(self.Q01, "Q_(0,1)")
            _require_homological(self.Q10, "Q_(1,0)")
            if not bracket(self.Q01, self.Q10).is_zero():
                raise NotCommuting("Q_(0,1) and Q_(1,0) do not commute")
            _check_biweight(self.Q01, self._weights(), (0, 1))
            _check_biweight(self.Q10, self._weights(), (1, 0))

    def _weights(self) -> Dict[str, Tuple[int, int]]:
        w = {}
        for names, wt in ((self.base, (0, 0)), (self.xi, (0, 1)), (self.theta, (1, 0)), (self.z, (1, 1))):
            for n in names:
                w[n] = wt
        return w

    @property
    def total(self) -> VectorField:
        return self.Q01 + self.Q10


def _check_biweight(Q: VectorField, weights, shift):
    chart = Q.chart
    for name, comp in Q.components.items():
        want = (weights[name][0] + shift[0], weights[name][1] + shift[1])
        for e, s in comp.terms:
            w0 = w1 = 0
            for i, k in enumerate(e):
                c = chart.coords[chart.even_positions[i]].name
                w0 += k * weights[c][0]
                w1 += k * weights[c][1]
            for j in s:
                c = chart.coords[chart.odd_positions[j]].name
                w0 += weights[c][0]
                w1 += weights[c][1]
            if (w0, w1) != want:
                raise GradedError(f"component {name!r} has a term of bi-weight {(w0, w1)}, expected {want}")


def _weighted_chart(data: AlgebroidData) -> Chart:
    coords = tuple(Coord(c.name, c.parity, (0, 0)) for c in data.base.coords)
    coords += tuple(Coord(c.name, c.parity, (0, 1)) for c in data.fibre)
    return Chart(coords, data.chart.truncation, data.base.label)


def lie_derivative_of_algebroid_closed_form(data: AlgebroidData, chart: Chart) -> VectorField:
    """Coordinate form of L_{d_A} on Pi T Pi A for Lie algebroid data."""
    comps: Dict[str, GradedElem] = {}
    xi = data.fibre_names
    par = data.parity_of
    v = chart.var

    def lift(f):
        return f.rechart(chart)

    def dx_of(f):
        acc = chart.zero()
        for b in data.base.names:
            acc = acc + v(chart.fibre(b)) * lift(f.left_partial(b))
        return acc

    d_A = data.field()
    for T, comp in d_A.components.items():
        comps[T] = lift(comp)
    for a in data.base.names:
        acc = chart.zero()
        for (alpha,), Qa in data.components.get(a, {}).items():
            # (-1)^{alpha~} with alpha~ the parity of A's fibre coordinate
            t = v(alpha) * dx_of(Qa)
            acc = acc + (t if par(alpha) else -t)
            acc = acc - v(chart.fibre(alpha)) * lift(Qa)
        comps[chart.fibre(a)] = acc
    for g in xi:
        acc = chart.zero()
        for (beta, alpha), Q in data.components.get(g, {}).items():
            acc = acc - v(chart.fibre(alpha)) * v(beta) * lift(Q)
            t = (v(alpha) * v(beta) * dx_of(Q)).scale(Fraction(1, 2))
            acc = acc - t if (par(alpha) + par(beta)) % 2 == 0 else acc + t
        comps[chart.fibre(g)] = acc
    return VectorField(chart, comps, ODD)


def double_from_algebroid(data: AlgebroidData) -> DoubleStructure:
    """(Pi T Pi A, L_{d_A}, d) with coordinates (x, xi, dx, dxi)."""
    if not _is_lie_shaped(data):
        raise GradedError("double_from_algebroid needs Lie algebroid (not L-infinity) data")
    lie_algebroid(data)
    wchart = _weighted_chart(data)
    d_A = VectorField(wchart, {n: GradedElem(wchart, c.terms) for n, c in data.field().components.items()},
                      ODD)
    Q10 = de_rham(wchart)
    Q01 = lie_derivative_lift(d_A)
    T = Q10.chart
    if Q01 != lie_derivative_of_algebroid_closed_form(data, T):
        raise ConstructionMismatch("L_{d_A} disagrees with its coordinate form")
    base = data.base.names
    xi = data.fibre_names
    return DoubleStructure(T, Q01, Q10, base, xi,
                           tuple(T.fibre(b) for b in base), tuple(T.fibre(a) for a in xi))


def double_modular_rep(D: DoubleStructure) -> GradedElem:
    return local_rep(D.total)


def double_formula(D: DoubleStructure) -> GradedElem:
    """xi^alpha (...) + theta^i (...) from the structure functions of Q01, Q10."""
    chart = D.chart
    fibres = list(D.xi) + list(D.theta) + list(D.z)
    base = Chart(tuple(chart.coord(n) for n in D.base), chart.truncation)
    par = chart.parity

    def at0(f):
        return f.restrict(fibres, base)

    def part(Q, lead, same, others):
        out = chart.zero()
        for al in lead:
            coeff = base.zero()
            for a in D.base:
                t = at0(Q[a].left_partial(al)).left_partial(a)
                coeff = coeff - t if (par(a) and par(al)) else coeff + t
            for be in same:
                coeff = coeff + at0(Q[be].left_partial(be).left_partial(al))
            for group in others:
                for i in group:
                    coeff = coeff + at0(Q[i].left_partial(i).left_partial(al))
            out = out + chart.var(al) * coeff.rechart(chart)
        return out

    return (part(D.Q01, D.xi, D.xi, (D.theta, D.z)) +
            part(D.Q10, D.theta, D.theta, (D.xi, D.z)))
