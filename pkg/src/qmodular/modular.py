"""Modular classes: local representatives, closedness and exactness.

Cohomology questions are answered pointwise.  `solve_exactness` sets up the
linear system Q(g) = f over a monomial basis; on purely odd charts the
function space is finite-dimensional and a negative answer is a proof.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Union

from .algebra import ODD, Chart, ChartMismatch, GradedElem, GradedError
from .berezin import BerezinVolume, coordinate_divergence, divergence
from .geometry import ChartMorphism, VectorField, apply, is_homological, is_q_morphism
from .linsolve import solve_columns
from .render import render_elem


class NotHomological(GradedError):
    pass


class NotClosed(GradedError):
    pass


class NotQMorphism(GradedError):
    pass


class NotTangent(GradedError):
    pass


@dataclass(frozen=True)
class Exact:
    witness: GradedElem
    bound: int

    is_exact = True
    complete = True

    def to_record(self) -> dict:
        return {"status": "exact", "witness": render_elem(self.witness),
                "bound": self.bound, "complete": True}


@dataclass(frozen=True)
class NoWitnessUpToDegree:
    bound: int
    complete: bool

    is_exact = False

    def to_record(self) -> dict:
        return {"status": "no_witness", "witness": None, "bound": self.bound,
                "complete": self.complete}


ExactnessVerdict = Union[Exact, NoWitnessUpToDegree]


def _require_homological(Q: VectorField):
    if not is_homological(Q):
        raise NotHomological("vector field is not homological")


def local_rep(Q: VectorField) -> GradedElem:
    """phi_Q = sum_a d_a Q^a, the divergence of Q for the coordinate volume."""
    _require_homological(Q)
    return coordinate_divergence(Q)


def modular_rep(Q: VectorField, rho: Optional[BerezinVolume] = None) -> GradedElem:
    """Div_rho Q, a Q-closed representative of the modular class."""
    _require_homological(Q)
    rep = divergence(Q, rho)
    assert apply(Q, rep).is_zero(), "divergence of a homological field must be Q-closed"
    return rep


def is_closed(f: GradedElem, Q: VectorField) -> bool:
    if f.chart != Q.chart:
        raise ChartMismatch("element and field live on different charts")
    return apply(Q, f).is_zero()


def monomial_basis(chart: Chart, parity: int, max_even_degree: int) -> List[GradedElem]:
    """All monomials of the given parity with even degree <= max_even_degree."""
    bound = min(max_even_degree, chart.truncation)
    out = []
    ne, no = chart.n_even, chart.n_odd
    exps_by_degree = []
    for total in range(bound + 1):
        for combo in itertools.combinations_with_replacement(range(ne), total):
            e = [0] * ne
            for i in combo:
                e[i] += 1
            exps_by_degree.append(tuple(e))
        if ne == 0:
            break
    for k in range(parity, no + 1, 2):
        for subset in itertools.combinations(range(no), k):
            for e in exps_by_degree:
                out.append(GradedElem(chart, {(e, subset): 1}))
    return out


def solve_exactness(f: GradedElem, Q: VectorField, degree_bound: int) -> ExactnessVerdict:
    """Decide whether f = Q(g) for some g of even degree <= degree_bound."""
    if f.chart != Q.chart:
        raise ChartMismatch("element and field live on different charts")
    if not f.is_homogeneous():
        raise GradedError("exactness is decided for homogeneous elements")
    if not is_closed(f, Q):
        raise NotClosed("element is not Q-closed, so it cannot be Q-exact")
    chart = f.chart
    complete = chart.n_even == 0
    if f.is_zero():
        return Exact(chart.zero(), degree_bound)
    if Q.is_zero():
        return NoWitnessUpToDegree(degree_bound, complete)
    if Q.parity != ODD:
        raise GradedError("exactness is defined for odd fields")
    basis = monomial_basis(chart, (f.parity + 1) % 2, degree_bound)
    images = [apply(Q, m).terms for m in basis]
    sol = solve_columns(images, f.terms)
    if sol is None:
        return NoWitnessUpToDegree(degree_bound, complete)
    witness = chart.zero()
    for c, m in zip(sol, basis):
        if c:
            witness = witness + m.scale(c)
    assert apply(Q, witness) == f
    return Exact(witness, degree_bound)


def classes_equal(f1: GradedElem, f2: GradedElem, Q: VectorField, bound: int) -> ExactnessVerdict:
    """Is f1 - f2 Q-exact?  The witness g satisfies Q(g) = f1 - f2."""
    return solve_exactness(f1 - f2, Q, bound)


def relative_rep(psi: ChartMorphism, Q1: VectorField, Q2: VectorField,
                 rho1: Optional[BerezinVolume] = None,
                 rho2: Optional[BerezinVolume] = None) -> GradedElem:
    """Div_rho1 Q1 - psi^*(Div_rho2 Q2), representing Mod(Q1) - psi^* Mod(Q2)."""
    if not is_q_morphism(psi, Q1, Q2):
        raise NotQMorphism("morphism does not relate the two homological fields")
    rep = modular_rep(Q1, rho1) - psi.pullback(modular_rep(Q2, rho2))
    assert apply(Q1, rep).is_zero()
    return rep


# sub-supermanifolds -----------------------------------------------------------


def sub_chart(chart: Chart, keep: Sequence[str]) -> Chart:
    keep = list(keep)
    return Chart(tuple(chart.coord(n) for n in keep), chart.truncation, chart.label)


def inclusion_morphism(ambient: Chart, sub: Chart, normal: Iterable[str]) -> ChartMorphism:
    """j: N -> M with j^*(x) = x and j^*(y) = 0 for the normal coordinates y."""
    normal = set(normal)
    images = {}
    for c in ambient.coords:
        images[c.name] = sub.zero() if c.name in normal else sub.var(c.name)
    return ChartMorphism(sub, ambient, images)


def restrict_field(Q: VectorField, sub: Chart, normal: Sequence[str]) -> VectorField:
    """Q_N^a(x) = Q^a(x, 0) on the sub-chart."""
    comps = {x: Q[x].restrict(normal, sub) for x in sub.names}
    return VectorField(sub, comps, Q.parity)


def _split(Q: VectorField, boundary_coords, interior_coords):
    chart = Q.chart
    boundary = list(boundary_coords)
    normal = list(interior_coords)
    if sorted(boundary + normal) != sorted(chart.names) or set(boundary) & set(normal):
        raise GradedError("coordinates must split the chart into tangent and normal parts")
    sub = sub_chart(chart, [n for n in chart.names if n in set(boundary)])
    for y in normal:
        if not Q[y].restrict(normal, sub).is_zero():
            raise NotTangent(f"Q^{y} does not vanish on the sub-supermanifold")
    return sub, normal


def inclusion_field(Q_M: VectorField, boundary_coords, interior_coords):
    """The sub-chart, the restricted field Q_N and the inclusion morphism."""
    sub, normal = _split(Q_M, boundary_coords, interior_coords)
    Q_N = restrict_field(Q_M, sub, normal)
    if not is_homological(Q_N):
        raise NotHomological("restricted field is not homological")
    return sub, Q_N, inclusion_morphism(Q_M.chart, sub, normal)


def inclusion_rep(Q_M: VectorField, boundary_coords, interior_coords) -> GradedElem:
    """phi_j = - sum_y (d Q^y / d y)|_{y=0} over the normal coordinates y."""
    _require_homological(Q_M)
    sub, normal = _split(Q_M, boundary_coords, interior_coords)
    Q_N = restrict_field(Q_M, sub, normal)
    if not is_homological(Q_N):
        raise NotHomological("restricted field is not homological")
    out = sub.zero()
    for y in normal:
        out = out - Q_M[y].left_partial(y).restrict(normal, sub)
    return out


@dataclass(frozen=True)
class OddMatrix:
    """Square matrix A[beta][alpha] of entries with parity |alpha| + |beta| + 1.

    Rows are indexed by the normal coordinates y^beta, columns by y^alpha.
    """

    chart: Chart
    row_parities: tuple
    col_parities: tuple
    entries: tuple

    def __post_init__(self):
        n = len(self.entries)
        if any(len(r) != len(self.col_parities) for r in self.entries) or n != len(self.row_parities):
            raise GradedError("odd matrix shape does not match its parities")
        for b, row in enumerate(self.entries):
            for a, e in enumerate(row):
                if not e.has_parity((self.row_parities[b] + self.col_parities[a] + 1) % 2):
                    raise GradedError("odd matrix entry has the wrong parity")

    @property
    def is_square(self):
        return len(self.row_parities) == len(self.col_parities)


def linear_normal_part(Q_M: VectorField, boundary_coords, interior_coords) -> OddMatrix:
    """A_beta^alpha(x) = (d Q^alpha / d y^beta)|_{y=0}."""
    sub, normal = _split(Q_M, boundary_coords, interior_coords)
    chart = Q_M.chart
    par = tuple(chart.parity(y) for y in normal)
    entries = tuple(tuple(Q_M[ya].left_partial(yb).restrict(normal, sub) for ya in normal)
                    for yb in normal)
    return OddMatrix(sub, par, par, entries)


def supertrace_odd(A: OddMatrix) -> GradedElem:
    """Plain diagonal sum; normalised so that phi_j = -supertrace_odd(A)."""
    if not A.is_square:
        raise GradedError("supertrace needs a square matrix")
    out = A.chart.zero()
    for i in range(len(A.entries)):
        out = out + A.entries[i][i]
    return out
