"""Random elements and a zoo of homological vector fields for experiments and tests."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .algebra import EVEN, ODD, Chart, Coord, GradedElem
from .berezin import BerezinVolume
from .brackets import hamiltonian_vf_odd, linear_poisson
from .constructions import (AlgebroidData, anticotangent_lift, cotangent_lift, de_rham,
                            lie_algebra, lie_algebroid, lie_algebroid_data, lie_derivative_lift,
                            nijenhuis_field)
from .geometry import VectorField


def random_coefficient(rng: random.Random, lo: int = -3, hi: int = 3) -> Fraction:
    num = 0
    while num == 0:
        num = rng.randint(lo, hi)
    return Fraction(num, rng.choice([1, 1, 1, 2, 3]))


def random_monomial(chart: Chart, rng: random.Random, parity: Optional[int], max_degree: int):
    ne, no = chart.n_even, chart.n_odd
    for _ in range(100):
        e = [0] * ne
        for _ in range(rng.randint(0, max_degree) if ne else 0):
            e[rng.randrange(ne)] += 1
        s = tuple(sorted(rng.sample(range(no), rng.randint(0, no)))) if no else ()
        if parity is None or len(s) % 2 == parity:
            return tuple(e), s
    return None


def random_elem(chart: Chart, rng: random.Random, parity: Optional[int] = None, max_degree: int = 2,
                n_terms: int = 3) -> GradedElem:
    """A sparse random element; even degree at most `max_degree`."""
    terms: Dict = {}
    for _ in range(rng.randint(0, n_terms)):
        mono = random_monomial(chart, rng, parity, max_degree)
        if mono is not None:
            terms[mono] = terms.get(mono, 0) + random_coefficient(rng)
    return GradedElem(chart, terms)


def random_field(chart: Chart, rng: random.Random, parity: int, max_degree: int = 2,
                 n_terms: int = 2) -> VectorField:
    comps = {c.name: random_elem(chart, rng, (parity + c.parity) % 2, max_degree, n_terms)
             for c in chart.coords}
    return VectorField(chart, comps, parity)


def random_volume(chart: Chart, rng: random.Random, max_degree: int = 2) -> BerezinVolume:
    g = random_elem(chart, rng, EVEN, max_degree, 3)
    g = g - chart.const(g.constant_term())
    return BerezinVolume(chart, Fraction(rng.randint(1, 4), rng.randint(1, 3)), g)


def random_chart(rng: random.Random, max_even: int = 3, max_odd: int = 3, truncation: int = 6) -> Chart:
    ne = rng.randint(0, max_even)
    no = rng.randint(0 if ne else 1, max_odd)
    coords = [Coord(f"x{i + 1}", EVEN) for i in range(ne)] + [Coord(f"t{i + 1}", ODD) for i in range(no)]
    rng.shuffle(coords)
    return Chart(tuple(coords), truncation)


# homological zoo ----------------------------------------------------------

R1 = Chart.from_spec([("x", EVEN)], 8)
R2 = Chart.from_spec([("x1", EVEN), ("x2", EVEN)], 8)
R11 = Chart.from_spec([("x", EVEN), ("t", ODD)], 8)
R03 = Chart.from_spec([("t1", ODD), ("t2", ODD), ("t3", ODD)], 4)


def nonabelian_2d() -> AlgebroidData:
    return lie_algebra({(1, 2): {2: 1}}, 2)


def heisenberg() -> AlgebroidData:
    return lie_algebra({(1, 2): {3: 1}}, 3)


def sl2() -> AlgebroidData:
    # [h, e] = 2e, [h, f] = -2f, [e, f] = h with (e1, e2, e3) = (h, e, f)
    return lie_algebra({(1, 2): {2: 2}, (1, 3): {3: -2}, (2, 3): {1: 1}}, 3)


def abelian(dim: int = 2) -> AlgebroidData:
    return lie_algebra({}, dim)


def rank_two_algebroid(r2: GradedElem, k2: GradedElem) -> AlgebroidData:
    """Rank-2 Lie algebroid over R: anchor (1, r2), [e1, e2] = k1 e1 + k2 e2, k1 = -r2' - k2 r2."""
    base = r2.chart
    x = base.names[0]
    k1 = -r2.left_partial(x) - k2 * r2
    fibre = (Coord("xi1", ODD), Coord("xi2", ODD))
    return lie_algebroid_data(base, fibre, {("xi1", x): base.one(), ("xi2", x): r2},
                              {("xi2", "xi1", "xi1"): k1, ("xi2", "xi1", "xi2"): k2})


def odd_l_infinity(f: GradedElem, h: GradedElem) -> VectorField:
    """Q = xi (f d/dx + h d/deta) on (x, eta | xi); homological for any f, h."""
    chart = Chart.from_spec([("x", EVEN), ("eta", EVEN), ("xi", ODD)], f.chart.truncation)
    xi = chart.var("xi")
    return VectorField(chart, {"x": xi * f.rechart(chart), "eta": xi * h.rechart(chart)}, ODD)


def exact_rep_field() -> VectorField:
    """d/dt1 + t2 t3 d/dt2: local representative t3 = Q(t1 t3) is nonzero but exact."""
    t1, t2, t3 = R03.vars()
    return VectorField(R03, {"t1": R03.one(), "t2": t2 * t3}, ODD)


def homological_zoo() -> List[Tuple[str, VectorField]]:
    """Named homological fields spanning every construction in the package."""
    x = R1.var("x")
    x1, x2 = R2.vars()
    out: List[Tuple[str, VectorField]] = []
    out.append(("de_rham(R1)", de_rham(R1)))
    out.append(("de_rham(R11)", de_rham(R11)))
    out.append(("de_rham(R2)", de_rham(R2)))
    out.append(("nonabelian_2d", lie_algebroid(nonabelian_2d())))
    out.append(("heisenberg", lie_algebroid(heisenberg())))
    out.append(("sl2", lie_algebroid(sl2())))
    out.append(("rank_two_algebroid", lie_algebroid(rank_two_algebroid(1 + x * x, 2 - x))))
    out.append(("drift_R11", VectorField(R11, {"x": R11.var("t")}, ODD)))
    out.append(("exact_rep_R03", exact_rep_field()))
    Lf = Chart.from_spec([("x", EVEN), ("eta", EVEN)], 8)
    xe, eta = Lf.vars()
    out.append(("odd_l_infinity", odd_l_infinity(1 + xe * eta, eta * eta - xe)))
    out.append(("nijenhuis_fId", nijenhuis_field([[1 + x * x]], R1)))
    out.append(("nijenhuis_x1Id", nijenhuis_field([[x1, R2.zero()], [R2.zero(), x1]], R2)))
    out.append(("nijenhuis_diag", nijenhuis_field([[x1 * x1, R2.zero()], [R2.zero(), 1 + x2]], R2)))
    Qna = lie_algebroid(nonabelian_2d())
    out.append(("lie_lift(nonabelian_2d)", lie_derivative_lift(Qna)))
    Qd = VectorField(R11, {"x": R11.var("t")}, ODD)
    L = lie_derivative_lift(Qd)
    out.append(("d+L(drift_R11)", de_rham(R11) + L))
    out.append(("cotangent_lift(nonabelian_2d)", cotangent_lift(Qna)))
    out.append(("anticotangent_lift(nonabelian_2d)", anticotangent_lift(Qna)))
    _, P = linear_poisson({(1, 2): {2: 1}}, 2, truncation=6)
    out.append(("higher_poisson(aff1)", hamiltonian_vf_odd(P)))
    return out
