from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given

from conftest import rng_for, seeds
from qmodular.algebra import EVEN, ODD, Chart, Coord
from qmodular.berezin import coordinate_divergence
from qmodular.brackets import hamiltonian_vf_odd
from qmodular.charts import anticotangent, antitangent, star_name
from qmodular.constructions import (AlgebroidAxiomError, AlgebroidData, NotCommuting, NotNijenhuis,
                                    anticotangent_lift, cotangent_lift, de_rham,
                                    double_formula, double_from_algebroid, double_modular_rep,
                                    interior, l_infinity_formula, l_infinity_local_rep,
                                    lie_algebra, lie_algebroid, lie_algebroid_data,
                                    lie_algebroid_formula, lie_derivative_lift, lift_to_product,
                                    mqk_conjugate, nijenhuis_field, product, q_algebroid_formula,
                                    q_algebroid_sum, trace_differential)
from qmodular.geometry import VectorField, apply, bracket, is_homological
from qmodular.modular import local_rep, monomial_basis
from qmodular.zoo import (R1, R2, R11, exact_rep_field, heisenberg, homological_zoo, nonabelian_2d,
                          odd_l_infinity, random_chart, random_elem, random_field, sl2)

ZOO = homological_zoo()


def _sign(k):
    return -1 if k % 2 else 1


@given(seeds)
def test_de_rham_squares_to_zero(seed):
    rng = rng_for(seed)
    base = random_chart(rng, 2, 2, 6)
    d = de_rham(base)
    T = d.chart
    f = random_elem(T, rng, None, 2, 3)
    assert apply(d, apply(d, f)).is_zero()
    assert local_rep(d).is_zero()
    for n in base.names:
        assert apply(d, T.var(n)) == T.var("d" + n)


@given(seeds)
def test_cartan_calculus(seed):
    rng = rng_for(seed)
    base = random_chart(rng, 2, 2, 6)
    p, q = rng.randint(0, 1), rng.randint(0, 1)
    X = random_field(base, rng, p)
    Y = random_field(base, rng, q)
    LX, LY = lie_derivative_lift(X), lie_derivative_lift(Y)
    iY = interior(Y)
    assert bracket(interior(X), iY).is_zero()
    # the sign comes from i_X = (-1)^{|X|} X^a d/d(dx^a)
    assert bracket(LX, iY) == interior(bracket(X, Y)).scale(_sign(p))
    assert bracket(LX, LY) == lie_derivative_lift(bracket(X, Y))
    assert bracket(de_rham(base), LX).is_zero()


def test_lifts_are_homological_and_unimodular():
    for name, Q in ZOO:
        L = lie_derivative_lift(Q)
        for W in (L, de_rham(Q.chart) + L, cotangent_lift(Q)):
            assert is_homological(W), name
            assert local_rep(W).is_zero(), name


def test_anticotangent_lift_doubles():
    for name, Q in ZOO:
        L = anticotangent_lift(Q)
        assert local_rep(L) == local_rep(Q).rechart(L.chart).scale(2), name


def _total_degree(m):
    (e, s), = m.terms
    return sum(e) + len(s)


def test_mqk_on_all_low_monomials():
    fields = [lie_algebroid(nonabelian_2d()), exact_rep_field(), VectorField(R11, {"x": R11.var("t")}, ODD)]
    for Q in fields:
        T = antitangent(Q.chart)
        D = de_rham(Q.chart) + lie_derivative_lift(Q)
        monos = [m for p in (EVEN, ODD) for m in monomial_basis(T, p, 4) if _total_degree(m) <= 4]
        assert monos
        for m in monos:
            assert mqk_conjugate(Q, m) == apply(D, m)


def test_product_is_additive():
    pool = [Q for _, Q in homological_zoo()[:9]]
    for Q1 in pool[:4]:
        for Q2 in pool[3:7]:
            P, Q, renames = product(Q1.chart, Q1, Q2.chart, Q2)
            want = lift_to_product(local_rep(Q1), P) + lift_to_product(local_rep(Q2), P, renames)
            assert local_rep(Q) == want


def _trace_ad(constants, dim):
    return [sum(Fraction(constants.get((i, j), {}).get(j, 0)) - Fraction(constants.get((j, i), {}).get(j, 0))
                for j in range(1, dim + 1)) for i in range(1, dim + 1)]


@pytest.mark.parametrize("constants,dim", [
    ({(1, 2): {2: 1}}, 2),
    ({(1, 2): {3: 1}}, 3),
    ({(1, 2): {2: 2}, (1, 3): {3: -2}, (2, 3): {1: 1}}, 3),
    ({(1, 2): {3: 1}, (1, 3): {2: -1}, (2, 3): {1: 1}}, 3),
    ({(1, 2): {2: 1}, (1, 3): {3: Fraction(5, 2)}}, 3),
    ({(1, 2): {2: 1, 3: 1}, (1, 3): {3: 1}}, 3),
])
def test_lie_algebra_rep_is_minus_trace_of_ad(constants, dim):
    data = lie_algebra(constants, dim)
    Q = lie_algebroid(data)
    c = Q.chart
    want = c.zero()
    for i, tr in enumerate(_trace_ad(constants, dim), 1):
        want = want - c.var(f"xi{i}").scale(tr)
    assert local_rep(Q) == want


def test_algebroid_axioms_are_enforced():
    with pytest.raises(AlgebroidAxiomError):
        lie_algebroid(lie_algebra({(1, 2): {3: 1}, (2, 3): {2: 1}, (1, 3): {1: 1}}, 3))


@given(seeds)
def test_l_infinity_formula_on_generic_fields(seed):
    rng = rng_for(seed)
    c = Chart.from_spec([("x", EVEN), ("eta", EVEN), ("xi", ODD)], 8)
    Q = random_field(c, rng, ODD, 2, 3)
    data = AlgebroidData.from_field(Q, ["x"])
    assert data.field() == Q
    assert l_infinity_formula(data) == coordinate_divergence(Q)
    f = random_elem(c, rng, EVEN, 2, 3).restrict(["xi"], Chart.from_spec([("x", EVEN), ("eta", EVEN)], 8))
    h = random_elem(c, rng, EVEN, 2, 3).restrict(["xi"], f.chart)
    Qh = odd_l_infinity(f, h)
    assert is_homological(Qh)
    assert l_infinity_local_rep(AlgebroidData.from_field(Qh, ["x"])) == local_rep(Qh)


@given(seeds)
def test_lie_algebroid_formula_rank_two(seed):
    rng = rng_for(seed)
    x = R1.var("x")
    from qmodular.zoo import rank_two_algebroid
    r2 = random_elem(R1, rng, EVEN, 2, 3)
    k2 = random_elem(R1, rng, EVEN, 2, 3)
    data = rank_two_algebroid(r2, k2)
    Q = lie_algebroid(data)
    assert local_rep(Q) == lie_algebroid_formula(data)
    assert x.chart == R1


@given(seeds)
def test_q_algebroid_formula_on_generic_pairs(seed):
    rng = rng_for(seed)
    base = Chart.from_spec([("x", EVEN), ("t", ODD)], 6)
    c = Chart(base.coords + (Coord("xi1", ODD), Coord("xi2", ODD)), 6)
    xi = [c.var("xi1"), c.var("xi2")]

    def on_base(p):
        return random_elem(base, rng, p, 2, 2).rechart(c)

    d_A = VectorField(c, {
        "x": sum((a * on_base(EVEN) for a in xi), c.zero()),
        "t": sum((a * on_base(ODD) for a in xi), c.zero()),
        "xi1": xi[0] * xi[1] * on_base(EVEN), "xi2": xi[0] * xi[1] * on_base(EVEN)}, ODD)
    Xi = VectorField(c, {
        "x": on_base(ODD), "t": on_base(EVEN),
        "xi1": sum((a * on_base(ODD) for a in xi), c.zero()),
        "xi2": sum((a * on_base(ODD) for a in xi), c.zero())}, ODD)
    assert coordinate_divergence(d_A + Xi) == q_algebroid_formula(d_A, Xi, ["x", "t"])


def test_q_algebroid_sum_requires_commuting():
    c = Chart.from_spec([("x", EVEN), ("t", ODD), ("xi", ODD)], 4)
    x, t, xi = c.vars()
    d_A = VectorField(c, {"x": x * xi}, ODD)
    assert is_homological(q_algebroid_sum(d_A, VectorField(c, {"x": x * t}, ODD)))
    with pytest.raises(NotCommuting):
        q_algebroid_sum(d_A, VectorField(c, {"x": t}, ODD))


@given(seeds)
def test_nijenhuis_scalar_multiple_of_identity(seed):
    rng = rng_for(seed)
    f = random_elem(R1, rng, EVEN, 3, 3)
    Q = nijenhuis_field([[f]], R1)
    T = Q.chart
    assert local_rep(Q) == T.var("dx") * f.left_partial("x").rechart(T)


def test_nijenhuis_two_dimensional():
    x1, x2 = R2.vars()
    z = R2.zero()
    for N in ([[x1, z], [z, x1]], [[x1 * x1, z], [z, 1 + x2]], [[1 + x1, z], [z, x2 * x2]]):
        Q = nijenhuis_field(N, R2)
        assert local_rep(Q) == trace_differential(N, R2)
    with pytest.raises(NotNijenhuis):
        nijenhuis_field([[z, x2], [x1, z]], R2)


def test_double_lie_algebroid_theorem():
    tangent = lie_algebroid_data(R1, (Coord("v", ODD),), {("v", "x"): R1.one()})
    x = R1.var("x")
    from qmodular.zoo import rank_two_algebroid
    for data in (tangent, nonabelian_2d(), sl2(), heisenberg(), rank_two_algebroid(1 + x * x, 2 - x)):
        D = double_from_algebroid(data)
        assert bracket(D.Q01, D.Q10).is_zero()
        assert is_homological(D.total)
        assert double_modular_rep(D).is_zero()
        assert double_formula(D).is_zero()


def test_anticotangent_lift_is_hamiltonian():
    Q = lie_algebroid(nonabelian_2d())
    A = anticotangent(Q.chart)
    P = A.zero()
    for n, comp in Q.components.items():
        P = P + comp.rechart(A) * A.var(star_name(n))
    assert anticotangent_lift(Q) == hamiltonian_vf_odd(P)
