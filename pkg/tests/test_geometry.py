from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from conftest import random_endomorphism, rng_for, seeds
from qmodular.algebra import EVEN, ODD, Chart, GradedError
from qmodular.geometry import (ChartMorphism, VectorField, apply, bracket, compose_apply,
                               is_homological, is_q_morphism, square)
from qmodular.zoo import homological_zoo, random_chart, random_elem, random_field


def _sign(p, q):
    return -1 if p * q % 2 else 1


@given(seeds, st.integers(0, 1))
def test_field_acts_as_graded_derivation(seed, p):
    rng = rng_for(seed)
    c = random_chart(rng, 2, 3, 6)
    X = random_field(c, rng, p)
    q = rng.randint(0, 1)
    f = random_elem(c, rng, q)
    g = random_elem(c, rng)
    assert apply(X, f * g) == apply(X, f) * g + (f * apply(X, g)).scale(_sign(p, q))


@given(seeds, st.integers(0, 1), st.integers(0, 1))
def test_bracket_is_graded_commutator(seed, p, q):
    rng = rng_for(seed)
    c = random_chart(rng, 2, 3, 6)
    X = random_field(c, rng, p)
    Y = random_field(c, rng, q)
    f = random_elem(c, rng, None, 2, 3)
    Z = bracket(X, Y)
    assert Z.parity == (p + q) % 2 or Z.is_zero()
    want = compose_apply(X, Y, f) - compose_apply(Y, X, f).scale(_sign(p, q))
    assert apply(Z, f) == want
    assert bracket(Y, X) == Z.scale(-_sign(p, q))


def test_odd_square_is_half_self_bracket():
    c = Chart.from_spec([("x", EVEN), ("t", ODD)], 4)
    x, t = c.vars()
    Q = VectorField(c, {"x": x * t, "t": x}, ODD)
    assert bracket(Q, Q) == square(Q).scale(2)
    assert not is_homological(Q)


def test_zoo_is_homological():
    for name, Q in homological_zoo():
        assert Q.parity == ODD, name
        assert is_homological(Q), name
        assert bracket(Q, Q).is_zero(), name


def test_field_parity_checks():
    c = Chart.from_spec([("x", EVEN), ("t", ODD)], 4)
    x, t = c.vars()
    with pytest.raises(GradedError):
        VectorField(c, {"x": x}, ODD)
    mixed = VectorField(c, {"x": x + t})
    assert mixed.parity is None
    assert sum((p for p in mixed.homogeneous_parts()), VectorField.zero(c)) == mixed


@given(seeds)
def test_pullback_is_algebra_homomorphism(seed):
    rng = rng_for(seed)
    c = random_chart(rng, 2, 3, 5)
    psi = random_endomorphism(rng, c)
    f = random_elem(c, rng, None, 2, 3)
    g = random_elem(c, rng, None, 2, 3)
    assert psi(f * g) == psi(f) * psi(g)
    assert psi(f + g) == psi(f) + psi(g)
    assert psi(c.one()) == c.one()
    assert ChartMorphism.identity(c)(f) == f


@given(seeds)
def test_compose_is_contravariant(seed):
    rng = rng_for(seed)
    c = random_chart(rng, 2, 2, 5)
    psi = random_endomorphism(rng, c)
    phi = random_endomorphism(rng, c)
    f = random_elem(c, rng, None, 2, 3)
    assert phi.compose(psi)(f) == psi(phi(f))


def test_q_morphism_transports_field():
    c = Chart.from_spec([("t1", ODD), ("t2", ODD), ("t3", ODD)], 4)
    t1, t2, t3 = c.vars()
    Q = VectorField(c, {"t1": c.one(), "t2": t2 * t3}, ODD)
    psi = ChartMorphism(c, c, {"t1": t1, "t2": t2, "t3": t3 + t1 * t2 * t3})
    inv = ChartMorphism(c, c, {"t1": t1, "t2": t2, "t3": t3 - t1 * t2 * t3})
    assert psi.compose(inv)(t3) == t3
    Q2 = VectorField(c, {n: inv(apply(Q, psi(c.var(n)))) for n in c.names}, ODD)
    assert is_q_morphism(psi, Q, Q2)
    assert not is_q_morphism(psi, Q, Q)
    assert is_homological(Q2)


def test_morphism_rejects_bad_images():
    c = Chart.from_spec([("x", EVEN), ("t", ODD)], 4)
    x, t = c.vars()
    with pytest.raises(GradedError):
        ChartMorphism(c, c, {"x": t, "t": t})
    with pytest.raises(GradedError):
        ChartMorphism(c, c, {"x": x})
