from __future__ import annotations

import sympy
from hypothesis import given, settings, strategies as st

from conftest import rng_for, seeds
from oracles import GrassmannOracle, elem_from_vector
from qmodular.algebra import ODD, Chart
from qmodular.berezin import divergence
from qmodular.geometry import ChartMorphism, apply, bracket
from qmodular.zoo import random_elem, random_field

_ORACLES = {}


def _setup(n):
    if n not in _ORACLES:
        c = Chart.from_spec([(f"t{i}", ODD) for i in range(1, n + 1)], 1)
        _ORACLES[n] = (c, GrassmannOracle(c))
    return _ORACLES[n]


def _dense(c, rng, parity=None):
    return random_elem(c, rng, parity, 0, 2 ** c.n_odd // 2)


sizes = st.integers(1, 5)


@settings(max_examples=40)
@given(seeds, sizes)
def test_products_and_derivatives(seed, n):
    rng = rng_for(seed)
    c, o = _setup(n)
    f, g = _dense(c, rng), _dense(c, rng)
    assert elem_from_vector(c, o, o.vector(f) + o.vector(g)) == f + g
    assert elem_from_vector(c, o, o.mul(f, g)) == f * g
    for name in c.names:
        assert elem_from_vector(c, o, o.partial(name, o.vector(f))) == f.left_partial(name)


@settings(max_examples=40)
@given(seeds, sizes)
def test_even_unit_inverse(seed, n):
    rng = rng_for(seed)
    c, o = _setup(n)
    g = _dense(c, rng, 0)
    u = 2 + (g - c.const(g.constant_term()))
    prod = o.operator(u) * o.vector(u.inverse())
    assert elem_from_vector(c, o, prod) == c.one()


@settings(max_examples=40)
@given(seeds, sizes, st.integers(0, 1), st.integers(0, 1))
def test_fields_and_brackets(seed, n, p, q):
    rng = rng_for(seed)
    c, o = _setup(n)
    X = random_field(c, rng, p, 0, 3)
    Y = random_field(c, rng, q, 0, 3)
    f = _dense(c, rng)
    assert elem_from_vector(c, o, o.apply_field(X, o.vector(f))) == apply(X, f)
    mx, my = o.field_operator(X), o.field_operator(Y)
    sign = -1 if p * q else 1
    assert o.field_operator(bracket(X, Y)) == mx * my - sign * my * mx


@settings(max_examples=40)
@given(seeds, sizes, st.integers(0, 1), st.integers(0, 1))
def test_divergence_by_integration(seed, n, p, q):
    rng = rng_for(seed)
    c, o = _setup(n)
    X = random_field(c, rng, p, 0, 3)
    f = _dense(c, rng, q)
    sign = -1 if p * q else 1
    total = o.apply_field(X, o.vector(f)) + sign * o.operator(f) * o.vector(divergence(X))
    assert o.berezin_integral(total) == 0


@settings(max_examples=40)
@given(seeds, sizes)
def test_morphism_pullback(seed, n):
    rng = rng_for(seed)
    c, o = _setup(n)
    psi = ChartMorphism(c, c, {name: _dense(c, rng, ODD) for name in c.names})
    f = _dense(c, rng)
    # substitute images as operators in the stored odd order
    v = sympy.zeros(o.dim, 1)
    for (_, s), coeff in f.terms.items():
        state = sympy.zeros(o.dim, 1)
        state[0] = 1
        for j in reversed(s):
            state = o.operator(psi.images[c.names[j]]) * state
        v += sympy.Rational(coeff.numerator, coeff.denominator) * state
    assert elem_from_vector(c, o, v) == psi(f)
