"""Canonical text rendering.

Monomials are ordered by total degree, then lexicographically in chart
coordinate order (higher powers of earlier coordinates first).  Factors
appear in chart order, coefficients as reduced fractions.  The output parses
back through the DSL expression grammar to the same element.
"""

from __future__ import annotations

from fractions import Fraction


def fmt_rational(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def exponent_vector(chart, mono):
    e, s = mono
    vec = []
    for pos, coord in enumerate(chart.coords):
        k = chart.ordinal[pos]
        if coord.parity == 0:
            vec.append(e[k])
        else:
            vec.append(1 if k in s else 0)
    return vec


def monomial_key(chart, mono):
    vec = exponent_vector(chart, mono)
    return (sum(vec), tuple(-v for v in vec))


def _factors(chart, mono):
    out = []
    for pos, v in enumerate(exponent_vector(chart, mono)):
        if v == 1:
            out.append(chart.coords[pos].name)
        elif v > 1:
            out.append(f"{chart.coords[pos].name}^{v}")
    return out


def _terms(elem):
    chart = elem.chart
    for mono in sorted(elem.terms, key=lambda m: monomial_key(chart, m)):
        yield elem.terms[mono], _factors(chart, mono)


def render_elem(elem) -> str:
    if elem.is_zero():
        return "0"
    pieces = []
    for i, (c, factors) in enumerate(_terms(elem)):
        neg = c < 0
        mag = -c if neg else c
        if factors:
            body = "*".join(factors)
            if mag != 1:
                body = f"{fmt_rational(mag)}*{body}"
        else:
            body = fmt_rational(mag)
        if i == 0:
            pieces.append(f"-{body}" if neg else body)
        else:
            pieces.append(f" - {body}" if neg else f" + {body}")
    return "".join(pieces)


def is_single_term(elem) -> bool:
    return len(elem.terms) == 1


def render_field(field, basis_fmt: str = "{expr} * d/d{name}", unit_fmt: str = "d/d{name}") -> str:
    """Render a vector field as ``expr * d/dx + ...`` in chart order."""
    chart = field.chart
    pieces = []
    for pos, coord in enumerate(chart.coords):
        comp = field.components.get(coord.name)
        if comp is None or comp.is_zero():
            continue
        neg = False
        if comp == 1:
            text = unit_fmt.format(name=coord.name)
        elif comp == -1:
            text = unit_fmt.format(name=coord.name)
            neg = True
        else:
            expr = render_elem(comp)
            if not is_single_term(comp):
                expr = f"({expr})"
            elif expr.startswith("-"):
                neg = True
                expr = render_elem(-comp)
            text = basis_fmt.format(expr=expr, name=coord.name)
        if not pieces:
            pieces.append(f"-{text}" if neg else text)
        else:
            pieces.append(f" - {text}" if neg else f" + {text}")
    return "".join(pieces) if pieces else "0"


def render_field_dsl(field) -> str:
    return render_field(field, basis_fmt="{expr}*@{name}", unit_fmt="@{name}")
