"""Vector fields, chart morphisms, the super Lie bracket and Q-checks."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Mapping, Optional

from .algebra import EVEN, ODD, Chart, ChartMismatch, GradedElem, GradedError


class VectorField:
    """A derivation ``X = X^a d/dx^a`` on a single chart.

    `parity` is the declared parity of a homogeneous field, or None for a
    field mixing both parities.  Components are stored by coordinate name;
    zero components are omitted.
    """

    __slots__ = ("chart", "components", "parity")

    def __init__(self, chart: Chart, components: Mapping[str, GradedElem], parity: Optional[int] = None,
                 *, infer: bool = True):
        comps: Dict[str, GradedElem] = {}
        for name, comp in components.items():
            if name not in chart:
                raise GradedError(f"unknown coordinate {name!r}")
            if isinstance(comp, (int, Fraction)):
                comp = chart.const(comp)
            if comp.chart != chart:
                raise ChartMismatch(f"component {name!r} lives on another chart")
            if not comp.is_zero():
                comps[name] = comp
        self.chart = chart
        self.components = comps
        if parity is None and infer:
            parity = self._infer_parity()
        elif parity is not None:
            for name, comp in comps.items():
                if not comp.has_parity((parity + chart.parity(name)) % 2):
                    raise GradedError(
                        f"component {name!r} has the wrong parity for a field of parity {parity}")
        self.parity = parity

    def _infer_parity(self) -> Optional[int]:
        found = set()
        for name, comp in self.components.items():
            p = comp.parity
            if p is None:
                return None
            found.add((p + self.chart.parity(name)) % 2)
        if not found:
            return EVEN
        if len(found) == 1:
            return found.pop()
        return None

    @classmethod
    def zero(cls, chart: Chart, parity: int = EVEN) -> "VectorField":
        return cls(chart, {}, parity)

    @classmethod
    def basis(cls, chart: Chart, name: str) -> "VectorField":
        return cls(chart, {name: chart.one()}, chart.parity(name))

    def __getitem__(self, name: str) -> GradedElem:
        if name not in self.chart:
            raise GradedError(f"unknown coordinate {name!r}")
        return self.components.get(name, self.chart.zero())

    def is_zero(self) -> bool:
        return not self.components

    def is_homogeneous(self) -> bool:
        return self.parity is not None

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.chart == other.chart and self.components == other.components

    def __hash__(self):
        return hash((self.chart, frozenset(self.components.items())))

    def __repr__(self):
        return f"VectorField({self})"

    def __str__(self):
        from .render import render_field

        return render_field(self)

    def _check(self, other: "VectorField"):
        if other.chart != self.chart:
            raise ChartMismatch("vector fields live on different charts")

    def __add__(self, other: "VectorField") -> "VectorField":
        self._check(other)
        comps = dict(self.components)
        for name, comp in other.components.items():
            comps[name] = comps[name] + comp if name in comps else comp
        return VectorField(self.chart, comps)

    def __neg__(self):
        return VectorField(self.chart, {n: -c for n, c in self.components.items()}, self.parity)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "VectorField":
        return VectorField(self.chart, {n: v.scale(c) for n, v in self.components.items()}, self.parity)

    def left_mul(self, f: GradedElem) -> "VectorField":
        """The field f*X with components f * X^a."""
        if f.chart != self.chart:
            raise ChartMismatch("function and field live on different charts")
        return VectorField(self.chart, {n: f * v for n, v in self.components.items()})

    def parts(self):
        """Split into (even part, odd part)."""
        ev, od = {}, {}
        for name, comp in self.components.items():
            a = self.chart.parity(name)
            ce, co = comp.parts()
            # a component of parity a + p belongs to the field part of parity p
            if a == EVEN:
                ev[name], od[name] = ce, co
            else:
                ev[name], od[name] = co, ce
        return VectorField(self.chart, ev, EVEN), VectorField(self.chart, od, ODD)

    def homogeneous_parts(self):
        if self.parity is not None:
            return [self]
        return [p for p in self.parts() if not p.is_zero()]

    def __call__(self, f: GradedElem) -> GradedElem:
        return apply(self, f)

    def rechart(self, chart: Chart) -> "VectorField":
        return VectorField(chart, {n: c.rechart(chart) for n, c in self.components.items()}, self.parity)


def apply(X: VectorField, f: GradedElem) -> GradedElem:
    """X(f) = sum_a X^a * d_a f."""
    if f.chart != X.chart:
        raise ChartMismatch("vector field and function live on different charts")
    out = f.chart.zero()
    for name, comp in X.components.items():
        d = f.left_partial(name)
        if d:
            out = out + comp * d
    return out


def bracket(X: VectorField, Y: VectorField) -> VectorField:
    """Super commutator [X, Y] = X o Y - (-1)^{|X||Y|} Y o X.

    Mixed-parity arguments are split into homogeneous parts and the bracket
    is extended bilinearly.
    """
    X._check(Y)
    if X.parity is None or Y.parity is None:
        total = VectorField.zero(X.chart)
        for Xp in X.homogeneous_parts():
            for Yp in Y.homogeneous_parts():
                total = total + bracket(Xp, Yp)
        return total
    sign = -1 if (X.parity and Y.parity) else 1
    comps = {}
    for coord in X.chart.coords:
        a = coord.name
        v = apply(X, Y[a])
        w = apply(Y, X[a])
        comps[a] = v + w if sign == -1 else v - w
    return VectorField(X.chart, comps, (X.parity + Y.parity) % 2)


def compose_apply(X: VectorField, Y: VectorField, f: GradedElem) -> GradedElem:
    return apply(X, apply(Y, f))


def is_homological(Q: VectorField) -> bool:
    """True iff Q is odd and Q^a d_a Q^b = 0 for every coordinate b."""
    if Q.is_zero():
        return True
    if Q.parity != ODD:
        return False
    return all(apply(Q, Q[c.name]).is_zero() for c in Q.chart.coords)


def square(Q: VectorField) -> VectorField:
    """Components of Q o Q, i.e. half the self-bracket of an odd field."""
    return VectorField(Q.chart, {c.name: apply(Q, Q[c.name]) for c in Q.chart.coords})


class ChartMorphism:
    """A pullback rule psi*: target coordinate -> element on the source chart.

    Truncation is respected only when no image of an even coordinate has a
    purely odd term; otherwise x -> x + t1 t2 moves dropped degrees back in.
    """

    __slots__ = ("source", "target", "images", "_power_cache")

    def __init__(self, source: Chart, target: Chart, images: Mapping[str, GradedElem]):
        imgs = {}
        for coord in target.coords:
            if coord.name not in images:
                raise GradedError(f"no image given for target coordinate {coord.name!r}")
            img = images[coord.name]
            if isinstance(img, (int, Fraction)):
                img = source.const(img)
            if img.chart != source:
                raise ChartMismatch(f"image of {coord.name!r} is not on the source chart")
            if not img.has_parity(coord.parity):
                raise GradedError(f"image of {coord.name!r} does not have parity {coord.parity}")
            imgs[coord.name] = img
        extra = set(images) - set(target.names)
        if extra:
            raise GradedError(f"images given for unknown coordinates {sorted(extra)}")
        self.source = source
        self.target = target
        self.images = imgs
        self._power_cache = {}

    @classmethod
    def identity(cls, chart: Chart) -> "ChartMorphism":
        return cls(chart, chart, {n: chart.var(n) for n in chart.names})

    def __repr__(self):
        body = ", ".join(f"{n} -> {v}" for n, v in self.images.items())
        return f"ChartMorphism({body})"

    def _power(self, name: str, k: int) -> GradedElem:
        key = (name, k)
        hit = self._power_cache.get(key)
        if hit is None:
            hit = self.images[name] ** k
            self._power_cache[key] = hit
        return hit

    def pullback(self, f: GradedElem) -> GradedElem:
        if f.chart != self.target:
            raise ChartMismatch("element does not live on the morphism's target chart")
        tgt = self.target
        out = self.source.zero()
        even_names = [tgt.coords[p].name for p in tgt.even_positions]
        odd_names = [tgt.coords[p].name for p in tgt.odd_positions]
        for (e, s), c in f.terms.items():
            term = self.source.const(c)
            for name, k in zip(even_names, e):
                if k:
                    term = term * self._power(name, k)
            for j in s:
                term = term * self.images[odd_names[j]]
            out = out + term
        return out

    __call__ = pullback

    def compose(self, other: "ChartMorphism") -> "ChartMorphism":
        """(self o other)^* = other^* o self^*  for other: A -> B, self: B -> C."""
        if other.target != self.source:
            raise ChartMismatch("morphisms are not composable")
        return ChartMorphism(other.source, self.target,
                             {n: other.pullback(img) for n, img in self.images.items()})

    def push_field_condition(self, Q1: VectorField, Q2: VectorField):
        """Per target coordinate: Q1(psi* y) - psi*(Q2 y)."""
        return {y: apply(Q1, self.images[y]) - self.pullback(Q2[y]) for y in self.target.names}


def is_q_morphism(psi: ChartMorphism, Q1: VectorField, Q2: VectorField) -> bool:
    """Q1 o psi* = psi* o Q2, checked on the target coordinates."""
    if Q1.chart != psi.source or Q2.chart != psi.target:
        raise ChartMismatch("vector fields do not match the morphism's charts")
    return all(d.is_zero() for d in psi.push_field_condition(Q1, Q2).values())
