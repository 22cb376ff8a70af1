"""Derived charts: antitangent, cotangent and anticotangent coordinates.

Naming scheme for the fibre coordinates over a base coordinate ``x``:

    antitangent    ``dx``       parity |x| + 1
    cotangent      ``px``       parity |x|
    anticotangent  ``x_star``   parity |x| + 1

Base coordinates keep their names, so base functions lift by name.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from .algebra import Chart, Coord, GradedError


def d_name(name: str) -> str:
    return "d" + name


def p_name(name: str) -> str:
    return "p" + name


def star_name(name: str) -> str:
    return name + "_star"


@dataclass(frozen=True)
class FibredChart(Chart):
    """A chart (x^a, fibre_a) with one fibre coordinate per base coordinate."""

    base: Optional[Chart] = None

    @property
    def pairs(self) -> Tuple[Tuple[str, str], ...]:
        n = len(self.base.coords)
        return tuple((self.coords[i].name, self.coords[n + i].name) for i in range(n))

    @property
    def base_names(self) -> Tuple[str, ...]:
        return self.base.names

    @property
    def fibre_names(self) -> Tuple[str, ...]:
        return tuple(f for _, f in self.pairs)

    def fibre(self, name: str) -> str:
        """The fibre coordinate paired with base coordinate ``name``."""
        for x, f in self.pairs:
            if x == name:
                return f
        raise GradedError(f"{name!r} is not a base coordinate of this chart")


@dataclass(frozen=True)
class AntitangentChart(FibredChart):
    pass


@dataclass(frozen=True)
class CotangentChart(FibredChart):
    pass


@dataclass(frozen=True)
class AnticotangentChart(FibredChart):
    pass


def _fibred(cls, base: Chart, namer, shift: int, truncation=None, weight=None):
    coords = list(base.coords)
    used = set(base.names)
    for c in base.coords:
        w = weight(c) if weight else None
        # iterated lifts would reuse names such as dx; suffix until free
        name, k = namer(c.name), 1
        while name in used:
            name, k = f"{namer(c.name)}_{k}", k + 1
        used.add(name)
        coords.append(Coord(name, (c.parity + shift) % 2, w))
    trunc = base.truncation if truncation is None else truncation
    return cls(tuple(coords), trunc, base.label, base)


def antitangent(base: Chart, truncation: Optional[int] = None) -> AntitangentChart:
    """Pi T M: coordinates (x^a, dx^a) with |dx^a| = |x^a| + 1.

    Bi-weights, when the base carries them, are shifted by (1, 0) on the
    differentials.
    """

    def weight(c):
        if c.weight is None:
            return None
        return (c.weight[0] + 1, c.weight[1])

    return _fibred(AntitangentChart, base, d_name, 1, truncation, weight)


def cotangent(base: Chart, truncation: Optional[int] = None) -> CotangentChart:
    return _fibred(CotangentChart, base, p_name, 0, truncation)


def anticotangent(base: Chart, truncation: Optional[int] = None) -> AnticotangentChart:
    return _fibred(AnticotangentChart, base, star_name, 1, truncation)


def projection_lift(f, chart: FibredChart):
    """Pull a base function back along the bundle projection."""
    return f.rechart(chart)


def product_chart(c1: Chart, c2: Chart):
    """Concatenate two charts, renaming colliding names of the second one.

    Returns ``(chart, renames)`` where ``renames`` maps old to new names for
    the second factor.
    """
    taken = set(c1.names)
    renames = {}
    coords = list(c1.coords)
    for c in c2.coords:
        name = c.name
        if name in taken:
            k = 2
            while f"{name}_{k}" in taken or f"{name}_{k}" in c2.names:
                k += 1
            new = f"{name}_{k}"
            renames[name] = new
            name = new
        taken.add(name)
        coords.append(Coord(name, c.parity, c.weight))
    trunc = max(c1.truncation, c2.truncation)
    return Chart(tuple(coords), trunc), renames
