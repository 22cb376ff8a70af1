"""Z2-graded coefficient ring.

Functions on a coordinate chart are truncated power series in the even
coordinates tensored with the exterior algebra on the odd coordinates, with
exact rational coefficients.  A monomial is stored as a pair

    (even exponent tuple, ascending tuple of odd ordinals)

where the exponent tuple is indexed by the even coordinates in chart order
and the odd ordinals enumerate the odd coordinates in chart order.  Even
monomials of total degree above the chart truncation are dropped on
construction, so every stored element is already truncated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Optional, Tuple, Union

EVEN = 0
ODD = 1

DEFAULT_TRUNCATION = 8

Monomial = Tuple[Tuple[int, ...], Tuple[int, ...]]
Scalar = Union[int, Fraction]


class GradedError(ValueError):
    """Raised on ill-formed graded input (parity, chart or truncation)."""


class ChartMismatch(GradedError):
    pass


def parity_name(p: int) -> str:
    return "even" if p == EVEN else "odd"


def perm_sign(seq: Iterable[int]) -> int:
    """Sign of the permutation sorting `seq` (entries distinct)."""
    items = list(seq)
    inversions = 0
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                inversions += 1
    return -1 if inversions % 2 else 1


@dataclass(frozen=True)
class Coord:
    name: str
    parity: int
    weight: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        if self.parity not in (EVEN, ODD):
            raise GradedError(f"parity of {self.name!r} must be 0 or 1")


@dataclass(frozen=True)
class Chart:
    """An ordered coordinate system with parities and a truncation order.

    `truncation` is the largest total even degree kept in any series.
    """

    coords: Tuple[Coord, ...]
    truncation: int = DEFAULT_TRUNCATION
    label: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        names = [c.name for c in self.coords]
        if len(set(names)) != len(names):
            raise GradedError(f"duplicate coordinate names in chart: {names}")
        if self.truncation < 1:
            raise GradedError("truncation must be >= 1")

    @classmethod
    def from_spec(cls, spec: Iterable[Tuple[str, int]], truncation: int = DEFAULT_TRUNCATION,
                  label: str = "") -> "Chart":
        """Build a chart from ``[(name, parity), ...]``."""
        return cls(tuple(Coord(n, p) for n, p in spec), truncation, label)

    # index tables ---------------------------------------------------------

    @cached_property
    def index(self) -> dict:
        return {c.name: i for i, c in enumerate(self.coords)}

    @cached_property
    def even_positions(self) -> Tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.coords) if c.parity == EVEN)

    @cached_property
    def odd_positions(self) -> Tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.coords) if c.parity == ODD)

    @cached_property
    def ordinal(self) -> Tuple[int, ...]:
        """Position of each coordinate among the coordinates of its parity."""
        out = []
        ne = no = 0
        for c in self.coords:
            if c.parity == EVEN:
                out.append(ne)
                ne += 1
            else:
                out.append(no)
                no += 1
        return tuple(out)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(c.name for c in self.coords)

    @property
    def n_even(self) -> int:
        return len(self.even_positions)

    @property
    def n_odd(self) -> int:
        return len(self.odd_positions)

    @property
    def dim(self) -> Tuple[int, int]:
        return (self.n_even, self.n_odd)

    def __len__(self):
        return len(self.coords)

    def __contains__(self, name: str) -> bool:
        return name in self.index

    def coord(self, name: str) -> Coord:
        try:
            return self.coords[self.index[name]]
        except KeyError:
            raise GradedError(f"unknown coordinate {name!r}") from None

    def parity(self, name: str) -> int:
        return self.coord(name).parity

    def with_truncation(self, truncation: int) -> "Chart":
        return Chart(self.coords, truncation, self.label)

    # element constructors -------------------------------------------------

    def zero(self) -> "GradedElem":
        return GradedElem(self, {})

    def one(self) -> "GradedElem":
        return self.const(1)

    def const(self, c: Scalar) -> "GradedElem":
        return GradedElem(self, {((0,) * self.n_even, ()): _coerce(c)})

    def var(self, name: str) -> "GradedElem":
        pos = self.index.get(name)
        if pos is None:
            raise GradedError(f"unknown coordinate {name!r}")
        k = self.ordinal[pos]
        if self.coords[pos].parity == EVEN:
            exps = tuple(1 if i == k else 0 for i in range(self.n_even))
            return GradedElem(self, {(exps, ()): Fraction(1)})
        return GradedElem(self, {((0,) * self.n_even, (k,)): Fraction(1)})

    def vars(self):
        return tuple(self.var(n) for n in self.names)

    def monomial_parity(self, mono: Monomial) -> int:
        return len(mono[1]) % 2

    def describe(self) -> str:
        parts = [f"{parity_name(c.parity)} {c.name}" for c in self.coords]
        return "{" + "; ".join(parts) + "}"


def _coerce(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


class GradedElem:
    """An element of the truncated graded function algebra of a chart.

    Instances are immutable; arithmetic returns new elements.  `terms` maps
    monomials to nonzero Fractions.
    """

    __slots__ = ("chart", "terms", "_hash")

    def __init__(self, chart: Chart, terms: Mapping[Monomial, Fraction], _trusted: bool = False):
        self.chart = chart
        if _trusted:
            self.terms = terms
        else:
            D = chart.truncation
            clean = {}
            for mono, c in terms.items():
                c = _coerce(c)
                if c and sum(mono[0]) <= D:
                    clean[mono] = c
            self.terms = clean
        self._hash = None

    # basic protocol -------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, GradedElem):
            return self.chart == other.chart and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.chart.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.chart, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"GradedElem({self})"

    def __str__(self):
        from .render import render_elem

        return render_elem(self)

    def _check(self, other) -> "GradedElem":
        if isinstance(other, GradedElem):
            if other.chart is not self.chart and other.chart != self.chart:
                raise ChartMismatch("operands live on different charts")
            return other
        if isinstance(other, (int, Fraction)):
            return self.chart.const(other)
        raise TypeError(f"cannot combine GradedElem with {type(other).__name__}")

    # parity -------------------------------------------------------------

    def parts(self) -> Tuple["GradedElem", "GradedElem"]:
        """Split into (even part, odd part)."""
        ev, od = {}, {}
        for mono, c in self.terms.items():
            (od if len(mono[1]) % 2 else ev)[mono] = c
        return GradedElem(self.chart, ev, True), GradedElem(self.chart, od, True)

    @property
    def parity(self) -> Optional[int]:
        """Parity of a homogeneous element, None for mixed ones.

        Zero is reported as even.
        """
        ps = {len(m[1]) % 2 for m in self.terms}
        if not ps:
            return EVEN
        if len(ps) == 1:
            return ps.pop()
        return None

    def is_homogeneous(self) -> bool:
        return self.parity is not None

    def has_parity(self, p: int) -> bool:
        return self.is_zero() or self.parity == p

    # ring operations ------------------------------------------------------

    def __add__(self, other):
        other = self._check(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = out.get(mono, 0) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return GradedElem(self.chart, out, True)

    __radd__ = __add__

    def __neg__(self):
        return GradedElem(self.chart, {m: -c for m, c in self.terms.items()}, True)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def scale(self, c: Scalar) -> "GradedElem":
        c = _coerce(c)
        if not c:
            return self.chart.zero()
        return GradedElem(self.chart, {m: c * v for m, v in self.terms.items()}, True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, GradedElem):
            return NotImplemented
        other = self._check(other)
        D = self.chart.truncation
        out: dict = {}
        for (e1, s1), c1 in self.terms.items():
            d1 = sum(e1)
            for (e2, s2), c2 in other.terms.items():
                if d1 + sum(e2) > D:
                    continue
                if s1 and s2:
                    mono_odd, sign = _merge_odd(s1, s2)
                    if sign == 0:
                        continue
                else:
                    mono_odd, sign = s1 or s2, 1
                e = tuple(a + b for a, b in zip(e1, e2))
                key = (e, mono_odd)
                v = out.get(key, 0) + sign * c1 * c2
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        return GradedElem(self.chart, out, True)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / _coerce(other))
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.chart.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # inspection -----------------------------------------------------------

    def constant_term(self) -> Fraction:
        return self.terms.get(((0,) * self.chart.n_even, ()), Fraction(0))

    def max_even_degree(self) -> int:
        return max((sum(m[0]) for m in self.terms), default=0)

    def coefficient(self, mono: Monomial) -> Fraction:
        return self.terms.get(mono, Fraction(0))

    # calculus -------------------------------------------------------------

    def left_partial(self, name: str) -> "GradedElem":
        """Left derivative with respect to the coordinate `name`."""
        chart = self.chart
        pos = chart.index.get(name)
        if pos is None:
            raise GradedError(f"unknown coordinate {name!r}")
        k = chart.ordinal[pos]
        out: dict = {}
        if chart.coords[pos].parity == EVEN:
            for (e, s), c in self.terms.items():
                if e[k]:
                    ne = e[:k] + (e[k] - 1,) + e[k + 1:]
                    out[(ne, s)] = out.get((ne, s), 0) + c * e[k]
        else:
            for (e, s), c in self.terms.items():
                if k in s:
                    i = s.index(k)
                    ns = s[:i] + s[i + 1:]
                    out[(e, ns)] = out.get((e, ns), 0) + (-c if i % 2 else c)
        return GradedElem(chart, {m: v for m, v in out.items() if v}, True)

    def inverse(self) -> "GradedElem":
        """Multiplicative inverse of an even element with nonzero constant term."""
        if self.parity != EVEN:
            raise GradedError("inverse requires an even element")
        c0 = self.constant_term()
        if not c0:
            raise GradedError("inverse requires a nonzero constant term")
        # 1/(c0 (1 + n)) = (1/c0) * sum (-n)^k; n is nilpotent in the truncated ring
        n = self.scale(1 / c0) - 1
        term = self.chart.one()
        total = self.chart.one()
        while True:
            term = term * (-n)
            if term.is_zero():
                break
            total = total + term
        return total.scale(1 / c0)

    def log1p_normalised(self) -> "GradedElem":
        """log of an even element with constant term 1 (Mercator series)."""
        if self.parity != EVEN or self.constant_term() != 1:
            raise GradedError("log requires an even element with constant term 1")
        n = self - 1
        total = self.chart.zero()
        power = self.chart.one()
        k = 1
        while True:
            power = power * n
            if power.is_zero():
                break
            total = total + power.scale(Fraction((-1) ** (k + 1), k))
            k += 1
        return total

    def exp_nilpotent(self) -> "GradedElem":
        """exp of an even element with zero constant term."""
        if self.parity != EVEN or self.constant_term():
            raise GradedError("exp requires an even element with zero constant term")
        total = self.chart.one()
        term = self.chart.one()
        k = 1
        while True:
            term = (term * self).scale(Fraction(1, k))
            if term.is_zero():
                break
            total = total + term
            k += 1
        return total

    def substitute(self, rule) -> "GradedElem":
        """Pull back along a chart morphism (see geometry.ChartMorphism)."""
        return rule.pullback(self)

    def rechart(self, chart: Chart) -> "GradedElem":
        """Re-express on a chart containing every used coordinate by name.

        Used to lift functions from a base chart to a derived chart.
        """
        src = self.chart
        if src == chart:
            return self
        even_map = []
        for pos in src.even_positions:
            c = src.coords[pos]
            if c.name not in chart or chart.parity(c.name) != c.parity:
                even_map.append(None)
            else:
                even_map.append(chart.ordinal[chart.index[c.name]])
        odd_map = []
        for pos in src.odd_positions:
            c = src.coords[pos]
            if c.name not in chart or chart.parity(c.name) != c.parity:
                odd_map.append(None)
            else:
                odd_map.append(chart.ordinal[chart.index[c.name]])
        out: dict = {}
        for (e, s), c in self.terms.items():
            ne = [0] * chart.n_even
            for i, k in enumerate(e):
                if k:
                    if even_map[i] is None:
                        raise GradedError(f"coordinate {src.coords[src.even_positions[i]].name!r} "
                                          "is not present in the target chart")
                    ne[even_map[i]] = k
            mapped = []
            for j in s:
                if odd_map[j] is None:
                    raise GradedError(f"coordinate {src.coords[src.odd_positions[j]].name!r} "
                                      "is not present in the target chart")
                mapped.append(odd_map[j])
            sign = perm_sign(mapped)
            key = (tuple(ne), tuple(sorted(mapped)))
            out[key] = out.get(key, 0) + sign * c
        return GradedElem(chart, out)

    def restrict(self, zero_coords: Iterable[str], chart: Chart) -> "GradedElem":
        """Set the coordinates `zero_coords` to zero and re-express on `chart`."""
        zero = set(zero_coords)
        src = self.chart
        keep: dict = {}
        for (e, s), c in self.terms.items():
            dead = False
            for i, k in enumerate(e):
                if k and src.coords[src.even_positions[i]].name in zero:
                    dead = True
                    break
            if not dead:
                for j in s:
                    if src.coords[src.odd_positions[j]].name in zero:
                        dead = True
                        break
            if not dead:
                keep[(e, s)] = c
        return GradedElem(src, keep, True).rechart(chart)

    def used_coords(self) -> set:
        chart = self.chart
        used = set()
        for e, s in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(chart.coords[chart.even_positions[i]].name)
            for j in s:
                used.add(chart.coords[chart.odd_positions[j]].name)
        return used


def _merge_odd(s1: Tuple[int, ...], s2: Tuple[int, ...]):
    """Concatenate two ascending odd tuples; return (sorted tuple, sign) or (None, 0)."""
    i = j = 0
    n1, n2 = len(s1), len(s2)
    merged = []
    swaps = 0
    while i < n1 and j < n2:
        a, b = s1[i], s2[j]
        if a == b:
            return None, 0
        if a < b:
            merged.append(a)
            i += 1
        else:
            # b jumps over the remaining n1 - i factors of s1
            swaps += n1 - i
            merged.append(b)
            j += 1
    merged.extend(s1[i:])
    merged.extend(s2[j:])
    return tuple(merged), (-1 if swaps % 2 else 1)


def supercommutator_sign(p: int, q: int) -> int:
    return -1 if (p and q) else 1
