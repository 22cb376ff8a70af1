"""Berezin volumes, divergence and the Berezinian of even supermatrices."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from .algebra import EVEN, ODD, Chart, ChartMismatch, GradedElem, GradedError
from .geometry import ChartMorphism, VectorField, apply


class OrientationError(GradedError):
    """A coordinate change with non-positive Jacobian constant term."""


@dataclass(frozen=True)
class BerezinVolume:
    """The volume ``scale * exp(logdensity) * D[x]``.

    The exponential is never expanded; divergence only needs the log-density.
    """

    chart: Chart
    scale: Fraction = Fraction(1)
    logdensity: Optional[GradedElem] = None

    def __post_init__(self):
        scale = Fraction(self.scale)
        if scale <= 0:
            raise GradedError("volume scale must be a positive rational")
        object.__setattr__(self, "scale", scale)
        g = self.logdensity
        if g is None:
            g = self.chart.zero()
        if g.chart != self.chart:
            raise ChartMismatch("log-density lives on another chart")
        if g.parity != EVEN:
            raise GradedError("log-density must be even")
        if g.constant_term():
            # fold the constant into nothing: exp(c) is not rational, so refuse
            raise GradedError("log-density must have zero constant term")
        object.__setattr__(self, "logdensity", g)

    @classmethod
    def coordinate(cls, chart: Chart) -> "BerezinVolume":
        return cls(chart)

    def times_exp(self, h: GradedElem) -> "BerezinVolume":
        return BerezinVolume(self.chart, self.scale, self.logdensity + h)

    def __str__(self):
        from .render import fmt_rational, render_elem

        coords = ", ".join(self.chart.names)
        return f"{fmt_rational(self.scale)} * exp({render_elem(self.logdensity)}) D[{coords}]"


def coordinate_divergence(X: VectorField) -> GradedElem:
    """sum_a (-1)^{a(X+1)} d_a X^a, the divergence for the coordinate volume."""
    chart = X.chart
    out = chart.zero()
    for part in X.homogeneous_parts():
        p = part.parity
        for name, comp in part.components.items():
            a = chart.parity(name)
            d = comp.left_partial(name)
            out = out - d if (a and not p) else out + d
    return out


def divergence(X: VectorField, rho: Optional[BerezinVolume] = None) -> GradedElem:
    """Div_rho X = sum_a (-1)^{a(X+1)} d_a X^a + X(g) for rho = s e^g D[x]."""
    if rho is None:
        return coordinate_divergence(X)
    if rho.chart != X.chart:
        raise ChartMismatch("volume and vector field live on different charts")
    return coordinate_divergence(X) + apply(X, rho.logdensity)


def lie_derivative_volume(X: VectorField, rho: Optional[BerezinVolume] = None) -> GradedElem:
    """Density factor of L_X rho relative to rho; equal to the divergence."""
    return divergence(X, rho)


# supermatrices --------------------------------------------------------------

Block = List[List[GradedElem]]


def _zero_block(chart, rows, cols) -> Block:
    return [[chart.zero() for _ in range(cols)] for _ in range(rows)]


@dataclass(frozen=True)
class SuperMatrix:
    """An even supermatrix [[A, B], [C, D]] of size (p|q) x (p'|q').

    A and D hold even entries, B and C odd ones.
    """

    chart: Chart
    A: Block
    B: Block
    C: Block
    D: Block

    def __post_init__(self):
        p, q = len(self.A), len(self.D)
        pc = len(self.A[0]) if self.A else (len(self.C[0]) if self.C else 0)
        qc = len(self.D[0]) if self.D else (len(self.B[0]) if self.B else 0)
        shapes = [(self.A, p, pc, EVEN), (self.B, p, qc, ODD), (self.C, q, pc, ODD), (self.D, q, qc, EVEN)]
        for blk, r, c, par in shapes:
            if len(blk) != r or any(len(row) != c for row in blk):
                raise GradedError("inconsistent supermatrix block shapes")
            for row in blk:
                for e in row:
                    if e.chart != self.chart:
                        raise ChartMismatch("supermatrix entry lives on another chart")
                    if not e.has_parity(par):
                        raise GradedError("supermatrix entries violate block parity")

    @property
    def shape(self):
        p, q = len(self.A), len(self.D)
        pc = len(self.A[0]) if self.A else (len(self.C[0]) if self.C else 0)
        qc = len(self.D[0]) if self.D else (len(self.B[0]) if self.B else 0)
        return (p, q), (pc, qc)

    @classmethod
    def identity(cls, chart: Chart, p: int, q: int) -> "SuperMatrix":
        A = [[chart.const(1 if i == j else 0) for j in range(p)] for i in range(p)]
        D = [[chart.const(1 if i == j else 0) for j in range(q)] for i in range(q)]
        return cls(chart, A, _zero_block(chart, p, q), _zero_block(chart, q, p), D)

    def full(self) -> Block:
        top = [ra + rb for ra, rb in zip(self.A, self.B)]
        bottom = [rc + rd for rc, rd in zip(self.C, self.D)]
        return top + bottom

    @classmethod
    def from_full(cls, chart: Chart, M: Block, p: int, q: int, pc: Optional[int] = None,
                  qc: Optional[int] = None) -> "SuperMatrix":
        pc = p if pc is None else pc
        qc = q if qc is None else qc
        A = [row[:pc] for row in M[:p]]
        B = [row[pc:pc + qc] for row in M[:p]]
        C = [row[:pc] for row in M[p:p + q]]
        D = [row[pc:pc + qc] for row in M[p:p + q]]
        return cls(chart, A, B, C, D)

    def __matmul__(self, other: "SuperMatrix") -> "SuperMatrix":
        (p, q), (pc, qc) = self.shape
        (p2, q2), (pc2, qc2) = other.shape
        if (pc, qc) != (p2, q2):
            raise GradedError("supermatrix shapes do not compose")
        prod = matmul(self.full(), other.full(), self.chart)
        return SuperMatrix.from_full(self.chart, prod, p, q, pc2, qc2)


def matmul(X: Block, Y: Block, chart: Chart) -> Block:
    rows, inner = len(X), len(Y)
    cols = len(Y[0]) if Y else 0
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = chart.zero()
            for k in range(inner):
                if X[i][k] and Y[k][j]:
                    acc = acc + X[i][k] * Y[k][j]
            row.append(acc)
        out.append(row)
    return out


def det_commutative(M: Block, chart: Chart) -> GradedElem:
    """Determinant of a square matrix with even (hence commuting) entries.

    Cofactor expansion along rows, memoised on the set of used columns.
    """
    n = len(M)
    if n == 0:
        return chart.one()
    memo = {}

    def minor(row: int, used: int) -> GradedElem:
        if row == n:
            return chart.one()
        key = (row, used)
        hit = memo.get(key)
        if hit is not None:
            return hit
        acc = chart.zero()
        sign = 1
        for col in range(n):
            if used & (1 << col):
                continue
            entry = M[row][col]
            if entry:
                sub = minor(row + 1, used | (1 << col))
                if sub:
                    term = entry * sub
                    acc = acc + term if sign > 0 else acc - term
            sign = -sign
        memo[key] = acc
        return acc

    return minor(0, 0)


def inverse_even_matrix(M: Block, chart: Chart) -> Block:
    """Inverse of a square even matrix whose constant part is invertible."""
    n = len(M)
    aug = [list(row) + [chart.const(1 if i == j else 0) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col].constant_term()), None)
        if pivot is None:
            raise GradedError("matrix is singular at the constant level")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [inv * e for e in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [e - factor * pe for e, pe in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def berezinian(M: SuperMatrix) -> GradedElem:
    """Ber M = det(A - B D^-1 C) * det(D)^-1."""
    (p, q), (pc, qc) = M.shape
    if p != pc or q != qc:
        raise GradedError("Berezinian needs a square supermatrix")
    chart = M.chart
    if q == 0:
        return det_commutative(M.A, chart)
    detD = det_commutative(M.D, chart)
    if not detD.constant_term():
        raise GradedError("odd-odd block is singular")
    if p == 0:
        return detD.inverse()
    Dinv = inverse_even_matrix(M.D, chart)
    BDC = matmul(matmul(M.B, Dinv, chart), M.C, chart)
    schur = [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(M.A, BDC)]
    return det_commutative(schur, chart) * detD.inverse()


def jacobian(psi: ChartMorphism) -> SuperMatrix:
    """Left-derivative Jacobian J[a][b] = d_a (psi^* y^b).

    Rows follow the source coordinates, columns the target coordinates, each
    with even ones first.  With this layout the chain rule reads
    J(phi o psi) = J(psi) * psi^*(J(phi)), so Ber is a cocycle.
    """
    src, tgt = psi.source, psi.target
    rows = [src.coords[i].name for i in src.even_positions + src.odd_positions]
    cols = [tgt.coords[i].name for i in tgt.even_positions + tgt.odd_positions]
    full = [[psi.images[b].left_partial(a) for b in cols] for a in rows]
    return SuperMatrix.from_full(src, full, src.n_even, src.n_odd, tgt.n_even, tgt.n_odd)


def pullback_volume(psi: ChartMorphism, rho: BerezinVolume) -> BerezinVolume:
    """psi^*(s e^g D[y]) = s c e^(psi^* g + log(Ber J / c)) D[x], c the constant of Ber J."""
    if rho.chart != psi.target:
        raise ChartMismatch("volume does not live on the morphism's target chart")
    if psi.source.dim != psi.target.dim:
        raise GradedError("pullback of volumes needs an equidimensional coordinate change")
    ber = berezinian(jacobian(psi))
    c = ber.constant_term()
    if c == 0:
        raise GradedError("coordinate change is not invertible")
    if c < 0:
        raise OrientationError("coordinate change reverses the superorientation")
    log_part = ber.scale(1 / c).log1p_normalised()
    return BerezinVolume(psi.source, rho.scale * c, psi.pullback(rho.logdensity) + log_part)
