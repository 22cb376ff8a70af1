"""Built-in verification suite: named formula checks plus the bundled script corpus."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from importlib import resources
from typing import Callable, List, Tuple

from . import brackets as B
from . import constructions as K
from . import modular as MOD
from . import zoo
from .algebra import EVEN, ODD, Chart, Coord
from .berezin import divergence
from .charts import anticotangent, antitangent, star_name
from .geometry import VectorField, apply
from .render import render_elem


@dataclass
class CheckResult:
    name: str
    group: str
    passed: bool
    detail: str = ""
    timing: float = 0.0

    def to_json(self, timing: bool = True) -> dict:
        out = {"name": self.name, "group": self.group, "passed": self.passed, "detail": self.detail}
        if timing:
            out["timing"] = round(self.timing, 6)
        return out


FORMULA_CHECKS: List[Tuple[str, Callable[[], Tuple[bool, str]]]] = []


def formula(name: str):
    def register(fn):
        FORMULA_CHECKS.append((name, fn))
        return fn

    return register


def _eq(lhs, rhs) -> Tuple[bool, str]:
    ok = lhs == rhs
    return ok, render_elem(lhs) if ok else f"{render_elem(lhs)} != {render_elem(rhs)}"


# formula checks ---------------------------------------------------------------


@formula("de Rham differential is unimodular")
def _de_rham():
    reps = [MOD.local_rep(K.de_rham(c)) for c in (zoo.R1, zoo.R2, zoo.R11)]
    return all(r.is_zero() for r in reps), "0 on R^1, R^2, R^(1|1)"


@formula("divergence of theta d/dtheta is -1")
def _odd_euler():
    c = Chart.from_spec([("theta", ODD)], 2)
    X = VectorField(c, {"theta": c.var("theta")})
    return _eq(divergence(X), c.const(-1))


@formula("divergence Leibniz rule")
def _leibniz():
    rng = random.Random(7)
    c = Chart.from_spec([("x", EVEN), ("t1", ODD), ("t2", ODD)], 6)
    rho = zoo.random_volume(c, rng)
    for _ in range(20):
        fp, xp = rng.randint(0, 1), rng.randint(0, 1)
        f = zoo.random_elem(c, rng, fp)
        X = zoo.random_field(c, rng, xp)
        lhs = divergence(X.left_mul(f), rho)
        sign = -1 if fp * xp else 1
        rhs = f * divergence(X, rho) + apply(X, f).scale(sign)
        if lhs != rhs:
            return False, f"{render_elem(lhs)} != {render_elem(rhs)}"
    return True, "20 instances"


@formula("Nijenhuis representative is d tr N")
def _nijenhuis():
    x1, x2 = zoo.R2.vars()
    N = [[x1, zoo.R2.zero()], [zoo.R2.zero(), x1]]
    return _eq(MOD.local_rep(K.nijenhuis_field(N, zoo.R2)), K.trace_differential(N, zoo.R2))


@formula("Lie derivative lift matches its coordinate form")
def _lie_lift():
    Q = K.lie_algebroid(zoo.nonabelian_2d())
    ok = K.lie_derivative_lift(Q) == K.lie_derivative_closed_form(Q)
    return ok, "L_Q = [d, i_Q]"


@formula("lifts are unimodular")
def _lifts():
    fields = zoo.homological_zoo()
    for name, Q in fields:
        L = K.lie_derivative_lift(Q)
        for W in (L, K.de_rham(Q.chart) + L, K.cotangent_lift(Q)):
            if not MOD.local_rep(W).is_zero():
                return False, name
    return True, f"L_Q, d + L_Q, cotangent lift over {len(fields)} zoo fields"


@formula("Mathai-Quillen-Kalkman conjugation")
def _mqk():
    Q = K.lie_algebroid(zoo.nonabelian_2d())
    T = antitangent(Q.chart)
    D = K.de_rham(Q.chart) + K.lie_derivative_lift(Q)
    for mono in MOD.monomial_basis(T, EVEN, 0) + MOD.monomial_basis(T, ODD, 0):
        if K.mqk_conjugate(Q, mono) != apply(D, mono):
            return False, render_elem(mono)
    return True, "all monomials of Pi T(Pi g)"


@formula("cotangent lift is unimodular")
def _cotangent():
    Q = zoo.exact_rep_field()
    return _eq(MOD.local_rep(K.cotangent_lift(Q)), K.cotangent_lift(Q).chart.zero())


@formula("anticotangent lift doubles the representative")
def _factor_two():
    Q = K.lie_algebroid(zoo.nonabelian_2d())
    L = K.anticotangent_lift(Q)
    return _eq(MOD.local_rep(L), MOD.local_rep(Q).rechart(L.chart).scale(2))


@formula("representative is additive on products")
def _additivity():
    Q1 = K.lie_algebroid(zoo.nonabelian_2d())
    Q2 = zoo.exact_rep_field()
    P, Q, renames = K.product(Q1.chart, Q1, Q2.chart, Q2)
    want = (K.lift_to_product(MOD.local_rep(Q1), P) +
            K.lift_to_product(MOD.local_rep(Q2), P, renames))
    return _eq(MOD.local_rep(Q), want)


@formula("anchor reproduces the modular class")
def _anchor():
    for Q in (K.lie_algebroid(zoo.nonabelian_2d()), zoo.exact_rep_field(),
              VectorField(zoo.R11, {"x": zoo.R11.var("t")}, ODD)):
        rep = MOD.relative_rep(K.anchor(Q), Q, K.de_rham(Q.chart))
        if rep != MOD.local_rep(Q):
            return False, render_elem(rep)
    return True, "3 fields"


@formula("inclusion representative is minus a supertrace")
def _inclusion():
    c = Chart.from_spec([("x", EVEN), ("t", ODD), ("y", EVEN), ("s", ODD)], 6)
    x, t, y, s = c.vars()
    Q = VectorField(c, {"x": t, "y": t * y, "s": x * t * s}, ODD)
    rep = MOD.inclusion_rep(Q, ["x", "t"], ["y", "s"])
    A = MOD.linear_normal_part(Q, ["x", "t"], ["y", "s"])
    return _eq(rep, -MOD.supertrace_odd(A))


@formula("Lie algebroid formula")
def _lie_algebroid():
    x = zoo.R1.var("x")
    data = zoo.rank_two_algebroid(1 + x * x, 2 - x)
    return _eq(MOD.local_rep(data.field()), K.lie_algebroid_formula(data))


@formula("L-infinity algebroid formula")
def _l_infinity():
    x = zoo.R1.var("x")
    Q = zoo.odd_l_infinity(1 + x * x, x)
    data = K.AlgebroidData.from_field(Q, ["x"])
    return _eq(MOD.local_rep(Q), K.l_infinity_formula(data))


@formula("Q-algebroid formula")
def _q_algebroid():
    c = Chart.from_spec([("x", EVEN), ("t", ODD), ("xi", ODD)], 4)
    x, t, xi = c.vars()
    d_A = VectorField(c, {"x": x * xi}, ODD)
    Xi = VectorField(c, {"x": x * t}, ODD)
    return _eq(MOD.local_rep(K.q_algebroid_sum(d_A, Xi)), K.q_algebroid_formula(d_A, Xi, ["x", "t"]))


@formula("higher Poisson representative, quadratic part")
def _poisson_quadratic():
    base, P = B.linear_poisson({(1, 2): {2: 1}}, 2, truncation=6)
    coeffs = {2: {("x1", "x2"): base.var("x2")}}
    ok1, d1 = _eq(B.bv_laplacian(P), B.higher_poisson_formula(base, coeffs))
    ok2, d2 = _eq(MOD.local_rep(B.hamiltonian_vf_odd(P)), B.bv_laplacian(P).scale(2))
    return ok1 and ok2, d1 if not ok1 else d2


@formula("higher Poisson representative, order three")
def _poisson_cubic():
    base = Chart.from_spec([("x", EVEN), ("y", EVEN), ("t", ODD)], 6)
    x, y, t = base.vars()
    coeffs = {0: {(): x * y}, 1: {("x",): t * x, ("t",): x * y},
              2: {("x", "y"): x * y, ("x", "t"): t * x, ("t", "t"): x},
              3: {("x", "y", "t"): x + y * y, ("x", "t", "t"): t * y, ("y", "t", "t"): x * t}}
    P = B.higher_poisson(base, coeffs)
    if P.parity != EVEN:
        return False, "P is not even"
    return _eq(B.bv_laplacian(P), B.higher_poisson_formula(base, coeffs))


@formula("BV-Laplacian is half the divergence of Q_P")
def _bv():
    rng = random.Random(3)
    base = Chart.from_spec([("x", EVEN), ("t", ODD)], 4)
    A = anticotangent(base)
    for _ in range(10):
        P = zoo.random_elem(A, rng, EVEN, 2, 4)
        lhs = divergence(B.hamiltonian_vf_odd(P))
        if lhs != B.bv_laplacian(P).scale(2):
            return False, render_elem(P)
    return True, "10 random even P on Pi T*R^(1|1)"


@formula("double Lie algebroid theorem")
def _double():
    fibre = (Coord("v", ODD),)
    tangent = K.lie_algebroid_data(zoo.R1, fibre, {("v", "x"): zoo.R1.one()})
    for data in (tangent, zoo.nonabelian_2d(), zoo.sl2()):
        D = K.double_from_algebroid(data)
        rep = K.double_modular_rep(D)
        if not rep.is_zero() or K.double_formula(D) != rep:
            return False, render_elem(rep)
    return True, "tangent of R^1, aff(1), sl(2)"


@formula("Lie algebra modular classes")
def _lie_classes():
    Q = K.lie_algebroid(zoo.nonabelian_2d())
    rep = MOD.local_rep(Q)
    v = MOD.solve_exactness(rep, Q, 2)
    if rep != -Q.chart.var("xi1") or v.is_exact or not v.complete:
        return False, f"nonabelian: {render_elem(rep)}"
    for data in (zoo.heisenberg(), zoo.abelian(2)):
        Q = K.lie_algebroid(data)
        v = MOD.solve_exactness(MOD.local_rep(Q), Q, 2)
        if not v.is_exact or not v.witness.is_zero():
            return False, "unimodular algebra with nonzero witness"
    return True, "-xi1 (complete), Heisenberg 0, abelian 0"


@formula("linear Poisson structure of aff(1)")
def _linear_poisson():
    base, P = B.linear_poisson({(1, 2): {2: 1}}, 2, truncation=6)
    A = P.chart
    delta = B.bv_laplacian(P)
    v = MOD.solve_exactness(delta, B.hamiltonian_vf_odd(P), 6)
    ok = (B.schouten(P, P).is_zero() and delta == -A.var(star_name("x1")) and not v.is_exact
          and not v.complete)
    return ok, f"Delta P = {render_elem(delta)}, no witness up to degree 6 (incomplete)"


@formula("higher Schouten vanishing")
def _schouten_vanishing():
    base, P = B.linear_poisson({(1, 2): {3: 1}, (1, 3): {2: -1}, (2, 3): {1: 1}}, 3, truncation=4)
    return B.schouten(P, P).is_zero(), "[[P, P]] = 0 for so(3)"


@formula("first-order quantum master equation")
def _qme():
    Q = zoo.exact_rep_field()
    A = anticotangent(Q.chart)
    P = A.zero()
    for n, c in Q.components.items():
        P = P + c.rechart(A) * A.var(star_name(n))
    v = B.solve_first_order_qme(P, 4)
    return v.is_exact, f"P1 = {render_elem(v.witness)}" if v.is_exact else "no P1"


@formula("isomorphic Q-manifolds have matching classes")
def _relative_iso():
    from .geometry import ChartMorphism, is_q_morphism

    c = zoo.R03
    t1, t2, t3 = c.vars()
    # t3 -> t3 + t1 t2 t3 is an automorphism; transport the field along it
    Q = zoo.exact_rep_field()
    psi = ChartMorphism(c, c, {"t1": t1, "t2": t2, "t3": t3 + t1 * t2 * t3})
    inv = ChartMorphism(c, c, {"t1": t1, "t2": t2, "t3": t3 - t1 * t2 * t3})
    Q2 = VectorField(c, {n: inv.pullback(apply(Q, psi.pullback(c.var(n)))) for n in c.names}, ODD)
    if not is_q_morphism(psi, Q, Q2):
        return False, "transported field is not psi-related"
    rel = MOD.relative_rep(psi, Q, Q2)
    v = MOD.solve_exactness(rel, Q, 3)
    return v.is_exact, "relative class vanishes"


# corpus ---------------------------------------------------------------------


def corpus_files():
    root = resources.files("qmodular") / "corpus"
    return sorted((p for p in root.iterdir() if p.name.endswith(".qm")), key=lambda p: p.name)


def check_corpus_file(path) -> List[CheckResult]:
    from .dsl import execute, parse, print_script

    src = path.read_text(encoding="utf-8")
    out = []
    start = time.perf_counter()
    script = parse(src)
    canon = print_script(script)
    stable = canon == src and print_script(parse(canon)) == canon
    out.append(CheckResult(f"{path.name}: canonical round trip", "corpus", stable,
                           "byte-stable" if stable else "fmt output differs from file",
                           time.perf_counter() - start))
    start = time.perf_counter()
    report = execute(script)
    expected_name = path.name[:-3] + ".expected"
    expected_path = path.parent / expected_name
    golden = expected_path.read_text(encoding="utf-8") if expected_path.is_file() else None
    text = report.render_text()
    ok = report.exit_code == 0 and (golden is None or golden == text)
    detail = report.summary()
    msg = f"{detail['passed']}/{detail['assertions']} assertions"
    if golden is not None and golden != text:
        msg += ", report differs from golden file"
    if report.error is not None:
        msg += f", error: {report.error}"
    out.append(CheckResult(f"{path.name}: run", "corpus", ok, msg, time.perf_counter() - start))
    return out


def verify_examples() -> List[CheckResult]:
    results = []
    for name, fn in FORMULA_CHECKS:
        start = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # failures are report content
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, "formula", bool(ok), detail, time.perf_counter() - start))
    for path in corpus_files():
        try:
            results.extend(check_corpus_file(path))
        except Exception as exc:
            results.append(CheckResult(path.name, "corpus", False, f"{type(exc).__name__}: {exc}"))
    return results


def summary(results: List[CheckResult]) -> dict:
    formulas = [r for r in results if r.group == "formula"]
    return {
        "total": len(results),
        "passed": sum(r.passed for r in results),
        "failed": sum(not r.passed for r in results),
        "formula_checks": len(formulas),
        "corpus_checks": len(results) - len(formulas),
    }
