"""Randomised sweep of the divergence and bracket laws with a pass count per law.

    python3 scripts/law_sweep.py [--n 500] [--seed 0] [--max-even 3] [--max-odd 3] [--truncation 6]
"""

from __future__ import annotations

import argparse
import random
from collections import Counter

from qmodular import brackets as B
from qmodular import zoo
from qmodular.algebra import EVEN
from qmodular.berezin import divergence
from qmodular.charts import anticotangent, cotangent
from qmodular.geometry import apply, bracket


def _sign(k):
    return -1 if k % 2 else 1


def sweep(n: int, seed: int, max_even: int, max_odd: int, truncation: int) -> Counter:
    rng = random.Random(seed)
    passed = Counter()
    for _ in range(n):
        c = zoo.random_chart(rng, max_even, max_odd, truncation)
        rho = zoo.random_volume(c, rng)
        fp, xp, yp, zp = (rng.randint(0, 1) for _ in range(4))
        f = zoo.random_elem(c, rng, fp)
        X, Y, Z = (zoo.random_field(c, rng, p) for p in (xp, yp, zp))
        g = zoo.random_elem(c, rng, EVEN)
        g = g - c.const(g.constant_term())
        passed["div leibniz"] += divergence(X.left_mul(f), rho) == (
            f * divergence(X, rho) + apply(X, f).scale(_sign(fp * xp)))
        passed["div volume change"] += divergence(X, rho.times_exp(g)) == divergence(X, rho) + apply(X, g)
        passed["div commutator"] += divergence(bracket(X, Y), rho) == (
            apply(X, divergence(Y, rho)) - apply(Y, divergence(X, rho)).scale(_sign(xp * yp)))
        passed["field jacobi"] += bracket(X, bracket(Y, Z)) == (
            bracket(bracket(X, Y), Z) + bracket(Y, bracket(X, Z)).scale(_sign(xp * yp)))
        C = cotangent(c)
        F, G, H = (zoo.random_elem(C, rng, p, 2, 2) for p in (fp, xp, yp))
        passed["poisson jacobi"] += B.poisson(F, B.poisson(G, H)) == (
            B.poisson(B.poisson(F, G), H) + B.poisson(G, B.poisson(F, H)).scale(_sign(fp * xp)))
        A = anticotangent(c)
        F, G, H = (zoo.random_elem(A, rng, p, 2, 2) for p in (fp, xp, yp))
        passed["schouten jacobi"] += B.schouten(F, B.schouten(G, H)) == (
            B.schouten(B.schouten(F, G), H)
            + B.schouten(G, B.schouten(F, H)).scale(_sign((fp + 1) * (xp + 1))))
    return passed


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-even", type=int, default=3)
    ap.add_argument("--max-odd", type=int, default=3)
    ap.add_argument("--truncation", type=int, default=6)
    args = ap.parse_args()
    passed = sweep(args.n, args.seed, args.max_even, args.max_odd, args.truncation)
    for law, count in passed.items():
        print(f"{law:<18} {count}/{args.n}")
    raise SystemExit(0 if all(v == args.n for v in passed.values()) else 1)


if __name__ == "__main__":
    main()
