"""Graded-symmetric index tuples and the Koszul sign of reordering them."""

from __future__ import annotations

import itertools
from math import factorial
from typing import Dict, Mapping, Sequence, Tuple

from .algebra import GradedElem


def koszul_sign(parities: Sequence[int], perm: Sequence[int]) -> int:
    """Sign picked up when objects of the given parities are reordered by `perm`.

    `perm[k]` is the old position of the object that ends up in slot k.
    """
    sign = 1
    n = len(perm)
    for i in range(n):
        for j in range(i + 1, n):
            if perm[i] > perm[j] and parities[perm[i]] and parities[perm[j]]:
                sign = -sign
    return sign


def symmetrise(components: Mapping[Tuple[str, ...], GradedElem], parity_of) -> Dict[Tuple[str, ...], GradedElem]:
    """Fill in every reordering of each key with its graded-symmetry sign.

    Swapping two adjacent indices of parities p, q multiplies the component by
    (-1)^{pq}.  A table may list several orderings of the same index set as
    long as they agree; a repeated odd index forces the component to vanish.
    """
    out: Dict[Tuple[str, ...], GradedElem] = {}
    for key, val in components.items():
        if val.is_zero():
            continue
        if any(parity_of(a) and key.count(a) > 1 for a in key):
            raise ValueError(f"component {key} repeats an odd index but is nonzero")
        pars = [parity_of(k) for k in key]
        for perm in set(itertools.permutations(range(len(key)))):
            new = tuple(key[i] for i in perm)
            v = val if koszul_sign(pars, perm) > 0 else -val
            prev = out.get(new)
            if prev is not None and prev != v:
                raise ValueError(f"components {key} and {new} violate graded symmetry")
            out[new] = v
    return out


def inv_factorial(n: int):
    from fractions import Fraction

    return Fraction(1, factorial(n))
