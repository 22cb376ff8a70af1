from __future__ import annotations

import os
import random
import sys

from hypothesis import HealthCheck, settings, strategies as st

from qmodular.algebra import EVEN, GradedElem
from qmodular.geometry import ChartMorphism
from qmodular.zoo import random_elem

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], max_examples=60)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def rng_for(seed: int) -> random.Random:
    return random.Random(seed)


def random_endomorphism(rng: random.Random, chart, max_degree: int = 2, n_terms: int = 3) -> ChartMorphism:
    """Random chart endomorphism that respects truncation.

    Every term of an even image keeps an even factor; constants or purely odd
    terms would move dropped degrees back below the cut.
    """
    images = {}
    for co in chart.coords:
        f = random_elem(chart, rng, co.parity, max_degree, n_terms)
        if co.parity == EVEN:
            f = GradedElem(chart, {m: v for m, v in f.terms.items() if sum(m[0])})
        images[co.name] = f
    return ChartMorphism(chart, chart, images)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[number])
