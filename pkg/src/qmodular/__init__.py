"""Exact computation of modular classes of Q-manifolds."""

from .algebra import EVEN, ODD, Chart, ChartMismatch, Coord, GradedElem, GradedError
from .berezin import BerezinVolume, berezinian, divergence, jacobian, pullback_volume
from .brackets import bv_laplacian, hamiltonian_vf_odd, poisson, schouten
from .geometry import ChartMorphism, VectorField, apply, bracket, is_homological
from .modular import Exact, NoWitnessUpToDegree, local_rep, modular_rep, solve_exactness

__all__ = [
    "EVEN", "ODD", "BerezinVolume", "Chart", "ChartMismatch", "ChartMorphism", "Coord", "Exact",
    "GradedElem", "GradedError", "NoWitnessUpToDegree", "VectorField", "apply", "berezinian",
    "bracket", "bv_laplacian", "divergence", "hamiltonian_vf_odd", "is_homological", "jacobian",
    "local_rep", "modular_rep", "poisson", "pullback_volume", "schouten", "solve_exactness",
]
