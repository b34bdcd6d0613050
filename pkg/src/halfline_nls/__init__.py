"""Exact tau-periodic half-line NLS solutions via spectral dressing.

Pipeline: boundary pair -> Floquet monodromy -> spectral quotients ->
admissibility gates -> scalar Riemann-Hilbert data -> pole-only dressing ->
explicit solution, with closed forms and a black-box verifier alongside.
"""

from .closedform import ExponentialTriple, Family, Verdict, classify
from .dressing import DressedSolution
from .pairs import PeriodicPair
from .scalarfuncs import PoleData, ScalarFunctions

__all__ = [
    "ExponentialTriple",
    "Family",
    "Verdict",
    "classify",
    "DressedSolution",
    "PeriodicPair",
    "PoleData",
    "ScalarFunctions",
]

__version__ = "0.1.0"
