"""Minimum weighted-span inverse optimization under element bounds.

Given a set family with a min-cost oracle, an input member F*, costs,
weights and per-element bounds, find a deviation vector p with
``lower <= p <= upper`` that makes F* optimal for ``c - p`` while keeping
``max w*p - min w*p`` as small as possible.
"""

from .core import DeviationVector, Instance, InstanceError, InternalError, InvspanError, is_feasible_deviation
from .family import DagPathFamily, ExplicitFamily, SpanningTreeFamily
from .io import load_instance
from .minmax import certificate
from .solver import SolveOutcome, solve, solve_multi

__version__ = "0.1.0"

__all__ = [
    "DagPathFamily",
    "DeviationVector",
    "ExplicitFamily",
    "Instance",
    "InstanceError",
    "InternalError",
    "InvspanError",
    "SolveOutcome",
    "SpanningTreeFamily",
    "certificate",
    "is_feasible_deviation",
    "load_instance",
    "solve",
    "solve_multi",
]
