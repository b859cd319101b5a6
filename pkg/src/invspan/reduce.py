"""Split a bounded instance into subproblems with uniform scaled bounds.

An optimal deviation can be taken of the form ``p^{delta,Delta}``.  Writing
``x = Delta`` and ``y = delta + Delta``, the clamping pattern of every element
is constant while ``x`` stays between two consecutive breakpoints ``w*l`` of
the elements outside F* and ``y`` between two consecutive breakpoints ``w*u``
of the elements of F*.  Each pair of such intervals gives a subproblem where

* elements whose clamp is forced are frozen at their bound, collected in
  ``S0`` and their fixed deviation is absorbed into the costs, and
* all other elements share uniform scaled bounds ``l_in <= y <= u_in`` and
  ``l_out <= x <= u_out``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional

from .core import DeviationVector, ElementSet, Instance, InternalError, clamp, within_bounds
from .rational import NEG_INF, POS_INF, ExtRational


@dataclass(frozen=True)
class Interval:
    lo: ExtRational
    hi: ExtRational

    @property
    def empty(self) -> bool:
        return self.lo > self.hi

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi


@dataclass(frozen=True)
class IntervalPair:
    delta_interval: Interval  # range of Delta
    sum_interval: Interval  # range of delta + Delta
    index: int = 0


@dataclass(frozen=True)
class NormalizedBounds:
    """Bounds after tightening by the two global extremes, plus the element order.

    ``upper_min`` is ``min w(s)u(s)`` and ``lower_max`` is ``max w(s)l(s)``
    over all elements.  Every optimal special-form deviation has
    ``Delta <= upper_min`` and ``delta + Delta >= lower_max``.
    """

    lower: tuple[ExtRational, ...]
    upper: tuple[ExtRational, ...]
    order: tuple[int, ...]
    upper_min: ExtRational
    lower_max: ExtRational
    collapsed: tuple[int, ...]


def normalize_bounds_and_order(inst: Instance) -> NormalizedBounds:
    w = inst.weights
    U = min(w[s] * inst.upper[s] for s in range(inst.n))
    L = max(w[s] * inst.lower[s] for s in range(inst.n))
    lower, upper, collapsed = list(inst.lower), list(inst.upper), []
    for s in range(inst.n):
        if inst.in_fstar[s]:
            lo = max(inst.lower[s], L / w[s])
            if lo > inst.upper[s]:
                collapsed.append(s)
                lo = inst.upper[s]
            lower[s] = lo
        else:
            hi = min(inst.upper[s], U / w[s])
            if hi < inst.lower[s]:
                collapsed.append(s)
                hi = inst.lower[s]
            upper[s] = hi
    inside = sorted((s for s in range(inst.n) if inst.in_fstar[s]), key=lambda s: (-(w[s] * upper[s]) if upper[s] != POS_INF else NEG_INF, s))
    outside = sorted((s for s in range(inst.n) if not inst.in_fstar[s]), key=lambda s: (-(w[s] * lower[s]) if lower[s] != NEG_INF else POS_INF, s))
    return NormalizedBounds(tuple(lower), tuple(upper), tuple(inside + outside), U, L, tuple(collapsed))


def _split(lo: ExtRational, hi: ExtRational, points) -> list[Interval]:
    cuts = sorted({p for p in points if lo < p < hi})
    edges = [lo] + cuts + [hi]
    return [Interval(a, b) for a, b in zip(edges, edges[1:])]


def candidate_intervals(inst: Instance, norm: Optional[NormalizedBounds] = None):
    """Return ``(delta_intervals, sum_intervals)`` covering all relevant ``(Delta, delta+Delta)``."""
    norm = norm or normalize_bounds_and_order(inst)
    w = inst.weights
    U, L = norm.upper_min, norm.lower_max
    tops = [w[s] * inst.upper[s] for s in range(inst.n) if inst.in_fstar[s]]
    bottoms = [w[s] * inst.lower[s] for s in range(inst.n) if not inst.in_fstar[s]]
    if tops:
        sum_ivs = _split(L, max(max(tops), L), tops)
    else:
        sum_ivs = [Interval(L, POS_INF)]
    if bottoms:
        delta_ivs = _split(min(min(bottoms), U), U, bottoms)
    else:
        delta_ivs = [Interval(NEG_INF, U)]
    return delta_ivs, sum_ivs


def interval_pairs(inst: Instance, norm: Optional[NormalizedBounds] = None) -> list[IntervalPair]:
    """All non-empty pairs, clipped so that ``Delta <= delta + Delta`` is possible."""
    delta_ivs, sum_ivs = candidate_intervals(inst, norm)
    out = []
    for I in delta_ivs:
        for J in sum_ivs:
            I2 = Interval(I.lo, min(I.hi, J.hi))
            J2 = Interval(max(J.lo, I.lo), J.hi)
            if I2.empty or J2.empty:
                continue
            out.append(IntervalPair(I2, J2, len(out)))
    return out


@dataclass(frozen=True)
class SpecLUInstance:
    base: Instance
    S0: ElementSet
    fixed_values: dict
    l_in: ExtRational
    u_in: ExtRational
    l_out: ExtRational
    u_out: ExtRational
    shifted_costs: tuple[tuple[Fraction, ...], ...]
    interval: Optional[IntervalPair] = None

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def weights(self):
        return self.base.weights

    @property
    def in_fstar(self):
        return self.base.in_fstar

    @property
    def input_solution(self) -> ElementSet:
        return self.base.input_solution

    @property
    def family(self):
        return self.base.family

    @cached_property
    def _frozen(self) -> frozenset:
        return frozenset(self.S0)

    @cached_property
    def lower(self) -> tuple:
        return tuple(Fraction(0) if s in self._frozen else (self.l_in if self.in_fstar[s] else self.l_out) / self.weights[s]
                     for s in range(self.n))

    @cached_property
    def upper(self) -> tuple:
        return tuple(Fraction(0) if s in self._frozen else (self.u_in if self.in_fstar[s] else self.u_out) / self.weights[s]
                     for s in range(self.n))


def check_speclu(sub: SpecLUInstance) -> None:
    """Assert the uniform-bound conditions that the subproblem solver relies on."""
    problems = []
    if not sub.l_in <= sub.u_in:
        problems.append("l_in > u_in")
    if not sub.l_out <= sub.u_out:
        problems.append("l_out > u_out")
    if not sub.l_out <= sub.l_in:
        problems.append("l_out > l_in")
    if not sub.u_out <= sub.u_in:
        problems.append("u_out > u_in")
    for s in sub.S0:
        v = sub.weights[s] * sub.fixed_values[s]
        if not sub.u_out <= v <= sub.l_in:
            problems.append(f"frozen element {s} outside [u_out, l_in]")
    if problems:
        raise InternalError("bound normalization violated: " + "; ".join(problems))


def build_subproblem(inst: Instance, pair: IntervalPair) -> SpecLUInstance:
    I, J = pair.delta_interval, pair.sum_interval
    w = inst.weights
    fixed = {}
    for s in range(inst.n):
        if inst.in_fstar[s]:
            if w[s] * inst.upper[s] <= J.lo:
                fixed[s] = inst.upper[s]
        elif w[s] * inst.lower[s] >= I.hi:
            fixed[s] = inst.lower[s]
    shifted = tuple(tuple(c[s] - fixed[s] if s in fixed else c[s] for s in range(inst.n)) for c in inst.costs)
    sub = SpecLUInstance(inst, tuple(sorted(fixed)), fixed, J.lo, J.hi, I.lo, I.hi, shifted, pair)
    check_speclu(sub)
    return sub


def uniform_subproblem(inst: Instance, l_in=NEG_INF, u_in=POS_INF, l_out=NEG_INF, u_out=POS_INF) -> SpecLUInstance:
    """A subproblem with no frozen elements and the given uniform scaled bounds."""
    sub = SpecLUInstance(inst, (), {}, l_in, u_in, l_out, u_out, inst.costs, None)
    check_speclu(sub)
    return sub


def lift_solution(sub: SpecLUInstance, d: Fraction, D: Fraction) -> DeviationVector:
    values = []
    for s in range(sub.n):
        if s in sub.fixed_values:
            values.append(sub.fixed_values[s])
        else:
            top = d + D if sub.in_fstar[s] else D
            values.append(clamp(top / sub.weights[s], sub.lower[s], sub.upper[s]))
    p = DeviationVector(tuple(values), (Fraction(d), Fraction(D)))
    if not within_bounds(p, sub.base.lower, sub.base.upper):
        raise InternalError("lifted deviation violates the original bounds")
    return p
