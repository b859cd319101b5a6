"""Core value types and the elementary functionals of the problem.

Everything here is exact: costs, weights and deviations are Fractions and
bounds are extended rationals (see :mod:`invspan.rational`).  Element sets
are tuples of sorted element indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd, lcm
from typing import TYPE_CHECKING, Iterable, Optional, Sequence

from .rational import NEG_INF, POS_INF, ExtRational, is_finite

if TYPE_CHECKING:  # pragma: no cover
    from .family import Family

ElementSet = tuple  # sorted tuple of element indices


class InvspanError(Exception):
    """Base class for user-facing errors raised by the library."""


class InstanceError(InvspanError, ValueError):
    """The instance violates one of its structural invariants."""


class InternalError(InvspanError, AssertionError):
    """An internal invariant was violated; indicates a bug, not bad input."""


def as_set(items: Iterable[int]) -> ElementSet:
    return tuple(sorted(set(items)))


def set_minus(a: Sequence[int], b: Sequence[int]) -> ElementSet:
    bs = set(b)
    return tuple(x for x in a if x not in bs)


def set_inter(a: Sequence[int], b: Sequence[int]) -> ElementSet:
    bs = set(b)
    return tuple(x for x in a if x in bs)


def inverse_weight_scale(weights: Sequence[Fraction]) -> Fraction:
    """Largest rational ``g`` such that every ``(1/w(s)) / g`` is an integer.

    Multiplying all weights by ``g`` makes each ``1/w(s)`` a positive integer,
    which is the normalisation under which the iteration bound is stated.
    """
    inv = [1 / Fraction(x) for x in weights]
    num = reduce(gcd, (q.numerator for q in inv))
    den = reduce(lcm, (q.denominator for q in inv))
    return Fraction(num, den)


@dataclass(frozen=True)
class Instance:
    """A (possibly multi-cost) bound-constrained inverse optimization instance."""

    elements: tuple[str, ...]
    family: "Family"
    input_solution: ElementSet
    costs: tuple[tuple[Fraction, ...], ...]
    weights: tuple[Fraction, ...]
    lower: tuple[ExtRational, ...]
    upper: tuple[ExtRational, ...]

    def __post_init__(self):
        n = len(self.elements)
        if n == 0:
            raise InstanceError("empty instance")
        if len(set(self.elements)) != n:
            raise InstanceError("duplicate element ids")
        if not self.costs:
            raise InstanceError("at least one cost vector is required")
        for c in self.costs:
            if len(c) != n:
                raise InstanceError("cost vector length does not match the ground set")
        if len(self.weights) != n or len(self.lower) != n or len(self.upper) != n:
            raise InstanceError("weights/bounds length does not match the ground set")
        for i, wi in enumerate(self.weights):
            if wi <= 0:
                raise InstanceError(f"weight of {self.elements[i]!r} must be positive")
        for i in range(n):
            lo, hi = self.lower[i], self.upper[i]
            if lo == POS_INF or hi == NEG_INF:
                raise InstanceError(f"bounds of {self.elements[i]!r} must allow a finite value")
            if lo > hi:
                raise InstanceError(f"lower bound exceeds upper bound for {self.elements[i]!r}")
        if any(not 0 <= s < n for s in self.input_solution):
            raise InstanceError("input solution refers to unknown elements")
        if tuple(sorted(set(self.input_solution))) != tuple(self.input_solution):
            raise InstanceError("input solution must be a sorted tuple of distinct indices")
        if not self.family.contains(self.input_solution):
            raise InstanceError("input solution is not a member of the family")

    @property
    def n(self) -> int:
        return len(self.elements)

    @property
    def k(self) -> int:
        return len(self.costs)

    @cached_property
    def in_fstar(self) -> tuple[bool, ...]:
        fs = set(self.input_solution)
        return tuple(i in fs for i in range(self.n))

    @cached_property
    def weight_scale(self) -> Fraction:
        return inverse_weight_scale(self.weights)

    @cached_property
    def inv_weight_norm(self) -> int:
        """``(1/w)(S)`` after canonical rescaling; always a positive integer."""
        total = sum((1 / (self.weight_scale * x) for x in self.weights), Fraction(0))
        assert total.denominator == 1
        return int(total)

    @property
    def unconstrained(self) -> bool:
        return all(x == NEG_INF for x in self.lower) and all(x == POS_INF for x in self.upper)

    def index(self, element_id: str) -> int:
        return self.elements.index(element_id)

    def with_costs(self, costs) -> "Instance":
        return Instance(self.elements, self.family, self.input_solution, tuple(tuple(c) for c in costs),
                        self.weights, self.lower, self.upper)


@dataclass(frozen=True)
class DeviationVector:
    values: tuple[Fraction, ...]
    special_form: Optional[tuple[Fraction, Fraction]] = field(default=None)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]


def weighted_span(p, weights: Sequence[Fraction]) -> Fraction:
    """max w(s)p(s) - min w(s)p(s)."""
    values = p.values if isinstance(p, DeviationVector) else p
    if len(values) == 0:
        raise InstanceError("empty instance")
    scaled = [w * x for w, x in zip(weights, values)]
    return max(scaled) - min(scaled)


def mu(X: Iterable[int], S0: Iterable[int], weights: Sequence[Fraction]) -> Fraction:
    """(1/w)-measure of ``X`` minus the frozen set ``S0``."""
    frozen = set(S0)
    return sum((1 / weights[s] for s in X if s not in frozen), Fraction(0))


def clamp(value: Fraction, lo: ExtRational, hi: ExtRational) -> Fraction:
    if value < lo:
        return lo
    if value > hi:
        return hi
    return value


def special_deviation(delta, Delta, in_fstar, weights, lower, upper) -> DeviationVector:
    """The deviation that moves F* elements to (delta+Delta)/w and the rest to Delta/w, clamped."""
    top = delta + Delta
    vals = []
    for inside, w, lo, hi in zip(in_fstar, weights, lower, upper):
        vals.append(clamp((top if inside else Delta) / w, lo, hi))
    return DeviationVector(tuple(vals), (Fraction(delta), Fraction(Delta)))


def build_deviation(delta: Fraction, Delta: Fraction, inst) -> DeviationVector:
    """Special-form deviation for ``inst`` (an Instance or a SpecLUInstance)."""
    return special_deviation(delta, Delta, inst.in_fstar, inst.weights, inst.lower, inst.upper)


def set_cost(c: Sequence[Fraction], F: Iterable[int]) -> Fraction:
    return sum((c[s] for s in F), Fraction(0))


def modified_costs(c: Sequence[Fraction], p) -> tuple[Fraction, ...]:
    values = p.values if isinstance(p, DeviationVector) else p
    return tuple(a - b for a, b in zip(c, values))


def cost_gap(c, p, Fstar, F) -> Fraction:
    """(c-p)(F*) - (c-p)(F); F* beats F exactly when this is <= 0."""
    cp = modified_costs(c, p)
    return set_cost(cp, Fstar) - set_cost(cp, F)


def within_bounds(p, lower, upper) -> bool:
    values = p.values if isinstance(p, DeviationVector) else p
    return all(lo <= x <= hi for x, lo, hi in zip(values, lower, upper))


def is_feasible_deviation(inst: Instance, p, oracle=None) -> bool:
    """Bounds hold and F* is a minimum-cost member under every ``c^j - p``."""
    if not within_bounds(p, inst.lower, inst.upper):
        return False
    oracle = oracle if oracle is not None else inst.family
    for c in inst.costs:
        cp = modified_costs(c, p)
        best = oracle.min_cost_member(cp)
        if set_cost(cp, inst.input_solution) > best.cost:
            return False
    return True


def finite_or_none(x: ExtRational):
    return x if is_finite(x) else None
