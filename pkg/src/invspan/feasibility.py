"""Feasibility test for a subproblem with uniform scaled bounds.

Depending on which of ``u_in`` and ``l_out`` are finite, feasibility is
equivalent to feasibility of one explicit special-form candidate.  Three of
the four candidates need extremal ratios ``m1..m4`` over the family, which
are computed here by enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import DeviationVector, build_deviation, modified_costs, mu, set_cost, set_minus, within_bounds
from .family import DEFAULT_ENUM_CAP
from .rational import NEG_INF, POS_INF, ExtRational, is_finite
from .reduce import SpecLUInstance


@dataclass(frozen=True)
class MValues:
    m1: ExtRational
    m2: ExtRational
    m3: ExtRational
    m4: ExtRational

    @staticmethod
    def _prime(x) -> Fraction:
        return x if is_finite(x) else Fraction(0)

    @property
    def m1p(self) -> Fraction:
        return self._prime(self.m1)

    @property
    def m2p(self) -> Fraction:
        return self._prime(self.m2)

    @property
    def m3p(self) -> Fraction:
        return self._prime(self.m3)

    @property
    def m4p(self) -> Fraction:
        return self._prime(self.m4)


def compute_m_values(sub: SpecLUInstance, cap: int = DEFAULT_ENUM_CAP) -> MValues:
    """Extremal ratios over all members and all cost vectors.

    ``m1`` needs a finite ``u_in`` and ``m2`` a finite ``l_out``; when the
    bound is infinite the corresponding value is reported as +inf / -inf.
    """
    Fs, S0, w = sub.input_solution, sub.S0, sub.weights
    m1, m3 = POS_INF, POS_INF
    m2, m4 = NEG_INF, NEG_INF
    for F in sub.family.enumerate(cap):
        lost = mu(set_minus(Fs, F), S0, w)  # mu(F* \ F)
        new = mu(set_minus(F, Fs), S0, w)  # mu(F \ F*)
        for c in sub.shifted_costs:
            diff = set_cost(c, F) - set_cost(c, Fs)
            if new > 0:
                m3 = min(m3, diff / new)
                if is_finite(sub.u_in):
                    m1 = min(m1, (diff + sub.u_in * lost) / new)
            if lost > 0:
                m4 = max(m4, -diff / lost)
                if is_finite(sub.l_out):
                    m2 = max(m2, (-diff + sub.l_out * new) / lost)
    return MValues(m1, m2, m3, m4)


@dataclass
class Witness:
    feasible: bool
    case: str
    delta: Fraction
    Delta: Fraction
    deviation: DeviationVector
    m: Optional[MValues] = None
    plain_candidate_feasible: Optional[bool] = None


def candidate(sub: SpecLUInstance, cap: int = DEFAULT_ENUM_CAP):
    """The (case, delta, Delta, m-values) of the candidate deviation."""
    fin_in, fin_out = is_finite(sub.u_in), is_finite(sub.l_out)
    if fin_in and fin_out:
        return "a", sub.u_in - sub.l_out, sub.l_out, None
    m = compute_m_values(sub, cap)
    if fin_in:
        return "b", sub.u_in - m.m1p, m.m1p, m
    if fin_out:
        return "c", m.m2p - sub.l_out, sub.l_out, m
    return "d", m.m4p - m.m3p, m.m3p, m


def repaired_candidate_d(sub: SpecLUInstance, m: MValues):
    """A case-(d) candidate that is feasible whenever anything is.

    Take ``Delta <= m3'`` and ``delta + Delta >= max(m4', 0)``, also pushed
    inside the finite bounds ``l_in`` and ``u_out``.  Every member that
    differs from F* outside S0 is then beaten, so only members equal to F*
    outside S0 can still block feasibility.  The plain ``(m4'-m3', m3')``
    choice fails when ``m4' < m3'`` and some member both gains and loses
    elements.
    """
    top = max(m.m4p, Fraction(0), sub.l_in if is_finite(sub.l_in) else Fraction(0))
    bottom = min(m.m3p, sub.u_out if is_finite(sub.u_out) else m.m3p)
    return top - bottom, bottom


def _passes(sub: SpecLUInstance, p, oracle) -> bool:
    if not within_bounds(p, sub.lower, sub.upper):
        return False
    for c in sub.shifted_costs:
        cp = modified_costs(c, p)
        best = oracle.min_cost_member(cp) if oracle is not None else sub.family.min_cost_member(cp)
        if set_cost(cp, sub.input_solution) > best.cost:
            return False
    return True


def feasibility_witness(sub: SpecLUInstance, oracle=None, cap: int = DEFAULT_ENUM_CAP) -> Witness:
    """Decide feasibility of ``sub`` by testing a single candidate deviation."""
    case, delta, Delta, m = candidate(sub, cap)
    p = build_deviation(delta, Delta, sub)
    ok = _passes(sub, p, oracle)
    plain = ok
    if case == "d" and not ok:
        delta, Delta = repaired_candidate_d(sub, m)
        p = build_deviation(delta, Delta, sub)
        ok = _passes(sub, p, oracle)
    return Witness(ok, case, delta, Delta, p, m, plain)
