"""Min-max certificate for the unconstrained problem.

Without bounds the minimum span equals ``max(0, omega1, omega2)`` where
``omega1`` ranges over members of the same ``1/w``-size as F* and
``omega2`` over (smaller, larger) member pairs.  The certificate also
builds the matching optimal deviation vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import DeviationVector, Instance, InstanceError, InternalError, is_feasible_deviation, set_cost, set_minus
from .family import DEFAULT_ENUM_CAP
from .rational import NEG_INF, ExtRational, fmt


def _size(X, w) -> Fraction:
    return sum((1 / w[s] for s in X), Fraction(0))


@dataclass
class MinMaxCertificate:
    omega1: ExtRational
    omega2: ExtRational
    value: Fraction
    d: Fraction
    D: Fraction
    deviation: DeviationVector
    omega1_witness: Optional[tuple] = None  # (j, F'')
    omega2_witness: Optional[tuple] = None  # (j1, F', j2, F''')

    def to_json(self, inst: Instance) -> dict:
        ids = inst.elements

        def names(F):
            return [ids[i] for i in F]

        out = {
            "omega1": fmt(self.omega1),
            "omega2": fmt(self.omega2),
            "value": fmt(self.value),
            "d": fmt(self.d),
            "D": fmt(self.D),
            "deviation": {e: fmt(v) for e, v in zip(ids, self.deviation.values)},
        }
        if self.omega1_witness:
            j, F = self.omega1_witness
            out["omega1_witness"] = {"cost_index": j, "set": names(F)}
        if self.omega2_witness:
            j1, A, j2, B = self.omega2_witness
            out["omega2_witness"] = {"small": {"cost_index": j1, "set": names(A)},
                                     "large": {"cost_index": j2, "set": names(B)}}
        return out


def certificate(inst: Instance, cap: int = DEFAULT_ENUM_CAP) -> MinMaxCertificate:
    if not inst.unconstrained:
        raise InstanceError("certificate requires unconstrained bounds")
    w, Fs = inst.weights, inst.input_solution
    star = _size(Fs, w)
    members = [F for F in inst.family.enumerate(cap) if F != Fs]
    small = [F for F in members if _size(F, w) < star]
    equal = [F for F in members if _size(F, w) == star]
    large = [F for F in members if _size(F, w) > star]

    def gap(j, F):
        c = inst.costs[j]
        return set_cost(c, Fs) - set_cost(c, F)

    def lost(F):
        return _size(set_minus(Fs, F), w)

    omega1, wit1 = NEG_INF, None
    for j in range(inst.k):
        for F in equal:
            v = gap(j, F) / lost(F)
            if v > omega1:
                omega1, wit1 = v, (j, F)

    omega2, wit2 = NEG_INF, None
    for A in small:
        da = star - _size(A, w)
        for B in large:
            db = star - _size(B, w)
            den = lost(A) / da - lost(B) / db
            for j1 in range(inst.k):
                for j2 in range(inst.k):
                    v = (gap(j1, A) / da - gap(j2, B) / db) / den
                    if v > omega2:
                        omega2, wit2 = v, (j1, A, j2, B)

    d = max(Fraction(0), omega1, omega2)
    if small:
        D = max((gap(j, F) - d * lost(F)) / (star - _size(F, w)) for j in range(inst.k) for F in small)
    elif large:
        D = min((gap(j, F) - d * lost(F)) / (star - _size(F, w)) for j in range(inst.k) for F in large)
    else:
        D = Fraction(0)
    p = DeviationVector(tuple(((d + D) if inst.in_fstar[s] else D) / w[s] for s in range(inst.n)), (d, D))
    if not is_feasible_deviation(inst, p):
        raise InternalError("min-max witness deviation is not feasible")
    return MinMaxCertificate(omega1, omega2, d, d, D, p, wit1, wit2)
