"""A small exact two-phase simplex method over Fractions.

Solves ``min c.z`` subject to rows ``a.z (<=|>=|=) b`` and ``z >= 0``.
Bland's rule prevents cycling, so termination is guaranteed; with exact
arithmetic the result is the true optimum.  Intended for the small
verification LPs of this package, not for speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

ZERO = Fraction(0)


@dataclass
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: Optional[list] = None
    value: Optional[Fraction] = None


def _pivot(T, basis, r, col):
    row = T[r]
    pv = row[col]
    if pv != 1:
        row[:] = [v / pv for v in row]
    nz = [j for j, v in enumerate(row) if v != 0]
    for i, other in enumerate(T):
        if i == r:
            continue
        f = other[col]
        if f != 0:
            for j in nz:
                other[j] -= f * row[j]
    basis[r] = col


def _optimize(T, basis, obj, allowed):
    """Minimise ``obj`` (a reduced-cost row, last entry = -value) by Bland's rule."""
    m = len(T)
    while True:
        col = next((j for j in allowed if obj[j] < 0), None)
        if col is None:
            return "optimal"
        best = None
        for i in range(m):
            a = T[i][col]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded"
        r = best[1]
        _pivot(T + [obj], basis + [-1], r, col)
        basis[r] = col


def linprog(c: Sequence, rows: Sequence[Sequence], senses: Sequence[str], rhs: Sequence) -> LPResult:
    nvar = len(c)
    m = len(rows)
    A = [[Fraction(v) for v in r] for r in rows]
    b = [Fraction(v) for v in rhs]
    sense = list(senses)
    for i in range(m):
        if b[i] < 0:
            A[i] = [-v for v in A[i]]
            b[i] = -b[i]
            sense[i] = {"<=": ">=", ">=": "<=", "=": "="}[sense[i]]
    n_slack = sum(1 for s in sense if s != "=")
    n_art = sum(1 for s in sense if s != "<=")
    width = nvar + n_slack + n_art
    T, basis = [], []
    si, ai = nvar, nvar + n_slack
    art_cols = []
    for i in range(m):
        row = A[i] + [ZERO] * (n_slack + n_art) + [b[i]]
        if sense[i] == "<=":
            row[si] = Fraction(1)
            basis.append(si)
            si += 1
        else:
            if sense[i] == ">=":
                row[si] = Fraction(-1)
                si += 1
            row[ai] = Fraction(1)
            basis.append(ai)
            art_cols.append(ai)
            ai += 1
        T.append(row)

    # phase one: drive the artificial variables to zero
    obj = [ZERO] * (width + 1)
    for col in art_cols:
        obj[col] = Fraction(1)
    for i in range(m):
        if basis[i] in art_cols:
            obj = [o - v for o, v in zip(obj, T[i])]
    _optimize(T, basis, obj, range(width))
    if -obj[-1] > 0:
        return LPResult("infeasible")
    art = set(art_cols)
    for i in reversed(range(len(T))):
        if basis[i] in art:
            col = next((j for j in range(nvar + n_slack) if T[i][j] != 0), None)
            if col is None:
                del T[i]
                del basis[i]
            else:
                _pivot(T, basis, i, col)
    keep = nvar + n_slack
    T = [row[:keep] + [row[-1]] for row in T]

    # phase two
    obj = [Fraction(v) for v in c] + [ZERO] * n_slack + [ZERO]
    for i, bcol in enumerate(basis):
        f = obj[bcol]
        if f != 0:
            obj = [o - f * v for o, v in zip(obj, T[i])]
    status = _optimize(T, basis, obj, range(keep))
    if status == "unbounded":
        return LPResult("unbounded")
    x = [ZERO] * keep
    for i, bcol in enumerate(basis):
        x[bcol] = T[i][-1]
    return LPResult("optimal", x[:nvar], -obj[-1])
