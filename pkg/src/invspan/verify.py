"""Brute-force verifiers that do not use the Newton-type solver.

``lp_span_full`` writes down the whole linear program over ``p`` (one
constraint per family member and cost vector) and solves it with the exact
simplex in :mod:`invspan.simplex`.

``lp_span_reduced`` only searches special-form vectors.  With ``x = Delta``
and ``y = delta + Delta`` the clamped vector is affine in ``(x, y)`` on every
cell of a grid cut at the breakpoints ``w*l`` and ``w*u``, so each cell is a
two-variable LP.  The cell LPs are solved exactly by eliminating ``x``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .core import (
    DeviationVector,
    Instance,
    InvspanError,
    is_feasible_deviation,
    set_cost,
    set_minus,
    weighted_span,
)
from .family import DEFAULT_ENUM_CAP
from .rational import NEG_INF, POS_INF, fmt, is_finite
from .simplex import linprog


class VerifyError(InvspanError, ValueError):
    pass


@dataclass
class LPOutcome:
    status: str  # "optimal" or "infeasible"
    span: Optional[Fraction] = None
    d: Optional[Fraction] = None
    D: Optional[Fraction] = None
    deviation: Optional[DeviationVector] = None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def _gap_rows(inst: Instance, members):
    """(F* minus F, F minus F*, rhs) for every member F != F* and cost vector."""
    Fs = inst.input_solution
    rows = set()
    for F in members:
        if F == Fs:
            continue
        only_star, only_f = set_minus(Fs, F), set_minus(F, Fs)
        for c in inst.costs:
            rows.add((only_star, only_f, set_cost(c, Fs) - set_cost(c, F)))
    return sorted(rows)


def lp_span_full(inst: Instance, cap: int = DEFAULT_ENUM_CAP, max_n: int = 8) -> LPOutcome:
    """Minimum weighted span over all deviation vectors, by an exact LP."""
    if inst.n > max_n:
        raise VerifyError(f"instance too large for the full LP (n = {inst.n} > {max_n})")
    n = inst.n
    members = inst.family.enumerate(cap)
    # columns: p+ (n), p- (n), tmax+, tmax-, tmin+, tmin-
    width = 2 * n + 4
    TMAX, TMIN = 2 * n, 2 * n + 2

    def var(coeffs):
        row = [Fraction(0)] * width
        for s, a in coeffs.get("p", {}).items():
            row[s] += a
            row[n + s] -= a
        for name, col in (("tmax", TMAX), ("tmin", TMIN)):
            if name in coeffs:
                row[col] += coeffs[name]
                row[col + 1] -= coeffs[name]
        return row

    rows, senses, rhs = [], [], []
    for only_star, only_f, gap in _gap_rows(inst, members):
        p = {s: Fraction(1) for s in only_star}
        p.update({s: Fraction(-1) for s in only_f})
        rows.append(var({"p": p}))
        senses.append(">=")
        rhs.append(gap)
    for s in range(n):
        w = inst.weights[s]
        rows.append(var({"p": {s: w}, "tmax": Fraction(-1)}))
        senses.append("<=")
        rhs.append(0)
        rows.append(var({"p": {s: -w}, "tmin": Fraction(1)}))
        senses.append("<=")
        rhs.append(0)
        if is_finite(inst.lower[s]):
            rows.append(var({"p": {s: Fraction(1)}}))
            senses.append(">=")
            rhs.append(inst.lower[s])
        if is_finite(inst.upper[s]):
            rows.append(var({"p": {s: Fraction(1)}}))
            senses.append("<=")
            rhs.append(inst.upper[s])
    cost = var({"tmax": Fraction(1), "tmin": Fraction(-1)})
    res = linprog(cost, rows, senses, rhs)
    if res.status == "infeasible":
        return LPOutcome("infeasible")
    if res.status != "optimal":
        raise VerifyError("span LP unexpectedly unbounded")
    p = DeviationVector(tuple(res.x[s] - res.x[n + s] for s in range(n)))
    span = weighted_span(p, inst.weights)
    if span != res.value:
        raise VerifyError("LP optimum does not match the span of its solution")
    return LPOutcome("optimal", span, deviation=p)


def _cuts(values):
    pts = sorted({v for v in values if is_finite(v)})
    edges = [NEG_INF] + pts + [POS_INF]
    return [(a, b) for a, b in zip(edges, edges[1:])]


def _clamp_form(w, lo, hi, cell):
    """How ``clamp(v / w, lo, hi)`` behaves for ``v`` in ``cell``: ("var", 1/w) or ("fix", value)."""
    a, b = cell
    if is_finite(hi) and w * hi <= a:
        return ("fix", hi)
    if is_finite(lo) and w * lo >= b:
        return ("fix", lo)
    if (w * lo <= a) and (w * hi >= b):
        return ("var", 1 / w)
    raise VerifyError("clamp is not constant on a cell")


def _solve_cell(constraints):
    """min t over alpha*t + beta*x >= b.  Returns (t, x) or None."""
    lowers, uppers, one_d = [], [], []
    for alpha, beta, b in constraints:
        if beta > 0:
            lowers.append((alpha, beta, b))
        elif beta < 0:
            uppers.append((alpha, beta, b))
        else:
            one_d.append((alpha, b))
    for al, bl, cl in lowers:
        for au, bu, cu in uppers:
            one_d.append((al / bl - au / bu, cl / bl - cu / bu))
    t_lo, t_hi = NEG_INF, POS_INF
    for g, e in one_d:
        if g > 0:
            t_lo = max(t_lo, e / g)
        elif g < 0:
            t_hi = min(t_hi, e / g)
        elif e > 0:
            return None
    if t_lo > t_hi or not is_finite(t_lo):
        return None
    t = t_lo
    x_lo = max([(c - a * t) / b for a, b, c in lowers], default=NEG_INF)
    x_hi = min([(c - a * t) / b for a, b, c in uppers], default=POS_INF)
    if x_lo > x_hi:
        return None
    x = x_lo if is_finite(x_lo) else (x_hi if is_finite(x_hi) else Fraction(0))
    return t, x


def lp_span_reduced(inst: Instance, cap: int = DEFAULT_ENUM_CAP) -> LPOutcome:
    """Minimum span over special-form deviation vectors, cell by cell."""
    members = inst.family.enumerate(cap)
    rows = _gap_rows(inst, members)
    w, lo, hi, inside = inst.weights, inst.lower, inst.upper, inst.in_fstar
    in_pts = [w[s] * v for s in range(inst.n) if inside[s] for v in (lo[s], hi[s])]
    out_pts = [w[s] * v for s in range(inst.n) if not inside[s] for v in (lo[s], hi[s])]
    top_lower = max(w[s] * lo[s] for s in range(inst.n))
    bottom_upper = min(w[s] * hi[s] for s in range(inst.n))
    best = None
    for xcell in _cuts(out_pts):
        for ycell in _cuts(in_pts):
            if ycell[1] < xcell[0]:
                continue
            forms = [_clamp_form(w[s], lo[s], hi[s], ycell if inside[s] else xcell) for s in range(inst.n)]
            cons = [(Fraction(1), Fraction(0), Fraction(0))]  # t >= 0
            # keep every clamped value inside [x, y]: y >= max w*l and x <= min w*u
            if is_finite(top_lower):
                cons.append((Fraction(1), Fraction(1), top_lower))
            if is_finite(bottom_upper):
                cons.append((Fraction(0), Fraction(-1), -bottom_upper))
            for bound, sign, on_y in ((xcell[0], 1, False), (xcell[1], -1, False), (ycell[0], 1, True), (ycell[1], -1, True)):
                if is_finite(bound):
                    cons.append((Fraction(sign) if on_y else Fraction(0), Fraction(sign), sign * bound))
            for only_star, only_f, gap in rows:
                # p(F* \ F) - p(F \ F*) >= gap, written as a_y*y + a_x*x >= rhs
                a_y, a_x, rhs = Fraction(0), Fraction(0), gap
                for s, sgn in [(s, 1) for s in only_star] + [(s, -1) for s in only_f]:
                    kind, val = forms[s]
                    if kind == "fix":
                        rhs -= sgn * val
                    elif inside[s]:
                        a_y += sgn * val
                    else:
                        a_x += sgn * val
                cons.append((a_y, a_y + a_x, rhs))
            sol = _solve_cell(cons)
            if sol is None:
                continue
            t, x = sol
            if best is None or t < best[0]:
                best = (t, x, xcell, ycell)
    if best is None:
        return LPOutcome("infeasible")
    t, x, _, _ = best
    p = DeviationVector(tuple(
        min(max(((t + x) if inside[s] else x) / w[s], lo[s]), hi[s]) for s in range(inst.n)), (t, x))
    return LPOutcome("optimal", t, t, x, p)


@dataclass
class Report:
    ok: bool = True
    checks: list = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = ""):
        self.checks.append({"check": name, "ok": bool(ok), "detail": detail})
        self.ok = self.ok and bool(ok)

    def to_json(self) -> dict:
        return {"ok": self.ok, "checks": self.checks}


def cross_check(inst: Instance, outcome, full: Optional[bool] = None, reduced: bool = True,
                cap: int = DEFAULT_ENUM_CAP) -> Report:
    """Compare a solver outcome with the brute-force verifiers."""
    rep = Report()
    if outcome.optimal:
        p = outcome.deviation
        rep.add("deviation feasible", is_feasible_deviation(inst, p))
        actual = weighted_span(p, inst.weights)
        rep.add("reported span matches deviation", actual == outcome.span,
                f"reported {fmt(outcome.span)}, actual {fmt(actual)}")
    if full is None:
        full = inst.n <= 6
    refs = []
    if reduced:
        refs.append(("reduced LP", lp_span_reduced(inst, cap)))
    if full:
        refs.append(("full LP", lp_span_full(inst, cap)))
    for name, ref in refs:
        same_status = ref.status == outcome.status
        rep.add(f"{name} status", same_status, f"solver {outcome.status}, {name} {ref.status}")
        if same_status and ref.optimal:
            rep.add(f"{name} span", ref.span == outcome.span,
                    f"solver {fmt(outcome.span)}, {name} {fmt(ref.span)}")
    return rep
