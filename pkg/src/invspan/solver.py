"""Newton-type solver for the weighted-span inverse problem.

:func:`solve_speclu` runs the bad-set elimination loop on one subproblem
with uniform scaled bounds.  :func:`solve` and :func:`solve_multi` split a
general instance into such subproblems (see :mod:`invspan.reduce`), solve
each one and keep the best.

Every quantity is an exact rational and every branch condition is evaluated
with exact ``<``/``<=``, so the sequence of cases is reproducible.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .core import (
    DeviationVector,
    ElementSet,
    Instance,
    InstanceError,
    InternalError,
    InvspanError,
    build_deviation,
    is_feasible_deviation,
    modified_costs,
    mu,
    set_cost,
    set_inter,
    set_minus,
    weighted_span,
)
from .family import CountingOracle
from .rational import fmt, is_finite
from .reduce import SpecLUInstance, build_subproblem, interval_pairs, lift_solution

INFEASIBLE_CASES = frozenset(
    {"1.2.2", "2.1.2.2", "2.2.2.2", "3.1.2.2", "3.2.2.2", "4.1.2.2", "4.2.2.2", "5.1.2.2", "5.2.2.2"}
)
FEASIBLE_CASES = frozenset(
    {"1.1", "1.2.1", "2.1.1", "2.1.2.1", "2.2.1", "2.2.2.1", "3.1.1", "3.1.2.1", "3.2.1", "3.2.2.1",
     "4.1.1", "4.1.2.1", "4.2.1", "4.2.2.1", "5.1.1", "5.1.2.1", "5.2.1", "5.2.2.1"}
)
PINNED_TO_UPPER = frozenset({"2.1.2.1", "2.2.2.1", "3.1.2.1", "3.2.2.1"})
PINNED_TO_LOWER = frozenset({"4.2.1", "5.2.1"})
ZERO_DELTA_CASES = frozenset({"2.1.1", "4.1.1"})


class IterationCapExceeded(InvspanError, RuntimeError):
    def __init__(self, cap: int, trace: "SolveTrace"):
        super().__init__(f"iteration cap exceeded ({cap} iterations)")
        self.cap = cap
        self.trace = trace


def default_cap(inst: Instance) -> int:
    return 64 * inst.inv_weight_norm ** 6 + 64


@dataclass(frozen=True)
class Memo:
    """A remembered bad set together with the cost index it was found under."""

    set: ElementSet
    j: int = 0


@dataclass
class TraceStep:
    i: int
    case: str
    F: ElementSet
    j: int
    delta: Optional[Fraction] = None
    Delta: Optional[Fraction] = None
    d: Optional[Fraction] = None
    D: Optional[Fraction] = None
    X: Optional[Memo] = None
    Y: Optional[Memo] = None
    Z: Optional[Memo] = None
    # measures used by the progress checks
    mu_F: Fraction = Fraction(0)
    mu_F_in: Fraction = Fraction(0)
    X_before: Optional[tuple] = None
    Z_before: Optional[tuple] = None

    def to_json(self) -> dict:
        out = {"i": self.i, "case": self.case, "F": list(self.F), "cost_index": self.j}
        if self.delta is not None:
            out.update(delta=fmt(self.delta), Delta=fmt(self.Delta), d=fmt(self.d), D=fmt(self.D))
        return out


@dataclass
class SolveTrace:
    d0: Fraction = Fraction(0)
    D0: Fraction = Fraction(0)
    steps: list = field(default_factory=list)
    oracle_calls: int = 0
    violations: list = field(default_factory=list)

    @property
    def iterations(self) -> int:
        return len(self.steps)

    @property
    def cases(self) -> list[str]:
        return [s.case for s in self.steps]

    def to_json(self) -> dict:
        return {
            "delta0": fmt(self.d0),
            "Delta0": fmt(self.D0),
            "steps": [s.to_json() for s in self.steps],
            "iterations": self.iterations,
            "oracle_calls": self.oracle_calls,
        }


@dataclass
class SolveOutcome:
    status: str  # "optimal" or "infeasible"
    d: Optional[Fraction] = None
    D: Optional[Fraction] = None
    deviation: Optional[DeviationVector] = None
    span: Optional[Fraction] = None
    trace: SolveTrace = field(default_factory=SolveTrace)
    infeasible_case: Optional[str] = None
    pair_index: Optional[int] = None
    iterations: int = 0
    oracle_calls: int = 0
    subproblems: int = 1
    traces: list = field(default_factory=list)

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


class _Infeasible(Exception):
    def __init__(self, case: str):
        self.case = case


class SpecLUSolver:
    """State machine for one subproblem; call :meth:`run`."""

    def __init__(self, sub: SpecLUInstance, oracle, cap: Optional[int] = None, strict: bool = True):
        self.sub = sub
        self.oracle = oracle
        self.cap = cap if cap is not None else default_cap(sub.base)
        self.strict = strict
        self.w = sub.weights
        self.S0 = sub.S0
        self.Fstar = sub.input_solution
        self.mu_star = self.mu(self.Fstar)
        self.l_in, self.u_in, self.l_out, self.u_out = sub.l_in, sub.u_in, sub.l_out, sub.u_out
        self.k = len(sub.shifted_costs)

    # measures ------------------------------------------------------------
    def mu(self, X) -> Fraction:
        return mu(X, self.S0, self.w)

    def mu_out(self, F) -> Fraction:
        """mu(F* minus F)."""
        return self.mu(set_minus(self.Fstar, F))

    def mu_new(self, F) -> Fraction:
        """mu(F minus F*)."""
        return self.mu(set_minus(F, self.Fstar))

    def escapes(self, A, B) -> bool:
        """A minus S0 is not contained in B minus S0."""
        return self.mu(set_minus(A, B)) > 0

    # costs ---------------------------------------------------------------
    def current_costs(self, d, D) -> list[tuple]:
        p = build_deviation(d, D, self.sub)
        return [modified_costs(c, p) for c in self.sub.shifted_costs]

    def gap(self, m: Memo) -> Fraction:
        c = self.costs[m.j]
        return set_cost(c, self.Fstar) - set_cost(c, m.set)

    # the twelve update functions ----------------------------------------
    def f1(self, F):
        return self.gap(F) / self.mu_out(F.set)

    def f2(self, F):
        return self.u_in - self.d - self.D - self.f1(F)

    def f3(self, F):
        return self.gap(F) / (self.mu_star - self.mu(F.set))

    def f4(self, F):
        return (-self.gap(F) + (self.u_in - self.d - self.D) * self.mu_out(F.set)) / self.mu_new(F.set)

    def f5(self, F):
        return (self.gap(F) - (self.u_in - self.d - self.D) * (self.mu_star - self.mu(F.set))) / self.mu_new(F.set)

    def f6(self, F):
        return (self.gap(F) - (self.u_out - self.D) * (self.mu_star - self.mu(F.set))) / self.mu_out(F.set)

    def f7(self, small, large):
        ds = self.mu_star - self.mu(small.set)
        dl = self.mu_star - self.mu(large.set)
        num = self.gap(small) / ds - self.gap(large) / dl
        den = self.mu_out(small.set) / ds - self.mu_out(large.set) / dl
        if den <= 0:
            raise InternalError("pairing denominator must be positive")
        return num / den

    def f8(self, small, large):
        return (self.gap(small) - self.f7(small, large) * self.mu_out(small.set)) / (self.mu_star - self.mu(small.set))

    def f9(self, F):
        return (self.gap(F) - (self.l_out - self.D) * (self.mu_star - self.mu(F.set))) / self.mu_out(F.set)

    def f10(self, F):
        return (-self.gap(F) + (self.l_in - self.d - self.D) * self.mu_out(F.set)) / self.mu_new(F.set)

    def f11(self, F):
        return (self.gap(F) - (self.l_in - self.d - self.D) * (self.mu_star - self.mu(F.set))) / self.mu_new(F.set)

    def f12(self, small, large):
        return (self.gap(large) - self.f7(small, large) * self.mu_out(large.set)) / (self.mu_star - self.mu(large.set))

    # shared tails of the case tree ----------------------------------------
    def _hit_upper_in(self, F, ok_label, bad_label):
        # all of F* pinned at u_in; eliminate the small set F via Delta alone
        if self.escapes(F.set, self.Fstar) and self.D + self.f4(F) >= self.l_out:
            return ok_label, self.f5(F), self.f4(F)
        raise _Infeasible(bad_label)

    def _hit_lower_out(self, F, ok_label, bad_label):
        # everything outside F* pinned at l_out; eliminate the large set F via delta
        if self.escapes(self.Fstar, F.set) and self.d + self.f9(F) <= self.u_in - self.l_out:
            return ok_label, self.f9(F), self.l_out - self.D
        raise _Infeasible(bad_label)

    def step(self, F: Memo):
        """One iteration body.  Returns ``(case, delta, Delta)`` and updates X, Y, Z."""
        muF = self.mu(F.set)
        if muF == self.mu_star:
            self.X, self.Y, self.Z = None, F, None
            if not self.escapes(self.Fstar, F.set):
                # F and F* differ only on frozen elements: nothing can close the gap
                raise _Infeasible("1.2.2")
            if self.d + self.D + self.f1(F) <= self.u_in:
                return "1.1", self.f1(F), Fraction(0)
            if self.D + self.f2(F) >= self.l_out:
                return "1.2.1", self.f1(F), self.f2(F)
            raise _Infeasible("1.2.2")
        if muF < self.mu_star:
            if self.Z is None:
                self.X = F
                if self.D + self.f3(F) <= self.u_out:
                    if self.d + self.D + self.f3(F) <= self.u_in:
                        return "2.1.1", Fraction(0), self.f3(F)
                    return self._hit_upper_in(F, "2.1.2.1", "2.1.2.2")
                if self.d + self.f6(F) <= self.u_in - self.u_out:
                    return "2.2.1", self.f6(F), self.u_out - self.D
                return self._hit_upper_in(F, "2.2.2.1", "2.2.2.2")
            Z = self.Z
            if self.D + self.f8(F, Z) <= self.u_out:
                if self.d + self.D + self.f7(F, Z) + self.f8(F, Z) <= self.u_in:
                    self.X = F
                    return "3.1.1", self.f7(F, Z), self.f8(F, Z)
                self.X, self.Z = F, None
                return self._hit_upper_in(F, "3.1.2.1", "3.1.2.2")
            self.X, self.Z = F, None
            if self.d + self.f6(F) <= self.u_in - self.u_out:
                return "3.2.1", self.f6(F), self.u_out - self.D
            return self._hit_upper_in(F, "3.2.2.1", "3.2.2.2")
        # large bad set
        if self.X is None:
            self.Z = F
            if self.d + self.D + self.f3(F) >= self.l_in:
                if self.D + self.f3(F) >= self.l_out:
                    return "4.1.1", Fraction(0), self.f3(F)
                return self._hit_lower_out(F, "4.1.2.1", "4.1.2.2")
            if self.D + self.f10(F) >= self.l_out:
                return "4.2.1", self.f11(F), self.f10(F)
            return self._hit_lower_out(F, "4.2.2.1", "4.2.2.2")
        X = self.X
        if self.d + self.D + self.f7(X, F) + self.f12(X, F) >= self.l_in:
            if self.D + self.f12(X, F) >= self.l_out:
                self.Z = F
                return "5.1.1", self.f7(X, F), self.f12(X, F)
            self.X, self.Z = None, F
            return self._hit_lower_out(F, "5.1.2.1", "5.1.2.2")
        self.X, self.Z = None, F
        if self.D + self.f10(F) >= self.l_out:
            return "5.2.1", self.f11(F), self.f10(F)
        return self._hit_lower_out(F, "5.2.2.1", "5.2.2.2")

    # driver ----------------------------------------------------------------
    def find_bad_set(self) -> Optional[Memo]:
        """Scan cost indices in order; return the first optimum beating F*."""
        for j, c in enumerate(self.costs):
            res = self.oracle.min_cost_member(c)
            self.trace.oracle_calls += 1
            if set_cost(c, self.Fstar) > res.cost:
                return Memo(res.set, j)
        return None

    def _violation(self, msg: str):
        self.trace.violations.append(msg)
        if self.strict:
            raise InternalError(msg)

    def _check_corridor(self, i):
        s = self.d + self.D
        if not (self.l_in <= s <= self.u_in and self.l_out <= self.D <= self.u_out):
            self._violation(f"iteration {i}: (d, D) = ({fmt(self.d)}, {fmt(self.D)}) left the bound corridor")

    def _check_step(self, i, case, F, delta, Delta):
        if delta < 0:
            self._violation(f"iteration {i}: negative delta in case {case}")
        if (delta == 0) != (case in ZERO_DELTA_CASES):
            self._violation(f"iteration {i}: delta = {fmt(delta)} in case {case}")
        if case == "2.1.1" and not Delta > 0:
            self._violation(f"iteration {i}: Delta must be positive in case 2.1.1")
        if case == "4.1.1" and not Delta < 0:
            self._violation(f"iteration {i}: Delta must be negative in case 4.1.1")
        if case in PINNED_TO_UPPER and self.d + self.D != self.u_in:
            self._violation(f"iteration {i}: d + D should equal u_in after case {case}")
        if case in PINNED_TO_LOWER and self.d + self.D != self.l_in:
            self._violation(f"iteration {i}: d + D should equal l_in after case {case}")
        if self.gap(F) != 0:
            self._violation(f"iteration {i}: F_i not tight after case {case}")
        self._check_corridor(i + 1)

    def run(self) -> SolveOutcome:
        d0 = max(self.l_in - self.u_out, Fraction(0)) if is_finite(self.l_in) and is_finite(self.u_out) else Fraction(0)
        if is_finite(self.u_out):
            D0 = self.u_out
        elif is_finite(self.l_in):
            D0 = self.l_in
        else:
            D0 = Fraction(0)
        self.d, self.D = Fraction(d0), Fraction(D0)
        self.X = self.Y = self.Z = None
        self.trace = SolveTrace(self.d, self.D)
        self.costs = self.current_costs(self.d, self.D)
        self._check_corridor(0)
        i = 0
        while True:
            F = self.find_bad_set()
            if F is None:
                return SolveOutcome("optimal", self.d, self.D, build_deviation(self.d, self.D, self.sub),
                                    None, self.trace, iterations=i, oracle_calls=self.trace.oracle_calls)
            if i >= self.cap:
                raise IterationCapExceeded(self.cap, self.trace)
            rec = TraceStep(i, "", F.set, F.j, mu_F=self.mu(F.set), mu_F_in=self.mu(set_inter(F.set, self.Fstar)),
                            X_before=self._measure(self.X), Z_before=self._measure(self.Z))
            try:
                case, delta, Delta = self.step(F)
            except _Infeasible as exc:
                rec.case = exc.case
                rec.X, rec.Y, rec.Z = self.X, self.Y, self.Z
                self.trace.steps.append(rec)
                return SolveOutcome("infeasible", trace=self.trace, infeasible_case=exc.case,
                                    iterations=i + 1, oracle_calls=self.trace.oracle_calls)
            self.d += delta
            self.D += Delta
            self.costs = self.current_costs(self.d, self.D)
            rec.case, rec.delta, rec.Delta, rec.d, rec.D = case, delta, Delta, self.d, self.D
            rec.X, rec.Y, rec.Z = self.X, self.Y, self.Z
            self.trace.steps.append(rec)
            self._check_step(i, case, F, delta, Delta)
            i += 1

    def _measure(self, m: Optional[Memo]):
        if m is None:
            return None
        return (self.mu(m.set), self.mu(set_inter(m.set, self.Fstar)), m.j)


def solve_speclu(sub: SpecLUInstance, oracle=None, cap: Optional[int] = None, strict: bool = True) -> SolveOutcome:
    oracle = oracle if oracle is not None else CountingOracle(sub.family)
    return SpecLUSolver(sub, oracle, cap, strict).run()


def progress_violations(trace: SolveTrace) -> list[str]:
    """Check the monotonicity facts that bound the number of iterations.

    With several cost vectors the facts are checked per cost index, since a
    set may legitimately come back as a bad set under a different index.
    """
    out = []
    steps = [s for s in trace.steps if s.case in FEASIBLE_CASES]
    for j in {s.j for s in steps}:
        equal = [s for s in steps if s.case in ("1.1", "1.2.1") and s.j == j]
        for a, b in zip(equal, equal[1:]):
            if not a.mu_F_in < b.mu_F_in:
                out.append(f"equal-size eliminations at {a.i} and {b.i} do not increase mu(Y & F*)")
    seen_small, seen_large = set(), set()
    for s in steps:
        if s.Z_before is not None and s.case.startswith("3"):
            key = (s.mu_F, s.Z_before[0], s.mu_F_in, s.Z_before[1], s.j, s.Z_before[2])
            if key in seen_small:
                out.append(f"paired small step {s.i} repeats measures {key}")
            seen_small.add(key)
        if s.X_before is not None and s.case.startswith("5"):
            key = (s.X_before[0], s.mu_F, s.X_before[1], s.mu_F_in, s.X_before[2], s.j)
            if key in seen_large:
                out.append(f"paired large step {s.i} repeats measures {key}")
            seen_large.add(key)
    for a, b in zip(trace.steps, trace.steps[1:]):
        if b.i != a.i + 1:
            continue
        for prefix, slot in (("2", "Z_before"), ("4", "X_before")):
            if a.case.startswith(prefix) and b.case.startswith(prefix):
                if getattr(a, slot) is None and getattr(b, slot) is None:
                    if a.j == b.j and a.mu_F == b.mu_F and not a.mu_F_in < b.mu_F_in:
                        out.append(f"unpaired steps {a.i},{b.i} repeat without progress")
    return out


def _solve_pair(inst: Instance, pair, order, cap, strict):
    sub = build_subproblem(inst, pair)
    oracle = CountingOracle(inst.family, order)
    return sub, solve_speclu(sub, oracle, cap, strict)


def _solve_pair_remote(args):
    inst, pair, order, cap, strict = args
    _, out = _solve_pair(inst, pair, order, cap, strict)
    return out


def _solve_pipeline(inst: Instance, cap=None, order=None, parallel: int = 1, strict: bool = True) -> SolveOutcome:
    pairs = interval_pairs(inst)
    if parallel and parallel > 1 and len(pairs) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=parallel) as pool:
            outcomes = list(pool.map(_solve_pair_remote, [(inst, p, order, cap, strict) for p in pairs]))
    else:
        outcomes = [_solve_pair(inst, p, order, cap, strict)[1] for p in pairs]
    calls = sum(o.oracle_calls for o in outcomes)
    iters = sum(o.iterations for o in outcomes)
    traces = [o.trace for o in outcomes]
    best_index = None
    for idx, o in enumerate(outcomes):
        if o.optimal and (best_index is None or o.d < outcomes[best_index].d):
            best_index = idx
    if best_index is None:
        last = outcomes[-1]
        return SolveOutcome("infeasible", trace=last.trace, infeasible_case=last.infeasible_case,
                            iterations=iters, oracle_calls=calls, subproblems=len(pairs), traces=traces)
    best = outcomes[best_index]
    sub = build_subproblem(inst, pairs[best_index])
    p = lift_solution(sub, best.d, best.D)
    span = weighted_span(p, inst.weights)
    if span != best.d:
        raise InternalError(f"lifted span {fmt(span)} differs from subproblem optimum {fmt(best.d)}")
    if strict and not is_feasible_deviation(inst, p, CountingOracle(inst.family, order)):
        raise InternalError("solver returned an infeasible deviation vector")
    return SolveOutcome("optimal", best.d, best.D, p, span, best.trace, pair_index=best_index,
                        iterations=iters, oracle_calls=calls, subproblems=len(pairs), traces=traces)


def solve(inst: Instance, cap: Optional[int] = None, order: Optional[Sequence[int]] = None,
          parallel: int = 1, strict: bool = True) -> SolveOutcome:
    """Minimum weighted span deviation making F* optimal (single cost vector)."""
    if inst.k != 1:
        raise InstanceError("instance has several cost vectors; use solve_multi")
    return _solve_pipeline(inst, cap, order, parallel, strict)


def solve_multi(inst: Instance, cap: Optional[int] = None, order: Optional[Sequence[int]] = None,
                parallel: int = 1, strict: bool = True) -> SolveOutcome:
    """Like :func:`solve` but F* must be optimal under every cost vector simultaneously."""
    return _solve_pipeline(inst, cap, order, parallel, strict)
