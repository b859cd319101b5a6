"""Golden-trace replay.

A golden file holds an instance whose bounds already have the uniform
``l_in/u_in/l_out/u_out`` shape, plus what a run on it must produce: the
case labels, the per-step ``(delta, Delta)``, the bad set found at each
step, and the modified costs after every step.  The shipped files live in
``invspan/golden``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

from .core import Instance, modified_costs
from .family import CountingOracle
from .io import parse_instance
from .rational import fmt, to_ext
from .reduce import uniform_subproblem
from .solver import SolveOutcome, solve, solve_multi, solve_speclu

GOLDEN_DIR = Path(__file__).with_name("golden")


@dataclass
class GoldenCase:
    name: str
    instance: Instance
    bounds: dict
    expected: dict
    path: Optional[Path] = None


@dataclass
class ReplayResult:
    name: str
    mismatches: list = field(default_factory=list)
    outcome: Optional[SolveOutcome] = None

    @property
    def ok(self) -> bool:
        return not self.mismatches


def is_golden(obj) -> bool:
    return isinstance(obj, dict) and "instance" in obj and "expected" in obj


def load_golden(source: Union[str, Path, dict]) -> GoldenCase:
    path = None
    if not isinstance(source, dict):
        path = Path(source)
        source = json.loads(path.read_text(encoding="utf-8"))
    bounds = {k: to_ext(v) for k, v in source["speclu"].items()}
    return GoldenCase(source.get("name", path.stem if path else "golden"), parse_instance(source["instance"]),
                      bounds, source["expected"], path)


def golden_files(directory: Union[str, Path, None] = None) -> list[Path]:
    return sorted(Path(directory or GOLDEN_DIR).glob("*.json"))


def _row(inst: Instance, d, D, sub) -> list:
    from .core import build_deviation

    p = build_deviation(d, D, sub)
    return [{e: fmt(v) for e, v in zip(inst.elements, modified_costs(c, p))} for c in inst.costs]


def _names(inst: Instance, F) -> list:
    return [inst.elements[i] for i in F]


def replay(case: GoldenCase, cap: Optional[int] = None, strict: bool = True) -> ReplayResult:
    inst, exp, b = case.instance, case.expected, case.bounds
    res = ReplayResult(case.name)
    sub = uniform_subproblem(inst, b["l_in"], b["u_in"], b["l_out"], b["u_out"])

    def check(what, got, want):
        if got != want:
            res.mismatches.append(f"{case.name}: {what}: got {got}, expected {want}")

    out = solve_speclu(sub, CountingOracle(inst.family), cap, strict)
    res.outcome = out
    check("status", out.status, exp["status"])
    steps = out.trace.steps
    d, D = out.trace.d0, out.trace.D0
    rows = [_row(inst, d, D, sub)]
    for s in steps:
        if s.delta is not None:
            rows.append(_row(inst, s.d, s.D, sub))

    if "cases" in exp:
        check("cases", [s.case for s in steps], exp["cases"])
        check("steps", [[fmt(s.delta), fmt(s.Delta)] for s in steps if s.delta is not None], exp["steps"])
        check("bad sets", [_names(inst, s.F) for s in steps], exp["bad_sets"])
        check("cost rows", rows, exp["cost_rows"])
    else:
        # only the end state is known
        if out.optimal:
            check("final", [fmt(out.d), fmt(out.D)], exp["final"])
        check("final cost row", rows[-1], exp["cost_rows"][-1])
        for j, want in enumerate(exp.get("single_cost_spans", [])):
            single = solve(inst.with_costs([inst.costs[j]]), strict=strict)
            check(f"span for cost {j} alone", fmt(single.span) if single.optimal else None, want)

    # the general pipeline must agree with the subproblem run
    full = (solve_multi if inst.k > 1 else solve)(inst, cap, strict=strict)
    check("pipeline status", full.status, out.status)
    if full.optimal and out.optimal:
        check("pipeline span", fmt(full.span), fmt(out.d))
    return res


def replay_all(directory: Union[str, Path, None] = None, cap: Optional[int] = None) -> list[ReplayResult]:
    return [replay(load_golden(p), cap) for p in golden_files(directory)]


def expected_span(case: GoldenCase) -> Optional[Fraction]:
    """Span implied by the expected steps (sum of the deltas), if the run is optimal."""
    exp = case.expected
    if exp["status"] != "optimal":
        return None
    if "final" in exp:
        return Fraction(exp["final"][0])
    return sum((Fraction(a) for a, _ in exp["steps"]), Fraction(0))
