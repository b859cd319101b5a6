"""Acceptance criteria 1-8.

Every criterion prints one line ``CRITERION n: PASS|FAIL ...``.  Comparisons
are exact rational equality (tolerance 0); the time budgets are pinned below.
Run standalone with ``python3 tests/test_acceptance.py`` or through pytest.
"""
import sys
import time
from dataclasses import dataclass, field, replace

import pytest

from invspan.core import InternalError
from invspan.family import explicit_copy
from invspan.feasibility import feasibility_witness
from invspan.gen import random_dag_instance, random_instance, random_speclu, random_tree_instance
from invspan.minmax import certificate
from invspan.replay import golden_files, load_golden, replay
from invspan.solver import IterationCapExceeded, default_cap, progress_violations, solve, solve_multi, solve_speclu
from invspan.verify import lp_span_full, lp_span_reduced

TOLERANCE = 0  # all values are exact Fractions
GOLDEN_BUDGET_S = 1.0
TWO_COST_BUDGET_S = 0.1
RANDOM_BUDGET_S = 300.0
MINMAX_BUDGET_S = 120.0
FEAS_BUDGET_S = 120.0
GRAPH_BUDGET_S = 60.0
N_RANDOM = 500
N_MINMAX = 200
N_FEAS = 200
N_GRAPH = 100
FULL_LP_MAX_N = 5


@dataclass
class Result:
    n: int
    ok: bool
    detail: str


@dataclass
class Corpus:
    results: dict = field(default_factory=dict)
    # (label, instance, trace) for every subproblem run in criteria 1-5
    runs: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    def record(self, label, inst, outcome):
        traces = outcome.traces or [outcome.trace]
        for t in traces:
            self.runs.append((label, inst, t))


def _close(a, b):
    if a is None or b is None:
        return a is b
    return abs(a - b) <= TOLERANCE


def _solve(corpus, label, inst):
    fn = solve if inst.k == 1 else solve_multi
    try:
        out = fn(inst, strict=False)
    except (InternalError, IterationCapExceeded) as exc:
        corpus.errors.append(f"{label}: {exc}")
        return None
    corpus.record(label, inst, out)
    return out


def criterion_1(c: Corpus) -> Result:
    files = [p for p in golden_files() if p.stem != "two_costs"]
    t0 = time.perf_counter()
    bad = []
    for p in files:
        res = replay(load_golden(p), strict=False)
        c.record(p.stem, load_golden(p).instance, res.outcome)
        if not res.ok:
            bad.append(f"{p.stem}: {res.mismatches[:2]}")
    dt = time.perf_counter() - t0
    ok = not bad and len(files) == 35 and dt < GOLDEN_BUDGET_S
    return Result(1, ok, f"{len(files) - len(bad)}/{len(files)} case runs replay exactly in {dt:.3f}s "
                         f"(budget {GOLDEN_BUDGET_S}s){'; ' + '; '.join(bad[:3]) if bad else ''}")


def criterion_2(c: Corpus) -> Result:
    case = load_golden([p for p in golden_files() if p.stem == "two_costs"][0])
    t0 = time.perf_counter()
    res = replay(case, strict=False)
    dt = time.perf_counter() - t0
    out = res.outcome
    c.record("two_costs", case.instance, out)
    multi = solve_multi(case.instance, strict=False)
    c.record("two_costs-pipeline", case.instance, multi)
    final = (multi.d, multi.D)
    ok = res.ok and final == (1, 0) and (out.d, out.D) == (1, 0) and dt < TWO_COST_BUDGET_S
    return Result(2, ok, f"solve_multi (d, D) = ({multi.d}, {multi.D}), expected (1, 0); bottom row "
                         f"{'matches' if res.ok else 'differs: ' + str(res.mismatches[:2])}; "
                         f"{dt:.4f}s (budget {TWO_COST_BUDGET_S}s)")


def criterion_3(c: Corpus) -> Result:
    t0 = time.perf_counter()
    bad, full_checked = [], 0
    for seed in range(N_RANDOM):
        n = 2 + seed % 5
        inst = random_instance(seed, n=n, family_size=2 + seed % 19)
        out = _solve(c, f"random-{seed}", inst)
        if out is None:
            bad.append(f"seed {seed}: solver error")
            continue
        red = lp_span_reduced(inst)
        if out.status != red.status or not _close(out.span, red.span):
            bad.append(f"seed {seed}: solver {out.status} {out.span} vs reduced LP {red.status} {red.span}")
        if n <= FULL_LP_MAX_N:
            full_checked += 1
            full = lp_span_full(inst)
            if out.status != full.status or not _close(out.span, full.span):
                bad.append(f"seed {seed}: solver {out.status} {out.span} vs full LP {full.status} {full.span}")
    dt = time.perf_counter() - t0
    ok = not bad and dt < RANDOM_BUDGET_S
    return Result(3, ok, f"{N_RANDOM} instances, {len(bad)} mismatches (reduced LP on all, full LP on "
                         f"{full_checked} with n <= {FULL_LP_MAX_N}), tolerance {TOLERANCE}, {dt:.1f}s "
                         f"(budget {RANDOM_BUDGET_S:.0f}s){'; ' + bad[0] if bad else ''}")


def criterion_4(c: Corpus) -> Result:
    t0 = time.perf_counter()
    bad, per_k = [], {1: 0, 2: 0, 3: 0}
    for seed in range(N_MINMAX):
        k = 1 + seed % 3
        inst = random_instance(10_000 + seed, n=2 + seed % 5, family_size=2 + seed % 12,
                               bound_style="unbounded", k=k)
        out = _solve(c, f"minmax-{seed}", inst)
        cert = certificate(inst)
        per_k[k] += 1
        value = max(0, cert.omega1, cert.omega2)
        if value != cert.value or out is None or not out.optimal or not _close(out.span, value):
            bad.append(f"seed {seed}: span {out and out.span} vs max(0, w1, w2) = {value}")
    dt = time.perf_counter() - t0
    ok = not bad and dt < MINMAX_BUDGET_S
    return Result(4, ok, f"{N_MINMAX} unconstrained instances (k=1: {per_k[1]}, k=2: {per_k[2]}, "
                         f"k=3: {per_k[3]}), {len(bad)} mismatches between span and max(0, w1, w2), "
                         f"{dt:.1f}s (budget {MINMAX_BUDGET_S:.0f}s){'; ' + bad[0] if bad else ''}")


def criterion_5(c: Corpus) -> Result:
    t0 = time.perf_counter()
    bad, feasible = [], 0
    for seed in range(N_FEAS):
        inst, sub = random_speclu(seed, n=2 + seed % 5, family_size=2 + seed % 15)
        wit = feasibility_witness(sub)
        lp = lp_span_reduced(inst)
        try:
            out = solve_speclu(sub, strict=False)
            c.record(f"speclu-{seed}", sub.base, out)
            solver_ok = out.optimal
        except (InternalError, IterationCapExceeded) as exc:
            c.errors.append(f"speclu-{seed}: {exc}")
            solver_ok = None
        feasible += wit.feasible
        if wit.feasible != lp.optimal or solver_ok != lp.optimal:
            bad.append(f"seed {seed}: witness {wit.feasible}, solver {solver_ok}, LP {lp.status}")
    dt = time.perf_counter() - t0
    return Result(5, not bad and dt < FEAS_BUDGET_S,
                  f"{N_FEAS} uniform-bound subproblems ({feasible} feasible), {len(bad)} verdict mismatches "
                  f"against the LP, {dt:.1f}s (budget {FEAS_BUDGET_S:.0f}s){'; ' + bad[0] if bad else ''}")


def criterion_6(c: Corpus) -> Result:
    inv = sum(len(t.violations) for _, _, t in c.runs)
    prog = sum(len(progress_violations(t)) for _, _, t in c.runs)
    ok = inv == 0 and prog == 0 and not c.errors
    first = [msg for _, _, t in c.runs for msg in t.violations + progress_violations(t)][:1] + c.errors[:1]
    return Result(6, ok, f"{len(c.runs)} subproblem runs from criteria 1-5: {inv} invariant violations, "
                         f"{prog} progress violations, {len(c.errors)} solver errors"
                         f"{'; ' + first[0] if first else ''}")


def criterion_7(c: Corpus) -> Result:
    over, worst, calls, runs = [], 0, 0, 0
    for label, inst, t in c.runs:
        runs += 1
        calls += t.oracle_calls
        worst = max(worst, t.iterations)
        if t.iterations > default_cap(inst):
            over.append(f"{label}: {t.iterations} > {default_cap(inst)}")
    return Result(7, not over, f"max iterations per subproblem {worst}, {len(over)} over the cap; "
                               f"{calls} oracle calls over {runs} runs "
                               f"(mean {calls / max(runs, 1):.2f}){'; ' + over[0] if over else ''}")


def criterion_8(c: Corpus) -> Result:
    t0 = time.perf_counter()
    bad, count = [], {"tree": 0, "dag": 0}
    for seed in range(N_GRAPH):
        tree = random_tree_instance(seed, vertices=3 + seed % 4, extra_edges=seed % 4)
        dag = random_dag_instance(seed, vertices=3 + seed % 4, edges=min(8, 3 + seed % 6))
        for kind, inst in (("tree", tree), ("dag", dag)):
            count[kind] += 1
            a = solve(inst)
            b = solve(replace(inst, family=explicit_copy(inst.family)))
            if a.status != b.status or not _close(a.span, b.span):
                bad.append(f"{kind} seed {seed}: {a.status} {a.span} vs explicit {b.status} {b.span}")
    dt = time.perf_counter() - t0
    return Result(8, not bad and dt < GRAPH_BUDGET_S,
                  f"{count['tree']} spanning-tree and {count['dag']} DAG-path instances, {len(bad)} mismatches "
                  f"against the enumerated family, {dt:.1f}s (budget {GRAPH_BUDGET_S:.0f}s)"
                  f"{'; ' + bad[0] if bad else ''}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8]


def line(r: Result) -> str:
    return f"CRITERION {r.n}: {'PASS' if r.ok else 'FAIL'} - {r.detail}"


def run_all(emit=print) -> dict:
    corpus = Corpus()
    for fn in CRITERIA:
        r = fn(corpus)
        corpus.results[r.n] = r
        emit(line(r))
    return corpus.results


@pytest.fixture(scope="module")
def results(request):
    capman = request.config.pluginmanager.getplugin("capturemanager")
    out = {}

    def emit(text):
        with capman.global_and_fixture_disabled():
            print(text, flush=True)

    out.update(run_all(emit))
    return out


@pytest.mark.parametrize("n", range(1, 9))
def test_criterion(results, n):
    assert results[n].ok, line(results[n])


if __name__ == "__main__":
    res = run_all()
    sys.exit(0 if all(r.ok for r in res.values()) else 1)
