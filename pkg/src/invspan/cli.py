"""Command line: ``invspan solve|verify|minmax|gen``.

Exit codes: 0 success, 1 error (bad input, constrained instance for
``minmax``, ...), 2 infeasible instance (``solve``), 3 a verification check
failed (``verify``).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from .core import InvspanError, is_feasible_deviation, weighted_span
from .feasibility import feasibility_witness
from .gen import BOUND_STYLES, random_instance
from .io import dump_instance, dumps, parse_deviation, parse_instance, solution_to_json
from .minmax import certificate
from .rational import fmt, to_rational
from .reduce import build_subproblem, interval_pairs, uniform_subproblem
from .replay import is_golden, load_golden, replay
from .solver import solve, solve_multi, solve_speclu
from .verify import Report, cross_check, lp_span_reduced

EXIT_OK, EXIT_ERROR, EXIT_INFEASIBLE, EXIT_CHECK_FAILED = 0, 1, 2, 3


def _read_json(path: Path):
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvspanError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def _load_any(path: Path):
    """Instance from an instance file or a golden file."""
    obj = _read_json(path)
    if is_golden(obj):
        obj = obj["instance"]
    try:
        return parse_instance(obj)
    except InvspanError as exc:
        raise InvspanError(f"{path}: {exc}") from None


def cmd_solve(args) -> int:
    inst = _load_any(Path(args.path))
    run = solve_multi if args.multi else solve
    if inst.k > 1 and not args.multi:
        raise InvspanError(f"instance has {inst.k} cost vectors; pass --multi")
    out = run(inst, cap=args.cap, parallel=args.parallel)
    doc = solution_to_json(inst, out, with_trace=args.trace)
    if args.certificate and inst.unconstrained:
        doc["certificate"] = certificate(inst).to_json(inst)
    sys.stdout.write(dumps(doc))
    return EXIT_OK if out.optimal else EXIT_INFEASIBLE


def _feasibility_checks(rep: Report, inst, subs, lp):
    any_feasible = False
    for name, sub in subs:
        wit = feasibility_witness(sub)
        direct = solve_speclu(sub)
        any_feasible = any_feasible or wit.feasible
        rep.add(f"feasibility witness {name}", wit.feasible == direct.optimal,
                f"case ({wit.case}) says {'feasible' if wit.feasible else 'infeasible'}, solver {direct.status}")
    rep.add("feasibility overall", any_feasible == lp.optimal,
            f"witnesses {'feasible' if any_feasible else 'infeasible'}, reduced LP {lp.status}")


def _solution_checks(rep: Report, inst, outcome, doc: dict):
    rep.add("solution status", doc.get("status") == outcome.status,
            f"file {doc.get('status')}, solver {outcome.status}")
    if doc.get("status") != "optimal" or not outcome.optimal:
        return
    try:
        p = parse_deviation(inst, doc["deviation"])
        span = to_rational(doc["span"])
    except (KeyError, InvspanError, ValueError, TypeError) as exc:
        rep.add("solution readable", False, str(exc))
        return
    rep.add("solution deviation feasible", is_feasible_deviation(inst, p))
    actual = weighted_span(p, inst.weights)
    rep.add("solution span matches its deviation", actual == span, f"declared {fmt(span)}, actual {fmt(actual)}")
    rep.add("solution span optimal", span == outcome.span, f"declared {fmt(span)}, optimum {fmt(outcome.span)}")


def verify_file(path: Path, args, solution: Optional[dict] = None) -> Report:
    obj = _read_json(path)
    chosen = args.full or args.reduced or args.feasibility
    full = args.full if chosen else None
    reduced = args.reduced if chosen else True
    rep = Report()
    if is_golden(obj):
        case = load_golden(obj)
        inst = case.instance
        res = replay(case, args.cap)
        for m in res.mismatches:
            rep.add("golden replay", False, m)
        if res.ok:
            rep.add("golden replay", True, case.name)
        b = case.bounds
        subs = [("uniform", uniform_subproblem(inst, b["l_in"], b["u_in"], b["l_out"], b["u_out"]))]
    else:
        inst = parse_instance(obj)
        subs = [(f"pair {p.index}", build_subproblem(inst, p)) for p in interval_pairs(inst)]
    outcome = (solve_multi if inst.k > 1 else solve)(inst, cap=args.cap)
    if full or reduced or not chosen:
        for c in cross_check(inst, outcome, full=full, reduced=reduced).checks:
            rep.add(c["check"], c["ok"], c["detail"])
    if args.feasibility:
        _feasibility_checks(rep, inst, subs, lp_span_reduced(inst))
    if solution is not None:
        _solution_checks(rep, inst, outcome, solution)
    return rep


def cmd_verify(args) -> int:
    paths = []
    for p in map(Path, args.paths):
        paths.extend(sorted(p.glob("*.json")) if p.is_dir() else [p])
    if not paths:
        raise InvspanError("no instance files found")
    solution = None
    if args.solution:
        if len(paths) != 1:
            raise InvspanError("--solution needs exactly one instance file")
        solution = _read_json(Path(args.solution))
    results = []
    for p in paths:
        rep = verify_file(p, args, solution)
        results.append({"path": str(p), **rep.to_json()})
    ok = all(r["ok"] for r in results)
    sys.stdout.write(dumps({"ok": ok, "files": results}))
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_minmax(args) -> int:
    inst = _load_any(Path(args.path))
    if not inst.unconstrained:
        raise InvspanError("minmax needs an instance without finite bounds")
    sys.stdout.write(dumps(certificate(inst).to_json(inst)))
    return EXIT_OK


def _denoms(text: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma separated positive integers") from None
    if not vals or min(vals) < 1:
        raise argparse.ArgumentTypeError("expected comma separated positive integers")
    return vals


def cmd_gen(args) -> int:
    inst = random_instance(args.seed, args.n, args.family_size, args.weight_denoms, args.bound_style, args.k)
    text = dump_instance(inst)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="invspan", description="Minimum weighted-span inverse optimization.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve an instance file")
    s.add_argument("path")
    s.add_argument("--multi", action="store_true", help="allow several cost vectors")
    s.add_argument("--trace", action="store_true", help="include the per-iteration trace")
    s.add_argument("--cap", type=int, default=None, help="iteration cap per subproblem")
    s.add_argument("--parallel", type=int, default=1, metavar="W", help="worker processes for subproblems")
    s.add_argument("--certificate", action="store_true", help="attach the min-max certificate (unbounded only)")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="cross-check the solver on instance or golden files")
    v.add_argument("paths", nargs="+", help="files or directories of *.json")
    v.add_argument("--full", action="store_true", help="LP over the full deviation vector")
    v.add_argument("--reduced", action="store_true", help="LP over (delta, Delta) cells")
    v.add_argument("--feasibility", action="store_true", help="single-candidate feasibility test")
    v.add_argument("--solution", help="solution file to check against the instance")
    v.add_argument("--cap", type=int, default=None)
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("minmax", help="min-max certificate of an unbounded instance")
    m.add_argument("path")
    m.set_defaults(func=cmd_minmax)

    g = sub.add_parser("gen", help="write a random instance")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--n", type=int, default=5)
    g.add_argument("--family-size", type=int, default=6)
    g.add_argument("--weight-denoms", type=_denoms, default=(1, 2, 3), help="e.g. 1,2,3")
    g.add_argument("--bound-style", choices=BOUND_STYLES, default=None)
    g.add_argument("--k", type=int, default=1, help="number of cost vectors")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InvspanError, OSError, ValueError) as exc:
        print(f"invspan: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
