"""JSON instance and solution files.

Rationals are always written as strings (``"3"``, ``"-2/5"``, ``"inf"``) so
nothing passes through floating point.  :func:`dump_instance` emits a
canonical form: sorted keys, and bounds maps only list non-infinite entries.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Union

from .core import Instance, InstanceError
from .family import DagPathFamily, ExplicitFamily, FamilyError, SpanningTreeFamily
from .rational import NEG_INF, POS_INF, fmt, to_ext, to_rational

INSTANCE_KEYS = {"elements", "weights", "costs", "family", "input_solution", "lower", "upper"}


def _check_keys(obj, allowed, where):
    if not isinstance(obj, dict):
        raise InstanceError(f"{where}: expected an object")
    extra = set(obj) - set(allowed)
    if extra:
        raise InstanceError(f"{where}: unknown keys {sorted(extra)}")


def _rational(value, where, ext=False):
    try:
        return to_ext(value) if ext else to_rational(value)
    except (TypeError, ValueError) as exc:
        raise InstanceError(f"{where}: {exc}") from None


def _id_map(obj, ids, where, default=None, ext=False):
    if obj is None:
        if default is None:
            raise InstanceError(f"{where}: missing")
        return [default] * len(ids)
    if not isinstance(obj, dict):
        raise InstanceError(f"{where}: expected an object keyed by element id")
    unknown = set(obj) - set(ids)
    if unknown:
        raise InstanceError(f"{where}: unknown element ids {sorted(unknown)}")
    out = []
    for e in ids:
        if e not in obj:
            if default is None:
                raise InstanceError(f"{where}: no value for element {e!r}")
            out.append(default)
        else:
            out.append(_rational(obj[e], f"{where}[{e!r}]", ext))
    return out


def _family(obj, ids):
    index = {e: i for i, e in enumerate(ids)}
    if not isinstance(obj, dict) or "kind" not in obj:
        raise InstanceError("family: expected an object with a 'kind'")
    kind = obj["kind"]
    try:
        if kind == "explicit":
            _check_keys(obj, {"kind", "sets"}, "family")
            sets = []
            for F in obj["sets"]:
                missing = [e for e in F if e not in index]
                if missing:
                    raise InstanceError(f"family.sets: unknown element ids {missing}")
                sets.append([index[e] for e in F])
            return ExplicitFamily(len(ids), sets)
        if kind in ("spanning_trees", "dag_st_paths"):
            keys = {"kind", "graph"} if kind == "spanning_trees" else {"kind", "graph", "source", "sink"}
            _check_keys(obj, keys, "family")
            graph = obj["graph"]
            _check_keys(graph, {"vertices", "edges"}, "family.graph")
            edges = graph["edges"]
            if set(edges) != set(ids):
                raise InstanceError("family.graph.edges: edge ids must be exactly the element ids")
            arcs = [tuple(edges[e]) for e in ids]
            if kind == "spanning_trees":
                return SpanningTreeFamily(graph["vertices"], arcs)
            return DagPathFamily(graph["vertices"], arcs, obj["source"], obj["sink"])
    except FamilyError as exc:
        raise InstanceError(f"family: {exc}") from None
    except KeyError as exc:
        raise InstanceError(f"family: missing key {exc}") from None
    raise InstanceError(f"family: unknown kind {kind!r}")


def parse_instance(obj: dict) -> Instance:
    _check_keys(obj, INSTANCE_KEYS, "instance")
    for key in ("elements", "weights", "costs", "family", "input_solution"):
        if key not in obj:
            raise InstanceError(f"instance: missing key {key!r}")
    ids = obj["elements"]
    if not isinstance(ids, list) or not all(isinstance(e, str) for e in ids):
        raise InstanceError("elements: expected a list of string ids")
    if len(set(ids)) != len(ids):
        raise InstanceError("elements: duplicate ids")
    weights = _id_map(obj["weights"], ids, "weights")
    costs = obj["costs"]
    if not isinstance(costs, list) or not costs:
        raise InstanceError("costs: expected a non-empty list of cost maps")
    cost_vectors = tuple(tuple(_id_map(c, ids, f"costs[{j}]")) for j, c in enumerate(costs))
    lower = _id_map(obj.get("lower"), ids, "lower", NEG_INF, ext=True)
    upper = _id_map(obj.get("upper"), ids, "upper", POS_INF, ext=True)
    fstar = obj["input_solution"]
    unknown = [e for e in fstar if e not in ids]
    if unknown:
        raise InstanceError(f"input_solution: unknown element ids {unknown}")
    family = _family(obj["family"], ids)
    return Instance(tuple(ids), family, tuple(sorted(ids.index(e) for e in set(fstar))), cost_vectors,
                    tuple(weights), tuple(lower), tuple(upper))


def load_instance(source: Union[str, Path, dict]) -> Instance:
    if isinstance(source, dict):
        return parse_instance(source)
    path = Path(source)
    text = path.read_text(encoding="utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    try:
        return parse_instance(obj)
    except InstanceError as exc:
        raise InstanceError(f"{path}: {exc}") from None


def instance_to_json(inst: Instance) -> dict:
    ids = inst.elements
    fam = inst.family
    if fam.kind == "explicit":
        fobj: dict[str, Any] = {"kind": "explicit", "sets": [[ids[i] for i in F] for F in fam.sets]}
    else:
        graph = {"vertices": list(fam.vertices), "edges": {ids[i]: list(e) for i, e in enumerate(fam.edges)}}
        fobj = {"kind": fam.kind, "graph": graph}
        if fam.kind == "dag_st_paths":
            fobj.update(source=fam.source, sink=fam.sink)
    out = {
        "elements": list(ids),
        "weights": {e: fmt(w) for e, w in zip(ids, inst.weights)},
        "costs": [{e: fmt(v) for e, v in zip(ids, c)} for c in inst.costs],
        "family": fobj,
        "input_solution": [ids[i] for i in inst.input_solution],
    }
    lower = {e: fmt(v) for e, v in zip(ids, inst.lower) if v != NEG_INF}
    upper = {e: fmt(v) for e, v in zip(ids, inst.upper) if v != POS_INF}
    if lower:
        out["lower"] = lower
    if upper:
        out["upper"] = upper
    return out


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def dump_instance(inst: Instance) -> str:
    return dumps(instance_to_json(inst))


def deviation_to_json(inst: Instance, p) -> dict:
    return {e: fmt(v) for e, v in zip(inst.elements, p.values)}


def solution_to_json(inst: Instance, outcome, with_trace: bool = False) -> dict:
    out: dict[str, Any] = {
        "status": outcome.status,
        "iterations": outcome.iterations,
        "oracle_calls": outcome.oracle_calls,
    }
    if outcome.optimal:
        out.update(span=fmt(outcome.span), delta=fmt(outcome.d), Delta=fmt(outcome.D),
                   deviation=deviation_to_json(inst, outcome.deviation))
    elif outcome.infeasible_case:
        out["infeasible_case"] = outcome.infeasible_case
    if with_trace:
        out["trace"] = outcome.trace.to_json()
    return out


def parse_deviation(inst: Instance, obj: dict) -> tuple[Fraction, ...]:
    return tuple(_id_map(obj, inst.elements, "deviation"))
