"""Feasible-solution families and their minimum-cost oracles.

A family works on element *indices* ``0..n-1``.  Every oracle breaks ties
between equal-cost members by the lexicographically smallest sorted list of
element ranks.  The default rank of element ``i`` is ``i``; passing
``order=reversed_order(n)`` gives the opposite preference and is used to
check that results do not depend on tie-breaking.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .core import ElementSet, InvspanError, as_set, set_cost


class FamilyError(InvspanError, ValueError):
    pass


class EnumerationCapExceeded(InvspanError, RuntimeError):
    def __init__(self, cap: int):
        super().__init__(f"family too large to enumerate (more than {cap} members)")
        self.cap = cap


DEFAULT_ENUM_CAP = 100_000


@dataclass(frozen=True)
class OracleResult:
    set: ElementSet
    cost: Fraction


def identity_order(n: int) -> tuple[int, ...]:
    return tuple(range(n))


def reversed_order(n: int) -> tuple[int, ...]:
    return tuple(n - 1 - i for i in range(n))


def _rank_key(F: Iterable[int], order: Optional[Sequence[int]]):
    if order is None:
        return tuple(sorted(F))
    return tuple(sorted(order[s] for s in F))


class Family:
    """Interface shared by all families."""

    kind: str = ""
    n: int

    def min_cost_member(self, costs: Sequence[Fraction], order: Optional[Sequence[int]] = None) -> OracleResult:
        raise NotImplementedError

    def enumerate(self, cap: int = DEFAULT_ENUM_CAP) -> list[ElementSet]:
        raise NotImplementedError

    def contains(self, F: Sequence[int]) -> bool:
        raise NotImplementedError


class ExplicitFamily(Family):
    kind = "explicit"

    def __init__(self, n: int, sets: Iterable[Iterable[int]]):
        self.n = n
        seen = set()
        members = []
        for raw in sets:
            F = as_set(raw)
            if any(not 0 <= s < n for s in F):
                raise FamilyError("family set refers to unknown elements")
            if F in seen:
                raise FamilyError("family sets must be pairwise distinct")
            seen.add(F)
            members.append(F)
        if not members:
            raise FamilyError("no feasible solution: the family is empty")
        self.sets: tuple[ElementSet, ...] = tuple(members)
        self._members = frozenset(members)

    def min_cost_member(self, costs, order=None) -> OracleResult:
        best = min(self.sets, key=lambda F: (set_cost(costs, F), _rank_key(F, order)))
        return OracleResult(best, set_cost(costs, best))

    def enumerate(self, cap=DEFAULT_ENUM_CAP):
        if len(self.sets) > cap:
            raise EnumerationCapExceeded(cap)
        return list(self.sets)

    def contains(self, F) -> bool:
        return as_set(F) in self._members


class _DisjointSets:
    def __init__(self, items):
        self.parent = {v: v for v in items}

    def find(self, v):
        while self.parent[v] != v:
            self.parent[v] = self.parent[self.parent[v]]
            v = self.parent[v]
        return v

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


class SpanningTreeFamily(Family):
    """Spanning trees of an undirected multigraph; element ``i`` is edge ``edges[i]``."""

    kind = "spanning_trees"

    def __init__(self, vertices: Sequence, edges: Sequence[tuple]):
        self.vertices = tuple(vertices)
        self.edges = tuple(tuple(e) for e in edges)
        self.n = len(self.edges)
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise FamilyError("duplicate vertices")
        for u, v in self.edges:
            if u not in vset or v not in vset:
                raise FamilyError("edge endpoint is not a vertex")
        if not self.vertices:
            raise FamilyError("no feasible solution: graph has no vertices")
        dsu = _DisjointSets(self.vertices)
        comps = len(self.vertices)
        for u, v in self.edges:
            if dsu.union(u, v):
                comps -= 1
        if comps != 1:
            raise FamilyError("no feasible solution: graph is disconnected")

    def min_cost_member(self, costs, order=None) -> OracleResult:
        # Kruskal is exact for any signed costs; ranking ties by element rank
        # yields the rank-lexicographically smallest optimal tree.
        rank = order if order is not None else range(self.n)
        ranked = sorted(range(self.n), key=lambda i: (costs[i], rank[i]))
        dsu = _DisjointSets(self.vertices)
        tree = []
        for i in ranked:
            u, v = self.edges[i]
            if dsu.union(u, v):
                tree.append(i)
        F = as_set(tree)
        return OracleResult(F, set_cost(costs, F))

    def contains(self, F) -> bool:
        F = as_set(F)
        if any(not 0 <= i < self.n for i in F):
            return False
        if len(F) != len(self.vertices) - 1:
            return False
        dsu = _DisjointSets(self.vertices)
        return all(dsu.union(*self.edges[i]) for i in F)

    def enumerate(self, cap=DEFAULT_ENUM_CAP):
        out = []
        for combo in itertools.combinations(range(self.n), len(self.vertices) - 1):
            if self.contains(combo):
                out.append(combo)
                if len(out) > cap:
                    raise EnumerationCapExceeded(cap)
        return out


class DagPathFamily(Family):
    """Directed source-sink paths of an acyclic digraph; element ``i`` is arc ``edges[i]``."""

    kind = "dag_st_paths"

    def __init__(self, vertices: Sequence, edges: Sequence[tuple], source, sink):
        self.vertices = tuple(vertices)
        self.edges = tuple(tuple(e) for e in edges)
        self.source, self.sink = source, sink
        self.n = len(self.edges)
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise FamilyError("duplicate vertices")
        if source not in vset or sink not in vset:
            raise FamilyError("source and sink must be vertices")
        for u, v in self.edges:
            if u not in vset or v not in vset:
                raise FamilyError("edge endpoint is not a vertex")
        self.out_arcs = {v: [] for v in self.vertices}
        self.in_arcs = {v: [] for v in self.vertices}
        for i, (u, v) in enumerate(self.edges):
            self.out_arcs[u].append(i)
            self.in_arcs[v].append(i)
        self.topo = self._toposort()
        self.pos = {v: k for k, v in enumerate(self.topo)}
        if source == sink:
            raise FamilyError("source and sink must differ")
        if sink not in self._reach(source, range(self.n)):
            raise FamilyError("no feasible solution: sink unreachable from source")

    def _toposort(self):
        indeg = {v: len(self.in_arcs[v]) for v in self.vertices}
        ready = [v for v in self.vertices if indeg[v] == 0]
        order = []
        while ready:
            v = ready.pop(0)
            order.append(v)
            for i in self.out_arcs[v]:
                w = self.edges[i][1]
                indeg[w] -= 1
                if indeg[w] == 0:
                    ready.append(w)
        if len(order) != len(self.vertices):
            raise FamilyError("graph is not acyclic")
        return order

    def _reach(self, start, arcs) -> set:
        allowed = set(arcs)
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for i in self.out_arcs[v]:
                if i in allowed and self.edges[i][1] not in seen:
                    seen.add(self.edges[i][1])
                    stack.append(self.edges[i][1])
        return seen

    def _distances(self, costs):
        ds = {v: None for v in self.vertices}
        ds[self.source] = Fraction(0)
        for v in self.topo:
            if ds[v] is None:
                continue
            for i in self.out_arcs[v]:
                w = self.edges[i][1]
                cand = ds[v] + costs[i]
                if ds[w] is None or cand < ds[w]:
                    ds[w] = cand
        dt = {v: None for v in self.vertices}
        dt[self.sink] = Fraction(0)
        for v in reversed(self.topo):
            for i in self.out_arcs[v]:
                w = self.edges[i][1]
                if dt[w] is None:
                    continue
                cand = costs[i] + dt[w]
                if dt[v] is None or cand < dt[v]:
                    dt[v] = cand
        return ds, dt

    def min_cost_member(self, costs, order=None) -> OracleResult:
        ds, dt = self._distances(costs)
        opt = ds[self.sink]
        tight = [i for i, (u, v) in enumerate(self.edges)
                 if ds[u] is not None and dt[v] is not None and ds[u] + costs[i] + dt[v] == opt]
        reach = {v: self._reach(v, tight) for v in self.vertices}
        rank = order if order is not None else range(self.n)
        chosen: list[int] = []
        for i in sorted(tight, key=lambda i: rank[i]):
            trial = sorted(chosen + [i], key=lambda a: self.pos[self.edges[a][0]])
            ok = trial and self.edges[trial[0]][0] in reach[self.source] and self.sink in reach[self.edges[trial[-1]][1]]
            for a, b in zip(trial, trial[1:]):
                ok = ok and self.edges[b][0] in reach[self.edges[a][1]]
            if ok:
                chosen.append(i)
        F = as_set(chosen)
        return OracleResult(F, set_cost(costs, F))

    def contains(self, F) -> bool:
        F = as_set(F)
        if not F or any(not 0 <= i < self.n for i in F):
            return False
        nxt = {}
        for i in F:
            u, v = self.edges[i]
            if u in nxt:
                return False
            nxt[u] = v
        v, steps = self.source, 0
        while v in nxt and steps <= len(F):
            v = nxt[v]
            steps += 1
        return v == self.sink and steps == len(F)

    def enumerate(self, cap=DEFAULT_ENUM_CAP):
        out = []

        def walk(v, path):
            if v == self.sink:
                out.append(as_set(path))
                if len(out) > cap:
                    raise EnumerationCapExceeded(cap)
                return
            for i in self.out_arcs[v]:
                path.append(i)
                walk(self.edges[i][1], path)
                path.pop()

        walk(self.source, [])
        return out


class CountingOracle:
    """Wraps a family, fixes a tie-break order and counts oracle calls."""

    def __init__(self, family: Family, order: Optional[Sequence[int]] = None):
        self.family = family
        self.order = tuple(order) if order is not None else None
        self.calls = 0

    def min_cost_member(self, costs) -> OracleResult:
        self.calls += 1
        return self.family.min_cost_member(costs, self.order)


def explicit_copy(family: Family, cap: int = DEFAULT_ENUM_CAP) -> ExplicitFamily:
    """The same family re-encoded as an explicit list of sets."""
    return ExplicitFamily(family.n, family.enumerate(cap))
