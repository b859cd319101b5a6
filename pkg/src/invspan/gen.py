"""Seeded random instances for testing and the ``gen`` command."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional, Sequence

from .core import Instance, as_set
from .family import DagPathFamily, ExplicitFamily, SpanningTreeFamily
from .rational import NEG_INF, POS_INF

BOUND_STYLES = ("unbounded", "box", "speclu-like")


def _ids(n: int) -> tuple[str, ...]:
    return tuple(f"e{i}" for i in range(n))


def _costs(rng: random.Random, n: int, k: int, spread: int = 6):
    return tuple(tuple(Fraction(rng.randint(-spread, spread), rng.choice((1, 1, 1, 2))) for _ in range(n))
                 for _ in range(k))


def _weights(rng, n, weight_denoms):
    return tuple(Fraction(1, rng.choice(tuple(weight_denoms))) for _ in range(n))


def _maybe(rng, p, value, other):
    return value if rng.random() < p else other


def random_bounds(rng: random.Random, in_fstar, weights, style: str):
    n = len(weights)
    if style == "unbounded":
        return (NEG_INF,) * n, (POS_INF,) * n
    if style == "box":
        lower, upper = [], []
        for _ in range(n):
            lo = _maybe(rng, 0.3, NEG_INF, Fraction(rng.randint(-4, 2)))
            base = lo if lo != NEG_INF else Fraction(rng.randint(-4, 2))
            hi = _maybe(rng, 0.3, POS_INF, base + rng.randint(0, 5))
            lower.append(lo)
            upper.append(hi)
        return tuple(lower), tuple(upper)
    if style == "speclu-like":
        # uniform scaled bounds with l_out <= l_in, u_out <= u_in
        a, b = sorted(rng.randint(-6, 6) for _ in range(2))
        l_out = _maybe(rng, 0.3, NEG_INF, Fraction(a - rng.randint(0, 3)))
        l_in = _maybe(rng, 0.3, NEG_INF, Fraction(a)) if l_out == NEG_INF else Fraction(a)
        u_in = _maybe(rng, 0.3, POS_INF, Fraction(b + rng.randint(0, 3)))
        u_out = _maybe(rng, 0.3, POS_INF, Fraction(b)) if u_in == POS_INF else Fraction(b)
        if l_out != NEG_INF and u_out != POS_INF and l_out > u_out:
            l_out = u_out
        lower = tuple((l_in if inside else l_out) / w for inside, w in zip(in_fstar, weights))
        upper = tuple((u_in if inside else u_out) / w for inside, w in zip(in_fstar, weights))
        return lower, upper
    raise ValueError(f"unknown bound style {style!r}")


def random_instance(seed: int, n: int = 5, family_size: int = 6, weight_denoms: Sequence[int] = (1, 2, 3),
                    bound_style: Optional[str] = None, k: int = 1) -> Instance:
    """Explicit-family instance; ``bound_style=None`` picks a style at random."""
    if n < 2:
        raise ValueError("n must be at least 2")
    rng = random.Random(seed)
    style = bound_style or rng.choice(BOUND_STYLES)
    weights = _weights(rng, n, weight_denoms)
    fstar = as_set(s for s in range(n) if rng.random() < 0.5) or (rng.randrange(n),)
    members = {fstar}
    attempts = 0
    while len(members) < family_size and attempts < 50 * family_size:
        attempts += 1
        members.add(as_set(s for s in range(n) if rng.random() < 0.5))
    order = sorted(members)
    rng.shuffle(order)
    in_fstar = tuple(s in fstar for s in range(n))
    lower, upper = random_bounds(rng, in_fstar, weights, style)
    return Instance(_ids(n), ExplicitFamily(n, order), fstar, _costs(rng, n, k), weights, lower, upper)


def random_tree_instance(seed: int, vertices: int = 4, extra_edges: int = 2, weight_denoms=(1, 2),
                         bound_style: Optional[str] = None) -> Instance:
    rng = random.Random(seed)
    vs = [f"v{i}" for i in range(vertices)]
    edges = [(vs[i], vs[rng.randrange(i)]) for i in range(1, vertices)]
    for _ in range(extra_edges):
        a, b = rng.sample(vs, 2)
        edges.append((a, b))
    rng.shuffle(edges)
    n = len(edges)
    fam = SpanningTreeFamily(vs, edges)
    fstar = fam.min_cost_member([Fraction(rng.randint(0, 9)) for _ in range(n)]).set
    weights = _weights(rng, n, weight_denoms)
    in_fstar = tuple(s in fstar for s in range(n))
    lower, upper = random_bounds(rng, in_fstar, weights, bound_style or rng.choice(BOUND_STYLES))
    return Instance(_ids(n), fam, fstar, _costs(rng, n, 1), weights, lower, upper)


def random_dag_instance(seed: int, vertices: int = 5, edges: int = 8, weight_denoms=(1, 2),
                        bound_style: Optional[str] = None) -> Instance:
    rng = random.Random(seed)
    vs = [f"v{i}" for i in range(vertices)]
    arcs = [(vs[i], vs[i + 1]) for i in range(vertices - 1)]
    while len(arcs) < edges:
        a, b = sorted(rng.sample(range(vertices), 2))
        arcs.append((vs[a], vs[b]))
    rng.shuffle(arcs)
    n = len(arcs)
    fam = DagPathFamily(vs, arcs, vs[0], vs[-1])
    fstar = fam.min_cost_member([Fraction(rng.randint(0, 9)) for _ in range(n)]).set
    weights = _weights(rng, n, weight_denoms)
    in_fstar = tuple(s in fstar for s in range(n))
    lower, upper = random_bounds(rng, in_fstar, weights, bound_style or rng.choice(BOUND_STYLES))
    return Instance(_ids(n), fam, fstar, _costs(rng, n, 1), weights, lower, upper)


def random_speclu(seed: int, n: int = 5, family_size: int = 6, weight_denoms: Sequence[int] = (1, 2, 3)):
    """Instance whose bounds already have the uniform subproblem shape, plus that subproblem.

    Some elements may be frozen at zero (``l = u = 0``) where the uniform
    bounds allow it.
    """
    from .reduce import SpecLUInstance, check_speclu

    rng = random.Random(seed)
    base = random_instance(seed, n, family_size, weight_denoms, "unbounded")
    a, b = sorted(rng.randint(-6, 6) for _ in range(2))
    l_out = _maybe(rng, 0.4, NEG_INF, Fraction(a - rng.randint(0, 3)))
    l_in = _maybe(rng, 0.4, NEG_INF, Fraction(a)) if l_out == NEG_INF else Fraction(a)
    u_in = _maybe(rng, 0.4, POS_INF, Fraction(b + rng.randint(0, 3)))
    u_out = _maybe(rng, 0.4, POS_INF, Fraction(b)) if u_in == POS_INF else Fraction(b)
    if l_out != NEG_INF and u_out != POS_INF and l_out > u_out:
        l_out = u_out
    frozen = []
    for s in range(n):
        inside = base.in_fstar[s]
        if rng.random() < 0.2 and ((inside and l_in <= 0) or (not inside and u_out >= 0)) and u_out <= 0 <= l_in:
            frozen.append(s)
    lower, upper = [], []
    for s in range(n):
        w, inside = base.weights[s], base.in_fstar[s]
        if s in frozen:
            lower.append(Fraction(0))
            upper.append(Fraction(0))
        else:
            lower.append((l_in if inside else l_out) / w)
            upper.append((u_in if inside else u_out) / w)
    inst = Instance(base.elements, base.family, base.input_solution, base.costs, base.weights,
                    tuple(lower), tuple(upper))
    sub = SpecLUInstance(inst, tuple(frozen), {s: Fraction(0) for s in frozen}, l_in, u_in, l_out, u_out, inst.costs)
    check_speclu(sub)
    return inst, sub
