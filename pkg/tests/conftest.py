from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from invspan.core import Instance
from invspan.family import ExplicitFamily
from invspan.rational import NEG_INF, POS_INF

settings.register_profile("invspan", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("invspan")


def make_instance(sets, fstar, cost, weights=None, lower=None, upper=None, costs=None):
    """Small explicit instance; elements are named a, b, c, ..."""
    n = max(max(F, default=-1) for F in sets) + 1
    ids = tuple("abcdefghijklmnop"[:n])
    weights = tuple(Fraction(w) for w in (weights or [1] * n))
    lower = tuple(NEG_INF if v is None else Fraction(v) for v in (lower or [None] * n))
    upper = tuple(POS_INF if v is None else Fraction(v) for v in (upper or [None] * n))
    costs = costs or [cost]
    return Instance(ids, ExplicitFamily(n, sets), tuple(sorted(fstar)),
                    tuple(tuple(Fraction(x) for x in c) for c in costs), weights, lower, upper)


@pytest.fixture
def two_pair():
    # F* = {a, b} vs {c, d}; F* is 2 too expensive
    return make_instance([(0, 1), (2, 3)], (0, 1), [1, 1, 0, 0])
