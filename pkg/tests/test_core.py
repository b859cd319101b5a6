from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from invspan.core import (
    Instance,
    InstanceError,
    build_deviation,
    cost_gap,
    is_feasible_deviation,
    mu,
    special_deviation,
    weighted_span,
)
from invspan.family import ExplicitFamily
from invspan.rational import NEG_INF, POS_INF

from conftest import make_instance

F = Fraction


def test_weighted_span_example():
    assert weighted_span([F(1), F(-1), F(3)], [F(1), F(2), F(1, 3)]) == 3


def test_weighted_span_empty():
    with pytest.raises(InstanceError, match="empty instance"):
        weighted_span([], [])


@given(st.lists(st.fractions(max_denominator=9), min_size=1, max_size=6), st.fractions(max_denominator=9))
def test_span_is_shift_invariant_for_unit_weights(values, t):
    w = [F(1)] * len(values)
    assert weighted_span(values, w) == weighted_span([v + t for v in values], w)
    assert weighted_span(values, w) >= 0


def test_mu_skips_frozen():
    w = (F(1, 2), F(1), F(1, 3))
    assert mu((0, 1, 2), (), w) == 6
    assert mu((0, 1, 2), (2,), w) == 3


def test_special_deviation_clamps():
    p = special_deviation(F(2), F(-1), (True, False, False), (F(1), F(1, 2), F(1)),
                          (NEG_INF, NEG_INF, F(0)), (F(0), POS_INF, POS_INF))
    assert p.values == (F(0), F(-2), F(0))
    assert p.special_form == (F(2), F(-1))


def test_feasible_deviation(two_pair):
    assert not is_feasible_deviation(two_pair, [F(0)] * 4)
    assert is_feasible_deviation(two_pair, build_deviation(F(1), F(0), two_pair))
    assert cost_gap(two_pair.costs[0], [F(1), F(1), F(0), F(0)], (0, 1), (2, 3)) == 0


def test_bounds_respected_by_feasibility():
    inst = make_instance([(0, 1), (2, 3)], (0, 1), [1, 1, 0, 0], upper=[0, 0, None, None])
    assert not is_feasible_deviation(inst, [F(1), F(1), F(0), F(0)])
    assert is_feasible_deviation(inst, [F(0), F(0), F(-1), F(-1)])


@pytest.mark.parametrize("kwargs,msg", [
    (dict(weights=[1, 0, 1, 1]), "positive"),
    (dict(lower=[1, None, None, None], upper=[0, None, None, None]), "exceeds"),
])
def test_instance_validation(kwargs, msg):
    with pytest.raises(InstanceError, match=msg):
        make_instance([(0, 1), (2, 3)], (0, 1), [1, 1, 0, 0], **kwargs)


def test_input_solution_must_be_member():
    with pytest.raises(InstanceError, match="not a member"):
        make_instance([(0, 1), (2, 3)], (0, 2), [1, 1, 0, 0])


def test_empty_instance():
    with pytest.raises(InstanceError, match="empty instance"):
        Instance((), ExplicitFamily(0, [()]), (), ((),), (), (), ())


def test_inverse_weight_norm():
    # 1/w = (2, 3) -> norm 5; w = (2, 4) -> 1/w = (1/2, 1/4), rescaled to (2, 1)
    a = make_instance([(0,), (1,)], (0,), [0, 0], weights=[F(1, 2), F(1, 3)])
    b = make_instance([(0,), (1,)], (0,), [0, 0], weights=[2, 4])
    assert a.inv_weight_norm == 5
    assert b.inv_weight_norm == 3


def test_unconstrained_flag(two_pair):
    assert two_pair.unconstrained
    assert not make_instance([(0,), (1,)], (0,), [0, 0], lower=[0, None]).unconstrained
