import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from simpsec import chain_core as cc
from simpsec import derham as dr
from simpsec import simplicial as sm
from simpsec.poly_forms import ChartError, LocalForm

CIRCLE = sm.constant_object(sm.minimal_circle(), 3)
Z2 = sm.nerve(sm.FiniteGroup.cyclic(2), 3)
T_CIRCLE = dr.whitney_model(CIRCLE).total
T_Z2 = dr.whitney_model(Z2).total

seeds = st.integers(0, 10 ** 6)


def rand_vec(rng, T, k):
    return [Fr(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(T.complex.rank(k))]


@pytest.mark.parametrize("X,T", [(CIRCLE, T_CIRCLE), (Z2, T_Z2)])
@settings(max_examples=10, deadline=None)
@given(seed=seeds)
def test_J_after_E_is_identity(X, T, seed):
    rng = random.Random(seed)
    for k in range(X.N):
        x = rand_vec(rng, T, k)
        E = dr.E_total(X, T, k, x)
        E.check()
        assert E.J_coords(T, k) == x


@pytest.mark.parametrize("X,T", [(CIRCLE, T_CIRCLE), (Z2, T_Z2)])
@settings(max_examples=10, deadline=None)
@given(seed=seeds)
def test_E_and_J_are_chain_maps(X, T, seed):
    rng = random.Random(seed)
    for k in range(X.N - 1):
        x = rand_vec(rng, T, k)
        assert dr.E_total(X, T, k, x).d() == dr.E_total(X, T, k + 1, T.complex.apply(k, x))
        w = dr.random_compatible_form(X, k, rng, T)
        assert w.d().J_coords(T, k + 1) == T.complex.apply(k, w.J_coords(T, k))


def test_simplex_form_integrates_to_one():
    # omega^(1) = dt on Delta^1 x point: the (1,0) component of J is 1 on every 1-simplex
    X = sm.constant_object(sm.point(), 2)
    T = dr.whitney_model(X).total

    def fn(n, d, j, chart):
        return LocalForm.dvar(chart, 0, 1) if n == 1 else LocalForm.zero(chart)
    w = dr.CompatibleFormSequence(X, dr.E_total(X, T, 1, [1]).forms, 1)
    assert w.J_coords(T, 1) == [1]
    bare = dr.CompatibleFormSequence.from_local(X, fn, 1)
    with pytest.raises(ValueError):
        bare.check()


def test_power_sums_are_compatible():
    for a in range(4):
        dr.power_sum(CIRCLE, a).check()


def test_check_rejects_incompatible():
    def fn(n, d, j, chart):
        return LocalForm.const(chart, n + 1)
    with pytest.raises(ValueError):
        dr.CompatibleFormSequence.from_local(CIRCLE, fn, 0).check()


def test_param_lift_and_integrate():
    w = dr.power_sum(CIRCLE, 1)
    lifted = w.lift_param((("s", 2),))
    lifted.check()
    with pytest.raises(ChartError):
        lifted.J()
    # integrating a form with no ds-part over the parameter simplex gives zero
    assert lifted.integrate_param().is_zero()


@pytest.mark.parametrize("name,X", [
    ("point", sm.constant_object(sm.point(), 3)),
    ("z2", Z2),
    ("circle", CIRCLE),
    ("swap", sm.nerve(sm.action_groupoid(sm.FiniteGroup.cyclic(2), [0, 1], lambda g, x: (x + g) % 2), 3)),
])
def test_quasi_isomorphism(name, X):
    rep = dr.quasi_iso_report(X)
    assert rep.iso, rep.summary()


def test_bridge_is_chain_map():
    S = cc.totalize(sm.cochain_double_complex(CIRCLE, "Q"))
    f = dr.I_bridge(dr.whitney_model(CIRCLE), S)
    assert cc.is_quasi_isomorphism(f, range(CIRCLE.N))


def test_json_export():
    doc = dr.power_sum(CIRCLE, 1).to_json()
    assert len(doc) == CIRCLE.N + 1


def test_json_roundtrip():
    import json
    X = sm.constant_object(sm.minimal_circle(), 2)
    w = dr.power_sum(X, 2)
    back = dr.CompatibleFormSequence.from_json(X, json.loads(json.dumps(w.to_json())), 0)
    assert back == w
    with pytest.raises((ValueError, KeyError)):
        dr.CompatibleFormSequence.from_json(X, {"forms": []}, 0)
