import random
from fractions import Fraction as Fr
from itertools import combinations
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from simpsec import poly_forms as pf
from simpsec import simplicial as sm
from simpsec.poly_forms import LocalForm


def random_local(rng, chart, max_deg=2, terms=4):
    nv = sum(q for _, q in chart)
    f = LocalForm.zero(chart)
    for _ in range(terms):
        e = tuple(rng.randint(0, max_deg) for _ in range(nv))
        k = rng.randint(0, min(nv, 2))
        w = tuple(sorted(rng.sample(range(nv), k)))
        f = f + LocalForm(chart, {(e, w): Fr(rng.randint(-3, 3), rng.randint(1, 3))})
    return f


seeds = st.integers(0, 10 ** 6)


def test_simplex_integral_values():
    assert pf.simplex_integral([0]) == 1
    assert pf.simplex_integral([0, 0]) == Fr(1, 2)
    assert pf.simplex_integral([1, 0]) == Fr(1, 6)
    assert pf.simplex_integral([2, 1, 0]) == Fr(2, factorial(6))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_d_squared_zero(seed):
    rng = random.Random(seed)
    f = random_local(rng, (("s", 1), ("t", 2)))
    assert f.d().d().is_zero()


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_leibniz(seed):
    rng = random.Random(seed)
    chart = (("t", 3),)
    a, b = random_local(rng, chart), random_local(rng, chart)
    for p in a.degrees():
        ap = a.part(p)
        assert (ap * b).d() == ap.d() * b + ap.wedge(b.d()).scale((-1) ** p)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_stokes_on_simplex(seed):
    rng = random.Random(seed)
    q = rng.randint(1, 3)
    w = random_local(rng, (("t", q),)).part(q - 1)
    lhs = pf.integrate_simplex(w.d())
    rhs = sum((-1) ** i * pf.integrate_simplex(pf.restrict_face(w, 0, i)) for i in range(q + 1))
    assert lhs == rhs


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_fiber_integration_commutes_with_d_up_to_boundary(seed):
    # d int_F w = int_F dw - (-1)^{...} int_{dF} w is checked through the fiber-first sign:
    # for a form pulled back from the base, integration is multiplication by a constant
    rng = random.Random(seed)
    chart = (("s", 2), ("t", 1))
    base = random_local(rng, (("t", 1),))
    lifted = LocalForm(chart, {((0, 0) + e, tuple(i + 2 for i in w)): c for (e, w), c in base.terms.items()})
    vol = LocalForm.dvar(chart, 0, 1).wedge(LocalForm.dvar(chart, 0, 2))
    assert vol.wedge(lifted).integrate_over(0) == LocalForm(
        (("t", 1),), {k: c * Fr(1, 2) for k, c in base.terms.items()})


def test_whitney_forms_dual_to_faces():
    chart = (("t", 3),)
    for k in range(4):
        for I in combinations(range(4), k + 1):
            vals = pf.face_integrals(pf.whitney_form(chart, 0, I), k)
            assert all(v == (1 if J == I else 0) for J, v in vals.items())


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(1, 3))
def test_cone_homotopy_identity(seed, q):
    rng = random.Random(seed)
    chart = (("t", q),)
    w = random_local(rng, chart)
    j = rng.randint(0, q)
    point = [LocalForm.const(chart, 1 if m == j else 0) for m in range(1, q + 1)]
    ev = w.part(0).substitute(chart, point)
    lhs = pf.cone_homotopy(w.d(), j) + pf.cone_homotopy(w, j).d()
    assert lhs == w - ev


@settings(max_examples=15, deadline=None)
@given(seeds, st.integers(1, 3))
def test_dupont_homotopy(seed, q):
    rng = random.Random(seed)
    w = random_local(rng, (("t", q),))
    lhs = pf.homotopy_local(w.d()) + pf.homotopy_local(w).d()
    assert lhs == w - pf.local_EI(w)


def test_json_roundtrip():
    rng = random.Random(5)
    chart = (("s", 1), ("t", 2))
    f = random_local(rng, chart)
    assert LocalForm.from_json(chart, f.to_json()) == f
    assert all(isinstance(t["coeff"], str) for t in f.to_json())


def test_json_accepts_unsorted_wedge():
    chart = (("t", 2),)
    g = LocalForm.from_json(chart, [{"coeff": "1/2", "monomial": {}, "wedge": ["t2", "t1"]}])
    assert g == LocalForm.dvar(chart, 0, 1).wedge(LocalForm.dvar(chart, 0, 2)).scale(Fr(-1, 2))


def test_bad_terms_rejected():
    with pytest.raises(pf.ChartError):
        LocalForm((("t", 1),), {((0, 0), ()): 1})


def test_polyform_on_circle():
    K = sm.minimal_circle()
    E = pf.whitney_E(K, 1, [3])
    E.check()
    assert pf.integrate_I(E, 1) == [3]
    assert E.d().is_zero()
    assert pf.find_potential(E, 1) is None
    C = pf.simplicial_cochains(K)
    assert str(C.cohomology(1).group) == "Q"


def test_find_potential_on_simplex():
    K = sm.simplex(2)
    E = pf.whitney_E(K, 1, [1, 2, 3])
    w = E.d()
    eta = pf.find_potential(w, 2)
    assert eta is not None and eta.d() == w


def test_EI_is_identity_on_whitney_forms():
    K = sm.torus_9()
    rng = random.Random(2)
    c = [rng.randint(-2, 2) for _ in range(K.count(1))]
    E = pf.whitney_E(K, 1, c)
    assert pf.EI(E) == E
