"""Acceptance criteria 1-10.  Each test records one PASS/FAIL line, shown in
the pytest terminal summary and printed when run as a script."""

import random
import subprocess
import sys
import time
from fractions import Fraction as Fr
from itertools import product

import numpy as np

from acceptance_log import record
from simpsec import chain_core as cc
from simpsec import chern_weil as cw
from simpsec import derham as dr
from simpsec import secondary as se
from simpsec import simplicial as sm
from simpsec.poly_forms import LocalForm, simplex_integral

Z2 = sm.FiniteGroup.cyclic(2)
Z3 = sm.FiniteGroup.cyclic(3)


def _swap(N):
    return sm.nerve(sm.action_groupoid(Z2, [0, 1], lambda g, x: (x + g) % 2), N)


# ------------------------------------------------------------------ 1

def _elementary_divisors(rows):
    """Nonzero invariant factors of an integer matrix by plain elimination."""
    A = [list(r) for r in rows]
    m, n = len(A), len(A[0]) if A else 0
    out, t = [], 0
    while t < min(m, n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        A[t], A[i] = A[i], A[t]
        for r in A:
            r[t], r[j] = r[j], r[t]
        while True:
            p = A[t][t]
            for i in range(t + 1, m):
                q = A[i][t] // p
                A[i] = [x - q * y for x, y in zip(A[i], A[t])]
            for j in range(t + 1, n):
                q = A[t][j] // p
                for r in A:
                    r[j] -= q * r[t]
            rem = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
            rem += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
            if rem:
                _, i, j = min(rem)
                A[t], A[i] = A[i], A[t]
                for r in A:
                    r[t], r[j] = r[j], r[t]
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is None:
                break
            A[t] = [x + y for x, y in zip(A[t], A[bad])]
        out.append(abs(A[t][t]))
        t += 1
    return out


def bar_oracle(elements, mul, top):
    """``H^n(G; Z)`` from inhomogeneous bar cochains ``G^n -> Z``."""
    cells = [list(product(elements, repeat=n)) for n in range(top + 2)]

    def d(n):
        idx = {c: i for i, c in enumerate(cells[n])}
        M = [[0] * len(cells[n]) for _ in cells[n + 1]]
        for row, g in enumerate(cells[n + 1]):
            # G acts trivially on Z
            M[row][idx[g[1:]]] += 1
            for i in range(n):
                M[row][idx[g[:i] + (mul(g[i], g[i + 1]),) + g[i + 2:]]] += (-1) ** (i + 1)
            M[row][idx[g[:-1]]] += (-1) ** (n + 1)
        return M

    ranks, divs = {}, {}
    for n in range(top + 1):
        ed = _elementary_divisors(d(n))
        ranks[n], divs[n] = len(ed), ed
    out = []
    for n in range(top + 1):
        free = len(cells[n]) - ranks[n] - (ranks[n - 1] if n else 0)
        tors = [x for x in (divs[n - 1] if n else []) if x > 1]
        parts = (["Z" if free == 1 else f"Z^{free}"] if free else []) + [f"Z/{t}" for t in sorted(tors)]
        out.append(" + ".join(parts) or "0")
    return out


def test_criterion_01_group_cohomology_oracle():
    t = time.perf_counter()
    want = {"Z/2": ["Z", "0", "Z/2", "0"], "Z/3": ["Z", "0", "Z/3", "0"]}
    ok, detail = True, []
    for G in (Z2, Z3):
        T = sm.cochain_total(sm.nerve(G, 4), "Z")
        engine = [str(T.complex.cohomology(n).group) for n in range(4)]
        oracle = bar_oracle(G.elements, G.mul, 3)
        ok &= engine == oracle == want[G.name]
        detail.append(f"{G.name}: engine {engine} oracle {oracle}")
    ok &= time.perf_counter() - t < 10
    record(1, ok, "; ".join(detail), t)
    assert ok


# ------------------------------------------------------------------ 2

def test_criterion_02_de_rham_bridge():
    t = time.perf_counter()
    suite = {
        "point": sm.constant_object(sm.point(), 3),
        "nerve(Z/2)": sm.nerve(Z2, 3),
        "circle": sm.constant_object(sm.minimal_circle(), 3),
        "torus": sm.constant_object(sm.torus_9(), 3),
        "swap": _swap(3),
    }
    bad = [name for name, X in suite.items() if not dr.quasi_iso_report(X).iso]
    ok = not bad and time.perf_counter() - t < 60
    record(2, ok, f"{len(suite) - len(bad)}/{len(suite)} objects quasi-isomorphic", t)
    assert ok


# ------------------------------------------------------------------ 3

def test_criterion_03_bar_construction_contractible():
    t = time.perf_counter()
    ok, detail = True, []
    for G in (Z2, Z3):
        T = sm.cochain_total(sm.ebar_nerve(G, 4), "Z")
        hs = [str(T.complex.cohomology(k).group) for k in range(1, 4)]
        ok &= hs == ["0"] * 3
        detail.append(f"{G.name}: H^1..3 = {hs}")
    ok &= time.perf_counter() - t < 30
    record(3, ok, "; ".join(detail), t)
    assert ok


# ------------------------------------------------------------------ 4

def test_criterion_04_xi_surjective_with_kernel():
    t = time.perf_counter()
    ok, n_cases = True, 0
    for X in (sm.constant_object(sm.minimal_circle(), 3), sm.nerve(Z2, 3)):
        for r, n in ((1, 0), (1, 1), (2, 2)):
            rep = se.xi_map(X, "Z", se.bete(), r, n)
            ok &= rep.surjective and rep.kernel_matches and rep.enabling_zero
            ok &= rep.kernel.invariants() == rep.kernel_description.invariants()
            n_cases += 1
    ok &= time.perf_counter() - t < 120
    record(4, ok, f"{n_cases} (object, r, n) cases", t)
    assert ok


# ------------------------------------------------------------------ 5

def test_criterion_05_corollary():
    t = time.perf_counter()
    ok, details = True, []
    for name, X in (("point", sm.constant_object(sm.point(), 3)),
                    ("circle", sm.constant_object(sm.minimal_circle(), 3)),
                    ("nerve(Z/2)", sm.nerve(Z2, 3)), ("swap", _swap(3))):
        for r in (1, 2):
            good, a, b = se.corollary_check(X, r)
            ok &= good
            if not good:
                details.append(f"{name} r={r}: {a} vs {b}")
    ok &= time.perf_counter() - t < 120
    record(5, ok, "; ".join(details) or "8 cases agree", t)
    assert ok


# ------------------------------------------------------------------ 6

def test_criterion_06_long_exact_sequences():
    t = time.perf_counter()
    rng = random.Random(2024)
    failures = sum(cc.les_of_cone(cc.random_chain_map(rng), range(0, 4)).failures for _ in range(200))
    for X in (sm.constant_object(sm.point(), 3), sm.constant_object(sm.minimal_circle(), 3), sm.nerve(Z2, 3)):
        for fam in (se.bete(), se.whole()):
            for r in (1, 2):
                rep = se.mh_les(X, "Z", fam, r)
                failures += rep.les.failures + sum(1 for v in rep.quotient_check.values() if not v)
    ok = failures == 0 and time.perf_counter() - t < 120
    record(6, ok, f"assertion failures = {failures}", t)
    assert ok


# ------------------------------------------------------------------ 7

def test_criterion_07_transgression_stokes():
    t = time.perf_counter()
    base = cw.flat_circle_bundle(Fr(0), 2)
    X, T = base.conn.X, base.conn.models.total_Q
    bad = checks = 0
    for seed in range(20):
        rng = random.Random(seed)
        conn = base.conn.shifted([dr.random_compatible_form(X, 1, rng, T)])
        phi = cw.InvariantPolynomial(1, {(2,): Fr(rng.randint(1, 5), rng.randint(1, 3))})
        for q in (1, 2, 3):
            fam = cw.ConnectionFamily(conn, [[dr.random_compatible_form(X, 1, rng, T)] for _ in range(q)])
            checks += 1
            bad += not cw.stokes_identity_check(phi, fam)
    ok = bad == 0 and time.perf_counter() - t < 60
    record(7, ok, f"{checks - bad}/{checks} identities exact", t)
    assert ok


# ------------------------------------------------------------------ 8

def test_criterion_08_characteristic_cocycle():
    t = time.perf_counter()
    flat = cw.flat_circle_bundle(Fr(1, 3), 3)
    other = cw.flat_circle_bundle(Fr(4, 3), 3)
    other.conn.X, other.conn._models = flat.conn.X, flat.conn.models
    torus = cw.torus_bundle(1, 3)
    xi = cw.xi_class(flat)
    res_flat = cw.class_independence_and_invariance(flat, other)
    res_torus = cw.class_independence_and_invariance(torus, torus)
    ok = xi.is_cocycle() and cw.xi_class(torus).is_cocycle()
    ok &= all(res_flat.values()) and all(res_torus.values())
    ok &= xi.order() == 3
    ok &= time.perf_counter() - t < 60
    record(8, ok, f"order of holonomy-1/3 class = {xi.order()}; flat {res_flat}; torus {res_torus}", t)
    assert ok


# ------------------------------------------------------------------ 9

def _quadrature(exps, points):
    """Collapsed-coordinate composite Gauss-Legendre rule on the unit simplex with ~``points`` nodes."""
    q = len(exps)
    panels = max(1, round(points ** (1 / q) / 10))
    g, gw = np.polynomial.legendre.leggauss(10)
    left = np.arange(panels)[:, None] / panels
    x = (left + (g[None, :] + 1) / (2 * panels)).ravel()
    w = np.tile(gw / (2 * panels), panels)
    m = x.size
    grids = np.meshgrid(*([x] * q), indexing="ij")
    wts = np.ones_like(grids[0])
    for g in np.meshgrid(*([w] * q), indexing="ij"):
        wts = wts * g
    # s_i = u_i * prod_{j<i} (1 - u_j); the Jacobian is the product of those prefixes
    s, rest = [], np.ones_like(grids[0])
    for u in grids:
        s.append(rest * u)
        wts = wts * rest
        rest = rest * (1 - u)
    val = wts.copy()
    for si, a in zip(s, exps):
        val = val * si ** a
    return float(val.sum()), m ** q


def test_criterion_09_exact_integration():
    t = time.perf_counter()
    rng = random.Random(9)
    worst = 0.0
    for _ in range(50):
        q = rng.randint(1, 3)
        exps = [rng.randint(0, 4) for _ in range(q)]
        # engine: fiber integral over the s block of s^a ds ^ t dt
        chart = (("s", q), ("t", 1))
        form = LocalForm(chart, {(tuple(exps) + (1,), tuple(range(q + 1))): 1})
        got = form.integrate_over(0)
        exact = got.terms.get(((1,), (0,)), Fr(0))
        assert exact == simplex_integral(exps)
        approx, n = _quadrature(exps, 10 ** 6)
        assert n >= 10 ** 5
        worst = max(worst, abs(approx - float(exact)) / float(exact))
    ok = worst < 1e-3 and time.perf_counter() - t < 30
    record(9, ok, f"max relative error {worst:.2e} over 50 monomials", t)
    assert ok


# ----------------------------------------------------------------- 10

MATRIX = [
    ["cohomology", "--group", "z3", "--N", "4"],
    ["cohomology", "--space", "circle", "--model", "wmodel"],
    ["cohomology", "--space", "circle", "--model", "cone"],
    ["nerve", "--groupoid", "swap", "--N", "3"],
    ["mh", "--space", "point", "--r", "1", "--n", "2"],
    ["mh", "--space", "circle", "--r", "1", "--n", "1"],
    ["dchar", "--group", "z2", "--N", "4", "--k", "2", "--lambda", "Z", "--filtration", "bete"],
    ["xi", "--group", "z2", "--r", "1", "--n", "1"],
    ["les", "--space", "circle"],
    ["verify", "chain", "--seed", "3"],
    ["verify", "derham", "--seed", "3"],
    ["verify", "secondary", "--seed", "3"],
    ["verify", "chernweil", "--seed", "7"],
    ["mh", "--space", "point", "--r", "5"],
]


def test_criterion_10_cli_determinism():
    t = time.perf_counter()
    differing = []
    for args in MATRIX:
        runs = [subprocess.run([sys.executable, "-m", "simpsec", *args], capture_output=True) for _ in range(2)]
        if runs[0].stdout != runs[1].stdout or runs[0].returncode != runs[1].returncode:
            differing.append(" ".join(args))
    ok = not differing
    record(10, ok, f"{len(MATRIX) - len(differing)}/{len(MATRIX)} commands byte-identical", t)
    assert ok


if __name__ == "__main__":
    import acceptance_log

    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
    print("\n".join(acceptance_log.lines()))
