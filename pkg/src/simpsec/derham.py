"""Compatible form sequences on ``Delta^n x X_n``, the Whitney model of the
simplicial de Rham double complex, and the integration bridges between
forms and cochains.

A compatible sequence stores ``omega^(n)`` as a :class:`PolyForm` on the level
``X_n`` with one prefix block ``("t", n)`` for the simplex coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from . import chain_core as cc
from . import exact_linalg as la
from .poly_forms import (ChartError, LocalForm, PolyForm, integrate_I, restrict_face,
                         whitney_E, whitney_form)
from .simplicial import (DeltaMap, TruncatedSimplicialSet, cochain_double_complex,
                         constant_object)

__all__ = [
    "CompatibleFormSequence", "WhitneyModel", "face_subset_map", "E_total",
    "whitney_model", "I_bridge", "quasi_iso_report", "constant_object",
]


def face_subset_map(X: TruncatedSimplicialSet, n: int, verts: Sequence[int]) -> DeltaMap:
    """Iterated face ``X_n -> X_r`` keeping the vertices ``verts`` of ``[n]``."""
    keep = sorted(verts)
    f = DeltaMap.identity(X.levels[n])
    present = list(range(n + 1))
    level = n
    for v in reversed(range(n + 1)):
        if v not in keep:
            i = present.index(v)
            f = f.then(X.faces[level][i])
            present.pop(i)
            level -= 1
    return f


def _pullback_level(form: PolyForm, f: DeltaMap, target_K) -> PolyForm:
    """``f^* form`` for a Delta-map ``f: source -> form.K`` (simplexwise copy)."""
    comps = [[form.comps[d][f.maps[d][j]] for j in range(f.source.count(d))]
             for d in range(f.source.dim + 1)]
    return PolyForm(f.source, comps, form.prefix, form.name)


@dataclass
class CompatibleFormSequence:
    X: TruncatedSimplicialSet
    forms: list                      # forms[n]: PolyForm on X.levels[n] with prefix param + (("t", n),)
    degree: Optional[int] = None
    param: tuple = ()                # extra simplex blocks in front, e.g. (("s", q),)

    def check(self) -> "CompatibleFormSequence":
        X = self.X
        if len(self.forms) != X.N + 1:
            raise ChartError("need one form per level")
        for n, w in enumerate(self.forms):
            if tuple(w.prefix) != tuple(self.param) + (("t", n),) or \
                    w.K is not X.levels[n] and not w.K.same_shape(X.levels[n]):
                raise ChartError(f"level {n} form lives on the wrong chart")
            w.check()
            if self.degree is not None:
                for row in w.comps:
                    for f in row:
                        if f.degrees() - {self.degree}:
                            raise ChartError(f"level {n} form is not homogeneous of degree {self.degree}")
        tb = len(self.param)
        for n in range(1, X.N + 1):
            w, prev = self.forms[n], self.forms[n - 1]
            for i in range(n + 1):
                fi = X.faces[n][i]
                for d in range(X.levels[n].dim + 1):
                    for j, loc in enumerate(w.comps[d]):
                        if restrict_face(loc, tb, i) != prev.comps[d][fi.maps[d][j]]:
                            raise ChartError(f"compatibility fails at level {n}, face {i}, simplex {d}:{j}")
        return self

    def _map(self, fn, degree=None) -> "CompatibleFormSequence":
        return CompatibleFormSequence(self.X, [fn(w) for w in self.forms], degree, self.param)

    def d(self) -> "CompatibleFormSequence":
        return self._map(lambda w: w.d(), None if self.degree is None else self.degree + 1)

    def __add__(self, other):
        deg = self.degree if self.degree == other.degree else None
        return CompatibleFormSequence(self.X, [a + b for a, b in zip(self.forms, other.forms)], deg, self.param)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "CompatibleFormSequence":
        return self._map(lambda w: w.scale(c), self.degree)

    def wedge(self, other: "CompatibleFormSequence") -> "CompatibleFormSequence":
        deg = None if self.degree is None or other.degree is None else self.degree + other.degree
        return CompatibleFormSequence(self.X, [a.wedge(b) for a, b in zip(self.forms, other.forms)], deg, self.param)

    def part(self, k: int) -> "CompatibleFormSequence":
        return self._map(lambda w: w.part(k), k)

    def is_zero(self) -> bool:
        return all(w.is_zero() for w in self.forms)

    def __eq__(self, other):
        return isinstance(other, CompatibleFormSequence) and self.forms == other.forms

    def integrate_param(self) -> "CompatibleFormSequence":
        """Fiber integral over the first parameter simplex."""
        if not self.param:
            raise ChartError("no parameter block to integrate over")
        q = self.param[0][1]
        deg = None if self.degree is None else self.degree - q
        return CompatibleFormSequence(self.X, [w.integrate_over(0) for w in self.forms], deg, tuple(self.param[1:]))

    def lift_param(self, param) -> "CompatibleFormSequence":
        """Pull back along the projection that forgets new leading blocks ``param``."""
        param = tuple(param)
        shift = sum(q for _, q in param)
        forms = []
        for w in self.forms:
            comps = [[LocalForm(param + f.chart, {((0,) * shift + e, tuple(v + shift for v in ws)): c
                                                  for (e, ws), c in f.terms.items()}) for f in row]
                     for row in w.comps]
            forms.append(PolyForm(w.K, comps, param + tuple(w.prefix), w.name))
        return CompatibleFormSequence(self.X, forms, self.degree, param + tuple(self.param))

    def J(self) -> dict:
        """``n -> int_{Delta^n} omega^(n)``, a form on ``X_n``."""
        if self.param:
            raise ChartError("integrate the parameter blocks away first")
        return {n: w.integrate_over(0) for n, w in enumerate(self.forms)}

    def J_coords(self, T: cc.TotalComplex, k: Optional[int] = None) -> list:
        """``I(J(omega))`` as a vector of the cochain total complex in degree ``k``."""
        k = self.degree if k is None else k
        if k is None:
            raise ValueError("degree required")
        x = [Fraction(0)] * T.complex.rank(k)
        for n, form in self.J().items():
            s = k - n
            if s < 0 or (n, s) not in T.offsets:
                continue
            vals = integrate_I(form.part(s), s)
            _, off = T.offsets[(n, s)]
            x[off:off + len(vals)] = vals
        return x

    @classmethod
    def constant(cls, X: TruncatedSimplicialSet, c=1, param=()) -> "CompatibleFormSequence":
        param = tuple(param)
        return cls(X, [PolyForm.constant(X.levels[n], c, param + (("t", n),)) for n in range(X.N + 1)], 0, param)

    @classmethod
    def zero(cls, X: TruncatedSimplicialSet, degree=None, param=()) -> "CompatibleFormSequence":
        param = tuple(param)
        return cls(X, [PolyForm.zero(X.levels[n], param + (("t", n),)) for n in range(X.N + 1)], degree, param)

    @classmethod
    def from_local(cls, X: TruncatedSimplicialSet, fn, degree=None, param=()) -> "CompatibleFormSequence":
        """``fn(n, d, j, chart) -> LocalForm`` for simplex ``j`` of dim ``d`` in ``X_n``."""
        param = tuple(param)
        forms = []
        for n, K in enumerate(X.levels):
            pre = param + (("t", n),)
            comps = [[fn(n, d, j, pre + (("x", d),)) for j in range(K.count(d))] for d in range(K.dim + 1)]
            forms.append(PolyForm(K, comps, pre))
        return cls(X, forms, degree, param)

    def to_json(self) -> list:
        return [w.to_json() for w in self.forms]

    @classmethod
    def from_json(cls, X: TruncatedSimplicialSet, data: list, degree=None, param=()) -> "CompatibleFormSequence":
        """Inverse of ``to_json``: ``data[n][d][j]`` is the sparse term list of simplex ``j``."""
        param = tuple(param)
        if len(data) != X.N + 1:
            raise ValueError("need one entry per level")
        forms = []
        for n, (K, rows) in enumerate(zip(X.levels, data)):
            pre = param + (("t", n),)
            if len(rows) != K.dim + 1 or any(len(r) != K.count(d) for d, r in enumerate(rows)):
                raise ValueError(f"level {n} does not match the simplices of X_{n}")
            comps = [[LocalForm.from_json(pre + (("x", d),), t) for t in r] for d, r in enumerate(rows)]
            forms.append(PolyForm(K, comps, pre))
        return cls(X, forms, degree, param).check()


def power_sum(X: TruncatedSimplicialSet, a: int) -> CompatibleFormSequence:
    """``sum_i t_i^a`` on every level (``a = 0`` gives 1); faces permute nothing, so it is compatible."""
    if a == 0:
        return CompatibleFormSequence.constant(X)

    def fn(n, d, j, chart):
        f = LocalForm.zero(chart)
        for i in range(n + 1):
            v = LocalForm.var(chart, 0, i)
            p = LocalForm.const(chart)
            for _ in range(a):
                p = p.wedge(v)
            f = f + p
        return f
    return CompatibleFormSequence.from_local(X, fn, 0)


def E_total(X: TruncatedSimplicialSet, T: cc.TotalComplex, k: int, x: Sequence) -> CompatibleFormSequence:
    """Whitney extension of a total cochain to a compatible sequence.

    ``omega^(n) = sum_{r, I subset [n], |I| = r+1} w_I(t) ^ E_K(c_{r, k-r} o face_I)``.
    """
    forms = []
    for n, Kn in enumerate(X.levels):
        out = PolyForm.zero(Kn, (("t", n),))
        for r in range(min(n, k) + 1):
            s = k - r
            if (r, s) not in T.offsets:
                continue
            c = T.component(x, (r, s))
            if not any(c):
                continue
            for verts in combinations(range(n + 1), r + 1):
                f = face_subset_map(X, n, verts)
                pulled = [c[f.maps[s][j]] for j in range(Kn.count(s))] if s <= Kn.dim else []
                if not any(pulled):
                    continue
                ex = whitney_E(Kn, s, pulled)
                comps = []
                for d in range(Kn.dim + 1):
                    row = []
                    for j, loc in enumerate(ex.comps[d]):
                        chart = (("t", n), ("x", d))
                        wI = whitney_form(chart, 0, verts)
                        lifted = _lift_block(loc, chart)
                        row.append(wI.wedge(lifted))
                    comps.append(row)
                out = out + PolyForm(Kn, comps, (("t", n),))
        forms.append(out)
    return CompatibleFormSequence(X, forms, k)


def _lift_block(loc: LocalForm, chart) -> LocalForm:
    """Regard a form on ``(("x", d),)`` as a form on ``(("t", n), ("x", d))``."""
    n = chart[0][1]
    return LocalForm(chart, {((0,) * n + e, tuple(v + n for v in w)): c for (e, w), c in loc.terms.items()})


# ----------------------------------------------------------- Whitney model

@dataclass
class WhitneyModel:
    X: TruncatedSimplicialSet
    double: cc.DoubleComplex
    total: cc.TotalComplex
    checked: bool = False


def _reexpand(form: PolyForm, s: int) -> list:
    vals = integrate_I(form, s) if s <= form.K.dim else []
    back = whitney_E(form.K, s, vals) if vals else PolyForm.zero(form.K)
    if back != form:
        raise AssertionError("image is not a Whitney form")
    return vals


def whitney_model(X: TruncatedSimplicialSet) -> WhitneyModel:
    """Double complex spanned by Whitney forms on the levels, with both
    differentials computed on the forms themselves and re-expanded."""
    kinds, dh, dv = {}, {}, {}
    for r, K in enumerate(X.levels):
        for s in range(K.dim + 1):
            if K.count(s):
                kinds[(r, s)] = (False,) * K.count(s)
    for (r, s) in kinds:
        K = X.levels[r]
        gens = []
        for j in range(K.count(s)):
            e = [0] * K.count(s)
            e[j] = 1
            gens.append(whitney_E(K, s, e))
        if (r, s + 1) in kinds:
            cols = [_reexpand(g.d(), s + 1) for g in gens]
            dv[(r, s)] = la.columns_to_matrix(cols, K.count(s + 1))
        if (r + 1, s) in kinds:
            L = X.levels[r + 1]
            cols = []
            for g in gens:
                acc = PolyForm.zero(L)
                for i, f in enumerate(X.faces[r + 1]):
                    acc = acc + _pullback_level(g, f, K).scale((-1) ** i)
                cols.append(_reexpand(acc, s))
            dh[(r, s)] = la.columns_to_matrix(cols, L.count(s))
    D = cc.DoubleComplex(kinds, dh, dv)
    D.check()
    return WhitneyModel(X, D, cc.totalize(D), True)


def I_bridge(W: WhitneyModel, S: Optional[cc.TotalComplex] = None) -> cc.ChainMap:
    """Columnwise integration from the Whitney total complex to the cochain total complex."""
    S = S or cc.totalize(cochain_double_complex(W.X, "Q"))
    comps = {}
    for n in W.total.complex.degrees():
        if n not in S.complex.degrees():
            continue
        cols = []
        for pos in range(W.total.complex.rank(n)):
            idx, j = W.total.index_of(n, pos)
            r, s = idx
            K = W.X.levels[r]
            e = [0] * K.count(s)
            e[j] = 1
            vals = integrate_I(whitney_E(K, s, e), s)
            cols.append(S.embed(idx, vals))
        comps[n] = la.columns_to_matrix(cols, S.complex.rank(n))
    return cc.ChainMap(W.total.complex, S.complex, comps)


@dataclass
class QuasiIsoReport:
    degrees: list
    forms_side: dict = field(default_factory=dict)
    cochain_side: dict = field(default_factory=dict)
    iso: bool = False

    def summary(self) -> list[str]:
        return [f"H^{n}: forms {self.forms_side[n]} cochains {self.cochain_side[n]}" for n in self.degrees]


def quasi_iso_report(X: TruncatedSimplicialSet, degrees: Optional[Sequence[int]] = None) -> QuasiIsoReport:
    W = whitney_model(X)
    S = cc.totalize(cochain_double_complex(X, "Q"))
    degrees = list(range(X.N)) if degrees is None else list(degrees)
    f = I_bridge(W, S)
    rep = QuasiIsoReport(degrees)
    for n in degrees:
        rep.forms_side[n] = str(W.total.complex.cohomology(n).group)
        rep.cochain_side[n] = str(S.complex.cohomology(n).group)
    rep.iso = cc.is_quasi_isomorphism(f, degrees) and rep.forms_side == rep.cochain_side
    return rep


def random_compatible_form(X: TruncatedSimplicialSet, degree: int, rng, T: Optional[cc.TotalComplex] = None,
                           terms: int = 2, max_power: int = 2, coeff: int = 3) -> CompatibleFormSequence:
    """Random compatible ``degree``-form: power sums times Whitney extensions, plus an exact part."""
    T = T or cc.totalize(cochain_double_complex(X, "Q"))

    def rand_vec(k):
        return [Fraction(rng.randint(-coeff, coeff)) for _ in range(T.complex.rank(k))]

    out = CompatibleFormSequence.zero(X, degree)
    for _ in range(terms):
        if T.complex.rank(degree):
            piece = power_sum(X, rng.randint(0, max_power)).wedge(E_total(X, T, degree, rand_vec(degree)))
            out = out + piece
        if degree >= 1 and T.complex.rank(degree - 1):
            base = power_sum(X, rng.randint(1, max_power)).wedge(E_total(X, T, degree - 1, rand_vec(degree - 1)))
            out = out + base.d()
    out.degree = degree
    return out
