"""Exact polynomial differential forms on products of simplices.

A chart is a tuple of ``(name, q)`` blocks.  Block ``(name, q)`` carries the
barycentric coordinates ``t_0 .. t_q`` of a ``q``-simplex with ``t_0``
eliminated, so its free variables are ``name1 .. nameq``.  A form is a
sparse map ``(exponents, wedge) -> Fraction`` where ``wedge`` is a strictly
increasing tuple of variable indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial
from typing import Optional, Sequence

from . import chain_core as cc
from . import exact_linalg as la
from .simplicial import DeltaComplex


class ChartError(ValueError):
    pass


def _offsets(chart) -> list[int]:
    out, o = [], 0
    for _, q in chart:
        out.append(o)
        o += q
    return out


def _nvars(chart) -> int:
    return sum(q for _, q in chart)


def _merge_wedge(a: tuple, b: tuple):
    """Sign and sorted concatenation of two wedge words, or ``(0, None)``."""
    if set(a) & set(b):
        return 0, None
    inv = sum(1 for x in a for y in b if x > y)
    return (-1) ** inv, tuple(sorted(a + b))


class LocalForm:
    """A polynomial form on one chart."""

    __slots__ = ("chart", "terms")

    def __init__(self, chart, terms: Optional[dict] = None):
        self.chart = tuple((str(n), int(q)) for n, q in chart)
        nv = _nvars(self.chart)
        clean = {}
        for (e, w), c in (terms or {}).items():
            if c:
                if len(e) != nv or any(x < 0 or x >= nv for x in w) or list(w) != sorted(set(w)):
                    raise ChartError(f"bad term {(e, w)} for chart {self.chart}")
                clean[(tuple(e), tuple(w))] = Fraction(c)
        self.terms = clean

    # -- constructors
    @classmethod
    def zero(cls, chart) -> "LocalForm":
        return cls(chart)

    @classmethod
    def const(cls, chart, c=1) -> "LocalForm":
        return cls(chart, {((0,) * _nvars(chart), ()): Fraction(c)})

    @classmethod
    def var(cls, chart, block: int, i: int) -> "LocalForm":
        """Barycentric coordinate ``t_i`` of block ``block`` (``i = 0`` allowed)."""
        chart = tuple(chart)
        off, q = _offsets(chart)[block], chart[block][1]
        nv = _nvars(chart)
        if not 0 <= i <= q:
            raise ChartError(f"coordinate {i} out of range for block of dim {q}")
        if i == 0:
            out = {((0,) * nv, ()): Fraction(1)}
            for j in range(q):
                e = [0] * nv
                e[off + j] = 1
                out[(tuple(e), ())] = Fraction(-1)
            return cls(chart, out)
        e = [0] * nv
        e[off + i - 1] = 1
        return cls(chart, {(tuple(e), ()): Fraction(1)})

    @classmethod
    def dvar(cls, chart, block: int, i: int) -> "LocalForm":
        return cls.var(chart, block, i).d()

    # -- algebra
    @property
    def nvars(self) -> int:
        return _nvars(self.chart)

    def _same(self, other: "LocalForm"):
        if self.chart != other.chart:
            raise ChartError(f"chart mismatch {self.chart} vs {other.chart}")

    def __add__(self, other):
        if not isinstance(other, LocalForm):
            other = LocalForm.const(self.chart, other)
        self._same(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return LocalForm(self.chart, out)

    __radd__ = __add__

    def __neg__(self):
        return LocalForm(self.chart, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "LocalForm":
        c = Fraction(c)
        return LocalForm(self.chart, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, LocalForm):
            return self.wedge(other)
        return self.scale(other)

    __rmul__ = __mul__

    def wedge(self, other: "LocalForm") -> "LocalForm":
        self._same(other)
        out: dict = {}
        for (e1, w1), c1 in self.terms.items():
            for (e2, w2), c2 in other.terms.items():
                sgn, w = _merge_wedge(w1, w2)
                if not sgn:
                    continue
                k = (tuple(a + b for a, b in zip(e1, e2)), w)
                out[k] = out.get(k, 0) + sgn * c1 * c2
        return LocalForm(self.chart, out)

    def __xor__(self, other):
        return self.wedge(other)

    def d(self) -> "LocalForm":
        out: dict = {}
        for (e, w), c in self.terms.items():
            for v, a in enumerate(e):
                if not a or v in w:
                    continue
                pos = sum(1 for x in w if x < v)
                e2 = list(e)
                e2[v] -= 1
                k = (tuple(e2), tuple(sorted(w + (v,))))
                out[k] = out.get(k, 0) + (-1) ** pos * a * c
        return LocalForm(self.chart, out)

    def degrees(self) -> set[int]:
        return {len(w) for (_, w) in self.terms}

    def part(self, k: int) -> "LocalForm":
        return LocalForm(self.chart, {key: c for key, c in self.terms.items() if len(key[1]) == k})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LocalForm.const(self.chart, other)
        return isinstance(other, LocalForm) and self.chart == other.chart and self.terms == other.terms

    def __hash__(self):
        return hash((self.chart, frozenset(self.terms.items())))

    def __repr__(self):
        return f"LocalForm({self.chart}, {self.to_text()})"

    def poly_degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    def block_degree(self, block: int) -> set[int]:
        off, q = _offsets(self.chart)[block], self.chart[block][1]
        return {sum(1 for x in w if off <= x < off + q) for _, w in self.terms}

    # -- substitution and pullback
    def substitute(self, new_chart, images: Sequence["LocalForm"]) -> "LocalForm":
        """Pull back along a polynomial map: old variable ``v`` becomes ``images[v]``."""
        new_chart = tuple(new_chart)
        if len(images) != self.nvars:
            raise ChartError("need one image per variable")
        for im in images:
            if im.chart != new_chart or im.degrees() - {0}:
                raise ChartError("images must be functions on the new chart")
        diffs = [im.d() for im in images]
        powers: dict = {}

        def power(v, a):
            if (v, a) not in powers:
                powers[(v, a)] = LocalForm.const(new_chart) if a == 0 else power(v, a - 1).wedge(images[v])
            return powers[(v, a)]

        out = LocalForm.zero(new_chart)
        for (e, w), c in self.terms.items():
            f = LocalForm.const(new_chart, c)
            for v, a in enumerate(e):
                if a:
                    f = f.wedge(power(v, a))
            for v in w:
                f = f.wedge(diffs[v])
            out = out + f
        return out

    def integrate_over(self, block: int) -> "LocalForm":
        """Fiber integration over block ``block`` with the fiber placed first."""
        offs = _offsets(self.chart)
        off, q = offs[block], self.chart[block][1]
        fib = set(range(off, off + q))
        rest_chart = self.chart[:block] + self.chart[block + 1:]
        out: dict = {}
        for (e, w), c in self.terms.items():
            if not fib <= set(w):
                continue
            before = sum(1 for x in w if x < off)
            sgn = (-1) ** (before * q)
            a = e[off:off + q]
            val = Fraction(_mono_integral(tuple(a)))
            e2 = e[:off] + e[off + q:]
            w2 = tuple(x if x < off else x - q for x in w if x not in fib)
            k = (tuple(e2), w2)
            out[k] = out.get(k, 0) + sgn * c * val
        return LocalForm(rest_chart, out)

    def evaluate_constant(self) -> Fraction:
        """Value of a form on the empty chart."""
        if self.nvars:
            raise ChartError("not a constant")
        return self.terms.get(((), ()), Fraction(0))

    # -- encoding
    def var_names(self) -> list[str]:
        return [f"{n}{i}" for n, q in self.chart for i in range(1, q + 1)]

    def to_json(self) -> list:
        names = self.var_names()
        out = []
        for (e, w), c in sorted(self.terms.items()):
            out.append({
                "coeff": _frac_str(c),
                "monomial": {names[v]: a for v, a in enumerate(e) if a},
                "wedge": [names[v] for v in w],
            })
        return out

    @classmethod
    def from_json(cls, chart, data: list) -> "LocalForm":
        chart = tuple(tuple(b) for b in chart)
        names = [f"{n}{i}" for n, q in chart for i in range(1, q + 1)]
        idx = {n: i for i, n in enumerate(names)}
        terms: dict = {}
        for t in data:
            e = [0] * len(names)
            for n, a in t.get("monomial", {}).items():
                e[idx[n]] = int(a)
            ws = [idx[n] for n in t.get("wedge", [])]
            sgn = 1
            for i in range(len(ws)):
                for j in range(i + 1, len(ws)):
                    if ws[i] > ws[j]:
                        sgn = -sgn
            if len(set(ws)) < len(ws):
                continue
            k = (tuple(e), tuple(sorted(ws)))
            terms[k] = terms.get(k, 0) + sgn * Fraction(t["coeff"])
        return cls(chart, terms)

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        names = self.var_names()
        parts = []
        for (e, w), c in sorted(self.terms.items()):
            mono = "*".join(names[v] + (f"^{a}" if a > 1 else "") for v, a in enumerate(e) if a)
            wed = "^".join("d" + names[v] for v in w)
            body = " ".join(x for x in (mono, wed) if x)
            parts.append(f"{_frac_str(c)}{(' ' + body) if body else ''}")
        return " + ".join(parts)


def _frac_str(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


@lru_cache(maxsize=None)
def _mono_integral(a: tuple) -> Fraction:
    num = 1
    for x in a:
        num *= factorial(x)
    return Fraction(num, factorial(len(a) + sum(a)))


def simplex_integral(exponents: Sequence[int]) -> Fraction:
    """``int_{Delta^q} s_1^{a_1} ... s_q^{a_q} ds_1 ... ds_q``."""
    return _mono_integral(tuple(exponents))


# --------------------------------------------------------------- pullbacks

def block_images(chart, block: int, new_chart, new_block: int, bary: Sequence[Sequence]) -> list[LocalForm]:
    """Images of ``chart``'s variables for a map that is affine on one block.

    ``bary[j]`` lists coefficients expressing the old ``t_j`` (``j = 0..q``)
    as a combination of the new block's ``u_0 .. u_p``.  Other blocks map
    identically in order.
    """
    chart, new_chart = tuple(chart), tuple(new_chart)
    others_old = [b for b in range(len(chart)) if b != block]
    others_new = [b for b in range(len(new_chart)) if b != new_block]
    if len(others_old) != len(others_new):
        raise ChartError("block structures do not match")
    images: list = []
    for b in range(len(chart)):
        q = chart[b][1]
        for i in range(1, q + 1):
            if b == block:
                row = bary[i]
                f = LocalForm.zero(new_chart)
                for a, coef in enumerate(row):
                    if coef:
                        f = f + LocalForm.var(new_chart, new_block, a).scale(coef)
                images.append(f)
            else:
                nb = others_new[others_old.index(b)]
                images.append(LocalForm.var(new_chart, nb, i))
    return images


def vertex_map_bary(vmap: Sequence[int], q: int) -> list[list[int]]:
    """``t_j = sum_{vmap[a] = j} u_a`` for a simplicial map given on vertices."""
    return [[1 if vmap[a] == j else 0 for a in range(len(vmap))] for j in range(q + 1)]


def pullback_vertex_map(form: LocalForm, block: int, vmap: Sequence[int]) -> LocalForm:
    """Pull back along the affine map ``Delta^p -> Delta^q`` sending vertex ``a`` to ``vmap[a]``."""
    name, q = form.chart[block]
    p = len(vmap) - 1
    new_chart = form.chart[:block] + ((name, p),) + form.chart[block + 1:]
    return form.substitute(new_chart, block_images(form.chart, block, new_chart, block, vertex_map_bary(vmap, q)))


def coface_vmap(q: int, i: int) -> list[int]:
    """Vertex map of ``eps^i: Delta^{q-1} -> Delta^q`` (misses vertex ``i``)."""
    return [a if a < i else a + 1 for a in range(q)]


def codegen_vmap(q: int, i: int) -> list[int]:
    """Vertex map of ``Delta^{q+1} -> Delta^q`` collapsing ``i, i+1``."""
    return [a if a <= i else a - 1 for a in range(q + 2)]


def restrict_face(form: LocalForm, block: int, i: int) -> LocalForm:
    return pullback_vertex_map(form, block, coface_vmap(form.chart[block][1], i))


def pullback_affine(form: LocalForm, block: int, bary: Sequence[Sequence], p: int) -> LocalForm:
    name, _ = form.chart[block]
    new_chart = form.chart[:block] + ((name, p),) + form.chart[block + 1:]
    return form.substitute(new_chart, block_images(form.chart, block, new_chart, block, bary))


# --------------------------------------------------- Whitney forms & homotopy

def whitney_form(chart, block: int, verts: Sequence[int]) -> LocalForm:
    """``k! sum_j (-1)^j t_{i_j} dt_{i_0} ... (omit j) ... dt_{i_k}``."""
    k = len(verts) - 1
    out = LocalForm.zero(chart)
    for j in range(k + 1):
        f = LocalForm.var(chart, block, verts[j])
        for m, v in enumerate(verts):
            if m != j:
                f = f.wedge(LocalForm.dvar(chart, block, v))
        out = out + f.scale((-1) ** j)
    return out.scale(factorial(k))


def _simplex_chart(q: int, name: str = "t"):
    return ((name, q),)


def integrate_simplex(form: LocalForm) -> Fraction:
    """Integral of a form on a single-block chart over its simplex."""
    if len(form.chart) != 1:
        raise ChartError("expected a single-block chart")
    return form.integrate_over(0).evaluate_constant()


def face_integrals(form: LocalForm, k: int) -> dict:
    """``{vertex tuple: integral over that k-face}`` on a single-block chart."""
    q = form.chart[0][1]
    out = {}
    for verts in combinations(range(q + 1), k + 1):
        out[verts] = integrate_simplex(pullback_vertex_map(form.part(k), 0, list(verts)))
    return out


def local_EI(form: LocalForm) -> LocalForm:
    """``E(I(form))`` on one simplex."""
    q = form.chart[0][1]
    out = LocalForm.zero(form.chart)
    for k in form.degrees():
        if k > q:
            continue
        for verts, val in face_integrals(form, k).items():
            if val:
                out = out + whitney_form(form.chart, 0, verts).scale(val)
    return out


def cone_homotopy(form: LocalForm, j: int) -> LocalForm:
    """``h_j = int_{Delta^1} F^*`` for ``F(u, x) = e_j + u (x - e_j)``; ``dh + hd = id - ev_j^*``."""
    if len(form.chart) != 1:
        raise ChartError("cone homotopy is defined on single-block charts")
    name, q = form.chart[0]
    new_chart = (("u", 1), (name, q))
    u = LocalForm.var(new_chart, 0, 1)
    images = []
    for m in range(1, q + 1):
        x = LocalForm.var(new_chart, 1, m)
        e = 1 if m == j else 0
        images.append(u.wedge(x - e) + e)
    return form.substitute(new_chart, images).integrate_over(0)


def homotopy_local(form: LocalForm) -> LocalForm:
    """Dupont-type operator on one simplex: ``sum_k sum_I (-1)^k w_I h_{i_k} ... h_{i_0}``.

    ``w_I`` is the Whitney form (it already carries ``k!``).  Satisfies
    ``dh + hd = id - EI``.
    """
    q = form.chart[0][1]
    out = LocalForm.zero(form.chart)
    cache: dict = {(): form}

    def chain(verts):
        if verts not in cache:
            cache[verts] = cone_homotopy(chain(verts[:-1]), verts[-1])
        return cache[verts]

    for k in range(q):
        for verts in combinations(range(q + 1), k + 1):
            hv = chain(verts)
            if hv.is_zero():
                continue
            out = out + whitney_form(form.chart, 0, verts).scale((-1) ** k).wedge(hv)
    return out


# ------------------------------------------------------- forms on complexes

@dataclass
class PolyForm:
    """Compatible family of local forms: one per simplex of ``K`` on chart ``prefix + (name, dim)``."""

    K: DeltaComplex
    comps: list        # comps[d][j]: LocalForm
    prefix: tuple = ()
    name: str = "x"

    def chart(self, d: int):
        return tuple(self.prefix) + ((self.name, d),)

    def check(self):
        blk = len(self.prefix)
        for d in range(self.K.dim + 1):
            for j, f in enumerate(self.comps[d]):
                if f.chart != self.chart(d):
                    raise ChartError(f"component {d}:{j} lives on the wrong chart")
                for i in range(d + 1 if d else 0):
                    if restrict_face(f, blk, i) != self.comps[d - 1][self.K.face(d, j, i)]:
                        raise ChartError(f"component {d}:{j} disagrees with face {i}")
        return self

    def _map(self, fn) -> "PolyForm":
        return PolyForm(self.K, [[fn(f) for f in row] for row in self.comps], self.prefix, self.name)

    def _zip(self, other, fn) -> "PolyForm":
        if other.K is not self.K and not other.K.same_shape(self.K):
            raise ChartError("forms live on different complexes")
        return PolyForm(self.K, [[fn(a, b) for a, b in zip(r1, r2)] for r1, r2 in zip(self.comps, other.comps)],
                        self.prefix, self.name)

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self):
        return self._map(lambda a: -a)

    def scale(self, c) -> "PolyForm":
        return self._map(lambda a: a.scale(c))

    def wedge(self, other: "PolyForm") -> "PolyForm":
        return self._zip(other, lambda a, b: a.wedge(b))

    def d(self) -> "PolyForm":
        return self._map(lambda a: a.d())

    def part(self, k: int) -> "PolyForm":
        return self._map(lambda a: a.part(k))

    def is_zero(self) -> bool:
        return all(f.is_zero() for row in self.comps for f in row)

    def __eq__(self, other):
        return isinstance(other, PolyForm) and self.comps == other.comps

    def integrate_over(self, block: int) -> "PolyForm":
        if block >= len(self.prefix):
            raise ChartError("cannot integrate over the complex block")
        pre = tuple(self.prefix[:block]) + tuple(self.prefix[block + 1:])
        return PolyForm(self.K, [[f.integrate_over(block) for f in row] for row in self.comps], pre, self.name)

    @classmethod
    def zero(cls, K: DeltaComplex, prefix=(), name="x") -> "PolyForm":
        return cls(K, [[LocalForm.zero(tuple(prefix) + ((name, d),)) for _ in range(K.count(d))]
                       for d in range(K.dim + 1)], tuple(prefix), name)

    @classmethod
    def constant(cls, K: DeltaComplex, c=1, prefix=(), name="x") -> "PolyForm":
        return cls(K, [[LocalForm.const(tuple(prefix) + ((name, d),), c) for _ in range(K.count(d))]
                       for d in range(K.dim + 1)], tuple(prefix), name)

    def to_json(self) -> list:
        return [[f.to_json() for f in row] for row in self.comps]


def whitney_E(K: DeltaComplex, k: int, c: Sequence, name: str = "x") -> PolyForm:
    """Whitney extension of a ``k``-cochain ``c`` on ``K``."""
    if len(c) != K.count(k):
        raise la.DimensionError("cochain length does not match the complex")
    comps = []
    for d in range(K.dim + 1):
        row = []
        chart = ((name, d),)
        for j in range(K.count(d)):
            f = LocalForm.zero(chart)
            if k <= d:
                for verts in combinations(range(d + 1), k + 1):
                    val = c[K.subface(d, j, verts)]
                    if val:
                        f = f + whitney_form(chart, 0, verts).scale(val)
            row.append(f)
        comps.append(row)
    return PolyForm(K, comps, (), name)


def integrate_I(form: PolyForm, k: int) -> list[Fraction]:
    """Cochain of integrals of the degree-``k`` part over the ``k``-simplices."""
    if form.prefix:
        raise ChartError("integrate_I expects a form on the complex alone")
    return [integrate_simplex(f.part(k)) for f in form.comps[k]] if k <= form.K.dim else []


def homotopy_h(form: PolyForm) -> PolyForm:
    if form.prefix:
        raise ChartError("homotopy_h expects a form on the complex alone")
    return form._map(homotopy_local)


def EI(form: PolyForm) -> PolyForm:
    if form.prefix:
        raise ChartError("EI expects a form on the complex alone")
    out = PolyForm.zero(form.K, (), form.name)
    for k in range(form.K.dim + 1):
        part = form.part(k)
        if not part.is_zero():
            out = out + whitney_E(form.K, k, integrate_I(part, k), form.name)
    return out


def simplicial_cochains(K: DeltaComplex, ring: str = "Q") -> cc.CochainComplex:
    from .simplicial import _coboundary
    integral = ring == "Z"
    kinds = {d: (integral,) * K.count(d) for d in range(K.dim + 1) if K.count(d)}
    diff = {d: _coboundary(K, d) for d in range(K.dim) if K.count(d) and K.count(d + 1)}
    return cc.CochainComplex(kinds, diff, name="C(K)")


def find_potential(form: PolyForm, k: int) -> Optional[PolyForm]:
    """``eta`` with ``d eta = form`` (a closed ``k``-form), or ``None`` if the class is nonzero."""
    if not form.d().is_zero():
        raise ValueError("find_potential needs a closed form")
    if form.is_zero():
        return PolyForm.zero(form.K, form.prefix, form.name)
    if k == 0:
        return None
    C = simplicial_cochains(form.K, "Q")
    c = integrate_I(form, k)
    if k > form.K.dim:
        beta = []
    else:
        beta = C.cohomology(k).primitive(c)
        if beta is None:
            return None
    eta = homotopy_h(form)
    if k - 1 <= form.K.dim and any(beta):
        eta = eta + whitney_E(form.K, k - 1, beta, form.name)
    if eta.d() != form:
        raise AssertionError("potential check failed")
    return eta
