"""Cochain complexes over Z, Q, or mixtures of both, and the standard
constructions on them: totalization, mapping cones, truncation,
cohomology and long exact sequences.

A complex stores, per degree, a tuple of coordinate kinds (``True`` for an
integral coordinate, ``False`` for a rational one) and the differential
``d^n`` as a dense matrix from degree ``n`` to ``n + 1``.  Degrees outside
``[lo, hi]`` are zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import exact_linalg as la


class ComplexError(ValueError):
    pass


def _check_map_kinds(M, src_kinds, dst_kinds, what):
    for i, row in enumerate(M):
        for j, x in enumerate(row):
            if not x:
                continue
            if dst_kinds[i] and not src_kinds[j]:
                raise ComplexError(f"{what}: nonzero map from a rational to an integral coordinate")
            if dst_kinds[i] and Fraction(x).denominator != 1:
                raise ComplexError(f"{what}: non-integral entry into an integral coordinate")


def _dims(M, nrows, ncols):
    if nrows == 0:
        return len(M) == 0 or M == []
    return len(M) == nrows and all(len(r) == ncols for r in M)


@dataclass
class CochainComplex:
    kinds: dict  # degree -> tuple[bool]
    diff: dict   # degree n -> matrix d^n (rank(n+1) x rank(n))
    labels: dict = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        self.kinds = {n: tuple(k) for n, k in self.kinds.items() if len(k)}
        for n in list(self.diff):
            src, dst = self.rank(n), self.rank(n + 1)
            if src == 0 or dst == 0:
                del self.diff[n]
                continue
            M = self.diff[n]
            if not _dims(M, dst, src):
                raise ComplexError(f"d^{n} has the wrong shape")
            _check_map_kinds(M, self.kind(n), self.kind(n + 1), f"d^{n}")
        for n in self.degrees():
            a, b = self.d(n), self.d(n + 1)
            if a and b:
                prod = la.matmul(b, a)
                if any(x for row in prod for x in row):
                    raise ComplexError(f"d^{n + 1} d^{n} != 0")

    # -- shape
    def degrees(self) -> list[int]:
        return sorted(self.kinds)

    @property
    def lo(self) -> int:
        return min(self.kinds) if self.kinds else 0

    @property
    def hi(self) -> int:
        return max(self.kinds) if self.kinds else -1

    def rank(self, n: int) -> int:
        return len(self.kinds.get(n, ()))

    def kind(self, n: int) -> tuple:
        return self.kinds.get(n, ())

    def d(self, n: int):
        """``d^n`` as a matrix, or ``None`` when it is the zero map."""
        return self.diff.get(n)

    def d_full(self, n: int):
        M = self.diff.get(n)
        if M is None:
            return la.zeros(self.rank(n + 1), self.rank(n))
        return M

    def apply(self, n: int, x: Sequence) -> list:
        M = self.d(n)
        if M is None:
            return [Fraction(0)] * self.rank(n + 1)
        return la.matvec(M, x)

    @property
    def ring(self) -> str:
        ks = {k for n in self.kinds for k in self.kinds[n]}
        if ks == {True}:
            return "Z"
        if ks == {False}:
            return "Q"
        return "mixed" if ks else "Z"

    def is_cocycle(self, n: int, x: Sequence) -> bool:
        return la.is_zero_vector(self.apply(n, x))

    def in_module(self, n: int, x: Sequence) -> bool:
        if len(x) != self.rank(n):
            return False
        return all(not k or Fraction(v).denominator == 1 for k, v in zip(self.kind(n), x))

    def same_as(self, other: "CochainComplex") -> bool:
        if self.kinds != other.kinds:
            return False
        for n in self.degrees():
            if la.matmul(self.d_full(n), la.identity(self.rank(n))) != la.matmul(
                    other.d_full(n), la.identity(other.rank(n))):
                return False
        return True

    def __eq__(self, other):
        return isinstance(other, CochainComplex) and self.same_as(other)

    # -- cohomology
    def cocycles(self, n: int) -> la.MixedBasis:
        M = self.d(n)
        return la.mixed_kernel(M if M is not None else [], self.kind(n))

    def coboundaries(self, n: int) -> la.MixedSubgroup:
        dim = self.rank(n)
        M = self.d(n - 1)
        if M is None:
            return la.MixedSubgroup(dim)
        cols = la.matrix_columns(M, self.rank(n - 1))
        kinds = self.kind(n - 1)
        return la.MixedSubgroup(
            dim,
            [c for c, k in zip(cols, kinds) if k and not la.is_zero_vector(c)],
            [c for c, k in zip(cols, kinds) if not k and not la.is_zero_vector(c)],
        )

    def cohomology(self, n: int) -> "CohomologyGroup":
        return cohomology(self, n)


@dataclass
class CohomologyGroup:
    """``H^n`` with cocycle/coboundary data for membership questions."""

    complex: CochainComplex
    degree: int
    quotient: la.MixedQuotient

    @property
    def group(self) -> la.AbelianGroup:
        return self.quotient.group

    def invariants(self):
        return self.group.invariants()

    def is_coboundary(self, x: Sequence) -> bool:
        return self.quotient.boundaries.contains(x)

    def order(self, x: Sequence, bound: int = 1000) -> Optional[int]:
        return self.quotient.order(x, bound)

    def primitive(self, x: Sequence) -> Optional[list]:
        """Some ``y`` in degree ``n-1`` with ``d y = x``, honoring coordinate kinds."""
        C, n = self.complex, self.degree
        M = C.d(n - 1)
        if M is None:
            return [] if la.is_zero_vector(x) and C.rank(n - 1) == 0 else (
                [Fraction(0)] * C.rank(n - 1) if la.is_zero_vector(x) else None)
        kinds = C.kind(n - 1)
        cols = la.matrix_columns(M, C.rank(n - 1))
        zi = [j for j, k in enumerate(kinds) if k]
        qi = [j for j, k in enumerate(kinds) if not k]
        sub = la.MixedSubgroup(C.rank(n), [cols[j] for j in zi], [cols[j] for j in qi])
        sol = sub.solve(x)
        if sol is None:
            return None
        k, mu = sol
        y = [Fraction(0)] * C.rank(n - 1)
        for j, v in zip(zi, k):
            y[j] = Fraction(v)
        for j, v in zip(qi, mu):
            y[j] = v
        return y


def cohomology(C: CochainComplex, n: int) -> CohomologyGroup:
    Z = C.cocycles(n)
    B = C.coboundaries(n)
    return CohomologyGroup(C, n, la.mixed_quotient(Z, B))


# ----------------------------------------------------------------- maps

@dataclass
class ChainMap:
    source: CochainComplex
    target: CochainComplex
    comps: dict  # degree -> matrix (target rank x source rank)
    name: str = ""

    def __post_init__(self):
        for n in list(self.comps):
            if self.source.rank(n) == 0 or self.target.rank(n) == 0:
                del self.comps[n]
                continue
            M = self.comps[n]
            if not _dims(M, self.target.rank(n), self.source.rank(n)):
                raise ComplexError(f"chain map component {n} has the wrong shape")
            _check_map_kinds(M, self.source.kind(n), self.target.kind(n), f"f^{n}")
        for n in set(self.source.degrees()) | set(self.target.degrees()):
            left = la.matmul(self.target.d_full(n), self.full(n), ncols=self.source.rank(n))
            right = la.matmul(self.full(n + 1), self.source.d_full(n), ncols=self.source.rank(n))
            if left != right:
                raise ComplexError(f"chain map does not commute with d in degree {n}")

    def full(self, n: int):
        M = self.comps.get(n)
        if M is None:
            return la.zeros(self.target.rank(n), self.source.rank(n))
        return M

    def apply(self, n: int, x: Sequence) -> list:
        M = self.comps.get(n)
        if M is None:
            return [Fraction(0)] * self.target.rank(n)
        return la.matvec(M, x)


def identity_map(C: CochainComplex) -> ChainMap:
    return ChainMap(C, C, {n: la.identity(C.rank(n)) for n in C.degrees()})


def compose(g: ChainMap, f: ChainMap) -> ChainMap:
    comps = {}
    for n in f.source.degrees():
        comps[n] = la.matmul(g.full(n), f.full(n), ncols=f.source.rank(n))
    return ChainMap(f.source, g.target, comps)


def zero_complex() -> CochainComplex:
    return CochainComplex({}, {})


def direct_sum(A: CochainComplex, B: CochainComplex) -> CochainComplex:
    kinds, diff = {}, {}
    degs = sorted(set(A.degrees()) | set(B.degrees()))
    for n in degs:
        kinds[n] = A.kind(n) + B.kind(n)
    for n in degs:
        ra, rb = A.rank(n), B.rank(n)
        sa, sb = A.rank(n + 1), B.rank(n + 1)
        if (ra + rb) == 0 or (sa + sb) == 0:
            continue
        M = la.zeros(sa + sb, ra + rb)
        da, db = A.d(n), B.d(n)
        if da:
            for i in range(sa):
                M[i][:ra] = list(da[i])
        if db:
            for i in range(sb):
                M[sa + i][ra:] = list(db[i])
        diff[n] = M
    return CochainComplex(kinds, diff)


def hstack_map(f: ChainMap, g: ChainMap, source: CochainComplex) -> ChainMap:
    """``(a, b) -> f(a) + g(b)`` from ``source = f.source (+) g.source``."""
    comps = {}
    for n in source.degrees():
        F, G = f.full(n), g.full(n)
        comps[n] = [list(r1) + list(r2) for r1, r2 in zip(F, G)] if f.target.rank(n) else []
    return ChainMap(source, f.target, comps)


def scale_map(f: ChainMap, c) -> ChainMap:
    return ChainMap(f.source, f.target, {n: [[c * x for x in row] for row in M] for n, M in f.comps.items()})


# ----------------------------------------------------------------- cone

@dataclass
class Cone:
    """``cone(f)^n = A^n (+) B^(n-1)``, ``d(a, b) = (d_A a, (-1)^(n+1) f(a) + d_B b)``."""

    f: ChainMap
    complex: CochainComplex
    inject_b: ChainMap     # B[-1] -> cone
    project_a: ChainMap    # cone -> A

    def split(self, n: int, x: Sequence):
        ra = self.f.source.rank(n)
        return list(x[:ra]), list(x[ra:])

    def join(self, a: Sequence, b: Sequence) -> list:
        return list(a) + list(b)


def shift_down(B: CochainComplex) -> CochainComplex:
    """``B[-1]``: degree ``n`` holds ``B^(n-1)`` (differential kept as ``d_B``)."""
    kinds = {n + 1: k for n, k in B.kinds.items()}
    diff = {n + 1: M for n, M in B.diff.items()}
    return CochainComplex(kinds, diff)


def cone(f: ChainMap) -> Cone:
    A, B = f.source, f.target
    degs = sorted(set(A.degrees()) | {n + 1 for n in B.degrees()})
    kinds = {n: A.kind(n) + B.kind(n - 1) for n in degs}
    diff = {}
    for n in degs:
        ra, rb = A.rank(n), B.rank(n - 1)
        sa, sb = A.rank(n + 1), B.rank(n)
        if ra + rb == 0 or sa + sb == 0:
            continue
        M = la.zeros(sa + sb, ra + rb)
        da = A.d(n)
        if da:
            for i in range(sa):
                M[i][:ra] = list(da[i])
        sign = 1 if (n + 1) % 2 == 0 else -1
        fn = f.comps.get(n)
        if fn:
            for i in range(sb):
                for j in range(ra):
                    if fn[i][j]:
                        M[sa + i][j] = sign * fn[i][j]
        db = B.d(n - 1)
        if db:
            for i in range(sb):
                for j in range(rb):
                    M[sa + i][ra + j] = db[i][j]
        diff[n] = M
    C = CochainComplex(kinds, diff)
    Bs = shift_down(B)
    inj, proj = {}, {}
    for n in degs:
        ra, rb = A.rank(n), B.rank(n - 1)
        if rb:
            inj[n] = [[1 if i == ra + j else 0 for j in range(rb)] for i in range(ra + rb)]
        if ra:
            proj[n] = [[1 if j == i else 0 for j in range(ra + rb)] for i in range(ra)]
    return Cone(f, C, ChainMap(Bs, C, inj), ChainMap(C, A, proj))


def two_source_cone(a_map: ChainMap, w_map: ChainMap) -> Cone:
    """``cone(A (+) F -> C)`` along ``(a, w) -> a_map(a) - w_map(w)``."""
    src = direct_sum(a_map.source, w_map.source)
    return cone(hstack_map(a_map, scale_map(w_map, -1), src))


# ------------------------------------------------------------ truncation

@dataclass
class Truncation:
    complex: CochainComplex
    map: ChainMap  # inclusion (>=) or projection (<)


def truncate(C: CochainComplex, p: int, side: str = ">=") -> Truncation:
    """``sigma_{>=p}`` (subcomplex, with inclusion) or ``sigma_{<p}`` (quotient)."""
    if side in (">=", "ge"):
        keep = [n for n in C.degrees() if n >= p]
    elif side in ("<", "lt"):
        keep = [n for n in C.degrees() if n < p]
    else:
        raise ValueError(f"unknown side {side!r}")
    kinds = {n: C.kind(n) for n in keep}
    diff = {n: C.diff[n] for n in keep if n in C.diff and (n + 1) in kinds}
    T = CochainComplex(kinds, diff)
    ids = {n: la.identity(C.rank(n)) for n in keep}
    if side in (">=", "ge"):
        return Truncation(T, ChainMap(T, C, ids))
    return Truncation(T, ChainMap(C, T, ids))


def subcomplex(C: CochainComplex, basis: dict) -> tuple[CochainComplex, ChainMap]:
    """Subcomplex spanned by coordinate subsets ``basis[n]`` (must be d-closed)."""
    kinds, diff = {}, {}
    for n, idx in basis.items():
        if idx:
            kinds[n] = tuple(C.kind(n)[i] for i in idx)
    for n, idx in basis.items():
        M = C.d(n)
        if M is None or not idx:
            continue
        tgt = basis.get(n + 1, [])
        tset = set(tgt)
        for i in range(C.rank(n + 1)):
            if i not in tset and any(M[i][j] for j in idx):
                raise ComplexError(f"coordinate subset is not closed under d in degree {n}")
        if tgt:
            diff[n] = [[M[i][j] for j in idx] for i in tgt]
    S = CochainComplex(kinds, diff)
    comps = {}
    for n, idx in basis.items():
        if idx:
            comps[n] = [[1 if j_sub_i == i else 0 for j_sub_i in idx] for i in range(C.rank(n))]
    return S, ChainMap(S, C, comps)


def quotient_complex(C: CochainComplex, basis: dict) -> tuple[CochainComplex, ChainMap]:
    """``C / S`` for the coordinate subcomplex ``S`` given by ``basis``."""
    rest = {n: [i for i in range(C.rank(n)) if i not in set(basis.get(n, []))] for n in C.degrees()}
    kinds = {n: tuple(C.kind(n)[i] for i in idx) for n, idx in rest.items() if idx}
    diff = {}
    for n, idx in rest.items():
        M = C.d(n)
        tgt = rest.get(n + 1, [])
        if M is None or not idx or not tgt:
            continue
        diff[n] = [[M[i][j] for j in idx] for i in tgt]
    Q = CochainComplex(kinds, diff)
    comps = {}
    for n, idx in rest.items():
        if idx:
            comps[n] = [[1 if j == i else 0 for j in range(C.rank(n))] for i in idx]
    return Q, ChainMap(C, Q, comps)


@dataclass
class FiltrationSpec:
    """One filtration step ``F^r`` given as a coordinate subcomplex."""

    name: str
    complex: CochainComplex
    basis: dict

    @property
    def sub(self) -> CochainComplex:
        return subcomplex(self.complex, self.basis)[0]

    @property
    def inclusion(self) -> ChainMap:
        return subcomplex(self.complex, self.basis)[1]

    def contains(self, n: int, x: Sequence) -> bool:
        allowed = set(self.basis.get(n, []))
        return all(v == 0 for i, v in enumerate(x) if i not in allowed)

    def factors_through(self, other: "FiltrationSpec") -> bool:
        return all(set(idx) <= set(other.basis.get(n, [])) for n, idx in self.basis.items())

    @classmethod
    def bete(cls, C: CochainComplex, p: int) -> "FiltrationSpec":
        return cls(f"bete({p})", C, {n: list(range(C.rank(n))) for n in C.degrees() if n >= p})

    @classmethod
    def whole(cls, C: CochainComplex) -> "FiltrationSpec":
        return cls("whole", C, {n: list(range(C.rank(n))) for n in C.degrees()})

    @classmethod
    def zero(cls, C: CochainComplex) -> "FiltrationSpec":
        return cls("zero", C, {})

    @classmethod
    def column(cls, C: CochainComplex, p: int, column_of: Callable[[int, int], int]) -> "FiltrationSpec":
        """Keep coordinates whose first (simplicial) index is ``>= p``."""
        return cls(f"column({p})", C, {
            n: [i for i in range(C.rank(n)) if column_of(n, i) >= p] for n in C.degrees()})

    @classmethod
    def user(cls, C: CochainComplex, basis: dict, name: str = "user") -> "FiltrationSpec":
        spec = cls(name, C, {int(n): sorted(v) for n, v in basis.items()})
        spec.sub  # validates closure under d
        return spec

    def truncated(self, k: int) -> "FiltrationSpec":
        """``sigma_{>=k}`` of this step."""
        return FiltrationSpec(f"sigma>={k}({self.name})", self.complex,
                              {n: v for n, v in self.basis.items() if n >= k})


# ----------------------------------------------------- multi-complexes

@dataclass
class DoubleComplex:
    """Ranks and kinds at ``(r, s)`` with commuting ``dh: (r,s)->(r+1,s)``, ``dv: (r,s)->(r,s+1)``."""

    kinds: dict
    dh: dict
    dv: dict

    def rank(self, r, s):
        return len(self.kinds.get((r, s), ()))

    def check(self):
        for (r, s) in self.kinds:
            h1, v1 = self.dh.get((r, s)), self.dv.get((r, s))
            h2, v2 = self.dh.get((r, s + 1)), self.dv.get((r + 1, s))
            n0 = self.rank(r, s)
            n1 = self.rank(r + 1, s + 1)
            if n0 == 0 or n1 == 0:
                continue
            a = la.matmul(h2, v1, ncols=n0) if (h2 and v1) else la.zeros(n1, n0)
            b = la.matmul(v2, h1, ncols=n0) if (v2 and h1) else la.zeros(n1, n0)
            if a != b:
                raise ComplexError(f"axis differentials do not commute at {(r, s)}")


@dataclass
class TripleComplex:
    kinds: dict
    d1: dict
    d2: dict
    d3: dict

    def rank(self, r, s, t):
        return len(self.kinds.get((r, s, t), ()))


@dataclass
class TotalComplex:
    complex: CochainComplex
    offsets: dict  # multi-index -> (degree, start offset)
    kinds: dict    # multi-index -> coordinate kinds

    def component(self, x: Sequence, index) -> list:
        n, off = self.offsets[index]
        return list(x[off:off + len(self.kinds[index])])

    def embed(self, index, y: Sequence) -> list:
        n, off = self.offsets[index]
        x = [Fraction(0)] * self.complex.rank(n)
        x[off:off + len(y)] = [Fraction(v) for v in y]
        return x

    def index_of(self, n: int, pos: int):
        for idx, (deg, off) in self.offsets.items():
            if deg == n and off <= pos < off + len(self.kinds[idx]):
                return idx, pos - off
        raise KeyError(pos)


def _totalize(kinds: dict, axes: list[dict], sign_fns: list[Callable]) -> TotalComplex:
    degree = {}
    order: dict = {}
    for idx in sorted(kinds):
        n = sum(idx)
        order.setdefault(n, []).append(idx)
    offsets, tk = {}, {}
    for n, idxs in order.items():
        off, kk = 0, []
        for idx in idxs:
            offsets[idx] = (n, off)
            off += len(kinds[idx])
            kk += list(kinds[idx])
        tk[n] = tuple(kk)
        degree[n] = off
    diff = {}
    for n, idxs in order.items():
        if (n + 1) not in degree:
            continue
        M = la.zeros(degree[n + 1], degree[n])
        for idx in idxs:
            _, off = offsets[idx]
            for ax, (maps, sgn) in enumerate(zip(axes, sign_fns)):
                D = maps.get(idx)
                if not D:
                    continue
                tgt = tuple(v + (1 if a == ax else 0) for a, v in enumerate(idx))
                if tgt not in offsets:
                    continue
                _, toff = offsets[tgt]
                e = sgn(idx)
                for i, row in enumerate(D):
                    for j, x in enumerate(row):
                        if x:
                            M[toff + i][off + j] += e * x
        diff[n] = M
    return TotalComplex(CochainComplex(tk, diff), offsets, kinds)


def totalize(D) -> TotalComplex:
    """Total complex with ``d = d' + (-1)^r d''`` (triple: ``+ (-1)^(r+s) d'''``)."""
    if isinstance(D, DoubleComplex):
        D.check()
        return _totalize(D.kinds, [D.dh, D.dv], [lambda i: 1, lambda i: (-1) ** i[0]])
    if isinstance(D, TripleComplex):
        return _totalize(D.kinds, [D.d1, D.d2, D.d3],
                         [lambda i: 1, lambda i: (-1) ** i[0], lambda i: (-1) ** (i[0] + i[1])])
    raise TypeError("expected a DoubleComplex or TripleComplex")


# ------------------------------------------------- long exact sequences

@dataclass
class LESNode:
    label: str
    degree: int
    group: la.AbelianGroup
    exact: bool


@dataclass
class LESReport:
    nodes: list
    failures: int

    @property
    def exact(self) -> bool:
        return self.failures == 0

    def summary(self) -> list[str]:
        return [f"{n.label}^{n.degree} = {n.group}: {'exact' if n.exact else 'NOT exact'}" for n in self.nodes]


def _kernel_of_induced(f_apply, Zsrc: la.MixedBasis, tgt: CochainComplex, n_tgt: int) -> la.MixedSubgroup:
    """Cocycles ``z`` of the source whose image under ``f_apply`` is a coboundary in ``tgt``."""
    zgens = Zsrc.int_basis + Zsrc.rat_basis
    kinds = [True] * len(Zsrc.int_basis) + [False] * len(Zsrc.rat_basis)
    prev = tgt.rank(n_tgt - 1)
    dprev = tgt.d(n_tgt - 1)
    cols = [f_apply(z) for z in zgens]
    if dprev is not None:
        cols += [[-x for x in c] for c in la.matrix_columns(dprev, prev)]
        kinds += list(tgt.kind(n_tgt - 1))
    if not kinds:
        return la.MixedSubgroup(Zsrc.dim)
    dim_t = tgt.rank(n_tgt)
    M = la.columns_to_matrix(cols, dim_t) if dim_t else []
    K = la.mixed_kernel(M, kinds)
    nz = len(zgens)

    def to_src(c):
        x = [Fraction(0)] * Zsrc.dim
        for coef, z in zip(c[:nz], zgens):
            if coef:
                x = [a + coef * b for a, b in zip(x, z)]
        return x
    return la.MixedSubgroup(Zsrc.dim, [to_src(c) for c in K.int_basis], [to_src(c) for c in K.rat_basis])


def _image_subgroup(f_apply, Zsrc: la.MixedBasis, B_tgt: la.MixedSubgroup) -> la.MixedSubgroup:
    return la.MixedSubgroup(
        B_tgt.dim,
        [f_apply(z) for z in Zsrc.int_basis] + B_tgt.int_gens,
        [f_apply(z) for z in Zsrc.rat_basis] + B_tgt.rat_gens,
    )


def _subgroups_equal(X: la.MixedSubgroup, Y: la.MixedSubgroup) -> bool:
    return X.contains_subgroup(Y) and Y.contains_subgroup(X)


def les_of_ses(A: CochainComplex, B: CochainComplex, C: CochainComplex,
               a_idx: dict, c_idx: dict, degrees: Sequence[int],
               labels=("A", "B", "C")) -> LESReport:
    """Exactness of the cohomology sequence of a degreewise split SES.

    ``a_idx[n]`` / ``c_idx[n]`` give the positions of ``A^n`` / ``C^n`` inside
    ``B^n``; ``B^n = A^n (+) C^n`` as modules, ``A`` a subcomplex.
    """
    def inc(n):
        return lambda x: _scatter(x, a_idx.get(n, []), B.rank(n))

    def proj(n):
        return lambda y: [y[i] for i in c_idx.get(n, [])]

    def connecting(n):
        # H^n(C) -> H^(n+1)(A): lift, apply d_B, read off the A-part
        def f(z):
            y = _scatter(z, c_idx.get(n, []), B.rank(n))
            dy = B.apply(n, y)
            return [dy[i] for i in a_idx.get(n + 1, [])]
        return f

    nodes, failures = [], 0
    for n in degrees:
        ZA, ZB, ZC = A.cocycles(n), B.cocycles(n), C.cocycles(n)
        BA, BB, BC = A.coboundaries(n), B.coboundaries(n), C.coboundaries(n)
        # node A^n: im(connecting^(n-1)) == ker(inc)
        ZCp = C.cocycles(n - 1)
        im_a = _image_subgroup(connecting(n - 1), ZCp, BA)
        ker_a = _kernel_of_induced(inc(n), ZA, B, n)
        ok_a = _subgroups_equal(im_a + BA, ker_a + BA)
        # node B^n: im(inc) == ker(proj)
        im_b = _image_subgroup(inc(n), ZA, BB)
        ker_b = _kernel_of_induced(proj(n), ZB, C, n)
        ok_b = _subgroups_equal(im_b, ker_b + BB)
        # node C^n: im(proj) == ker(connecting)
        im_c = _image_subgroup(proj(n), ZB, BC)
        ker_c = _kernel_of_induced(connecting(n), ZC, A, n + 1)
        ok_c = _subgroups_equal(im_c, ker_c + BC)
        for label, Z, Bd, ok in ((labels[0], ZA, BA, ok_a), (labels[1], ZB, BB, ok_b), (labels[2], ZC, BC, ok_c)):
            g = la.mixed_quotient(Z, Bd).group
            nodes.append(LESNode(label, n, g, ok))
            failures += 0 if ok else 1
    return LESReport(nodes, failures)


def _scatter(x, idx, dim):
    y = [Fraction(0)] * dim
    for v, i in zip(x, idx):
        y[i] = v
    return y


def les_of_cone(f: ChainMap, degrees: Sequence[int]) -> LESReport:
    """LES of ``0 -> B[-1] -> cone(f) -> A -> 0``."""
    cn = cone(f)
    C = cn.complex
    A = f.source
    Bs = shift_down(f.target)
    a_idx = {n: list(range(A.rank(n), A.rank(n) + f.target.rank(n - 1))) for n in C.degrees()}
    c_idx = {n: list(range(A.rank(n))) for n in C.degrees()}
    return les_of_ses(Bs, C, A, a_idx, c_idx, degrees, labels=("B[-1]", "cone", "A"))


def induced_is_iso(f: ChainMap, n: int) -> bool:
    """Whether ``H^n(f)`` is bijective."""
    A, B = f.source, f.target
    Z = A.cocycles(n)
    ker = _kernel_of_induced(lambda z: f.apply(n, z), Z, B, n)
    if not A.coboundaries(n).contains_subgroup(ker):
        return False
    img = _image_subgroup(lambda z: f.apply(n, z), Z, B.coboundaries(n))
    return img.contains_subgroup(B.cocycles(n).as_subgroup())


def is_quasi_isomorphism(f: ChainMap, degrees: Sequence[int]) -> bool:
    """``H^n(f)`` bijective for every ``n`` in ``degrees``."""
    return all(induced_is_iso(f, n) for n in degrees)


# ------------------------------------------------------ random test objects

def _unimodular(rng, n: int, steps: int = 4):
    U, Ui = la.identity(n), la.identity(n)
    for _ in range(steps if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        for k in range(n):
            U[i][k] += c * U[j][k]
        for k in range(n):
            Ui[k][j] -= c * Ui[k][i]
    return U, Ui


def random_complex(rng, lo: int = 0, hi: int = 3, max_pieces: int = 3) -> CochainComplex:
    """Integral complex assembled from ``Z`` and ``Z --m--> Z`` pieces, then
    scrambled by unimodular changes of basis, so its cohomology is known by
    construction but not visible in the matrices."""
    pieces = []
    for n in range(lo, hi + 1):
        for _ in range(rng.randint(0, max_pieces)):
            if n < hi and rng.random() < 0.6:
                pieces.append((n, rng.choice([1, 1, 2, 3, 4, 6])))
            else:
                pieces.append((n, None))
    kinds = {n: [] for n in range(lo, hi + 1)}
    slot = []
    for n, m in pieces:
        a = len(kinds[n])
        kinds[n].append(True)
        if m is not None:
            b = len(kinds[n + 1])
            kinds[n + 1].append(True)
            slot.append((n, a, b, m))
    diff = {}
    for n, a, b, m in slot:
        M = diff.setdefault(n, la.zeros(len(kinds[n + 1]), len(kinds[n])))
        M[b][a] = Fraction(m)
    base = {n: tuple(k) for n, k in kinds.items() if k}
    # zero matrices created before later columns were added are re-padded here
    for n, M in list(diff.items()):
        R = la.zeros(len(kinds[n + 1]), len(kinds[n]))
        for i, row in enumerate(M):
            for j, v in enumerate(row):
                R[i][j] = v
        diff[n] = R
    U = {n: _unimodular(rng, len(k)) for n, k in base.items()}
    new = {}
    for n, M in diff.items():
        if n in U and n + 1 in U:
            new[n] = la.matmul(la.matmul(U[n + 1][0], M), U[n][1])
    return CochainComplex(base, new)


def random_chain_map(rng, lo: int = 0, hi: int = 3) -> ChainMap:
    """``f = k * incl + d h + h d`` from a random complex into its sum with another one."""
    A = random_complex(rng, lo, hi)
    B = direct_sum(A, random_complex(rng, lo, hi))
    k = rng.choice([0, 1, 1, 2, -1, 3])
    h = {n: [[Fraction(rng.randint(-1, 1)) for _ in range(A.rank(n))] for _ in range(B.rank(n - 1))]
         for n in A.degrees() if A.rank(n) and B.rank(n - 1)}
    comps = {}
    for n in sorted(set(A.degrees()) | set(B.degrees())):
        ra, rb = A.rank(n), B.rank(n)
        if not ra or not rb:
            continue
        M = la.zeros(rb, ra)
        for i in range(ra):
            M[i][i] = Fraction(k)
        if n in h:
            dh = la.matmul(B.d_full(n - 1), h[n], ncols=ra)
            M = [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(M, dh)]
        if n + 1 in h:
            hd = la.matmul(h[n + 1], A.d_full(n), ncols=ra)
            M = [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(M, hd)]
        comps[n] = M
    return ChainMap(A, B, comps)
