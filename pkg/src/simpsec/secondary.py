"""Multiplicative cohomology, differential characters, the comparison map
between them, the modified cochain complex and the MH long exact sequence.

Everything is computed in finite models: forms live in the Whitney model
``W`` (over Q), integral and rational cochains in the total complex of the
cochain double complex.  ``C(Q/Lambda)`` is never built; cones
``cone(C(Lambda) (+) F -> C(Q))`` stand in for it.  In these models the
Q/Z directions show up as ``circle_rank`` of the group.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Optional, Sequence

from . import chain_core as cc
from . import exact_linalg as la
from .derham import I_bridge, whitney_model
from .simplicial import (FiniteGroup, FiniteGroupoid, TruncatedSimplicialSet, action_groupoid,
                         cochain_double_complex, nerve)


class WindowError(ValueError):
    """Requested degree lies outside the range a truncated model can see."""


# ------------------------------------------------------------------ models

class Models:
    """The finite complexes attached to ``X`` and a coefficient choice ``lam``."""

    def __init__(self, X: TruncatedSimplicialSet, lam: str = "Z"):
        if lam not in ("Z", "0"):
            raise ValueError("lambda must be 'Z' or '0'")
        self.X = X
        self.lam = lam

    @cached_property
    def whitney(self):
        return whitney_model(self.X)

    @property
    def W(self) -> cc.CochainComplex:
        return self.whitney.total.complex

    @cached_property
    def total_Q(self) -> cc.TotalComplex:
        return cc.totalize(cochain_double_complex(self.X, "Q"))

    @cached_property
    def total_Z(self) -> cc.TotalComplex:
        return cc.totalize(cochain_double_complex(self.X, "Z"))

    @property
    def CQ(self) -> cc.CochainComplex:
        return self.total_Q.complex

    @cached_property
    def CL(self) -> cc.CochainComplex:
        return self.total_Z.complex if self.lam == "Z" else cc.zero_complex()

    @cached_property
    def I(self) -> cc.ChainMap:
        return I_bridge(self.whitney, self.total_Q)

    @cached_property
    def incl(self) -> cc.ChainMap:
        CL = self.CL
        return cc.ChainMap(CL, self.CQ, {n: la.identity(CL.rank(n)) for n in CL.degrees()})

    @property
    def window(self) -> int:
        return self.X.N - 1

    def check_window(self, k: int):
        if not 0 <= k <= self.window:
            raise WindowError(f"degree {k} outside the validity window 0..{self.window}")

    def column_of(self, n: int, i: int) -> int:
        return self.whitney.total.index_of(n, i)[0][0]


# ------------------------------------------------------------ filtrations

@dataclass
class FiltrationFamily:
    """``r -> F^r`` as a coordinate subcomplex of the Whitney total complex."""

    name: str
    step: Callable[[Models, int], cc.FiltrationSpec]

    def __call__(self, M: Models, r: int) -> cc.FiltrationSpec:
        return self.step(M, r)


def bete(shift: int = 0) -> FiltrationFamily:
    name = "bete" if not shift else f"bete{shift:+d}"
    return FiltrationFamily(name, lambda M, r: cc.FiltrationSpec.bete(M.W, r + shift))


def whole() -> FiltrationFamily:
    return FiltrationFamily("whole", lambda M, r: cc.FiltrationSpec.whole(M.W))


def zero() -> FiltrationFamily:
    return FiltrationFamily("zero", lambda M, r: cc.FiltrationSpec.zero(M.W))


def column() -> FiltrationFamily:
    return FiltrationFamily("column", lambda M, r: cc.FiltrationSpec.column(M.W, r, M.column_of))


def user(steps: dict, name: str = "user") -> FiltrationFamily:
    """``steps[r]`` is ``{degree: [coordinates]}``; missing ``r`` means the zero step."""
    return FiltrationFamily(name, lambda M, r: cc.FiltrationSpec.user(M.W, steps.get(r, {}), name))


def parse_filtration(text: str) -> FiltrationFamily:
    text = text.strip()
    if text == "bete":
        return bete()
    if text.startswith("bete") and text[4:].lstrip("+-").isdigit():
        return bete(int(text[4:]))
    table = {"whole": whole, "zero": zero, "column": column}
    if text in table:
        return table[text]()
    raise ValueError(f"unknown filtration {text!r}")


# ------------------------------------------------------------------ cones

@dataclass
class CochainCone:
    """``cone(C(Lambda) (+) F -> C(Q))`` with its coordinate layout."""

    models: Models
    spec: cc.FiltrationSpec
    cone: cc.Cone
    F: cc.CochainComplex

    @property
    def complex(self) -> cc.CochainComplex:
        return self.cone.complex

    def layout(self, n: int) -> tuple[int, int, int]:
        return self.models.CL.rank(n), self.F.rank(n), self.models.CQ.rank(n - 1)

    def element(self, n: int, x: Sequence) -> "ConeElement":
        la_, lf, _ = self.layout(n)
        x = [Fraction(v) for v in x]
        return ConeElement(self, n, x[:la_], x[la_:la_ + lf], x[la_ + lf:])

    def make(self, n: int, a=None, omega=None, b=None) -> "ConeElement":
        la_, lf, lb = self.layout(n)
        fill = lambda v, k: [Fraction(t) for t in v] if v is not None else [Fraction(0)] * k
        e = ConeElement(self, n, fill(a, la_), fill(omega, lf), fill(b, lb))
        if (len(e.a), len(e.omega), len(e.b)) != (la_, lf, lb):
            raise la.DimensionError("cone element components have wrong sizes")
        return e

    def form_coords(self, n: int, w: Sequence) -> list:
        """Restrict a Whitney-model vector to the coordinates of ``F^n``."""
        idx = self.spec.basis.get(n, [])
        if not self.spec.contains(n, w):
            raise ValueError("form does not lie in the filtration step")
        return [Fraction(w[i]) for i in idx]

    def form_ambient(self, n: int, omega: Sequence) -> list:
        out = [Fraction(0)] * self.models.W.rank(n)
        for i, v in zip(self.spec.basis.get(n, []), omega):
            out[i] = Fraction(v)
        return out

    def cohomology(self, n: int) -> cc.CohomologyGroup:
        return self.complex.cohomology(n)


def build_cone(M: Models, spec: cc.FiltrationSpec) -> CochainCone:
    F, inc = cc.subcomplex(M.W, spec.basis)
    w_map = cc.compose(M.I, inc)
    return CochainCone(M, spec, cc.two_source_cone(M.incl, w_map), F)


@dataclass
class ConeElement:
    cone: CochainCone
    degree: int
    a: list
    omega: list
    b: list

    @property
    def vector(self) -> list:
        return self.a + self.omega + self.b

    def d(self) -> "ConeElement":
        return self.cone.element(self.degree + 1, self.cone.complex.apply(self.degree, self.vector))

    def is_cocycle(self) -> bool:
        return self.cone.complex.is_cocycle(self.degree, self.vector)

    def __add__(self, other: "ConeElement") -> "ConeElement":
        return self.cone.element(self.degree, [x + y for x, y in zip(self.vector, other.vector)])

    def __sub__(self, other: "ConeElement") -> "ConeElement":
        return self + other.scale(-1)

    def scale(self, c) -> "ConeElement":
        return self.cone.element(self.degree, [c * x for x in self.vector])

    def is_coboundary(self) -> bool:
        return self.cone.cohomology(self.degree).is_coboundary(self.vector)

    def order(self, bound: int = 1000) -> Optional[int]:
        return self.cone.cohomology(self.degree).order(self.vector, bound)

    def to_json(self) -> dict:
        return {"degree": self.degree, "a": _fracs(self.a), "omega": _fracs(self.omega), "b": _fracs(self.b)}


def _fracs(v) -> list:
    out = []
    for x in v:
        x = Fraction(x)
        out.append(str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}")
    return out


# ----------------------------------------------------------------- reports

@dataclass
class InvariantGroupReport:
    kind: str
    indices: dict
    lam: str
    filtration: str
    degree: int
    group: la.AbelianGroup
    generators: dict = field(default_factory=dict)   # role -> list[ConeElement]
    cone: Optional[CochainCone] = None

    def to_json(self) -> dict:
        g = self.group
        return {
            "kind": self.kind,
            "indices": dict(sorted(self.indices.items())),
            "lambda": self.lam,
            "filtration": self.filtration,
            "degree": self.degree,
            "group": str(g),
            "free_rank": g.free_rank,
            "torsion": list(g.torsion),
            "rational_rank": g.rational_rank,
            "circle_rank": g.circle_rank,
            "generators": {role: [e.to_json() for e in els] for role, els in sorted(self.generators.items())},
        }


def _report(kind, indices, lam, fam_name, cone: CochainCone, k: int) -> InvariantGroupReport:
    H = cone.cohomology(k)
    gens = {role: [cone.element(k, v) for v in vecs] for role, vecs in H.group.generators.items() if vecs}
    return InvariantGroupReport(kind, indices, lam, fam_name, k, H.group, gens, cone)


def _models(X, lam) -> Models:
    return X if isinstance(X, Models) else Models(X, lam)


def mh_cone(X, lam: str, fam: FiltrationFamily, r: int) -> CochainCone:
    M = _models(X, lam)
    return build_cone(M, fam(M, r))


def dchar_cone(X, lam: str, fam: FiltrationFamily, k: int, r: int) -> CochainCone:
    M = _models(X, lam)
    return build_cone(M, fam(M, r).truncated(k))


def mh_group(X, lam: str = "Z", fam: FiltrationFamily = None, r: int = 1, n: int = 0) -> InvariantGroupReport:
    """``MH^{2r}_n = H^{2r-n}(cone(C(Lambda) (+) F^r -> C(Q)))``."""
    fam = fam or bete()
    M = _models(X, lam)
    k = 2 * r - n
    M.check_window(k)
    return _report("MH", {"r": r, "n": n}, M.lam, fam.name, mh_cone(M, lam, fam, r), k)


def dchar_group(X, lam: str = "Z", fam: FiltrationFamily = None, k: int = 1, r: int = 1) -> InvariantGroupReport:
    """Differential characters ``H^{k-1}_r = H^k(cone(C(Lambda) (+) sigma_{>=k} F^r -> C(Q)))``."""
    fam = fam or bete()
    M = _models(X, lam)
    M.check_window(k)
    return _report("dchar", {"k": k, "r": r}, M.lam, fam.name, dchar_cone(M, lam, fam, k, r), k)


# --------------------------------------------------------------------- Xi

@dataclass
class XiReport:
    r: int
    n: int
    k: int
    source: la.AbelianGroup
    target: la.AbelianGroup
    surjective: bool
    kernel: la.AbelianGroup
    kernel_description: la.AbelianGroup
    kernel_matches: bool
    enabling_zero: bool
    images: list

    @property
    def ok(self) -> bool:
        return self.surjective and self.kernel_matches and self.enabling_zero

    def to_json(self) -> dict:
        return {
            "r": self.r, "n": self.n, "degree": self.k,
            "source": str(self.source), "target": str(self.target),
            "surjective": self.surjective,
            "kernel": str(self.kernel),
            "kernel_description": str(self.kernel_description),
            "kernel_matches": self.kernel_matches,
            "truncated_part_acyclic": self.enabling_zero,
            "images": [_fracs(v) for v in self.images],
        }


def _inclusion_matrix(A: CochainCone, B: CochainCone, n: int) -> list:
    """Coordinates of ``A^n`` inside ``B^n`` when ``A``'s filtration step is inside ``B``'s."""
    la_, lfa, lb = A.layout(n)
    _, lfb, _ = B.layout(n)
    fa, fb = A.spec.basis.get(n, []), B.spec.basis.get(n, [])
    pos = {c: i for i, c in enumerate(fb)}
    rows = la_ + lfb + lb
    cols = la_ + lfa + lb
    Mx = la.zeros(rows, cols)
    for i in range(la_):
        Mx[i][i] = 1
    for j, c in enumerate(fa):
        Mx[la_ + pos[c]][la_ + j] = 1
    for i in range(lb):
        Mx[la_ + lfb + i][la_ + lfa + i] = 1
    return Mx


def _closed_with_integral_class(M: Models, spec: cc.FiltrationSpec, deg: int) -> la.MixedSubgroup:
    """Forms in ``F^deg`` that are closed and whose class comes from ``C(Lambda)``, in F-coordinates."""
    idx = spec.basis.get(deg, [])
    W = M.W
    m = len(idx)
    if not m:
        return la.MixedSubgroup(0)
    amb = W.rank(deg)
    # unknowns: F-coefficients (rational), integral cocycle coefficients, rational coboundary coefficients
    cols, kinds = [], []
    dW = W.d_full(deg)
    for i in idx:
        e = [Fraction(0)] * amb
        e[i] = Fraction(1)
        cols.append((la.matvec(M.I.full(deg), e), la.matvec(dW, e)))
        kinds.append(False)
    ZL = M.CL.cocycles(deg) if M.lam == "Z" else la.MixedBasis(amb, [], [])
    for z in ZL.int_basis:
        cols.append(([-x for x in z], [0] * W.rank(deg + 1)))
        kinds.append(True)
    for z in ZL.rat_basis:
        cols.append(([-x for x in z], [0] * W.rank(deg + 1)))
        kinds.append(False)
    BQ = M.CQ.coboundaries(deg)
    for g in BQ.int_gens + BQ.rat_gens:
        cols.append(([-x for x in g], [0] * W.rank(deg + 1)))
        kinds.append(False)
    # equations: I(omega) - z - b = 0 and d omega = 0
    top = [c[0] for c in cols]
    bot = [c[1] for c in cols]
    rows = la.columns_to_matrix(top, amb) + (la.columns_to_matrix(bot, W.rank(deg + 1)) if W.rank(deg + 1) else [])
    K = la.mixed_kernel(rows, kinds)
    return la.MixedSubgroup(m, [v[:m] for v in K.int_basis], [v[:m] for v in K.rat_basis])


def xi_map(X, lam: str = "Z", fam: FiltrationFamily = None, r: int = 1, n: int = 0) -> XiReport:
    """The map from differential characters onto multiplicative cohomology.

    Surjectivity is checked at cocycle level; the kernel is computed twice:
    from the induced map, and as ``F^r W^{k-1}`` modulo closed forms with an
    integral class.
    """
    fam = fam or bete()
    M = _models(X, lam)
    k = 2 * r - n
    M.check_window(k)
    Fr = fam(M, r)
    A = build_cone(M, Fr.truncated(k))
    B = build_cone(M, Fr)
    incl = _inclusion_matrix(A, B, k)
    rowsB = B.complex.rank(k)
    ZA, ZB = A.complex.cocycles(k), B.complex.cocycles(k)
    BA, BB = A.complex.coboundaries(k), B.complex.coboundaries(k)
    image = ZA.as_subgroup().image(incl, rowsB) + BB
    surjective = all(image.contains(z) for z in ZB.int_basis) and all(image.contains_line(z) for z in ZB.rat_basis)

    def apply_incl(x):
        return la.matvec(incl, x)
    ker = cc._kernel_of_induced(apply_incl, ZA, B.complex, k) + BA
    kernel = la.mixed_quotient(ker.basis(), BA).group

    # independent description
    S = _closed_with_integral_class(M, Fr, k - 1)
    description = la.quotient_of_space(len(Fr.basis.get(k - 1, [])), S)

    # H^k(sigma_{<k} F^r) = 0: degree-k part of the quotient vanishes
    trunc = cc.truncate(Fr.sub, k, "<").complex
    enabling = trunc.rank(k) == 0

    src = A.cohomology(k).group
    tgt = B.cohomology(k).group
    images = [apply_incl(v) for role in ("free", "torsion", "circle", "rational") for v in src.generators.get(role, [])]
    return XiReport(r, n, k, src, tgt, surjective, kernel, description,
                    kernel.isomorphic(description), enabling, images)


def corollary_check(X, r: int, lam: str = "Z") -> tuple[bool, la.AbelianGroup, la.AbelianGroup]:
    """Differential characters of degree ``r - 1`` against ``MH^{2r}_r`` (bete filtration)."""
    M = _models(X, lam)
    a = dchar_group(M, lam, bete(), r, r).group
    b = mh_group(M, lam, bete(), r, r).group
    return a.isomorphic(b), a, b


# --------------------------------------------------------- modified cochains

@dataclass
class KaroubiReport:
    degrees: list
    modified: dict
    integral: dict
    ok: bool


def karoubi_modified_check(X: TruncatedSimplicialSet, degrees: Optional[Sequence[int]] = None) -> KaroubiReport:
    """``cone(C(Z) (+) W -> C(Q))`` has the cohomology of the integral cochains."""
    M = _models(X, "Z")
    degrees = list(range(M.window + 1)) if degrees is None else list(degrees)
    cone = build_cone(M, cc.FiltrationSpec.whole(M.W))
    mod, integ, ok = {}, {}, True
    for n in degrees:
        g1 = cone.cohomology(n).group
        g2 = M.CL.cohomology(n).group
        mod[n], integ[n] = str(g1), str(g2)
        ok &= g1.isomorphic(g2)
    return KaroubiReport(degrees, mod, integ, ok)


# --------------------------------------------------------------- MH LES

@dataclass
class MHLESReport:
    les: cc.LESReport
    quotient_check: dict
    ok: bool

    def summary(self) -> list[str]:
        return self.les.summary() + [f"H^{n}(W/F) shift check: {v}" for n, v in sorted(self.quotient_check.items())]


def mh_les(X, lam: str = "Z", fam: FiltrationFamily = None, r: int = 1,
           window: Optional[Sequence[int]] = None) -> MHLESReport:
    """Exactness of ``H(C(Lambda)) -> H(W/F^r) -> MH -> H(C(Lambda)) -> ...``.

    Uses the split sequence ``0 -> cone(F -> C(Q)) -> B -> C(Lambda) -> 0``,
    where the left term computes ``H^{j-1}(W/F^r)``.
    """
    fam = fam or bete()
    M = _models(X, lam)
    degrees = list(range(M.window + 1)) if window is None else list(window)
    for j in degrees:
        M.check_window(j)
    spec = fam(M, r)
    B = build_cone(M, spec)
    F, inc = cc.subcomplex(M.W, spec.basis)
    sub = cc.cone(cc.scale_map(cc.compose(M.I, inc), -1)).complex
    a_idx, c_idx = {}, {}
    for n in B.complex.degrees():
        lz, lf, lb = B.layout(n)
        c_idx[n] = list(range(lz))
        a_idx[n] = list(range(lz, lz + lf + lb))
    if M.lam == "Z":
        les = cc.les_of_ses(sub, B.complex, M.CL, a_idx, c_idx, degrees,
                            labels=("cone(F->C)", "MH-cone", "C(Lambda)"))
    else:
        les = cc.LESReport([cc.LESNode("MH-cone", n, B.cohomology(n).group,
                                       B.cohomology(n).group.isomorphic(sub.cohomology(n).group))
                            for n in degrees], 0)
        les.failures = sum(1 for node in les.nodes if not node.exact)
    Q, _ = cc.quotient_complex(M.W, spec.basis)
    qcheck = {}
    for j in degrees:
        g_sub = sub.cohomology(j).group
        g_q = Q.cohomology(j - 1).group if (j - 1) in Q.degrees() else la.AbelianGroup(free_rank=0, torsion=[])
        qcheck[j] = g_sub.isomorphic(g_q)
    return MHLESReport(les, qcheck, les.exact and all(qcheck.values()))


# --------------------------------------------------------------- wrappers

def mh_of_BG(G: FiniteGroup, N: int, lam: str = "Z", fam: FiltrationFamily = None, r: int = 1, n: int = 0):
    return mh_group(nerve(G, N), lam, fam, r, n)


def mh_of_groupoid(G: FiniteGroupoid, N: int, lam: str = "Z", fam: FiltrationFamily = None, r: int = 1, n: int = 0):
    return mh_group(nerve(G, N), lam, fam, r, n)


def mh_equivariant(G: FiniteGroup, points: Sequence, act, N: int, lam: str = "Z",
                   fam: FiltrationFamily = None, r: int = 1, n: int = 0):
    return mh_group(nerve(action_groupoid(G, points, act), N), lam, fam, r, n)


def dchar_of_BG(G: FiniteGroup, N: int, lam: str = "Z", fam: FiltrationFamily = None, k: int = 1, r: int = 1):
    return dchar_group(nerve(G, N), lam, fam, k, r)
