"""Abelian Chern-Weil theory on compatible forms: curvature presentations,
interpolated connections, transgression forms, multiplicative bundles and
their characteristic cocycles.

For a torus structure group the curvature of ``sum_j s_j theta_j`` is
``F_0 + sum_{j>=1} (s_j d alpha_j + ds_j ^ alpha_j)`` with
``alpha_j = theta_j - theta_0`` basal, so every computation happens with
genuine compatible forms on ``X`` (and ``X x Delta^q``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

from . import chain_core as cc
from . import exact_linalg as la
from . import secondary as se
from .derham import CompatibleFormSequence, E_total
from .poly_forms import LocalForm, PolyForm
from .simplicial import (FiniteGroup, TruncatedSimplicialSet, constant_object, minimal_circle,
                         orientation_cocycle, torus_9, universal_bundle)


class NonIntegralError(ValueError):
    """The characteristic form does not represent an integral class."""


class VerificationError(AssertionError):
    pass


@dataclass(frozen=True)
class AbelianStructureGroup:
    """Torus of rank ``k``: Lie algebra ``Q^k``, integral lattice ``Z^k``, zero bracket."""

    rank: int = 1

    def bracket(self, a, b):
        return [Fraction(0)] * self.rank


@dataclass
class InvariantPolynomial:
    """``sum c_e x^e`` over exponent tuples ``e`` of length ``rank``."""

    rank: int
    coeffs: dict

    def __post_init__(self):
        self.coeffs = {tuple(e): Fraction(c) for e, c in self.coeffs.items() if c}
        if any(len(e) != self.rank for e in self.coeffs):
            raise ValueError("exponent length does not match the rank")

    @classmethod
    def linear(cls, rank: int = 1, i: int = 0) -> "InvariantPolynomial":
        e = [0] * rank
        e[i] = 1
        return cls(rank, {tuple(e): 1})

    @classmethod
    def power(cls, k: int, rank: int = 1) -> "InvariantPolynomial":
        return cls(rank, {(k,) + (0,) * (rank - 1): 1})

    def degrees(self) -> list[int]:
        return sorted({sum(e) for e in self.coeffs})

    def homogeneous(self, k: int) -> "InvariantPolynomial":
        return InvariantPolynomial(self.rank, {e: c for e, c in self.coeffs.items() if sum(e) == k})

    @property
    def degree(self) -> int:
        ds = self.degrees()
        if len(ds) != 1:
            raise ValueError("polynomial is not homogeneous")
        return ds[0]

    def evaluate(self, curv: Sequence[CompatibleFormSequence]) -> CompatibleFormSequence:
        """``Phi(F)``: curvature components are even forms, so they commute."""
        if len(curv) != self.rank:
            raise ValueError("need one curvature component per rank")
        base = curv[0]
        out = None
        powers: dict = {}

        def pw(i, a):
            if (i, a) not in powers:
                powers[(i, a)] = (CompatibleFormSequence.constant(base.X, 1, base.param)
                                  if a == 0 else pw(i, a - 1).wedge(curv[i]))
            return powers[(i, a)]

        for e, c in sorted(self.coeffs.items()):
            term = CompatibleFormSequence.constant(base.X, c, base.param)
            for i, a in enumerate(e):
                if a:
                    term = term.wedge(pw(i, a))
            out = term if out is None else out + term
        if out is None:
            out = CompatibleFormSequence.zero(base.X, None, base.param)
        out.degree = 2 * self.degree if len(self.degrees()) == 1 else None
        return out


# --------------------------------------------------------- presentations

def _vec(v) -> list:
    return [Fraction(x) for x in v]


@dataclass
class ConnectionPresentation:
    """Curvature plus integral data: ``c`` integral 2-cocycles, ``v`` with ``delta v = c - IJ(F)``."""

    X: TruncatedSimplicialSet
    F: list                    # rank-many compatible closed 2-forms
    c: list                    # rank-many vectors in Tot^2
    v: list                    # rank-many vectors in Tot^1
    theta: Optional[list] = None
    group: AbelianStructureGroup = AbelianStructureGroup(1)
    _models: Optional[se.Models] = field(default=None, repr=False)

    @property
    def models(self) -> se.Models:
        if self._models is None:
            self._models = se.Models(self.X, "Z")
        return self._models

    def validate(self) -> "ConnectionPresentation":
        M = self.models
        if not len(self.F) == len(self.c) == len(self.v) == self.group.rank:
            raise ValueError("presentation components do not match the rank")
        for F, c, v in zip(self.F, self.c, self.v):
            F.check()
            if not F.d().is_zero():
                raise VerificationError("curvature is not closed")
            if any(Fraction(x).denominator != 1 for x in c):
                raise VerificationError("c is not integral")
            if not M.CL.is_cocycle(2, c):
                raise VerificationError("c is not a cocycle")
            lhs = M.CQ.apply(1, v)
            rhs = [a - b for a, b in zip(_vec(c), F.J_coords(M.total_Q, 2))]
            if lhs != rhs:
                raise VerificationError("delta v != c - IJ(F)")
        if self.theta is not None:
            for th, F in zip(self.theta, self.F):
                if th.d() != F:
                    raise VerificationError("F != d theta")
        return self

    def shifted(self, alphas: Sequence[CompatibleFormSequence]) -> "ConnectionPresentation":
        """Presentation of ``theta + alpha``."""
        M = self.models
        F = [f + a.d() for f, a in zip(self.F, alphas)]
        F = [_with_degree(f, 2) for f in F]
        v = [[x - y for x, y in zip(_vec(vv), a.J_coords(M.total_Q, 1))] for vv, a in zip(self.v, alphas)]
        th = None if self.theta is None else [_with_degree(t + a, 1) for t, a in zip(self.theta, alphas)]
        return ConnectionPresentation(self.X, F, [list(c) for c in self.c], v, th, self.group, self._models)

    @classmethod
    def flat(cls, X: TruncatedSimplicialSet, holonomy_cocycle: Sequence, models: Optional[se.Models] = None):
        """Rank-one flat presentation: ``F = 0``, ``c = 0``, ``v`` a rational 1-cocycle."""
        M = models or se.Models(X, "Z")
        F = CompatibleFormSequence.zero(X, 2)
        return cls(X, [F], [[0] * M.CQ.rank(2)], [_vec(holonomy_cocycle)], None, AbelianStructureGroup(1), M)

    @classmethod
    def from_integral_cocycle(cls, X: TruncatedSimplicialSet, c: Sequence, models: Optional[se.Models] = None):
        """Rank-one presentation with ``F = E(c)``, so ``IJ(F) = c`` and ``v = 0``."""
        M = models or se.Models(X, "Z")
        F = E_total(X, M.total_Q, 2, c)
        return cls(X, [F], [list(c)], [[Fraction(0)] * M.CQ.rank(1)], None, AbelianStructureGroup(1), M)


def _with_degree(f: CompatibleFormSequence, k: int) -> CompatibleFormSequence:
    f.degree = k
    return f


@dataclass
class ConnectionFamily:
    """``theta_0`` plus differences ``alpha_j = theta_j - theta_0`` (``j = 1..q``), each rank-many 1-forms."""

    base: ConnectionPresentation
    alphas: list

    @property
    def q(self) -> int:
        return len(self.alphas)

    def validate(self) -> "ConnectionFamily":
        for al in self.alphas:
            if len(al) != self.base.group.rank:
                raise ValueError("difference form has the wrong rank")
            for a in al:
                a.check()
                if a.degree not in (None, 1):
                    raise ValueError("difference forms have degree 1")
        return self

    def connection(self, j: int) -> ConnectionPresentation:
        return self.base if j == 0 else self.base.shifted(self.alphas[j - 1])

    def omit(self, i: int) -> "ConnectionFamily":
        """The family with ``theta_i`` removed."""
        if i == 0:
            if not self.alphas:
                raise ValueError("cannot omit the only connection")
            first = self.alphas[0]
            rest = [[a - b for a, b in zip(al, first)] for al in self.alphas[1:]]
            return ConnectionFamily(self.base.shifted(first), [[_with_degree(x, 1) for x in al] for al in rest])
        return ConnectionFamily(self.base, self.alphas[:i - 1] + self.alphas[i:])

    @classmethod
    def constant(cls, base: ConnectionPresentation, q: int) -> "ConnectionFamily":
        zero = [CompatibleFormSequence.zero(base.X, 1) for _ in range(base.group.rank)]
        return cls(base, [zero for _ in range(q)])


def _s_coordinate(X, q: int, j: int, param) -> CompatibleFormSequence:
    def fn(n, d, idx, chart):
        return LocalForm.var(chart, 0, j)
    return CompatibleFormSequence.from_local(X, fn, 0, param)


def interpolate(family: ConnectionFamily) -> list:
    """Curvature of ``sum_j s_j theta_j`` on ``Delta^q x X``, one sequence per rank component."""
    family.validate()
    q = family.q
    X = family.base.X
    param = (("s", q),)
    out = []
    for comp in range(family.base.group.rank):
        F = family.base.F[comp].lift_param(param)
        for j, al in enumerate(family.alphas, start=1):
            a = al[comp].lift_param(param)
            s = _s_coordinate(X, q, j, param)
            F = F + s.wedge(a.d()) + s.d().wedge(a)
        F.degree = 2
        F.check()
        out.append(F)
    return out


def epsilon(q: int) -> int:
    return -1 if (q * (q + 1) // 2) % 2 else 1


def theta_q(phi: InvariantPolynomial, family: ConnectionFamily) -> CompatibleFormSequence:
    """``eps_q * int_{Delta^q} Phi(F_s)`` with ``eps_q = (-1)^{q(q+1)/2}``.

    The sign makes ``d Theta_q = -sum_i (-1)^i Theta_{q-1}(..., omit i, ...)``
    hold with fiber-first integration.
    """
    k = phi.degree
    q = family.q
    if 2 * k < q:
        raise ValueError("need 2k >= q")
    curv = interpolate(family)
    val = phi.evaluate(curv)
    val.degree = 2 * k
    out = val.integrate_param().scale(epsilon(q))
    out.degree = 2 * k - q
    return out.check()


def transgression(phi: InvariantPolynomial, theta0: ConnectionPresentation,
                  alpha: Sequence[CompatibleFormSequence]) -> CompatibleFormSequence:
    """Form ``T`` with ``dT = Phi(theta0 + alpha) - Phi(theta0)``."""
    return theta_q(phi, ConnectionFamily(theta0, [list(alpha)])).scale(-1)


def stokes_identity_check(phi: InvariantPolynomial, family: ConnectionFamily) -> bool:
    q = family.q
    if q < 1:
        raise ValueError("need q >= 1")
    lhs = theta_q(phi, family).d()
    rhs = None
    for i in range(q + 1):
        term = theta_q(phi, family.omit(i)).scale(-((-1) ** i))
        rhs = term if rhs is None else rhs + term
    return lhs == rhs


def characteristic_form(phi: InvariantPolynomial, conn: ConnectionPresentation) -> CompatibleFormSequence:
    val = phi.evaluate(conn.F)
    return val


# ----------------------------------------------------- multiplicative bundles

@dataclass
class MultiplicativeBundle:
    """``(P, theta, omega)`` with ``Phi_r(theta) - d omega_r`` in ``F^r`` for each weight ``r``."""

    conn: ConnectionPresentation
    phi: InvariantPolynomial
    omega: dict                          # r -> compatible (2r-1)-form
    filtration: se.FiltrationFamily = field(default_factory=se.bete)

    def weights(self) -> list[int]:
        return self.phi.degrees()

    def residual(self, r: int) -> CompatibleFormSequence:
        """``Phi_r(theta) - d omega_r``."""
        val = self.phi.homogeneous(r).evaluate(self.conn.F)
        w = self.omega.get(r)
        if w is not None:
            val = val - w.d()
        val.degree = 2 * r
        return val

    def validate(self) -> "MultiplicativeBundle":
        self.conn.validate()
        M = self.conn.models
        for r in self.weights():
            x = self.residual(r).J_coords(M.total_Q, 2 * r)
            if not self.filtration(M, r).contains(2 * r, x):
                raise VerificationError(f"Phi_{r}(theta) - d omega_{r} is not in F^{r}")
        return self

    @classmethod
    def trivial_omega(cls, conn: ConnectionPresentation, phi: InvariantPolynomial,
                      filtration: Optional[se.FiltrationFamily] = None) -> "MultiplicativeBundle":
        om = {r: CompatibleFormSequence.zero(conn.X, 2 * r - 1) for r in phi.degrees()}
        return cls(conn, phi, om, filtration or se.bete())


@dataclass
class BundleIdentification:
    """A bundle map ``f`` recorded by its effect on connections: ``f^* theta' = theta + alpha``."""

    alpha: Optional[list] = None


def _exact_or_filtered(M: se.Models, spec: cc.FiltrationSpec, deg: int, x: Sequence) -> bool:
    """Whether ``x`` lies in ``F^deg + d(W^{deg-1})``."""
    gens = []
    for i in spec.basis.get(deg, []):
        e = [Fraction(0)] * M.W.rank(deg)
        e[i] = Fraction(1)
        gens.append(e)
    B = M.W.coboundaries(deg)
    S = la.MixedSubgroup(M.W.rank(deg), [], gens + B.int_gens + B.rat_gens)
    return S.contains_line(x) if any(x) else True


def _presentation_cone(M: se.Models) -> cc.Cone:
    return cc.cone(M.incl)


def is_isomorphic(G1: MultiplicativeBundle, G2: MultiplicativeBundle,
                  f: Optional[BundleIdentification] = None) -> bool:
    """Decide ``omega' - omega = T(theta, f^* theta') mod (F^r + exact)`` for each weight,
    after checking that ``f`` carries the integral data of one presentation to the other."""
    if G1.conn.X is not G2.conn.X and G1.conn.X.level_sizes() != G2.conn.X.level_sizes():
        raise ValueError("bundles live on different bases")
    if G1.conn.group != G2.conn.group or G1.phi.coeffs != G2.phi.coeffs:
        raise ValueError("structure groups or polynomials differ")
    X = G1.conn.X
    M = G1.conn.models
    rank = G1.conn.group.rank
    alpha = (f.alpha if f and f.alpha else None) or [CompatibleFormSequence.zero(X, 1) for _ in range(rank)]
    moved = G1.conn.shifted(alpha)
    # integral data: (c2 - c1', v2 - v1') must be a coboundary of cone(C(Z) -> C(Q))
    cn = _presentation_cone(M)
    for c1, v1, c2, v2 in zip(moved.c, moved.v, G2.conn.c, G2.conn.v):
        x = [Fraction(a) - Fraction(b) for a, b in zip(c2, c1)] + [a - b for a, b in zip(_vec(v2), v1)]
        if not cn.complex.cohomology(2).is_coboundary(x):
            return False
    # curvature must agree once f is applied
    for a, b in zip(moved.F, G2.conn.F):
        if a != b:
            return False
    for r in G1.weights():
        spec = G1.filtration(M, r)
        T = transgression(G1.phi.homogeneous(r), G1.conn, alpha)
        w1 = G1.omega.get(r) or CompatibleFormSequence.zero(X, 2 * r - 1)
        w2 = G2.omega.get(r) or CompatibleFormSequence.zero(X, 2 * r - 1)
        diff = w2 - w1 - T
        diff.degree = 2 * r - 1
        if not _exact_or_filtered(M, spec, 2 * r - 1, diff.J_coords(M.total_Q, 2 * r - 1)):
            return False
    return True


# ------------------------------------------------------------- xi(Gamma)

@dataclass
class XiClass:
    element: se.ConeElement              # in the MH cone (F^r)
    dchar_element: se.ConeElement        # same vector in the sigma_{>=2k} F^r cone
    k: int
    r: int
    c: list
    v: list

    @property
    def mh_degree(self) -> int:
        return 2 * self.k

    def is_cocycle(self) -> bool:
        return self.element.is_cocycle() and self.dchar_element.is_cocycle()

    def order(self, bound: int = 100) -> Optional[int]:
        return self.dchar_element.order(bound)

    def integral_class(self) -> list:
        return self.element.a


def integral_lift(M: se.Models, deg: int, phi_coords: Sequence) -> tuple[list, list]:
    """Deterministic ``(c, v)`` with ``c`` an integral cocycle and ``delta v = c - phi``."""
    Z = M.CL.cocycles(deg)
    B = M.CQ.coboundaries(deg)
    S = la.MixedSubgroup(M.CQ.rank(deg), Z.int_basis, Z.rat_basis + B.int_gens + B.rat_gens)
    sol = S.solve(phi_coords)
    if sol is None or Z.rat_basis:
        raise NonIntegralError("characteristic form has non-integral periods")
    kk, _ = sol
    c = [Fraction(0)] * M.CQ.rank(deg)
    for coef, z in zip(kk, Z.int_basis):
        if coef:
            c = [a + coef * b for a, b in zip(c, z)]
    rhs = [a - b for a, b in zip(c, phi_coords)]
    v = M.CQ.cohomology(deg).primitive(rhs)
    if v is None:
        raise VerificationError("could not solve delta v = c - phi")
    return c, v


def xi_class(G: MultiplicativeBundle, k: Optional[int] = None, r: Optional[int] = None,
             c: Optional[Sequence] = None, v: Optional[Sequence] = None,
             eta: Optional[CompatibleFormSequence] = None,
             phi: Optional[InvariantPolynomial] = None) -> XiClass:
    """The cocycle ``(c, omega, v + J(eta))`` of weight ``r`` for ``Phi_k``.

    ``Phi(theta) = d eta + omega`` uses ``eta = omega_k`` of the bundle unless
    another decomposition is supplied.  Without ``(c, v)`` the pair is solved
    for directly; for ``Phi = x`` on rank one the presentation's own data is used.
    """
    conn = G.conn
    M = conn.models
    phi_k = (phi or G.phi).homogeneous(k if k is not None else (phi or G.phi).degrees()[-1])
    k = phi_k.degree
    r = k if r is None else r
    deg = 2 * k
    M.check_window(deg)
    char = phi_k.evaluate(conn.F)
    char.degree = deg
    if not char.d().is_zero():
        raise VerificationError("characteristic form is not closed")
    if eta is None:
        eta = G.omega.get(k) or CompatibleFormSequence.zero(conn.X, deg - 1)
    omega_form = char - eta.d()
    omega_form.degree = deg
    phi_w = char.J_coords(M.total_Q, deg)
    omega_w = omega_form.J_coords(M.total_Q, deg)
    eta_w = eta.J_coords(M.total_Q, deg - 1)
    if c is None:
        if phi is None and phi_k.coeffs == {(1,) + (0,) * (conn.group.rank - 1): 1}:
            c, v = conn.c[0], conn.v[0]
        else:
            c, v = integral_lift(M, deg, phi_w)
    c, v = _vec(c), _vec(v)
    if M.CQ.apply(deg - 1, v) != [a - b for a, b in zip(c, phi_w)]:
        raise VerificationError("delta v != c - Phi(theta)")
    spec = G.filtration(M, r)
    mh = se.build_cone(M, spec)
    dch = se.build_cone(M, spec.truncated(deg))
    b = [x + y for x, y in zip(v, eta_w)]
    el = mh.make(deg, c, mh.form_coords(deg, omega_w), b)
    el2 = dch.make(deg, c, dch.form_coords(deg, omega_w), b)
    xi = XiClass(el, el2, k, r, c, v)
    if not xi.is_cocycle():
        raise VerificationError("xi is not a cocycle")
    return xi


def class_independence_and_invariance(G: MultiplicativeBundle, G2: Optional[MultiplicativeBundle] = None,
                                      f: Optional[BundleIdentification] = None, k: Optional[int] = None) -> dict:
    """Recompute ``xi`` with other choices and compare classes."""
    M = G.conn.models
    xi = xi_class(G, k)
    deg = xi.mh_degree
    out = {}
    # v' = v + delta w
    w = [Fraction(1, i + 2) for i in range(M.CQ.rank(deg - 2))] if M.CQ.rank(deg - 2) else []
    dw = M.CQ.apply(deg - 2, w) if w else [Fraction(0)] * M.CQ.rank(deg - 1)
    v2 = [a + b for a, b in zip(xi.v, dw)]
    x2 = xi_class(G, k, c=xi.c, v=v2)
    out["v_shift"] = (xi.element - x2.element).is_coboundary()
    # c' = c + delta u, v' = v + u
    u = [Fraction((i % 3) - 1) for i in range(M.CL.rank(deg - 1))]
    du = M.CL.apply(deg - 1, u)
    c3 = [a + b for a, b in zip(xi.c, du)]
    v3 = [a + b for a, b in zip(xi.v, u)]
    x3 = xi_class(G, k, c=c3, v=v3)
    out["c_shift"] = (xi.element - x3.element).is_coboundary()
    if G2 is not None:
        if not is_isomorphic(G, G2, f):
            out["invariance"] = False
        else:
            y = xi_class(G2, k)
            out["invariance"] = (xi.element - y.element).is_coboundary()
    return out


# ------------------------------------------------------ universal connection

def universal_connection_check(G: FiniteGroup, P: TruncatedSimplicialSet, act, theta: CompatibleFormSequence,
                               M: int = 1) -> dict:
    """Barycentric connection on ``U_{n,p} = P_n^{p+1}`` and its two compatibility conditions."""
    if P.N > 2 or M > 2:
        raise ValueError("instance too large for the universal check")
    if not P.discrete:
        raise ValueError("levels of P must be finite sets")
    theta.check()
    ub = universal_bundle(P, act, G, M)
    U = ub.U
    plabels = [P.levels[n].labels[0] for n in range(P.N + 1)]
    pidx = [{x: i for i, x in enumerate(lv)} for lv in plabels]

    def theta_local(n, x):
        return theta.forms[n].comps[0][x]

    memo: dict = {}

    def theta_U(n, p, u):
        key = (n, p, tuple(u))
        if key not in memo:
            memo[key] = _theta_U(n, p, u)
        return memo[key]

    def _theta_U(n, p, u):
        chart = (("s", p), ("t", n), ("x", 0))
        acc = LocalForm.zero(chart)
        for j, x in enumerate(u):
            loc = theta_local(n, x)
            lifted = LocalForm(chart, {((0,) * p + e, tuple(i + p for i in w)): c for (e, w), c in loc.terms.items()})
            acc = acc + LocalForm.var(chart, 0, j).wedge(lifted)
        return acc

    from .poly_forms import restrict_face
    report = {"horizontal": True, "vertical": True, "psi": True, "basal": True}
    for (n, p), els in U.sets.items():
        for ui, u in enumerate(els):
            form = theta_U(n, p, u)
            if n >= 1:
                for i in range(n + 1):
                    tgt = U.sets[(n - 1, p)][U.hfaces[(n, p)][i][ui]]
                    if restrict_face(form, 1, i) != theta_U(n - 1, p, tgt):
                        report["horizontal"] = False
            if p >= 1:
                for i in range(p + 1):
                    tgt = U.sets[(n, p - 1)][U.vfaces[(n, p)][i][ui]]
                    if restrict_face(form, 0, i) != theta_U(n, p - 1, tgt):
                        report["vertical"] = False
            curv = form.d()
            for g in G.elements:
                moved = tuple(pidx[n][act(n, plabels[n][x], g)] for x in u)
                if _theta_U(n, p, moved).d() != curv:
                    report["basal"] = False
    for n in range(P.N + 1):
        for x in range(len(plabels[n])):
            u = U.sets[(n, 0)][ub.psi[n][x]]
            chart = (("s", 0), ("t", n), ("x", 0))
            loc = theta_local(n, x)
            if theta_U(n, 0, u) != LocalForm(chart, loc.terms):
                report["psi"] = False
    report["ok"] = all(report.values())
    return report


def invariant_theta(G: FiniteGroup, P: TruncatedSimplicialSet, weight) -> CompatibleFormSequence:
    """Right-invariant 1-form on ``nerve(G-bar)``: Whitney extension of ``(g0, g1) -> weight(g0 g1^-1)``."""
    from .simplicial import cochain_double_complex
    T = cc.totalize(cochain_double_complex(P, "Q"))
    x = [Fraction(0)] * T.complex.rank(1)
    _, off = T.offsets[(1, 0)]
    for j, (g0, g1) in enumerate(P.levels[1].labels[0]):
        x[off + j] = Fraction(weight(G.mul(g0, G.inv(g1))))
    return E_total(P, T, 1, x)


# ---------------------------------------------------------------- examples

def _tot_vector(T: cc.TotalComplex, k: int, comp: tuple, values: dict) -> list:
    x = [Fraction(0)] * T.complex.rank(k)
    _, off = T.offsets[comp]
    for i, val in values.items():
        x[off + i] = Fraction(val)
    return x


def flat_circle_bundle(holonomy=Fraction(1, 3), N: int = 3) -> MultiplicativeBundle:
    """Flat rank-one bundle on the constant circle with the given holonomy, ``omega = 0``."""
    X = constant_object(minimal_circle(), N)
    M = se.Models(X, "Z")
    v = _tot_vector(M.total_Q, 1, (0, 1), {0: holonomy})
    pres = ConnectionPresentation.flat(X, v, M).validate()
    return MultiplicativeBundle.trivial_omega(pres, InvariantPolynomial.linear()).validate()


def torus_bundle(n: int = 1, N: int = 3) -> MultiplicativeBundle:
    """Rank-one bundle on the constant torus with curvature class ``n`` times the generator."""
    K = torus_9()
    X = constant_object(K, N)
    M = se.Models(X, "Z")
    vals = {i: n * c for i, c in enumerate(orientation_cocycle(K)) if c}
    c = _tot_vector(M.total_Q, 2, (0, 2), vals)
    pres = ConnectionPresentation.from_integral_cocycle(X, c, M).validate()
    return MultiplicativeBundle.trivial_omega(pres, InvariantPolynomial.linear()).validate()
