"""Finite simplicial models: Delta-complexes, truncated simplicial sets,
nerves of finite groups/categories/groupoids, the bar pair, action
groupoids and the bisimplicial universal bundle, plus their cochain
double complexes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Hashable, Optional, Sequence

from . import chain_core as cc


class SimplicialError(ValueError):
    pass


# ------------------------------------------------------- Delta-complexes

@dataclass
class DeltaComplex:
    """Finite semi-simplicial set.

    ``labels[d]`` lists the ``d``-simplices; ``faces[d][j]`` is the tuple of
    indices of the ``d + 1`` faces of simplex ``j`` (``faces[0]`` is empty).
    A level of a simplicial object is a ``DeltaComplex``; a finite set is a
    ``DeltaComplex`` of dimension 0.
    """

    labels: list
    faces: list

    def __post_init__(self):
        for d in range(1, len(self.labels)):
            for j, fs in enumerate(self.faces[d]):
                if len(fs) != d + 1 or any(not 0 <= f < len(self.labels[d - 1]) for f in fs):
                    raise SimplicialError(f"bad faces for simplex {d}:{j}")
        for d in range(2, len(self.labels)):
            for j in range(len(self.labels[d])):
                for i in range(d + 1):
                    for k in range(i + 1, d + 1):
                        # d_i d_k = d_{k-1} d_i
                        if self.face(d - 1, self.face(d, j, k), i) != self.face(d - 1, self.face(d, j, i), k - 1):
                            raise SimplicialError(f"face identity fails at {d}:{j}")

    @property
    def dim(self) -> int:
        return len(self.labels) - 1

    def count(self, d: int) -> int:
        return len(self.labels[d]) if 0 <= d < len(self.labels) else 0

    def face(self, d: int, j: int, i: int) -> int:
        return self.faces[d][j][i]

    def subface(self, d: int, j: int, verts: Sequence[int]) -> int:
        """Index of the face of simplex ``(d, j)`` spanned by local vertices ``verts``."""
        keep = list(verts)
        cur = j
        cur_dim = d
        present = list(range(d + 1))
        for v in reversed(range(d + 1)):
            if v not in keep:
                pos = present.index(v)
                cur = self.face(cur_dim, cur, pos)
                cur_dim -= 1
                present.pop(pos)
        return cur

    def vertex(self, d: int, j: int, i: int) -> int:
        return self.subface(d, j, [i])

    @classmethod
    def discrete(cls, labels: Sequence) -> "DeltaComplex":
        return cls([list(labels)], [[() for _ in labels]])

    @classmethod
    def from_facets(cls, facets: Sequence[Sequence]) -> "DeltaComplex":
        """Ordered simplicial complex generated by ``facets`` (vertices sorted)."""
        simplices: set = set()
        for f in facets:
            f = tuple(sorted(f))
            if len(set(f)) != len(f):
                raise SimplicialError(f"facet {f} repeats a vertex")
            for k in range(1, len(f) + 1):
                simplices.update(combinations(f, k))
        if not simplices:
            return cls([[]], [[]])
        top = max(len(s) for s in simplices) - 1
        labels = [sorted(s for s in simplices if len(s) == d + 1) for d in range(top + 1)]
        index = [{s: i for i, s in enumerate(lv)} for lv in labels]
        faces = [[() for _ in labels[0]]]
        for d in range(1, top + 1):
            faces.append([tuple(index[d - 1][s[:i] + s[i + 1:]] for i in range(d + 1)) for s in labels[d]])
        return cls(labels, faces)

    def same_shape(self, other: "DeltaComplex") -> bool:
        return self.faces == other.faces and [len(x) for x in self.labels] == [len(x) for x in other.labels]


def point() -> DeltaComplex:
    return DeltaComplex.discrete(["*"])


def minimal_circle() -> DeltaComplex:
    """One vertex and one edge whose two faces are that vertex."""
    return DeltaComplex([["v"], ["e"]], [[()], [(0, 0)]])


def simplex(n: int) -> DeltaComplex:
    return DeltaComplex.from_facets([tuple(range(n + 1))])


def torus_9() -> DeltaComplex:
    """The 3x3 grid triangulation of the torus (9 vertices, 27 edges, 18 triangles)."""
    facets = []
    for i in range(3):
        for j in range(3):
            a = 3 * i + j
            b = 3 * ((i + 1) % 3) + j
            c = 3 * ((i + 1) % 3) + (j + 1) % 3
            e = 3 * i + (j + 1) % 3
            facets += [(a, b, c), (a, e, c)]
    return DeltaComplex.from_facets(facets)


def orientation_cocycle(K: DeltaComplex) -> list[int]:
    """Top-dimensional cochain summing to a generator of ``H^top`` on a closed
    oriented surface/curve: value 1 on one top simplex, 0 elsewhere."""
    n = K.count(K.dim)
    return [1] + [0] * (n - 1)


@dataclass
class DeltaMap:
    """Dimension-preserving map of Delta-complexes: ``maps[d][j]`` is the image index."""

    source: DeltaComplex
    target: DeltaComplex
    maps: list

    def check(self):
        for d in range(self.source.dim + 1):
            if len(self.maps[d]) != self.source.count(d):
                raise SimplicialError("map is not total")
            for j in range(self.source.count(d)):
                t = self.maps[d][j]
                if not 0 <= t < self.target.count(d):
                    raise SimplicialError("map index out of range")
                for i in range(d + 1 if d else 0):
                    if self.maps[d - 1][self.source.face(d, j, i)] != self.target.face(d, t, i):
                        raise SimplicialError("map does not commute with faces")

    def __call__(self, d: int, j: int) -> int:
        return self.maps[d][j]

    def then(self, other: "DeltaMap") -> "DeltaMap":
        return DeltaMap(self.source, other.target,
                        [[other.maps[d][x] for x in self.maps[d]] for d in range(len(self.maps))])

    @classmethod
    def identity(cls, K: DeltaComplex) -> "DeltaMap":
        return cls(K, K, [list(range(K.count(d))) for d in range(K.dim + 1)])

    @classmethod
    def of_sets(cls, src: DeltaComplex, tgt: DeltaComplex, f: Callable[[Hashable], Hashable]) -> "DeltaMap":
        idx = {x: i for i, x in enumerate(tgt.labels[0])}
        return cls(src, tgt, [[idx[f(x)] for x in src.labels[0]]])

    def equals(self, other: "DeltaMap") -> bool:
        return self.maps == other.maps


# --------------------------------------------------- simplicial objects

@dataclass
class TruncatedSimplicialSet:
    """Levels ``0..N`` with face maps ``faces[n][i]: level n -> n-1`` and
    optional degeneracies ``degens[n][i]: level n -> n+1`` (``n < N``)."""

    levels: list
    faces: list
    degens: Optional[list] = None
    name: str = ""

    @property
    def N(self) -> int:
        return len(self.levels) - 1

    def level_sizes(self) -> list[int]:
        return [lv.count(0) for lv in self.levels]

    def check(self):
        N = self.N
        for n in range(1, N + 1):
            if len(self.faces[n]) != n + 1:
                raise SimplicialError(f"level {n} needs {n + 1} face maps")
            for f in self.faces[n]:
                f.check()
        for n in range(2, N + 1):
            for i in range(n + 1):
                for j in range(i + 1, n + 1):
                    a = self.faces[n][j].then(self.faces[n - 1][i])
                    b = self.faces[n][i].then(self.faces[n - 1][j - 1])
                    if not a.equals(b):
                        raise SimplicialError(f"e_{i} e_{j} != e_{j - 1} e_{i} on level {n}")
        if self.degens is None:
            return
        for n in range(N):
            if len(self.degens[n]) != n + 1:
                raise SimplicialError(f"level {n} needs {n + 1} degeneracies")
            for s in self.degens[n]:
                s.check()
            for j in range(n + 1):
                s = self.degens[n][j]
                for i in range(n + 2):
                    lhs = s.then(self.faces[n + 1][i])
                    if i in (j, j + 1):
                        if not lhs.equals(DeltaMap.identity(self.levels[n])):
                            raise SimplicialError(f"e_{i} s_{j} != id on level {n}")
                    elif i < j:
                        rhs = self.faces[n][i].then(self.degens[n - 1][j - 1])
                        if not lhs.equals(rhs):
                            raise SimplicialError(f"e_{i} s_{j} identity fails on level {n}")
                    else:
                        rhs = self.faces[n][i - 1].then(self.degens[n - 1][j])
                        if not lhs.equals(rhs):
                            raise SimplicialError(f"e_{i} s_{j} identity fails on level {n}")
        for n in range(N - 1):
            for i in range(n + 1):
                for j in range(i, n + 1):
                    a = self.degens[n][j].then(self.degens[n + 1][i])
                    b = self.degens[n][i].then(self.degens[n + 1][j + 1])
                    if not a.equals(b):
                        raise SimplicialError(f"s_{i} s_{j} identity fails on level {n}")

    @property
    def discrete(self) -> bool:
        return all(lv.dim == 0 for lv in self.levels)

    def index(self, n: int, label) -> int:
        return self.levels[n].labels[0].index(label)


def _set_level(labels) -> DeltaComplex:
    return DeltaComplex.discrete(labels)


def simplicial_set(level_labels: Sequence[Sequence], face_fns, degen_fns=None, name="") -> TruncatedSimplicialSet:
    """Discrete simplicial set from labels and label-valued face/degeneracy functions."""
    levels = [_set_level(lv) for lv in level_labels]
    N = len(levels) - 1
    faces = [[]] + [[DeltaMap.of_sets(levels[n], levels[n - 1], lambda x, n=n, i=i: face_fns(n, i, x))
                     for i in range(n + 1)] for n in range(1, N + 1)]
    degens = None
    if degen_fns is not None:
        degens = [[DeltaMap.of_sets(levels[n], levels[n + 1], lambda x, n=n, i=i: degen_fns(n, i, x))
                   for i in range(n + 1)] for n in range(N)]
    X = TruncatedSimplicialSet(levels, faces, degens, name)
    X.check()
    return X


def constant_object(K: DeltaComplex, N: int, name: str = "") -> TruncatedSimplicialSet:
    """Constant simplicial object: every level ``K``, every structure map the identity."""
    idm = DeltaMap.identity(K)
    X = TruncatedSimplicialSet(
        [K] * (N + 1),
        [[]] + [[idm] * (n + 1) for n in range(1, N + 1)],
        [[idm] * (n + 1) for n in range(N)],
        name or "constant",
    )
    X.check()
    return X


# ---------------------------------------------------- groups & categories

@dataclass
class FiniteGroup:
    elements: list
    table: dict  # (a, b) -> a*b
    name: str = ""

    def __post_init__(self):
        els = self.elements
        for a in els:
            for b in els:
                if self.table.get((a, b)) not in els:
                    raise SimplicialError("multiplication table is not closed")
        for a, b, c in product(els, repeat=3):
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                raise SimplicialError("multiplication is not associative")
        ids = [e for e in els if all(self.mul(e, a) == a == self.mul(a, e) for a in els)]
        if len(ids) != 1:
            raise SimplicialError("no identity element")
        self.identity = ids[0]
        self._inv = {}
        for a in els:
            inv = [b for b in els if self.mul(a, b) == self.identity]
            if not inv:
                raise SimplicialError(f"{a!r} has no inverse")
            self._inv[a] = inv[0]

    def mul(self, a, b):
        return self.table[(a, b)]

    def inv(self, a):
        return self._inv[a]

    @property
    def order(self) -> int:
        return len(self.elements)

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        els = list(range(n))
        return cls(els, {(a, b): (a + b) % n for a in els for b in els}, f"Z/{n}")

    @classmethod
    def symmetric3(cls) -> "FiniteGroup":
        from itertools import permutations
        els = list(permutations(range(3)))
        table = {(a, b): tuple(a[b[i]] for i in range(3)) for a in els for b in els}
        return cls(els, table, "S3")

    @classmethod
    def from_table(cls, elements: Sequence, rows: Sequence[Sequence], name: str = "") -> "FiniteGroup":
        els = list(elements)
        table = {(a, b): rows[i][j] for i, a in enumerate(els) for j, b in enumerate(els)}
        return cls(els, table, name)


@dataclass
class FiniteCategory:
    """Objects, morphisms, ``source``/``target`` maps and a composition table.

    ``compose[(f, g)]`` is ``f o g`` and is defined exactly when
    ``source[f] == target[g]``.
    """

    objects: list
    morphisms: list
    source: dict
    target: dict
    compose: dict
    identities: dict
    name: str = ""

    def __post_init__(self):
        for f in self.morphisms:
            if self.source[f] not in self.objects or self.target[f] not in self.objects:
                raise SimplicialError(f"morphism {f!r} has an unknown endpoint")
        for f in self.morphisms:
            for g in self.morphisms:
                composable = self.source[f] == self.target[g]
                if composable != ((f, g) in self.compose):
                    raise SimplicialError(f"composition of {f!r}, {g!r} defined incorrectly")
                if composable:
                    h = self.compose[(f, g)]
                    if self.source[h] != self.source[g] or self.target[h] != self.target[f]:
                        raise SimplicialError("composite has wrong endpoints")
        for x, e in self.identities.items():
            if self.source[e] != x or self.target[e] != x:
                raise SimplicialError("identity has wrong endpoints")
        for f in self.morphisms:
            if self.compose[(f, self.identities[self.source[f]])] != f or \
                    self.compose[(self.identities[self.target[f]], f)] != f:
                raise SimplicialError("identity law fails")
        for f in self.morphisms:
            for g in self.morphisms:
                if (f, g) not in self.compose:
                    continue
                for h in self.morphisms:
                    if (g, h) in self.compose:
                        if self.compose[(self.compose[(f, g)], h)] != self.compose[(f, self.compose[(g, h)])]:
                            raise SimplicialError("composition is not associative")

    def comp(self, f, g):
        return self.compose[(f, g)]

    @classmethod
    def of_group(cls, G: FiniteGroup) -> "FiniteCategory":
        mors = list(G.elements)
        return FiniteGroupoid(["*"], mors, {g: "*" for g in mors}, {g: "*" for g in mors},
                              {(a, b): G.mul(a, b) for a in mors for b in mors}, {"*": G.identity},
                              G.name)

    @classmethod
    def discrete(cls, objects: Sequence) -> "FiniteCategory":
        objs = list(objects)
        mors = [("id", x) for x in objs]
        return FiniteGroupoid(objs, mors, {m: m[1] for m in mors}, {m: m[1] for m in mors},
                              {(m, m): m for m in mors}, {x: ("id", x) for x in objs}, "discrete")


class FiniteGroupoid(FiniteCategory):
    def __post_init__(self):
        super().__post_init__()
        self.inverses = {}
        for f in self.morphisms:
            inv = [g for g in self.morphisms if (f, g) in self.compose and (g, f) in self.compose
                   and self.compose[(f, g)] == self.identities[self.target[f]]
                   and self.compose[(g, f)] == self.identities[self.source[f]]]
            if not inv:
                raise SimplicialError(f"morphism {f!r} is not invertible")
            self.inverses[f] = inv[0]


def action_groupoid(G: FiniteGroup, X: Sequence, act: Callable) -> FiniteGroupoid:
    """Groupoid ``G x X => X`` with ``s(g, x) = x``, ``t(g, x) = g x``."""
    X = list(X)
    for x in X:
        if act(G.identity, x) != x:
            raise SimplicialError("identity does not act trivially")
        for g in G.elements:
            if act(g, x) not in X:
                raise SimplicialError("action leaves the set")
            for h in G.elements:
                if act(g, act(h, x)) != act(G.mul(g, h), x):
                    raise SimplicialError("action is not compatible with multiplication")
    mors = [(g, x) for g in G.elements for x in X]
    src = {m: m[1] for m in mors}
    tgt = {m: act(m[0], m[1]) for m in mors}
    comp = {}
    for (g, y) in mors:
        for (h, x) in mors:
            if y == act(h, x):
                comp[((g, y), (h, x))] = (G.mul(g, h), x)
    return FiniteGroupoid(X, mors, src, tgt, comp, {x: (G.identity, x) for x in X},
                          f"{G.name} x X")


def nerve(C, N: int) -> TruncatedSimplicialSet:
    """Nerve of a finite category (groups are one-object categories)."""
    if isinstance(C, FiniteGroup):
        C = FiniteCategory.of_group(C)
    if N < 0:
        raise SimplicialError("N must be nonnegative")
    levels = [list(C.objects)]
    strings = [(f,) for f in C.morphisms]
    for n in range(1, N + 1):
        if n == 1:
            lv = strings
        else:
            lv = [s + (f,) for s in levels[-1] for f in C.morphisms if C.source[s[-1]] == C.target[f]]
        levels.append(lv)

    def face(n, i, x):
        if n == 1:
            return C.source[x[0]] if i == 0 else C.target[x[0]]
        if i == 0:
            return x[1:]
        if i == n:
            return x[:-1]
        return x[:i - 1] + (C.comp(x[i - 1], x[i]),) + x[i + 1:]

    def degen(n, i, x):
        if n == 0:
            return (C.identities[x],)
        # object x_i of the string x_0 <- f_1 - x_1 <- ... : target of f_{i+1} / source of f_i
        obj = C.target[x[i]] if i < n else C.source[x[n - 1]]
        return x[:i] + (C.identities[obj],) + x[i:]

    X = simplicial_set(levels, face, degen, name=f"nerve({C.name})")
    return X


@dataclass
class BarPair:
    total: TruncatedSimplicialSet   # nerve of G-bar, level n = G^(n+1)
    base: TruncatedSimplicialSet    # nerve of G
    gamma: list                     # gamma[n]: index map level n -> level n
    group: FiniteGroup

    def gamma_label(self, g: tuple) -> tuple:
        G = self.group
        return tuple(G.mul(g[i], G.inv(g[i + 1])) for i in range(len(g) - 1)) or ("*",)

    def check(self):
        for n in range(1, self.total.N + 1):
            for i in range(n + 1):
                a = [self.gamma[n - 1][j] for j in self.total.faces[n][i].maps[0]]
                b = [self.base.faces[n][i].maps[0][j] for j in self.gamma[n]]
                if a != b:
                    raise SimplicialError(f"gamma does not commute with face {i} on level {n}")
        if self.total.degens:
            for n in range(self.total.N):
                for i in range(n + 1):
                    a = [self.gamma[n + 1][j] for j in self.total.degens[n][i].maps[0]]
                    b = [self.base.degens[n][i].maps[0][j] for j in self.gamma[n]]
                    if a != b:
                        raise SimplicialError("gamma does not commute with degeneracies")


def ebar_nerve(G: FiniteGroup, N: int) -> TruncatedSimplicialSet:
    levels = [list(product(G.elements, repeat=n + 1)) for n in range(N + 1)]
    return simplicial_set(
        levels,
        lambda n, i, x: x[:i] + x[i + 1:],
        lambda n, i, x: x[:i + 1] + x[i:],
        name=f"nerve({G.name}-bar)",
    )


def bar_pair(G: FiniteGroup, N: int) -> BarPair:
    total = ebar_nerve(G, N)
    base = nerve(G, N)
    gamma = []
    for n in range(N + 1):
        idx = {x: i for i, x in enumerate(base.levels[n].labels[0])}
        row = []
        for g in total.levels[n].labels[0]:
            lab = tuple(G.mul(g[i], G.inv(g[i + 1])) for i in range(n))
            row.append(idx["*"] if n == 0 else idx[lab])
        gamma.append(row)
    bp = BarPair(total, base, gamma, G)
    bp.check()
    return bp


def right_translation(G: FiniteGroup):
    """Free right action of ``G`` on the levels of ``nerve(G-bar)``."""
    return lambda n, x, h: tuple(G.mul(g, h) for g in x)


# ------------------------------------------------ bisimplicial objects

@dataclass
class BisimplicialSet:
    """Finite sets ``X[(m, n)]`` with horizontal/vertical faces as index lists."""

    sets: dict
    hfaces: dict   # (m, n) -> [list over i of index maps to (m-1, n)]
    vfaces: dict   # (m, n) -> [list over j of index maps to (m, n-1)]
    vdegens: dict = field(default_factory=dict)

    def check(self):
        for (m, n), els in self.sets.items():
            if m >= 1 and (m, n) in self.hfaces and n >= 1 and (m, n - 1) in self.hfaces:
                for i in range(m + 1):
                    for j in range(n + 1):
                        a = [self.vfaces[(m - 1, n)][j][self.hfaces[(m, n)][i][x]] for x in range(len(els))]
                        b = [self.hfaces[(m, n - 1)][i][self.vfaces[(m, n)][j][x]] for x in range(len(els))]
                        if a != b:
                            raise SimplicialError(f"horizontal and vertical faces do not commute at {(m, n)}")
        for (m, n) in self.sets:
            for k, maps in ((0, self.hfaces.get((m, n))), (1, self.vfaces.get((m, n)))):
                if not maps:
                    continue
                top = m if k == 0 else n
                prev = (m - 1, n) if k == 0 else (m, n - 1)
                prevmaps = (self.hfaces if k == 0 else self.vfaces).get(prev)
                if not prevmaps:
                    continue
                for i in range(top + 1):
                    for j in range(i + 1, top + 1):
                        a = [prevmaps[i][maps[j][x]] for x in range(len(self.sets[(m, n)]))]
                        b = [prevmaps[j - 1][maps[i][x]] for x in range(len(self.sets[(m, n)]))]
                        if a != b:
                            raise SimplicialError(f"face identity fails at {(m, n)}")


@dataclass
class UniversalBundle:
    U: BisimplicialSet
    B: BisimplicialSet
    quotient: dict       # (m, n) -> index map U -> B
    psi: list            # psi[n]: index map P_n -> U_{n,0}


def universal_bundle(P: TruncatedSimplicialSet, act: Callable, group: FiniteGroup, M: int) -> UniversalBundle:
    """``U_{n,m} = (P_n)^(m+1)``; vertical ``d_i`` omits coordinate ``i``; ``B = U / G``."""
    if not P.discrete:
        raise SimplicialError("universal bundle needs a levelwise discrete P")
    N = P.N
    plabels = [P.levels[n].labels[0] for n in range(N + 1)]
    pindex = [{x: i for i, x in enumerate(lv)} for lv in plabels]
    for n in range(N + 1):
        for x in plabels[n]:
            orbit = [act(n, x, g) for g in group.elements]
            if len(set(orbit)) != group.order:
                raise SimplicialError("the action is not free")
    sets, hf, vf, vdeg = {}, {}, {}, {}
    for n in range(N + 1):
        for m in range(M + 1):
            sets[(n, m)] = list(product(range(len(plabels[n])), repeat=m + 1))
    index = {key: {x: i for i, x in enumerate(v)} for key, v in sets.items()}
    for (n, m), els in sets.items():
        if n >= 1:
            hf[(n, m)] = [[index[(n - 1, m)][tuple(P.faces[n][i].maps[0][c] for c in u)] for u in els]
                          for i in range(n + 1)]
        if m >= 1:
            vf[(n, m)] = [[index[(n, m - 1)][u[:i] + u[i + 1:]] for u in els] for i in range(m + 1)]
        if m < M:
            vdeg[(n, m)] = [[index[(n, m + 1)][u[:i + 1] + u[i:]] for u in els] for i in range(m + 1)]
    U = BisimplicialSet(sets, hf, vf, vdeg)
    U.check()

    def act_u(n, u, g):
        return tuple(pindex[n][act(n, plabels[n][c], g)] for c in u)

    bsets, quotient = {}, {}
    for key, els in sets.items():
        n = key[0]
        reps, qmap = {}, []
        for u in els:
            rep = min(act_u(n, u, g) for g in group.elements)
            if rep not in reps:
                reps[rep] = len(reps)
            qmap.append(reps[rep])
        bsets[key] = list(reps)
        quotient[key] = qmap
    bh, bv = {}, {}
    for key, els in bsets.items():
        n, m = key
        first = {}
        for ui, bi in enumerate(quotient[key]):
            first.setdefault(bi, ui)
        if key in hf:
            bh[key] = [[quotient[(n - 1, m)][hf[key][i][first[b]]] for b in range(len(els))] for i in range(n + 1)]
        if key in vf:
            bv[key] = [[quotient[(n, m - 1)][vf[key][i][first[b]]] for b in range(len(els))] for i in range(m + 1)]
    B = BisimplicialSet(bsets, bh, bv)
    B.check()
    psi = [[index[(n, 0)][(i,)] for i in range(len(plabels[n]))] for n in range(N + 1)]
    return UniversalBundle(U, B, quotient, psi)


# -------------------------------------------------------- cochains

def _coboundary(K: DeltaComplex, s: int) -> list:
    """``delta: C^s(K) -> C^(s+1)(K)`` as a matrix."""
    rows = K.count(s + 1)
    cols = K.count(s)
    M = [[0] * cols for _ in range(rows)]
    for j in range(rows):
        for i, f in enumerate(K.faces[s + 1][j]):
            M[j][f] += (-1) ** i
    return M


def _pullback(f: DeltaMap, s: int) -> list:
    """``f^*: C^s(target) -> C^s(source)``."""
    rows = f.source.count(s)
    cols = f.target.count(s)
    M = [[0] * cols for _ in range(rows)]
    for j in range(rows):
        M[j][f.maps[s][j]] += 1
    return M


def cochain_double_complex(X: TruncatedSimplicialSet, ring: str = "Z") -> cc.DoubleComplex:
    """``S^{r,s} = C^s(X_r)``, horizontal ``sum (-1)^i e_i^*``, vertical coboundary."""
    integral = ring == "Z"
    kinds, dh, dv = {}, {}, {}
    for r, K in enumerate(X.levels):
        for s in range(K.dim + 1):
            if K.count(s):
                kinds[(r, s)] = (integral,) * K.count(s)
    for (r, s) in list(kinds):
        K = X.levels[r]
        if s + 1 <= K.dim and K.count(s + 1):
            dv[(r, s)] = _coboundary(K, s)
        if r + 1 <= X.N and (r + 1, s) in kinds:
            L = X.levels[r + 1]
            M = [[0] * K.count(s) for _ in range(L.count(s))]
            for i, f in enumerate(X.faces[r + 1]):
                P = _pullback(f, s)
                for a in range(len(M)):
                    for b in range(len(M[0])):
                        if P[a][b]:
                            M[a][b] += (-1) ** i * P[a][b]
            dh[(r, s)] = M
    D = cc.DoubleComplex(kinds, dh, dv)
    D.check()
    return D


def cochain_total(X: TruncatedSimplicialSet, ring: str = "Z") -> cc.TotalComplex:
    return cc.totalize(cochain_double_complex(X, ring))


def validity_window(X: TruncatedSimplicialSet) -> int:
    """Highest degree whose total cohomology is trustworthy at truncation ``N``."""
    return X.N - 1


def bisimplicial_cochain_triple_complex(X: BisimplicialSet, ring: str = "Z") -> cc.TripleComplex:
    """``S^{r,s,0} = functions on X_{r,s}``; the third axis is zero for discrete levels."""
    integral = ring == "Z"
    kinds = {(r, s, 0): (integral,) * len(els) for (r, s), els in X.sets.items() if els}
    d1, d2 = {}, {}
    for (r, s, _t) in kinds:
        for axis, faces, tgt in ((1, X.hfaces, (r + 1, s)), (2, X.vfaces, (r, s + 1))):
            if tgt not in X.sets or tgt not in faces:
                continue
            ntgt = len(X.sets[tgt])
            M = [[0] * len(X.sets[(r, s)]) for _ in range(ntgt)]
            for i, fmap in enumerate(faces[tgt]):
                for a, b in enumerate(fmap):
                    M[a][b] += (-1) ** i
            (d1 if axis == 1 else d2)[(r, s, 0)] = M
    return cc.TripleComplex(kinds, d1, d2, {})
