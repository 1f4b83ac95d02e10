"""Exact integer / rational linear algebra.

Everything here works on dense row-major lists of ``int`` or
``fractions.Fraction``.  Matrices at desk scale stay below a few hundred
rows, so dense storage with zero-skipping elimination is fast enough and
keeps the code simple.

Besides the usual Smith normal form machinery the module handles *mixed*
modules ``Z^a (+) Q^b``: a coordinate is either integral or rational.
Cohomology of cone complexes built from integral and rational cochains
lives in such modules, and the resulting groups have the shape::

    Z^free (+) torsion (+) Q^rational_rank (+) (Q/Z)^circle_rank
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Optional, Sequence

Vector = list
MatrixT = list


class DimensionError(ValueError):
    pass


# ---------------------------------------------------------------- basics

def zeros(m: int, n: int, value=0) -> MatrixT:
    return [[value] * n for _ in range(m)]


def identity(n: int) -> MatrixT:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(A: MatrixT, ncols: Optional[int] = None) -> MatrixT:
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


def shape(A: MatrixT, ncols: Optional[int] = None) -> tuple[int, int]:
    if not A:
        return 0, (ncols or 0)
    return len(A), len(A[0])


def matmul(A: MatrixT, B: MatrixT, inner: Optional[int] = None,
           ncols: Optional[int] = None) -> MatrixT:
    """Product ``A @ B``; ``ncols`` gives the width when ``B`` has no rows."""
    m = len(A)
    if not B:
        n = ncols if ncols is not None else 0
        return zeros(m, n)
    n = len(B[0])
    out = zeros(m, n)
    for i, row in enumerate(A):
        acc = out[i]
        for k, a in enumerate(row):
            if a:
                brow = B[k]
                for j in range(n):
                    b = brow[j]
                    if b:
                        acc[j] += a * b
    return out


def matvec(A: MatrixT, x: Sequence) -> Vector:
    return [sum(a * b for a, b in zip(row, x) if a and b) for row in A]


def columns_to_matrix(cols: Sequence[Sequence], nrows: int) -> MatrixT:
    if not cols:
        return [[] for _ in range(nrows)]
    return [[c[i] for c in cols] for i in range(nrows)]


def matrix_columns(A: MatrixT, ncols: Optional[int] = None) -> list[Vector]:
    m, n = shape(A, ncols)
    return [[A[i][j] for i in range(m)] for j in range(n)]


def is_zero_vector(v: Sequence) -> bool:
    return all(x == 0 for x in v)


def common_denominator(values) -> int:
    d = 1
    for v in values:
        if isinstance(v, Fraction):
            d = lcm(d, v.denominator)
    return d


def scale_to_integers(A: MatrixT) -> tuple[MatrixT, int]:
    """Return ``(D*A, D)`` with ``D*A`` integral and ``D`` minimal."""
    D = common_denominator(x for row in A for x in row)
    return [[int(x * D) for x in row] for row in A], D


def det(A: MatrixT) -> Fraction:
    R = [[Fraction(x) for x in row] for row in A]
    n = len(R)
    result = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if R[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            R[c], R[p] = R[p], R[c]
            result = -result
        piv = R[c][c]
        result *= piv
        for r in range(c + 1, n):
            f = R[r][c]
            if f:
                f /= piv
                R[r] = [a - f * b for a, b in zip(R[r], R[c])]
    return result


# ----------------------------------------------------------- rational side

def rref(A: MatrixT, ncols: Optional[int] = None) -> tuple[MatrixT, list[int]]:
    """Reduced row echelon form over Q. Returns ``(nonzero rows, pivots)``."""
    m, n = shape(A, ncols)
    rows = [[Fraction(x) for x in row] for row in A]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        p = None
        for i in range(r, m):
            if rows[i][c] != 0:
                p = i
                break
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        if piv != 1:
            rows[r] = [x / piv for x in rows[r]]
        prow = rows[r]
        nz = [j for j in range(c, n) if prow[j] != 0]
        for i in range(m):
            if i != r:
                f = rows[i][c]
                if f:
                    row = rows[i]
                    for j in nz:
                        row[j] -= f * prow[j]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return rows[:r], pivots


def rank(A: MatrixT) -> int:
    return len(rref(A)[1])


def nullspace(A: MatrixT, ncols: Optional[int] = None) -> list[Vector]:
    """Basis of ``{x : A x = 0}`` over Q (one vector per free column)."""
    m, n = shape(A, ncols)
    R, pivots = rref(A, n)
    pivset = set(pivots)
    basis = []
    for f in range(n):
        if f in pivset:
            continue
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve_rational(A: MatrixT, b: Sequence, ncols: Optional[int] = None) -> Optional[Vector]:
    m, n = shape(A, ncols)
    if len(b) != m:
        raise DimensionError(f"right-hand side has length {len(b)}, expected {m}")
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    if m == 0:
        return [Fraction(0)] * n
    R, pivots = rref(aug, n + 1)
    if pivots and pivots[-1] == n:
        return None
    x = [Fraction(0)] * n
    for row, p in zip(R, pivots):
        x[p] = row[n]
    return x


def column_space_basis(cols: Sequence[Sequence], dim: int) -> list[Vector]:
    """Independent subset-free basis of the span of ``cols`` (rref rows)."""
    if not cols:
        return []
    R, _ = rref([list(c) for c in cols], dim)
    return R


class SubspaceReducer:
    """Projection of Q^N onto a complement of a subspace ``W``.

    ``reduce(x)`` subtracts the ``W`` component along the rref pivots, so
    ``reduce(x) == 0`` iff ``x`` lies in ``W``; ``project(x)`` drops the
    pivot coordinates, giving coordinates on ``Q^N / W``.
    """

    def __init__(self, gens: Sequence[Sequence], dim: int):
        self.dim = dim
        if gens:
            self.rows, self.pivots = rref([list(g) for g in gens], dim)
        else:
            self.rows, self.pivots = [], []
        pivset = set(self.pivots)
        self.free = [j for j in range(dim) if j not in pivset]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, x: Sequence) -> Vector:
        y = [Fraction(v) for v in x]
        for row, p in zip(self.rows, self.pivots):
            f = y[p]
            if f:
                for j, r in enumerate(row):
                    if r:
                        y[j] -= f * r
        return y

    def project(self, x: Sequence) -> Vector:
        y = self.reduce(x)
        return [y[j] for j in self.free]

    def lift(self, y: Sequence) -> Vector:
        x = [Fraction(0)] * self.dim
        for j, v in zip(self.free, y):
            x[j] = Fraction(v)
        return x

    def contains(self, x: Sequence) -> bool:
        return is_zero_vector(self.reduce(x))


# ------------------------------------------------------------ integer side

@dataclass(frozen=True)
class SmithForm:
    """``U @ M @ V == S`` with ``S`` diagonal and ``U``, ``V`` unimodular."""

    S: MatrixT
    U: MatrixT
    V: MatrixT
    U_inv: MatrixT
    V_inv: MatrixT

    @property
    def diagonal(self) -> list[int]:
        k = min(len(self.S), len(self.S[0]) if self.S else 0)
        return [self.S[i][i] for i in range(k)]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def _snf(M: MatrixT, nrows: int, ncols: int) -> SmithForm:
    A = [[int(x) for x in row] for row in M]
    m, n = nrows, ncols
    U, Ui = identity(m), identity(m)
    V, Vi = identity(n), identity(n)

    def swap_rows(i, j):
        if i != j:
            A[i], A[j] = A[j], A[i]
            U[i], U[j] = U[j], U[i]
            for row in Ui:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        if i != j:
            for row in A:
                row[i], row[j] = row[j], row[i]
            for row in V:
                row[i], row[j] = row[j], row[i]
            Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        if q:
            A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
            U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]
            for row in Ui:
                row[src] -= q * row[dst]

    def add_col(dst, src, q):
        # col_dst += q * col_src
        if q:
            for row in A:
                row[dst] += q * row[src]
            for row in V:
                row[dst] += q * row[src]
            Vi[src] = [a - q * b for a, b in zip(Vi[src], Vi[dst])]

    def negate_row(i):
        A[i] = [-a for a in A[i]]
        U[i] = [-a for a in U[i]]
        for row in Ui:
            row[i] = -row[i]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                a = A[i][j]
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            done = True
            piv = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // piv))
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // piv))
            cand = None
            for i in range(t + 1, m):
                a = A[i][t]
                if a and (cand is None or abs(a) < cand[0]):
                    cand = (abs(a), i, None)
            for j in range(t + 1, n):
                a = A[t][j]
                if a and (cand is None or abs(a) < cand[0]):
                    cand = (abs(a), None, j)
            if cand is not None:
                done = False
                if cand[1] is not None:
                    swap_rows(t, cand[1])
                else:
                    swap_cols(t, cand[2])
                continue
            piv = A[t][t]
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is not None:
                add_row(t, bad, 1)
                done = False
            if done:
                break
        if A[t][t] < 0:
            negate_row(t)
    return SmithForm(A, U, V, Ui, Vi)


def smith_normal_form(M: MatrixT, ncols: Optional[int] = None) -> SmithForm:
    """Smith normal form with transforms, pivoting on minimal absolute value."""
    m, n = shape(M, ncols)
    for row in M:
        for x in row:
            if isinstance(x, Fraction) and x.denominator != 1:
                raise ValueError("smith_normal_form needs an integer matrix")
    return _snf(M, m, n)


def integer_kernel(A: MatrixT, ncols: Optional[int] = None) -> list[Vector]:
    """Basis of the saturated lattice ``{x in Z^n : A x = 0}``."""
    m, n = shape(A, ncols)
    if m == 0:
        return [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    Ai, _ = scale_to_integers(A)
    snf = _snf(Ai, m, n)
    r = snf.rank
    return [[snf.V[i][j] for i in range(n)] for j in range(r, n)]


def solve_integer(A: MatrixT, b: Sequence, ncols: Optional[int] = None) -> Optional[Vector]:
    """Some ``x in Z^n`` with ``A x = b`` (rational entries allowed), else None."""
    m, n = shape(A, ncols)
    if len(b) != m:
        raise DimensionError(f"right-hand side has length {len(b)}, expected {m}")
    if m == 0:
        return [0] * n
    D = common_denominator(list(b) + [x for row in A for x in row])
    Ai = [[int(x * D) for x in row] for row in A]
    bi = [x * D for x in b]
    if any(isinstance(x, Fraction) and x.denominator != 1 for x in bi):
        return None
    bi = [int(x) for x in bi]
    snf = _snf(Ai, m, n)
    c = matvec(snf.U, bi)
    y = [0] * n
    for i in range(m):
        d = snf.S[i][i] if i < n else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d:
                return None
            y[i] = c[i] // d
    return matvec(snf.V, y)


def solve(M: MatrixT, b: Sequence, ring: str = "Z", ncols: Optional[int] = None) -> Optional[Vector]:
    """Solve ``M x = b`` over ``ring`` ("Z" or "Q"); ``None`` if unsolvable."""
    if ring == "Z":
        return solve_integer(M, b, ncols)
    if ring == "Q":
        return solve_rational(M, b, ncols)
    raise ValueError(f"unknown ring {ring!r}")


# ----------------------------------------------------------------- groups

@dataclass
class AbelianGroup:
    """``Z^free (+) (+)_i Z/d_i (+) Q^rational_rank (+) (Q/Z)^circle_rank``.

    ``torsion`` is a divisibility chain of integers >= 2.  For complexes with
    only integral coordinates the last two ranks are zero and this is an
    ordinary finitely generated abelian group.  ``generators`` maps the
    summand kind ("free", "torsion", "rational", "circle") to ambient
    coordinate vectors.
    """

    free_rank: int = 0
    torsion: list = field(default_factory=list)
    rational_rank: int = 0
    circle_rank: int = 0
    generators: dict = field(default_factory=dict)

    def invariants(self) -> tuple:
        return (self.free_rank, tuple(self.torsion), self.rational_rank, self.circle_rank)

    def is_trivial(self) -> bool:
        return self.invariants() == (0, (), 0, 0)

    def isomorphic(self, other: "AbelianGroup") -> bool:
        return self.invariants() == other.invariants()

    @property
    def dimension(self) -> int:
        return self.rational_rank

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        if self.rational_rank:
            parts.append("Q" if self.rational_rank == 1 else f"Q^{self.rational_rank}")
        if self.circle_rank:
            parts.append("Q/Z" if self.circle_rank == 1 else f"(Q/Z)^{self.circle_rank}")
        return " + ".join(parts) if parts else "0"


def cokernel(M: MatrixT, ncols: Optional[int] = None) -> AbelianGroup:
    """Presentation of ``Z^rows / image(M)`` with generator lifts."""
    m, n = shape(M, ncols)
    snf = smith_normal_form(M, n)
    diag = [snf.S[i][i] if i < n else 0 for i in range(m)]
    free, tors = [], []
    for i, d in enumerate(diag):
        col = [snf.U_inv[r][i] for r in range(m)]
        if d == 0:
            free.append(col)
        elif d > 1:
            tors.append((d, col))
    return AbelianGroup(
        free_rank=len(free),
        torsion=[d for d, _ in tors],
        generators={"free": free, "torsion": [c for _, c in tors]},
    )


# ------------------------------------------------------------ mixed modules

class MixedSubgroup:
    """Subgroup ``Z<int_gens> + Q<rat_gens>`` of ``Q^dim``."""

    def __init__(self, dim: int, int_gens: Sequence[Sequence] = (), rat_gens: Sequence[Sequence] = ()):
        self.dim = dim
        self.int_gens = [list(g) for g in int_gens]
        self.rat_gens = [list(g) for g in rat_gens]
        self._W = SubspaceReducer(self.rat_gens, dim)
        self._proj = [self._W.project(g) for g in self.int_gens]

    def solve(self, z: Sequence) -> Optional[tuple[Vector, Vector]]:
        """Integer ``k`` and rational ``mu`` with ``sum k*int + sum mu*rat == z``."""
        if len(z) != self.dim:
            raise DimensionError("vector has wrong length")
        target = self._W.project(z)
        g = len(self.int_gens)
        if g == 0:
            k: Optional[Vector] = [] if is_zero_vector(target) else None
        else:
            k = solve_integer(columns_to_matrix(self._proj, len(target)), target, g)
        if k is None:
            return None
        rest = [Fraction(v) for v in z]
        for kk, gen in zip(k, self.int_gens):
            if kk:
                rest = [a - kk * b for a, b in zip(rest, gen)]
        if self.rat_gens:
            mu = solve_rational(columns_to_matrix(self.rat_gens, self.dim), rest, len(self.rat_gens))
            assert mu is not None
        else:
            assert is_zero_vector(rest)
            mu = []
        return k, mu

    def contains(self, z: Sequence) -> bool:
        return self.solve(z) is not None

    def contains_line(self, v: Sequence) -> bool:
        """Whether every rational multiple of ``v`` lies in the subgroup."""
        return self._W.contains(v)

    def contains_subgroup(self, other: "MixedSubgroup") -> bool:
        return all(self.contains(g) for g in other.int_gens) and all(
            self.contains_line(g) for g in other.rat_gens)

    def __add__(self, other: "MixedSubgroup") -> "MixedSubgroup":
        return MixedSubgroup(self.dim, self.int_gens + other.int_gens, self.rat_gens + other.rat_gens)

    def image(self, M: MatrixT, nrows: int) -> "MixedSubgroup":
        return MixedSubgroup(nrows, [matvec(M, g) for g in self.int_gens], [matvec(M, g) for g in self.rat_gens])

    def basis(self) -> "MixedBasis":
        """Independent generators: a lattice basis modulo the rational part, plus a basis of it."""
        rat = column_space_basis(self.rat_gens, self.dim) if self.rat_gens else []
        g = len(self.int_gens)
        if not g:
            return MixedBasis(self.dim, [], rat)
        m = len(self._W.free)
        if m == 0:
            return MixedBasis(self.dim, [], rat)
        P, _ = scale_to_integers(columns_to_matrix(self._proj, m))
        snf = smith_normal_form(P, g)
        ints = []
        for i in range(snf.rank):
            coeffs = [snf.V[j][i] for j in range(g)]
            v = [Fraction(0)] * self.dim
            for c, gen in zip(coeffs, self.int_gens):
                if c:
                    v = [a + c * b for a, b in zip(v, gen)]
            ints.append(v)
        return MixedBasis(self.dim, ints, rat)


@dataclass
class MixedBasis:
    """Basis of a mixed module: integral directions plus rational directions."""

    dim: int
    int_basis: list
    rat_basis: list

    def as_subgroup(self) -> MixedSubgroup:
        return MixedSubgroup(self.dim, self.int_basis, self.rat_basis)

    @property
    def size(self) -> int:
        return len(self.int_basis) + len(self.rat_basis)


def mixed_kernel(M: MatrixT, integral: Sequence[bool]) -> MixedBasis:
    """Kernel of a rational matrix on ``Z^a (+) Q^b`` (``integral`` marks Z coords)."""
    n = len(integral)
    K = nullspace(M, n) if M else [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    zidx = [i for i in range(n) if integral[i]]
    if not K:
        return MixedBasis(n, [], [])
    if not zidx:
        return MixedBasis(n, [], K)
    k = len(K)
    P = [[K[j][i] for j in range(k)] for i in zidx]  # a x k
    rat = [matvec(columns_to_matrix(K, n), t) for t in nullspace(P, k)]
    Pi, _ = scale_to_integers(P)
    ann = integer_kernel(transpose(Pi), len(zidx))
    if ann:
        lattice = integer_kernel(ann, len(zidx))
    else:
        lattice = [[int(i == j) for i in range(len(zidx))] for j in range(len(zidx))]
    ints = []
    Kmat = columns_to_matrix(K, n)
    for ell in lattice:
        t = solve_rational(P, ell, k)
        assert t is not None
        ints.append(matvec(Kmat, t))
    return MixedBasis(n, ints, rat)


@dataclass
class MixedQuotient:
    """The quotient ``Z / B`` of mixed modules, with its invariants."""

    cycles: MixedBasis
    boundaries: MixedSubgroup
    group: AbelianGroup

    def is_zero(self, z: Sequence) -> bool:
        return self.boundaries.contains(z)

    def order(self, z: Sequence, bound: int = 1000) -> Optional[int]:
        for m in range(1, bound + 1):
            if self.boundaries.contains([m * x for x in z]):
                return m
        return None


def _coordinates(basis: MixedBasis):
    cols = basis.int_basis + basis.rat_basis
    B = columns_to_matrix(cols, basis.dim)
    k = len(cols)

    def coords(x):
        c = solve_rational(B, x, k)
        if c is None:
            raise ValueError("vector is not in the span of the basis")
        return c
    return coords


def mixed_quotient(cycles: MixedBasis, boundaries: MixedSubgroup) -> MixedQuotient:
    """Invariants and generators of ``cycles / boundaries`` (boundaries inside cycles)."""
    l, v = len(cycles.int_basis), len(cycles.rat_basis)
    coords = _coordinates(cycles)
    int_c, rat_c = [], []
    for g in boundaries.int_gens:
        c = coords(g)
        zc = c[:l]
        if any(x.denominator != 1 for x in zc):
            raise ValueError("boundary generator is not in the cycle group")
        int_c.append(([int(x) for x in zc], c[l:]))
    for w in boundaries.rat_gens:
        c = coords(w)
        if not is_zero_vector(c[:l]):
            raise ValueError("rational boundary generator has integral component")
        rat_c.append(c[l:])
    W = SubspaceReducer(rat_c, v)
    m = len(W.free)
    g = len(int_c)
    Mz = [[int_c[j][0][i] for j in range(g)] for i in range(l)]
    Mq = [[W.project(int_c[j][1])[i] for j in range(g)] for i in range(m)] if g else [[] for _ in range(m)]

    snf = smith_normal_form(Mz, g) if l else None
    diag = [snf.S[i][i] if i < g else 0 for i in range(l)] if snf else []
    R = integer_kernel(Mz, g) if l else [[int(i == j) for i in range(g)] for j in range(g)]
    M0_cols = [matvec(Mq, r) for r in R] if m else []
    M0_span = SubspaceReducer(M0_cols, m)
    s = M0_span.rank

    def ambient(zpart, qpart_quot):
        qv = W.lift(qpart_quot) if v else []
        x = [Fraction(0)] * cycles.dim
        for c, b in zip(zpart, cycles.int_basis):
            if c:
                x = [a + c * bb for a, bb in zip(x, b)]
        for c, b in zip(qv, cycles.rat_basis):
            if c:
                x = [a + c * bb for a, bb in zip(x, b)]
        return x

    free, tors, tors_d = [], [], []
    for i, d in enumerate(diag):
        if d == 1:
            continue
        u = [snf.U_inv[r][i] for r in range(l)]
        if d == 0:
            free.append(ambient(u, [0] * m))
        else:
            lam = solve_integer(Mz, [d * x for x in u], g)
            q = [x / d for x in matvec(Mq, lam)] if m else []
            tors.append(ambient(u, q))
            tors_d.append(d)
    rational = []
    for j in M0_span.free:
        e = [Fraction(int(i == j)) for i in range(m)]
        rational.append(ambient([0] * l, e))
    circle = []
    if s:
        Mi, D = scale_to_integers(columns_to_matrix(M0_cols, m))
        lsnf = smith_normal_form(Mi, len(M0_cols))
        for i in range(s):
            d = lsnf.S[i][i]
            b = [Fraction(lsnf.U_inv[r][i] * d, D) for r in range(m)]
            circle.append(ambient([0] * l, b))
    group = AbelianGroup(
        free_rank=len(free),
        torsion=tors_d,
        rational_rank=m - s,
        circle_rank=s,
        generators={"free": free, "torsion": tors, "rational": rational, "circle": circle},
    )
    return MixedQuotient(cycles, boundaries, group)


def quotient_of_space(dim: int, subgroup: MixedSubgroup) -> AbelianGroup:
    """``Q^dim / subgroup`` as a mixed group."""
    space = MixedBasis(dim, [], [[Fraction(int(i == j)) for i in range(dim)] for j in range(dim)])
    return mixed_quotient(space, subgroup).group


def int_vector(v: Sequence) -> list[int]:
    out = []
    for x in v:
        x = Fraction(x)
        if x.denominator != 1:
            raise ValueError("vector is not integral")
        out.append(int(x))
    return out


def gcd_list(values) -> int:
    g = 0
    for x in values:
        g = gcd(g, int(x))
    return g
