"""Exact integer linear algebra: Smith normal form, linear systems, reduced homology.

Matrices are dense lists of lists of Python ints.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .errors import DimensionMismatch, SizeGuardError
from .ring import RingSpec, Z
from .simplicial import SimplicialComplex, alt_subcomplex, join_complex


def identity(n: int) -> list:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(A: list, B: list) -> list:
    if not A or not B:
        return [[] for _ in A]
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: list, x: list) -> list:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def shape(A: list, cols: int | None = None) -> tuple[int, int]:
    return len(A), (len(A[0]) if A else (cols or 0))


def det(A: list) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign, prev = 1, 1
    for i in range(n - 1):
        if M[i][i] == 0:
            for r in range(i + 1, n):
                if M[r][i] != 0:
                    M[i], M[r] = M[r], M[i]
                    sign = -sign
                    break
            else:
                return 0
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                M[r][c] = (M[r][c] * M[i][i] - M[r][i] * M[i][c]) // prev
        prev = M[i][i]
    return sign * M[n - 1][n - 1]


@dataclass
class SmithDecomposition:
    """``U * A * V == S`` with U, V unimodular and S diagonal with d_1 | d_2 | ..."""

    U: list | None
    S: list
    V: list | None
    diagonal: list = field(default_factory=list)

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def smith_normal_form(A: list, transforms: bool = True, cols: int | None = None) -> SmithDecomposition:
    """Smith normal form by repeated minimal-pivot elimination.

    ``cols`` gives the column count when A has no rows.  With
    ``transforms=False`` only S and its diagonal are computed.
    """
    m, n = shape(A, cols)
    S = [list(r) for r in A]
    U = identity(m) if transforms else None
    V = identity(n) if transforms else None

    def row_op(dst, src, q):  # row_dst -= q * row_src
        rs, rd = S[src], S[dst]
        for j in range(n):
            if rs[j]:
                rd[j] -= q * rs[j]
        if U is not None:
            us, ud = U[src], U[dst]
            for j in range(m):
                if us[j]:
                    ud[j] -= q * us[j]

    def col_op(dst, src, q):  # col_dst -= q * col_src
        for row in S:
            if row[src]:
                row[dst] -= q * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] -= q * row[src]

    def swap_rows(i, j):
        if i != j:
            S[i], S[j] = S[j], S[i]
            if U is not None:
                U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        if i != j:
            for row in S:
                row[i], row[j] = row[j], row[i]
            if V is not None:
                for row in V:
                    row[i], row[j] = row[j], row[i]

    diag = []
    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            row = S[i]
            for j in range(t, n):
                a = row[j]
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = S[t][t]
            dirty = False
            for i in range(t + 1, m):
                if S[i][t]:
                    row_op(i, t, S[i][t] // p)
                    if S[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if S[t][j]:
                    col_op(j, t, S[t][j] // p)
                    if S[t][j]:
                        dirty = True
            if dirty:
                # a smaller remainder survived: move it to the pivot and repeat
                best = None
                for i in range(t + 1, m):
                    if S[i][t] and (best is None or abs(S[i][t]) < best[0]):
                        best = (abs(S[i][t]), i, t)
                for j in range(t + 1, n):
                    if S[t][j] and (best is None or abs(S[t][j]) < best[0]):
                        best = (abs(S[t][j]), t, j)
                swap_rows(t, best[1])
                swap_cols(t, best[2])
                continue
            bad = None
            for i in range(t + 1, m):
                row = S[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_op(t, bad, -1)
        if S[t][t] < 0:
            S[t] = [-a for a in S[t]]
            if U is not None:
                U[t] = [-a for a in U[t]]
        diag.append(S[t][t])
    diag.extend([0] * (min(m, n) - len(diag)))
    return SmithDecomposition(U, S, V, diag)


def solve_linear(A: list, b: list, ring: RingSpec = Z, cols: int | None = None) -> list | None:
    """One solution of ``A x = b`` over Z or Z/m, or None if there is none."""
    m, n = shape(A, cols)
    if len(b) != m:
        raise DimensionMismatch(f"rhs has length {len(b)}, matrix has {m} rows")
    snf = smith_normal_form(A, cols=n)
    c = matvec(snf.U, b) if m else []
    y = [0] * n
    mod = ring.modulus
    for i in range(m):
        d = snf.diagonal[i] if i < len(snf.diagonal) else 0
        if mod is None:
            if d == 0:
                if c[i] != 0:
                    return None
            elif c[i] % d:
                return None
            else:
                y[i] = c[i] // d
        else:
            g = gcd(d, mod)
            if c[i] % g:
                return None
            if d % mod:
                mg = mod // g
                y[i] = (c[i] // g) * pow(d // g, -1, mg) % mg if mg > 1 else 0
    x = matvec(snf.V, y) if n else []
    if mod is not None:
        x = [v % mod for v in x]
    check = matvec(A, x)
    assert all(ring.reduce(u - v) == 0 for u, v in zip(check, b)), "solver produced a non-solution"
    return x


def boundary_matrix(X: SimplicialComplex, r: int) -> list:
    """Matrix of d_r: C_r -> C_{r-1}; for r = 0 the augmentation row."""
    cols = X.faces(r)
    if r == 0:
        return [[1] * len(cols)]
    rows = X.face_index(r - 1)
    D = [[0] * len(cols) for _ in range(len(rows))]
    for j, s in enumerate(cols):
        for i in range(len(s)):
            D[rows[s[:i] + s[i + 1 :]]][j] = -1 if i % 2 else 1
    return D


def _boundary_squares_vanish(X: SimplicialComplex, r: int) -> bool:
    """Sparse check that d_{r-1} d_r = 0 (including the augmentation)."""
    for s in X.faces(r):
        acc: dict = {}
        for i in range(len(s)):
            face = s[:i] + s[i + 1 :]
            sign = -1 if i % 2 else 1
            if r == 1:
                acc[()] = acc.get((), 0) + sign
                continue
            for j in range(len(face)):
                ff = face[:j] + face[j + 1 :]
                acc[ff] = acc.get(ff, 0) + sign * (-1 if j % 2 else 1)
        if any(acc.values()):
            return False
    return True


@dataclass(frozen=True)
class HomologyGroup:
    """``rank`` free summands of R plus cyclic torsion summands.

    Over Z/m the free summands are copies of Z/m and ``torsion`` holds the
    remaining invariant factors (proper divisors of m).
    """

    rank: int
    torsion: tuple = ()

    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    def __str__(self):
        parts = [f"R^{self.rank}"] if self.rank else []
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) or "0"

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}


def invariant_factors(orders: list) -> list:
    """Invariant factors (> 1) of a direct sum of cyclic groups of the given orders."""
    orders = [o for o in orders if o != 1]
    if not orders:
        return []
    D = [[o if i == j else 0 for j in range(len(orders))] for i, o in enumerate(orders)]
    return [d for d in smith_normal_form(D, transforms=False).diagonal if d != 1]


def reduced_homology(X: SimplicialComplex, ring: RingSpec = Z) -> list:
    """Reduced homology groups in degrees 0..dim X."""
    top = X.dim
    for r in range(1, top + 1):
        if not _boundary_squares_vanish(X, r):
            raise AssertionError(f"boundary matrices do not compose to zero in degree {r}")
    ranks, tors = [], []
    for r in range(top + 2):
        if r > top:
            ranks.append(0)
            tors.append([])
            continue
        D = boundary_matrix(X, r)
        diag = smith_normal_form(D, transforms=False, cols=len(X.faces(r))).diagonal
        ranks.append(sum(1 for d in diag if d))
        tors.append([abs(d) for d in diag if abs(d) > 1])
    out = []
    for r in range(top + 1):
        betti = len(X.faces(r)) - ranks[r] - ranks[r + 1]
        torsion = tors[r + 1]
        if ring.modulus is None:
            out.append(HomologyGroup(betti, tuple(sorted(torsion))))
            continue
        mod = ring.modulus
        below = tors[r] if r > 0 else []
        orders = [mod] * betti + [gcd(t, mod) for t in torsion] + [gcd(t, mod) for t in below]
        factors = invariant_factors(orders)
        out.append(HomologyGroup(factors.count(mod), tuple(f for f in factors if f != mod)))
    return out


def homology_vanishes_through(X: SimplicialComplex, r: int, ring: RingSpec = Z) -> bool:
    H = reduced_homology(X, ring)
    return all(H[i].is_zero() for i in range(min(r, X.dim) + 1))


def homology_retract_check(k: int, m: int, d: int, cap: int = 10**5) -> dict:
    """Compare reduced homology of the alt<=d subcomplex of (Z_k)^{*m} with (Z_k)^{*(d+1)}."""
    if k**m > cap:
        raise SizeGuardError(f"{k}^{m} facets exceed the cap {cap}")
    A = alt_subcomplex(k, m, d)
    B, _ = join_complex(k, d + 1)
    HA, HB = reduced_homology(A), reduced_homology(B)
    width = max(len(HA), len(HB))
    pad = lambda H: H + [HomologyGroup(0)] * (width - len(H))
    HA, HB = pad(HA), pad(HB)
    return {
        "k": k,
        "m": m,
        "d": d,
        "alt": [h.to_json() for h in HA],
        "join": [h.to_json() for h in HB],
        "match": HA == HB,
    }
