"""Exact integral homology through Smith normal form.

Large boundary matrices are first shrunk by eliminating unit pivots
(reductions and coreductions of the chain complex), keeping the chain maps
and homotopy needed to move cycles and boundary witnesses between the
original complex and the small remainder.  The remainder is diagonalised
with a dense Smith normal form.
"""
from __future__ import annotations

import heapq
import math
import weakref
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .complex import Chain, ComplexError, boundary, is_subcomplex

INFINITE = math.inf


class NotACycleError(ValueError):
    def __init__(self, bd: Chain):
        super().__init__(f"chain is not a cycle; boundary has {len(bd)} nonzero cells")
        self.boundary = bd


class NotPseudomanifoldError(ValueError):
    def __init__(self, cell: int, count: int):
        super().__init__(f"(n-1)-cell {cell} bounds {count} top cells, expected 2")
        self.cell = cell
        self.count = count


# ---------------------------------------------------------------------------
# Integer matrices and Smith normal form


class IntMatrix:
    """Sparse integer matrix."""

    def __init__(self, rows: int, cols: int, entries=None):
        self.rows, self.cols = rows, cols
        self.entries: dict[tuple[int, int], int] = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r}, {c}) outside {rows}x{cols}")
            if v:
                self.entries[(r, c)] = int(v)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]]):
        m = len(rows)
        n = len(rows[0]) if m else 0
        return cls(m, n, {(i, j): v for i, row in enumerate(rows) for j, v in enumerate(row) if v})

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def __eq__(self, other):
        return (isinstance(other, IntMatrix) and (self.rows, self.cols) == (other.rows, other.cols)
                and self.entries == other.entries)

    def __repr__(self):
        return f"IntMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"


def boundary_matrix(X, d: int) -> IntMatrix:
    """Matrix of ∂_d with rows indexed by (d-1)-cells and columns by d-cells."""
    entries: dict = {}
    if d >= 1:
        for j in range(X.num_cells(d)):
            sign = 1
            for f in X.faces(d, j):
                entries[(f, j)] = entries.get((f, j), 0) + sign
                sign = -sign
    return IntMatrix(X.num_cells(d - 1) if d >= 1 else 0, X.num_cells(d), entries)


@dataclass
class SNFResult:
    """``row_transform @ A @ col_transform`` is diagonal with ``diagonal`` leading."""

    diagonal: list[int]
    row_transform: list[list[int]]
    col_transform: list[list[int]]
    row_inverse: list[list[int]]
    col_inverse: list[list[int]]
    shape: tuple[int, int] = (0, 0)

    @property
    def rank(self) -> int:
        return len(self.diagonal)


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(A) -> SNFResult:
    """Smith normal form with unimodular transforms and their inverses.

    Pivots are chosen by smallest absolute value, then fewest nonzeros in
    their row and column, then position.
    """
    M = A.to_dense() if isinstance(A, IntMatrix) else [list(map(int, r)) for r in A]
    m = len(M)
    n = len(M[0]) if m else (A.cols if isinstance(A, IntMatrix) else 0)
    P, Pi = _identity(m), _identity(m)
    Q, Qi = _identity(n), _identity(n)

    # row i += c * row j ; P gets the same op, Pi the inverse column op
    def row_add(i, j, c):
        Mi, Mj = M[i], M[j]
        for k in range(n):
            if Mj[k]:
                Mi[k] += c * Mj[k]
        Pi_, Pj = P[i], P[j]
        for k in range(m):
            if Pj[k]:
                Pi_[k] += c * Pj[k]
        for row in Pi:
            if row[i]:
                row[j] -= c * row[i]

    def row_swap(i, j):
        M[i], M[j] = M[j], M[i]
        P[i], P[j] = P[j], P[i]
        for row in Pi:
            row[i], row[j] = row[j], row[i]

    def row_neg(i):
        M[i] = [-x for x in M[i]]
        P[i] = [-x for x in P[i]]
        for row in Pi:
            row[i] = -row[i]

    # col i += c * col j
    def col_add(i, j, c):
        for row in M:
            if row[j]:
                row[i] += c * row[j]
        for row in Q:
            if row[j]:
                row[i] += c * row[j]
        Qj, Qi_ = Qi[j], Qi[i]
        for k in range(n):
            if Qi_[k]:
                Qj[k] -= c * Qi_[k]

    def col_swap(i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]
        for row in Q:
            row[i], row[j] = row[j], row[i]
        Qi[i], Qi[j] = Qi[j], Qi[i]

    diag = []
    t = 0
    while t < min(m, n):
        best = None
        row_nnz = [sum(1 for x in M[i][t:] if x) for i in range(m)]
        col_nnz = [sum(1 for i in range(t, m) if M[i][j]) for j in range(n)]
        for i in range(t, m):
            row = M[i]
            for j in range(t, n):
                v = row[j]
                if v:
                    key = (abs(v), (row_nnz[i] - 1) * (col_nnz[j] - 1), i, j)
                    if best is None or key < best:
                        best = key
        if best is None:
            break
        _, _, pi, pj = best
        if pi != t:
            row_swap(pi, t)
        if pj != t:
            col_swap(pj, t)
        while True:
            done = True
            p = M[t][t]
            for i in range(t + 1, m):
                if M[i][t]:
                    row_add(i, t, -(M[i][t] // p))
                    if M[i][t]:
                        done = False
            for j in range(t + 1, n):
                if M[t][j]:
                    col_add(j, t, -(M[t][j] // p))
                    if M[t][j]:
                        done = False
            if not done:
                # move the smallest remainder into the pivot position
                cand = [(abs(M[i][t]), i, None) for i in range(t + 1, m) if M[i][t]]
                cand += [(abs(M[t][j]), None, j) for j in range(t + 1, n) if M[t][j]]
                _, ri, cj = min(cand, key=lambda x: (x[0], x[1] if x[1] is not None else -1,
                                                     x[2] if x[2] is not None else -1))
                if ri is not None:
                    row_swap(ri, t)
                else:
                    col_swap(cj, t)
                continue
            p = M[t][t]
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if M[i][j] % p), None)
            if bad is None:
                break
            row_add(t, bad[0], 1)
        if M[t][t] < 0:
            row_neg(t)
        diag.append(M[t][t])
        t += 1
    return SNFResult(diag, P, Q, Pi, Qi, (m, n))


def _matvec(A, v):
    return [sum(a * b for a, b in zip(row, v) if a and b) for row in A]


def _col(A, j):
    return [row[j] for row in A]


def determinantal_divisors(A) -> list[int]:
    """Invariant factors from gcds of k×k minors (slow oracle)."""
    from itertools import combinations
    M = A.to_dense() if isinstance(A, IntMatrix) else [list(r) for r in A]
    m = len(M)
    n = len(M[0]) if m else 0
    out, prev = [], 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for rs in combinations(range(m), k):
            for cs in combinations(range(n), k):
                g = math.gcd(g, _det([[M[r][c] for c in cs] for r in rs]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def _det(M):
    n = len(M)
    M = [[Fraction(x) for x in row] for row in M]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c]), None)
        if p is None:
            return 0
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            if f:
                for k in range(c, n):
                    M[r][k] -= f * M[c][k]
    return int(det)


# ---------------------------------------------------------------------------
# Chain complexes and their reduction


class _ChainComplex:
    """Boundary columns of X, or of the pair (X, A) when ``excluded`` is given."""

    def __init__(self, X, excluded: Sequence[set[int]] | None = None):
        self.X = X
        top = X.dimension
        self.top = top
        self.cells: list[list[int]] = []
        self.local: list[dict[int, int]] = []
        for d in range(top + 1):
            ex = excluded[d] if excluded is not None and d < len(excluded) else ()
            cs = [i for i in range(X.num_cells(d)) if i not in ex]
            self.cells.append(cs)
            self.local.append({c: k for k, c in enumerate(cs)})
        self.cols: dict[int, dict[int, dict[int, int]]] = {}
        for d in range(1, top + 1):
            lower = self.local[d - 1]
            cols = {}
            for k, c in enumerate(self.cells[d]):
                col: dict[int, int] = {}
                sign = 1
                for f in X.faces(d, c):
                    r = lower.get(f)
                    if r is not None:
                        nv = col.get(r, 0) + sign
                        if nv:
                            col[r] = nv
                        else:
                            del col[r]
                    sign = -sign
                cols[k] = col
            self.cols[d] = cols

    def size(self, d):
        return len(self.cells[d]) if 0 <= d <= self.top else 0

    def to_local(self, c: Chain) -> dict[int, int]:
        if c.degree < 0 or c.degree > self.top:
            return {}
        loc = self.local[c.degree]
        return {loc[k]: v for k, v in c.items() if k in loc}

    def to_global(self, d: int, v: dict[int, int]) -> Chain:
        cs = self.cells[d]
        return Chain(d, {cs[k]: x for k, x in v.items()})


def _axpy(y: dict, t: int, x: dict):
    for r, v in x.items():
        nv = y.get(r, 0) + t * v
        if nv:
            y[r] = nv
        else:
            y.pop(r, None)


class _Reduction:
    """Unit-pivot elimination with recorded transport data."""

    def __init__(self, cc: _ChainComplex):
        self.top = cc.top
        self.cols = {d: {k: dict(v) for k, v in cols.items()} for d, cols in cc.cols.items()}
        self.rows: dict[int, dict[int, dict[int, int]]] = {}
        for d, cols in self.cols.items():
            rows: dict[int, dict[int, int]] = {r: {} for r in range(cc.size(d - 1))}
            for c, col in cols.items():
                for r, v in col.items():
                    rows[r][c] = v
            self.rows[d] = rows
        self.alive = [set(range(cc.size(d))) for d in range(cc.top + 1)]
        self.steps: list[tuple] = []
        self._run()

    def _eliminate(self, d, a, b):
        cols, rows = self.cols[d], self.rows[d]
        colb = cols[b]
        u = colb[a]
        rowa_snap = {x: t for x, t in rows[a].items() if x != b}
        colb_snap = {r: v for r, v in colb.items() if r != a}
        touched_rows = set(colb)
        for x, t in rowa_snap.items():
            colx = cols[x]
            f = t * u
            for r, v in colb.items():
                nv = colx.get(r, 0) - f * v
                if nv:
                    colx[r] = nv
                    rows[r][x] = nv
                else:
                    colx.pop(r, None)
                    rows[r].pop(x, None)
        for r in colb:
            rows[r].pop(b, None)
        del cols[b]
        del rows[a]
        if d + 1 in self.rows:
            up_cols = self.cols[d + 1]
            for y in self.rows[d + 1].pop(b, {}):
                up_cols[y].pop(b, None)
                self._dirty.append((d + 1, "c", y))
        if d - 1 >= 1:
            for r in self.cols[d - 1].pop(a, {}):
                self.rows[d - 1][r].pop(a, None)
                self._dirty.append((d - 1, "r", r))
        self.alive[d].discard(b)
        self.alive[d - 1].discard(a)
        self.steps.append((d, a, b, u, colb_snap, rowa_snap))
        for r in touched_rows:
            if r != a:
                self._dirty.append((d, "r", r))
        for x in rowa_snap:
            self._dirty.append((d, "c", x))

    def _cheap(self, d, kind, i):
        if kind == "r":
            row = self.rows[d].get(i)
            if row is not None and len(row) == 1:
                (c, v), = row.items()
                if v in (1, -1):
                    return (d, i, c)
        else:
            col = self.cols[d].get(i)
            if col is not None and len(col) == 1:
                (r, v), = col.items()
                if v in (1, -1):
                    return (d, r, i)
        return None

    def _next_pivot(self):
        """Unit entry in the shortest live column, found through a lazy heap."""
        heap = self._heap
        while heap:
            n, d, c = heapq.heappop(heap)
            col = self.cols[d].get(c)
            if col is None:
                continue
            if len(col) != n:
                heapq.heappush(heap, (len(col), d, c))
                continue
            rows = self.rows[d]
            best = None
            for r, v in col.items():
                if v in (1, -1):
                    key = (len(rows[r]), r)
                    if best is None or key < best:
                        best = key
            if best is not None:
                return (d, best[1], c)
        return None

    def _run(self):
        self._dirty = deque()
        self._heap = []
        for d in sorted(self.cols):
            for r in sorted(self.rows[d]):
                self._dirty.append((d, "r", r))
            for c in sorted(self.cols[d]):
                self._dirty.append((d, "c", c))
        while True:
            while self._dirty:
                d, kind, i = self._dirty.popleft()
                pick = self._cheap(d, kind, i)
                if pick is not None:
                    self._eliminate(*pick)
                elif kind == "c" and i in self.cols[d]:
                    heapq.heappush(self._heap, (len(self.cols[d][i]), d, i))
            pick = self._next_pivot()
            if pick is None:
                break
            self._eliminate(*pick)
        del self._heap, self._dirty
        self.remaining = [sorted(s) for s in self.alive]

    # -- transport ------------------------------------------------------------
    def forward(self, e: int, y: dict) -> dict:
        y = dict(y)
        for d, a, b, u, colb, _ in self.steps:
            if d - 1 == e:
                t = y.pop(a, 0)
                if t:
                    _axpy(y, -t * u, colb)
            elif d == e:
                y.pop(b, None)
        return y

    def backward(self, e: int, x: dict) -> dict:
        x = dict(x)
        for d, a, b, u, _, rowa in reversed(self.steps):
            if d == e:
                s = sum(x[c] * t for c, t in rowa.items() if c in x)
                if s:
                    nv = x.get(b, 0) - s * u
                    if nv:
                        x[b] = nv
                    else:
                        x.pop(b, None)
        return x

    def solve(self, e: int, c: dict, final_solver):
        """Find w of degree e+1 with ∂w = c, given a solver on the remainder."""
        y = dict(c)
        hs = []
        for idx, (d, a, b, u, colb, _) in enumerate(self.steps):
            if d - 1 == e:
                t = y.pop(a, 0)
                if t:
                    _axpy(y, -t * u, colb)
                    if d == e + 1:
                        hs.append((idx, t))
            elif d == e:
                y.pop(b, None)
        w = final_solver(y)
        if w is None:
            return None
        hmap = dict(hs)
        for idx in range(len(self.steps) - 1, -1, -1):
            d, a, b, u, _, rowa = self.steps[idx]
            if d == e + 1:
                s = sum(w[cc] * t for cc, t in rowa.items() if cc in w)
                add = -s * u + hmap.get(idx, 0) * u
                if add:
                    nv = w.get(b, 0) + add
                    if nv:
                        w[b] = nv
                    else:
                        w.pop(b, None)
        return w


# ---------------------------------------------------------------------------
# Homology groups


@dataclass
class HomologyGroup:
    degree: int
    rank: int
    torsion: list[int]
    generators: list[Chain] = field(default_factory=list, repr=False)
    coefficients: str = "Z"
    _engine: object = field(default=None, repr=False, compare=False)

    def summary(self) -> str:
        if self.coefficients != "Z":
            return f"{self.coefficients}^{self.rank}" if self.rank else "0"
        parts = ["Z" if self.rank == 1 else f"Z^{self.rank}"] if self.rank else []
        parts += [f"Z_{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"

    def coordinates(self, z: Chain):
        return class_coordinates(z, self)

    def order(self, z: Chain):
        return order_of_class(z, self)


class _Degree:
    """SNF data for one degree of the reduced complex."""

    def __init__(self, red: _Reduction, d: int):
        self.d = d
        self.cells = red.remaining[d] if 0 <= d <= red.top else []
        below = red.remaining[d - 1] if 1 <= d <= red.top else []
        above = red.remaining[d + 1] if d + 1 <= red.top else []
        pos = {c: i for i, c in enumerate(self.cells)}
        self.pos = pos
        n = len(self.cells)
        bpos = {c: i for i, c in enumerate(below)}
        A = [[0] * n for _ in below]
        if d >= 1:
            for j, c in enumerate(self.cells):
                for r, v in red.cols[d][c].items():
                    A[bpos[r]][j] = v
        B = [[0] * len(above) for _ in range(n)]
        for j, c in enumerate(above):
            for r, v in red.cols[d + 1][c].items():
                B[pos[r]][j] = v
        self.B = B
        s1 = smith_normal_form(IntMatrix.from_dense(A) if below else IntMatrix(0, n))
        self.r1 = s1.rank
        self.Q1, self.Q1i = s1.col_transform, s1.col_inverse
        m = n - self.r1
        QB = [_matvec(self.Q1i, _col(B, j)) for j in range(len(above))]
        Bp = [[QB[j][self.r1 + i] for j in range(len(above))] for i in range(m)]
        s2 = smith_normal_form(IntMatrix.from_dense(Bp) if m else IntMatrix(0, len(above)))
        self.m = m
        self.diag = s2.diagonal
        self.P2, self.P2i = s2.row_transform, s2.row_inverse
        self.s_full = smith_normal_form(IntMatrix.from_dense(B) if n else IntMatrix(0, len(above)))

    @property
    def torsion_idx(self):
        return [i for i, x in enumerate(self.diag) if x > 1]

    @property
    def free_idx(self):
        return list(range(len(self.diag), self.m))

    def coords(self, z: dict):
        vec = [0] * len(self.cells)
        for c, v in z.items():
            vec[self.pos[c]] = v
        y = _matvec(self.Q1i, vec)[self.r1:]
        c = _matvec(self.P2, y) if self.m else []
        free = tuple(c[i] for i in self.free_idx)
        tors = tuple(c[i] % self.diag[i] for i in self.torsion_idx)
        return free, tors

    def generator(self, i: int) -> dict:
        coeffs = [row[i] for row in self.P2i]
        vec = [0] * len(self.cells)
        for k, a in enumerate(coeffs):
            if a:
                for r in range(len(self.cells)):
                    q = self.Q1[r][self.r1 + k]
                    if q:
                        vec[r] += a * q
        return {self.cells[r]: v for r, v in enumerate(vec) if v}

    def solve(self, c: dict):
        """w (reduced (d+1)-chain) with B w = c, or None."""
        s = self.s_full
        vec = [0] * len(self.cells)
        for k, v in c.items():
            vec[self.pos[k]] = v
        pc = _matvec(s.row_transform, vec)
        y = [0] * s.shape[1]
        for i, x in enumerate(pc):
            if i < s.rank:
                if x % s.diagonal[i]:
                    return None
                y[i] = x // s.diagonal[i]
            elif x:
                return None
        w = _matvec(s.col_transform, y)
        return w


class _Engine:
    def __init__(self, X, excluded=None):
        self.X = X
        self.excluded = excluded
        self.cc = _ChainComplex(X, excluded)
        self.red = _Reduction(self.cc)
        self._deg: dict[int, _Degree] = {}
        self._groups: dict[int, HomologyGroup] = {}

    def degree(self, d) -> _Degree:
        if d not in self._deg:
            self._deg[d] = _Degree(self.red, d)
        return self._deg[d]

    def group(self, d) -> HomologyGroup:
        if d not in self._groups:
            D = self.degree(d)
            gens = []
            for i in D.free_idx + D.torsion_idx:
                loc = self.red.backward(d, D.generator(i))
                gens.append(self.cc.to_global(d, loc))
            tors = [D.diag[i] for i in D.torsion_idx]
            self._groups[d] = HomologyGroup(d, len(D.free_idx), tors, gens, "Z", self)
        return self._groups[d]

    def relative_boundary(self, c: Chain) -> Chain:
        loc = self.cc.to_local(c)
        d = c.degree
        out: dict[int, int] = {}
        if d >= 1:
            for k, v in loc.items():
                _axpy(out, v, self.cc.cols[d][k])
        return self.cc.to_global(d - 1, out) if d >= 1 else Chain(d - 1)

    def coords(self, z: Chain):
        bd = self.relative_boundary(z)
        if bd:
            raise NotACycleError(bd)
        d = z.degree
        y = self.red.forward(d, self.cc.to_local(z))
        return self.degree(d).coords(y)

    def solve(self, c: Chain):
        if self.relative_boundary(c):
            return None
        e = c.degree
        if e + 1 > self.cc.top:
            return None if self.cc.to_local(c) else Chain(e + 1)
        D = self.degree(e)
        above = self.red.remaining[e + 1]

        def final(y):
            w = D.solve(y)
            if w is None:
                return None
            return {above[j]: v for j, v in enumerate(w) if v}

        w = self.red.solve(e, self.cc.to_local(c), final)
        return None if w is None else self.cc.to_global(e + 1, w)


_ENGINES: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


def _engine(X, excluded=None) -> _Engine:
    key = None if excluded is None else tuple(frozenset(s) for s in excluded)
    per = _ENGINES.setdefault(X, {})
    if key not in per:
        per[key] = _Engine(X, excluded)
    return per[key]


def homology(X, d: int, coefficients="Z") -> HomologyGroup:
    """H_d(X) with coefficients ``"Z"``, ``"Q"`` or a prime ``p`` (int)."""
    if not 0 <= d <= X.dimension:
        raise ValueError(f"degree {d} out of range 0..{X.dimension}")
    if coefficients == "Z":
        return _engine(X).group(d)
    return _field_homology(X, d, coefficients)


def homology_all(X, coefficients="Z") -> list[HomologyGroup]:
    return [homology(X, d, coefficients) for d in range(X.dimension + 1)]


def relative_homology(X, A: Sequence[set[int]], d: int) -> HomologyGroup:
    """H_d(X, A) for a subcomplex A given as one set of cell indices per dimension."""
    if not is_subcomplex(X, A):
        raise ComplexError("A is not a subcomplex")
    if not 0 <= d <= X.dimension:
        raise ValueError(f"degree {d} out of range 0..{X.dimension}")
    return _engine(X, list(A)).group(d)


def class_coordinates(z: Chain, H: HomologyGroup):
    """(free coordinates, torsion coordinates) of the class of ``z`` in ``H``."""
    if H._engine is None:
        raise ValueError("class coordinates are only available for integral homology")
    if z.degree != H.degree:
        raise ValueError("degree mismatch")
    return H._engine.coords(z)


def order_of_class(z: Chain, H: HomologyGroup):
    """Smallest m >= 1 with m·z a boundary, or ``INFINITE``."""
    free, tors = class_coordinates(z, H)
    if any(free):
        return INFINITE
    D = H._engine.degree(H.degree)
    order = 1
    for c, t in zip(tors, (D.diag[i] for i in D.torsion_idx)):
        order = math.lcm(order, t // math.gcd(t, c))
    return order


def solve_boundary(X, c: Chain, A: Sequence[set[int]] | None = None) -> Chain | None:
    """A chain w with ∂w = c (relative to A if given), or None if there is none."""
    w = _engine(X, None if A is None else list(A)).solve(c)
    if w is not None and A is None:
        assert boundary(X, w) == c
    return w


def connecting_delta(X, A: Sequence[set[int]], z: Chain) -> Chain:
    """δ of a relative cycle: its boundary, which must lie in A."""
    bd = boundary(X, z)
    sub = A[bd.degree] if 0 <= bd.degree < len(A) else set()
    outside = [c for c in bd if c not in sub]
    if outside:
        raise NotACycleError(Chain(bd.degree, {c: bd[c] for c in outside}))
    return bd


# ---------------------------------------------------------------------------
# Field coefficients (independent rank computations)


def _rank_mod_p(X, d: int, p: int) -> int:
    if d < 1 or d > X.dimension:
        return 0
    pivots: dict[int, dict[int, int]] = {}
    rank = 0
    for j in range(X.num_cells(d)):
        col: dict[int, int] = {}
        sign = 1
        for f in X.faces(d, j):
            col[f] = (col.get(f, 0) + sign) % p
            sign = -sign
        col = {k: v for k, v in col.items() if v}
        while col:
            lead = max(col)
            piv = pivots.get(lead)
            if piv is None:
                inv = pow(col[lead], -1, p)
                pivots[lead] = {k: v * inv % p for k, v in col.items()}
                rank += 1
                break
            f = col[lead]
            for k, v in piv.items():
                nv = (col.get(k, 0) - f * v) % p
                if nv:
                    col[k] = nv
                else:
                    col.pop(k, None)
    return rank


def _rank_rational(X, d: int) -> int:
    if d < 1 or d > X.dimension:
        return 0
    pivots: dict[int, dict[int, Fraction]] = {}
    rank = 0
    for j in range(X.num_cells(d)):
        col: dict[int, Fraction] = {}
        sign = 1
        for f in X.faces(d, j):
            col[f] = col.get(f, 0) + sign
            sign = -sign
        col = {k: Fraction(v) for k, v in col.items() if v}
        while col:
            lead = max(col)
            piv = pivots.get(lead)
            if piv is None:
                pivots[lead] = {k: v / col[lead] for k, v in col.items()}
                rank += 1
                break
            f = col[lead]
            for k, v in piv.items():
                nv = col.get(k, 0) - f * v
                if nv:
                    col[k] = nv
                else:
                    col.pop(k, None)
    return rank


def _field_homology(X, d: int, coefficients) -> HomologyGroup:
    if coefficients == "Q":
        rk = _rank_rational
        label = "Q"
        rank = X.num_cells(d) - rk(X, d) - rk(X, d + 1)
    else:
        p = int(coefficients)
        if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        label = f"Z_{p}"
        rank = X.num_cells(d) - _rank_mod_p(X, d, p) - _rank_mod_p(X, d + 1, p)
    return HomologyGroup(d, rank, [], [], label)


# ---------------------------------------------------------------------------
# Orientation


def fundamental_cycle(X, n: int | None = None) -> Chain | None:
    """±1 top-degree cycle of a closed pseudomanifold, or None if non-orientable."""
    n = X.dimension if n is None else n
    inc: dict[int, list[tuple[int, int]]] = {}
    for t in range(X.num_cells(n)):
        sign = 1
        for f in X.faces(n, t):
            inc.setdefault(f, []).append((t, sign))
            sign = -sign
    for f in range(X.num_cells(n - 1)):
        cnt = len(inc.get(f, ()))
        if cnt != 2:
            raise NotPseudomanifoldError(f, cnt)
    adj: dict[int, list[tuple[int, int, int]]] = {}
    for f, ((s, es), (t, et)) in sorted(inc.items()):
        adj.setdefault(s, []).append((t, es, et))
        if s != t:
            adj.setdefault(t, []).append((s, et, es))
        elif es + et != 0:
            return None
    orient: dict[int, int] = {}
    for start in range(X.num_cells(n)):
        if start in orient:
            continue
        orient[start] = 1
        queue = deque([start])
        while queue:
            s = queue.popleft()
            for t, es, et in adj.get(s, ()):
                if s == t:
                    continue
                want = -orient[s] * es * et
                if t in orient:
                    if orient[t] != want:
                        return None
                else:
                    orient[t] = want
                    queue.append(t)
    return Chain(n, orient)
