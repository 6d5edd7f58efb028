"""Delta-complexes, integer chains, cell maps and the constructions on them.

A d-cell is stored as the ordered tuple of its d+1 codimension-one faces.
Face ``i`` omits vertex ``i`` and enters the boundary with sign ``(-1)**i``.
"""
from __future__ import annotations

from itertools import combinations
from typing import Iterable, Mapping, Sequence


class ComplexError(ValueError):
    """Invalid complex, identification or cell map."""


class DeltaComplex:
    """Finite Delta-complex.

    Parameters
    ----------
    n_vertices : int
        Number of 0-cells.
    faces : sequence
        ``faces[d - 1]`` lists the d-cells, each as a tuple of d+1 face indices.
    provenance : list of (int, int), optional
        For a barycentric subdivision, the (dimension, index) of the cell whose
        barycenter each vertex is.
    labels : list, optional
        Free-form vertex annotations.
    """

    def __init__(self, n_vertices: int, faces: Sequence[Sequence[Sequence[int]]] = (),
                 *, provenance=None, labels=None, check: bool = True):
        cells = [tuple(tuple(int(x) for x in f) for f in level) for level in faces]
        while cells and not cells[-1]:
            cells.pop()
        self._faces = [()] + cells
        self._counts = [int(n_vertices)] + [len(level) for level in cells]
        self.provenance = list(provenance) if provenance is not None else None
        self.labels = list(labels) if labels is not None else None
        self._vertex_cache: dict[int, list[tuple[int, ...]]] = {}
        self._lookup: dict | None = None
        if check:
            self.validate()

    # -- basic access -------------------------------------------------------
    @property
    def dimension(self) -> int:
        return len(self._counts) - 1 if self._counts[0] else -1

    def num_cells(self, d: int) -> int:
        if 0 <= d < len(self._counts):
            return self._counts[d]
        return 0

    def faces(self, d: int, i: int) -> tuple[int, ...]:
        return self._faces[d][i]

    def cell_faces(self, d: int) -> tuple[tuple[int, ...], ...]:
        return self._faces[d] if 1 <= d < len(self._faces) else ()

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(self.num_cells(d) for d in range(self.dimension + 1))

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * n for d, n in enumerate(self.f_vector))

    def vertices(self, d: int, i: int) -> tuple[int, ...]:
        """Ordered vertex tuple of a cell (entries may repeat in a Delta-complex)."""
        return self._vertex_table(d)[i]

    def _vertex_table(self, d: int) -> list[tuple[int, ...]]:
        table = self._vertex_cache.get(d)
        if table is None:
            if d == 0:
                table = [(v,) for v in range(self._counts[0])]
            else:
                lower = self._vertex_table(d - 1)
                table = [lower[f[d]] + (lower[f[0]][-1],) for f in self._faces[d]]
            self._vertex_cache[d] = table
        return table

    def find_cell(self, vertex_tuple: Sequence[int]) -> int | None:
        """Index of the cell with exactly this ordered vertex tuple, if unique."""
        if self._lookup is None:
            lookup = {}
            for d in range(self.dimension + 1):
                for i, vt in enumerate(self._vertex_table(d)):
                    lookup[vt] = None if vt in lookup else i
            self._lookup = lookup
        return self._lookup.get(tuple(vertex_tuple))

    # -- checks -------------------------------------------------------------
    def validate(self) -> None:
        for d in range(1, len(self._counts)):
            below = self._counts[d - 1]
            for i, f in enumerate(self._faces[d]):
                if len(f) != d + 1:
                    raise ComplexError(f"{d}-cell {i} has {len(f)} faces, expected {d + 1}")
                if any(not 0 <= x < below for x in f):
                    raise ComplexError(f"{d}-cell {i} has a face index out of range")
                if d >= 2:
                    lower = self._faces[d - 1]
                    for b in range(d + 1):
                        for a in range(b):
                            # face_a(face_b) == face_{b-1}(face_a)
                            if lower[f[b]][a] != lower[f[a]][b - 1]:
                                raise ComplexError(
                                    f"{d}-cell {i}: faces {a} and {b} do not agree on a common face")

    def is_simplicial(self) -> bool:
        for d in range(self.dimension + 1):
            seen = set()
            for vt in self._vertex_table(d):
                key = frozenset(vt)
                if len(key) != len(vt) or key in seen:
                    return False
                seen.add(key)
        return True

    def __repr__(self):
        return f"DeltaComplex(f_vector={self.f_vector})"

    def __eq__(self, other):
        if not isinstance(other, DeltaComplex):
            return NotImplemented
        return self._counts == other._counts and self._faces == other._faces

    __hash__ = object.__hash__


def from_simplices(simplices: Iterable[Sequence], *, check: bool = True) -> DeltaComplex:
    """Simplicial complex generated by the given simplices (closed under faces).

    Vertex labels may be any sortable values; they are ordered by value and
    kept in ``labels``.
    """
    closure = set()
    for s in simplices:
        s = tuple(sorted(set(s)))
        for r in range(1, len(s) + 1):
            closure.update(combinations(s, r))
    verts = sorted({s[0] for s in closure if len(s) == 1})
    by_dim: dict[int, list] = {}
    for s in closure:
        by_dim.setdefault(len(s) - 1, []).append(s)
    index = {}
    faces = []
    for v_i, v in enumerate(verts):
        index[(v,)] = v_i
    for d in range(1, max(by_dim, default=0) + 1):
        level = sorted(by_dim[d])
        for i, s in enumerate(level):
            index[s] = i
        faces.append([tuple(index[s[:j] + s[j + 1:]] for j in range(d + 1)) for s in level])
    return DeltaComplex(len(verts), faces, labels=verts, check=check)


# ---------------------------------------------------------------------------
# Chains


class Chain:
    """Finitely supported integer chain of a fixed degree."""

    __slots__ = ("degree", "_c")

    def __init__(self, degree: int, coeffs: Mapping[int, int] | Iterable = ()):
        self.degree = degree
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c: dict[int, int] = {}
        for cell, v in items:
            v = c.get(cell, 0) + int(v)
            if v:
                c[cell] = v
            else:
                c.pop(cell, None)
        self._c = c

    @classmethod
    def _raw(cls, degree: int, c: dict) -> "Chain":
        out = object.__new__(cls)
        out.degree = degree
        out._c = c
        return out

    def __getitem__(self, cell: int) -> int:
        return self._c.get(cell, 0)

    def items(self):
        return self._c.items()

    def support(self) -> list[int]:
        return sorted(self._c)

    def as_dict(self) -> dict[int, int]:
        return dict(self._c)

    def __len__(self):
        return len(self._c)

    def __bool__(self):
        return bool(self._c)

    def __iter__(self):
        return iter(self._c)

    def _check(self, other: "Chain"):
        if other.degree != self.degree:
            raise ComplexError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other: "Chain") -> "Chain":
        self._check(other)
        c = dict(self._c)
        for k, v in other._c.items():
            nv = c.get(k, 0) + v
            if nv:
                c[k] = nv
            else:
                del c[k]
        return Chain._raw(self.degree, c)

    def __neg__(self) -> "Chain":
        return Chain._raw(self.degree, {k: -v for k, v in self._c.items()})

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __mul__(self, m: int) -> "Chain":
        m = int(m)
        if not m:
            return Chain._raw(self.degree, {})
        return Chain._raw(self.degree, {k: v * m for k, v in self._c.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        return self.degree == other.degree and self._c == other._c

    def __hash__(self):
        return hash((self.degree, frozenset(self._c.items())))

    def __repr__(self):
        body = ", ".join(f"{k}: {v}" for k, v in sorted(self._c.items()))
        return f"Chain({self.degree}, {{{body}}})"


def boundary(X, c: Chain) -> Chain:
    """Boundary of ``c`` on any carrier exposing ``faces(d, i)``."""
    d = c.degree
    out: dict[int, int] = {}
    if d <= 0:
        return Chain._raw(d - 1, out)
    for cell, v in c.items():
        sign = v
        for f in X.faces(d, cell):
            nv = out.get(f, 0) + sign
            if nv:
                out[f] = nv
            else:
                del out[f]
            sign = -sign
    return Chain._raw(d - 1, out)


def check_chain(X, c: Chain) -> None:
    n = X.num_cells(c.degree)
    for cell in c:
        if not 0 <= cell < n:
            raise ComplexError(f"chain references missing {c.degree}-cell {cell}")


# ---------------------------------------------------------------------------
# Cell maps


class CellMap:
    """Dimension-preserving, face-compatible map between Delta-complexes."""

    def __init__(self, source, target, images: Sequence[Sequence[int]], *, check: bool = True):
        self.source = source
        self.target = target
        self.images = [list(level) for level in images]
        if check:
            self.validate()

    def __call__(self, d: int, i: int) -> int:
        return self.images[d][i]

    def validate(self) -> None:
        S, T = self.source, self.target
        for d in range(S.dimension + 1):
            img = self.images[d]
            if len(img) != S.num_cells(d):
                raise ComplexError(f"cell map is not total in dimension {d}")
            nt = T.num_cells(d)
            for i, j in enumerate(img):
                if not 0 <= j < nt:
                    raise ComplexError(f"image of {d}-cell {i} out of range")
                if d and tuple(self.images[d - 1][f] for f in S.faces(d, i)) != tuple(T.faces(d, j)):
                    raise ComplexError(f"cell map is not face-compatible at {d}-cell {i}")

    def pushforward(self, c: Chain) -> Chain:
        img = self.images[c.degree]
        out: dict[int, int] = {}
        for cell, v in c.items():
            j = img[cell]
            nv = out.get(j, 0) + v
            if nv:
                out[j] = nv
            else:
                del out[j]
        return Chain._raw(c.degree, out)

    def compose(self, first: "CellMap") -> "CellMap":
        """``self ∘ first``."""
        images = [[self.images[d][j] for j in first.images[d]] for d in range(len(first.images))]
        return CellMap(first.source, self.target, images, check=False)

    def is_injective(self) -> bool:
        return all(len(set(level)) == len(level) for level in self.images)


def identity_map(X: DeltaComplex) -> CellMap:
    return CellMap(X, X, [list(range(X.num_cells(d))) for d in range(X.dimension + 1)], check=False)


# ---------------------------------------------------------------------------
# Builders


def simplex(n: int) -> DeltaComplex:
    """The full n-simplex on vertices 0..n."""
    return from_simplices([tuple(range(n + 1))])


def simplex_boundary(n: int) -> DeltaComplex:
    """Boundary of the n-simplex, a triangulated (n-1)-sphere."""
    if n < 1:
        raise ComplexError("simplex_boundary needs n >= 1")
    return from_simplices(combinations(range(n + 1), n))


def cycle_graph(m: int) -> DeltaComplex:
    """Simplicial m-cycle with sorted edges."""
    if m < 3:
        raise ComplexError("cycle_graph needs m >= 3")
    return from_simplices([(i, (i + 1) % m) for i in range(m)])


def oriented_cycle(m: int) -> DeltaComplex:
    """m-cycle as a Delta-complex with edge i running from vertex i to i+1 (mod m)."""
    if m < 1:
        raise ComplexError("oriented_cycle needs m >= 1")
    return DeltaComplex(m, [[((i + 1) % m, i) for i in range(m)]])


def points(m: int) -> DeltaComplex:
    return DeltaComplex(m)


def disjoint_union(X: DeltaComplex, Y: DeltaComplex):
    """Return ``(Z, inclusion of X, inclusion of Y)``."""
    dim = max(X.dimension, Y.dimension)
    faces = []
    for d in range(1, dim + 1):
        ox = X.num_cells(d - 1)
        level = list(X.cell_faces(d)) + [tuple(f + ox for f in fs) for fs in Y.cell_faces(d)]
        faces.append(level)
    Z = DeltaComplex(X.num_cells(0) + Y.num_cells(0), faces, check=False)
    ix = CellMap(X, Z, [list(range(X.num_cells(d))) for d in range(X.dimension + 1)], check=False)
    iy = CellMap(Y, Z, [list(range(X.num_cells(d), X.num_cells(d) + Y.num_cells(d)))
                        for d in range(Y.dimension + 1)], check=False)
    return Z, ix, iy


def cone(X: DeltaComplex):
    """Cone with the apex as first vertex of every new cell.

    Returns ``(CX, apex)``.  The cells of X keep their indices; the cone on a
    (d-1)-cell ``s`` is the d-cell ``X.num_cells(d) + s`` and has face 0 equal
    to ``s``, so that ``∂(a*s) = s - a*∂s``.
    """
    apex = X.num_cells(0)
    faces = []
    for d in range(1, X.dimension + 2):
        level = list(X.cell_faces(d))
        off = X.num_cells(d - 1)
        if d == 1:
            level += [(v, apex) for v in range(X.num_cells(0))]
        else:
            level += [(s,) + tuple(off + f for f in X.faces(d - 1, s))
                      for s in range(X.num_cells(d - 1))]
        faces.append(level)
    CX = DeltaComplex(X.num_cells(0) + 1, faces, check=False)
    CX.base = X
    CX.apex = apex
    return CX, apex


def cone_cell(CX: DeltaComplex, d: int, s: int) -> int:
    """Index of the (d+1)-cell apex * s in a cone built by :func:`cone`."""
    return CX.base.num_cells(d + 1) + s


def cone_chain(c: Chain, CX: DeltaComplex) -> Chain:
    """apex * c on the cone ``CX`` over the carrier of ``c``."""
    off = CX.base.num_cells(c.degree + 1)
    return Chain._raw(c.degree + 1, {off + s: v for s, v in c.items()})


def cone_map(h: CellMap, CX: DeltaComplex, CY: DeltaComplex) -> CellMap:
    """C_h : C(X) -> C(Y) fixing the apex."""
    X, Y = CX.base, CY.base
    images = []
    for d in range(CX.dimension + 1):
        img = list(h.images[d]) if d <= X.dimension else []
        if d == 0:
            img.append(CY.apex)
        else:
            oy = Y.num_cells(d)
            img += [oy + j for j in h.images[d - 1]]
        images.append(img)
    return CellMap(CX, CY, images, check=False)


def join(X: DeltaComplex, Y: DeltaComplex) -> DeltaComplex:
    """Join X * Y; cells of X, then cells of Y, then products (x-vertices first)."""
    dim = X.dimension + Y.dimension + 1
    nx = X.num_cells(0)
    faces = []
    for m in range(1, dim + 1):
        level = list(X.cell_faces(m))
        oy = X.num_cells(m - 1)
        level += [tuple(f + oy for f in fs) for fs in Y.cell_faces(m)]
        for p in range(0, m):
            q = m - 1 - p
            for s in range(X.num_cells(p)):
                for t in range(Y.num_cells(q)):
                    fs = []
                    for i in range(p + 1):
                        if p == 0:
                            fs.append(_join_index(X, Y, m - 1, None, t, q))
                        else:
                            fs.append(_join_index(X, Y, m - 1, X.faces(p, s)[i], t, q))
                    for j in range(q + 1):
                        if q == 0:
                            fs.append(_join_index(X, Y, m - 1, s, None, p))
                        else:
                            fs.append(_join_index(X, Y, m - 1, s, Y.faces(q, t)[j], q - 1))
                    level.append(tuple(fs))
        faces.append(level)
    return DeltaComplex(nx + Y.num_cells(0), faces, check=False)


def _join_index(X, Y, m, s, t, dim_other):
    """Index in the join's m-cells of s*t (s or t may be None for the empty cell).

    ``dim_other`` is dim of the non-empty partner when one side is empty; for
    products it is dim(t) when s is given and t is given.
    """
    if t is None:
        return s
    if s is None:
        return X.num_cells(m) + t
    q = dim_other
    p = m - 1 - q
    off = X.num_cells(m) + Y.num_cells(m)
    for pp in range(0, p):
        off += X.num_cells(pp) * Y.num_cells(m - 1 - pp)
    return off + s * Y.num_cells(q) + t


def join_map(f: CellMap, g: CellMap, XY: DeltaComplex, XY2: DeltaComplex) -> CellMap:
    """f * g between joins built by :func:`join`."""
    X, Y, X2, Y2 = f.source, g.source, f.target, g.target
    images = []
    for m in range(XY.dimension + 1):
        img = list(f.images[m]) if m <= X.dimension else []
        img += [X2.num_cells(m) + j for j in (g.images[m] if m <= Y.dimension else [])]
        for p in range(0, m):
            q = m - 1 - p
            for s in range(X.num_cells(p)):
                for t in range(Y.num_cells(q)):
                    img.append(_join_index(X2, Y2, m, f.images[p][s], g.images[q][t], q))
        images.append(img)
    return CellMap(XY, XY2, images)


def prism(X: DeltaComplex):
    """Staircase triangulation of X × I for a simplicial X.

    Vertex ``(v, t)`` of the prism has index ``2v + t``.  Returns
    ``(P, bottom, top)`` with the two inclusions of X.
    """
    if not X.is_simplicial():
        raise ComplexError("prism needs a simplicial complex with ordered vertices")
    simplices = []
    for d in range(X.dimension + 1):
        for i in range(X.num_cells(d)):
            vs = X.vertices(d, i)
            if list(vs) != sorted(vs):
                raise ComplexError("prism needs cells listed in increasing vertex order")
            for j in range(d + 1):
                simplices.append(tuple(2 * v for v in vs[:j + 1]) + tuple(2 * v + 1 for v in vs[j:]))
    for v in range(X.num_cells(0)):
        simplices.append((2 * v, 2 * v + 1))
    P = from_simplices(simplices)
    # from_simplices relabels vertices by sorted label; labels are 2v+t so indices agree.
    maps = []
    for t in (0, 1):
        images = [[P.find_cell(tuple(2 * v + t for v in X.vertices(d, i))) for i in range(X.num_cells(d))]
                  for d in range(X.dimension + 1)]
        maps.append(CellMap(X, P, images))
    P.prism_base = X
    return P, maps[0], maps[1]


def prism_chain(P: DeltaComplex, c: Chain) -> Chain:
    """The prism operator: ``∂ prism(c) = top(c) - bottom(c) - prism(∂c)``."""
    X = P.prism_base
    out: dict[int, int] = {}
    for cell, v in c.items():
        vs = X.vertices(c.degree, cell)
        for j in range(len(vs)):
            key = tuple(2 * x for x in vs[:j + 1]) + tuple(2 * x + 1 for x in vs[j:])
            idx = P.find_cell(key)
            out[idx] = out.get(idx, 0) + (-1) ** j * v
    return Chain(c.degree + 1, out)


# ---------------------------------------------------------------------------
# Barycentric subdivision


def _submasks(mask: int):
    """Proper non-empty submasks of ``mask`` in increasing order."""
    subs = []
    s = (mask - 1) & mask
    while s:
        subs.append(s)
        s = (s - 1) & mask
    return sorted(subs)


def _flags(mask: int):
    """All strictly increasing chains of non-empty submasks ending at ``mask``."""
    out = [(mask,)]
    for s in _submasks(mask):
        out.extend(ch + (mask,) for ch in _flags(s))
    return out


def _compress(mask: int, within: int) -> int:
    """Re-index the bits of ``mask`` by their rank among the bits of ``within``."""
    out, pos, bit = 0, 0, 0
    while within >> bit:
        if within >> bit & 1:
            if mask >> bit & 1:
                out |= 1 << pos
            pos += 1
        bit += 1
    return out


_FLAG_CACHE: dict[int, list] = {}
_FULL_FLAG_CACHE: dict[int, list] = {}


def _flags_of_dim(e: int):
    if e not in _FLAG_CACHE:
        _FLAG_CACHE[e] = _flags((1 << (e + 1)) - 1)
    return _FLAG_CACHE[e]


def _full_flags(e: int):
    """Maximal flags of the standard e-simplex with their orientation signs."""
    if e not in _FULL_FLAG_CACHE:
        if e == 0:
            res = [((1,), 1)]
        else:
            full = (1 << (e + 1)) - 1
            res = []
            for p in range(e + 1):
                sub = full & ~(1 << p)
                sign = (-1) ** (e + p)
                for ch, s in _full_flags(e - 1):
                    # lift the face flag back into the coordinates of the e-simplex
                    lifted = tuple(_expand(m, sub) for m in ch)
                    res.append((lifted + (full,), sign * s))
            res.sort()
        _FULL_FLAG_CACHE[e] = res
    return _FULL_FLAG_CACHE[e]


def _expand(mask: int, within: int) -> int:
    """Inverse of :func:`_compress`."""
    out, pos, bit = 0, 0, 0
    while within >> bit:
        if within >> bit & 1:
            if mask >> pos & 1:
                out |= 1 << bit
            pos += 1
        bit += 1
    return out


class _FaceFinder:
    def __init__(self, X: DeltaComplex):
        self.X = X
        self._memo: dict = {}

    def __call__(self, e: int, idx: int, mask: int):
        key = (e, idx, mask)
        r = self._memo.get(key)
        if r is None:
            d, cur = e, idx
            for p in range(e, -1, -1):
                if not mask >> p & 1:
                    cur = self.X.faces(d, cur)[p]
                    d -= 1
            r = (d, cur)
            self._memo[key] = r
        return r


def barycentric_subdivide(X: DeltaComplex):
    """Barycentric subdivision of a Delta-complex.

    A k-cell of the subdivision is a cell ``s`` of X together with a chain
    of k+1 faces of ``s`` ending at ``s`` itself; its vertices are the
    barycenters of those faces in increasing dimension.  Returns
    ``(Xb, provenance)`` where ``provenance[v] = (dim, index)`` of the cell of
    X whose barycenter is ``v``.
    """
    find = _FaceFinder(X)
    keys: list[list] = []
    index: list[dict] = []
    dimX = X.dimension
    for k in range(dimX + 1):
        level = []
        for e in range(k, dimX + 1):
            flags = [f for f in _flags_of_dim(e) if len(f) == k + 1]
            for idx in range(X.num_cells(e)):
                for f in flags:
                    level.append((e, idx, f))
        if k == 0:
            level.sort(key=lambda t: (t[0], t[1]))
        keys.append(level)
        index.append({key: i for i, key in enumerate(level)})
    faces = []
    for k in range(1, dimX + 1):
        lower = index[k - 1]
        level = []
        for e, idx, f in keys[k]:
            fs = [lower[(e, idx, f[:i] + f[i + 1:])] for i in range(k)]
            sub = f[k - 1]
            fe, fidx = find(e, idx, sub)
            fs.append(lower[(fe, fidx, tuple(_compress(m, sub) for m in f[:k]))])
            level.append(tuple(fs))
        faces.append(level)
    provenance = [(e, idx) for e, idx, _ in keys[0]] if keys else []
    Xb = DeltaComplex(len(keys[0]) if keys else 0, faces, provenance=provenance, check=False)
    Xb.parent = X
    Xb._keys = keys
    Xb._key_index = index
    Xb._face_finder = find
    return Xb, provenance


def subdivide_chain(c: Chain, Xb: DeltaComplex) -> Chain:
    """Barycentric subdivision operator X -> Xb (a chain map)."""
    index = Xb._key_index[c.degree]
    e = c.degree
    out: dict[int, int] = {}
    flags = _full_flags(e)
    for cell, v in c.items():
        for f, sign in flags:
            j = index[(e, cell, f)]
            out[j] = out.get(j, 0) + sign * v
    return Chain(e, out)


def subdivide_map(h: CellMap, Xb: DeltaComplex, Yb: DeltaComplex) -> CellMap:
    """h^b : Xb -> Yb induced by a face-compatible map h."""
    images = []
    for k, level in enumerate(Xb._keys):
        idx = Yb._key_index[k]
        images.append([idx[(e, h.images[e][i], f)] for e, i, f in level])
    return CellMap(Xb, Yb, images, check=False)


def bottom_cell(Xb: DeltaComplex, k: int, i: int) -> tuple[int, int]:
    """The smallest cell (dim, index) of X in the chain defining a cell of Xb."""
    e, idx, f = Xb._keys[k][i]
    return Xb._face_finder(e, idx, f[0])


# ---------------------------------------------------------------------------
# Quotients and subcomplexes


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def quotient(X: DeltaComplex, identifications: Iterable):
    """Glue cells of X.

    Each identification is either a ``(dim, a, b)`` cell pair, glued face by
    face in order, or a dict mapping vertices to vertices; the latter glues
    every cell whose vertices lie in its domain to the cell with the image
    vertex tuple, which must exist with the same vertex order.

    Returns ``(L, q)``.
    """
    pairs = []
    for ident in identifications:
        if isinstance(ident, Mapping):
            pairs.extend(_pairs_from_vertex_map(X, ident))
        else:
            d, a, b = ident
            if not (0 <= a < X.num_cells(d) and 0 <= b < X.num_cells(d)):
                raise ComplexError(f"identification ({d}, {a}, {b}) out of range")
            pairs.append((d, a, b))
    ufs = [_UnionFind(X.num_cells(d)) for d in range(X.dimension + 1)]
    stack = pairs[::-1]
    while stack:
        d, a, b = stack.pop()
        if ufs[d].union(a, b) and d > 0:
            fa, fb = X.faces(d, a), X.faces(d, b)
            stack.extend((d - 1, x, y) for x, y in zip(fa, fb) if x != y)
    images, reps = [], []
    for d in range(X.dimension + 1):
        uf = ufs[d]
        roots = {}
        img = []
        for i in range(X.num_cells(d)):
            r = uf.find(i)
            if r not in roots:
                roots[r] = len(roots)
            img.append(roots[r])
        images.append(img)
        reps.append(sorted(roots, key=roots.get))
    faces = []
    for d in range(1, X.dimension + 1):
        faces.append([tuple(images[d - 1][f] for f in X.faces(d, r)) for r in reps[d]])
    for d in range(1, X.dimension + 1):
        for i in range(X.num_cells(d)):
            if tuple(images[d - 1][f] for f in X.faces(d, i)) != faces[d - 1][images[d][i]]:
                raise ComplexError(f"inconsistent identification at {d}-cell {i}")
    provenance = None
    if X.provenance is not None:
        provenance = [X.provenance[r] for r in reps[0]] if reps else []
        for v in range(X.num_cells(0)):
            if X.provenance[v][0] != provenance[images[0][v]][0]:
                provenance = None
                break
    L = DeltaComplex(len(reps[0]) if reps else 0, faces, provenance=provenance, check=False)
    return L, CellMap(X, L, images, check=False)


def _pairs_from_vertex_map(X: DeltaComplex, vmap: Mapping[int, int]):
    out = []
    for d in range(X.dimension + 1):
        for i in range(X.num_cells(d)):
            vs = X.vertices(d, i)
            if not all(v in vmap for v in vs):
                continue
            image = tuple(vmap[v] for v in vs)
            if len(set(image)) < len(set(vs)):
                raise ComplexError(f"degenerate identification: {d}-cell {i} {vs} collapses to {image}")
            j = X.find_cell(image)
            if j is None:
                raise ComplexError(
                    f"identification of {d}-cell {i} {vs} has no order-preserving image {image}")
            out.append((d, i, j))
    return out


def closure(X, cells_by_dim: Mapping[int, Iterable[int]]) -> list[set[int]]:
    """Smallest subcomplex containing the given cells, as one set per dimension."""
    top = max([d for d, cs in cells_by_dim.items() if cs], default=-1)
    sets = [set() for _ in range(max(top, 0) + 1)]
    for d, cs in cells_by_dim.items():
        sets[d].update(cs)
    for d in range(top, 0, -1):
        for i in sets[d]:
            sets[d - 1].update(X.faces(d, i))
    return sets


def is_subcomplex(X, cells: Sequence[set[int]]) -> bool:
    for d in range(1, len(cells)):
        for i in cells[d]:
            if not set(X.faces(d, i)) <= cells[d - 1]:
                return False
    return True


def support_complex(X, c: Chain) -> list[set[int]]:
    return closure(X, {c.degree: set(c.support())})


def extract_subcomplex(X: DeltaComplex, cells: Sequence[set[int]]):
    """Subcomplex as its own DeltaComplex with the inclusion map into X."""
    if not is_subcomplex(X, cells):
        raise ComplexError("cells do not form a subcomplex")
    order = [sorted(s) for s in cells]
    local = [{c: i for i, c in enumerate(o)} for o in order]
    faces = [[tuple(local[d - 1][f] for f in X.faces(d, c)) for c in order[d]] for d in range(1, len(order))]
    prov = None
    if X.provenance is not None and order:
        prov = [X.provenance[v] for v in order[0]]
    S = DeltaComplex(len(order[0]) if order else 0, faces, provenance=prov, check=False)
    return S, CellMap(S, X, order, check=False)
