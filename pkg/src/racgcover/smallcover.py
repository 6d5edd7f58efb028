"""Small covers over cones on barycentric subdivisions.

A complex K with a Z_2^r labelling ``lam`` of its vertices defines a cover
glued from 2^r copies (chambers) of the cone C(K^b).  A point of the base
K^b lying in the open cell of the flag (s_1 < ... < s_l) of K is fixed by
the span of ``lam`` over the vertices of s_1, so the cover is assembled
cell by cell: a cell is a pair (cell of C(K^b), coset of that stabilizer).
Cells are enumerated arithmetically and never stored.
"""
from __future__ import annotations

import bisect
import warnings
from dataclasses import dataclass

from .complex import (Chain, CellMap, ComplexError, DeltaComplex, barycentric_subdivide,
                      bottom_cell, boundary, cone, cone_map, simplex, subdivide_map)


class CharacteristicError(ValueError):
    def __init__(self, violation):
        super().__init__(str(violation))
        self.violation = violation


class MissingProvenanceError(ValueError):
    pass


def popcount(g: int) -> int:
    return bin(g).count("1")


def _rref(vectors) -> tuple[int, ...]:
    """Reduced echelon basis over GF(2), each vector's top bit being its pivot."""
    basis: list[int] = []
    for v in vectors:
        for b in basis:
            if v >> (b.bit_length() - 1) & 1:
                v ^= b
        if v:
            p = v.bit_length() - 1
            basis = [b ^ v if b >> p & 1 else b for b in basis]
            basis.append(v)
    return tuple(sorted(basis, reverse=True))


class _Stabilizer:
    """Subgroup of Z_2^r with canonical coset representatives and coset indices."""

    def __init__(self, basis: tuple[int, ...], rank: int):
        self.basis = basis
        self.dim = len(basis)
        pivots = {b.bit_length() - 1 for b in basis}
        self.free_bits = [i for i in range(rank) if i not in pivots]
        size = 1 << rank
        self.index_of = [0] * size
        self.rep = [0] * (size >> self.dim)
        for g in range(size):
            c = g
            for b in basis:
                if c >> (b.bit_length() - 1) & 1:
                    c ^= b
            idx = 0
            for j, bit in enumerate(self.free_bits):
                idx |= (c >> bit & 1) << j
            self.index_of[g] = idx
            self.rep[idx] = c

    @property
    def n_cosets(self) -> int:
        return len(self.rep)

    def elements(self) -> list[int]:
        out = [0]
        for b in self.basis:
            out += [x ^ b for x in out]
        return out


# ---------------------------------------------------------------------------
# Characteristic functions and mirrors


class CharacteristicFunction:
    """Vertex labels in Z_2^rank, stored as bitmasks (bit i is e_i)."""

    def __init__(self, rank: int, values):
        self.rank = rank
        self.values = [int(v) for v in values]
        for v in self.values:
            if not 0 <= v < (1 << rank):
                raise ValueError(f"label {v} outside Z_2^{rank}")

    def __call__(self, v: int) -> int:
        return self.values[v]

    def __len__(self):
        return len(self.values)

    def is_folding(self) -> bool:
        return all(popcount(v) == 1 for v in self.values)

    def span_rank(self, vertices) -> int:
        return len(_rref(self.values[v] for v in vertices))

    def with_value(self, v: int, value: int) -> "CharacteristicFunction":
        vals = list(self.values)
        vals[v] = value
        return CharacteristicFunction(self.rank, vals)

    def __eq__(self, other):
        return isinstance(other, CharacteristicFunction) and (self.rank, self.values) == (other.rank, other.values)

    def __repr__(self):
        return f"CharacteristicFunction(rank={self.rank}, {len(self.values)} vertices)"


def folding_characteristic(X: DeltaComplex, rank: int | None = None) -> CharacteristicFunction:
    """lam(v) = e_dim, where dim is the dimension of the cell v is the barycenter of."""
    if X.provenance is None:
        raise MissingProvenanceError("complex has no barycentric provenance")
    if rank is None:
        rank = X.dimension + 1
    return CharacteristicFunction(rank, [1 << d for d, _ in X.provenance])


@dataclass
class Violation:
    dim: int
    cell: int
    vertices: tuple
    labels: tuple
    reason: str

    def __str__(self):
        return f"{self.dim}-cell {self.cell} with vertices {self.vertices} labels {self.labels}: {self.reason}"


class MirrorStructure:
    """Faces F_s of a complex X, realised as subcomplexes of X^b.

    F_s consists of the cells of X^b whose flags only use cells having s as a face.
    """

    def __init__(self, X: DeltaComplex, Xb: DeltaComplex | None = None):
        self.complex = X
        self.base = Xb if Xb is not None else barycentric_subdivide(X)[0]
        self._faces_of: dict = {}
        self._mirrors: dict = {}

    def faces_of(self, d: int, i: int) -> frozenset:
        """All (dim, index) faces of a cell of X, itself included."""
        key = (d, i)
        r = self._faces_of.get(key)
        if r is None:
            out = {key}
            if d > 0:
                for f in self.complex.faces(d, i):
                    out |= self.faces_of(d - 1, f)
            r = self._faces_of[key] = frozenset(out)
        return r

    def face(self, d: int, i: int) -> list[set[int]]:
        key = (d, i)
        if key not in self._mirrors:
            Xb = self.base
            cells = [set() for _ in range(Xb.dimension + 1)]
            for k in range(Xb.dimension + 1):
                for j in range(Xb.num_cells(k)):
                    if key in self.faces_of(*bottom_cell(Xb, k, j)):
                        cells[k].add(j)
            while len(cells) > 1 and not cells[-1]:
                cells.pop()
            self._mirrors[key] = cells
        return self._mirrors[key]

    def face_dimension(self, d: int, i: int) -> int:
        cells = self.face(d, i)
        return max((k for k, s in enumerate(cells) if s), default=-1)


def mirror_structure(X: DeltaComplex, Xb: DeltaComplex | None = None) -> MirrorStructure:
    """Mirror faces of X inside X^b; a supplied X^b must come from barycentric_subdivide."""
    if Xb is not None and (Xb.provenance is None or getattr(Xb, "parent", None) is not X):
        raise MissingProvenanceError("subdivision has no barycentric provenance for this complex")
    return MirrorStructure(X, Xb)


def validate_characteristic(lam: CharacteristicFunction, mirror) -> Violation | None:
    """First cell whose vertex labels do not span a space of full dimension.

    ``mirror`` is a MirrorStructure or the labelled complex itself.  For a
    folding, labels of the two ends of every edge must also differ.
    """
    X = mirror.complex if isinstance(mirror, MirrorStructure) else mirror
    if len(lam) != X.num_cells(0):
        return Violation(0, -1, (), (), f"{len(lam)} labels for {X.num_cells(0)} vertices")
    folding = lam.is_folding()
    for d in range(X.dimension + 1):
        for i in range(X.num_cells(d)):
            vs = X.vertices(d, i)
            labels = tuple(lam(v) for v in vs)
            if d == 1 and folding and labels[0] == labels[1]:
                return Violation(d, i, vs, labels, "incident vertices share a label")
            if len(_rref(labels)) != d + 1:
                return Violation(d, i, vs, labels, f"labels span rank {len(_rref(labels))}, expected {d + 1}")
    return None


def folding_map(lam: CharacteristicFunction, X: DeltaComplex) -> CellMap:
    """Fold X onto the simplex of dimension rank-1, vertex v going to the index of lam(v).

    Labels must increase along the vertex order of every cell so that the
    image is an ordered face of the simplex.
    """
    if not lam.is_folding():
        raise CharacteristicError("not a folding: some label is not a basis vector")
    T = simplex(lam.rank - 1)
    images = []
    for d in range(X.dimension + 1):
        img = []
        for i in range(X.num_cells(d)):
            idx = tuple(lam(v).bit_length() - 1 for v in X.vertices(d, i))
            if len(set(idx)) != len(idx):
                raise CharacteristicError(
                    Violation(d, i, X.vertices(d, i), tuple(1 << x for x in idx), "degenerate image"))
            if list(idx) != sorted(idx):
                raise CharacteristicError(
                    Violation(d, i, X.vertices(d, i), tuple(1 << x for x in idx), "labels not increasing"))
            img.append(T.find_cell(idx))
        images.append(img)
    return CellMap(X, T, images)


# ---------------------------------------------------------------------------
# The small cover


class SmallCoverComplex:
    """Lazily indexed Delta-complex of the small cover.

    Attributes: ``K`` the labelled complex, ``lam``, ``Kb`` its subdivision,
    ``C`` the cone over ``Kb`` (apex ``apex``), ``group_order`` = 2^rank.
    Within each dimension, cells of the cone's base come first (one per coset
    of their stabilizer) followed by the free cells containing the apex,
    ``group_order`` consecutive cells per cone cell.
    """

    def __init__(self, K: DeltaComplex, lam: CharacteristicFunction, Kb: DeltaComplex | None = None):
        self.K, self.lam = K, lam
        self.rank = lam.rank
        self.group_order = 1 << lam.rank
        self.Kb = Kb if Kb is not None else barycentric_subdivide(K)[0]
        self.C, self.apex = cone(self.Kb)
        self._stabs: dict[tuple, _Stabilizer] = {}
        self._trivial = self._stab_for(())
        self._cell_stab: dict[tuple[int, int], _Stabilizer] = {}
        Kb, C = self.Kb, self.C
        self._base_stab: list[list[_Stabilizer]] = []
        self._offsets: list[list[int]] = []
        self._apex_start: list[int] = []
        self._count: list[int] = []
        for d in range(C.dimension + 1):
            stabs = [self.stabilizer_of_K_cell(*bottom_cell(Kb, d, j)) for j in range(Kb.num_cells(d))]
            offs = [0]
            for s in stabs:
                offs.append(offs[-1] + s.n_cosets)
            self._base_stab.append(stabs)
            self._offsets.append(offs)
            self._apex_start.append(offs[-1])
            n_apex = C.num_cells(d) - Kb.num_cells(d)
            self._count.append(offs[-1] + n_apex * self.group_order)

    def _stab_for(self, labels) -> _Stabilizer:
        basis = _rref(labels)
        s = self._stabs.get(basis)
        if s is None:
            s = self._stabs[basis] = _Stabilizer(basis, self.rank)
        return s

    def stabilizer_of_K_cell(self, d: int, i: int) -> _Stabilizer:
        key = (d, i)
        s = self._cell_stab.get(key)
        if s is None:
            s = self._cell_stab[key] = self._stab_for([self.lam(v) for v in self.K.vertices(d, i)])
        return s

    def stabilizer(self, d: int, j: int) -> _Stabilizer:
        """Stabilizer of cell ``j`` of the cone C(K^b)."""
        if j < self.Kb.num_cells(d):
            return self._base_stab[d][j]
        return self._trivial

    # -- Delta-complex protocol ------------------------------------------------
    @property
    def dimension(self) -> int:
        return self.C.dimension

    def num_cells(self, d: int) -> int:
        return self._count[d] if 0 <= d < len(self._count) else 0

    @property
    def f_vector(self):
        return tuple(self._count)

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * n for d, n in enumerate(self._count))

    def decode(self, d: int, i: int) -> tuple[int, int]:
        """(cell of the cone, canonical coset representative)."""
        start = self._apex_start[d]
        if i >= start:
            q, g = divmod(i - start, self.group_order)
            return self.Kb.num_cells(d) + q, g
        offs = self._offsets[d]
        j = bisect.bisect_right(offs, i) - 1
        return j, self._base_stab[d][j].rep[i - offs[j]]

    def encode(self, d: int, j: int, g: int) -> int:
        nb = self.Kb.num_cells(d)
        if j >= nb:
            return self._apex_start[d] + (j - nb) * self.group_order + g
        return self._offsets[d][j] + self._base_stab[d][j].index_of[g]

    def faces(self, d: int, i: int) -> tuple[int, ...]:
        j, g = self.decode(d, i)
        return tuple(self.encode(d - 1, f, g) for f in self.C.faces(d, j))

    def vertices(self, d: int, i: int) -> tuple[int, ...]:
        j, g = self.decode(d, i)
        return tuple(self.encode(0, v, g) for v in self.C.vertices(d, j))

    # -- group action and projection ---------------------------------------------
    def act(self, g: int, d: int, i: int) -> int:
        j, h = self.decode(d, i)
        return self.encode(d, j, h ^ g)

    def act_chain(self, g: int, c: Chain) -> Chain:
        out: dict[int, int] = {}
        for i, v in c.items():
            k = self.act(g, c.degree, i)
            out[k] = out.get(k, 0) + v
        return Chain(c.degree, out)

    def project(self, d: int, i: int) -> int:
        return self.decode(d, i)[0]

    def is_base_cell(self, d: int, i: int) -> bool:
        return i < self._apex_start[d]

    def chamber_cell(self, d: int, j: int, g: int) -> int:
        """Copy of cone cell ``j`` in chamber ``g``."""
        return self.encode(d, j, g)

    def annotations(self, d: int):
        """(cone cell, coset representative) for every d-cell, in index order."""
        return [self.decode(d, i) for i in range(self.num_cells(d))]

    def __repr__(self):
        return f"SmallCoverComplex(rank={self.rank}, f={self.f_vector})"


def build_small_cover(K: DeltaComplex, lam: CharacteristicFunction, *, Kb=None,
                      max_cells: int | None = None) -> SmallCoverComplex:
    """Small cover of the labelled complex K; raises CharacteristicError if lam is not characteristic."""
    bad = validate_characteristic(lam, K)
    if bad is not None:
        raise CharacteristicError(bad)
    if lam.rank > 4:
        warnings.warn(f"{1 << lam.rank} chambers; the cover may be very large", RuntimeWarning)
    if max_cells is not None:
        est = estimate_cells(K, lam.rank)
        if est > max_cells:
            raise ComplexError(f"estimated {est} top cells exceeds the cap of {max_cells}")
    return SmallCoverComplex(K, lam, Kb)


def estimate_cells(K: DeltaComplex, rank: int) -> int:
    """Top cells of the cover: chambers times the top cells of C(K^b)."""
    from math import factorial
    n = K.dimension
    return (1 << rank) * K.num_cells(n) * factorial(n + 1)


def check_structure(M: SmallCoverComplex, *, sample: int | None = None, rng=None) -> list[str]:
    """Structural invariants of the cover; returns a list of problems (empty if fine).

    Orbit-stabilizer counts are checked on every cone cell.  Face identities
    and equivariance of the projection are checked on every cell, or on a
    random sample of ``sample`` cells per dimension.
    """
    problems = []
    G = M.group_order
    for d in range(M.dimension + 1):
        for j in range(M.C.num_cells(d)):
            st = M.stabilizer(d, j)
            orbit = {M.encode(d, j, g) for g in range(G)}
            if len(orbit) * (1 << st.dim) != G:
                problems.append(f"orbit-stabilizer fails at cone {d}-cell {j}")
            if j < M.Kb.num_cells(d):
                bd, bi = bottom_cell(M.Kb, d, j)
                if st.dim != bd + 1:
                    problems.append(f"stabilizer of cone {d}-cell {j} has rank {st.dim}, expected {bd + 1}")
            elif st.dim != 0:
                problems.append(f"apex cell {j} has nontrivial stabilizer")
        if sum(M.stabilizer(d, j).n_cosets for j in range(M.C.num_cells(d))) != M.num_cells(d):
            problems.append(f"cell count mismatch in dimension {d}")
        if problems:
            return problems
    for d in range(M.dimension + 1):
        n = M.num_cells(d)
        cells = range(n) if sample is None or n <= sample else sorted(rng.sample(range(n), sample))
        for i in cells:
            j, _ = M.decode(d, i)
            if M.encode(d, *M.decode(d, i)) != i:
                problems.append(f"index round trip fails at {d}-cell {i}")
            for g in range(G):
                if M.project(d, M.act(g, d, i)) != j:
                    problems.append(f"projection not invariant at {d}-cell {i}, g={g}")
                    break
            if d >= 2:
                fs = M.faces(d, i)
                for b in range(d + 1):
                    for a in range(b):
                        if M.faces(d - 1, fs[b])[a] != M.faces(d - 1, fs[a])[b - 1]:
                            problems.append(f"face identity fails at {d}-cell {i}")
            if d >= 1:
                pf = tuple(M.project(d - 1, f) for f in M.faces(d, i))
                if pf != M.C.faces(d, j):
                    problems.append(f"projection is not a cell map at {d}-cell {i}")
            if len(problems) > 20:
                return problems
    return problems


# ---------------------------------------------------------------------------
# Lifts and restriction


def lift_chain(M: SmallCoverComplex, c: Chain) -> Chain:
    """Signed sum over chambers g of (-1)^|g| times the cone on ``c``."""
    e = c.degree
    nb = M.Kb.num_cells(e)
    out: dict[int, int] = {}
    G = M.group_order
    signs = [(-1) ** popcount(g) for g in range(G)]
    start = M._apex_start[e + 1] if e + 1 < len(M._apex_start) else None
    for s, v in c.items():
        if not 0 <= s < nb:
            raise ValueError(f"cell {s} is not a {e}-cell of the subdivided base")
        base = start + s * G
        for g in range(G):
            out[base + g] = signs[g] * v
    return Chain(e + 1, out)


def restriction_to_chamber(M: SmallCoverComplex, z: Chain, g: int = 0, *, check: bool = True) -> Chain:
    """Cells of chamber ``g`` as a chain on C(K^b) relative to K^b.

    Cells lying in the base (shared between chambers) vanish in the relative
    chain group and are dropped.
    """
    if check:
        bd = boundary(M, z)
        if bd:
            from .homology import NotACycleError
            raise NotACycleError(bd)
    d = z.degree
    out = {}
    for i, v in z.items():
        if M.is_base_cell(d, i):
            continue
        j, h = M.decode(d, i)
        if h == g:
            out[j] = v
    return Chain(d, out)


def base_cells(M: SmallCoverComplex) -> list[set[int]]:
    """The base K^b as a subcomplex of the cone, by cell indices."""
    return [set(range(M.Kb.num_cells(d))) for d in range(M.C.dimension + 1)]


# ---------------------------------------------------------------------------
# Induced maps


class SmallCoverMap:
    """Cell map M_1 -> M_2 induced by a dimension-preserving map of labelled complexes and a shift w."""

    def __init__(self, M1: SmallCoverComplex, M2: SmallCoverComplex, cone_images, w: int):
        self.source, self.target = M1, M2
        self.cone_images = cone_images
        self.w = w

    def __call__(self, d: int, i: int) -> int:
        j, g = self.source.decode(d, i)
        return self.target.encode(d, self.cone_images[d][j], g ^ self.w)

    def pushforward(self, c: Chain) -> Chain:
        out: dict[int, int] = {}
        for i, v in c.items():
            k = self(c.degree, i)
            out[k] = out.get(k, 0) + v
        return Chain(c.degree, out)

    def compose(self, first: "SmallCoverMap") -> "SmallCoverMap":
        """self ∘ first."""
        imgs = [[self.cone_images[d][x] for x in first.cone_images[d]] for d in range(len(first.cone_images))]
        return SmallCoverMap(first.source, self.target, imgs, first.w ^ self.w)

    def is_injective(self) -> bool:
        M = self.source
        for d in range(M.dimension + 1):
            imgs = [self(d, i) for i in range(M.num_cells(d))]
            if len(set(imgs)) != len(imgs):
                return False
        return True


def induced_map(h: CellMap, M1: SmallCoverComplex, M2: SmallCoverComplex, w: int = 0) -> SmallCoverMap:
    """Map of small covers induced by h : K_1 -> K_2 and a chamber shift w."""
    if M1.rank > M2.rank or not 0 <= w < M2.group_order:
        raise ValueError("incompatible ranks or shift")
    for v in range(M1.K.num_cells(0)):
        if M1.lam(v) != M2.lam(h(0, v)):
            raise CharacteristicError(f"labels differ at vertex {v}: {M1.lam(v)} vs {M2.lam(h(0, v))}")
    for d in range(1, M1.K.dimension + 1):
        for i in range(M1.K.num_cells(d)):
            if len(set(h(0, v) for v in M1.K.vertices(d, i))) != d + 1:
                raise ValueError(f"map is not dimension preserving on {d}-cell {i}")
    hb = subdivide_map(h, M1.Kb, M2.Kb)
    ch = cone_map(hb, M1.C, M2.C)
    return SmallCoverMap(M1, M2, ch.images, w)


def to_delta_complex(M: SmallCoverComplex) -> DeltaComplex:
    """Materialise the cover as an explicit Delta-complex."""
    faces = [[M.faces(d, i) for i in range(M.num_cells(d))] for d in range(1, M.dimension + 1)]
    return DeltaComplex(M.num_cells(0), faces, check=False)


def chamber_subgroup(rank: int, bits) -> list[int]:
    """All elements of the coordinate subgroup spanned by the given basis bits."""
    out = [0]
    for b in bits:
        out += [x | (1 << b) for x in out]
    return sorted(out)


__all__ = [
    "CharacteristicError", "CharacteristicFunction", "MirrorStructure", "MissingProvenanceError",
    "SmallCoverComplex", "SmallCoverMap", "Violation", "base_cells", "build_small_cover",
    "check_structure", "estimate_cells", "folding_characteristic", "folding_map", "induced_map",
    "lift_chain", "mirror_structure", "popcount", "restriction_to_chamber", "to_delta_complex",
    "validate_characteristic", "chamber_subgroup",
]
