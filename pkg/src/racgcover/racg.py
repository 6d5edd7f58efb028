"""Right-angled Coxeter groups: word problem, characters and parabolics."""
from __future__ import annotations

from typing import Hashable, Iterable, Sequence

Word = tuple


class UnknownGeneratorError(ValueError):
    pass


class CoxeterPresentation:
    """Involutive generators; a pair commutes iff it is an edge of the defining graph."""

    def __init__(self, generators: Sequence[Hashable], commuting_pairs: Iterable[tuple] = ()):
        self.generators = tuple(generators)
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("generators must be distinct")
        self.order = {g: i for i, g in enumerate(self.generators)}
        self._adj: dict = {g: set() for g in self.generators}
        for a, b in commuting_pairs:
            if a == b:
                raise ValueError(f"generator {a!r} cannot commute with itself as a relation")
            for x in (a, b):
                if x not in self._adj:
                    raise UnknownGeneratorError(f"unknown generator {x!r}")
            self._adj[a].add(b)
            self._adj[b].add(a)

    @property
    def commuting_pairs(self) -> frozenset:
        return frozenset(frozenset((a, b)) for a in self._adj for b in self._adj[a])

    def commute(self, a, b) -> bool:
        return a == b or b in self._adj[a]

    def check_word(self, w: Sequence) -> Word:
        for x in w:
            if x not in self.order:
                raise UnknownGeneratorError(f"unknown generator {x!r}")
        return tuple(w)

    def parse(self, text: str) -> Word:
        """Whitespace separated generator names; integer names are accepted as digits."""
        by_name = {str(g): g for g in self.generators}
        out = []
        for tok in text.split():
            if tok not in by_name:
                raise UnknownGeneratorError(f"unknown generator {tok!r}")
            out.append(by_name[tok])
        return tuple(out)

    def format(self, w: Sequence) -> str:
        return " ".join(str(x) for x in w)

    def __eq__(self, other):
        return (isinstance(other, CoxeterPresentation) and self.generators == other.generators
                and self.commuting_pairs == other.commuting_pairs)

    def __hash__(self):
        return hash((self.generators, self.commuting_pairs))

    def __repr__(self):
        return f"CoxeterPresentation({len(self.generators)} generators, {len(self.commuting_pairs)} commuting pairs)"


def racg_from_skeleton(X) -> CoxeterPresentation:
    """Generators are the vertices of X, commuting pairs its edges."""
    edges = []
    for i in range(X.num_cells(1)):
        a, b = X.faces(1, i)
        if a != b:
            edges.append((min(a, b), max(a, b)))
    return CoxeterPresentation(range(X.num_cells(0)), edges)


def _reduce(W: CoxeterPresentation, w: Word) -> list:
    out: list = []
    for x in w:
        for j in range(len(out) - 1, -1, -1):
            y = out[j]
            if y == x:
                del out[j]
                break
            if not W.commute(x, y):
                out.append(x)
                break
        else:
            out.append(x)
    return out


def _lex_min(W: CoxeterPresentation, w: list) -> Word:
    rest = list(w)
    out = []
    rank = W.order
    while rest:
        best = None
        seen: list = []
        for j, x in enumerate(rest):
            if all(W.commute(x, y) for y in seen):
                if best is None or rank[x] < rank[rest[best]]:
                    best = j
            seen.append(x)
        out.append(rest.pop(best))
    return tuple(out)


def normal_form(W: CoxeterPresentation, w: Sequence) -> Word:
    """Shortlex least word for the element (letters ordered as in ``W.generators``)."""
    return _lex_min(W, _reduce(W, W.check_word(w)))


def length(W: CoxeterPresentation, w: Sequence) -> int:
    return len(_reduce(W, W.check_word(w)))


def equal(W: CoxeterPresentation, u: Sequence, v: Sequence) -> bool:
    return normal_form(W, u) == normal_form(W, v)


def inverse(w: Sequence) -> Word:
    return tuple(reversed(w))


def is_even(W: CoxeterPresentation, w: Sequence) -> bool:
    return len(W.check_word(w)) % 2 == 0


def parabolic_is_finite(W: CoxeterPresentation, T: Iterable) -> bool:
    """W_T is finite iff T is a clique of the defining graph."""
    T = list(T)
    W.check_word(T)
    return all(W.commute(a, b) for i, a in enumerate(T) for b in T[i + 1:])


class Character:
    """Homomorphism to Z_2^rank given by bitmasks on the generators."""

    def __init__(self, rank: int, assignment: dict):
        self.rank = rank
        self.assignment = {g: int(v) for g, v in assignment.items()}
        for g, v in self.assignment.items():
            if not 0 <= v < (1 << rank):
                raise ValueError(f"value {v} of {g!r} outside Z_2^{rank}")

    def __call__(self, g) -> int:
        return self.assignment[g]

    def is_total_on(self, W: CoxeterPresentation) -> bool:
        return all(g in self.assignment for g in W.generators)

    def __repr__(self):
        return f"Character(rank={self.rank}, {len(self.assignment)} generators)"


def apply_character(chi: Character, w: Sequence) -> int:
    out = 0
    for x in w:
        out ^= chi.assignment[x]
    return out


def gf2_rank(vectors: Iterable[int]) -> int:
    basis: dict[int, int] = {}
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top not in basis:
                basis[top] = v
                break
            v ^= basis[top]
    return len(basis)


def kernel_index(chi: Character) -> int:
    """[W : ker chi] = size of the image, 2^(rank of the values)."""
    return 1 << gf2_rank(chi.assignment.values())
