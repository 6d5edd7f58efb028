from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from racgcover.complex import barycentric_subdivide, cycle_graph, points, simplex, simplex_boundary
from racgcover.racg import (Character, CoxeterPresentation, UnknownGeneratorError, apply_character,
                            inverse, is_even, kernel_index, length, normal_form, parabolic_is_finite,
                            racg_from_skeleton)
from racgcover.smallcover import folding_characteristic


def pentagon():
    return CoxeterPresentation("abcde", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "a")])


def brute_force_normal_form(W, w):
    """Shortlex least word reachable by commutations and cancellations."""
    seen = {tuple(w)}
    frontier = [tuple(w)]
    while frontier:
        nxt = []
        for u in frontier:
            for i in range(len(u) - 1):
                a, b = u[i], u[i + 1]
                if a == b:
                    v = u[:i] + u[i + 2:]
                elif W.commute(a, b):
                    v = u[:i] + (b, a) + u[i + 2:]
                else:
                    continue
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    shortest = min(len(u) for u in seen)
    return min((u for u in seen if len(u) == shortest), key=lambda u: [W.order[x] for x in u])


def scramble(W, w, rng, moves=20):
    w = list(w)
    for _ in range(moves):
        if rng.random() < 0.3:
            i = rng.randrange(len(w) + 1)
            g = rng.choice(W.generators)
            w[i:i] = [g, g]
        elif len(w) >= 2:
            i = rng.randrange(len(w) - 1)
            if W.commute(w[i], w[i + 1]):
                w[i], w[i + 1] = w[i + 1], w[i]
    return tuple(w)


def test_presentation_examples():
    W = racg_from_skeleton(simplex(1))
    assert len(W.generators) == 2 and len(W.commuting_pairs) == 1
    W = racg_from_skeleton(points(2))
    assert not W.commuting_pairs
    W = racg_from_skeleton(cycle_graph(4))
    assert len(W.generators) == 4 and len(W.commuting_pairs) == 4


def test_normal_form_examples():
    W = CoxeterPresentation("vw", [("v", "w")])
    assert normal_form(W, "vwvw") == ()
    W = CoxeterPresentation("vw")
    assert normal_form(W, "vwvw") == tuple("vwvw")
    assert length(W, "vwvw") == 4
    assert normal_form(W, "vv") == ()


def test_unknown_letter_rejected():
    with pytest.raises(UnknownGeneratorError):
        normal_form(pentagon(), "abz")
    with pytest.raises(ValueError):
        CoxeterPresentation("aa")
    with pytest.raises(ValueError):
        CoxeterPresentation("ab", [("a", "a")])


@pytest.mark.parametrize("W", [pentagon(), CoxeterPresentation("abcd", [("a", "c"), ("b", "d")]),
                               CoxeterPresentation("abc")])
def test_normal_form_matches_brute_force(W):
    rng = random.Random(11)
    for _ in range(300):
        w = tuple(rng.choice(W.generators) for _ in range(rng.randint(0, 8)))
        assert normal_form(W, w) == brute_force_normal_form(W, w)


words = st.lists(st.sampled_from("abcde"), max_size=12).map(tuple)


@settings(max_examples=300, deadline=None)
@given(words, st.integers(0, 2 ** 32))
def test_normal_form_idempotent_and_move_invariant(w, seed):
    W = pentagon()
    nf = normal_form(W, w)
    assert normal_form(W, nf) == nf
    assert normal_form(W, scramble(W, w, random.Random(seed))) == nf
    assert len(nf) == length(W, w)


@settings(max_examples=200, deadline=None)
@given(words, words)
def test_length_is_subadditive_and_inverse_invariant(u, v):
    W = pentagon()
    assert length(W, u + v) <= length(W, u) + length(W, v)
    assert length(W, inverse(u)) == length(W, u)
    assert normal_form(W, u + inverse(u)) == ()


@settings(max_examples=200, deadline=None)
@given(words, words)
def test_parity_and_character(u, v):
    W = pentagon()
    chi = Character(3, {"a": 1, "b": 2, "c": 4, "d": 1, "e": 2})
    assert apply_character(chi, u) == apply_character(chi, normal_form(W, u))
    assert apply_character(chi, u + v) == apply_character(chi, u) ^ apply_character(chi, v)
    if is_even(W, u) and is_even(W, v):
        assert is_even(W, u + v)
    assert is_even(W, u) == (length(W, u) % 2 == 0)


def test_character_examples():
    chi = Character(2, {"v": 1, "w": 2})
    assert apply_character(chi, "vwv") == apply_character(chi, "w")
    assert apply_character(chi, "") == 0
    assert kernel_index(Character(2, {"v": 0, "w": 0})) == 1
    assert is_even(CoxeterPresentation("vw"), "vw")


@pytest.mark.parametrize("n", [2, 3])
def test_kernel_index_of_folding(n):
    base = simplex(2) if n == 2 else simplex_boundary(4)
    K, _ = barycentric_subdivide(base)
    lam = folding_characteristic(K, n + 1)
    W = racg_from_skeleton(K)
    chi = Character(n + 1, {v: lam(v) for v in W.generators})
    assert kernel_index(chi) == 2 ** (n + 1)
    for v in W.generators:
        assert apply_character(chi, (v, v)) == 0


def test_kernel_elements_on_cliques_are_trivial():
    K, _ = barycentric_subdivide(simplex(2))
    lam = folding_characteristic(K)
    W = racg_from_skeleton(K)
    chi = Character(3, {v: lam(v) for v in W.generators})
    rng = random.Random(3)
    cliques = [K.vertices(2, i) for i in range(K.num_cells(2))]
    for _ in range(500):
        T = rng.choice(cliques)
        w = tuple(rng.choice(T) for _ in range(rng.randint(0, 10)))
        if apply_character(chi, w) == 0:
            assert normal_form(W, w) == ()


def test_parabolic_finiteness():
    W = racg_from_skeleton(cycle_graph(4))
    assert parabolic_is_finite(W, [0, 1])
    assert not parabolic_is_finite(W, [0, 2])
    assert parabolic_is_finite(W, [])
