from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from racgcover.complex import (Chain, barycentric_subdivide, boundary, closure, cone_chain, cycle_graph,
                               disjoint_union, extract_subcomplex, identity_map, points, quotient,
                               simplex, simplex_boundary, subdivide_map)
from racgcover.homology import NotPseudomanifoldError, fundamental_cycle, homology_all, solve_boundary
from racgcover.smallcover import (CharacteristicError, CharacteristicFunction, MissingProvenanceError,
                                  base_cells, build_small_cover, check_structure, folding_characteristic,
                                  folding_map, induced_map, lift_chain, mirror_structure, popcount,
                                  restriction_to_chamber, to_delta_complex, validate_characteristic)


def folded(X):
    K, _ = barycentric_subdivide(X)
    return K, folding_characteristic(K)


FIXTURES = {
    "c4_alternating": lambda: (cycle_graph(4), CharacteristicFunction(2, [1, 2, 1, 2])),
    "sd_c3": lambda: folded(cycle_graph(3)),
    "sd_triangle": lambda: folded(simplex(2)),
    "sd_sphere": lambda: folded(simplex_boundary(3)),
}


@pytest.fixture(scope="module", params=sorted(FIXTURES))
def cover(request):
    K, lam = FIXTURES[request.param]()
    return build_small_cover(K, lam)


def groups(X):
    return [h.summary() for h in homology_all(X)]


def some_cycle(X):
    """Fundamental cycle of a closed pseudomanifold, else the boundary of all top cells."""
    try:
        return fundamental_cycle(X)
    except NotPseudomanifoldError:
        n = X.dimension
        return boundary(X, Chain(n, {i: 1 for i in range(X.num_cells(n))}))


def test_mirror_faces_of_interval():
    X = simplex(1)
    ms = mirror_structure(X)
    prov = ms.base.provenance
    for v in range(2):
        F = ms.face(0, v)
        # the half of the subdivided edge running from v to the midpoint
        assert {prov[u] for u in F[0]} == {(0, v), (1, 0)}
        assert len(F[1]) == 1
    F = ms.face(1, 0)
    assert len(F) == 1 and {prov[u] for u in F[0]} == {(1, 0)}
    with pytest.raises(MissingProvenanceError):
        mirror_structure(X, simplex(1))


def test_mirror_faces_of_triangle_boundary():
    ms = mirror_structure(cycle_graph(3))
    assert ms.base.f_vector == (6, 6)
    for v in range(3):
        F = ms.face(0, v)
        assert ms.face_dimension(0, v) == 1 and len(F[0]) == 3 and len(F[1]) == 2
    for e in range(3):
        F = ms.face(1, e)
        assert ms.face_dimension(1, e) == 0 and len(F[0]) == 1


def test_mirror_dimensions_on_sphere():
    X = simplex_boundary(3)
    ms = mirror_structure(X)
    for d in range(3):
        for i in range(X.num_cells(d)):
            assert ms.face_dimension(d, i) == 2 - d


def test_mirror_of_cell_is_intersection_of_vertex_mirrors():
    X = simplex(2)
    ms = mirror_structure(X)
    for e in range(X.num_cells(1)):
        a, b = X.vertices(1, e)
        Fa, Fb, Fe = ms.face(0, a), ms.face(0, b), ms.face(1, e)
        for d in range(len(Fe)):
            assert Fe[d] == Fa[d] & Fb[d]


def test_folding_labels_and_validation():
    K, lam = folded(cycle_graph(3))
    assert sorted(set(lam.values)) == [1, 2]
    assert validate_characteristic(lam, K) is None
    for e in range(K.num_cells(1)):
        a, b = K.vertices(1, e)
        assert lam(a) != lam(b)
    bad = CharacteristicFunction(2, [1] * 6)
    assert validate_characteristic(bad, cycle_graph(6)) is not None
    with pytest.raises(CharacteristicError):
        build_small_cover(cycle_graph(6), bad)


def test_folding_map_onto_simplex():
    K, lam = folded(simplex_boundary(4))
    f = folding_map(lam, K)
    f.validate()
    assert set(f.images[3]) == {0}
    K, lam = folded(cycle_graph(3))
    f = folding_map(lam, K)
    assert set(f.images[1]) == {0}


def test_point_cover_is_a_segment():
    M = build_small_cover(points(1), CharacteristicFunction(1, [1]))
    assert M.f_vector == (3, 2)
    assert groups(M) == ["Z", "0"]


def test_alternating_square_is_a_torus():
    K, lam = FIXTURES["c4_alternating"]()
    M = build_small_cover(K, lam)
    assert M.euler_characteristic() == 0
    assert groups(M) == ["Z", "Z^2", "Z"]
    assert fundamental_cycle(M) is not None


def test_sphere_folding_cover_is_orientable():
    K, lam = FIXTURES["sd_sphere"]()
    M = build_small_cover(K, lam)
    assert M.group_order == 8
    assert fundamental_cycle(M) is not None


def test_structure(cover):
    assert check_structure(cover) == []
    G = cover.group_order
    assert cover.num_cells(cover.dimension) == G * cover.C.num_cells(cover.dimension)


def test_apex_cells_are_free(cover):
    d = cover.dimension
    j = cover.C.num_cells(d) - 1
    cells = {cover.encode(d, j, g) for g in range(cover.group_order)}
    assert len(cells) == cover.group_order


def test_lift_boundary_has_no_base_cells(cover):
    rng = random.Random(7)
    Kb = cover.Kb
    for _ in range(100):
        d = rng.randrange(Kb.dimension + 1)
        c = Chain(d, {rng.randrange(Kb.num_cells(d)): rng.randint(-3, 3) for _ in range(rng.randint(1, 6))})
        bd = boundary(cover, lift_chain(cover, c))
        assert not any(cover.is_base_cell(d, i) for i in bd)


def test_lift_of_cycle_is_cycle_and_sign_changes_under_translation(cover):
    z = some_cycle(cover.Kb)
    lift = lift_chain(cover, z)
    assert not boundary(cover, lift)
    for g in range(cover.group_order):
        assert cover.act_chain(g, lift) == (-1) ** popcount(g) * lift
    assert lift_chain(cover, Chain(z.degree)) == Chain(z.degree + 1)


def test_restriction_of_lift_is_cone_and_delta_recovers_cycle(cover):
    z = some_cycle(cover.Kb)
    lift = lift_chain(cover, z)
    rho = restriction_to_chamber(cover, lift)
    assert rho == cone_chain(z, cover.C)
    assert boundary(cover.C, rho) == z
    assert restriction_to_chamber(cover, Chain(lift.degree)) == Chain(lift.degree)


def test_restriction_maps_boundaries_to_relative_boundaries(cover):
    rng = random.Random(1)
    d = cover.dimension
    A = base_cells(cover)
    for _ in range(20):
        w = Chain(d, {rng.randrange(cover.num_cells(d)): rng.randint(-2, 2) for _ in range(5)})
        z = boundary(cover, w)
        rho = restriction_to_chamber(cover, z)
        assert solve_boundary(cover.C, rho, A) is not None


def test_restriction_rejects_non_cycles(cover):
    d = cover.dimension
    with pytest.raises(ValueError):
        restriction_to_chamber(cover, Chain(d, {cover.num_cells(d) - 1: 1}))


def test_induced_identity_and_shift():
    K, lam = FIXTURES["sd_triangle"]()
    M = build_small_cover(K, lam)
    f = induced_map(identity_map(K), M, M, 0)
    for d in range(M.dimension + 1):
        assert all(f(d, i) == i for i in range(M.num_cells(d)))
    f = induced_map(identity_map(K), M, M, 5)
    for d in range(M.dimension + 1):
        for i in range(M.num_cells(d)):
            assert f(d, i) == M.act(5, d, i)
    assert f.is_injective()


def _subcover(K, lam, cells):
    S, inc = extract_subcomplex(K, cells)
    return S, inc, build_small_cover(S, CharacteristicFunction(lam.rank, [lam(v) for v in inc.images[0]]))


def test_induced_map_functoriality():
    K, lam = FIXTURES["sd_sphere"]()
    M = build_small_cover(K, lam)
    big = closure(K, {2: set(range(12))})
    small = closure(K, {2: set(range(4))})
    K2, inc2, M2 = _subcover(K, lam, big)
    # the small subcomplex seen inside K2
    local = [{inc2.images[d].index(c) for c in small[d]} for d in range(len(small))]
    K1, inc1, M1 = _subcover(K2, CharacteristicFunction(lam.rank, [lam(v) for v in inc2.images[0]]), local)
    for w1 in range(8):
        for w2 in (0, 3, 6):
            f1 = induced_map(inc1, M1, M2, w1)
            f2 = induced_map(inc2, M2, M, w2)
            direct = induced_map(inc2.compose(inc1), M1, M, w1 ^ w2)
            comp = f2.compose(f1)
            for d in range(M1.dimension + 1):
                for i in range(M1.num_cells(d)):
                    assert comp(d, i) == direct(d, i) == f2(d, f1(d, i))
    assert induced_map(inc1, M1, M2, 0).is_injective()


def test_induced_map_of_quotient_is_cell_map():
    Y, _, _ = disjoint_union(simplex(1), simplex(1))
    L, q = quotient(Y, [(1, 0, 1)])
    Yb, _ = barycentric_subdivide(Y)
    Lb, _ = barycentric_subdivide(L)
    h = subdivide_map(q, Yb, Lb)
    MY = build_small_cover(Yb, folding_characteristic(Yb))
    ML = build_small_cover(Lb, folding_characteristic(Lb))
    f = induced_map(h, MY, ML, 0)
    assert not f.is_injective()
    for d in range(1, MY.dimension + 1):
        for i in range(MY.num_cells(d)):
            assert tuple(f(d - 1, x) for x in MY.faces(d, i)) == ML.faces(d, f(d, i))
    z = boundary(MY, Chain(2, {0: 1, 3: -2}))
    assert boundary(ML, f.pushforward(Chain(2, {0: 1, 3: -2}))) == f.pushforward(z)


def test_induced_map_rejects_label_mismatch():
    K, lam = FIXTURES["sd_triangle"]()
    M = build_small_cover(K, lam)
    other = build_small_cover(K, CharacteristicFunction(3, [lam(v) for v in range(len(lam))]))
    swapped = CharacteristicFunction(3, [{1: 2, 2: 1, 4: 4}[lam(v)] for v in range(len(lam))])
    bad = build_small_cover(K, swapped)
    induced_map(identity_map(K), M, other)
    with pytest.raises(CharacteristicError):
        induced_map(identity_map(K), M, bad)


def test_materialised_cover_agrees():
    K, lam = FIXTURES["c4_alternating"]()
    M = build_small_cover(K, lam)
    X = to_delta_complex(M)
    X.validate()
    assert X.f_vector == M.f_vector
    assert groups(X) == groups(M)


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_encode_decode_round_trip(data):
    K, lam = FIXTURES["sd_triangle"]()
    M = _cached_triangle_cover()
    d = data.draw(st.integers(0, M.dimension))
    i = data.draw(st.integers(0, M.num_cells(d) - 1))
    j, g = M.decode(d, i)
    assert M.encode(d, j, g) == i
    h = data.draw(st.integers(0, M.group_order - 1))
    assert M.project(d, M.act(h, d, i)) == j


_CACHE = {}


def _cached_triangle_cover():
    if "t" not in _CACHE:
        K, lam = FIXTURES["sd_triangle"]()
        _CACHE["t"] = build_small_cover(K, lam)
    return _CACHE["t"]
