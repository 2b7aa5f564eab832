import random
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from zkstokes import acceptance
from zkstokes.errors import DegreeError, DomainError, SizeGuardError
from zkstokes.homalg import reduced_homology
from zkstokes.ring import GroupRingElement, RingSpec, Z, sigma
from zkstokes.simplicial import (
    GroupAction,
    JoinVertex,
    SimplicialChain,
    SimplicialComplex,
    alt_subcomplex,
    apply_action,
    barycentric_subdivision,
    complex_from_facets,
    join_chains,
    join_complex,
    jumps,
    k_gon_join_sphere,
    parse_vertex_id,
    permutation_sign,
    pseudomanifold_analysis,
    vertex_id,
)

V = JoinVertex


def random_chain(rng, X, r, density=0.5):
    return acceptance.random_chain(rng, X, r, density=density)


def test_triangle_boundary():
    X = complex_from_facets([[1, 2], [2, 3], [1, 3]])
    assert X.f_vector() == [3, 3]
    assert X.dim == 1


def test_full_simplex_faces():
    X = complex_from_facets([[1, 2, 3]])
    assert X.f_vector() == [3, 3, 1]


def test_facets_are_maximal():
    X = complex_from_facets([[1, 2], [1, 2, 3]])
    assert list(X.facets) == [(1, 2, 3)]
    assert (1, 2) in X and (2, 3) in X and (1, 4) not in X


def test_simplex_boundary():
    X = complex_from_facets([[1, 2, 3]])
    d = SimplicialChain.simplex(X, (1, 2, 3)).boundary()
    expected = SimplicialChain.from_simplices(X, [((2, 3), 1), ((1, 3), -1), ((1, 2), 1)])
    assert d == expected


def test_vertex_boundary_is_rejected():
    X = complex_from_facets([[1, 2]])
    with pytest.raises(DegreeError):
        SimplicialChain.simplex(X, (1,)).boundary()


def test_unsorted_input_picks_up_sign():
    X = complex_from_facets([[1, 2, 3]])
    assert SimplicialChain.simplex(X, (2, 1, 3)) == -SimplicialChain.simplex(X, (1, 2, 3))
    assert not SimplicialChain.simplex(X, (1, 1, 3))
    with pytest.raises(DomainError):
        SimplicialChain(X, 1, {(1, 4): 1})


def test_permutation_sign():
    assert permutation_sign([1, 2, 3]) == 1
    assert permutation_sign([2, 1, 3]) == -1
    assert permutation_sign([3, 1, 2]) == 1


@pytest.mark.parametrize("k,m", [(2, 3), (3, 3), (4, 2)])
def test_boundary_squares_to_zero(k, m):
    X, _ = join_complex(k, m)
    rng = random.Random(k * 10 + m)
    for r in range(2, m):
        for _ in range(20):
            assert not random_chain(rng, X, r).boundary().boundary()


def test_small_joins():
    X, _ = join_complex(2, 2)
    assert len(X.vertices) == 4 and len(X.facets) == 4
    assert all(len(X.neighbours[v]) == 2 for v in X.vertices)
    Y, _ = join_complex(3, 2)
    assert len(Y.vertices) == 6 and len(Y.edges()) == 9


@pytest.mark.parametrize("k", [2, 3, 4])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_join_action_is_free(k, m):
    X, action = join_complex(k, m)
    assert action.validate(X) == []
    assert action.is_free(X)


def test_non_free_action_is_reported():
    # a reflection of the 4-cycle swaps the ends of two edges
    X = complex_from_facets([[0, 1], [1, 2], [2, 3], [0, 3]])
    rot = GroupAction(4, {0: 1, 1: 2, 2: 3, 3: 0})
    assert rot.validate(X) == []
    flip = GroupAction(2, {0: 1, 1: 0, 2: 3, 3: 2})
    assert flip.fixed_simplices(X) == [((0, 1), 1), ((2, 3), 1)]
    assert flip.validate(X)
    assert flip.validate(X, require_free=False) == []


def test_action_powers():
    X, action = join_complex(3, 2)
    x = SimplicialChain.simplex(X, (V(1, 0), V(2, 2)))
    assert apply_action(action, 0, x) == x
    assert apply_action(action, 3, x) == x
    y = x
    for _ in range(3):
        y = y.apply(action)
    assert y == x


@pytest.mark.parametrize("k", [2, 3])
def test_action_commutes_with_boundary(k):
    X, action = join_complex(k, 3)
    rng = random.Random(k)
    for r in (1, 2):
        for _ in range(10):
            x = random_chain(rng, X, r)
            assert x.apply(action).boundary() == x.boundary().apply(action)


def test_group_ring_action_is_module_action():
    X, action = join_complex(3, 2)
    rng = random.Random(5)
    x = random_chain(rng, X, 1)
    a = GroupRingElement.from_coeffs(3, Z, [1, -2, 4])
    b = GroupRingElement.from_coeffs(3, Z, [0, 3, 1])
    assert x.lmul(a * b, action) == x.lmul(b, action).lmul(a, action)


def test_alt_subcomplex_examples():
    assert len(alt_subcomplex(2, 3, 1).facets) == 6
    assert len(alt_subcomplex(3, 3, 0).facets) == 3
    full, _ = join_complex(3, 3)
    assert alt_subcomplex(3, 3, 2).facets == full.facets
    with pytest.raises(DomainError):
        alt_subcomplex(2, 2, 2)


@pytest.mark.parametrize("k,m,d", [(2, 4, 1), (3, 4, 2), (4, 3, 1), (2, 5, 3)])
def test_alt_subcomplex_facet_count(k, m, d):
    expected = sum(comb(m - 1, j) * k * (k - 1) ** j for j in range(d + 1))
    X = alt_subcomplex(k, m, d)
    assert len(X.facets) == expected
    assert all(jumps([v.sign for v in f]) <= d for f in X.facets)


def test_join_size_guard():
    with pytest.raises(SizeGuardError):
        join_complex(5, 9, cap=1000)


def test_join_of_vertices():
    X, _ = join_complex(2, 2)
    x = SimplicialChain.simplex(X, (V(1, 0),))
    y = SimplicialChain.simplex(X, (V(2, 1),))
    assert join_chains(x, y) == SimplicialChain.simplex(X, (V(1, 0), V(2, 1)))
    assert join_chains(y, x) == -SimplicialChain.simplex(X, (V(1, 0), V(2, 1)))
    with pytest.raises(DomainError):
        join_chains(x, x)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_leibniz_rule(seed):
    rng = random.Random(seed)
    X, _ = join_complex(rng.choice([2, 3]), 4)
    split = rng.randint(1, 3)
    lo = [f for f in X.faces(rng.randint(0, split - 1)) if all(v.copy <= split for v in f)]
    hi = [f for f in X.faces(rng.randint(0, 3 - split)) if all(v.copy > split for v in f)]
    x = SimplicialChain(X, len(lo[0]) - 1, {f: rng.randint(-2, 2) for f in rng.sample(lo, min(3, len(lo)))})
    y = SimplicialChain(X, len(hi[0]) - 1, {f: rng.randint(-2, 2) for f in rng.sample(hi, min(3, len(hi)))})
    assert acceptance.leibniz_holds(x, y)


def test_leibniz_detects_a_sign_bug(monkeypatch):
    def bad_join(x, y):
        return join_chains(x, y) * (-1) ** x.degree

    monkeypatch.setattr(acceptance, "join_chains", bad_join)
    X, _ = join_complex(2, 4)
    x = SimplicialChain.from_simplices(X, [((V(1, 0), V(2, 1)), 1)])
    y = SimplicialChain.from_simplices(X, [((V(3, 0), V(4, 0)), 1)])
    assert not acceptance.leibniz_holds(x, y)


def test_tau_u_equals_boundary_of_w_in_ezk_marks():
    # the edge w from (copy 1, e) to (copy 2, g) minus the edge to (copy 2, e)
    X, action = join_complex(2, 2)
    u = SimplicialChain.simplex(X, (V(2, 0),))
    w = SimplicialChain.from_simplices(X, [((V(1, 0), V(2, 1)), 1), ((V(1, 0), V(2, 0)), -1)])
    tau = GroupRingElement.group(2, 1) - GroupRingElement.one(2)
    assert w.boundary() == u.lmul(tau, action)


def test_boundary_of_tetrahedron_is_closed_pm():
    X = complex_from_facets([[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]])
    rep = pseudomanifold_analysis(X)
    assert rep.is_pseudomanifold and rep.orientable
    assert rep.summary()["closed"]
    assert not rep.orientation_chain.boundary()


def test_single_simplex_is_pm_with_boundary():
    X = complex_from_facets([[1, 2, 3]])
    rep = pseudomanifold_analysis(X)
    assert rep.is_pseudomanifold and rep.orientable
    assert len(rep.boundary_ridges) == 3
    assert rep.orientation_chain.boundary().support() == sorted(rep.boundary_ridges)


def test_octahedron_is_closed_orientable():
    X, _ = join_complex(2, 3)
    rep = pseudomanifold_analysis(X)
    assert rep.summary()["closed"] and rep.orientable
    assert not rep.orientation_chain.boundary()


def test_non_pseudomanifold():
    X = complex_from_facets([[1, 2], [1, 3], [1, 4]])
    assert not pseudomanifold_analysis(X).is_pseudomanifold


def test_non_orientable_projective_plane():
    # six-vertex projective plane
    facets = [[1, 2, 3], [1, 3, 4], [1, 4, 5], [1, 5, 6], [1, 6, 2], [2, 3, 5], [3, 4, 6], [4, 5, 2], [5, 6, 3], [6, 2, 4]]
    rep = pseudomanifold_analysis(complex_from_facets(facets))
    assert rep.is_pseudomanifold
    assert not rep.orientable


def test_subdivided_edge():
    X = complex_from_facets([["a", "b"]])
    sub = barycentric_subdivision(X)
    b = ("a", "b")
    img = sub.chain_map(SimplicialChain.simplex(X, ("a", "b")))
    expected = SimplicialChain.from_simplices(sub.complex, [((("b",), b), -1), ((("a",), b), 1)])
    assert img == expected
    assert img.boundary() == sub.chain_map(SimplicialChain.simplex(X, ("a", "b")).boundary())


def test_subdivision_commutes_with_boundary():
    X = complex_from_facets([[1, 2, 3]])
    sub = barycentric_subdivision(X)
    rng = random.Random(3)
    for r in (1, 2):
        for _ in range(10):
            x = random_chain(rng, X, r, density=0.8)
            assert sub.chain_map(x).boundary() == sub.chain_map(x.boundary())


def test_subdivision_commutes_with_action():
    X, action = join_complex(3, 2)
    sub = barycentric_subdivision(X, action)
    assert sub.action.validate(sub.complex) == []
    for r in (0, 1):
        for s in X.faces(r):
            x = SimplicialChain.simplex(X, s)
            assert sub.chain_map(x.apply(action)) == sub.chain_map(x).apply(sub.action)


@pytest.mark.parametrize("k,m", [(2, 2), (2, 3), (3, 2)])
def test_subdivision_preserves_homology(k, m):
    X, action = join_complex(k, m)
    sub = barycentric_subdivision(X, action)
    assert reduced_homology(sub.complex) == reduced_homology(X)


def test_kgon_join_sphere():
    X, action, us, ws = k_gon_join_sphere(3, 0)
    assert X.f_vector() == [3, 3]
    X, action, us, ws = k_gon_join_sphere(3, 1)
    assert len(X.facets) == 9 and X.dim == 3
    tau = GroupRingElement.group(3, 1) - GroupRingElement.one(3)
    for u, w in zip(us, ws):
        assert w.boundary() == u.lmul(tau, action)
    with pytest.raises(DomainError):
        k_gon_join_sphere(2, 1)


def test_vertex_ids_round_trip():
    for v in [V(3, 1), V(1, 0)]:
        assert parse_vertex_id(vertex_id(v)) == v
    assert parse_vertex_id("apex") == "apex"


def test_complex_and_chain_json_round_trip():
    X, action = join_complex(3, 2)
    doc = X.to_json(action)
    Y, action2 = SimplicialComplex.from_json(doc)
    assert Y.facets == X.facets and Y.vertices == X.vertices
    assert action2.generator == action.generator
    x = random_chain(random.Random(1), X, 1)
    assert SimplicialChain.from_json(x.to_json(), Y) == x
    z = SimplicialChain(X, 1, x.terms, RingSpec.mod(3))
    assert SimplicialChain.from_json(z.to_json()).terms == z.terms


def test_sigma_lmul_sums_orbit():
    X, action = join_complex(2, 1)
    x = SimplicialChain.simplex(X, (V(1, 0),))
    assert x.lmul(sigma(2), action).terms == {(V(1, 0),): 1, (V(1, 1),): 1}


def test_vector_round_trip():
    X, _ = join_complex(2, 3)
    x = random_chain(random.Random(2), X, 2)
    assert SimplicialChain.from_vector(X, 2, x.to_vector()) == x
