import itertools

import pytest
from hypothesis import given, strategies as st

from zkstokes.errors import DegreeError, DimensionMismatch, SizeGuardError
from zkstokes.resolutions import (
    MinimalElement,
    StandardChain,
    bar_boundary,
    bar_to_tensor,
    f_map,
    f_tensor,
    f_word,
    is_alternating,
    is_alternating_word,
    is_strongly_alternating,
    is_strongly_alternating_word,
    minimal_boundary,
    standard_boundary,
    tensor_to_bar,
    verify_f_chain_map,
)
from zkstokes.ring import GroupRingElement, RingSpec, Z, sigma, sigma_r, tau, tau_r


def e(k, ring=Z):
    return GroupRingElement.one(k, ring)


def g(k, a=1, ring=Z):
    return GroupRingElement.group(k, a, ring)


def test_tensor_bar_conversion_examples():
    assert tensor_to_bar((0, 2, 1), 3) == (0, (2, 2))
    assert tensor_to_bar((1, 0, 1), 2) == (1, (1, 1))
    assert tensor_to_bar((2,), 3) == (2, ())


@given(st.integers(2, 6).flatmap(lambda k: st.tuples(st.just(k), st.lists(st.integers(0, k - 1), min_size=1, max_size=6))))
def test_tensor_bar_round_trip(data):
    k, t = data
    lead, word = tensor_to_bar(tuple(t), k)
    assert bar_to_tensor(lead, word, k) == tuple(t)
    assert is_alternating(tuple(t)) == is_alternating_word(word)


def test_bar_boundary_degree_one():
    for k in range(2, 6):
        for r in range(k):
            d = bar_boundary((r,), k)
            assert d.degree == 0
            assert d.terms == {(): tau_r(k, r)} or (r == 0 and d.is_zero())


def test_bar_boundary_k2_example():
    d = bar_boundary((1, 1), 2)
    expected = StandardChain(2, Z, 1, {(1,): e(2) + g(2), (0,): -e(2)})
    assert d == expected


def test_boundary_in_degree_zero_is_rejected():
    with pytest.raises(DegreeError):
        bar_boundary((), 3)
    with pytest.raises(DegreeError):
        standard_boundary(StandardChain.basis((), 3))
    with pytest.raises(DegreeError):
        minimal_boundary(MinimalElement(0, e(3)))


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_bar_boundary_squares_to_zero(k):
    for r in range(2, 5):
        for w in itertools.product(range(k), repeat=r):
            assert standard_boundary(bar_boundary(w, k)).is_zero()


def test_alternating_word_examples():
    assert not is_alternating_word((1, 0, 2))
    assert is_alternating_word(())
    assert is_alternating_word((1, 2, 1))


def test_strong_alternation_examples():
    assert is_strongly_alternating_word((1, 1), 2)
    assert not is_strongly_alternating_word((1, 1), 3)
    assert is_strongly_alternating_word((2, 2, 1, 2), 3)
    assert is_strongly_alternating((0,), 3)
    assert is_strongly_alternating_word((), 4)


@pytest.mark.parametrize("r", range(0, 6))
def test_strong_and_plain_alternation_agree_only_for_k2(r):
    for w in itertools.product(range(2), repeat=r):
        assert is_strongly_alternating_word(w, 2) == is_alternating_word(w)
    if r >= 2:
        # for k = 3 the word [1|1] is alternating but not strongly so
        assert any(is_alternating_word(w) and not is_strongly_alternating_word(w, 3) for w in itertools.product(range(3), repeat=r))


@given(st.integers(2, 7).flatmap(lambda k: st.tuples(st.just(k), st.lists(st.integers(0, k - 1), min_size=1, max_size=6))))
def test_strong_alternation_invariant_under_diagonal_action(data):
    k, t = data
    t = tuple(t)
    shifted = tuple((a + 1) % k for a in t)
    assert is_strongly_alternating(t, k) == is_strongly_alternating(shifted, k)


def test_f_examples():
    for k in range(2, 6):
        assert f_word((), k) == e(k)
        for i in range(k):
            assert f_word((i,), k) == sigma_r(k, i)
        for a, b in itertools.product(range(k), repeat=2):
            assert f_word((a, b), k) == (e(k) if a + b >= k else GroupRingElement.zero(k))


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_f_vanishes_on_degenerate_words(k):
    for r in range(1, 5):
        for w in itertools.product(range(k), repeat=r):
            if not is_alternating_word(w):
                assert f_word(w, k).is_zero()


@pytest.mark.parametrize("k", [2, 3, 4])
def test_f_tensor_is_equivariant(k):
    for r in range(0, 4):
        for t in itertools.product(range(k), repeat=r + 1):
            shifted = tuple((a + 1) % k for a in t)
            assert f_tensor(shifted, k) == g(k) * f_tensor(t, k)


def test_minimal_boundary_matrices_k2():
    def matrix(m):
        cols = [(m * b).coeffs for b in (e(2), g(2))]
        return [[cols[j][i] for j in range(2)] for i in range(2)]

    assert matrix(tau(2)) == [[-1, 1], [1, -1]]
    assert matrix(sigma(2)) == [[1, 1], [1, 1]]
    assert minimal_boundary(MinimalElement(1, e(2))).value == tau(2)
    assert minimal_boundary(MinimalElement(2, e(2))).value == sigma(2)


@given(st.integers(2, 6), st.integers(2, 9), st.lists(st.integers(-9, 9), min_size=6, max_size=6))
def test_minimal_boundary_squares_to_zero(k, degree, coeffs):
    x = MinimalElement(degree, GroupRingElement.from_coeffs(k, Z, coeffs[:k]))
    assert minimal_boundary(minimal_boundary(x)).value.is_zero()


def test_degree_one_image_of_sigma_i():
    for k in range(2, 6):
        for i in range(1, k + 1):
            assert minimal_boundary(MinimalElement(1, sigma_r(k, i))).value == tau_r(k, i)


def test_chain_map_k2():
    rep = verify_f_chain_map(2, 4)
    assert rep["checked"] == 2 + 4 + 8 + 16
    assert rep["failures"] == []


def test_chain_map_k5():
    rep = verify_f_chain_map(5, 4)
    assert rep["checked"] == 780
    assert rep["failures"] == []


@pytest.mark.parametrize("ring", [RingSpec.mod(2), RingSpec.mod(6), RingSpec.mod(9)])
def test_chain_map_over_finite_rings(ring):
    assert verify_f_chain_map(3, 3, ring)["failures"] == []


def test_chain_map_golden_k3():
    # d[1|1] = g[1] - [2] + [1], so f(d[1|1]) = g*sigma_1 - sigma_2 + sigma_1 = 0
    d = bar_boundary((1, 1), 3)
    assert d == StandardChain(3, Z, 1, {(1,): g(3) + e(3), (2,): -e(3)})
    assert f_map(d).value.is_zero()
    assert f_word((1, 1), 3).is_zero()
    assert (tau(3) * f_word((1, 1), 3)).is_zero()
    # a nonzero case: f([2|2]) = e and degree 2 maps down by sigma
    assert f_word((2, 2), 3) == e(3)
    assert f_map(bar_boundary((2, 2), 3)).value == sigma(3)


def test_chain_map_size_guard():
    with pytest.raises(SizeGuardError):
        verify_f_chain_map(6, 8, cap=1000)


def test_standard_chain_normalisation_and_json():
    k = 3
    # letters are reduced mod k, so (4, 5) and (1, 2) cancel
    c = StandardChain(k, Z, 2, {(4, 5): e(k), (1, 2): -e(k), (0, 0): GroupRingElement.zero(k)})
    assert c.is_zero()
    c = StandardChain(k, Z, 2, {(2, 1): e(k), (0, 1): g(k)})
    assert list(c.terms) == [(0, 1), (2, 1)]
    x = StandardChain(k, RingSpec.mod(5), 2, {(1, 2): g(k, 2, RingSpec.mod(5)), (0, 1): e(k, RingSpec.mod(5))})
    assert StandardChain.from_json(x.to_json()) == x
    with pytest.raises(DimensionMismatch):
        StandardChain(k, Z, 2, {(1,): e(k)})


def test_from_tensor_and_to_tensors_agree():
    k = 4
    c = StandardChain.from_tensor((2, 3, 1), k, coeff=-2)
    assert c.to_tensors() == {(2, 3, 1): -2}
