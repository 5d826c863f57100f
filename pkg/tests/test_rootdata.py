"""Weyl group combinatorics: enumeration, words, Bruhat order, parabolics."""

from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from demazure.rootdata import (
    ADJOINT,
    WeylElement,
    build_root_datum,
    named_cartan_matrix,
    validate_cartan_matrix,
)

from conftest import bruhat_leq_by_subwords, get_datum

KNOWN_ORDERS = {
    "A1": 2,
    "A2": 6,
    "A3": 24,
    "A4": 120,
    "B2": 8,
    "B3": 48,
    "B4": 384,
    "C3": 48,
    "D4": 192,
    "F4": 1152,
    "G2": 12,
}


# ---------------------------------------------------------------------------
# Construction and validation
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("label,order", sorted(KNOWN_ORDERS.items()))
def test_known_group_orders(label, order):
    datum = get_datum(label)
    assert datum.order == order
    assert len(datum.positive_roots) == datum.longest_element.length


def test_cartan_columns_are_simple_roots_simply_connected(a2):
    # alpha_j in fundamental-weight coordinates = j-th column of the Cartan matrix
    assert a2.simple_root(1) == (2, -1)
    assert a2.simple_root(2) == (-1, 2)


def test_adjoint_lattice_simple_roots_are_unit_vectors():
    datum = get_datum("A2", ADJOINT)
    assert datum.simple_root(1) == (1, 0)
    assert datum.simple_root(2) == (0, 1)


def test_rejects_affine_cartan_matrix():
    with pytest.raises(ValueError, match="principal submatrix"):
        build_root_datum({"cartan": [[2, -2], [-2, 2]]})


def test_rejects_indefinite_rank3_submatrix():
    # The offending 2x2 block {2,3} should be named.
    bad = [[2, -1, 0], [-1, 2, -3], [0, -2, 2]]
    with pytest.raises(ValueError, match=r"\{2, 3\}"):
        build_root_datum({"cartan": bad})


@pytest.mark.parametrize(
    "bad,msg",
    [
        ([[2, -1], [0, 2]], "vanish together"),
        ([[1]], "diagonal"),
        ([[2, 1], [1, 2]], "<= 0"),
        ([[2, -1]], "square"),
    ],
)
def test_rejects_malformed_cartan(bad, msg):
    with pytest.raises(ValueError, match=msg):
        validate_cartan_matrix(bad)


def test_rank_cap_and_order_cap():
    with pytest.raises(ValueError, match="rank"):
        build_root_datum("A6")
    with pytest.raises(ValueError, match="cap"):
        build_root_datum("B5")  # |W| = 3840 > default cap
    assert build_root_datum("B5", max_order=4000).order == 3840


def test_explicit_cartan_equals_named(b2):
    explicit = build_root_datum({"cartan": named_cartan_matrix("B2")})
    assert explicit.cartan == b2.cartan
    assert explicit.order == b2.order


# ---------------------------------------------------------------------------
# Words
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("label", ["A2", "B2", "A3", "G2"])
def test_canonical_word_is_length_lex_minimal(label):
    datum = get_datum(label)
    for w in datum.elements:
        words = datum.all_reduced_words(w)
        assert w.word == min(words)
        assert all(len(word) == w.length for word in words)
        assert all(datum.element_by_word(word) is w for word in words)


def test_reduced_word_counts_a3(a3):
    # The longest element of A3 has 16 reduced words.
    assert len(a3.all_reduced_words(a3.longest_element)) == 16


def test_g2_longest(g2):
    assert g2.longest_element.word == (1, 2, 1, 2, 1, 2)
    assert len(g2.all_reduced_words(g2.longest_element)) == 2


@pytest.mark.parametrize("label", ["A2", "B2"])
def test_is_reduced(label):
    datum = get_datum(label)
    assert datum.is_reduced(())
    assert datum.is_reduced((1, 2, 1))
    assert not datum.is_reduced((1, 1))
    assert not datum.is_reduced((2, 1, 1, 2))


# ---------------------------------------------------------------------------
# Group structure and action
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("label", ["A2", "B2", "G2"])
def test_multiplication_and_inverse(label):
    datum = get_datum(label)
    for u in datum.elements:
        inv = datum.inverse(u)
        assert datum.multiply(u, inv) is datum.identity
        assert inv.length == u.length
        for v in datum.elements:
            prod = datum.multiply(u, v)
            assert datum.element_by_word(u.word + v.word) is prod


def test_simple_reflection_action_simply_connected(a2):
    alpha1, alpha2 = a2.simple_root(1), a2.simple_root(2)
    s1, s2 = a2.simple_reflection(1), a2.simple_reflection(2)
    assert a2.apply(s1, alpha1) == (-2, 1)  # s_1(alpha_1) = -alpha_1
    assert a2.apply(s1, alpha2) == (1, 1)  # s_1(alpha_2) = alpha_1 + alpha_2
    assert a2.apply(s2, alpha1) == (1, 1)
    # s_i(lambda) = lambda - lambda_i alpha_i on fundamental-weight coordinates
    lam = (3, 5)
    expected = tuple(3 * f + 5 * s - 3 * a for f, s, a in zip((1, 0), (0, 1), alpha1))
    assert a2.apply(s1, lam) == expected


@pytest.mark.parametrize("label", ["A2", "B2", "G2", "A3"])
@pytest.mark.parametrize("lattice", ["simply-connected", ADJOINT])
def test_action_is_a_group_representation(label, lattice):
    datum = get_datum(label, lattice)
    weights = [tuple((i * j + 1) % 5 - 2 for j in range(datum.rank)) for i in range(3)]
    sample = datum.elements[:: max(1, datum.order // 8)]
    for u in sample:
        for v in sample:
            uv = datum.multiply(u, v)
            for lam in weights:
                assert datum.apply(uv, lam) == datum.apply(u, datum.apply(v, lam))


@pytest.mark.parametrize("label", ["A2", "B2", "G2"])
def test_action_permutes_roots(label):
    datum = get_datum(label)
    all_roots = set(datum.positive_roots) | {
        tuple(-c for c in beta) for beta in datum.positive_roots
    }
    for w in datum.elements:
        images = {datum.root_action(w, beta) for beta in all_roots}
        assert images == all_roots


@pytest.mark.parametrize("label", ["A2", "B2", "G2", "A3"])
def test_inversions_count_length(label):
    datum = get_datum(label)
    for w in datum.elements:
        assert len(datum.inversions(w)) == w.length
        # Along a reduced word, the partial products hit exactly the
        # inversions of w^{-1}, each positive and distinct.
        betas = datum.inversion_roots_along(w.word)
        assert len(set(betas)) == w.length
        assert all(all(c >= 0 for c in beta) for beta in betas)
        assert set(betas) == set(datum.inversions(datum.inverse(w)))


# ---------------------------------------------------------------------------
# Bruhat order and Demazure product
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("label", ["A2", "B2", "A3"])
def test_bruhat_matches_subword_oracle(label):
    datum = get_datum(label)
    for u in datum.elements:
        for w in datum.elements:
            assert datum.bruhat_leq(u, w) == bruhat_leq_by_subwords(datum, u, w)


def test_bruhat_is_a_partial_order(b2):
    elems = b2.elements
    for u in elems:
        assert b2.bruhat_leq(u, u)
        for v in elems:
            if b2.bruhat_leq(u, v) and b2.bruhat_leq(v, u):
                assert u is v
            for w in elems:
                if b2.bruhat_leq(u, v) and b2.bruhat_leq(v, w):
                    assert b2.bruhat_leq(u, w)


@settings(max_examples=150, deadline=None)
@given(
    label=st.sampled_from(["A2", "B2", "G2"]),
    data=st.data(),
)
def test_demazure_product_is_bruhat_max_over_subwords(label, data):
    datum = get_datum(label)
    word = data.draw(
        st.lists(st.integers(1, datum.rank), min_size=0, max_size=6).map(tuple)
    )
    w = datum.demazure_product(word)
    products = set()
    for k in range(len(word) + 1):
        for positions in itertools.combinations(range(len(word)), k):
            products.add(datum.element_by_word(tuple(word[p] for p in positions)))
    assert w in products
    assert all(datum.bruhat_leq(v, w) for v in products)


def test_demazure_product_of_reduced_word_is_the_element(a3):
    for w in a3.elements:
        assert a3.demazure_product(w.word) is w
        assert a3.demazure_product(w.word + w.word[-1:] if w.word else ()) is w


# ---------------------------------------------------------------------------
# Parabolic structure
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "label,J",
    [("A2", (1,)), ("A2", (2,)), ("B2", (1,)), ("B2", (2,)), ("A3", (1, 3)), ("A3", (1, 2))],
)
def test_min_coset_reps_and_factorization(label, J):
    datum = get_datum(label)
    reps = datum.min_coset_reps(J)
    subgroup = datum.parabolic_elements(J)
    assert len(reps) * len(subgroup) == datum.order
    seen = set()
    for w in datum.elements:
        u, v = datum.coset_factorization(w, J)
        assert u in reps and v in subgroup
        assert datum.multiply(u, v) is w
        assert u.length + v.length == w.length
        seen.add((u, v))
    assert len(seen) == datum.order


@pytest.mark.parametrize("label,J", [("A2", (1,)), ("B2", (2,)), ("A3", (1, 3))])
def test_j_compatible_words(label, J):
    datum = get_datum(label)
    words = datum.j_compatible_words(J)
    reps = set(datum.min_coset_reps(J))
    for w, word in words.items():
        assert len(word) == w.length
        assert datum.element_by_word(word) is w
        u, v = datum.coset_factorization(w, J)
        assert word == u.word + v.word
        assert set(v.word) <= set(J)
        if w in reps:
            assert word == w.word


def test_weight_length_validation(a2):
    with pytest.raises(ValueError, match="coordinates"):
        a2.apply(a2.identity, (1, 2, 3))
    with pytest.raises(ValueError, match="out of range"):
        a2.element_by_word((3,))
