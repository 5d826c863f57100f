"""Dual bases: products by two routes, stable bases, restrictions, parabolic."""

import itertools

import pytest

from conftest import get_datum
from demazure.dual import (
    CohStableBasis,
    DiscrepancyReport,
    DualBasis,
    DualElem,
    KStableBasis,
    bullet,
    pairing,
    point_class,
)
from demazure.formal import (
    ADDITIVE,
    MULTIPLICATIVE,
    Backend,
    FactorSymbol,
    HAT_ADDITIVE,
    QElem,
    SElem,
    e_mono,
    h_var,
    one,
    product_over_positive_roots,
    q_equal,
    v_var,
    x_class,
)
from demazure.twisted import (
    Algebra,
    BUILTIN_FAMILIES,
    family_t,
    family_tau,
    family_x,
    family_y,
)

BASIS_CACHE = {}


def get_basis(label, family_name, law):
    key = (label, family_name, law)
    if key not in BASIS_CACHE:
        backend = Backend(get_datum(label), law)
        BASIS_CACHE[key] = DualBasis(Algebra(BUILTIN_FAMILIES[family_name](backend)))
    return BASIS_CACHE[key]


def q_int(backend, value):
    return QElem.from_int(backend, value)


def by_word(datum, text):
    return datum.element_by_word(tuple(int(c) for c in text))


def wt(datum, *indices):
    acc = None
    for i in indices:
        root = datum.simple_root(i)
        acc = root if acc is None else tuple(a + b for a, b in zip(acc, root))
    return acc


# ---------------------------------------------------------------------------
# DualElem arithmetic and the bullet action
# ---------------------------------------------------------------------------


def test_dualelem_unit_and_support():
    basis = get_basis("A2", "x", ADDITIVE)
    unit = basis.unit()
    datum = basis.datum
    assert unit.support() == tuple(sorted(datum.elements, key=lambda w: (w.length, w.word)))
    for w in datum.elements:
        assert q_equal(unit.coeff(w), q_int(basis.backend, 1))


def test_dualelem_ring_axioms():
    basis = get_basis("A2", "x", ADDITIVE)
    backend = basis.backend
    datum = basis.datum
    s1 = by_word(datum, "1")
    s2 = by_word(datum, "2")
    g1 = basis.dual_basis_element(s1)
    g2 = basis.dual_basis_element(s2)
    g3 = basis.pt(datum.longest_element)
    assert g1 * g2 == g2 * g1
    assert (g1 * g2) * g3 == g1 * (g2 * g3)
    assert g1 * basis.unit() == g1
    assert g1 * (g2 + g3) == g1 * g2 + g1 * g3
    assert (g1 - g1).is_zero()
    assert -(-g1) == g1
    x1 = QElem.from_s(x_class(backend, wt(datum, 1)))
    assert x1 * (g1 + g2) == x1 * g1 + x1 * g2


def test_bullet_is_left_action():
    basis = get_basis("A2", "x", ADDITIVE)
    alg = basis.algebra
    f = basis.pt(basis.datum.identity) + basis.dual_basis_element(by_word(basis.datum, "21"))
    z1 = alg.compose_word((1, 2))
    z2 = alg.compose_word((2, 1, 2))
    assert bullet(z1 * z2, f) == bullet(z1, bullet(z2, f))


def test_bullet_is_adjoint_to_right_multiplication():
    basis = get_basis("A2", "x", ADDITIVE)
    alg = basis.algebra
    datum = basis.datum
    f = basis.pt(datum.identity) + basis.dual_basis_element(by_word(datum, "12"))
    for z_word, zp_word in (((1,), (2, 1)), ((1, 2), (1,)), ((2, 1, 2), (1, 2))):
        z = alg.compose_word(z_word)
        z_prime = alg.compose_word(zp_word)
        assert q_equal(pairing(bullet(z, f), z_prime), pairing(f, z_prime * z))


def test_point_class_formula():
    basis = get_basis("A2", "x", MULTIPLICATIVE)
    backend = basis.backend
    datum = basis.datum
    w = by_word(datum, "12")
    pt = basis.pt(w)
    assert pt.support() == (w,)
    assert pt == point_class(backend, w)
    # pt_e is the product of x_{-alpha} over positive roots, sitting at f_e.
    expected = product_over_positive_roots(
        backend, lambda weight: x_class(backend, tuple(-c for c in weight))
    )
    assert q_equal(basis.pt(datum.identity).coeff(datum.identity), QElem.from_s(expected))


# ---------------------------------------------------------------------------
# Dual basis elements: triangularity, duality, identity class
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("family,law", [("x", ADDITIVE), ("y", MULTIPLICATIVE), ("t", ADDITIVE)])
def test_dual_class_triangular_support(family, law):
    basis = get_basis("A2", family, law)
    datum = basis.datum
    for u in datum.elements:
        dual = basis.dual_basis_element(u)
        assert u in dual.support()
        for w in dual.support():
            assert datum.bruhat_leq(u, w)
        assert q_equal(dual.coeff(u) * basis.diag_reciprocal(u), q_int(basis.backend, 1))


@pytest.mark.parametrize("family,law", [("x", ADDITIVE), ("x", MULTIPLICATIVE), ("y", ADDITIVE)])
def test_identity_class_is_the_unit(family, law):
    basis = get_basis("A2", family, law)
    assert basis.dual_basis_element(basis.datum.identity) == basis.unit()


@pytest.mark.parametrize(
    "family,law",
    [("x", ADDITIVE), ("y", MULTIPLICATIVE), ("t", ADDITIVE), ("tau", MULTIPLICATIVE)],
)
def test_duality_pairing_identity_matrix(family, law):
    basis = get_basis("A2", family, law)
    backend = basis.backend
    for u in basis.datum.elements:
        for v in basis.datum.elements:
            expected = q_int(backend, 1 if u == v else 0)
            assert q_equal(basis.duality_pairing(u, v), expected)


# ---------------------------------------------------------------------------
# Products: the two routes and their table forms
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("family,law", [("x", ADDITIVE), ("tau", MULTIPLICATIVE)])
def test_routes_agree_on_a2(family, law):
    basis = get_basis("A2", family, law)
    assert basis.compare_routes().is_empty


@pytest.mark.parametrize("family,law", [("y", ADDITIVE), ("t", ADDITIVE)])
def test_product_support_lies_in_upper_cone(family, law):
    basis = get_basis("A2", family, law)
    datum = basis.datum
    for u in datum.elements:
        for v in datum.elements:
            for w in basis.product_oracle(u, v):
                assert datum.bruhat_leq(u, w) and datum.bruhat_leq(v, w)


def test_structure_constant_word_independent_for_braid_families():
    basis = get_basis("A2", "x", ADDITIVE)
    datum = basis.datum
    w0 = datum.longest_element
    s1 = by_word(datum, "1")
    s2 = by_word(datum, "2")
    a = basis.structure_constant(s1, s2, w0, top_word=(1, 2, 1))
    b = basis.structure_constant(s1, s2, w0, top_word=(2, 1, 2))
    assert q_equal(a, b)


def test_structure_constant_rejects_bad_top_word():
    basis = get_basis("A2", "x", ADDITIVE)
    datum = basis.datum
    w0 = datum.longest_element
    s1 = by_word(datum, "1")
    with pytest.raises(ValueError):
        basis.structure_constant(s1, s1, w0, top_word=(1, 2))
    with pytest.raises(ValueError):
        basis.structure_constant(s1, s1, w0, top_word=(1, 2, 1, 1, 2))


def test_structure_table_routes_match_and_serialize():
    basis = get_basis("A2", "x", ADDITIVE)
    datum = basis.datum
    pairs = [(by_word(datum, "1"), by_word(datum, "2")), (by_word(datum, "12"), by_word(datum, "1"))]
    oracle = basis.structure_table(pairs, route="oracle")
    formula = basis.structure_table(pairs, route="formula")

    def by_key(table):
        return {(rec.u, rec.v, rec.w): rec.value for rec in table.records}

    oracle_map, formula_map = by_key(oracle), by_key(formula)
    assert set(oracle_map) == set(formula_map)
    for key, value in oracle_map.items():
        assert q_equal(value, formula_map[key])
    assert len(oracle.to_json()) == len(oracle.records)
    text = oracle.to_text()
    assert "u=1 v=2 w=12" in text
    with pytest.raises(ValueError):
        basis.structure_table(pairs, route="magic")


# ---------------------------------------------------------------------------
# The generic-family A3 worked product (with the corrected denominator)
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "family,law",
    [("x", ADDITIVE), ("x", MULTIPLICATIVE), ("y", ADDITIVE), ("y", MULTIPLICATIVE)],
)
def test_a3_single_term_product_all_positive_roots_in_denominator(family, law):
    """z^{I_w0}_{I_u,I_v} = a_{a1} a_{a2} / prod_{alpha>0} b_alpha for
    I_u=(2,3,1,2,1), I_v=(1,2,3,2,1), I_w0=(1,2,3,1,2,1); the product
    Z*_u Z*_v is supported on w0 alone.  The denominator runs over all six
    positive roots (the printed form of this example drops b_{alpha_3})."""
    datum = get_datum("A3")
    backend = Backend(datum, law)
    algebra = Algebra(BUILTIN_FAMILIES[family](backend))
    u = datum.element_by_word((2, 3, 1, 2, 1))
    v = datum.element_by_word((1, 2, 3, 2, 1))
    w0 = datum.longest_element
    algebra = algebra.with_words(
        {u: (2, 3, 1, 2, 1), v: (1, 2, 3, 2, 1), w0: (1, 2, 3, 1, 2, 1)}
    )
    basis = DualBasis(algebra)
    fam = algebra.family
    expected = fam.a(wt(datum, 1)) * fam.a(wt(datum, 2))
    for beta in datum.positive_roots:
        expected = expected * fam.b_inv(datum.root_to_weight(beta))
    value = basis.structure_constant(u, v, w0)
    assert q_equal(value, expected)
    rows = basis.product_oracle(u, v)
    assert set(rows) == {w0}
    assert q_equal(rows[w0], expected)


# ---------------------------------------------------------------------------
# Restrictions
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("family,law", [("x", ADDITIVE), ("x", MULTIPLICATIVE), ("t", ADDITIVE)])
def test_billey_route_matches_expansion_route(family, law):
    basis = get_basis("A2", family, law)
    for v in basis.datum.elements:
        for w in basis.datum.elements:
            assert q_equal(basis.restriction(v, w), basis.restriction_via_billey(v, w))


def test_restriction_vanishes_unless_below():
    basis = get_basis("A2", "x", ADDITIVE)
    datum = basis.datum
    for v in datum.elements:
        for w in datum.elements:
            if not datum.bruhat_leq(w, v):
                assert basis.restriction(v, w).is_zero()


def test_restriction_matrix_identity_holds_on_a2():
    basis = get_basis("A2", "x", ADDITIVE)
    for w in basis.datum.elements:
        assert basis.check_restriction_matrices(w).is_empty


def test_restriction_matrices_shapes():
    basis = get_basis("A2", "y", ADDITIVE)
    datum = basis.datum
    w = by_word(datum, "12")
    p_mat, b_mat, bw_mat = basis.restriction_matrices(w)
    order = basis.order
    assert set(p_mat) == {(u, v) for u in order for v in order}
    # bw is diagonal: entries vanish off the diagonal.
    for (u, v), value in bw_mat.items():
        if u is not v:
            assert value.is_zero()


def test_structure_constant_equals_restriction_for_every_reduced_word():
    basis = get_basis("A2", "x", ADDITIVE)
    datum = basis.datum
    for v in datum.elements:
        for w in datum.elements:
            expected = basis.restriction(v, w)
            for word in datum.all_reduced_words(v):
                value = basis.structure_constant(w, v, v, top_word=word)
                assert q_equal(value, expected), (v, w, word)


# ---------------------------------------------------------------------------
# Bott-Samelson classes and the additive sign bridge
# ---------------------------------------------------------------------------


def test_bott_samelson_expands_integrally():
    basis = get_basis("A2", "x", ADDITIVE)
    for word in ((), (1,), (1, 2), (2, 1, 2), (1, 2, 1, 2)):
        zeta = basis.bott_samelson_class(word)
        for coeff in basis.expand(zeta).values():
            coeff.as_selem()  # raises if not in S


def test_additive_sign_bridge_between_x_and_y_classes():
    x_basis = get_basis("A2", "x", ADDITIVE)
    y_basis = get_basis("A2", "y", ADDITIVE)
    backend = x_basis.backend
    for w in x_basis.datum.elements:
        sign = q_int(backend, (-1) ** w.length)
        assert x_basis.dual_basis_element(w) == sign * y_basis.dual_basis_element(w)
    # and between the Bott-Samelson classes of a reduced word
    for word in ((1,), (1, 2), (1, 2, 1)):
        sign = q_int(backend, (-1) ** len(word))
        assert x_basis.bott_samelson_class(word) == sign * y_basis.bott_samelson_class(word)


def test_additive_sign_bridge_between_structure_constants():
    x_basis = get_basis("A2", "x", ADDITIVE)
    y_basis = get_basis("A2", "y", ADDITIVE)
    datum = x_basis.datum
    for u in datum.elements:
        for v in datum.elements:
            x_rows = x_basis.product_oracle(u, v)
            y_rows = y_basis.product_oracle(u, v)
            assert set(x_rows) == set(y_rows)
            for w, value in x_rows.items():
                sign = (-1) ** (w.length + u.length + v.length)
                assert q_equal(value, q_int(x_basis.backend, sign) * y_rows[w])


# ---------------------------------------------------------------------------
# Cohomological stable basis (additive, T family)
# ---------------------------------------------------------------------------


@pytest.fixture(scope="module")
def coh_a2():
    return CohStableBasis(get_datum("A2"))


def test_stab_supports(coh_a2):
    datum = coh_a2.datum
    for w in datum.elements:
        for v in coh_a2.stab_plus(w).support():
            assert datum.bruhat_leq(v, w)
        for v in coh_a2.stab_minus(w).support():
            assert datum.bruhat_leq(w, v)


def test_stab_minus_closed_form(coh_a2):
    for w in coh_a2.datum.elements:
        assert coh_a2.stab_minus(w) == coh_a2.stab_minus_dual(w)


def test_stab_pairings_are_diagonal(coh_a2):
    datum = coh_a2.datum
    backend = coh_a2.backend
    sign = (-1) ** datum.longest_element.length
    for v in datum.elements:
        for u in datum.elements:
            with_stab = coh_a2.pairing_with_stab(v, u)
            with_dual = coh_a2.pairing_with_dual(v, u)
            if v == u:
                assert with_stab == q_int(backend, sign) * DualElem.unit(backend)
                assert with_dual == DualElem.unit(backend)
            else:
                assert with_stab.is_zero()
                assert with_dual.is_zero()


def test_stab_raw_expansion_carries_the_longest_sign(coh_a2):
    datum = coh_a2.datum
    backend = coh_a2.backend
    sign = q_int(backend, (-1) ** datum.longest_element.length)
    s1 = by_word(datum, "1")
    s21 = by_word(datum, "21")
    for u, v in ((s1, s1), (s1, s21), (s21, s21)):
        raw = coh_a2.raw_constants(u, v)
        oracle = coh_a2.constants_oracle(u, v)
        assert set(raw) == set(oracle)
        for w, value in raw.items():
            assert q_equal(value, sign * oracle[w])


def test_formula_route_carries_one_extra_hat_factor(coh_a2):
    """The literal closed form exceeds the normalized oracle by exactly one
    factor alphahat_{w0} at every nonzero location; compare_constants reports
    each mismatch instead of absorbing it."""
    datum = coh_a2.datum
    s1 = by_word(datum, "1")
    report = coh_a2.compare_constants([(s1, s1)])
    oracle = coh_a2.constants_oracle(s1, s1)
    nonzero = {w for w, val in oracle.items() if not val.is_zero()}
    assert len(report.entries) == len(nonzero) == 4
    hat = QElem.from_s(coh_a2.alpha_hat_w0)
    for entry in report.entries:
        assert q_equal(entry.formula, hat * entry.oracle)


def test_coh_constants_scale_example(coh_a2):
    datum = coh_a2.datum
    backend = coh_a2.backend
    h = h_var(backend)
    al1 = x_class(backend, wt(datum, 1))
    s1 = by_word(datum, "1")
    w0 = datum.longest_element
    assert q_equal(coh_a2.constant_oracle(s1, s1, w0), QElem.from_s(h * h * (h + al1)))


# ---------------------------------------------------------------------------
# K-theoretic stable basis (multiplicative, tau family)
# ---------------------------------------------------------------------------


@pytest.fixture(scope="module")
def k_a2():
    return KStableBasis(get_datum("A2"))


def test_k_stab_two_routes_agree(k_a2):
    for w in k_a2.datum.elements:
        assert k_a2.stab_minus(w) == k_a2.stab_minus_bullet(w)


def test_k_routes_agree_everywhere(k_a2):
    assert k_a2.compare_p_constants().is_empty


def test_k_raw_expansion_matches_oracle(k_a2):
    datum = k_a2.datum
    s1 = by_word(datum, "1")
    s12 = by_word(datum, "12")
    for u, v in ((s1, s1), (s1, s12)):
        raw = k_a2.p_constants_raw(u, v)
        oracle = k_a2.p_constants_oracle(u, v)
        assert set(raw) == set(oracle)
        for w, value in raw.items():
            assert q_equal(value, oracle[w])


def test_k_stab_support(k_a2):
    datum = k_a2.datum
    for w in datum.elements:
        for v in k_a2.stab_minus(w).support():
            assert datum.bruhat_leq(w, v)


# ---------------------------------------------------------------------------
# Parabolic pieces
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("subset", [(1,), (2,)])
def test_parabolic_products_stay_in_minimal_reps(subset):
    basis = get_basis("A2", "x", ADDITIVE)
    datum = basis.datum
    reps = set(datum.min_coset_reps(subset))
    table = basis.parabolic_table(subset)
    assert table.records, "parabolic table should not be empty"
    for record in table.records:
        assert record.w in reps
        assert record.u in reps and record.v in reps


@pytest.mark.parametrize("subset", [(1,), (2,)])
def test_parabolic_longest_rep_absorbs_products(subset):
    basis = get_basis("A2", "x", ADDITIVE)
    datum = basis.datum
    reps = datum.min_coset_reps(subset)
    top = max(reps, key=lambda w: w.length)
    parabolic = basis.parabolic_basis(subset)
    for v in reps:
        rows = parabolic.product_oracle(top, v)
        assert set(rows) <= {top}


# ---------------------------------------------------------------------------
# Discrepancy report plumbing
# ---------------------------------------------------------------------------


def test_discrepancy_report_json_shape():
    basis = get_basis("A2", "x", ADDITIVE)
    backend = basis.backend
    report = DiscrepancyReport()
    assert report.is_empty
    assert report.to_json() == {"discrepancies": [], "count": 0}
    report.add(("1", "2", "121"), q_int(backend, 1), q_int(backend, 0))
    report.add(("lemma",), "nonzero residual", "0")
    payload = report.to_json()
    assert payload["count"] == 2
    assert payload["discrepancies"][0]["location"] == ["1", "2", "121"]
    assert payload["discrepancies"][1]["formula"] == "nonzero residual"
