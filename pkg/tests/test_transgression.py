import pytest
from sympy import Matrix, Rational, Symbol, expand

from src.cosimplicial import BigradedElement, codegeneracy, d_I, d_II
from src.errors import DimensionMismatch, NotClosed, NotInvariant
from src.exterior import Form, parse_form
from src.lie_core import InvariantPolynomial, cartan_three_form, killing_form, sl3_matrices, trace_form
from src.transgression import (
    CohomologyClass,
    TensorRep,
    ce_cohomology,
    classes_proportional,
    edge_map,
    inverse_alexander_whitney,
    sigma_one_embedding,
    sigma_one_restriction,
    symmetrize,
    transgress,
)

LABELS = ("x", "y", "z")


def trace_power(g, k):
    """tr(X^k) for X = sum of dual coordinates times the sl3 basis matrices."""
    X = Matrix.zeros(3, 3)
    for label, m in zip(g.dual_labels, sl3_matrices()):
        X += Symbol(label) * m
    return InvariantPolynomial.parse(str(expand((X**k).trace())), g)


def scaled(p, c):
    return InvariantPolynomial(p.degree, {e: c * v for e, v in p.coefficients.items()})


def test_symmetrize_recovers_polynomial(det):
    tensor = symmetrize(det)
    assert tensor.d == 2
    assert tensor.terms[(1, 2)] == tensor.terms[(2, 1)] == Rational(-1, 2)
    assert tensor.diagonal([1, 2, 3]) == -7


def test_tensor_must_be_symmetric():
    with pytest.raises(ValueError):
        TensorRep(2, {(0, 1): 1})


def test_sigma_one_embedding_round_trip():
    form = parse_form("x^y - 2 y^z", LABELS)
    embedded = sigma_one_embedding(form)
    assert embedded.p == 1
    assert sigma_one_restriction(embedded) == form


def test_sigma_one_restriction_rejects_other_columns():
    with pytest.raises(DimensionMismatch):
        sigma_one_restriction(BigradedElement.zero(2, 1, 3))


def test_inverse_alexander_whitney_is_d_I_closed(det):
    top = inverse_alexander_whitney(symmetrize(det), 3)
    assert (top.p, top.q) == (2, 2)
    assert not top.is_zero()
    assert d_I(top).is_zero()


def test_inverse_alexander_whitney_is_normalized(det):
    top = inverse_alexander_whitney(symmetrize(det), 3)
    assert all(codegeneracy(j, top).is_zero() for j in range(top.p))


def test_ce_cohomology_of_sl2(g_sl2):
    assert [ce_cohomology(g_sl2, q).dim for q in range(4)] == [1, 0, 0, 1]


def test_ce_cohomology_of_abelian(g_abelian):
    assert [ce_cohomology(g_abelian, q).dim for q in range(3)] == [1, 2, 1]


def test_cohomology_class_needs_closed_form(g_sl2):
    with pytest.raises(NotClosed):
        CohomologyClass(parse_form("x", LABELS), g_sl2)


def test_determinant_transgresses_to_half_eta(g_sl2, det):
    result = transgress(det, g_sl2)
    assert result.chain.check(g_sl2)
    assert result.form.terms == {(0, 1, 2): 4}
    assert result.cohomology_class.degree == 3
    assert result.factor_against_eta(g_sl2) == Rational(1, 2)


@pytest.mark.parametrize("pivot_order", ["lex", "reverse", 7])
def test_class_does_not_depend_on_pivot_order(g_sl2, det, pivot_order):
    eta = CohomologyClass(cartan_three_form(g_sl2), g_sl2, 3)
    assert edge_map(det, g_sl2, pivot_order) == eta * Rational(1, 2)


def test_edge_map_is_linear(g_sl2, det):
    killing = InvariantPolynomial.from_bilinear_form(killing_form(g_sl2))
    result = transgress(killing, g_sl2)
    assert result.factor_against_eta(g_sl2) == -4


def test_unknown_pivot_order(g_sl2, det):
    with pytest.raises(ValueError):
        transgress(det, g_sl2, "random")


def test_non_invariant_polynomial_is_rejected(g_sl2):
    with pytest.raises(NotInvariant):
        transgress(InvariantPolynomial.parse("x^2", g_sl2), g_sl2)


def test_abelian_edge_map_vanishes(g_abelian):
    p = InvariantPolynomial.parse("x^2 + x*y", g_abelian)
    result = transgress(p, g_abelian)
    assert result.cohomology_class.is_zero()
    assert result.factor_against_eta(g_abelian) is None


def test_zero_polynomial_gives_zero_class(g_sl2):
    zero = InvariantPolynomial.parse("0", g_sl2, degree=2)
    assert edge_map(zero, g_sl2).is_zero()


def test_sl3_killing_polynomial_is_nonzero_multiple_of_eta(g_sl3):
    killing = InvariantPolynomial.from_bilinear_form(killing_form(g_sl3))
    factor = transgress(killing, g_sl3).factor_against_eta(g_sl3)
    assert factor is not None
    assert factor != 0


def test_classes_of_different_degrees_are_not_proportional(g_sl2):
    one = CohomologyClass(Form.constant(1, 3), g_sl2, 0)
    eta = CohomologyClass(cartan_three_form(g_sl2), g_sl2, 3)
    assert classes_proportional(one, eta) is None
    assert classes_proportional(eta * 3, eta) == 3


def test_degree_one_needs_no_recurrence(g_abelian):
    p = InvariantPolynomial.parse("x", g_abelian)
    assert symmetrize(p).terms == {(0,): 1}
    top = inverse_alexander_whitney(symmetrize(p), 2)
    assert top == sigma_one_embedding(parse_form("x", ("x", "y")))


def test_top_entry_for_determinant_term_by_term(g_sl2, det):
    top = inverse_alexander_whitney(symmetrize(det), 3)
    expected = parse_form(
        "2 x2^x1 + 2 x3^x2 + 2 x1^x3 + z2^y1 + y1^z3 + y3^z2 + z3^y3 + y2^z1 + z1^y3 + z3^y2 + y3^z3",
        LABELS,
        slot_count=3,
    )
    assert top.value == expected
    # one step down the recurrence lands on an eighth of eta, scaled by 1/4
    assert d_I(sigma_one_embedding(parse_form("x^y^z", LABELS))) == d_II(top, g_sl2) * Rational(1, 4)


def test_ce_cohomology_of_sl3(g_sl3):
    assert [ce_cohomology(g_sl3, q).dim for q in range(9)] == [1, 0, 0, 1, 0, 1, 0, 0, 1]


def test_sl3_cubic_transgresses_to_nonzero_five_class(g_sl3):
    result = transgress(trace_power(g_sl3, 3), g_sl3)
    assert result.chain.check(g_sl3)
    assert result.cohomology_class.degree == 5
    assert not result.cohomology_class.is_zero()


@pytest.mark.parametrize("pivot_order", ["reverse", 7, 11])
def test_sl3_class_does_not_depend_on_pivot_order(g_sl3, pivot_order):
    cubic = trace_power(g_sl3, 3)
    assert edge_map(cubic, g_sl3, pivot_order) == edge_map(cubic, g_sl3, "lex")


def test_products_of_invariants_map_to_zero(g_sl2, det):
    result = transgress(det * det, g_sl2)
    assert result.chain.check(g_sl2)
    assert result.cohomology_class.degree == 7
    assert result.cohomology_class.is_zero()


def test_edge_map_is_additive_on_random_pairs(g_sl2, g_sl3, det, rng):
    cases = [
        (g_sl2, det, InvariantPolynomial.from_bilinear_form(killing_form(g_sl2))),
        (g_sl3, trace_power(g_sl3, 2), InvariantPolynomial.from_bilinear_form(trace_form(sl3_matrices()))),
    ]
    for g, p1, p2 in cases:
        for _ in range(3):
            a, b = (int(c) for c in rng.integers(-5, 6, size=2))
            combined = edge_map(scaled(p1, a) + scaled(p2, b), g)
            assert combined == edge_map(p1, g) * a + edge_map(p2, g) * b


def test_sl3_cubic_is_additive(g_sl3):
    cubic = trace_power(g_sl3, 3)
    assert edge_map(scaled(cubic, 3) + cubic, g_sl3) == edge_map(cubic, g_sl3) * 4
