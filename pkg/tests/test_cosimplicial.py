import pytest
from math import comb

from src.cosimplicial import (
    BigradedElement,
    TransgressionChain,
    cech_model_bicomplex,
    basic_basis,
    codegeneracy,
    coface,
    d_I,
    d_II,
    from_sigma_coordinates,
    is_basic,
    is_in_sigma,
    sigma_basis,
    sigma_element,
    sigma_vector,
    to_sigma_coordinates,
)
from src.errors import DimensionMismatch, IndexOutOfRange, NotHomogeneous
from src.exterior import Form, parse_form, wedge_all
from src.lie_core import cartan_three_form
from src.spectral_engine import page
from src.transgression import inverse_alexander_whitney, sigma_one_embedding, symmetrize

LABELS = ("x", "y", "z")


def element(text, p):
    form = parse_form(text, LABELS, slot_count=p + 1)
    return BigradedElement(p, form.degree or 0, form)


def test_bidegree_must_match_form():
    with pytest.raises(DimensionMismatch):
        BigradedElement(1, 1, parse_form("x", LABELS))
    with pytest.raises(NotHomogeneous):
        BigradedElement(1, 2, parse_form("x1", LABELS, slot_count=2))
    with pytest.raises(IndexOutOfRange):
        BigradedElement(0, -1, Form.zero(3))


def test_coface_inserts_zero_slot():
    e = element("x1^y2", 1)
    assert coface(0, e).value == parse_form("x2^y3", LABELS, slot_count=3)
    assert coface(1, e).value.terms == {(0, 7): 1}
    assert coface(2, e).value.terms == {(0, 4): 1}


def test_coface_index_range():
    with pytest.raises(IndexOutOfRange):
        coface(3, element("x1", 1))


@pytest.mark.parametrize("j", [0, 1])
def test_codegeneracy_undoes_adjacent_cofaces(j):
    e = element("x1^y2 + z3^x2", 2)
    assert codegeneracy(j, coface(j, e)) == e
    assert codegeneracy(j, coface(j + 1, e)) == e


def test_codegeneracy_sums_adjacent_slots():
    e = element("x1^x2", 1)
    assert codegeneracy(0, e).is_zero()
    assert codegeneracy(0, element("x1^y2", 1)).value == parse_form("x^y", LABELS)


def test_d_I_squares_to_zero():
    e = element("x1^y2 - 2 z1^x2", 1)
    assert not d_I(e).is_zero()
    assert d_I(d_I(e)).is_zero()


def test_d_II_squares_to_zero(g_sl2):
    e = element("x1^y2 + y1^z2", 1)
    assert d_II(d_II(e, g_sl2), g_sl2).is_zero()


def test_differentials_anticommute(g_sl2):
    e = element("x1^z2 + y1^y2", 1)
    assert (d_I(d_II(e, g_sl2)) + d_II(d_I(e), g_sl2)).is_zero()


def test_sigma_coordinates_round_trip():
    e = element("x1^y2 - x2^y3 + 3 z1^z3", 2)
    back = from_sigma_coordinates(to_sigma_coordinates(e), 2)
    assert back.value == e.value


def test_sigma_membership():
    assert is_in_sigma(element("x1 - x2", 1))
    assert not is_in_sigma(element("x1", 1))
    assert is_in_sigma(element("x1 - x2 + y2 - y3", 2))
    assert not is_in_sigma(element("x1", 0))


def test_sigma_vector_and_elements():
    basis = sigma_basis(1, 2, 3)
    assert len(basis) == comb(3, 2)
    for i, monomial in enumerate(basis):
        assert sigma_vector(sigma_element(1, monomial, 3)) == {i: 1}
    with pytest.raises(DimensionMismatch):
        sigma_vector(element("x1", 1))


def test_d_I_preserves_sigma():
    e = sigma_element(1, (0, 1), 3)
    assert is_in_sigma(d_I(e))


def test_chain_entries_live_on_antidiagonal():
    with pytest.raises(IndexOutOfRange):
        TransgressionChain(2, {(1, 1): BigradedElement.zero(1, 1, 3)})


def test_cech_model_bicomplex_dimensions(g_sl2):
    L = cech_model_bicomplex(g_sl2, 2, 3)
    expected = {(0, 0): 1, (1, 0): 1, (2, 0): 1, (2, 2): 1, (1, 3): 1, (2, 3): 4}
    assert {pos: n for pos, n in L.dims.items() if n} == expected


def test_cech_model_rows_are_acyclic_below_the_diagonal(g_sl2):
    # d_I cohomology of row q is the invariant polynomials of degree q, sitting at p = q
    first = page(cech_model_bicomplex(g_sl2, 3, 4).transpose(), 1).dims
    assert {(q, p): n for (q, p), n in first.items() if n and p < 3} == {(0, 0): 1, (2, 2): 1}


@pytest.mark.parametrize("i, j", [(0, 1), (0, 2), (1, 2), (0, 3), (2, 3)])
def test_cosimplicial_identity_for_cofaces(i, j):
    e = element("x1^y2 - z1^z2", 1)
    assert coface(j, coface(i, e)) == coface(i, coface(j - 1, e))


def test_d_I_of_embedded_cartan_form():
    one_eighth_eta = from_sigma_coordinates(parse_form("x1^y1^z1", LABELS, slot_count=2), 1)
    pair = lambda a, b: wedge_all([parse_form(f"{c}{a} - {c}{b}", LABELS, 3) for c in LABELS])
    assert d_I(one_eighth_eta).value == pair(2, 3) - pair(1, 3) + pair(1, 2)


def test_differentials_anticommute_on_random_elements(g_sl2, random_form):
    for trial in range(40):
        p, q = 1 + trial % 3, 1 + trial % 4
        e = BigradedElement(p, q, random_form(3, q, slot_count=p + 1))
        assert (d_I(d_II(e, g_sl2)) + d_II(d_I(e), g_sl2)).is_zero()


def test_sigma_is_not_closed_under_d_II(g_sl2):
    e = sigma_element(1, (0,), 3)
    assert not is_in_sigma(d_II(e, g_sl2))
    assert not is_basic(e, g_sl2)


def test_basic_elements_are_closed_under_both_differentials(g_sl2, det):
    top = inverse_alexander_whitney(symmetrize(det), 3)
    assert is_basic(top, g_sl2)
    elements = [top, sigma_one_embedding(cartan_three_form(g_sl2)), *basic_basis(2, 3, g_sl2)]
    for e in elements:
        assert is_basic(e, g_sl2)
        assert is_basic(d_I(e), g_sl2)
        assert is_basic(d_II(e, g_sl2), g_sl2)


def test_basic_basis_of_sl3_three_forms(g_sl3):
    assert len(basic_basis(1, 3, g_sl3)) == 1
    assert is_basic(sigma_one_embedding(cartan_three_form(g_sl3)), g_sl3)
