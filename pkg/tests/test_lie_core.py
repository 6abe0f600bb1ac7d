import json
from pathlib import Path

import pytest
from sympy import Rational

from src.errors import (
    AntisymmetryViolation,
    DimensionMismatch,
    IndexOutOfRange,
    JacobiViolation,
    NotHomogeneous,
    ParseError,
)
from src.lie_core import (
    InvariantPolynomial,
    cartan_three_form,
    is_invariant,
    killing_form,
    lie_algebra_from_structure_constants,
    load_lie_algebra,
    sl2_matrices,
    trace_form,
)

DATA = Path(__file__).parent.parent / "data"


def _table(n, brackets):
    table = [[[0] * n for _ in range(n)] for _ in range(n)]
    for (i, j), terms in brackets.items():
        for k, value in terms.items():
            table[i][j][k] = value
            table[j][i][k] = -value
    return table


def test_sl2_brackets(g_sl2):
    assert g_sl2.bracket(0, 1) == {1: 2}
    assert g_sl2.bracket(0, 2) == {2: -2}
    assert g_sl2.bracket(1, 2) == {0: 1}
    assert g_sl2.bracket(1, 1) == {}


def test_sl3_has_dimension_eight(g_sl3):
    assert g_sl3.dim == 8
    assert g_sl3.dual_labels[0] == "ha"


def test_antisymmetry_violation_names_triple():
    table = [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]
    with pytest.raises(AntisymmetryViolation) as excinfo:
        lie_algebra_from_structure_constants(table, ["a", "b"])
    assert excinfo.value.triple == (0, 1, 0)


def test_jacobi_violation_names_triple():
    table = _table(3, {(0, 1): {0: 1}, (1, 2): {1: 1}})
    with pytest.raises(JacobiViolation) as excinfo:
        lie_algebra_from_structure_constants(table, ["b0", "b1", "b2"])
    assert excinfo.value.triple == (0, 1, 2)


def test_table_shape_is_checked():
    with pytest.raises(DimensionMismatch):
        lie_algebra_from_structure_constants([[[0]]], ["a", "b"])


def test_dual_labels_must_be_letters():
    with pytest.raises(ParseError):
        lie_algebra_from_structure_constants([[[0]]], ["a"], ["x1"])


def test_json_algebra_matches_builtin(g_sl2):
    g = load_lie_algebra(str(DATA / "sl2.json"))
    assert g.structure_constants == g_sl2.structure_constants
    assert g.dual_labels == ("x", "y", "z")


def test_json_algebra_index_out_of_range(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text(json.dumps({"labels": ["a", "b"], "brackets": [[0, 1, [[5, 1]]]]}))
    with pytest.raises(IndexOutOfRange):
        load_lie_algebra(str(path))


def test_json_algebra_rejects_invalid_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{labels: ")
    with pytest.raises(ParseError):
        load_lie_algebra(str(path))


def test_killing_form_of_sl2(g_sl2):
    kappa = killing_form(g_sl2)
    assert kappa.matrix[0, 0] == 8
    assert kappa.matrix[1, 2] == 4
    assert kappa.matrix[1, 1] == 0
    assert kappa.is_ad_invariant(g_sl2)


def test_trace_form_is_quarter_of_killing_form_on_sl2(g_sl2):
    assert trace_form(sl2_matrices()).matrix * 4 == killing_form(g_sl2).matrix


def test_cartan_three_form_of_sl2(g_sl2):
    assert cartan_three_form(g_sl2).terms == {(0, 1, 2): 8}


def test_determinant_is_invariant(g_sl2, det):
    assert det.degree == 2
    assert det.to_poly(g_sl2)(1, 2, 3) == -7
    assert is_invariant(det, g_sl2)


def test_coordinate_function_is_not_invariant(g_sl2):
    assert not is_invariant(InvariantPolynomial.parse("x", g_sl2), g_sl2)


def test_killing_polynomial_is_minus_eight_det(g_sl2, det):
    killing = InvariantPolynomial.from_bilinear_form(killing_form(g_sl2))
    assert killing.coefficients == {(2, 0, 0): 8, (0, 1, 1): 8}
    assert (killing + det * InvariantPolynomial(0, {(0, 0, 0): 8})).is_zero()


def test_parse_rejects_mixed_degrees(g_sl2):
    with pytest.raises(NotHomogeneous):
        InvariantPolynomial.parse("x^2 + y", g_sl2)


def test_parse_rejects_unknown_symbols(g_sl2):
    with pytest.raises(ParseError):
        InvariantPolynomial.parse("x*w", g_sl2)


def test_zero_polynomial_keeps_requested_degree(g_sl2):
    zero = InvariantPolynomial.parse("0", g_sl2, degree=3)
    assert zero.is_zero()
    assert zero.degree == 3


def test_product_adds_degrees(g_sl2, det):
    square = det * det
    assert square.degree == 4
    assert square.coefficients[(4, 0, 0)] == Rational(1)


@pytest.mark.parametrize("index", ['"a"', "1.5", "null"])
def test_json_algebra_rejects_non_integer_index(tmp_path, index):
    path = tmp_path / "bad.json"
    path.write_text(f'{{"labels": ["h", "e", "f"], "brackets": [[0, {index}, [[1, 2]]]]}}')
    with pytest.raises(ParseError):
        load_lie_algebra(str(path))


def test_generators(g_sl2, g_sl3, g_abelian):
    assert g_sl2.generators == (0, 1, 2)
    assert [g_sl3.basis_labels[i] for i in g_sl3.generators] == ["h1", "h2", "e1", "e2", "f1", "f2"]
    assert g_abelian.generators == (0, 1)
