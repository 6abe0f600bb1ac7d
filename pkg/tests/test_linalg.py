import pytest
from sympy import Matrix, Rational

from src.errors import NotInSubspace
from src.linalg import (
    Subquotient,
    apply,
    intersection,
    kernel,
    kernel_mod_image,
    matrix_columns,
    preimage,
    rank,
    reduced_rows,
    solve,
    span_basis,
)


def test_kernel_of_rank_one_matrix():
    columns = matrix_columns(Matrix([[1, 2, 3], [2, 4, 6]]))
    basis = kernel(columns, 2)
    assert len(basis) == 2
    for vector in basis:
        assert apply(Matrix([[1, 2, 3], [2, 4, 6]]), vector) == {}


def test_kernel_with_no_rows_is_everything():
    assert kernel([{}, {}], 0) == [{0: 1}, {1: 1}]


def test_solve_returns_exact_rationals():
    columns = [{0: 2}, {1: 3}]
    assert solve(columns, {0: 1, 1: 1}, 2) == {0: Rational(1, 2), 1: Rational(1, 3)}


def test_solve_reports_inconsistent_system():
    assert solve([{0: 1}], {1: 1}, 2) is None


def test_solve_zero_rhs_is_empty_solution():
    assert solve([{0: 1}], {}, 1) == {}


def test_pivot_order_changes_particular_solution():
    columns = [{0: 1}, {0: 1}]
    assert solve(columns, {0: 1}, 1) == {0: 1}
    assert solve(columns, {0: 1}, 1, column_order=[1, 0]) == {1: 1}


def test_column_order_must_be_permutation():
    with pytest.raises(ValueError):
        solve([{0: 1}, {0: 2}], {0: 1}, 1, column_order=[0, 0])


def test_span_basis_and_rank():
    vectors = [{0: 1, 1: 1}, {0: 2, 1: 2}, {2: 1}]
    assert rank(vectors, 3) == 2
    assert span_basis(vectors, 3) == [{0: 1, 1: 1}, {2: 1}]


def test_preimage_of_subspace():
    images = [{0: 1}, {1: 1}]
    assert preimage(images, [{0: 1}], 2) == [{0: 1}]


def test_intersection_of_planes():
    first = [{0: 1}, {1: 1}]
    second = [{1: 1}, {2: 1}]
    basis = intersection(first, second, 3)
    assert len(basis) == 1
    assert set(basis[0]) == {1}


def test_reduced_rows_normalizes_pivots():
    rows = reduced_rows([{0: 2, 1: 4}, {0: 1, 2: 1}], 3)
    assert [pivot for pivot, _ in rows] == [0, 1]
    assert rows[0][1] == {0: 1, 2: 1}
    assert rows[1][1] == {1: 1, 2: Rational(-1, 2)}


def test_subquotient_coordinates_ignore_relations():
    quotient = Subquotient(2, [{0: 1}, {1: 1}], [{0: 1}])
    assert quotient.dim == 1
    assert quotient.coordinates({0: 5, 1: 3}) == (3,)
    assert quotient.is_zero({0: 7})


def test_subquotient_rejects_vector_outside_numerator():
    quotient = Subquotient(2, [{0: 1}])
    with pytest.raises(NotInSubspace):
        quotient.coordinates({1: 1})


def test_subquotient_rejects_relations_outside_numerator():
    with pytest.raises(NotInSubspace):
        Subquotient(2, [{0: 1}], [{1: 1}])


def test_normal_form_is_canonical_modulo_relations():
    quotient = Subquotient(3, [{0: 1}, {1: 1}, {2: 1}], [{0: 1, 1: 1}])
    first = quotient.normal_form({0: 1, 2: 1})
    second = quotient.normal_form({1: -1, 2: 1})
    assert first == second


def test_kernel_mod_image_of_acyclic_pair():
    d0 = matrix_columns(Matrix([[1]]))
    assert kernel_mod_image(d0, 1, [], 1).dim == 0
    assert kernel_mod_image([], 0, d0, 1).dim == 0
