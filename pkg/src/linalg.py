"""Exact linear algebra over QQ.

Vectors are sparse ``{index: Rational}`` dicts and matrices are handed around as
lists of such column vectors, which is the natural shape for the systems built
from wedge monomials. Row reduction itself is delegated to sympy's
``DomainMatrix`` in sparse format.
"""

import logging
from collections.abc import Mapping, Sequence

from sympy import Matrix, Rational
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from .errors import NotInSubspace

logger = logging.getLogger(__name__)

SparseVector = dict[int, Rational]


def sparse_vector(values: Sequence) -> SparseVector:
    return {i: Rational(v) for i, v in enumerate(values) if v != 0}


def dense_vector(vector: Mapping[int, object], size: int) -> list[Rational]:
    return [Rational(vector.get(i, 0)) for i in range(size)]


def add_scaled(target: SparseVector, vector: Mapping[int, object], factor=1) -> SparseVector:
    """In-place ``target += factor * vector``; zero entries are dropped."""
    for i, value in vector.items():
        updated = target.get(i, 0) + factor * value
        if updated == 0:
            target.pop(i, None)
        else:
            target[i] = Rational(updated)
    return target


def combine(vectors: Sequence[Mapping[int, object]], coefficients: Mapping[int, object]) -> SparseVector:
    result: SparseVector = {}
    for j, c in coefficients.items():
        if c:
            add_scaled(result, vectors[j], c)
    return result


def matrix_columns(matrix: Matrix) -> list[SparseVector]:
    return [
        {i: Rational(matrix[i, j]) for i in range(matrix.rows) if matrix[i, j] != 0}
        for j in range(matrix.cols)
    ]


def matrix_from_columns(columns: Sequence[Mapping[int, object]], nrows: int) -> Matrix:
    matrix = Matrix.zeros(nrows, len(columns))
    for j, column in enumerate(columns):
        for i, value in column.items():
            matrix[i, j] = value
    return matrix


def apply(matrix: Matrix, vector: Mapping[int, object]) -> SparseVector:
    result: SparseVector = {}
    for j, value in vector.items():
        if value:
            for i in range(matrix.rows):
                entry = matrix[i, j]
                if entry != 0:
                    add_scaled(result, {i: entry}, value)
    return result


def _domain_matrix(columns: Sequence[Mapping[int, object]], nrows: int) -> DomainMatrix:
    rows: dict[int, dict[int, object]] = {}
    for j, column in enumerate(columns):
        for i, value in column.items():
            if value:
                rows.setdefault(i, {})[j] = QQ.convert(value)
    return DomainMatrix(rows, (nrows, len(columns)), QQ)


def _rref(columns: Sequence[Mapping[int, object]], nrows: int):
    if nrows == 0 or not columns:
        return None, ()
    reduced, pivots = _domain_matrix(columns, nrows).rref()
    return reduced, tuple(pivots)


def independent_columns(columns: Sequence[Mapping[int, object]], nrows: int) -> list[int]:
    """Indices of the leftmost maximal independent subset of ``columns``."""
    return list(_rref(columns, nrows)[1])


def rank(columns: Sequence[Mapping[int, object]], nrows: int) -> int:
    return len(_rref(columns, nrows)[1])


def span_basis(vectors: Sequence[Mapping[int, object]], nrows: int) -> list[SparseVector]:
    vectors = [dict(v) for v in vectors if v]
    return [vectors[j] for j in independent_columns(vectors, nrows)]


def kernel(columns: Sequence[Mapping[int, object]], nrows: int) -> list[SparseVector]:
    """Basis of ``{c : sum_j c_j columns[j] = 0}``, one vector per free column."""
    ncols = len(columns)
    if ncols == 0:
        return []
    if nrows == 0:
        return [{j: Rational(1)} for j in range(ncols)]

    reduced, pivots = _rref(columns, nrows)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vector: SparseVector = {free: Rational(1)}
        for row, pivot in enumerate(pivots):
            value = reduced.getitem_sympy(row, free)
            if value != 0:
                vector[pivot] = -value
        basis.append(vector)
    return basis


def solve(
    columns: Sequence[Mapping[int, object]],
    rhs: Mapping[int, object],
    nrows: int,
    column_order: Sequence[int] | None = None,
) -> SparseVector | None:
    """Particular solution of ``sum_j x_j columns[j] = rhs`` or None.

    Free variables are set to zero; ``column_order`` decides which columns are
    tried first as pivots, which is what makes the particular solution depend on
    the pivot order.
    """
    order = list(column_order) if column_order is not None else list(range(len(columns)))
    if sorted(order) != list(range(len(columns))):
        raise ValueError(f"column_order must be a permutation of {len(columns)} columns")

    if not any(rhs.values()):
        return {}
    if nrows == 0:
        return None

    permuted = [columns[j] for j in order] + [rhs]
    reduced, pivots = _rref(permuted, nrows)
    last = len(order)
    if last in pivots:
        return None

    solution: SparseVector = {}
    for row, pivot in enumerate(pivots):
        value = reduced.getitem_sympy(row, last)
        if value != 0:
            solution[order[pivot]] = value
    return solution


def preimage(images: Sequence[Mapping[int, object]], subspace: Sequence[Mapping[int, object]], nrows: int) -> list[SparseVector]:
    """Basis of ``{c : sum_j c_j images[j] in span(subspace)}`` in domain coordinates."""
    domain_dim = len(images)
    negated = [{i: -v for i, v in s.items()} for s in subspace]
    solutions = kernel(list(images) + negated, nrows)
    parts = [{j: v for j, v in s.items() if j < domain_dim} for s in solutions]
    return span_basis(parts, domain_dim)


def intersection(first: Sequence[Mapping[int, object]], second: Sequence[Mapping[int, object]], nrows: int) -> list[SparseVector]:
    """Basis of span(first) intersected with span(second)."""
    first = [dict(v) for v in first if v]
    return span_basis([combine(first, c) for c in preimage(first, second, nrows)], nrows)


def reduced_rows(vectors: Sequence[Mapping[int, object]], size: int) -> list[tuple[int, SparseVector]]:
    """Reduced row echelon basis of span(vectors) as (pivot, row) pairs."""
    vectors = [v for v in vectors if v]
    if not vectors:
        return []
    # the vectors become the rows, so transpose into column form first
    columns: list[SparseVector] = [{} for _ in range(size)]
    for r, vector in enumerate(vectors):
        for i, value in vector.items():
            columns[i][r] = value
    reduced, pivots = _rref(columns, len(vectors))
    rows = []
    for r, pivot in enumerate(pivots):
        row = {}
        for j in range(size):
            value = reduced.getitem_sympy(r, j)
            if value != 0:
                row[j] = value
        rows.append((pivot, row))
    return rows


class Subquotient:
    """span(numerator) / span(relations) inside ``QQ^ambient_dim``.

    ``representatives`` is a basis of a complement of the relations inside the
    numerator, chosen greedily among the numerator vectors; ``coordinates``
    expresses an element of the numerator in that basis modulo relations.
    """

    def __init__(
        self,
        ambient_dim: int,
        numerator: Sequence[Mapping[int, object]],
        relations: Sequence[Mapping[int, object]] = (),
        check: bool = True,
    ):
        self.ambient_dim = ambient_dim
        numerator = [dict(v) for v in numerator if v]
        self.relations = span_basis(relations, ambient_dim)

        combined = self.relations + numerator
        pivots = independent_columns(combined, ambient_dim)
        offset = len(self.relations)
        self.representatives = [combined[j] for j in pivots if j >= offset]

        if check and len(pivots) != rank(numerator, ambient_dim):
            raise NotInSubspace("Relations are not contained in the span of the numerator.")

        self._reduced_relations = None

    @property
    def dim(self) -> int:
        return len(self.representatives)

    @property
    def numerator(self) -> list[SparseVector]:
        """Basis of the numerator: relations first, then representatives."""
        return self.relations + self.representatives

    def contains(self, vector: Mapping[int, object]) -> bool:
        return solve(self.numerator, vector, self.ambient_dim) is not None

    def coordinates(self, vector: Mapping[int, object]) -> tuple[Rational, ...]:
        solution = solve(self.numerator, vector, self.ambient_dim)
        if solution is None:
            raise NotInSubspace("Vector does not lie in the numerator of the subquotient.")
        offset = len(self.relations)
        return tuple(Rational(solution.get(offset + i, 0)) for i in range(self.dim))

    def is_zero(self, vector: Mapping[int, object]) -> bool:
        return not any(self.coordinates(vector))

    def lift(self, coordinates: Sequence[object]) -> SparseVector:
        return combine(self.representatives, dict(enumerate(coordinates)))

    def normal_form(self, vector: Mapping[int, object]) -> SparseVector:
        """Canonical representative: zero on every pivot column of the reduced relations."""
        if self._reduced_relations is None:
            self._reduced_relations = self._reduce_relations()
        result = dict(vector)
        for pivot, row in self._reduced_relations:
            if result.get(pivot):
                add_scaled(result, row, -result[pivot])
        return result

    def _reduce_relations(self) -> list[tuple[int, SparseVector]]:
        return reduced_rows(self.relations, self.ambient_dim)


def kernel_mod_image(
    outgoing: Sequence[Mapping[int, object]],
    outgoing_rows: int,
    incoming: Sequence[Mapping[int, object]],
    dim: int,
) -> Subquotient:
    """ker(outgoing) / im(incoming) for a space of dimension ``dim``.

    ``outgoing`` are the images of the ``dim`` basis vectors, ``incoming`` the
    images of the previous space's basis vectors.
    """
    cycles = kernel(outgoing, outgoing_rows) if outgoing else [{j: Rational(1)} for j in range(dim)]
    return Subquotient(dim, cycles, incoming)
