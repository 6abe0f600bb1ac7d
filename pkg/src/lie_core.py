import json
import logging
import re
import string
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from typing import TYPE_CHECKING

from sympy import ImmutableMatrix, Matrix, Rational
from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement, ring

from .errors import (
    AntisymmetryViolation,
    DimensionMismatch,
    IndexOutOfRange,
    JacobiViolation,
    NotHomogeneous,
    ParseError,
)
from .linalg import dense_vector, rank, solve, span_basis, sparse_vector
from .textio import format_polynomial, parse_polynomial

if TYPE_CHECKING:
    from .exterior import Form

logger = logging.getLogger(__name__)

_DUAL_LABEL = re.compile(r"^[A-Za-z_]+$")


def default_dual_labels(dim: int) -> tuple[str, ...]:
    if dim <= 3:
        return tuple("xyz"[:dim])
    letters = string.ascii_lowercase
    labels = list(letters) + [a + b for a, b in product(letters, repeat=2)]
    return tuple(labels[:dim])


@dataclass(frozen=True)
class LieAlgebra:
    """Finite-dimensional Lie algebra over QQ.

    ``structure_constants[i][j][k]`` is the coefficient of ``b_k`` in ``[b_i, b_j]``.
    Dual labels name the coordinate functions and are used by the form and
    polynomial text syntax, so they must be purely alphabetic.
    """

    basis_labels: tuple[str, ...]
    structure_constants: tuple[tuple[tuple[Rational, ...], ...], ...]
    dual_labels: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.dual_labels:
            object.__setattr__(self, "dual_labels", default_dual_labels(len(self.basis_labels)))
        if len(self.dual_labels) != self.dim:
            raise DimensionMismatch(f"Got {len(self.dual_labels)} dual labels for a {self.dim}-dimensional algebra.")
        if len(set(self.dual_labels)) != self.dim:
            raise ParseError(f"Dual labels must be distinct: {self.dual_labels}")
        for label in self.dual_labels:
            if not _DUAL_LABEL.match(label):
                raise ParseError(f"Dual label {label!r} must consist of letters only.")

    @property
    def dim(self) -> int:
        return len(self.basis_labels)

    def bracket(self, i: int, j: int) -> dict[int, Rational]:
        return {k: c for k, c in enumerate(self.structure_constants[i][j]) if c != 0}

    def bracket_vectors(self, u: Sequence, v: Sequence) -> list[Rational]:
        result = [Rational(0)] * self.dim
        for i, ui in enumerate(u):
            if ui == 0:
                continue
            for j, vj in enumerate(v):
                if vj == 0:
                    continue
                for k, c in self.bracket(i, j).items():
                    result[k] += ui * vj * c
        return result

    @cached_property
    def ad_matrices(self) -> tuple[ImmutableMatrix, ...]:
        """``ad(b_i)`` with column j holding the coordinates of ``[b_i, b_j]``."""
        n = self.dim
        return tuple(
            ImmutableMatrix(n, n, lambda k, j: self.structure_constants[i][j][k])
            for i in range(n)
        )

    @cached_property
    def nonzero_brackets(self) -> tuple[tuple[int, int, int, Rational], ...]:
        """(i, j, k, c) with i < j and c = c[i][j][k] != 0."""
        n = self.dim
        return tuple(
            (i, j, k, self.structure_constants[i][j][k])
            for i in range(n)
            for j in range(i + 1, n)
            for k in range(n)
            if self.structure_constants[i][j][k] != 0
        )

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """Basis indices generating the algebra under brackets, picked greedily in basis order.

        A form is invariant under the whole algebra once every generator kills it.
        """
        n = self.dim
        chosen: list[int] = []
        span: list[dict[int, Rational]] = []
        for i in range(n):
            if rank(span + [{i: Rational(1)}], n) == len(span):
                continue
            chosen.append(i)
            span = self._bracket_closure(span + [{i: Rational(1)}])
            if len(span) == n:
                break
        logger.debug(f"{self.basis_labels} is generated by {[self.basis_labels[i] for i in chosen]}")
        return tuple(chosen)

    def _bracket_closure(self, vectors: list[dict[int, Rational]]) -> list[dict[int, Rational]]:
        n = self.dim
        span = span_basis(vectors, n)
        while True:
            dense = [dense_vector(v, n) for v in span]
            brackets = [sparse_vector(self.bracket_vectors(u, v)) for u, v in combinations(dense, 2)]
            grown = span_basis(span + brackets, n)
            if len(grown) == len(span):
                return span
            span = grown

    @cached_property
    def polynomial_ring(self):
        """Polynomial functions on the algebra in the dual coordinates."""
        poly_ring, *_ = ring(",".join(self.dual_labels), QQ)
        return poly_ring


def lie_algebra_from_structure_constants(
    table: Sequence[Sequence[Sequence[object]]],
    labels: Sequence[str],
    dual_labels: Sequence[str] | None = None,
) -> LieAlgebra:
    """Validate a structure-constant table and wrap it as a LieAlgebra."""

    n = len(labels)
    if n == 0:
        raise DimensionMismatch("A Lie algebra needs at least one basis element.")
    if len(table) != n or any(len(row) != n for row in table) or any(len(col) != n for row in table for col in row):
        raise DimensionMismatch(f"Structure constants must form a {n}x{n}x{n} table.")

    c = tuple(tuple(tuple(Rational(v) for v in col) for col in row) for row in table)

    for i, j, k in product(range(n), repeat=3):
        if c[i][j][k] + c[j][i][k] != 0:
            raise AntisymmetryViolation(
                f"Antisymmetry fails for [{labels[i]}, {labels[j]}] at {labels[k]}: "
                f"{c[i][j][k]} vs {c[j][i][k]}",
                triple=(i, j, k),
            )

    # the Jacobiator is alternating once antisymmetry holds, so increasing triples suffice
    for i, j, k in combinations(range(n), 3):
        for out in range(n):
            total = sum(
                c[j][k][m] * c[i][m][out] + c[k][i][m] * c[j][m][out] + c[i][j][m] * c[k][m][out]
                for m in range(n)
            )
            if total != 0:
                raise JacobiViolation(
                    f"Jacobi identity fails for ({labels[i]}, {labels[j]}, {labels[k]}) "
                    f"in the {labels[out]} coordinate.",
                    triple=(i, j, k),
                )

    algebra = LieAlgebra(tuple(labels), c, tuple(dual_labels) if dual_labels else ())
    logger.debug(f"Validated Lie algebra with basis {algebra.basis_labels}")
    return algebra


def lie_algebra_from_matrices(
    matrices: Sequence[Matrix],
    labels: Sequence[str],
    dual_labels: Sequence[str] | None = None,
) -> LieAlgebra:
    """Structure constants of the span of ``matrices`` under the commutator."""

    flat = [sparse_vector(list(Matrix(m))) for m in matrices]
    size = Matrix(matrices[0]).rows * Matrix(matrices[0]).cols
    n = len(matrices)
    table = [[[Rational(0)] * n for _ in range(n)] for _ in range(n)]

    for i, j in product(range(n), repeat=2):
        a, b = Matrix(matrices[i]), Matrix(matrices[j])
        commutator = sparse_vector(list(a * b - b * a))
        coordinates = solve(flat, commutator, size)
        if coordinates is None:
            raise ValueError(f"[{labels[i]}, {labels[j]}] leaves the span of the given matrices.")
        for k, value in coordinates.items():
            table[i][j][k] = value

    return lie_algebra_from_structure_constants(table, labels, dual_labels)


def sl2_matrices() -> list[Matrix]:
    h = Matrix([[1, 0], [0, -1]])
    e = Matrix([[0, 1], [0, 0]])
    f = Matrix([[0, 0], [1, 0]])
    return [h, e, f]


def sl2() -> LieAlgebra:
    return lie_algebra_from_matrices(sl2_matrices(), ["h", "e", "f"], ["x", "y", "z"])


def _unit(i: int, j: int, n: int = 3) -> Matrix:
    m = Matrix.zeros(n, n)
    m[i, j] = 1
    return m


def sl3_matrices() -> list[Matrix]:
    return [
        _unit(0, 0) - _unit(1, 1),
        _unit(1, 1) - _unit(2, 2),
        _unit(0, 1),
        _unit(1, 2),
        _unit(0, 2),
        _unit(1, 0),
        _unit(2, 1),
        _unit(2, 0),
    ]


def sl3() -> LieAlgebra:
    return lie_algebra_from_matrices(
        sl3_matrices(),
        ["h1", "h2", "e1", "e2", "e3", "f1", "f2", "f3"],
        ["ha", "hb", "ea", "eb", "ec", "fa", "fb", "fc"],
    )


def abelian(n: int) -> LieAlgebra:
    table = [[[0] * n for _ in range(n)] for _ in range(n)]
    return lie_algebra_from_structure_constants(table, [f"b{i + 1}" for i in range(n)])


BUILTIN_ALGEBRAS = {"sl2": sl2, "sl3": sl3}


def _basis_index(value) -> int:
    index = int(value)
    if index != value:
        raise ValueError(f"{value!r} is not an integer basis index")
    return index


def load_lie_algebra(path: str) -> LieAlgebra:
    """Read the JSON algebra format; omitted brackets are zero, the rest is completed antisymmetrically."""

    try:
        with open(path, "r") as file:
            spec = json.load(file)
    except json.JSONDecodeError as e:
        raise ParseError(f"Algebra file {path} is not valid JSON: {e}") from e

    try:
        labels = list(spec["labels"])
        brackets = spec.get("brackets", [])
    except (KeyError, TypeError) as e:
        raise ParseError(f"Algebra file {path} needs a 'labels' list: {e}") from e

    n = len(labels)
    table = [[[Rational(0)] * n for _ in range(n)] for _ in range(n)]
    given: set[tuple[int, int]] = set()

    for entry in brackets:
        try:
            i, j, terms = entry
            i, j = _basis_index(i), _basis_index(j)
            parsed = [(_basis_index(k), Rational(str(v))) for k, v in terms]
        except (TypeError, ValueError) as e:
            raise ParseError(f"Malformed bracket entry {entry!r} in {path}: {e}") from e
        for idx in [i, j] + [k for k, _ in parsed]:
            if not 0 <= idx < n:
                raise IndexOutOfRange(f"Basis index {idx} out of range 0..{n - 1} in {path}.")
        given.add((i, j))
        for k, value in parsed:
            table[i][j][k] = value
            if (j, i) not in given and i != j:
                table[j][i][k] = -value

    return lie_algebra_from_structure_constants(table, labels, spec.get("dual_labels"))


@dataclass(frozen=True)
class SymBilinearForm:
    matrix: ImmutableMatrix

    def __post_init__(self):
        object.__setattr__(self, "matrix", ImmutableMatrix(self.matrix))
        if self.matrix != self.matrix.T:
            raise ValueError("Bilinear form matrix is not symmetric.")

    def __call__(self, u: Sequence, v: Sequence) -> Rational:
        return Rational((Matrix([list(u)]) * self.matrix * Matrix(list(v)))[0, 0])

    def is_ad_invariant(self, g: LieAlgebra) -> bool:
        """kappa([u, w], v) + kappa(w, [u, v]) = 0 on all basis triples."""
        n = g.dim
        basis = [[1 if k == i else 0 for k in range(n)] for i in range(n)]
        for u, w, v in product(range(n), repeat=3):
            lhs = self(g.bracket_vectors(basis[u], basis[w]), basis[v])
            rhs = self(basis[w], g.bracket_vectors(basis[u], basis[v]))
            if lhs + rhs != 0:
                return False
        return True


def killing_form(g: LieAlgebra) -> SymBilinearForm:
    ad = g.ad_matrices
    n = g.dim
    return SymBilinearForm(ImmutableMatrix(n, n, lambda i, j: (ad[i] * ad[j]).trace()))


def trace_form(matrices: Sequence[Matrix]) -> SymBilinearForm:
    """Trace form tr(X_i X_j) of a matrix representation."""
    n = len(matrices)
    return SymBilinearForm(ImmutableMatrix(n, n, lambda i, j: (Matrix(matrices[i]) * Matrix(matrices[j])).trace()))


def cartan_three_form(g: LieAlgebra) -> "Form":
    """eta(u, v, w) = kappa([u, v], w), stored with coefficient kappa([b_i, b_j], b_k) on x_i^x_j^x_k."""
    from .exterior import Form

    kappa = killing_form(g).matrix
    n = g.dim
    terms = {}
    for i in range(n):
        for j in range(i + 1, n):
            bracket = g.bracket(i, j)
            for k in range(j + 1, n):
                value = sum(c * kappa[m, k] for m, c in bracket.items())
                if value != 0:
                    terms[(i, j, k)] = value
    return Form(n, 1, terms)


@dataclass(frozen=True)
class InvariantPolynomial:
    """Homogeneous polynomial on the algebra in dual coordinates.

    ``coefficients`` maps exponent vectors to rationals. The zero polynomial keeps
    the degree it was created with.
    """

    degree: int
    coefficients: Mapping[tuple[int, ...], Rational] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {tuple(e): Rational(c) for e, c in self.coefficients.items() if c != 0}
        for exponents in cleaned:
            if sum(exponents) != self.degree:
                raise NotHomogeneous(f"Monomial {exponents} has degree {sum(exponents)}, expected {self.degree}.")
        object.__setattr__(self, "coefficients", cleaned)

    @classmethod
    def from_poly(cls, poly: PolyElement, degree: int | None = None) -> "InvariantPolynomial":
        terms = dict(poly.terms())
        degrees = {sum(e) for e in terms}
        if len(degrees) > 1:
            raise NotHomogeneous(f"Polynomial {format_polynomial(poly)} mixes degrees {sorted(degrees)}.")
        if degrees:
            found = degrees.pop()
            if degree is not None and degree != found:
                raise NotHomogeneous(f"Polynomial {format_polynomial(poly)} has degree {found}, expected {degree}.")
            degree = found
        elif degree is None:
            degree = 2
        return cls(degree, {e: QQ.to_sympy(c) for e, c in terms.items()})

    @classmethod
    def parse(cls, text: str, g: LieAlgebra, degree: int | None = None) -> "InvariantPolynomial":
        return cls.from_poly(parse_polynomial(text, g.polynomial_ring), degree)

    @classmethod
    def from_bilinear_form(cls, form: SymBilinearForm) -> "InvariantPolynomial":
        """p(v) = B(v, v)."""
        n = form.matrix.rows
        coefficients: dict[tuple[int, ...], Rational] = {}
        for i, j in product(range(n), repeat=2):
            exponents = [0] * n
            exponents[i] += 1
            exponents[j] += 1
            key = tuple(exponents)
            coefficients[key] = coefficients.get(key, 0) + form.matrix[i, j]
        return cls(2, coefficients)

    def to_poly(self, g: LieAlgebra) -> PolyElement:
        poly_ring = g.polynomial_ring
        if any(len(e) != poly_ring.ngens for e in self.coefficients):
            raise DimensionMismatch("Polynomial and algebra have different numbers of coordinates.")
        return poly_ring.from_dict({e: QQ.from_sympy(c) for e, c in self.coefficients.items()})

    def is_zero(self) -> bool:
        return not self.coefficients

    def __add__(self, other: "InvariantPolynomial") -> "InvariantPolynomial":
        if self.degree != other.degree:
            raise NotHomogeneous(f"Cannot add polynomials of degrees {self.degree} and {other.degree}.")
        total = dict(self.coefficients)
        for e, c in other.coefficients.items():
            total[e] = total.get(e, 0) + c
        return InvariantPolynomial(self.degree, total)

    def __mul__(self, other: "InvariantPolynomial") -> "InvariantPolynomial":
        result: dict[tuple[int, ...], Rational] = {}
        for e1, c1 in self.coefficients.items():
            for e2, c2 in other.coefficients.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                result[key] = result.get(key, 0) + c1 * c2
        return InvariantPolynomial(self.degree + other.degree, result)

    def format(self, g: LieAlgebra) -> str:
        return format_polynomial(self.to_poly(g))


def coadjoint_derivative(poly: PolyElement, g: LieAlgebra, i: int) -> PolyElement:
    """Derivation of b_i on functions: sum_k dp/dxi_k * xi_k([b_i, v])."""
    poly_ring = g.polynomial_ring
    gens = poly_ring.gens
    result = poly_ring.zero
    for k in range(g.dim):
        partial = poly.diff(gens[k])
        if not partial:
            continue
        linear = poly_ring.zero
        for j in range(g.dim):
            c = g.structure_constants[i][j][k]
            if c != 0:
                linear += QQ.from_sympy(c) * gens[j]
        result += partial * linear
    return result


def is_invariant(p: InvariantPolynomial, g: LieAlgebra) -> bool:
    if p.is_zero():
        return True
    poly = p.to_poly(g)
    for i in range(g.dim):
        if coadjoint_derivative(poly, g, i):
            logger.debug(f"Polynomial {p.format(g)} is moved by {g.basis_labels[i]}")
            return False
    return True
