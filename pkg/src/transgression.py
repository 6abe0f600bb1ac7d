"""Edge map from invariant polynomials to Chevalley-Eilenberg cohomology.

Pipeline: symmetrize the polynomial into a tensor, push it into bidegree (d, d)
with the inverse Alexander-Whitney map, solve d_I a^{p-1,q+1} = d_II a^{p,q}
down the antidiagonal, and read the (1, 2d-1) entry back in Lambda(g^v).
"""

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import factorial

import numpy as np
from sympy import Rational
from sympy.polys.rings import PolyElement
from sympy.utilities.iterables import multiset_permutations

from .cosimplicial import (
    BigradedElement,
    TransgressionChain,
    basic_basis,
    coface,
    d_I,
    d_II,
    is_basic,
    to_sigma_coordinates,
)
from .errors import (
    DimensionMismatch,
    NotClosed,
    NotHomogeneous,
    NotInvariant,
    UnsolvableSystem,
)
from .exterior import Form, ce_differential, substitute, wedge_all
from .lie_core import InvariantPolynomial, LieAlgebra, cartan_three_form, is_invariant
from .linalg import Subquotient, kernel, solve

logger = logging.getLogger(__name__)

PIVOT_ORDERS = ("lex", "reverse")


@dataclass(frozen=True)
class TensorRep:
    """Symmetric tensor in the d-fold tensor power of g^v, keyed by index tuples."""

    d: int
    terms: Mapping[tuple[int, ...], Rational] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {}
        for indices, value in self.terms.items():
            if len(indices) != self.d:
                raise NotHomogeneous(f"Tensor index {indices} has length {len(indices)}, expected {self.d}.")
            if value != 0:
                cleaned[tuple(indices)] = Rational(value)
        for indices, value in cleaned.items():
            for permuted in multiset_permutations(list(indices)):
                if cleaned.get(tuple(permuted), 0) != value:
                    raise ValueError(f"Tensor is not symmetric at {indices}.")
        object.__setattr__(self, "terms", cleaned)

    def is_zero(self) -> bool:
        return not self.terms

    def diagonal(self, vector: Sequence) -> Rational:
        """t(v, ..., v); recovers the polynomial value."""
        total = Rational(0)
        for indices, value in self.terms.items():
            product = value
            for i in indices:
                product *= vector[i]
            total += product
        return total


def symmetrize(p: InvariantPolynomial | PolyElement) -> TensorRep:
    if isinstance(p, PolyElement):
        p = InvariantPolynomial.from_poly(p)
    terms: dict[tuple[int, ...], Rational] = {}
    for exponents, coefficient in p.coefficients.items():
        multiset = [i for i, e in enumerate(exponents) for _ in range(e)]
        orderings = list(multiset_permutations(multiset))
        share = coefficient / len(orderings)
        for ordering in orderings:
            key = tuple(ordering)
            terms[key] = terms.get(key, 0) + share
    return TensorRep(p.degree, terms)


def sigma_one_embedding(form: Form) -> BigradedElement:
    """Identify g^v with Sigma^1 by xi -> (xi, -xi), applied to every generator."""
    if form.slot_count != 1:
        raise DimensionMismatch("Only forms on a single copy of g^v can be embedded into Sigma^1.")
    dim = form.space_dim
    value = substitute(form, lambda g: {g: 1, g + dim: -1}, 2, dim)
    return BigradedElement(1, form.degree or 0, value)


def sigma_one_restriction(e: BigradedElement) -> Form:
    """Inverse of sigma_one_embedding on Lambda(Sigma^1)."""
    if e.p != 1:
        raise DimensionMismatch(f"Expected an element of bidegree (1, q), got p={e.p}.")
    dim = e.space_dim
    coordinates = to_sigma_coordinates(e)
    if any(monomial and monomial[-1] >= dim for monomial in coordinates.terms):
        raise DimensionMismatch("Element does not lie in Lambda(Sigma^1).")
    return Form(dim, 1, coordinates.terms)


def inverse_alexander_whitney(t: TensorRep, space_dim: int) -> BigradedElement:
    """Cup product of the embedded tensor factors, scaled by d!.

    Factor k (1-based) is E(xi) = xi_0 - xi_1 pushed to C^d by k - 1 cofaces at the
    front and d - k cofaces at the back.
    """
    d = t.d
    result = BigradedElement.zero(d, d, space_dim)
    factors: dict[tuple[int, int], BigradedElement] = {}

    def factor(basis: int, position: int) -> BigradedElement:
        if (basis, position) not in factors:
            element = sigma_one_embedding(Form.generator(basis, 0, space_dim))
            for _ in range(position - 1):
                element = coface(0, element)
            for _ in range(d - position):
                element = coface(element.p + 1, element)
            factors[(basis, position)] = element
        return factors[(basis, position)]

    scale = factorial(d)
    for indices, value in t.terms.items():
        pieces = [factor(i, k + 1).value for k, i in enumerate(indices)]
        result = result + BigradedElement(d, d, wedge_all(pieces) * (scale * value))
    return result


def _column_order(pivot_order, size: int) -> list[int]:
    if pivot_order == "lex":
        return list(range(size))
    if pivot_order == "reverse":
        return list(range(size - 1, -1, -1))
    try:
        seed = int(pivot_order)
    except (TypeError, ValueError):
        raise ValueError(f"Unknown pivot order {pivot_order!r}. Choose one of {PIVOT_ORDERS} or an integer seed.")
    return [int(j) for j in np.random.default_rng(seed).permutation(size)]


def _solve_step(rhs: BigradedElement, g: LieAlgebra, pivot_order) -> BigradedElement:
    """Find an invariant a in Lambda^q(Sigma^{p-1}) with d_I a = rhs, where rhs has bidegree (p, q)."""
    p, q = rhs.p, rhs.q
    if rhs.is_zero():
        return BigradedElement.zero(p - 1, q, g.dim)

    unknowns = basic_basis(p - 1, q, g)
    rows: dict[tuple[int, ...], int] = {}

    def vector(form: Form) -> dict[int, Rational]:
        return {rows.setdefault(m, len(rows)): v for m, v in form.terms.items()}

    columns = [vector(d_I(u).value) for u in unknowns]
    target = vector(rhs.value)
    logger.debug(f"Solving d_I system at ({p - 1}, {q}): {len(rows)} equations, {len(columns)} invariant unknowns")

    solution = solve(columns, target, len(rows), _column_order(pivot_order, len(columns))) if columns else None
    if solution is None:
        raise UnsolvableSystem(
            f"d_I a = d_II a' has no solution in bidegree ({p - 1}, {q}); "
            f"check the sign conventions or the invariance of the input."
        )

    result = BigradedElement.zero(p - 1, q, g.dim)
    for j, value in solution.items():
        result = result + unknowns[j] * value
    return result


def solve_recurrence(top: BigradedElement, g: LieAlgebra, pivot_order="lex") -> TransgressionChain:
    d = top.p
    if top.q != d:
        raise DimensionMismatch(f"Top entry must sit in bidegree (d, d), got ({top.p}, {top.q}).")
    if not d_I(top).is_zero():
        raise UnsolvableSystem("Top entry is not d_I-closed.")
    if not is_basic(top, g):
        raise UnsolvableSystem("Top entry is not an invariant element of Lambda(Sigma^d).")

    entries = {(d, d): top}
    current = top
    for p in range(d, 1, -1):
        current = _solve_step(d_II(current, g), g, pivot_order)
        entries[(p - 1, 2 * d - p + 1)] = current
    return TransgressionChain(d, entries)


@dataclass(frozen=True)
class CECohomology:
    """H^q of Lambda(g^v) as a subquotient on the monomial basis of Lambda^q."""

    degree: int
    monomials: tuple[tuple[int, ...], ...]
    quotient: Subquotient

    @property
    def dim(self) -> int:
        return self.quotient.dim

    def vector(self, form: Form) -> dict[int, Rational]:
        index = {m: i for i, m in enumerate(self.monomials)}
        return {index[m]: v for m, v in form.terms.items()}

    def to_form(self, vector: Mapping[int, object], space_dim: int) -> Form:
        return Form(space_dim, 1, {self.monomials[i]: v for i, v in vector.items()})

    def basis(self, space_dim: int) -> list[Form]:
        return [self.to_form(v, space_dim) for v in self.quotient.representatives]


def _delta_columns(g: LieAlgebra, q: int) -> tuple[list[tuple[int, ...]], list[dict[int, Rational]], int]:
    n = g.dim
    sources = list(combinations(range(n), q))
    targets = {m: i for i, m in enumerate(combinations(range(n), q + 1))}
    columns = []
    for monomial in sources:
        image = ce_differential(Form(n, 1, {monomial: 1}), g)
        columns.append({targets[m]: v for m, v in image.terms.items()})
    return sources, columns, len(targets)


@lru_cache(maxsize=64)
def ce_cohomology(g: LieAlgebra, q: int) -> CECohomology:
    """ker(delta_q) / im(delta_{q-1}) by exact row reduction."""
    if q < 0 or q > g.dim:
        return CECohomology(q, (), Subquotient(0, []))
    monomials, outgoing, rows = _delta_columns(g, q)
    cycles = kernel(outgoing, rows) if rows else [{j: Rational(1)} for j in range(len(monomials))]
    incoming = _delta_columns(g, q - 1)[1] if q > 0 else []
    quotient = Subquotient(len(monomials), cycles, incoming)
    logger.debug(f"H^{q} of {g.basis_labels}: {len(cycles)} cocycles, dimension {quotient.dim}")
    return CECohomology(q, tuple(monomials), quotient)


class CohomologyClass:
    """Class of a delta-closed form in H^q(Lambda g^v)."""

    def __init__(self, representative: Form, g: LieAlgebra, degree: int | None = None):
        if representative.slot_count != 1 or representative.space_dim != g.dim:
            raise DimensionMismatch("Representative must be a form on g^v.")
        found = representative.degree
        if degree is None:
            degree = found if found is not None else 0
        elif found is not None and found != degree:
            raise NotHomogeneous(f"Representative has degree {found}, expected {degree}.")
        if not ce_differential(representative, g).is_zero():
            raise NotClosed(f"Representative of degree {degree} is not delta-closed.")
        self.degree = degree
        self.representative = representative
        self.g = g

    @property
    def cohomology(self) -> CECohomology:
        return ce_cohomology(self.g, self.degree)

    def coordinates(self) -> tuple[Rational, ...]:
        return self.cohomology.quotient.coordinates(self.cohomology.vector(self.representative))

    def is_zero(self) -> bool:
        return not any(self.coordinates())

    def __add__(self, other: "CohomologyClass") -> "CohomologyClass":
        return CohomologyClass(self.representative + other.representative, self.g, self.degree)

    def __sub__(self, other: "CohomologyClass") -> "CohomologyClass":
        return CohomologyClass(self.representative - other.representative, self.g, self.degree)

    def __mul__(self, scalar) -> "CohomologyClass":
        return CohomologyClass(self.representative * scalar, self.g, self.degree)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, CohomologyClass):
            return NotImplemented
        return self.degree == other.degree and (self - other).is_zero()

    __hash__ = None

    def __repr__(self) -> str:
        return f"CohomologyClass(degree={self.degree}, representative={self.representative})"


def classes_proportional(c1: CohomologyClass, c2: CohomologyClass) -> Rational | None:
    """t with [c1] = t [c2], or None. Returns 0 when c1 is zero."""
    if c1.degree != c2.degree:
        logger.debug(f"Classes of degrees {c1.degree} and {c2.degree} are never proportional.")
        return None
    v1, v2 = c1.coordinates(), c2.coordinates()
    if not any(v1):
        return Rational(0)
    pivot = next((i for i, value in enumerate(v2) if value != 0), None)
    if pivot is None:
        return None
    t = v1[pivot] / v2[pivot]
    if all(a == t * b for a, b in zip(v1, v2)):
        return t
    return None


@dataclass(frozen=True)
class TransgressionResult:
    polynomial: InvariantPolynomial
    tensor: TensorRep
    chain: TransgressionChain
    form: Form
    cohomology_class: CohomologyClass

    def factor_against_eta(self, g: LieAlgebra) -> Rational | None:
        """Proportionality factor against the Cartan 3-form; only defined in degree 3."""
        if self.cohomology_class.degree != 3:
            return None
        eta = CohomologyClass(cartan_three_form(g), g, 3)
        if eta.is_zero():
            return None
        return classes_proportional(self.cohomology_class, eta)


def transgress(p: InvariantPolynomial, g: LieAlgebra, pivot_order="lex") -> TransgressionResult:
    if not is_invariant(p, g):
        raise NotInvariant(f"Polynomial {p.format(g)} is not ad-invariant.")
    d = p.degree
    logger.info(f"Transgressing degree {d} polynomial {p.format(g)} (pivot order {pivot_order})")

    tensor = symmetrize(p)
    top = inverse_alexander_whitney(tensor, g.dim)
    chain = solve_recurrence(top, g, pivot_order)
    form = sigma_one_restriction(chain.bottom)
    cohomology_class = CohomologyClass(form, g, 2 * d - 1)
    logger.info(f"Edge class in degree {2 * d - 1} has coordinates {list(cohomology_class.coordinates())}")
    return TransgressionResult(p, tensor, chain, form, cohomology_class)


def edge_map(p: InvariantPolynomial, g: LieAlgebra, pivot_order="lex") -> CohomologyClass:
    return transgress(p, g, pivot_order).cohomology_class
