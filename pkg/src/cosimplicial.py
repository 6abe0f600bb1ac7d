"""Cosimplicial models C(g^v) and Sigma(g^v) and the bicomplex they induce.

An element of bidegree (p, q) is a form of degree q on p + 1 copies of the dual
space; slot s of the form corresponds to component m_s of (m_0, ..., m_p).
Sigma^p is the sum-zero part of C^p and is not given a separate representation:
membership is decided in the generators

    nu_j = xi_j - xi_{j+1}  (j < p),    nu_p = xi_p,

where a form lies in Lambda(Sigma^p) exactly when no nu_p generator occurs.
Computations that need a complex run in the basic part: forms in Lambda(Sigma^p)
invariant under the diagonal coadjoint action.
"""

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import TYPE_CHECKING

from sympy import Matrix, Rational

from .errors import DimensionMismatch, IndexOutOfRange, NotHomogeneous, NotInSubspace
from .exterior import Form, coadjoint_action, ce_differential, format_form, substitute
from .linalg import kernel, solve

if TYPE_CHECKING:
    from .lie_core import LieAlgebra
    from .spectral_engine import Bicomplex

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BigradedElement:
    p: int
    q: int
    value: Form

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise IndexOutOfRange(f"Negative bidegree ({self.p}, {self.q}).")
        if self.value.slot_count != self.p + 1:
            raise DimensionMismatch(f"Bidegree p={self.p} needs {self.p + 1} slots, form has {self.value.slot_count}.")
        degree = self.value.degree
        if degree is not None and degree != self.q:
            raise NotHomogeneous(f"Form of degree {degree} placed in bidegree ({self.p}, {self.q}).")

    @property
    def space_dim(self) -> int:
        return self.value.space_dim

    @classmethod
    def zero(cls, p: int, q: int, space_dim: int) -> "BigradedElement":
        return cls(p, q, Form.zero(space_dim, p + 1))

    def is_zero(self) -> bool:
        return self.value.is_zero()

    def _same_bidegree(self, other: "BigradedElement") -> None:
        if (self.p, self.q) != (other.p, other.q):
            raise DimensionMismatch(f"Bidegrees differ: ({self.p}, {self.q}) vs ({other.p}, {other.q}).")

    def __add__(self, other: "BigradedElement") -> "BigradedElement":
        self._same_bidegree(other)
        return BigradedElement(self.p, self.q, self.value + other.value)

    def __sub__(self, other: "BigradedElement") -> "BigradedElement":
        self._same_bidegree(other)
        return BigradedElement(self.p, self.q, self.value - other.value)

    def __neg__(self) -> "BigradedElement":
        return BigradedElement(self.p, self.q, -self.value)

    def __mul__(self, scalar) -> "BigradedElement":
        return BigradedElement(self.p, self.q, self.value * scalar)

    __rmul__ = __mul__

    def format(self, labels) -> str:
        return format_form(self.value, labels)


def _relabel_slots(e: BigradedElement, slot_map, new_p: int) -> BigradedElement:
    dim = e.space_dim
    images = lambda g: {slot_map(g // dim) * dim + g % dim: 1}
    value = substitute(e.value, images, new_p + 1, dim)
    return BigradedElement(new_p, e.q, value)


def coface(i: int, e: BigradedElement) -> BigradedElement:
    """phi_i: insert a zero component at position i; slot j goes to j (j < i) or j + 1."""
    if not 0 <= i <= e.p + 1:
        raise IndexOutOfRange(f"Coface index {i} outside 0..{e.p + 1}.")
    # slot relabelling is monotone, so monomials stay sorted
    dim = e.space_dim
    terms = {}
    for monomial, value in e.value.terms.items():
        shifted = tuple(g + dim if g // dim >= i else g for g in monomial)
        terms[shifted] = value
    return BigradedElement(e.p + 1, e.q, Form(dim, e.p + 2, terms))


def codegeneracy(j: int, e: BigradedElement) -> BigradedElement:
    """sigma_j: dual of summing components j and j + 1; slot s goes to s (s <= j) or s - 1."""
    if e.p == 0 or not 0 <= j <= e.p - 1:
        raise IndexOutOfRange(f"Codegeneracy index {j} outside 0..{e.p - 1}.")
    return _relabel_slots(e, lambda s: s if s <= j else s - 1, e.p - 1)


def d_I(e: BigradedElement) -> BigradedElement:
    """Alternating sum of the cofaces 0..p+1."""
    result = BigradedElement.zero(e.p + 1, e.q, e.space_dim)
    for i in range(e.p + 2):
        term = coface(i, e)
        result = result - term if i % 2 else result + term
    return result


def d_II(e: BigradedElement, g: "LieAlgebra") -> BigradedElement:
    """(-1)^p times the Chevalley-Eilenberg differential applied slot by slot."""
    value = ce_differential(e.value, g)
    if e.p % 2:
        value = -value
    return BigradedElement(e.p, e.q + 1, value)


def to_sigma_coordinates(e: BigradedElement) -> Form:
    """Rewrite ``e`` in the nu generators; xi_s = nu_s + nu_{s+1} + ... + nu_p."""
    dim, p = e.space_dim, e.p
    images = lambda g: {j * dim + g % dim: 1 for j in range(g // dim, p + 1)}
    return substitute(e.value, images, p + 1, dim)


def from_sigma_coordinates(form: Form, p: int, q: int | None = None) -> BigradedElement:
    """Inverse of to_sigma_coordinates; ``q`` is only needed for the zero form."""
    dim = form.space_dim

    def images(g: int) -> dict[int, int]:
        if g // dim == p:
            return {g: 1}
        return {g: 1, g + dim: -1}

    value = substitute(form, images, p + 1, dim)
    if q is None:
        q = form.degree or 0
    return BigradedElement(p, q, value)


def is_in_sigma(e: BigradedElement) -> bool:
    last = e.p * e.space_dim
    return all(not monomial or monomial[-1] < last for monomial in to_sigma_coordinates(e).terms)


def sigma_basis(p: int, q: int, space_dim: int) -> list[tuple[int, ...]]:
    """Monomials in nu_0..nu_{p-1} spanning Lambda^q(Sigma^p)."""
    return list(combinations(range(p * space_dim), q))


def sigma_element(p: int, monomial: tuple[int, ...], space_dim: int) -> BigradedElement:
    form = Form(space_dim, p + 1, {tuple(monomial): 1})
    return from_sigma_coordinates(form, p, len(monomial))


def sigma_vector(e: BigradedElement) -> dict[int, Rational]:
    """Coordinates of a Lambda(Sigma^p) element in ``sigma_basis(p, q, dim)`` order."""
    if not is_in_sigma(e):
        raise DimensionMismatch(f"Element of bidegree ({e.p}, {e.q}) is not in Lambda(Sigma).")
    index = {m: i for i, m in enumerate(sigma_basis(e.p, e.q, e.space_dim))}
    return {index[m]: v for m, v in to_sigma_coordinates(e).terms.items()}


@dataclass(frozen=True)
class TransgressionChain:
    """Entries a^{p, 2d-p} for 1 <= p <= d linked by d_II a^{p,q} = d_I a^{p-1,q+1}."""

    d: int
    entries: Mapping[tuple[int, int], BigradedElement] = field(default_factory=dict)

    def __post_init__(self):
        for (p, q), element in self.entries.items():
            if p + q != 2 * self.d or not 1 <= p <= self.d:
                raise IndexOutOfRange(f"Chain entry ({p}, {q}) outside the antidiagonal p + q = {2 * self.d}.")
            if (element.p, element.q) != (p, q):
                raise DimensionMismatch(f"Entry ({p}, {q}) holds an element of bidegree ({element.p}, {element.q}).")

    @property
    def top(self) -> BigradedElement:
        return self.entries[(self.d, self.d)]

    @property
    def bottom(self) -> BigradedElement:
        return self.entries[(1, 2 * self.d - 1)]

    def check(self, g: "LieAlgebra") -> bool:
        """Re-verify the recurrence and d_I-closedness of the top entry."""
        if not d_I(self.top).is_zero():
            logger.debug("Top entry of the chain is not d_I-closed.")
            return False
        for p in range(self.d, 1, -1):
            q = 2 * self.d - p
            lhs = d_II(self.entries[(p, q)], g)
            rhs = d_I(self.entries[(p - 1, q + 1)])
            if lhs.value != rhs.value:
                logger.debug(f"Recurrence fails between ({p}, {q}) and ({p - 1}, {q + 1}).")
                return False
        return True


def is_basic(e: BigradedElement, g: "LieAlgebra") -> bool:
    """In Lambda(Sigma^p) and killed by the diagonal coadjoint action."""
    return is_in_sigma(e) and all(coadjoint_action(e.value, g, i).is_zero() for i in g.generators)


@lru_cache(maxsize=128)
def basic_basis(p: int, q: int, g: "LieAlgebra") -> tuple[BigradedElement, ...]:
    """Basis of the diagonal invariants in Lambda^q(Sigma^p g^v).

    Both differentials preserve this subcomplex; d_II does not preserve Lambda(Sigma).
    The coadjoint action commutes with the change to nu generators, so the
    invariance equations are written on sigma monomials.
    """
    dim = g.dim
    monomials = sigma_basis(p, q, dim)
    if not monomials:
        return ()

    rows: dict[tuple, int] = {}
    columns = []
    for monomial in monomials:
        column = {}
        for i in g.generators:
            for image, value in coadjoint_action(Form(dim, p + 1, {monomial: 1}), g, i).terms.items():
                column[rows.setdefault((i, image), len(rows))] = value
        columns.append(column)

    solutions = kernel(columns, len(rows))
    basis = tuple(
        from_sigma_coordinates(Form(dim, p + 1, {monomials[j]: v for j, v in s.items()}), p, q) for s in solutions
    )
    logger.debug(f"Invariants in Lambda^{q}(Sigma^{p}): {len(basis)} of {len(monomials)} sigma monomials")
    return basis


def _basic_matrix(sources: Sequence[BigradedElement], targets: Sequence[BigradedElement], operator) -> Matrix:
    target = targets[0]
    nrows = comb(target.p * target.space_dim, target.q)
    coordinates = [sigma_vector(t) for t in targets]
    matrix = Matrix.zeros(len(targets), len(sources))
    for j, source in enumerate(sources):
        image = operator(source)
        if image.is_zero():
            continue
        solution = solve(coordinates, sigma_vector(image), nrows)
        if solution is None:
            raise NotInSubspace(f"Image of a ({source.p}, {source.q}) basis element leaves the invariant subcomplex.")
        for i, value in solution.items():
            matrix[i, j] = value
    return matrix


def cech_model_bicomplex(g: "LieAlgebra", max_p: int, max_q: int) -> "Bicomplex":
    """Invariant part of Lambda^q(Sigma^p g^v) for p <= max_p, q <= max_q, in basic_basis coordinates.

    Column p = 0 is Lambda(Sigma^0) = QQ in degree 0. Maps leaving the truncation are dropped.
    """
    from .spectral_engine import Bicomplex

    bases = {
        (p, q): basis
        for p in range(max_p + 1)
        for q in range(max_q + 1)
        if (basis := basic_basis(p, q, g))
    }

    dI, dII = {}, {}
    for (p, q), sources in bases.items():
        if (p + 1, q) in bases:
            dI[(p, q)] = _basic_matrix(sources, bases[(p + 1, q)], d_I)
        if (p, q + 1) in bases:
            dII[(p, q)] = _basic_matrix(sources, bases[(p, q + 1)], lambda e: d_II(e, g))

    dims = {pos: len(basis) for pos, basis in bases.items()}
    logger.debug(f"Built Cech model bicomplex with {len(dims)} nonzero entries for p <= {max_p}, q <= {max_q}")
    return Bicomplex(dims, dI, dII)
