"""Polynomial model of the boundary strata of a wonderful compactification.

Everything lives in QQ[u_1..u_l, v_1..v_l] with x_i = u_i - v_i and
y_i = u_i + v_i. Degrees are polynomial degrees, half the cohomological ones.
Simple roots are indexed from 0 in code and printed from 1.

A_L (L a set of simple roots) is spanned by the products x^G q(x) p(y) where G
is a set of simple roots and p is invariant under the reflections in the
roots outside L and G. The Weyl group acts on u and v alike, through the
reflection representation on simple roots: s_i(r_j) = r_j - a_ji r_i.
"""

import json
import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations, combinations_with_replacement

import numpy as np
import pandas as pd
import pandera.pandas as pa
from sympy import ImmutableMatrix, Rational, eye
from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement, PolyRing, ring

from .errors import (
    DegreeBoundTooSmall,
    DimensionMismatch,
    IndexOutOfRange,
    NonFiniteClosure,
    NotDivisible,
    NotHomogeneous,
    NotInvariant,
    ParseError,
)
from .linalg import SparseVector, Subquotient, intersection, reduced_rows, solve, span_basis
from .roots import RootSystemType
from .textio import format_polynomial, parse_polynomial

logger = logging.getLogger(__name__)

WEYL_GROUP_CAP = 10_000
DEFAULT_DEGREE_BOUND = 6
MODES = {
    "eq": "equivariant",
    "equivariant": "equivariant",
    "noneq": "nonequivariant",
    "nonequivariant": "nonequivariant",
}


@dataclass(frozen=True)
class RootSystemData:
    cartan: tuple[tuple[int, ...], ...]
    type_label: str = "custom"

    def __post_init__(self):
        cartan = tuple(tuple(int(a) for a in row) for row in self.cartan)
        object.__setattr__(self, "cartan", cartan)
        l = len(cartan)
        if l == 0 or any(len(row) != l for row in cartan):
            raise ParseError(f"Cartan matrix must be square and nonempty, got {cartan}.")
        for i in range(l):
            if cartan[i][i] != 2:
                raise ParseError(f"Cartan matrix needs 2 on the diagonal, got {cartan[i][i]} at ({i + 1}, {i + 1}).")
            for j in range(l):
                if i != j and (cartan[i][j] > 0 or (cartan[i][j] == 0) != (cartan[j][i] == 0)):
                    raise ParseError(f"Entries ({i + 1}, {j + 1}) and ({j + 1}, {i + 1}) do not form a Cartan matrix.")

    @property
    def rank(self) -> int:
        return len(self.cartan)

    @classmethod
    def from_type(cls, name: str) -> "RootSystemData":
        root_type = RootSystemType.get_type_by_name(name)
        if root_type is None:
            raise ParseError(f"Unknown root system type {name!r}. Available: {RootSystemType.available()}")
        return cls(tuple(map(tuple, root_type.cartan_matrix())), root_type.name())

    @classmethod
    def from_file(cls, path: str) -> "RootSystemData":
        """Read ``{"rank": l, "cartan": [[...]]}``; an optional ``"type"`` names it."""
        try:
            with open(path, "r") as file:
                spec = json.load(file)
        except json.JSONDecodeError as e:
            raise ParseError(f"Root system file {path} is not valid JSON: {e}") from e
        try:
            cartan = spec["cartan"]
            rank = int(spec.get("rank", len(cartan)))
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"Root system file {path} needs a 'cartan' matrix: {e}") from e
        if rank != len(cartan):
            raise ParseError(f"Root system file {path} declares rank {rank} but has a {len(cartan)}x{len(cartan)} Cartan matrix.")
        return cls(tuple(map(tuple, cartan)), str(spec.get("type", "custom")))

    @cached_property
    def reflections(self) -> tuple[ImmutableMatrix, ...]:
        """s_i as a substitution matrix: u_j -> sum_k S[k, j] u_k."""
        l = self.rank
        matrices = []
        for i in range(l):
            matrix = eye(l)
            for j in range(l):
                matrix[i, j] -= self.cartan[j][i]
            matrices.append(ImmutableMatrix(matrix))
        return tuple(matrices)


def _check_generators(r: RootSystemData, generators: Iterable[int]) -> tuple[int, ...]:
    generators = tuple(sorted(set(generators)))
    for i in generators:
        if not 0 <= i < r.rank:
            raise IndexOutOfRange(f"Simple root index {i + 1} outside 1..{r.rank}.")
    return generators


@lru_cache(maxsize=None)
def _group(r: RootSystemData, generators: tuple[int, ...], cap: int) -> tuple[ImmutableMatrix, ...]:
    reflections = [r.reflections[i] for i in generators]
    identity = ImmutableMatrix(eye(r.rank))
    elements, seen, frontier = [identity], {identity}, [identity]
    while frontier:
        next_frontier = []
        for element in frontier:
            for s in reflections:
                product = ImmutableMatrix(element * s)
                if product not in seen:
                    seen.add(product)
                    elements.append(product)
                    next_frontier.append(product)
                    if len(elements) > cap:
                        raise NonFiniteClosure(f"Weyl group of {r.type_label} exceeds {cap} elements.")
        frontier = next_frontier
    if len(elements) > cap // 2:
        logger.warning(f"Weyl group closure of {r.type_label} used {len(elements)} of {cap} allowed elements")
    return tuple(elements)


def weyl_group(r: RootSystemData, generators: Iterable[int] | None = None, cap: int = WEYL_GROUP_CAP) -> list[ImmutableMatrix]:
    """All elements of the subgroup generated by the given simple reflections (all by default)."""
    generators = range(r.rank) if generators is None else generators
    return list(_group(r, _check_generators(r, generators), cap))


# polynomial rings


@lru_cache(maxsize=None)
def _ring(names: tuple[str, ...]) -> PolyRing:
    return ring(list(names), QQ)[0]


@lru_cache(maxsize=None)
def _monomials(nvars: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of the given degree, lexicographically descending."""
    if degree < 0:
        return ()
    exponents = set()
    for choice in combinations_with_replacement(range(nvars), degree):
        vector = [0] * nvars
        for i in choice:
            vector[i] += 1
        exponents.add(tuple(vector))
    return tuple(sorted(exponents, reverse=True))


@lru_cache(maxsize=None)
def _monomial_index(nvars: int, degree: int) -> dict[tuple[int, ...], int]:
    return {m: i for i, m in enumerate(_monomials(nvars, degree))}


def _substitute(poly: PolyElement, images: Sequence[PolyElement], target: PolyRing) -> PolyElement:
    result = target.zero
    for monomial, coefficient in poly.terms():
        term = target.ground_new(coefficient)
        for image, exponent in zip(images, monomial):
            if exponent:
                term *= image**exponent
        result += term
    return result


def _degree(poly: PolyElement) -> int | None:
    degrees = {sum(m) for m in poly.monoms()} if poly else set()
    if len(degrees) > 1:
        raise NotHomogeneous(f"Polynomial {format_polynomial(poly)} mixes degrees {sorted(degrees)}.")
    return degrees.pop() if degrees else None


def u_ring(r: RootSystemData) -> PolyRing:
    return _ring(tuple(f"u{i + 1}" for i in range(r.rank)))


def act_on_u(element: ImmutableMatrix, poly: PolyElement) -> PolyElement:
    target = poly.ring
    gens = target.gens
    images = [sum((int(element[k, j]) * gens[k] for k in range(len(gens))), target.zero) for j in range(len(gens))]
    return _substitute(poly, images, target)


def is_w_invariant(r: RootSystemData, poly: PolyElement, generators: Iterable[int] | None = None) -> bool:
    generators = range(r.rank) if generators is None else generators
    return all(act_on_u(r.reflections[i], poly) == poly for i in generators)


@lru_cache(maxsize=None)
def _invariant_basis(r: RootSystemData, generators: tuple[int, ...], degree: int) -> tuple[PolyElement, ...]:
    target = u_ring(r)
    group = _group(r, generators, WEYL_GROUP_CAP)
    monomials = _monomials(r.rank, degree)
    index = _monomial_index(r.rank, degree)
    averages = []
    for monomial in monomials:
        poly = target.from_dict({monomial: QQ(1)})
        total = sum((act_on_u(element, poly) for element in group), target.zero)
        averages.append({index[m]: QQ.to_sympy(c) / len(group) for m, c in total.terms()})
    rows = reduced_rows(averages, len(monomials))
    return tuple(target.from_dict({monomials[i]: QQ.from_sympy(v) for i, v in row.items()}) for _, row in rows)


def invariant_basis(r: RootSystemData, subgroup_generators: Iterable[int], degree: int) -> list[PolyElement]:
    """Reduced echelon basis of the degree-``degree`` invariants of a reflection subgroup.

    Reynolds averages of all monomials, row reduced in descending lex order.
    """
    return list(_invariant_basis(r, _check_generators(r, subgroup_generators), degree))


@dataclass(frozen=True)
class WonderfulAlgebra:
    root_system: RootSystemData

    @property
    def rank(self) -> int:
        return self.root_system.rank

    @cached_property
    def u_ring(self) -> PolyRing:
        return u_ring(self.root_system)

    @cached_property
    def uv_ring(self) -> PolyRing:
        l = self.rank
        return _ring(tuple(f"u{i + 1}" for i in range(l)) + tuple(f"v{i + 1}" for i in range(l)))

    @cached_property
    def xy_ring(self) -> PolyRing:
        l = self.rank
        return _ring(tuple(f"x{i + 1}" for i in range(l)) + tuple(f"y{i + 1}" for i in range(l)))

    @property
    def u(self) -> list[PolyElement]:
        return list(self.uv_ring.gens[: self.rank])

    @property
    def v(self) -> list[PolyElement]:
        return list(self.uv_ring.gens[self.rank:])

    @property
    def x(self) -> list[PolyElement]:
        return [a - b for a, b in zip(self.u, self.v)]

    @property
    def y(self) -> list[PolyElement]:
        return [a + b for a, b in zip(self.u, self.v)]

    def evaluate(self, poly: PolyElement, images: Sequence[PolyElement]) -> PolyElement:
        """p(images) for p in the u ring."""
        return _substitute(poly, images, self.uv_ring)

    def to_xy(self, poly: PolyElement) -> PolyElement:
        gens = self.xy_ring.gens
        l, half = self.rank, QQ(1, 2)
        xs, ys = gens[:l], gens[l:]
        images = [(a + b) * half for a, b in zip(xs, ys)] + [(b - a) * half for a, b in zip(xs, ys)]
        return _substitute(poly, images, self.xy_ring)

    def from_xy(self, poly: PolyElement) -> PolyElement:
        return _substitute(poly, self.x + self.y, self.uv_ring)

    def act(self, left: ImmutableMatrix, poly: PolyElement, right: ImmutableMatrix | None = None) -> PolyElement:
        """(left, right) in W x W acting on u and v; diagonal when ``right`` is omitted."""
        right = left if right is None else right
        l = self.rank
        u, v = self.u, self.v
        images = [sum((int(left[k, j]) * u[k] for k in range(l)), self.uv_ring.zero) for j in range(l)]
        images += [sum((int(right[k, j]) * v[k] for k in range(l)), self.uv_ring.zero) for j in range(l)]
        return _substitute(poly, images, self.uv_ring)

    def monomials(self, degree: int) -> tuple[tuple[int, ...], ...]:
        return _monomials(2 * self.rank, degree)

    def vector(self, poly: PolyElement, degree: int) -> SparseVector:
        index = _monomial_index(2 * self.rank, degree)
        vector = {}
        for monomial, coefficient in poly.terms():
            if monomial not in index:
                raise NotHomogeneous(f"Polynomial {format_polynomial(poly)} is not homogeneous of degree {degree}.")
            vector[index[monomial]] = QQ.to_sympy(coefficient)
        return vector

    def polynomial(self, vector: Mapping[int, object], degree: int) -> PolyElement:
        monomials = self.monomials(degree)
        return self.uv_ring.from_dict({monomials[i]: QQ.from_sympy(Rational(v)) for i, v in vector.items() if v})

    def parse(self, text: str) -> PolyElement:
        """A polynomial in u_1..u_l."""
        return parse_polynomial(text, self.u_ring)

    def parse_uv(self, text: str) -> PolyElement:
        return parse_polynomial(text, self.uv_ring)

    def format_xy(self, poly: PolyElement) -> str:
        return format_polynomial(self.to_xy(poly))


def beta(p: PolyElement, alg: WonderfulAlgebra, degree: int | None = None) -> PolyElement:
    """p(x + y) - (-1)^d p(x - y), equal to 2^d (p(u) - p(v))."""
    if p.ring != alg.u_ring:
        raise DimensionMismatch(f"Expected a polynomial in {alg.u_ring.symbols}, got one in {p.ring.symbols}.")
    if not p:
        return alg.uv_ring.zero
    d = _degree(p)
    if degree is not None and degree != d:
        raise NotHomogeneous(f"Polynomial has degree {d}, expected {degree}.")
    if not is_w_invariant(alg.root_system, p):
        raise NotInvariant(f"{format_polynomial(p)} is not invariant under the Weyl group of {alg.root_system.type_label}.")

    plus = alg.evaluate(p, [a + b for a, b in zip(alg.x, alg.y)])
    minus = alg.evaluate(p, [a - b for a, b in zip(alg.x, alg.y)])
    return plus - minus if d % 2 == 0 else plus + minus


def decompose_beta(b: PolyElement, alg: WonderfulAlgebra) -> list[PolyElement]:
    """(f_1, ..., f_l) with sum x_k f_k = b, extracting x_1 first, then x_2, and so on."""
    remaining = alg.to_xy(b)
    parts = []
    for k in range(alg.rank):
        divisible = {m: c for m, c in remaining.terms() if m[k] > 0}
        remaining -= alg.xy_ring.from_dict(divisible)
        quotient = alg.xy_ring.from_dict({m[:k] + (m[k] - 1,) + m[k + 1:]: c for m, c in divisible.items()})
        parts.append(alg.from_xy(quotient))
    if remaining:
        raise NotDivisible(f"Terms {format_polynomial(remaining)} are divisible by no x_k.")
    return parts


@lru_cache(maxsize=None)
def _a_lambda_basis(alg: WonderfulAlgebra, subset: frozenset[int], degree: int) -> tuple[SparseVector, ...]:
    l = alg.rank
    x = alg.x
    vectors = []
    for size in range(min(l, degree) + 1):
        for gamma in combinations(range(l), size):
            x_gamma = alg.uv_ring.one
            for i in gamma:
                x_gamma *= x[i]
            fixed = tuple(i for i in range(l) if i not in subset and i not in gamma)
            for b in range(degree - size + 1):
                invariants = [alg.evaluate(p, alg.y) for p in _invariant_basis(alg.root_system, fixed, b)]
                for exponents in _monomials(l, degree - size - b):
                    q = alg.uv_ring.one
                    for i, e in enumerate(exponents):
                        q *= x[i] ** e
                    vectors += [alg.vector(x_gamma * q * p, degree) for p in invariants]
    return tuple(span_basis(vectors, len(alg.monomials(degree))))


def a_lambda_basis(alg: WonderfulAlgebra, subset: Iterable[int], degree: int) -> list[SparseVector]:
    """Basis of A_L in one degree, as coefficient vectors over ``alg.monomials(degree)``."""
    subset = frozenset(_check_generators(alg.root_system, subset))
    return list(_a_lambda_basis(alg, subset, degree))


def is_in_A(
    subset: Iterable[int],
    f: PolyElement,
    alg: WonderfulAlgebra,
    degree_bound: int = DEFAULT_DEGREE_BOUND,
) -> bool:
    if not f:
        return True
    degree = _degree(f)
    if degree > degree_bound:
        raise DegreeBoundTooSmall(f"Membership in degree {degree} needs a degree bound of at least {degree}, got {degree_bound}.")
    basis = a_lambda_basis(alg, subset, degree)
    return solve(basis, alg.vector(f, degree), len(alg.monomials(degree))) is not None


# cokernel presentations


@lru_cache(maxsize=None)
def _product_invariants(alg: WonderfulAlgebra, degree: int) -> tuple[PolyElement, ...]:
    """p(u) p'(v) for W-invariants p, p' of total degree ``degree``."""
    r = alg.root_system
    everything = tuple(range(r.rank))
    products = []
    for a in range(degree + 1):
        for p in _invariant_basis(r, everything, a):
            for q in _invariant_basis(r, everything, degree - a):
                products.append(alg.evaluate(p, alg.u) * alg.evaluate(q, alg.v))
    return tuple(products)


def _invariant_ideal(alg: WonderfulAlgebra, subset: frozenset[int], degree: int) -> list[SparseVector]:
    """Positive-degree W x W invariants times A_L, inside A_L, in one degree."""
    size = len(alg.monomials(degree))
    vectors = []
    for m in range(1, degree + 1):
        for h in _product_invariants(alg, m):
            for a in _a_lambda_basis(alg, subset, degree - m):
                vectors.append(alg.vector(h * alg.polynomial(a, degree - m), degree))
    if not vectors:
        return []
    return intersection(vectors, list(_a_lambda_basis(alg, subset, degree)), size)


@dataclass
class CokernelPresentation:
    """Per-degree cokernels of (f_ij) -> (sum_{i<k} x_i f_ik - sum_{j>k} x_j f_kj)_k.

    Degree n is a subquotient of l copies of the degree-n polynomials, component
    k in block k; ``positions[n]`` places each monomial inside its block.
    """

    kind: str
    algebra: WonderfulAlgebra
    degree_bound: int
    quotients: dict[int, Subquotient]
    positions: dict[int, list[int]]

    @property
    def dims(self) -> dict[int, int]:
        return {n: q.dim for n, q in self.quotients.items()}

    def target_dim(self, degree: int) -> int:
        return len(self.quotients[degree].numerator)

    def relation_rank(self, degree: int) -> int:
        return len(self.quotients[degree].relations)

    def _quotient(self, degree: int) -> Subquotient:
        if degree not in self.quotients:
            raise DegreeBoundTooSmall(f"Presentation covers degrees {sorted(self.quotients)}, not {degree}.")
        return self.quotients[degree]

    def vector(self, components: Sequence[PolyElement], degree: int) -> SparseVector:
        if len(components) != self.algebra.rank:
            raise DimensionMismatch(f"Expected {self.algebra.rank} components, got {len(components)}.")
        size = len(self.algebra.monomials(degree))
        positions = self.positions[degree]
        vector = {}
        for k, poly in enumerate(components):
            for i, value in self.algebra.vector(poly, degree).items():
                vector[k * size + positions[i]] = value
        return vector

    def coordinates(self, components: Sequence[PolyElement], degree: int) -> tuple[Rational, ...]:
        return self._quotient(degree).coordinates(self.vector(components, degree))

    def is_zero(self, components: Sequence[PolyElement], degree: int) -> bool:
        return not any(self.coordinates(components, degree))

    def normal_form(self, components: Sequence[PolyElement], degree: int) -> list[PolyElement]:
        reduced = self._quotient(degree).normal_form(self.vector(components, degree))
        size = len(self.algebra.monomials(degree))
        inverse = {position: i for i, position in enumerate(self.positions[degree])}
        blocks: list[SparseVector] = [{} for _ in range(self.algebra.rank)]
        for index, value in reduced.items():
            blocks[index // size][inverse[index % size]] = value
        return [self.algebra.polynomial(block, degree) for block in blocks]

    @property
    def output_schema(self) -> pa.DataFrameSchema:
        return pa.DataFrameSchema(
            {
                "degree": pa.Column(int, pa.Check.ge(0)),
                "target": pa.Column(int, pa.Check.ge(0)),
                "relations": pa.Column(int, pa.Check.ge(0)),
                "cokernel": pa.Column(int, pa.Check.ge(0)),
            },
            checks=pa.Check(lambda df: df["cokernel"] == df["target"] - df["relations"]),
            strict=True,
        )

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(
            [
                {"degree": n, "target": self.target_dim(n), "relations": self.relation_rank(n), "cokernel": q.dim}
                for n, q in sorted(self.quotients.items())
            ],
            columns=["degree", "target", "relations", "cokernel"],
        ).astype("int64")
        return self.output_schema.validate(frame)


def _presentation(
    alg: WonderfulAlgebra,
    degree_bound: int,
    kind: str,
    shuffle_seed: int | None,
    degrees: Iterable[int] | None,
) -> CokernelPresentation:
    if degree_bound < 0:
        raise DegreeBoundTooSmall(f"Degree bound must be nonnegative, got {degree_bound}.")
    degrees = range(degree_bound + 1) if degrees is None else sorted(set(degrees))
    if any(n > degree_bound for n in degrees):
        raise DegreeBoundTooSmall(f"Requested degrees {list(degrees)} exceed the bound {degree_bound}.")
    l = alg.rank
    if l > 3:
        logger.warning(f"Cokernel presentation for rank {l} may be slow; ranks up to 3 are expected")

    quotients, all_positions = {}, {}
    for n in degrees:
        size = len(alg.monomials(n))
        if shuffle_seed is None:
            positions = list(range(size))
        else:
            positions = [int(i) for i in np.random.default_rng([shuffle_seed, n]).permutation(size)]

        def embed(k: int, vector: Mapping[int, object]) -> SparseVector:
            return {k * size + positions[i]: v for i, v in vector.items()}

        numerator = [embed(k, v) for k in range(l) for v in _a_lambda_basis(alg, frozenset({k}), n)]
        relations = []
        if n >= 1:
            for i, j in combinations(range(l), 2):
                for f in _a_lambda_basis(alg, frozenset({i, j}), n - 1):
                    poly = alg.polynomial(f, n - 1)
                    image = embed(j, alg.vector(alg.x[i] * poly, n))
                    image.update(embed(i, alg.vector(-alg.x[j] * poly, n)))
                    relations.append(image)
        if kind == "nonequivariant":
            for k in range(l):
                relations += [embed(k, v) for v in _invariant_ideal(alg, frozenset({k}), n)]

        quotients[n] = Subquotient(l * size, numerator, relations)
        all_positions[n] = positions
        logger.debug(
            f"{kind} cokernel in degree {n}: target {len(quotients[n].numerator)}, "
            f"relations {len(quotients[n].relations)}, cokernel {quotients[n].dim}"
        )

    return CokernelPresentation(kind, alg, degree_bound, quotients, all_positions)


def equivariant_cokernel(
    alg: WonderfulAlgebra,
    degree_bound: int = DEFAULT_DEGREE_BOUND,
    shuffle_seed: int | None = None,
    degrees: Iterable[int] | None = None,
) -> CokernelPresentation:
    return _presentation(alg, degree_bound, "equivariant", shuffle_seed, degrees)


def nonequivariant_cokernel(
    alg: WonderfulAlgebra,
    degree_bound: int = DEFAULT_DEGREE_BOUND,
    shuffle_seed: int | None = None,
    degrees: Iterable[int] | None = None,
) -> CokernelPresentation:
    """Same map with both sides reduced modulo positive-degree W x W invariants."""
    return _presentation(alg, degree_bound, "nonequivariant", shuffle_seed, degrees)


@dataclass(frozen=True)
class ResidueResult:
    polynomial: PolyElement
    degree: int
    mode: str
    beta: PolyElement
    components: tuple[PolyElement, ...]
    membership: tuple[bool, ...]
    coordinates: tuple[Rational, ...]
    normal_form: tuple[PolyElement, ...]

    @property
    def is_zero(self) -> bool:
        return not any(self.coordinates)


def residue_class(
    p: PolyElement,
    alg: WonderfulAlgebra,
    mode: str = "nonequivariant",
    degree_bound: int = DEFAULT_DEGREE_BOUND,
    check_membership: bool = True,
    degree: int | None = None,
) -> ResidueResult:
    """Class of decompose_beta(beta(p)) in the chosen cokernel, as an unnormalized representative."""
    if mode not in MODES:
        raise ValueError(f"Unknown mode {mode!r}. Choose one of {sorted(MODES)}.")
    mode = MODES[mode]
    r = alg.root_system

    d = _degree(p) if p else (degree or 2)
    if degree is not None and degree != d:
        raise NotHomogeneous(f"Polynomial has degree {d}, expected {degree}.")
    if d - 1 > degree_bound:
        raise DegreeBoundTooSmall(f"Residue of a degree-{d} invariant needs a degree bound of at least {d - 1}, got {degree_bound}.")
    if r.type_label.upper().startswith("D") and 2 * d == r.rank:
        logger.warning(f"Type {r.type_label} with 2d = l = {r.rank}: the residue formula is not guaranteed here")

    b = beta(p, alg, d if p else None)
    components = decompose_beta(b, alg) if b else [alg.uv_ring.zero] * alg.rank
    membership: tuple[bool, ...] = ()
    if check_membership:
        membership = tuple(is_in_A({k}, f, alg, degree_bound) for k, f in enumerate(components))
        for k, ok in enumerate(membership):
            if not ok:
                logger.warning(f"f_{k + 1} = {format_polynomial(components[k])} is not in A_{{{k + 1}}}")

    n = d - 1
    presentation = _presentation(alg, degree_bound, mode, None, [n])
    coordinates = presentation.coordinates(components, n)
    normal_form = presentation.normal_form(components, n)
    logger.info(f"Residue of {format_polynomial(p)} in the {mode} cokernel: coordinates {coordinates}")
    return ResidueResult(p, d, mode, b, tuple(components), membership, coordinates, tuple(normal_form))


P1_SQUARED_RING = _ring(("s1", "s2"))


def geometric_translation(components: Sequence[PolyElement], alg: WonderfulAlgebra) -> PolyElement:
    """Rank one only: u_1 -> s1 = sigma (x) 1 and v_1 -> -s2 = -(1 (x) sigma) in H*(P^1 x P^1)."""
    if alg.rank != 1:
        raise DimensionMismatch(f"The P^1 x P^1 picture needs rank 1, got rank {alg.rank}.")
    s1, s2 = P1_SQUARED_RING.gens
    result = P1_SQUARED_RING.zero
    for (a, b), coefficient in components[0].terms():
        if a <= 1 and b <= 1:
            result += P1_SQUARED_RING.ground_new(coefficient) * s1**a * (-s2) ** b
    return result
