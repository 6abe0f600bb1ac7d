"""Finite first-quadrant bicomplexes over QQ and their spectral sequences.

Positions are (p, q); dI raises p and dII raises q. The total complex is filtered
by columns, F_p tot^n = sum over p' >= p of L^{p', n-p'}, so E_1 is the dII
cohomology of each column. Pages E_1 and E_2 are subquotients of the entries
L^{p,q}; E_inf is F_p H^n / F_{p+1} H^n as a subquotient of tot^n.

The cone part follows one fixed layout: C^{p,q} = A^{p,q+1} + B^{p,q} with A
listed first, dI acting block-diagonally and
dII(a, b) = (-dII a, (-1)^p f(a) + dII b).
"""

import logging
import math
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass
from functools import reduce

import numpy as np
import pandas as pd
import pandera.pandas as pa
from sympy import ImmutableMatrix, Matrix, Rational, eye, kronecker_product, zeros

from .conventions import CONVENTIONS
from .errors import (
    DimensionMismatch,
    InvalidDifferentials,
    LiftFailed,
    NotACocycle,
    NotChainMap,
    NotInFiltration,
    NotInKernel,
    NotInSubspace,
)
from .linalg import (
    SparseVector,
    Subquotient,
    apply,
    combine,
    kernel,
    kernel_mod_image,
    matrix_columns,
    preimage,
    rank,
    solve,
    span_basis,
    sparse_vector,
)

logger = logging.getLogger(__name__)

Position = tuple[int, int]
INFINITY = "inf"


def _matrix(rows: int, cols: int, matrix=None) -> ImmutableMatrix:
    if matrix is None:
        return ImmutableMatrix.zeros(rows, cols)
    return ImmutableMatrix(matrix)


def _place(target: Matrix, row: int, col: int, block: Matrix) -> None:
    if block.rows and block.cols:
        target[row:row + block.rows, col:col + block.cols] = block


def _unipotent(size: int, rng: np.random.Generator) -> Matrix:
    matrix = eye(size)
    for i in range(size):
        for j in range(i + 1, size):
            matrix[i, j] = int(rng.integers(-2, 3))
    return matrix


def _nonzero(rng: np.random.Generator) -> int:
    return int(rng.choice([-2, -1, 1, 2]))


class CochainComplex:
    """Finite cochain complex; ``d[n]`` maps degree n to degree n + 1."""

    def __init__(self, dims: Mapping[int, int], d: Mapping[int, Matrix] | None = None, validate: bool = True):
        if any(n < 0 for n in dims):
            raise InvalidDifferentials("Cochain complexes live in nonnegative degrees.")
        self.dims = {n: int(k) for n, k in sorted(dims.items()) if k > 0}
        self.d = {}
        for n, matrix in (d or {}).items():
            matrix = ImmutableMatrix(matrix)
            if matrix.shape != (self.dim(n + 1), self.dim(n)):
                raise InvalidDifferentials(f"d[{n}] has shape {matrix.shape}, expected {(self.dim(n + 1), self.dim(n))}.")
            if not matrix.is_zero_matrix:
                self.d[n] = matrix
        if validate:
            self.validate()

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def differential(self, n: int) -> ImmutableMatrix:
        return self.d.get(n, _matrix(self.dim(n + 1), self.dim(n)))

    def validate(self) -> None:
        for n in self.dims:
            if not (self.differential(n + 1) * self.differential(n)).is_zero_matrix:
                raise InvalidDifferentials(f"d o d != 0 in degree {n}.")

    def cohomology_dims(self) -> dict[int, int]:
        return {
            n: kernel_mod_image(
                matrix_columns(self.differential(n)), self.dim(n + 1), matrix_columns(self.differential(n - 1)), k
            ).dim
            for n, k in self.dims.items()
        }

    def as_column(self) -> "Bicomplex":
        """The complex as the single column p = 0 of a bicomplex."""
        return Bicomplex(
            {(0, n): k for n, k in self.dims.items()},
            dII={(0, n): m for n, m in self.d.items()},
        )

    @classmethod
    def from_column(cls, L: "Bicomplex", p: int = 0) -> "CochainComplex":
        return cls(
            {q: k for (pp, q), k in L.dims.items() if pp == p},
            {q: m for (pp, q), m in L.dII.items() if pp == p},
        )


class Bicomplex:
    """First-quadrant grid of finite-dimensional spaces with anticommuting differentials.

    ``dI[(p, q)]`` maps L^{p,q} to L^{p+1,q} and ``dII[(p, q)]`` maps L^{p,q} to
    L^{p,q+1}; absent entries are zero.
    """

    def __init__(
        self,
        dims: Mapping[Position, int],
        dI: Mapping[Position, Matrix] | None = None,
        dII: Mapping[Position, Matrix] | None = None,
        validate: bool = True,
    ):
        for (p, q), n in dims.items():
            if p < 0 or q < 0 or n < 0:
                raise InvalidDifferentials(f"Entry ({p}, {q}) of dimension {n} is outside the first quadrant.")
        self.dims = {pos: int(n) for pos, n in sorted(dims.items()) if n > 0}
        self.dI = self._store(dI or {}, (1, 0), "dI")
        self.dII = self._store(dII or {}, (0, 1), "dII")
        self._memo: dict = {}
        if validate:
            self.validate()

    def _store(self, maps: Mapping[Position, Matrix], step: Position, name: str) -> dict[Position, ImmutableMatrix]:
        stored = {}
        for (p, q), matrix in maps.items():
            matrix = ImmutableMatrix(matrix)
            expected = (self.dim(p + step[0], q + step[1]), self.dim(p, q))
            if matrix.shape != expected:
                raise InvalidDifferentials(f"{name} at ({p}, {q}) has shape {matrix.shape}, expected {expected}.")
            if not matrix.is_zero_matrix:
                stored[(p, q)] = matrix
        return stored

    def __repr__(self) -> str:
        return f"Bicomplex(dims={self.dims})"

    def dim(self, p: int, q: int) -> int:
        return self.dims.get((p, q), 0)

    def d_I(self, p: int, q: int) -> ImmutableMatrix:
        if (p, q) in self.dI:
            return self.dI[(p, q)]
        return _matrix(self.dim(p + 1, q), self.dim(p, q))

    def d_II(self, p: int, q: int) -> ImmutableMatrix:
        if (p, q) in self.dII:
            return self.dII[(p, q)]
        return _matrix(self.dim(p, q + 1), self.dim(p, q))

    @property
    def max_p(self) -> int:
        return max((p for p, _ in self.dims), default=0)

    @property
    def max_q(self) -> int:
        return max((q for _, q in self.dims), default=0)

    @property
    def max_total(self) -> int:
        return max((p + q for p, q in self.dims), default=0)

    def validate(self) -> None:
        for p, q in self.dims:
            checks = (
                ("dI o dI", self.d_I(p + 1, q) * self.d_I(p, q)),
                ("dII o dII", self.d_II(p, q + 1) * self.d_II(p, q)),
                ("dI dII + dII dI", self.d_I(p, q + 1) * self.d_II(p, q) + self.d_II(p + 1, q) * self.d_I(p, q)),
            )
            for name, product in checks:
                if not product.is_zero_matrix:
                    raise InvalidDifferentials(f"{name} != 0 at ({p}, {q}).")

    # total complex

    def layout(self, n: int) -> list[tuple[int, int, int]]:
        """(p, offset, dim) of the summands of tot^n, p ascending."""
        parts, offset = [], 0
        for p in range(n + 1):
            size = self.dim(p, n - p)
            if size:
                parts.append((p, offset, size))
                offset += size
        return parts

    def total_dim(self, n: int) -> int:
        return sum(size for _, _, size in self.layout(n)) if n >= 0 else 0

    def total_differential(self, n: int) -> Matrix:
        key = ("D", n)
        if key not in self._memo:
            matrix = zeros(self.total_dim(n + 1), self.total_dim(n))
            targets = {p: offset for p, offset, _ in self.layout(n + 1)}
            for p, offset, _ in self.layout(n):
                q = n - p
                if p + 1 in targets:
                    _place(matrix, targets[p + 1], offset, self.d_I(p, q))
                if p in targets:
                    _place(matrix, targets[p], offset, self.d_II(p, q))
            self._memo[key] = matrix
        return self._memo[key]

    def component(self, n: int, vector: Mapping[int, object], p: int) -> SparseVector:
        """The L^{p, n-p} part of a tot^n vector."""
        for pp, offset, size in self.layout(n):
            if pp == p:
                return {i - offset: Rational(v) for i, v in vector.items() if offset <= i < offset + size and v}
        return {}

    def embed(self, n: int, p: int, vector: Mapping[int, object]) -> SparseVector:
        for pp, offset, _ in self.layout(n):
            if pp == p:
                return {i + offset: Rational(v) for i, v in vector.items() if v}
        if any(vector.values()):
            raise DimensionMismatch(f"tot^{n} has no summand in column {p}.")
        return {}

    def filtration_indices(self, n: int, p: int) -> list[int]:
        return [offset + i for pp, offset, size in self.layout(n) if pp >= p for i in range(size)]

    # constructions

    def transpose(self) -> "Bicomplex":
        """Swap the roles of p and q, so pages are taken in the dI orientation."""
        return Bicomplex(
            {(q, p): n for (p, q), n in self.dims.items()},
            dI={(q, p): m for (p, q), m in self.dII.items()},
            dII={(q, p): m for (p, q), m in self.dI.items()},
        )

    def direct_sum(self, other: "Bicomplex") -> "Bicomplex":
        positions = set(self.dims) | set(other.dims)
        dims = {pos: self.dim(*pos) + other.dim(*pos) for pos in positions}
        dI, dII = {}, {}
        for p, q in positions:
            dI[(p, q)] = _block_diagonal(self.d_I(p, q), other.d_I(p, q))
            dII[(p, q)] = _block_diagonal(self.d_II(p, q), other.d_II(p, q))
        return Bicomplex(dims, dI, dII)

    def conjugate(self, T: Mapping[Position, Matrix]) -> "Bicomplex":
        """Change of basis x -> T x in every entry."""
        inverse = {pos: Matrix(m).inv() for pos, m in T.items()}
        forward = lambda pos: Matrix(T[pos]) if pos in T else eye(self.dim(*pos))
        backward = lambda pos: inverse[pos] if pos in inverse else eye(self.dim(*pos))
        dI = {(p, q): forward((p + 1, q)) * self.d_I(p, q) * backward((p, q)) for p, q in self.dims}
        dII = {(p, q): forward((p, q + 1)) * self.d_II(p, q) * backward((p, q)) for p, q in self.dims}
        return Bicomplex(self.dims, dI, dII)

    # pages

    def first_page_entry(self, p: int, q: int) -> Subquotient:
        key = ("E1", p, q)
        if key not in self._memo:
            self._memo[key] = kernel_mod_image(
                matrix_columns(self.d_II(p, q)),
                self.dim(p, q + 1),
                matrix_columns(self.d_II(p, q - 1)),
                self.dim(p, q),
            )
        return self._memo[key]

    def second_page_cycles(self, p: int, q: int) -> list[SparseVector]:
        """{x : dII x = 0 and dI x in im dII}."""
        n, below, right = self.dim(p, q), self.dim(p, q + 1), self.dim(p + 1, q)
        up = matrix_columns(self.d_II(p, q))
        across = matrix_columns(self.d_I(p, q))
        columns = []
        for j in range(n):
            column = dict(up[j])
            column.update({below + i: v for i, v in across[j].items()})
            columns.append(column)
        for z in matrix_columns(self.d_II(p + 1, q - 1)):
            columns.append({below + i: -v for i, v in z.items()})
        solutions = kernel(columns, below + right)
        return span_basis([{j: v for j, v in s.items() if j < n} for s in solutions], n)

    def second_page_boundaries(self, p: int, q: int) -> list[SparseVector]:
        """im dII + dI(ker dII one column to the left)."""
        vectors = matrix_columns(self.d_II(p, q - 1))
        left_cycles = kernel(matrix_columns(self.d_II(p - 1, q)), self.dim(p - 1, q + 1))
        vectors += [apply(self.d_I(p - 1, q), c) for c in left_cycles]
        return span_basis(vectors, self.dim(p, q))

    def second_page_entry(self, p: int, q: int) -> Subquotient:
        key = ("E2", p, q)
        if key not in self._memo:
            self._memo[key] = Subquotient(
                self.dim(p, q), self.second_page_cycles(p, q), self.second_page_boundaries(p, q)
            )
        return self._memo[key]


def _block_diagonal(*blocks: Matrix) -> Matrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    result = zeros(rows, cols)
    r = c = 0
    for block in blocks:
        _place(result, r, c, Matrix(block))
        r += block.rows
        c += block.cols
    return result


class BicomplexMap:
    """Family of matrices L^{p,q} -> M^{p+dp, q+dq}; absent components are zero."""

    def __init__(
        self,
        source: Bicomplex,
        target: Bicomplex,
        components: Mapping[Position, Matrix] | None = None,
        degree: Position = (0, 0),
    ):
        self.source, self.target, self.degree = source, target, degree
        self.components = {}
        dp, dq = degree
        for (p, q), matrix in (components or {}).items():
            matrix = ImmutableMatrix(matrix)
            expected = (target.dim(p + dp, q + dq), source.dim(p, q))
            if matrix.shape != expected:
                raise DimensionMismatch(f"Map component at ({p}, {q}) has shape {matrix.shape}, expected {expected}.")
            if not matrix.is_zero_matrix:
                self.components[(p, q)] = matrix

    def at(self, p: int, q: int) -> ImmutableMatrix:
        if (p, q) in self.components:
            return self.components[(p, q)]
        dp, dq = self.degree
        return _matrix(self.target.dim(p + dp, q + dq), self.source.dim(p, q))

    def apply(self, p: int, q: int, vector: Mapping[int, object]) -> SparseVector:
        return apply(self.at(p, q), vector)

    def is_chain_map(self) -> bool:
        if self.degree != (0, 0):
            return False
        S, T = self.source, self.target
        for p, q in S.dims:
            if self.at(p + 1, q) * S.d_I(p, q) != T.d_I(p, q) * self.at(p, q):
                logger.debug(f"Map does not commute with dI at ({p}, {q})")
                return False
            if self.at(p, q + 1) * S.d_II(p, q) != T.d_II(p, q) * self.at(p, q):
                logger.debug(f"Map does not commute with dII at ({p}, {q})")
                return False
        return True

    def total(self, n: int, vector: Mapping[int, object], signed: bool = False) -> SparseVector:
        """Induced map tot^n -> tot^{n+dp+dq}; ``signed`` multiplies column p by (-1)^p."""
        dp, dq = self.degree
        result: SparseVector = {}
        for p, _, _ in self.source.layout(n):
            image = self.apply(p, n - p, self.source.component(n, vector, p))
            if signed and p % 2:
                image = {i: -v for i, v in image.items()}
            combined = self.target.embed(n + dp + dq, p + dp, image)
            for i, v in combined.items():
                result[i] = result.get(i, 0) + v
        return {i: v for i, v in result.items() if v != 0}

    def total_matrix_columns(self, n: int) -> list[SparseVector]:
        return [self.total(n, {j: 1}) for j in range(self.source.total_dim(n))]

    def negated(self) -> "BicomplexMap":
        return BicomplexMap(self.source, self.target, {pos: -m for pos, m in self.components.items()}, self.degree)


@dataclass(frozen=True)
class ConeTriple:
    """A --f--> B --g--> C --k--> A[0, 1] with C the cone of f."""

    A: Bicomplex
    B: Bicomplex
    C: Bicomplex
    f: BicomplexMap
    g: BicomplexMap
    k: BicomplexMap


# pages


@dataclass
class PageData:
    n: int | str
    entries: dict[Position, Subquotient]

    @property
    def dims(self) -> dict[Position, int]:
        return {pos: sq.dim for pos, sq in self.entries.items()}

    @property
    def output_schema(self) -> pa.DataFrameSchema:
        return pa.DataFrameSchema(
            {
                "p": pa.Column(int, pa.Check.ge(0)),
                "q": pa.Column(int, pa.Check.ge(0)),
                "dim": pa.Column(int, pa.Check.ge(0)),
            },
            strict=True,
        )

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(
            [{"p": p, "q": q, "dim": sq.dim} for (p, q), sq in sorted(self.entries.items())],
            columns=["p", "q", "dim"],
        ).astype("int64")
        return self._validate(frame)

    def _validate(self, frame: pd.DataFrame) -> pd.DataFrame:
        return self.output_schema.validate(frame)


def _normalize_page(n) -> int | str:
    if n in (INFINITY, math.inf):
        return INFINITY
    if n not in (1, 2):
        raise ValueError(f"Only pages 1, 2 and {INFINITY!r} are available, got {n!r}.")
    return n


class TotalCohomology:
    """Cohomology of tot(L) together with its column filtration."""

    def __init__(self, L: Bicomplex):
        self.L = L
        self._quotients: dict[int, Subquotient] = {}

    @property
    def degrees(self) -> range:
        return range(self.L.max_total + 1)

    def differential_columns(self, n: int) -> list[SparseVector]:
        if n < 0:
            return []
        return matrix_columns(self.L.total_differential(n))

    def quotient(self, n: int) -> Subquotient:
        if n not in self._quotients:
            self._quotients[n] = kernel_mod_image(
                self.differential_columns(n), self.L.total_dim(n + 1), self.differential_columns(n - 1), self.L.total_dim(n)
            )
        return self._quotients[n]

    @property
    def dims(self) -> dict[int, int]:
        return {n: self.quotient(n).dim for n in self.degrees}

    def is_cocycle(self, n: int, vector: Mapping[int, object]) -> bool:
        return not apply(self.L.total_differential(n), vector)

    def filtered_cycles(self, n: int, p: int) -> list[SparseVector]:
        """ker D intersected with F_p tot^n."""
        indices = self.L.filtration_indices(n, p)
        columns = self.differential_columns(n)
        solutions = kernel([columns[i] for i in indices], self.L.total_dim(n + 1))
        return [{indices[j]: v for j, v in s.items()} for s in solutions]

    def filtered_boundaries(self, n: int, p: int) -> list[SparseVector]:
        """im D intersected with F_p tot^n."""
        columns = self.differential_columns(n - 1)
        if not columns:
            return []
        low = sorted(set(range(self.L.total_dim(n))) - set(self.L.filtration_indices(n, p)))
        position = {i: r for r, i in enumerate(low)}
        projected = [{position[i]: v for i, v in c.items() if i in position} for c in columns]
        solutions = kernel(projected, len(low))
        return span_basis([combine(columns, s) for s in solutions], self.L.total_dim(n))

    def graded_piece(self, p: int, q: int) -> Subquotient:
        """F_p H^{p+q} / F_{p+1} H^{p+q} inside tot^{p+q}."""
        n = p + q
        numerator = self.filtered_cycles(n, p)
        relations = self.filtered_cycles(n, p + 1) + self.filtered_boundaries(n, p)
        return Subquotient(self.L.total_dim(n), numerator, relations)


def total_cohomology(L: Bicomplex) -> TotalCohomology:
    key = ("H",)
    if key not in L._memo:
        L._memo[key] = TotalCohomology(L)
    return L._memo[key]


def page(L: Bicomplex, n) -> PageData:
    n = _normalize_page(n)
    if n == 1:
        entries = {pos: L.first_page_entry(*pos) for pos in L.dims}
    elif n == 2:
        entries = {pos: L.second_page_entry(*pos) for pos in L.dims}
    else:
        cohomology = total_cohomology(L)
        entries = {pos: cohomology.graded_piece(*pos) for pos in L.dims}
    logger.debug(f"E_{n} dimensions: {({pos: sq.dim for pos, sq in entries.items() if sq.dim})}")
    return PageData(n, entries)


def edge_map_eval(L: Bicomplex, n, p: int, q: int, x: Mapping[int, object]) -> tuple[Rational, ...]:
    """Class in E_n^{p,q} of a total cocycle x lying in F_p tot^{p+q}."""
    n = _normalize_page(n)
    degree = p + q
    allowed = set(L.filtration_indices(degree, p))
    if any(v != 0 and i not in allowed for i, v in x.items()):
        raise NotInFiltration(f"Total cocycle has components below column {p}.")
    cohomology = total_cohomology(L)
    if not cohomology.is_cocycle(degree, x):
        raise NotACocycle(f"Vector is not a cocycle of tot^{degree}.")

    if n == INFINITY:
        return cohomology.graded_piece(p, q).coordinates(x)
    entry = L.first_page_entry(p, q) if n == 1 else L.second_page_entry(p, q)
    return entry.coordinates(L.component(degree, x, p))


# cones


def tensor_bicomplex(complex_: CochainComplex, K: CochainComplex) -> Bicomplex:
    """M(V) = V (x) K: entry (p, q) is complex^q (x) K^p, dII carrying the sign (-1)^p."""
    dims, dI, dII = {}, {}, {}
    for q, a in complex_.dims.items():
        for p, k in K.dims.items():
            dims[(p, q)] = a * k
    for p, q in dims:
        if K.dim(p + 1):
            dI[(p, q)] = Matrix(kronecker_product(eye(complex_.dim(q)), Matrix(K.differential(p))))
        if complex_.dim(q + 1):
            sign = -1 if p % 2 else 1
            dII[(p, q)] = sign * Matrix(kronecker_product(Matrix(complex_.differential(q)), eye(K.dim(p))))
    return Bicomplex(dims, dI, dII)


def tensor_map(source: CochainComplex, target: CochainComplex, f: Mapping[int, Matrix], K: CochainComplex) -> BicomplexMap:
    A, B = tensor_bicomplex(source, K), tensor_bicomplex(target, K)
    components = {}
    for q in source.dims:
        if target.dim(q) and q in f:
            for p in K.dims:
                components[(p, q)] = Matrix(kronecker_product(Matrix(f[q]), eye(K.dim(p))))
    return BicomplexMap(A, B, components)


def _check_complex_map(source: CochainComplex, target: CochainComplex, f: Mapping[int, Matrix]) -> None:
    at = lambda n: Matrix(f[n]) if n in f else zeros(target.dim(n), source.dim(n))
    for n in set(source.dims) | set(target.dims):
        if at(n + 1) * source.differential(n) != target.differential(n) * at(n):
            raise NotChainMap(f"Map does not commute with the differentials in degree {n}.")


def build_cone_triple(source, target, f, K: CochainComplex | None = None) -> ConeTriple:
    """Cone of f, either for bicomplexes A, B directly or for complexes pushed through M(V) = V (x) K."""
    if K is not None:
        _check_complex_map(source, target, f)
        f = tensor_map(source, target, f, K)
        A, B = f.source, f.target
    else:
        A, B = source, target
        if not isinstance(f, BicomplexMap):
            f = BicomplexMap(A, B, f)
    if not f.is_chain_map():
        raise NotChainMap("f does not commute with dI and dII.")
    if any(q == 0 for _, q in A.dims):
        raise DimensionMismatch("The source must vanish in row q = 0, otherwise its cone leaves the first quadrant.")

    positions = {(p, q - 1) for p, q in A.dims} | set(B.dims)
    dims = {(p, q): A.dim(p, q + 1) + B.dim(p, q) for p, q in positions}
    dI, dII, g, k = {}, {}, {}, {}
    for p, q in positions:
        a, b = A.dim(p, q + 1), B.dim(p, q)
        dI[(p, q)] = _block_diagonal(A.d_I(p, q + 1), B.d_I(p, q))

        a_up, b_up = A.dim(p, q + 2), B.dim(p, q + 1)
        block = zeros(a_up + b_up, a + b)
        _place(block, 0, 0, -A.d_II(p, q + 1))
        _place(block, a_up, 0, (-1 if p % 2 else 1) * f.at(p, q + 1))
        _place(block, a_up, a, B.d_II(p, q))
        dII[(p, q)] = block

        g[(p, q)] = Matrix.vstack(zeros(a, b), eye(b)) if b else zeros(a, 0)
        k[(p, q)] = Matrix.hstack(eye(a), zeros(a, b)) if a else zeros(0, b)

    C = Bicomplex(dims, dI, dII)
    g_map = BicomplexMap(B, C, {pos: m for pos, m in g.items() if B.dim(*pos)})
    k_map = BicomplexMap(C, A, k, degree=(0, 1))
    logger.debug(f"Built cone with {sum(C.dims.values())} generators over {len(C.dims)} entries")
    return ConeTriple(A, B, C, f, g_map, k_map)


def minimal_residue_triple() -> ConeTriple:
    """Smallest triple whose residue quotient is nonzero.

    A is a single class a in (0, 1); B has b in (0, 0) with dII b = b' and dI b = c; f(a) = b'.
    """
    A = Bicomplex({(0, 1): 1})
    B = Bicomplex(
        {(0, 0): 1, (0, 1): 1, (1, 0): 1},
        dI={(0, 0): Matrix([[1]])},
        dII={(0, 0): Matrix([[1]])},
    )
    return build_cone_triple(A, B, {(0, 1): Matrix([[1]])})


def corrupt_triple(t: ConeTriple) -> ConeTriple:
    """Negative control: the same triple with k negated."""
    return ConeTriple(t.A, t.B, t.C, t.f, t.g, t.k.negated())


def residue_quotient(t: ConeTriple, p: int, q: int) -> Subquotient:
    """({x in Z2(A): f x in B2(B)} + B2(A)) / (B2(A) + k Z2(C)^{p,q-1}) inside A^{p,q}."""
    A, B, C = t.A, t.B, t.C
    cycles = A.second_page_cycles(p, q)
    images = [t.f.apply(p, q, z) for z in cycles]
    coefficients = preimage(images, B.second_page_boundaries(p, q), B.dim(p, q))
    lifted = [combine(cycles, c) for c in coefficients]
    boundaries = A.second_page_boundaries(p, q)
    killed = [t.k.apply(p, q - 1, z) for z in C.second_page_cycles(p, q - 1)] if q > 0 else []
    return Subquotient(A.dim(p, q), lifted + boundaries, boundaries + killed)


def phi(t: ConeTriple, p: int, q: int, beta: Mapping[int, object]) -> tuple[Rational, ...]:
    """Transport an E_2^{p+1,q}(B) class dying in E_2(C) to the residue quotient at (p, q+1).

    Writes g(beta) = dI sigma + dII rho with dII sigma = 0 and returns the class of k(sigma).
    """
    B, C = t.B, t.C
    if not B.second_page_entry(p + 1, q).contains(beta):
        raise NotInKernel(f"beta does not represent an E_2^{{{p + 1},{q}}}(B) class.")

    image = t.g.apply(p + 1, q, beta)
    sigmas = kernel(matrix_columns(C.d_II(p, q)), C.dim(p, q + 1))
    columns = [apply(C.d_I(p, q), s) for s in sigmas] + matrix_columns(C.d_II(p + 1, q - 1))
    solution = solve(columns, image, C.dim(p + 1, q))
    if solution is None:
        raise NotInKernel(f"g(beta) is nonzero in E_2^{{{p + 1},{q}}}(C).")

    sigma = combine(sigmas, {j: v for j, v in solution.items() if j < len(sigmas)})
    lifted = t.k.apply(p, q, sigma)
    try:
        return residue_quotient(t, p, q + 1).coordinates(lifted)
    except NotInSubspace as e:
        raise LiftFailed(f"k(sigma) left the residue quotient at ({p}, {q + 1}).") from e


# long exact sequence


def _induced(source: TotalCohomology, target: TotalCohomology, n: int, shift: int, image) -> list[SparseVector]:
    quotient = target.quotient(n + shift)
    return [sparse_vector(quotient.coordinates(image(r))) for r in source.quotient(n).representatives]


def cone_sequence_is_exact(t: ConeTriple) -> bool:
    """... -> H^n(A) -> H^n(B) -> H^n(C) -> H^{n+1}(A) -> ... is exact everywhere."""
    HA, HB, HC = total_cohomology(t.A), total_cohomology(t.B), total_cohomology(t.C)
    top = max(t.A.max_total, t.B.max_total, t.C.max_total) + 1
    ranks: dict[int, tuple[int, int, int]] = {}
    for n in range(top + 1):
        f_star = _induced(HA, HB, n, 0, lambda r: t.f.total(n, r))
        g_star = _induced(HB, HC, n, 0, lambda r: t.g.total(n, r))
        k_star = _induced(HC, HA, n, 1, lambda r: t.k.total(n, r, signed=True))
        compositions = (
            [HC.quotient(n).coordinates(t.g.total(n, t.f.total(n, r))) for r in HA.quotient(n).representatives]
            + [HA.quotient(n + 1).coordinates(t.k.total(n, t.g.total(n, r), signed=True)) for r in HB.quotient(n).representatives]
            + [HB.quotient(n + 1).coordinates(t.f.total(n + 1, t.k.total(n, r, signed=True))) for r in HC.quotient(n).representatives]
        )
        if any(any(c) for c in compositions):
            logger.debug(f"Consecutive maps do not compose to zero in degree {n}")
            return False
        ranks[n] = (
            rank(f_star, HB.quotient(n).dim),
            rank(g_star, HC.quotient(n).dim),
            rank(k_star, HA.quotient(n + 1).dim),
        )

    for n, (rank_f, rank_g, rank_k) in ranks.items():
        rank_k_before = ranks[n - 1][2] if n > 0 else 0
        exact = (
            rank_k_before + rank_f == HA.quotient(n).dim
            and rank_f + rank_g == HB.quotient(n).dim
            and rank_g + rank_k == HC.quotient(n).dim
        )
        if not exact:
            logger.debug(f"Cone sequence is not exact in degree {n}: ranks {rank_f}, {rank_g}, {rank_k}")
            return False
    return True


# verification


@dataclass(frozen=True)
class TripleCheck:
    checks: int
    nontrivial: int
    failures: int


def verify_triple(t: ConeTriple, phi_sign: int | None = None) -> TripleCheck:
    """Compare phi(v_2(f x)) with u_2(x) for a spanning set of F~_1 H^n(A), every n >= 1."""
    phi_sign = CONVENTIONS.phi_sign if phi_sign is None else phi_sign
    A, B = t.A, t.B
    checks = nontrivial = failures = 0

    for n in range(1, A.max_total + 1):
        size_a, size_b = A.total_dim(n), B.total_dim(n - 1)
        if not size_a:
            continue
        # unknowns (x, b): D_A x = 0 and the column-0 part of f x - D_B b vanishes
        D_A = matrix_columns(A.total_differential(n))
        D_B = matrix_columns(B.total_differential(n - 1)) if n >= 1 else []
        rows_a = A.total_dim(n + 1)
        column_zero = B.filtration_indices(n, 0)
        low = sorted(set(column_zero) - set(B.filtration_indices(n, 1)))
        position = {i: rows_a + r for r, i in enumerate(low)}

        columns = []
        for j in range(size_a):
            column = dict(D_A[j])
            column.update({position[i]: v for i, v in t.f.total(n, {j: 1}).items() if i in position})
            columns.append(column)
        for j in range(size_b):
            columns.append({position[i]: -v for i, v in D_B[j].items() if i in position})

        quotient = residue_quotient(t, 0, n)
        for solution in kernel(columns, rows_a + len(low)):
            x = {j: v for j, v in solution.items() if j < size_a}
            b = {j - size_a: v for j, v in solution.items() if j >= size_a}
            y = t.f.total(n, x)
            for i, v in combine(D_B, b).items():
                y[i] = y.get(i, 0) - v
            y = {i: v for i, v in y.items() if v != 0}

            expected = quotient.coordinates(A.component(n, x, 0))
            beta = B.component(n, y, 1)
            checks += 1
            try:
                found = tuple(phi_sign * c for c in phi(t, 0, n - 1, beta))
            except (NotInKernel, LiftFailed) as e:
                logger.error(f"phi failed in degree {n}: {e}")
                failures += 1
                continue
            if any(expected) or any(found):
                nontrivial += 1
            if found != expected:
                logger.debug(f"Cone lemma mismatch in degree {n}: phi gives {found}, u_2 gives {expected}")
                failures += 1

    return TripleCheck(checks, nontrivial, failures)


# random instances

ATOMS = ("point", "hpair", "vpair", "square", "zigzag")


def _atom(kind: str, p: int, q: int, rng: np.random.Generator) -> Bicomplex:
    one = lambda: Matrix([[_nonzero(rng)]])
    if kind == "point":
        return Bicomplex({(p, q): 1})
    if kind == "hpair":
        return Bicomplex({(p, q): 1, (p + 1, q): 1}, dI={(p, q): one()})
    if kind == "vpair":
        return Bicomplex({(p, q): 1, (p, q + 1): 1}, dII={(p, q): one()})
    if kind == "square":
        lam, mu, rho = _nonzero(rng), _nonzero(rng), _nonzero(rng)
        nu = Rational(-rho * lam, mu)
        return Bicomplex(
            {(p, q): 1, (p + 1, q): 1, (p, q + 1): 1, (p + 1, q + 1): 1},
            dI={(p, q): Matrix([[lam]]), (p, q + 1): Matrix([[nu]])},
            dII={(p, q): Matrix([[mu]]), (p + 1, q): Matrix([[rho]])},
        )
    if kind == "zigzag":
        # a at (p, q+1), e at (p+1, q) with dI a = dII e = c at (p+1, q+1), dI e = f at (p+2, q): d_2 a = -f
        return Bicomplex(
            {(p, q + 1): 1, (p + 1, q + 1): 1, (p + 1, q): 1, (p + 2, q): 1},
            dI={(p, q + 1): one(), (p + 1, q): one()},
            dII={(p + 1, q): one()},
        )
    raise ValueError(f"Unknown atom {kind!r}. Choose one of {ATOMS}.")


def random_bicomplex(
    rng: np.random.Generator,
    max_dim: int = 4,
    size: int = 3,
    columns: int | None = None,
    q_min: int = 0,
    kinds: Sequence[str] = ATOMS,
    atoms: int | None = None,
) -> Bicomplex:
    """Direct sum of random atoms in a ``columns x size`` window, in a random unipotent basis."""
    columns = size if columns is None else columns
    count = int(rng.integers(0, 2 * max_dim + 1)) if atoms is None else atoms
    pieces = []
    occupancy: dict[Position, int] = {}
    for _ in range(count):
        kind = str(rng.choice(list(kinds)))
        p = int(rng.integers(0, columns))
        q = int(rng.integers(q_min, q_min + size))
        atom = _atom(kind, p, q, rng)
        inside = all(pp < columns and q_min <= qq < q_min + size for pp, qq in atom.dims)
        fits = all(occupancy.get(pos, 0) + n <= max_dim for pos, n in atom.dims.items())
        if inside and fits:
            pieces.append(atom)
            for pos, n in atom.dims.items():
                occupancy[pos] = occupancy.get(pos, 0) + n
    L = reduce(Bicomplex.direct_sum, pieces, Bicomplex({}))
    return L.conjugate({pos: _unipotent(n, rng) for pos, n in L.dims.items()})


def random_chain_map(A: Bicomplex, B: Bicomplex, rng: np.random.Generator) -> BicomplexMap:
    """Random integer combination of a basis of all chain maps A -> B."""
    slots = [(pos, i, j) for pos in A.dims for i in range(B.dim(*pos)) for j in range(A.dim(*pos))]
    if not slots:
        return BicomplexMap(A, B)

    rows: dict[tuple, int] = {}
    columns = []
    for (p, q), i, j in slots:
        unit = zeros(B.dim(p, q), A.dim(p, q))
        unit[i, j] = 1
        column: SparseVector = {}
        # f dI - dI f and f dII - dII f, restricted to the equations this slot enters
        equations = (
            (("I", p, q), -B.d_I(p, q) * unit),
            (("II", p, q), -B.d_II(p, q) * unit),
            (("I", p - 1, q), unit * A.d_I(p - 1, q)),
            (("II", p, q - 1), unit * A.d_II(p, q - 1)),
        )
        for key, residual in equations:
            for r in range(residual.rows):
                for c in range(residual.cols):
                    if residual[r, c] != 0:
                        index = rows.setdefault(key + (r, c), len(rows))
                        column[index] = column.get(index, 0) + residual[r, c]
        columns.append(column)

    basis = kernel(columns, len(rows))
    weights = {b: int(rng.integers(-2, 3)) for b in range(len(basis))}
    solution = combine(basis, weights)
    components: dict[Position, Matrix] = {}
    for s, ((p, q), i, j) in enumerate(slots):
        if solution.get(s):
            components.setdefault((p, q), zeros(B.dim(p, q), A.dim(p, q)))[i, j] = solution[s]
    return BicomplexMap(A, B, components)


TRIAL_KINDS = ("tensor", "bicomplex", "residue", "extra")


def random_cone_triple(
    rng: np.random.Generator,
    kind: str,
    max_dim: int = 4,
    max_length: int = 3,
    k_length: int = 2,
) -> ConeTriple:
    if kind == "tensor":
        source = CochainComplex.from_column(
            random_bicomplex(rng, max_dim, max_length, columns=1, q_min=1, kinds=("point", "vpair"))
        )
        target = CochainComplex.from_column(
            random_bicomplex(rng, max_dim, max_length + 1, columns=1, kinds=("point", "vpair"))
        )
        K = CochainComplex.from_column(random_bicomplex(rng, 2, k_length, columns=1, kinds=("point", "vpair")))
        f = random_chain_map(source.as_column(), target.as_column(), rng)
        return build_cone_triple(source, target, {q: m for (_, q), m in f.components.items()}, K)
    if kind == "bicomplex":
        A = random_bicomplex(rng, max_dim, max_length, q_min=1)
        B = random_bicomplex(rng, max_dim, max_length + 1)
        return build_cone_triple(A, B, random_chain_map(A, B, rng))
    if kind == "residue":
        base = minimal_residue_triple()
        A = random_bicomplex(rng, max_dim - 1, max_length, q_min=1)
        B = random_bicomplex(rng, max_dim - 1, max_length + 1)
        extra = random_chain_map(A, B, rng)
        A_sum, B_sum = base.A.direct_sum(A), base.B.direct_sum(B)
        components = {
            pos: _block_diagonal(base.f.at(*pos), extra.at(*pos)) for pos in set(A_sum.dims)
        }
        T_A = {pos: _unipotent(n, rng) for pos, n in A_sum.dims.items()}
        T_B = {pos: _unipotent(n, rng) for pos, n in B_sum.dims.items()}
        conjugated = {pos: Matrix(T_B[pos]) * m * Matrix(T_A[pos]).inv() for pos, m in components.items() if pos in T_B}
        return build_cone_triple(A_sum.conjugate(T_A), B_sum.conjugate(T_B), conjugated)
    raise ValueError(f"Unknown trial kind {kind!r}. Choose one of {TRIAL_KINDS[:3]}.")


@dataclass
class ConeLemmaReport:
    seed: int
    phi_sign: int
    trials: pd.DataFrame

    @property
    def output_schema(self) -> pa.DataFrameSchema:
        return pa.DataFrameSchema(
            {
                "trial": pa.Column(int, pa.Check.ge(0)),
                "seed": pa.Column(int),
                "kind": pa.Column(str, pa.Check.isin(TRIAL_KINDS)),
                "checks": pa.Column(int, pa.Check.ge(0)),
                "nontrivial": pa.Column(int, pa.Check.ge(0)),
                "failures": pa.Column(int, pa.Check.ge(0)),
                "passed": pa.Column(bool),
            },
            strict=True,
        )

    def __post_init__(self):
        self.trials = self.output_schema.validate(self.trials)

    @property
    def passed(self) -> bool:
        return int(self.trials["failures"].sum()) == 0

    @property
    def failures(self) -> int:
        return int(self.trials["failures"].sum())

    def to_json_lines(self) -> str:
        if self.trials.empty:
            return ""
        return self.trials.to_json(orient="records", lines=True)


TRIAL_COLUMNS = {"trial": "int64", "seed": "int64", "kind": "object", "checks": "int64", "nontrivial": "int64", "failures": "int64", "passed": "bool"}


def verify_cone_lemma(
    seed: int = 1,
    trials: int = 100,
    max_dim: int = 4,
    max_length: int = 3,
    k_length: int = 2,
    extra_triples: Sequence[ConeTriple] = (),
    phi_sign: int | None = None,
) -> ConeLemmaReport:
    """Randomized check that phi(v_2(f x)) = u_2(x); failures are reported, never raised."""
    phi_sign = CONVENTIONS.phi_sign if phi_sign is None else phi_sign
    rows = []
    jobs: list[tuple[str, Callable[[], ConeTriple]]] = []
    for trial in range(trials):
        kind = TRIAL_KINDS[trial % 3]
        rng = np.random.default_rng([seed, trial])
        jobs.append((kind, lambda rng=rng, kind=kind: random_cone_triple(rng, kind, max_dim, max_length, k_length)))
    for t in extra_triples:
        jobs.append(("extra", lambda t=t: t))

    for index, (kind, build) in enumerate(jobs):
        try:
            result = verify_triple(build(), phi_sign)
        except (NotInSubspace, NotChainMap, InvalidDifferentials) as e:
            logger.error(f"Trial {index} ({kind}) could not be checked: {e}", exc_info=True)
            result = TripleCheck(0, 0, 1)
        rows.append(
            {
                "trial": index,
                "seed": seed,
                "kind": kind,
                "checks": result.checks,
                "nontrivial": result.nontrivial,
                "failures": result.failures,
                "passed": result.failures == 0,
            }
        )
        logger.debug(f"Trial {index} ({kind}): {result}")

    frame = pd.DataFrame(rows, columns=list(TRIAL_COLUMNS)).astype(TRIAL_COLUMNS)
    report = ConeLemmaReport(seed, phi_sign, frame)
    logger.info(f"Cone lemma: {len(frame) - int((~frame['passed']).sum()) if len(frame) else 0}/{len(frame)} trials passed")
    return report
