"""Exterior algebra on the dual of ``slot_count`` copies of a Lie algebra.

Generators are numbered slot-major: generator ``slot * space_dim + basis`` is the
coordinate function ``basis`` on copy ``slot``. Monomials are strictly increasing
index tuples, so a monomial's sign is fixed by sorting.

Forms are evaluated with the division convention
``(a1^...^ad)(v1, ..., vd) = det[ai(vj)] / d!``; in particular
``(x^y)(u, v) = (x(u)y(v) - x(v)y(u)) / 2``.
"""

import logging
import re
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import factorial
from typing import TYPE_CHECKING

from sympy import Matrix, Rational

from .conventions import CONVENTIONS
from .errors import ArityMismatch, DimensionMismatch, NotHomogeneous, ParseError
from .lie_core import default_dual_labels

if TYPE_CHECKING:
    from .lie_core import LieAlgebra

logger = logging.getLogger(__name__)

Monomial = tuple[int, ...]


def sort_with_sign(indices: Sequence[int]) -> tuple[int, Monomial]:
    """Sign of the sorting permutation and the sorted tuple; sign 0 on repeats."""
    if len(set(indices)) != len(indices):
        return 0, ()
    inversions = sum(1 for a, b in combinations(indices, 2) if a > b)
    return (-1 if inversions % 2 else 1), tuple(sorted(indices))


def _accumulate(terms: dict[Monomial, Rational], monomial: Monomial, value) -> None:
    updated = terms.get(monomial, 0) + value
    if updated == 0:
        terms.pop(monomial, None)
    else:
        terms[monomial] = updated


@dataclass(frozen=True)
class Form:
    space_dim: int
    slot_count: int = 1
    terms: Mapping[Monomial, Rational] = field(default_factory=dict)

    def __post_init__(self):
        if self.space_dim <= 0 or self.slot_count <= 0:
            raise DimensionMismatch(f"Invalid form space {self.space_dim}x{self.slot_count}.")
        n = self.generator_count
        cleaned = {}
        for monomial, value in self.terms.items():
            monomial = tuple(monomial)
            if any(b <= a for a, b in zip(monomial, monomial[1:])):
                raise ValueError(f"Monomial {monomial} is not strictly increasing.")
            if monomial and (monomial[0] < 0 or monomial[-1] >= n):
                raise DimensionMismatch(f"Monomial {monomial} uses generators outside 0..{n - 1}.")
            if value != 0:
                cleaned[monomial] = Rational(value)
        object.__setattr__(self, "terms", cleaned)

    @property
    def generator_count(self) -> int:
        return self.space_dim * self.slot_count

    @classmethod
    def zero(cls, space_dim: int, slot_count: int = 1) -> "Form":
        return cls(space_dim, slot_count, {})

    @classmethod
    def constant(cls, value, space_dim: int, slot_count: int = 1) -> "Form":
        return cls(space_dim, slot_count, {(): value})

    @classmethod
    def generator(cls, basis: int, slot: int, space_dim: int, slot_count: int = 1) -> "Form":
        if not (0 <= basis < space_dim and 0 <= slot < slot_count):
            raise DimensionMismatch(f"Generator ({basis}, {slot}) outside {space_dim}x{slot_count}.")
        return cls(space_dim, slot_count, {(slot * space_dim + basis,): 1})

    def split(self, index: int) -> tuple[int, int]:
        """Generator index -> (basis, slot)."""
        return index % self.space_dim, index // self.space_dim

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degrees(self) -> set[int]:
        return {len(m) for m in self.terms}

    @property
    def degree(self) -> int | None:
        """Common degree of all terms; None for the zero form."""
        degrees = self.degrees
        if len(degrees) > 1:
            raise NotHomogeneous(f"Form mixes degrees {sorted(degrees)}.")
        return degrees.pop() if degrees else None

    def _check_compatible(self, other: "Form") -> None:
        if (self.space_dim, self.slot_count) != (other.space_dim, other.slot_count):
            raise DimensionMismatch(
                f"Forms live on different spaces: {self.space_dim}x{self.slot_count} "
                f"vs {other.space_dim}x{other.slot_count}."
            )

    def __add__(self, other: "Form") -> "Form":
        self._check_compatible(other)
        terms = dict(self.terms)
        for monomial, value in other.terms.items():
            _accumulate(terms, monomial, value)
        return Form(self.space_dim, self.slot_count, terms)

    def __neg__(self) -> "Form":
        return Form(self.space_dim, self.slot_count, {m: -v for m, v in self.terms.items()})

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def __mul__(self, scalar) -> "Form":
        if isinstance(scalar, Form):
            raise TypeError("Use wedge() to multiply two forms.")
        scalar = Rational(scalar)
        return Form(self.space_dim, self.slot_count, {m: v * scalar for m, v in self.terms.items()})

    __rmul__ = __mul__

    def wedge(self, other: "Form") -> "Form":
        return wedge(self, other)

    def __str__(self) -> str:
        return format_form(self)


def wedge(a: Form, b: Form) -> Form:
    a._check_compatible(b)
    terms: dict[Monomial, Rational] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            sign, monomial = sort_with_sign(ma + mb)
            if sign:
                _accumulate(terms, monomial, sign * ca * cb)
    return Form(a.space_dim, a.slot_count, terms)


def wedge_all(forms: Sequence[Form]) -> Form:
    result = forms[0]
    for form in forms[1:]:
        result = wedge(result, form)
    return result


def substitute(
    a: Form,
    images: Callable[[int], Mapping[int, object]],
    slot_count: int,
    space_dim: int | None = None,
) -> Form:
    """Algebra map sending generator g to the degree-one form ``images(g)``."""
    space_dim = space_dim or a.space_dim
    terms: dict[Monomial, Rational] = {}
    cache: dict[int, Mapping[int, object]] = {}
    for monomial, value in a.terms.items():
        partial: dict[Monomial, Rational] = {(): value}
        for g in monomial:
            if g not in cache:
                cache[g] = images(g)
            expanded: dict[Monomial, Rational] = {}
            for current, coefficient in partial.items():
                for h, weight in cache[g].items():
                    if weight == 0 or h in current:
                        continue
                    sign = -1 if sum(1 for c in current if c > h) % 2 else 1
                    _accumulate(expanded, tuple(sorted(current + (h,))), sign * coefficient * weight)
            partial = expanded
            if not partial:
                break
        for monomial_out, coefficient in partial.items():
            _accumulate(terms, monomial_out, coefficient)
    return Form(space_dim, slot_count, terms)


@lru_cache(maxsize=32)
def _generator_differentials(g: "LieAlgebra", sign: int) -> tuple[tuple[tuple[int, int, Rational], ...], ...]:
    """delta(xi^k) = sign * 2 * sum_{i<j} c_ij^k xi^i ^ xi^j, as (i, j, coefficient) lists.

    The factor 2 makes (delta xi)(u, v) = sign * xi([u, v]) under the division convention.
    """
    table: list[list[tuple[int, int, Rational]]] = [[] for _ in range(g.dim)]
    for i, j, k, c in g.nonzero_brackets:
        table[k].append((i, j, sign * 2 * c))
    return tuple(tuple(entries) for entries in table)


def ce_differential(a: Form, g: "LieAlgebra", sign: int | None = None) -> Form:
    """Chevalley-Eilenberg differential, acting on each slot separately."""
    if a.space_dim != g.dim:
        raise DimensionMismatch(f"Form on {a.space_dim} generators per slot, algebra of dimension {g.dim}.")
    sign = CONVENTIONS.ce_sign if sign is None else sign
    table = _generator_differentials(g, sign)

    dim = a.space_dim
    terms: dict[Monomial, Rational] = {}
    for monomial, value in a.terms.items():
        for position, generator in enumerate(monomial):
            basis, slot = generator % dim, generator // dim
            offset = slot * dim
            parity = -1 if position % 2 else 1
            for i, j, c in table[basis]:
                replaced = monomial[:position] + (offset + i, offset + j) + monomial[position + 1:]
                perm_sign, sorted_monomial = sort_with_sign(replaced)
                if perm_sign:
                    _accumulate(terms, sorted_monomial, parity * perm_sign * c * value)
    return Form(a.space_dim, a.slot_count, terms)


@lru_cache(maxsize=32)
def _coadjoint_images(g: "LieAlgebra") -> tuple[tuple[tuple[tuple[int, Rational], ...], ...], ...]:
    """[i][k] lists (j, c_ij^k): b_i sends xi^k to sum_j c_ij^k xi^j."""
    n = g.dim
    return tuple(
        tuple(tuple((j, g.structure_constants[i][j][k]) for j in range(n) if g.structure_constants[i][j][k] != 0) for k in range(n))
        for i in range(n)
    )


def coadjoint_action(a: Form, g: "LieAlgebra", i: int) -> Form:
    """Diagonal action of b_i: the same coadjoint derivation on every slot."""
    if a.space_dim != g.dim:
        raise DimensionMismatch(f"Form on {a.space_dim} generators per slot, algebra of dimension {g.dim}.")
    images = _coadjoint_images(g)[i]

    dim = a.space_dim
    terms: dict[Monomial, Rational] = {}
    for monomial, value in a.terms.items():
        for position, generator in enumerate(monomial):
            offset = generator - generator % dim
            for j, c in images[generator % dim]:
                perm_sign, sorted_monomial = sort_with_sign(monomial[:position] + (offset + j,) + monomial[position + 1:])
                if perm_sign:
                    _accumulate(terms, sorted_monomial, perm_sign * c * value)
    return Form(a.space_dim, a.slot_count, terms)


def evaluate(a: Form, vectors: Sequence[Sequence]) -> Rational:
    """Value of ``a`` on basis-coefficient vectors of the ``slot_count * space_dim`` space."""
    if a.is_zero():
        return Rational(0)
    degree = a.degree
    if len(vectors) != degree:
        raise ArityMismatch(f"Form of degree {degree} evaluated on {len(vectors)} vectors.")
    for vector in vectors:
        if len(vector) != a.generator_count:
            raise DimensionMismatch(f"Vector of length {len(vector)}, expected {a.generator_count}.")
    if degree == 0:
        return a.terms[()]

    total = Rational(0)
    for monomial, value in a.terms.items():
        matrix = Matrix(degree, degree, lambda r, c: vectors[c][monomial[r]])
        total += value * matrix.det()
    return total / factorial(degree)


_GENERATOR = re.compile(r"^([A-Za-z_]+)(\d*)$")
_COEFFICIENT = re.compile(r"^(\d+(?:/\d+)?)?\s*\*?\s*(.*)$")


def parse_form(text: str, labels: Sequence[str], slot_count: int = 1) -> Form:
    """Parse terms like ``3/2 x1^y2^z1 - y1``; the digit after a label is the 1-based slot.

    Bare labels are accepted when ``slot_count`` is 1.
    """
    space_dim = len(labels)
    lookup = {label: i for i, label in enumerate(labels)}
    stripped = text.strip()
    if not stripped:
        raise ParseError("Empty form expression.")

    terms: dict[Monomial, Rational] = {}
    chunks = re.findall(r"([+-]?)\s*([^+-]+)", stripped)
    if "".join(s + c for s, c in chunks).replace(" ", "") != stripped.replace(" ", ""):
        raise ParseError(f"Cannot split {text!r} into terms.")

    for sign_text, body in chunks:
        match = _COEFFICIENT.match(body.strip())
        coefficient = Rational(match.group(1)) if match.group(1) else Rational(1)
        monomial_text = match.group(2).strip()
        if sign_text == "-":
            coefficient = -coefficient

        if monomial_text in ("", "1"):
            if not match.group(1) and monomial_text == "":
                raise ParseError(f"Empty term in {text!r}.")
            _accumulate(terms, (), coefficient)
            continue

        indices = []
        for token in monomial_text.split("^"):
            generator = _GENERATOR.match(token.strip())
            if generator is None or generator.group(1) not in lookup:
                raise ParseError(f"Unknown generator {token!r} in {text!r}; labels are {list(labels)}.")
            if generator.group(2):
                slot = int(generator.group(2)) - 1
            elif slot_count == 1:
                slot = 0
            else:
                raise ParseError(f"Generator {token!r} needs a slot number.")
            if not 0 <= slot < slot_count:
                raise ParseError(f"Slot {slot + 1} of {token!r} outside 1..{slot_count}.")
            indices.append(slot * space_dim + lookup[generator.group(1)])

        sign, monomial = sort_with_sign(indices)
        if sign:
            _accumulate(terms, monomial, sign * coefficient)

    return Form(space_dim, slot_count, terms)


def format_form(a: Form, labels: Sequence[str] | None = None) -> str:
    if a.is_zero():
        return "0"
    labels = labels or default_dual_labels(a.space_dim)

    def name(index: int) -> str:
        basis, slot = a.split(index)
        return labels[basis] if a.slot_count == 1 else f"{labels[basis]}{slot + 1}"

    parts = []
    for monomial in sorted(a.terms, key=lambda m: (len(m), m)):
        value = a.terms[monomial]
        body = "^".join(name(i) for i in monomial) or "1"
        term = f"{abs(value)} {body}"
        if not parts:
            parts.append(f"-{term}" if value < 0 else term)
        else:
            parts.append(f"- {term}" if value < 0 else f"+ {term}")
    return " ".join(parts)
