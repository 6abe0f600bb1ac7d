"""Text syntax for polynomials: sympy expressions with ``^`` accepted for powers."""

import logging
from tokenize import TokenError

from sympy import Symbol
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from sympy.polys.polyerrors import CoercionFailed
from sympy.polys.rings import PolyElement, PolyRing

from .errors import ParseError

logger = logging.getLogger(__name__)

_TRANSFORMATIONS = standard_transformations + (convert_xor,)


def parse_polynomial(text: str, poly_ring: PolyRing) -> PolyElement:
    """Parse ``text`` into an element of ``poly_ring``; only the ring's symbols are allowed."""
    if text is None or not str(text).strip():
        raise ParseError("Empty polynomial expression.")

    names = {str(s): Symbol(str(s)) for s in poly_ring.symbols}
    try:
        expr = parse_expr(str(text), local_dict=names, transformations=_TRANSFORMATIONS)
    except (SyntaxError, TokenError, TypeError, AttributeError) as e:
        raise ParseError(f"Cannot parse polynomial {text!r}: {e}") from e

    unknown = {str(s) for s in expr.free_symbols} - set(names)
    if unknown:
        raise ParseError(f"Unknown variables {sorted(unknown)} in {text!r}. Allowed: {list(names)}")

    try:
        return poly_ring.from_expr(expr)
    except (ValueError, CoercionFailed) as e:
        raise ParseError(f"{text!r} is not a polynomial with rational coefficients: {e}") from e


def format_polynomial(poly: PolyElement) -> str:
    if not poly:
        return "0"
    return str(poly.as_expr()).replace("**", "^")
