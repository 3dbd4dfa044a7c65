"""
Parsing and evaluation of polynomial strings such as "x1*x2 + 3/2*x3^2".
"""

import logging
import re
from collections.abc import Mapping, Sequence
from tokenize import TokenError
from typing import Any

from sympy import QQ, Expr, Integer, Poly, Rational, Symbol
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr,
    standard_transformations,
)

from quiver_semi_invariants.errors import FileFormatError, UnknownSymbol

logger = logging.getLogger(__name__)

TRANSFORMATIONS = standard_transformations + (convert_xor,)

# Names, integers, + - * / ^ and parentheses; no attribute access or dunders.
ALLOWED_TEXT = re.compile(r"[A-Za-z0-9_\s+\-*/^()]*")


def _sandbox() -> dict[str, Any]:
    """Globals for parse_expr: only the constructors the transformations emit."""
    return {"__builtins__": {}, "Integer": Integer, "Rational": Rational, "Symbol": Symbol}


def symbols_for(names: Sequence[str]) -> tuple[Symbol, ...]:
    return tuple(Symbol(n) for n in names)


def parse_polynomial(text: str, names: Sequence[str], context: str = "polynomial") -> Expr:
    """Parse `text` as a polynomial with rational coefficients in the given names."""
    if not ALLOWED_TEXT.fullmatch(text) or "__" in text:
        raise FileFormatError(f"{context} {text!r} contains characters outside + - * / ^ ( ), names and integers")
    local: dict[str, Any] = {n: Symbol(n) for n in names}
    try:
        expr = parse_expr(text, local_dict=local, global_dict=_sandbox(), transformations=TRANSFORMATIONS)
    except (SyntaxError, TokenError, TypeError, ValueError, NameError) as e:
        raise FileFormatError(f"cannot parse {context} {text!r}: {e}") from e
    unknown = sorted(str(s) for s in expr.free_symbols if str(s) not in local)
    if unknown:
        raise UnknownSymbol(f"{context} {text!r} uses unknown names {unknown}")
    if not expr.is_polynomial(*local.values()):
        raise FileFormatError(f"{context} {text!r} is not a polynomial")
    return expr


def to_poly(expr: Expr, gens: Sequence[Symbol]) -> Poly:
    return Poly(expr, *gens, domain=QQ)


def evaluate(expr: Expr, values: Mapping[Symbol, Any]) -> Rational:
    """Exact value of expr with every symbol replaced by a rational number."""
    return Rational(expr.xreplace(dict(values)))
