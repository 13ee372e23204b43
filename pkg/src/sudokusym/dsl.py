"""Parser for symmetry expressions such as ``r[987654321] d r[987654321]``.

Grammar::

    expr   := factor+                      juxtaposition composes right to left
    factor := atom ('^' '-'? integer)?
    atom   := 'E' | 'd' | 'H' | 'H1' | 'D' | 'V' | 'W' | 'F'
            | 'r[' digits ']'               row permutation literal
            | 'c[' digits ']'               column permutation, i.e. d r d

Whitespace between factors is optional.
"""

from __future__ import annotations

import re

from . import group
from .errors import ExprSyntaxError, SudokuSymError, UnsupportedBox
from .group import GridSymmetry
from .perm import BoxSize, band_perm_from_images

__all__ = ["parse_expr", "parse_perm_literal"]

_TOKEN = re.compile(
    r"\s*(?:(?P<lit>[rc])\[(?P<digits>[^\]]*)\]|(?P<name>H1|[EdHDVWF]))(?:\^(?P<exp>-?\d+))?"
)


def parse_perm_literal(digits: str, box=BoxSize(3), position: int = 0):
    box = box if isinstance(box, BoxSize) else BoxSize(int(box))
    if box.n > 9:
        raise UnsupportedBox("permutation literals need N <= 9")
    if not digits.isdigit() or len(digits) != box.n:
        raise ExprSyntaxError(f"expected {box.n} digits in permutation literal, got {digits!r}", position)
    try:
        return band_perm_from_images([int(ch) for ch in digits], box)
    except SudokuSymError as exc:
        raise ExprSyntaxError(str(exc), position) from exc


def _atom(m: re.Match, box: BoxSize) -> GridSymmetry:
    if m.group("lit"):
        p = parse_perm_literal(m.group("digits"), box, m.start("digits"))
        return group.row_symmetry(p) if m.group("lit") == "r" else group.col_symmetry(p)
    name = m.group("name")
    if name == "E":
        return group.identity(box)
    if name == "d":
        return group.transpose_symmetry(box)
    try:
        return group.named_symmetry(name, box)
    except UnsupportedBox as exc:
        raise ExprSyntaxError(str(exc), m.start("name")) from exc


def parse_expr(text: str, box=BoxSize(3)) -> GridSymmetry:
    """Evaluate an expression to its normal form.

    >>> parse_expr("V^4") == group.identity()
    True
    """
    box = box if isinstance(box, BoxSize) else BoxSize(int(box))
    factors = []
    pos = 0
    end = len(text.rstrip())
    while pos < end:
        m = _TOKEN.match(text, pos)
        if not m:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExprSyntaxError(f"unexpected {text[bad]!r}", bad)
        g = _atom(m, box)
        if m.group("exp") is not None:
            g = group.power(g, int(m.group("exp")))
        factors.append(g)
        pos = m.end()
    if not factors:
        raise ExprSyntaxError("empty expression", 0)
    result = factors[-1]
    for g in reversed(factors[:-1]):
        result = group.compose(g, result)
    return result
