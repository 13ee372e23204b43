"""Sudoku grids, their validity, and the action of symmetries and relabelings.

Cells are indexed ``a[i, j]`` with 1-based ``i, j`` in the public surface;
value 0 marks an empty cell. Grids are immutable.

Text formats:

* ``line``  -- ``N*N`` characters on one line, ``.`` (or ``0``) for empty;
  digits above 9 use letters ``A``, ``B``, ...
* ``block`` -- ``N`` lines of ``N`` characters
* ``json``  -- ``{"box": b, "cells": [[...], ...]}``
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass

import numpy as np

from .errors import BadCharacter, BadLength, BoxMismatch, NotABijection
from .group import GridSymmetry, act_on_array
from .perm import BoxSize, band_table

__all__ = [
    "Grid",
    "DigitPermutation",
    "parse_grid",
    "serialize_grid",
    "apply_symmetry",
    "apply_relabel",
    "first_occurrence_relabel",
    "digit_group_order",
    "shifted_grid",
    "random_complete_grid",
    "random_digit_permutation",
]

_SYMBOLS = "123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ"


class Grid:
    __slots__ = ("box", "cells")

    def __init__(self, cells, box: BoxSize | int | None = None):
        arr = np.array(cells, dtype=np.int8)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise BadLength(f"grid must be square, got shape {arr.shape}")
        if box is None:
            b = math.isqrt(arr.shape[0])
            box = BoxSize(b)
        elif not isinstance(box, BoxSize):
            box = BoxSize(int(box))
        if arr.shape[0] != box.n:
            raise BadLength(f"expected a {box.n}x{box.n} grid, got {arr.shape[0]}x{arr.shape[1]}")
        if arr.min() < 0 or arr.max() > box.n:
            raise BadCharacter(f"cell values must lie in 0..{box.n}")
        arr.setflags(write=False)
        object.__setattr__(self, "box", box)
        object.__setattr__(self, "cells", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Grid is immutable")

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (1 <= i <= self.box.n and 1 <= j <= self.box.n):
            raise IndexError(f"cell ({i}, {j}) out of range")
        return int(self.cells[i - 1, j - 1])

    def __eq__(self, other):
        if not isinstance(other, Grid):
            return NotImplemented
        return self.box == other.box and np.array_equal(self.cells, other.cells)

    def __hash__(self):
        return hash((self.box.b, self.cells.tobytes()))

    def __repr__(self):
        return f"Grid({serialize_grid(self)!r})"

    def key(self) -> bytes:
        """Row-major cell bytes; byte order equals line-format string order."""
        return self.cells.tobytes()

    def _houses(self):
        b, n = self.box.b, self.box.n
        c = self.cells
        for k in range(n):
            yield c[k, :]
            yield c[:, k]
        for bi in range(b):
            for bj in range(b):
                yield c[bi * b:(bi + 1) * b, bj * b:(bj + 1) * b].ravel()

    def is_valid(self) -> bool:
        """No digit repeats in any row, column or block (empty cells ignored)."""
        for house in self._houses():
            filled = house[house != 0]
            if len(filled) != len(np.unique(filled)):
                return False
        return True

    def is_complete(self) -> bool:
        return not (self.cells == 0).any() and self.is_valid()


@dataclass(frozen=True)
class DigitPermutation:
    """Relabeling of digits: ``images[v - 1]`` replaces ``v``; 0 stays 0."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(v) for v in self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise NotABijection(f"{list(images)} is not a permutation of 1..{len(images)}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, n: int = 9) -> DigitPermutation:
        return cls(tuple(range(1, n + 1)))

    def __call__(self, v: int) -> int:
        return 0 if v == 0 else self.images[v - 1]

    def lookup(self) -> np.ndarray:
        return np.array((0,) + self.images, dtype=np.int8)


def digit_group_order(box=BoxSize(3)) -> int:
    box = box if isinstance(box, BoxSize) else BoxSize(int(box))
    return math.factorial(box.n)


def parse_grid(text: str, box: BoxSize | int | None = None) -> Grid:
    """Read a grid in line, block or JSON format.

    ``#`` lines and blank lines are skipped. Without ``box`` the size is
    inferred from the number of cells.
    """
    stripped = text.strip()
    if stripped.startswith("{"):
        data = json.loads(stripped)
        return Grid(data["cells"], data.get("box", box))
    lines = [ln.strip() for ln in text.splitlines()]
    body = "".join(ln for ln in lines if ln and not ln.startswith("#"))
    body = "".join(body.split())
    if box is None:
        n = math.isqrt(len(body))
        b = math.isqrt(n)
        if b < 2 or b * b != n or n * n != len(body):
            raise BadLength(f"{len(body)} cells do not form a b^2 x b^2 grid")
        box = BoxSize(b)
    elif not isinstance(box, BoxSize):
        box = BoxSize(int(box))
    n = box.n
    if len(body) != n * n:
        raise BadLength(f"expected {n * n} cells, got {len(body)}")
    values = []
    for pos, ch in enumerate(body):
        if ch in ".0":
            values.append(0)
            continue
        v = _SYMBOLS.find(ch.upper()) + 1
        if v == 0 or v > n:
            raise BadCharacter(f"unexpected character {ch!r} at cell {pos + 1}")
        values.append(v)
    return Grid(np.array(values).reshape(n, n), box)


def serialize_grid(grid: Grid, format: str = "line") -> str:
    if format == "json":
        return json.dumps({"box": grid.box.b, "cells": grid.cells.tolist()})
    chars = np.array(["."] + list(_SYMBOLS[: grid.box.n]))[grid.cells]
    rows = ["".join(r) for r in chars]
    if format == "line":
        return "".join(rows)
    if format == "block":
        return "\n".join(rows)
    raise ValueError(f"unknown format {format!r}")


def apply_symmetry(g: GridSymmetry, grid: Grid) -> Grid:
    """Cell ``(i, j)`` moves to ``(row(i), col(j))``, or ``(row(j), col(i))`` if transposed."""
    if g.box != grid.box:
        raise BoxMismatch(f"symmetry is for b={g.box.b}, grid is b={grid.box.b}")
    return Grid(act_on_array(g, grid.cells), grid.box)


def apply_relabel(o: DigitPermutation, grid: Grid) -> Grid:
    if len(o.images) != grid.box.n:
        raise BoxMismatch(f"relabeling acts on {len(o.images)} digits, grid has {grid.box.n}")
    return Grid(o.lookup()[grid.cells], grid.box)


def first_occurrence_relabel(grid: Grid) -> Grid:
    """Rename digits 1, 2, 3, ... in order of first appearance (row-major).

    This is the lexicographically least relabeling of ``grid``.
    """
    mapping = np.zeros(grid.box.n + 1, dtype=np.int8)
    nxt = 1
    for v in grid.cells.ravel():
        if v and not mapping[v]:
            mapping[v] = nxt
            nxt += 1
    return Grid(mapping[grid.cells], grid.box)


def shifted_grid(box=BoxSize(3)) -> Grid:
    """The pattern grid whose row ``i`` is ``1..N`` cyclically shifted.

    Shifts follow ``b * (i mod b) + i div b`` (0, 3, 6, 1, 4, 7, 2, 5, 8 for b=3).
    """
    box = box if isinstance(box, BoxSize) else BoxSize(int(box))
    b, n = box.b, box.n
    cells = [[(j + b * (i % b) + i // b) % n + 1 for j in range(n)] for i in range(n)]
    return Grid(cells, box)


def random_complete_grid(rng: random.Random, box=BoxSize(3)) -> Grid:
    """A random complete grid reached from :func:`shifted_grid`.

    Only grids in the orbit of the pattern grid under symmetries and
    relabelings are produced; that is enough for test fixtures.
    """
    box = box if isinstance(box, BoxSize) else BoxSize(int(box))
    perms = band_table(box).perms
    g = GridSymmetry(rng.choice(perms), rng.choice(perms), rng.random() < 0.5)
    digits = list(range(1, box.n + 1))
    rng.shuffle(digits)
    return apply_relabel(DigitPermutation(tuple(digits)), apply_symmetry(g, shifted_grid(box)))


def random_digit_permutation(rng: random.Random, n: int = 9) -> DigitPermutation:
    digits = list(range(1, n + 1))
    rng.shuffle(digits)
    return DigitPermutation(tuple(digits))
