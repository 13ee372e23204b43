"""The geometric symmetry group of the Sudoku grid.

Every symmetry has a unique normal form ``(row, col, transposed)``: optionally
transpose the grid, then permute rows by ``row`` and columns by ``col``. The
row and column permutations are band-structured. This works because a row
permutation commutes with any column permutation (``r . d r' d = d r' d . r``),
which :func:`verify_prop1` checks exhaustively.

Composition follows function notation: ``compose(g1, g2)`` applies ``g2``
first. Under that convention ``V = d r1`` is the clockwise quarter turn.

Bulk operations (enumeration counts, BFS closure, order spectra) work on
integer codes ``(t * M + row) * M + col`` where ``M`` is the number of band
permutations and ``row``/``col`` are indices into :class:`BandTable`.
"""

from __future__ import annotations

import enum
import math
import random
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from . import perm
from .errors import BoxMismatch, Prop1Violation, UnsupportedBox
from .perm import BandPermutation, BoxSize, band_table

__all__ = [
    "GridSymmetry",
    "SymmetryClass",
    "identity",
    "transpose_symmetry",
    "row_symmetry",
    "col_symmetry",
    "compose",
    "inverse",
    "power",
    "order",
    "classify",
    "named_symmetry",
    "NAMED",
    "enumerate_group",
    "group_order",
    "class_cardinalities",
    "order_spectrum",
    "bfs_closure",
    "standard_generators",
    "verify_prop1",
    "class_product_table",
    "sample_class_products",
    "act_on_array",
    "encode",
    "decode",
]


@dataclass(frozen=True)
class GridSymmetry:
    row: BandPermutation
    col: BandPermutation
    transposed: bool = False

    def __post_init__(self):
        if self.row.box != self.col.box:
            raise BoxMismatch("row and column permutations use different box sizes")

    @property
    def box(self) -> BoxSize:
        return self.row.box

    def __mul__(self, other: GridSymmetry) -> GridSymmetry:
        return compose(self, other)

    def __pow__(self, k: int) -> GridSymmetry:
        return power(self, k)

    def __repr__(self):
        return f"GridSymmetry({self.row!r}, {self.col!r}, transposed={self.transposed})"


class SymmetryClass(enum.Enum):
    A1 = 1
    A2 = 2
    A3 = 3
    A4 = 4
    A5 = 5
    A6 = 6
    A7 = 7
    A8 = 8

    def __str__(self):
        return self.name


# (row is non-identity, col is non-identity, transposed) for each class
_CLASS_SHAPE = {
    SymmetryClass.A1: (False, False, False),
    SymmetryClass.A2: (False, False, True),
    SymmetryClass.A3: (True, False, False),
    SymmetryClass.A4: (True, False, True),
    SymmetryClass.A5: (False, True, True),
    SymmetryClass.A6: (False, True, False),
    SymmetryClass.A7: (True, True, True),
    SymmetryClass.A8: (True, True, False),
}
_SHAPE_CLASS = {v: k for k, v in _CLASS_SHAPE.items()}


def _box(box) -> BoxSize:
    return box if isinstance(box, BoxSize) else BoxSize(int(box))


def identity(box=BoxSize(3)) -> GridSymmetry:
    e = perm.identity(_box(box))
    return GridSymmetry(e, e, False)


def transpose_symmetry(box=BoxSize(3)) -> GridSymmetry:
    e = perm.identity(_box(box))
    return GridSymmetry(e, e, True)


def row_symmetry(p: BandPermutation) -> GridSymmetry:
    return GridSymmetry(p, perm.identity(p.box), False)


def col_symmetry(p: BandPermutation) -> GridSymmetry:
    """The column analogue ``d p d`` of a row permutation."""
    return GridSymmetry(perm.identity(p.box), p, False)


def compose(g1: GridSymmetry, g2: GridSymmetry) -> GridSymmetry:
    """``g1 o g2``; ``g2`` acts first."""
    if g1.box != g2.box:
        raise BoxMismatch(f"box sizes differ: {g1.box.b} vs {g2.box.b}")
    if g1.transposed:
        row = perm.compose(g1.row, g2.col)
        col = perm.compose(g1.col, g2.row)
    else:
        row = perm.compose(g1.row, g2.row)
        col = perm.compose(g1.col, g2.col)
    return GridSymmetry(row, col, g1.transposed != g2.transposed)


def inverse(g: GridSymmetry) -> GridSymmetry:
    if g.transposed:
        return GridSymmetry(perm.inverse(g.col), perm.inverse(g.row), True)
    return GridSymmetry(perm.inverse(g.row), perm.inverse(g.col), False)


def power(g: GridSymmetry, k: int) -> GridSymmetry:
    if k < 0:
        return power(inverse(g), -k)
    result = identity(g.box)
    for _ in range(k):
        result = compose(g, result)
    return result


def order(g: GridSymmetry) -> int:
    e = identity(g.box)
    k, acc = 1, g
    while acc != e:
        acc = compose(g, acc)
        k += 1
    return k


def classify(g: GridSymmetry) -> SymmetryClass:
    return _SHAPE_CLASS[(not g.row.is_identity, not g.col.is_identity, g.transposed)]


def _r1(box: BoxSize) -> BandPermutation:
    return perm.band_perm_from_images(range(box.n, 0, -1), box)


NAMED = ("H", "H1", "D", "V", "W", "F")


def named_symmetry(name: str, box=BoxSize(3)) -> GridSymmetry:
    """One of the classical symmetries H, H1, D, V, W, F.

    ``H`` mirrors rows about the middle row, ``H1`` mirrors columns, ``D`` is
    the anti-diagonal reflection, ``V`` and ``W`` are the clockwise and
    counter-clockwise quarter turns, ``F`` the half turn.
    """
    box = _box(box)
    if box.b != 3:
        raise UnsupportedBox(f"named symmetries are defined for b=3 only, got b={box.b}")
    r1 = _r1(box)
    e = perm.identity(box)
    table = {
        "H": (r1, e, False),
        "H1": (e, r1, False),
        "D": (r1, r1, True),
        "V": (e, r1, True),
        "W": (r1, e, True),
        "F": (r1, r1, False),
    }
    try:
        return GridSymmetry(*table[name])
    except KeyError:
        raise ValueError(f"unknown named symmetry {name!r}; expected one of {NAMED}") from None


def enumerate_group(box=BoxSize(3)) -> Iterator[GridSymmetry]:
    """Every element of S exactly once: transpose flag slowest, then row, then column."""
    perms = band_table(box).perms
    for t in (False, True):
        for r in perms:
            for c in perms:
                yield GridSymmetry(r, c, t)


def group_order(box=BoxSize(3)) -> int:
    b = _box(box).b
    return 2 * math.factorial(b) ** (2 * b + 2)


# -- integer codes -----------------------------------------------------------


def encode(g: GridSymmetry) -> int:
    m = band_table(g.box).size
    return (int(g.transposed) * m + g.row.table_index) * m + g.col.table_index


def decode(code: int, box=BoxSize(3)) -> GridSymmetry:
    tab = band_table(box)
    m = tab.size
    t, rest = divmod(int(code), m * m)
    r, c = divmod(rest, m)
    return GridSymmetry(tab.perms[r], tab.perms[c], bool(t))


def _split(codes: np.ndarray, m: int):
    t, rest = np.divmod(codes, m * m)
    r, c = np.divmod(rest, m)
    return t, r, c


def _compose_codes(g: GridSymmetry, codes: np.ndarray) -> np.ndarray:
    """Codes of ``g o x`` for every code ``x``."""
    tab = band_table(g.box)
    m = tab.size
    mul = tab.mul
    t2, r2, c2 = _split(codes, m)
    r1, c1 = tab.index_of(g.row), tab.index_of(g.col)
    if g.transposed:
        row, col = mul[r1, c2], mul[c1, r2]
        t = 1 - t2
    else:
        row, col = mul[r1, r2], mul[c1, c2]
        t = t2
    return (t * m + row.astype(np.int64)) * m + col.astype(np.int64)


def class_cardinalities(box=BoxSize(3)) -> dict[SymmetryClass, int]:
    """Size of each class, counted over the whole group (vectorised)."""
    m = band_table(box).size
    counts = Counter()
    # rows/cols are independent so count over the (row is E, col is E) grid
    row_e = np.zeros(m, dtype=bool)
    row_e[0] = True
    for t in (False, True):
        for rn in (False, True):
            for cn in (False, True):
                n_r = int((~row_e).sum()) if rn else int(row_e.sum())
                n_c = int((~row_e).sum()) if cn else int(row_e.sum())
                counts[_SHAPE_CLASS[(rn, cn, t)]] += n_r * n_c
    return {k: counts[k] for k in SymmetryClass}


def order_spectrum(box=BoxSize(3)) -> dict[int, int]:
    """Multiplicity of each element order over all of S.

    ``(r, c, no transpose)`` has order ``lcm(|r|, |c|)``. A transposed element
    squares to ``(r c, c r, no transpose)`` whose components are conjugate, so
    its order is ``2 |r c|``.
    """
    tab = band_table(box)
    o = tab.orders
    plain = np.lcm(o[:, None], o[None, :])
    turned = 2 * o[tab.mul]
    spec = Counter()
    for arr in (plain, turned):
        vals, counts = np.unique(arr, return_counts=True)
        for v, c in zip(vals.tolist(), counts.tolist()):
            spec[v] += c
    return dict(sorted(spec.items()))


def standard_generators(box=BoxSize(3)) -> list[GridSymmetry]:
    """Transpose, the adjacent swaps inside band 1, and adjacent band swaps."""
    box = _box(box)
    b, n = box.b, box.n
    gens = [transpose_symmetry(box)]
    for k in range(b - 1):
        images = list(range(1, n + 1))
        images[k], images[k + 1] = images[k + 1], images[k]
        gens.append(row_symmetry(perm.band_perm_from_images(images, box)))
    for k in range(b - 1):
        images = list(range(1, n + 1))
        for p in range(b):
            images[k * b + p], images[(k + 1) * b + p] = (k + 1) * b + p + 1, k * b + p + 1
        gens.append(row_symmetry(perm.band_perm_from_images(images, box)))
    return gens


def bfs_closure(generators: Iterable[GridSymmetry]) -> int:
    """Order of the subgroup generated by ``generators``.

    Breadth-first search over the Cayley graph starting at the identity,
    with the whole frontier multiplied by each generator at once.
    """
    generators = list(generators)
    if not generators:
        raise ValueError("need at least one generator")
    box = generators[0].box
    m = band_table(box).size
    seen = np.zeros(2 * m * m, dtype=bool)
    frontier = np.array([encode(identity(box))], dtype=np.int64)
    seen[frontier] = True
    total = 1
    while frontier.size:
        found = []
        for g in generators:
            nxt = _compose_codes(g, frontier)
            nxt = nxt[~seen[nxt]]
            nxt = np.unique(nxt)
            seen[nxt] = True
            found.append(nxt)
        frontier = np.concatenate(found)
        total += frontier.size
    return total


# -- grid action on raw arrays -------------------------------------------------


def act_on_array(g: GridSymmetry, cells: np.ndarray) -> np.ndarray:
    """Move cell ``(i, j)`` to ``(row(i), col(j))``, transposing first if flagged."""
    src = cells.T if g.transposed else cells
    out = np.empty_like(cells)
    out[np.ix_(g.row.to_array(), g.col.to_array())] = src
    return out


def _cell_maps(box: BoxSize):
    """Destination-cell arrays for every row permutation and for transpose."""
    tab = band_table(box)
    n = box.n
    i, j = np.divmod(np.arange(n * n), n)
    rows = tab.images[:, i] * n + j[None, :]
    transpose = j * n + i
    return rows, transpose


def verify_prop1(box=BoxSize(3), samples: int = 1000, seed: int = 0) -> int:
    """Check that every row permutation commutes with every column permutation.

    Exhaustive part: as permutations of the N*N cells, ``r_l`` and
    ``d r_m d`` are built from primitive cell maps (no normal form involved),
    composed in both orders, and compared with each other and with the cell
    map of the normal form ``(r_l, r_m)``.

    Sampled part: the same two products are applied step by step to a grid
    of distinct labels, following the index chains
    ``a_ij -> a_mj -> a_jm -> a_nm -> a_mn`` and the reverse order.

    Returns the number of exhaustively checked pairs.
    """
    box = _box(box)
    tab = band_table(box)
    n = box.n
    rows, tr = _cell_maps(box)
    # d r_m d as a cell map: first d, then r_m, then d
    col_maps = tr[rows[:, tr]]
    i, j = np.divmod(np.arange(n * n), n)
    checked = 0
    for lam in range(tab.size):
        lm = rows[lam]
        first_row = col_maps[:, lm]  # r_l acts first, then d r_m d
        first_col = lm[col_maps]  # d r_m d acts first, then r_l
        normal = tab.images[lam][i][None, :] * n + tab.images[:, j]
        if not (np.array_equal(first_row, first_col) and np.array_equal(first_row, normal)):
            bad = int(np.nonzero((first_row != first_col).any(axis=1) | (first_row != normal).any(axis=1))[0][0])
            raise Prop1Violation(f"r_{lam} and d r_{bad} d do not commute")
        checked += tab.size

    rng = random.Random(seed)
    cells = np.arange(n * n).reshape(n, n)
    for _ in range(samples):
        lam = tab.perms[rng.randrange(tab.size)]
        mu = tab.perms[rng.randrange(tab.size)]
        row_first = _steps(cells, [("r", lam), ("d",), ("r", mu), ("d",)])
        col_first = _steps(cells, [("d",), ("r", mu), ("d",), ("r", lam)])
        if not np.array_equal(row_first, col_first):
            raise Prop1Violation(f"grid action differs for {lam!r}, {mu!r}")
        if not np.array_equal(row_first, act_on_array(GridSymmetry(lam, mu), cells)):
            raise Prop1Violation(f"normal form disagrees with grid action for {lam!r}, {mu!r}")
    return checked


def _steps(cells: np.ndarray, steps) -> np.ndarray:
    out = cells
    for step in steps:
        if step[0] == "d":
            out = out.T.copy()
        else:
            moved = np.empty_like(out)
            moved[step[1].to_array(), :] = out
            out = moved
    return out


# -- class products ------------------------------------------------------------


def _combine(a: bool, b: bool) -> set[bool]:
    """Possible non-identity flags of ``x o y`` given those of ``x`` and ``y``."""
    if not a and not b:
        return {False}
    if a != b:
        return {True}
    return {False, True}


def class_product_table(
    box=BoxSize(3), samples: int = 200, seed: int = 0
) -> dict[tuple[SymmetryClass, SymmetryClass], frozenset[SymmetryClass]]:
    """Exact set of classes reachable as ``g h`` with ``g`` in A_i, ``h`` in A_j.

    Derived from the composition law, then confirmed against
    :func:`sample_class_products`; raises ``AssertionError`` on disagreement.
    Pass ``samples=0`` to skip the confirmation.
    """
    table = {}
    for ci, (r1, c1, t1) in _CLASS_SHAPE.items():
        for cj, (r2, c2, t2) in _CLASS_SHAPE.items():
            if t1:
                rows, cols = _combine(r1, c2), _combine(c1, r2)
            else:
                rows, cols = _combine(r1, r2), _combine(c1, c2)
            t = t1 != t2
            table[ci, cj] = frozenset(_SHAPE_CLASS[(r, c, t)] for r in rows for c in cols)
    if samples:
        observed = sample_class_products(box, samples, seed)
        for key, predicted in table.items():
            if observed[key] != predicted:
                raise AssertionError(
                    f"{key[0]}*{key[1]}: predicted {sorted(map(str, predicted))}, "
                    f"observed {sorted(map(str, observed[key]))}"
                )
    return table


def _random_member(cls: SymmetryClass, tab, rng: random.Random, pool=()) -> GridSymmetry:
    rn, cn, t = _CLASS_SHAPE[cls]

    def pick(nonid: bool):
        if not nonid:
            return tab.perms[0]
        choices = [p for p in pool if not p.is_identity]
        if choices and rng.random() < 0.5:
            return rng.choice(choices)
        return tab.perms[rng.randrange(1, tab.size)]

    return GridSymmetry(pick(rn), pick(cn), t)


def sample_class_products(
    box=BoxSize(3), samples: int = 200, seed: int = 0
) -> dict[tuple[SymmetryClass, SymmetryClass], frozenset[SymmetryClass]]:
    """Classes observed among ``samples`` random products per class pair.

    Uniform draws almost never cancel to the identity, so half of the
    components of the right factor are drawn from the inverses of the left
    factor's components instead (without regard to which ones get paired).
    """
    tab = band_table(box)
    rng = random.Random(seed)
    observed = {}
    for ci in SymmetryClass:
        for cj in SymmetryClass:
            seen = set()
            for _ in range(samples):
                g = _random_member(ci, tab, rng)
                pool = (perm.inverse(g.row), perm.inverse(g.col))
                h = _random_member(cj, tab, rng, pool)
                seen.add(classify(compose(g, h)))
            observed[ci, cj] = frozenset(seen)
    return observed
