"""Canonical forms, equivalence and stabilizers of grids.

The canonical form of a grid is the lexicographically least row-major
serialization over its orbit, either under the geometric group S alone
(``mode="S"``) or under S combined with digit relabeling (``mode="SO"``).
For the relabeling part we never enumerate the N! permutations: renaming
digits in order of first appearance already gives the least relabeling of a
fixed grid.

The search covers all ``2 * M**2`` elements of S (3,359,232 for b=3) and
fixes the output one cell at a time in row-major order; after each cell only
the candidates attaining the smallest value survive. Row permutations are
expanded lazily: output row ``i`` only depends on which source rows feed
rows ``1..i``, so candidates start as (transpose, first source row, column
permutation) and gain one source row per output row. Ties between symmetries are
broken by the smallest group code, which keeps the witness independent of
how the work is split across workers.
"""

from __future__ import annotations

import functools
import itertools
import math
import os
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import BoxMismatch, IncompleteGrid, InvalidGrid
from .grid import (
    DigitPermutation,
    Grid,
    apply_relabel,
    apply_symmetry,
    first_occurrence_relabel,
    serialize_grid,
)
from .group import GridSymmetry, decode, enumerate_group, group_order, standard_generators
from .perm import BoxSize, band_table

__all__ = [
    "S_ONLY",
    "S_AND_O",
    "CanonicalForm",
    "StabilizerReport",
    "CensusReport",
    "canonicalize",
    "are_equivalent",
    "stabilizer",
    "orbit",
    "enumerate_complete_grids",
    "shidoku_census",
]

S_ONLY = "S"
S_AND_O = "SO"
_MODES = (S_ONLY, S_AND_O)


def default_workers() -> int:
    return os.cpu_count() or 1


@dataclass(frozen=True)
class CanonicalForm:
    grid: Grid
    symmetry: GridSymmetry
    relabel: DigitPermutation
    mode: str = S_AND_O

    def __str__(self):
        return serialize_grid(self.grid)


@dataclass(frozen=True)
class StabilizerReport:
    stabilizer_size: int
    orbit_size: int
    group_order: int

    def to_dict(self) -> dict:
        return {
            "stabilizerSize": self.stabilizer_size,
            "orbitSize": self.orbit_size,
            "groupOrder": self.group_order,
        }


@dataclass
class CensusReport:
    total: int
    classes: int
    class_sizes: list[int]
    representatives: list[str]
    stabilizer_sizes: list[int]
    partitions_agree: bool = True
    grids: list[Grid] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "classes": self.classes,
            "classSizes": self.class_sizes,
            "representatives": self.representatives,
            "stabilizerSizes": self.stabilizer_sizes,
            "partitionsAgree": self.partitions_agree,
        }


# -- vectorised search ---------------------------------------------------------


@functools.lru_cache(maxsize=None)
def _prefix_tree(b: int):
    """Row permutations organised by the source rows of output rows 1..i.

    Level ``i`` lists the distinct prefixes ``(src_0, ..., src_i)`` over all
    band permutations. For each level this returns the last source row of
    every prefix and, for expansion, each prefix's children at level i+1
    (``order[start[p]:start[p] + count[p]]``). The last level maps every
    prefix to its band-permutation index.
    """
    tab = band_table(b)
    rinv = tab.inverse_images
    n = b * b
    ids, src = [], []
    for i in range(n):
        uniq, inv = np.unique(rinv[:, : i + 1], axis=0, return_inverse=True)
        ids.append(inv.ravel())
        src.append(uniq[:, i])
    children = []
    for i in range(n - 1):
        parent = np.empty(len(src[i + 1]), dtype=np.int64)
        parent[ids[i + 1]] = ids[i]
        order = np.argsort(parent, kind="stable")
        count = np.bincount(parent, minlength=len(src[i]))
        start = np.concatenate([[0], np.cumsum(count)[:-1]])
        children.append((order, start, count))
    leaf = np.empty(len(src[-1]), dtype=np.int64)
    leaf[ids[-1]] = np.arange(tab.size)
    return src, children, leaf


def _initial_size(b: int) -> int:
    return 2 * b * b * band_table(b).size


def _scan(cells: np.ndarray, b: int, start: int, stop: int, relabel: bool, target=None):
    """Prune candidates cell by cell in row-major output order.

    Candidates are triples (transpose flag, row-prefix id, column perm);
    before each output row the surviving prefixes are extended by one more
    source row. ``start..stop`` selects a slice of the level-0 candidates.
    Without ``target`` keep the candidates giving the least output; with a
    target keep those reproducing it exactly. Returns the value sequence
    (``None`` if nothing survives) and the surviving group codes.
    """
    tab = band_table(b)
    n = b * b
    m = tab.size
    src, children, leaf = _prefix_tree(b)
    flat = np.arange(start, stop, dtype=np.int64)
    t, rest = np.divmod(flat, n * m)
    pid, c = np.divmod(rest, m)
    srcs = np.stack([cells, cells.T]).astype(np.int8)
    cinv = tab.inverse_images
    k = flat.size
    mapping = np.zeros((k, n + 1), dtype=np.int8) if relabel else None
    nxt = np.ones(k, dtype=np.int8) if relabel else None
    values = []
    for i in range(n):
        if i:
            order, first, count = children[i - 1]
            reps = count[pid]
            owner = np.repeat(np.arange(pid.size), reps)
            offset = np.arange(owner.size) - np.repeat(np.cumsum(reps) - reps, reps)
            pid = order[first[pid][owner] + offset]
            t, c = t[owner], c[owner]
            if relabel:
                mapping, nxt = mapping[owner], nxt[owner]
        src_rows = src[i][pid]
        for j in range(n):
            v = srcs[t, src_rows, cinv[c, j]]
            if relabel:
                idx = np.arange(v.size)
                fresh = (v != 0) & (mapping[idx, v] == 0)
                if fresh.any():
                    mapping[idx[fresh], v[fresh]] = nxt[fresh]
                    nxt[fresh] += 1
                v = mapping[idx, v]
            best = v.min() if target is None else target[i * n + j]
            keep = v == best
            values.append(int(best))
            if not keep.all():
                if not keep.any():
                    return None, np.zeros(0, dtype=np.int64)
                t, pid, c, src_rows = t[keep], pid[keep], c[keep], src_rows[keep]
                if relabel:
                    mapping, nxt = mapping[keep], nxt[keep]
    codes = (t * m + leaf[pid]) * m + c
    return values, np.sort(codes)


def _scan_chunk(args):
    cells, b, start, stop, relabel, target = args
    values, codes = _scan(cells, b, start, stop, relabel, target)
    if target is not None:
        return int(codes.size)
    if values is None:
        return None
    return tuple(values), int(codes[0])


def _chunks(total: int, workers: int):
    step = -(-total // workers)
    return [(s, min(s + step, total)) for s in range(0, total, step)]


def _run(cells, b, relabel, target, workers):
    total = _initial_size(b)
    workers = max(1, int(workers))
    jobs = [(cells, b, s, e, relabel, target) for s, e in _chunks(total, workers)]
    if workers == 1:
        return [_scan_chunk(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_scan_chunk, jobs))


def _relabel_for(grid: Grid) -> DigitPermutation:
    """The first-occurrence relabeling of ``grid`` as a full permutation.

    Digits absent from the grid get the leftover labels in increasing order.
    """
    n = grid.box.n
    order = []
    for v in grid.cells.ravel().tolist():
        if v and v not in order:
            order.append(v)
    order += [v for v in range(1, n + 1) if v not in order]
    images = [0] * n
    for label, v in enumerate(order, 1):
        images[v - 1] = label
    return DigitPermutation(tuple(images))


def _check_mode(mode: str):
    if mode not in _MODES:
        raise ValueError(f"mode must be one of {_MODES}, got {mode!r}")


def canonicalize(grid: Grid, mode: str = S_AND_O, workers: int = 1) -> CanonicalForm:
    """Least serialization of ``grid`` over its orbit.

    Partial grids are allowed; empty cells are never relabeled.
    """
    _check_mode(mode)
    if not grid.is_valid():
        raise InvalidGrid("grid violates the row/column/block constraint")
    b = grid.box.b
    results = _run(np.asarray(grid.cells), b, mode == S_AND_O, None, workers)
    values, code = min(r for r in results if r is not None)
    g = decode(code, grid.box)
    moved = apply_symmetry(g, grid)
    o = _relabel_for(moved) if mode == S_AND_O else DigitPermutation.identity(grid.box.n)
    canon = apply_relabel(o, moved)
    assert canon.cells.ravel().tolist() == list(values)
    return CanonicalForm(canon, g, o, mode)


def orbit(grid: Grid, mode: str = S_AND_O) -> set[Grid]:
    """Explicit orbit: every symmetry combined with every relabeling.

    Cost is ``|S| * N!``; meant for b=2 cross-checks.
    """
    _check_mode(mode)
    n = grid.box.n
    images = {apply_symmetry(g, grid) for g in enumerate_group(grid.box)}
    if mode == S_ONLY:
        return images
    relabels = [DigitPermutation(p) for p in itertools.permutations(range(1, n + 1))]
    return {apply_relabel(o, x) for x in images for o in relabels}


def are_equivalent(g1: Grid, g2: Grid, mode: str = S_AND_O, workers: int = 1) -> bool:
    if g1.box != g2.box:
        raise BoxMismatch(f"box sizes differ: {g1.box.b} vs {g2.box.b}")
    for g in (g1, g2):
        if not g.is_valid():
            raise InvalidGrid("grid violates the row/column/block constraint")
    same = canonicalize(g1, mode, workers).grid == canonicalize(g2, mode, workers).grid
    if g1.box.b == 2:
        direct = g2 in orbit(g1, mode)
        if direct != same:
            raise AssertionError("canonical forms disagree with orbit membership")
    return same


def stabilizer(grid: Grid, workers: int = 1) -> StabilizerReport:
    """Symmetries mapping ``grid`` to a relabeling of itself, and the orbit size.

    For a complete grid each such symmetry fixes exactly one relabeling, so
    the count is the stabilizer order in S*O.
    """
    if not grid.is_valid():
        raise InvalidGrid("grid violates the row/column/block constraint")
    if not grid.is_complete():
        raise IncompleteGrid("stabilizer needs a complete grid")
    target = first_occurrence_relabel(grid).cells.ravel().tolist()
    counts = _run(np.asarray(grid.cells), grid.box.b, True, target, workers)
    size = sum(counts)
    full = group_order(grid.box) * math.factorial(grid.box.n)
    if full % size:
        raise AssertionError(f"stabilizer size {size} does not divide {full}")
    return StabilizerReport(size, full // size, full)


# -- exhaustive small-box census ------------------------------------------------


def enumerate_complete_grids(box=BoxSize(2)) -> list[Grid]:
    """All complete grids by cell-order backtracking. Only sensible for b=2."""
    box = box if isinstance(box, BoxSize) else BoxSize(int(box))
    b, n = box.b, box.n
    cells = [[0] * n for _ in range(n)]
    found = []

    def fill(pos: int):
        if pos == n * n:
            found.append(Grid(cells, box))
            return
        i, j = divmod(pos, n)
        bi, bj = i - i % b, j - j % b
        used = set(cells[i]) | {cells[x][j] for x in range(n)}
        used |= {cells[x][y] for x in range(bi, bi + b) for y in range(bj, bj + b)}
        for v in range(1, n + 1):
            if v not in used:
                cells[i][j] = v
                fill(pos + 1)
                cells[i][j] = 0

    fill(0)
    return found


def _orbit_partition(grids: list[Grid]) -> list[set[Grid]]:
    """Partition by closing each unassigned grid under generators and relabelings."""
    if not grids:
        return []
    box = grids[0].box
    gens = standard_generators(box)
    n = box.n
    swaps = []
    for a in range(1, n):
        images = list(range(1, n + 1))
        images[a - 1], images[a] = images[a], images[a - 1]
        swaps.append(DigitPermutation(tuple(images)))
    remaining = set(grids)
    classes = []
    for g in grids:
        if g not in remaining:
            continue
        seen = {g}
        queue = deque([g])
        while queue:
            x = queue.popleft()
            nbrs = [apply_symmetry(s, x) for s in gens] + [apply_relabel(o, x) for o in swaps]
            for y in nbrs:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        classes.append(seen & remaining)
        remaining -= seen
    return classes


def shidoku_census(workers: int = 1) -> CensusReport:
    """Enumerate every complete 4x4 grid and split them into equivalence classes.

    The partition is computed twice, by grouping on canonical forms and by
    breadth-first orbit expansion, and the two must coincide.
    """
    box = BoxSize(2)
    grids = enumerate_complete_grids(box)
    by_canon: dict[Grid, set[Grid]] = {}
    for g in grids:
        by_canon.setdefault(canonicalize(g, S_AND_O, workers).grid, set()).add(g)
    canon_parts = sorted(by_canon.items(), key=lambda kv: kv[0].key())
    orbit_parts = _orbit_partition(grids)
    agree = {frozenset(p) for _, p in canon_parts} == {frozenset(p) for p in orbit_parts}
    if not agree:
        raise AssertionError("canonical-form classes differ from orbit classes")
    return CensusReport(
        total=len(grids),
        classes=len(canon_parts),
        class_sizes=[len(p) for _, p in canon_parts],
        representatives=[serialize_grid(c) for c, _ in canon_parts],
        stabilizer_sizes=[stabilizer(c, workers).stabilizer_size for c, _ in canon_parts],
        partitions_agree=agree,
        grids=grids,
    )


