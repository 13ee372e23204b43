"""Band-structured permutations of row (or column) indices.

A band-structured permutation moves whole bands of ``b`` consecutive rows
onto bands and may reorder the rows inside each band. These form the wreath
product ``S_b wr S_b`` of order ``(b!)**(b+1)``; 1296 for ordinary Sudoku.

Images are 1-based in the public surface, so ``BandPermutation((9, 8, ..., 1))``
is the reflection that sends row 1 to row 9.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import BoxMismatch, NotABijection, NotBandStructured

__all__ = [
    "BoxSize",
    "BandPermutation",
    "BandTable",
    "band_perm_from_images",
    "compose",
    "inverse",
    "order",
    "enumerate_band_perms",
    "band_table",
]


@dataclass(frozen=True)
class BoxSize:
    """Edge length ``b`` of a block; the grid is ``b*b`` by ``b*b``."""

    b: int = 3

    def __post_init__(self):
        if not isinstance(self.b, int) or self.b < 2:
            raise ValueError(f"box size must be an integer >= 2, got {self.b!r}")

    @property
    def n(self) -> int:
        return self.b * self.b

    def band_of(self, index: int) -> int:
        """0-based band number of a 1-based row/column index."""
        return (index - 1) // self.b


def _as_box(box) -> BoxSize:
    if isinstance(box, BoxSize):
        return box
    return BoxSize(int(box))


@dataclass(frozen=True)
class BandPermutation:
    images: tuple[int, ...]
    box: BoxSize = BoxSize(3)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __repr__(self):
        if self.box.n <= 9:
            return f"r[{''.join(map(str, self.images))}]"
        return f"BandPermutation({list(self.images)}, b={self.box.b})"

    def __mul__(self, other: BandPermutation) -> BandPermutation:
        return compose(self, other)

    def __pow__(self, k: int) -> BandPermutation:
        if k < 0:
            return inverse(self) ** (-k)
        result = identity(self.box)
        for _ in range(k):
            result = compose(self, result)
        return result

    @functools.cached_property
    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.images, 1))

    @functools.cached_property
    def table_index(self) -> int:
        """Position of this permutation in :func:`enumerate_band_perms`."""
        return band_table(self.box).index[self.images]

    @property
    def band_perm(self) -> tuple[int, ...]:
        """Target band (0-based) of each source band."""
        b = self.box.b
        return tuple((self.images[k * b] - 1) // b for k in range(b))

    @property
    def inner_perms(self) -> tuple[tuple[int, ...], ...]:
        """Per source band, the 0-based slot each of its rows lands in."""
        b = self.box.b
        return tuple(
            tuple((self.images[k * b + p] - 1) % b for p in range(b)) for k in range(b)
        )

    def to_array(self) -> np.ndarray:
        """0-based image array."""
        return np.asarray(self.images, dtype=np.int64) - 1


def identity(box=BoxSize(3)) -> BandPermutation:
    box = _as_box(box)
    return BandPermutation(tuple(range(1, box.n + 1)), box)


def band_perm_from_images(images: Sequence[int], box=BoxSize(3)) -> BandPermutation:
    box = _as_box(box)
    n, b = box.n, box.b
    images = tuple(int(v) for v in images)
    if len(images) != n:
        raise NotABijection(f"expected {n} images, got {len(images)}")
    if sorted(images) != list(range(1, n + 1)):
        raise NotABijection(f"{list(images)} is not a permutation of 1..{n}")
    for k in range(b):
        targets = {(v - 1) // b for v in images[k * b:(k + 1) * b]}
        if len(targets) != 1:
            rows = list(range(k * b + 1, (k + 1) * b + 1))
            raise NotBandStructured(
                f"band {rows} maps to {sorted(images[k * b:(k + 1) * b])}, which is not a band"
            )
    return BandPermutation(images, box)


def _check_same_box(p: BandPermutation, q: BandPermutation):
    if p.box != q.box:
        raise BoxMismatch(f"box sizes differ: {p.box.b} vs {q.box.b}")


def compose(p: BandPermutation, q: BandPermutation) -> BandPermutation:
    """``p o q``: apply ``q`` first, then ``p``."""
    _check_same_box(p, q)
    return BandPermutation(tuple(p.images[v - 1] for v in q.images), p.box)


def inverse(p: BandPermutation) -> BandPermutation:
    inv = [0] * len(p.images)
    for i, v in enumerate(p.images, 1):
        inv[v - 1] = i
    return BandPermutation(tuple(inv), p.box)


def order(p: BandPermutation) -> int:
    # repeated composition; N <= 16 in practice so this is cheap
    e = identity(p.box)
    k, power = 1, p
    while power != e:
        power = compose(p, power)
        k += 1
    return k


def enumerate_band_perms(box=BoxSize(3)) -> Iterator[BandPermutation]:
    """Every band-structured permutation once, identity first.

    The order is fixed: band permutations vary slowest, then the inner
    permutation of band 1, band 2, ... each in lexicographic order.
    """
    box = _as_box(box)
    b = box.b
    perms = list(itertools.permutations(range(b)))
    for bands in perms:
        for inner in itertools.product(perms, repeat=b):
            images = [0] * box.n
            for k in range(b):
                for p in range(b):
                    images[k * b + p] = bands[k] * b + inner[k][p] + 1
            yield BandPermutation(tuple(images), box)


class BandTable:
    """Indexed view of the band-permutation group for bulk work.

    Every element gets an integer index (its position in
    :func:`enumerate_band_perms`); composition, inverses and orders are
    precomputed as numpy lookup tables. Index 0 is the identity.
    """

    def __init__(self, box=BoxSize(3)):
        self.box = _as_box(box)
        self.perms: list[BandPermutation] = list(enumerate_band_perms(self.box))
        self.size = len(self.perms)
        assert self.size == math.factorial(self.box.b) ** (self.box.b + 1)
        self.index = {p.images: i for i, p in enumerate(self.perms)}
        n = self.box.n
        # 0-based forward images, shape (size, n)
        self.images = np.array([p.images for p in self.perms], dtype=np.int64) - 1
        inv = np.empty_like(self.images)
        rows = np.arange(self.size)[:, None]
        inv[rows, self.images] = np.arange(n)[None, :]
        self.inverse_images = inv
        self._codes = self._encode(self.images)
        self._sorted = np.argsort(self._codes)
        self.inv = self.lookup(inv)
        self._mul = None
        self._orders = None

    def _encode(self, arr: np.ndarray) -> np.ndarray:
        n = self.box.n
        weights = n ** np.arange(n - 1, -1, -1, dtype=np.int64)
        return arr.astype(np.int64) @ weights

    def lookup(self, arr: np.ndarray) -> np.ndarray:
        """Indices of the permutations whose 0-based images are the rows of ``arr``."""
        codes = self._encode(np.asarray(arr))
        pos = np.searchsorted(self._codes, codes, sorter=self._sorted)
        pos = np.minimum(pos, self.size - 1)
        idx = self._sorted[pos]
        if not np.array_equal(self._codes[idx], codes):
            raise NotBandStructured("array contains a non band-structured permutation")
        return idx

    @property
    def mul(self) -> np.ndarray:
        """``mul[i, j]`` is the index of ``perms[i] o perms[j]``."""
        if self._mul is None:
            m = np.empty((self.size, self.size), dtype=np.int32)
            for i in range(self.size):
                # (p_i o p_j)[x] = p_i[p_j[x]]
                m[i] = self.lookup(self.images[i][self.images])
            self._mul = m
        return self._mul

    @property
    def orders(self) -> np.ndarray:
        if self._orders is None:
            orders = np.zeros(self.size, dtype=np.int64)
            power = np.arange(self.size)
            k = 1
            while (orders == 0).any():
                done = (power == 0) & (orders == 0)
                orders[done] = k
                power = self.mul[np.arange(self.size), power]
                k += 1
            self._orders = orders
        return self._orders

    def index_of(self, p: BandPermutation) -> int:
        return p.table_index


@functools.lru_cache(maxsize=None)
def _band_table(b: int) -> BandTable:
    return BandTable(BoxSize(b))


def band_table(box=BoxSize(3)) -> BandTable:
    return _band_table(_as_box(box).b)
