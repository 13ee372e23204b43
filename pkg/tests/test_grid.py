import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sudokusym import group
from sudokusym.errors import BadCharacter, BadLength, BoxMismatch, NotABijection
from sudokusym.grid import (
    DigitPermutation,
    Grid,
    apply_relabel,
    apply_symmetry,
    digit_group_order,
    first_occurrence_relabel,
    parse_grid,
    random_complete_grid,
    random_digit_permutation,
    serialize_grid,
    shifted_grid,
)
from sudokusym.group import GridSymmetry, named_symmetry
from sudokusym.perm import band_table

from .conftest import SHIFTED

PERMS3 = band_table(3).perms

cells9 = st.lists(st.integers(0, 9), min_size=81, max_size=81)


def random_symmetry(rng, b=3):
    perms = band_table(b).perms
    return GridSymmetry(rng.choice(perms), rng.choice(perms), rng.random() < 0.5)


class TestParse:
    def test_all_ones(self):
        g = parse_grid("1" * 81)
        assert not g.is_valid()
        assert not g.is_complete()

    def test_bad_length(self):
        with pytest.raises(BadLength):
            parse_grid("12345")
        with pytest.raises(BadLength):
            parse_grid("1" * 80, box=3)

    def test_bad_character(self):
        with pytest.raises(BadCharacter):
            parse_grid("x" + "." * 80)
        with pytest.raises(BadCharacter):
            parse_grid("5" + "." * 15, box=2)

    def test_shifted_grid(self):
        # row i is 1..9 cyclically shifted by 0, 3, 6, 1, 4, 7, 2, 5, 8
        g = parse_grid(SHIFTED)
        offsets = [0, 3, 6, 1, 4, 7, 2, 5, 8]
        for i, off in enumerate(offsets, 1):
            assert [g[i, j] for j in range(1, 10)] == [(j - 1 + off) % 9 + 1 for j in range(1, 10)]
        assert g.is_complete()
        assert g == shifted_grid(3)

    def test_block_and_comments(self):
        text = "# a comment\n" + "\n".join(SHIFTED[i:i + 9] for i in range(0, 81, 9)) + "\n"
        assert parse_grid(text) == parse_grid(SHIFTED)

    def test_zero_is_empty(self):
        g = parse_grid("0" + SHIFTED[1:])
        assert g[1, 1] == 0
        assert g.is_valid() and not g.is_complete()
        assert serialize_grid(g)[0] == "."

    def test_box_inferred(self):
        assert parse_grid("1234341221434321").box.b == 2

    def test_index_range(self, shifted):
        with pytest.raises(IndexError):
            shifted[0, 1]

    def test_immutable(self, shifted):
        with pytest.raises(AttributeError):
            shifted.box = 2
        with pytest.raises(ValueError):
            shifted.cells[0, 0] = 5


class TestSerialize:
    @settings(max_examples=100, deadline=None)
    @given(cells9, st.sampled_from(["line", "block", "json"]))
    def test_roundtrip(self, cells, fmt):
        g = Grid(np.array(cells).reshape(9, 9))
        assert parse_grid(serialize_grid(g, fmt)) == g

    def test_block_shape(self, shifted):
        lines = serialize_grid(shifted, "block").splitlines()
        assert len(lines) == 9 and all(len(ln) == 9 for ln in lines)

    def test_json_schema(self, shifted):
        data = json.loads(serialize_grid(shifted, "json"))
        assert data["box"] == 3
        assert data["cells"][0] == list(range(1, 10))

    def test_key_order_matches_string_order(self, rng):
        grids = [Grid(np.array([rng.randrange(10) for _ in range(81)]).reshape(9, 9)) for _ in range(50)]
        assert sorted(grids, key=Grid.key) == sorted(grids, key=serialize_grid)


class TestValidity:
    def test_block_violation(self):
        g = parse_grid("12" + "." * 7 + "21" + "." * 7 + "." * 63)
        # rows and columns fine, block 1 repeats
        assert not g.is_valid()

    def test_column_violation(self):
        g = parse_grid("1" + "." * 8 + "." * 27 + "1" + "." * 44)
        assert not g.is_valid()


class TestAction:
    def test_h_twice(self, fixed_grid):
        H = named_symmetry("H")
        out = apply_symmetry(H, fixed_grid)
        for i in range(1, 10):
            for j in range(1, 10):
                assert out[10 - i, j] == fixed_grid[i, j]
        assert apply_symmetry(H, out) == fixed_grid

    def test_d_anti_diagonal(self, fixed_grid):
        out = apply_symmetry(named_symmetry("D"), fixed_grid)
        for i in range(1, 10):
            for j in range(1, 10):
                assert out[10 - j, 10 - i] == fixed_grid[i, j]

    def test_identity(self, fixed_grid):
        assert apply_symmetry(group.identity(), fixed_grid) == fixed_grid

    def test_validity_preserved_sampled(self, rng):
        for _ in range(1000):
            g = random_symmetry(rng)
            grid = random_complete_grid(rng)
            out = apply_symmetry(g, grid)
            assert out.is_complete()
            assert sorted(out.cells.ravel()) == sorted(grid.cells.ravel())

    def test_validity_preserved_b2_exhaustive(self):
        grid = parse_grid("1234341221434321")
        for g in group.enumerate_group(2):
            assert apply_symmetry(g, grid).is_complete()

    def test_partial_grid_stays_valid(self, rng):
        grid = parse_grid("." * 40 + SHIFTED[40:])
        for _ in range(50):
            out = apply_symmetry(random_symmetry(rng), grid)
            assert out.is_valid()
            assert (out.cells == 0).sum() == 40

    def test_box_mismatch(self, shifted):
        with pytest.raises(BoxMismatch):
            apply_symmetry(group.identity(2), shifted)


class TestRelabel:
    def test_identity(self, shifted):
        assert apply_relabel(DigitPermutation.identity(9), shifted) == shifted

    def test_swap_twice(self, shifted):
        swap = DigitPermutation((2, 1, 3, 4, 5, 6, 7, 8, 9))
        once = apply_relabel(swap, shifted)
        assert once != shifted
        assert once[1, 1] == 2
        assert apply_relabel(swap, once) == shifted

    def test_zeros_fixed(self):
        g = parse_grid("." + SHIFTED[1:])
        o = DigitPermutation((9, 8, 7, 6, 5, 4, 3, 2, 1))
        assert apply_relabel(o, g)[1, 1] == 0

    def test_not_bijection(self):
        with pytest.raises(NotABijection):
            DigitPermutation((1, 1, 3))

    def test_size_mismatch(self, shifted):
        with pytest.raises(BoxMismatch):
            apply_relabel(DigitPermutation.identity(4), shifted)

    def test_commutes_with_symmetries(self, rng):
        for _ in range(1000):
            g = random_symmetry(rng)
            o = random_digit_permutation(rng)
            grid = random_complete_grid(rng)
            assert apply_symmetry(g, apply_relabel(o, grid)) == apply_relabel(o, apply_symmetry(g, grid))

    def test_relabel_preserves_validity(self, rng, fixed_grid):
        for _ in range(20):
            assert apply_relabel(random_digit_permutation(rng), fixed_grid).is_complete()

    def test_first_occurrence_is_least_relabel(self):
        import itertools

        g = parse_grid("2143341212344321", box=2)
        best = min(
            serialize_grid(apply_relabel(DigitPermutation(p), g))
            for p in itertools.permutations(range(1, 5))
        )
        assert serialize_grid(first_occurrence_relabel(g)) == best

    def test_product_group_order(self):
        assert group.group_order(3) * digit_group_order(3) == 2 * 6 ** 8 * math.factorial(9)
