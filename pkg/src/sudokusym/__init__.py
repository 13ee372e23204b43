"""Symmetry group of the Sudoku grid: algebra, canonical forms, audit."""

from .canonical import (
    S_AND_O,
    S_ONLY,
    CanonicalForm,
    StabilizerReport,
    are_equivalent,
    canonicalize,
    shidoku_census,
    stabilizer,
)
from .dsl import parse_expr
from .errors import *  # noqa: F401,F403
from .grid import (
    DigitPermutation,
    Grid,
    apply_relabel,
    apply_symmetry,
    parse_grid,
    serialize_grid,
)
from .group import (
    GridSymmetry,
    SymmetryClass,
    bfs_closure,
    class_product_table,
    classify,
    enumerate_group,
    named_symmetry,
    verify_prop1,
)
from .perm import BandPermutation, BoxSize, band_perm_from_images, enumerate_band_perms

__version__ = "0.1.0"
