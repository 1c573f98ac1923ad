import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from compconv.errors import EmptySetError, ValidationError
from compconv.grid import MaskGrid, ScalarGrid
from compconv.metrics import (
    directed_hausdorff,
    encode_value,
    hausdorff,
    psnr,
    rel_l2,
    sup_norm_diff,
    support_hausdorff_error,
)
from tests.conftest import masks
from tests.oracles import brute_hausdorff


def test_psnr_values():
    a = ScalarGrid(np.full((4, 4), 100.0))
    assert psnr(a, a) == math.inf
    assert encode_value(psnr(a, a)) == "exact"
    assert psnr(a, a.with_values(a.values + 255)) == pytest.approx(0.0)
    assert psnr(a, a.with_values(a.values + 16)) == pytest.approx(24.05, abs=0.01)
    with pytest.raises(ValidationError):
        psnr(a, a, peak=0)
    with pytest.raises(ValidationError):
        psnr(a, ScalarGrid(np.zeros((3, 4))))


@given(st.floats(0.1, 50), st.floats(0.1, 50))
def test_psnr_decreasing_in_error(e1, e2):
    a = ScalarGrid(np.zeros((3, 3)))
    lo, hi = sorted((e1, e2))
    assert psnr(a, a.with_values(a.values + lo)) >= psnr(a, a.with_values(a.values + hi))


def test_rel_l2_and_sup():
    a = ScalarGrid(np.array([[3.0, 4.0]]))
    b = a.with_values(np.array([[3.0, 0.0]]))
    assert rel_l2(a, b) == pytest.approx(0.8)
    assert rel_l2(a, b, MaskGrid(np.array([[True, False]]))) == 0.0
    with pytest.raises(ValidationError):
        rel_l2(a.with_values(np.zeros((1, 2))), b)
    assert sup_norm_diff(a, b) == 4.0
    assert sup_norm_diff(a, b, relative=True) == 1.0


@given(masks(max_side=10), masks(max_side=10))
def test_hausdorff_matches_brute_force(e, f):
    if e.shape != f.shape:
        return
    E, F = MaskGrid(e, 0.5), MaskGrid(f, 0.5)
    assert hausdorff(E, F) == pytest.approx(brute_hausdorff(e, f, 0.5))
    assert hausdorff(E, F) == hausdorff(F, E)
    assert directed_hausdorff(E, F) <= hausdorff(E, F)


@given(masks(min_side=6, max_side=6), masks(min_side=6, max_side=6), masks(min_side=6, max_side=6))
def test_hausdorff_triangle(a, b, c):
    A, B, C = MaskGrid(a), MaskGrid(b), MaskGrid(c)
    assert hausdorff(A, C) <= hausdorff(A, B) + hausdorff(B, C) + 1e-12


def test_hausdorff_empty():
    with pytest.raises(EmptySetError):
        hausdorff(MaskGrid(np.zeros((3, 3), bool)), MaskGrid(np.ones((3, 3), bool)))


def test_support_error_one_cell_dilation():
    flags = np.zeros((9, 9), bool)
    flags[3:6, 3:6] = True
    grown = np.zeros((9, 9), bool)
    grown[2:7, 3:6] = True
    h = 0.25
    vals = np.where(grown, 2.0, 0.0)
    assert support_hausdorff_error(MaskGrid(flags, h), ScalarGrid(vals, h)) == pytest.approx(h)
