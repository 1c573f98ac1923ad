import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from compconv import io
from compconv.errors import GridFormatError, NonFiniteValueError
from compconv.features import FeatureMap
from compconv.grid import MaskGrid, ScalarGrid
from tests.conftest import grids


def test_fgrid_roundtrip_small(tmp_path):
    g = ScalarGrid([[0.1, -2.5], [1e300, 3.0]], spacing=(0.5, 0.25), origin=(-1.0, 2.0))
    p = tmp_path / "a.fgrid"
    io.write_grid(g, p)
    back = io.read_grid(p)
    np.testing.assert_array_equal(back.values, g.values)
    assert back.spacing == g.spacing and back.origin == g.origin


@given(grids(max_side=8, ndim=(1, 2, 3)), st.floats(0.01, 10), st.floats(-5, 5))
def test_fgrid_roundtrip_random(tmp_path_factory, arr, h, o):
    g = ScalarGrid(arr, h, o)
    p = tmp_path_factory.mktemp("fg") / "g.fgrid"
    io.write_grid(g, p)
    back = io.read_grid(p)
    assert back.values.tobytes() == g.values.tobytes()
    assert back.spacing == g.spacing and back.origin == g.origin


def test_fgrid_rejects_bad_files(tmp_path):
    p = tmp_path / "bad.fgrid"
    p.write_bytes(b"FGRID 2\n")
    with pytest.raises(GridFormatError):
        io.read_grid(p)
    g = ScalarGrid(np.ones((2, 2)))
    io.write_grid(g, p)
    p.write_bytes(p.read_bytes()[:-8])
    with pytest.raises(GridFormatError, match="data bytes"):
        io.read_grid(p)
    p.write_bytes(b"FGRID 1\nshape 2 2\nspacing 1 1\ndata\n")
    with pytest.raises(GridFormatError):
        io.read_grid(p)


def test_write_refuses_nonfinite(tmp_path):
    class Fake:
        values = np.array([np.nan])
    with pytest.raises(NonFiniteValueError):
        io.write_grid(Fake(), tmp_path / "x.fgrid")


def test_pgm_p5_value(tmp_path):
    p = tmp_path / "a.pgm"
    p.write_bytes(b"P5\n# comment\n2 1\n255\n" + bytes([128, 7]))
    g = io.read_grid(p)
    assert g.shape == (1, 2)
    assert g.values.tolist() == [[128.0, 7.0]]


def test_pgm_p2_and_16bit(tmp_path):
    p = tmp_path / "a.pgm"
    p.write_text("P2\n3 2\n# c\n1000\n0 1 2\n3 999 1000\n")
    assert io.read_grid(p).values.tolist() == [[0, 1, 2], [3, 999, 1000]]
    g = ScalarGrid([[0.0, 300.0], [65535.0, 2.0]])
    q = tmp_path / "b.pgm"
    io.write_grid(g, q)
    np.testing.assert_array_equal(io.read_grid(q).values, g.values)


def test_pgm_quantizes_and_checks_range(tmp_path):
    p = tmp_path / "a.pgm"
    io.write_grid(ScalarGrid([[1.4, 254.6]]), p)
    assert io.read_grid(p).values.tolist() == [[1.0, 255.0]]
    with pytest.raises(GridFormatError):
        io.write_grid(ScalarGrid([[-3.0, 1.0]]), p)
    p.write_bytes(b"P5\n2 2\n255\n\x01")
    with pytest.raises(GridFormatError):
        io.read_grid(p)


def test_csv(tmp_path):
    p = tmp_path / "a.csv"
    p.write_text("1,2\n3,4\n")
    g = io.read_grid(p)
    assert g.shape == (2, 2) and g.values.ravel().tolist() == [1, 2, 3, 4]
    io.write_grid(ScalarGrid([[0.1, 1 / 3]]), p)
    assert io.read_grid(p).values.tolist() == [[0.1, 1 / 3]]


def test_unknown_extension():
    with pytest.raises(GridFormatError):
        io.guess_format("x.tiff")


def test_mask_roundtrip(tmp_path):
    m = MaskGrid(np.eye(3, dtype=bool))
    p = tmp_path / "m.pgm"
    io.write_mask(m, p)
    assert io.read_grid(p).values.max() == 255
    np.testing.assert_array_equal(io.read_mask(p).flags, m.flags)


def test_feature_map_sidecar_and_markers(tmp_path):
    fm = FeatureMap(ScalarGrid(np.ones((2, 2))), "ridge", {"lambda": 1.0})
    side = io.write_feature_map(fm, tmp_path / "r.fgrid")
    assert json.loads(open(side).read()) == {"kind": "ridge", "params": {"lambda": 1.0}}
    io.write_markers(np.array([[1, 2], [3, 4]]), tmp_path / "m.csv")
    assert (tmp_path / "m.csv").read_text().splitlines() == ["i0,i1", "1,2", "3,4"]
