"""Transverse grids, fields, and the plain-text file format."""

import numpy as np
import pytest

from defectlattice import InvalidSpecError
from defectlattice.eme import Field, TransverseGrid, inner, read_field, write_field


def test_grid_validation():
    with pytest.raises(InvalidSpecError):
        TransverseGrid(4, 20, 0.5, 0.5, 0.0, 0.0)
    with pytest.raises(InvalidSpecError):
        TransverseGrid(20, 20, 0.0, 0.5, 0.0, 0.0)


def test_centered_grid_symmetry():
    g = TransverseGrid.centered(10.0, 8.0, 0.5, 0.5)
    assert g.x[0] == pytest.approx(-g.x[-1])
    assert g.y[0] == pytest.approx(-g.y[-1])
    assert g.x[0] == pytest.approx(-5.0)


def test_field_shape_checked():
    g = TransverseGrid.centered(4.0, 4.0, 0.5, 0.5)
    with pytest.raises(InvalidSpecError):
        Field(g, np.zeros((3, 3)))


def test_norm_and_inner():
    g = TransverseGrid.centered(8.0, 8.0, 0.25, 0.25)
    X, Y = g.mesh()
    f = Field(g, np.exp(-(X ** 2 + Y ** 2))).normalized()
    assert f.norm() == pytest.approx(1.0, rel=1e-12)
    assert inner(f, f).real == pytest.approx(1.0, rel=1e-12)


def test_file_round_trip_bit_exact(tmp_path, rng):
    g = TransverseGrid(12, 9, 0.37, 0.41, -2.035, -1.64)
    vals = rng.normal(size=(9, 12)) * np.pi
    path = str(tmp_path / "field.txt")
    write_field(path, Field(g, vals))
    back = read_field(path)
    assert back.grid == g
    assert np.array_equal(back.values, vals)  # 17 significant digits round-trip


def test_file_rejects_complex_and_bad_header(tmp_path):
    g = TransverseGrid.centered(4.0, 4.0, 0.5, 0.5)
    with pytest.raises(InvalidSpecError):
        write_field(str(tmp_path / "c.txt"), Field(g, np.zeros((g.ny, g.nx), dtype=complex)))
    bad = tmp_path / "bad.txt"
    bad.write_text("# not a header\n0 1\n")
    with pytest.raises(InvalidSpecError):
        read_field(str(bad))
