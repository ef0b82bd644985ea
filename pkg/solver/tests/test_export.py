"""Tests for the flat binary potential export."""

import numpy as np
import pytest

from solver.exceptions import SolverError
from solver.services.export import export_potential, read_potential


@pytest.mark.unit
class TestExportPotential:
    """Tests for export_potential and read_potential."""

    def test_files_and_layout(self, coarse_ball_potential, tmp_path):
        """Test 1: the binary holds 8 bytes per node and the header describes it."""
        binary, text = export_potential(coarse_ball_potential, tmp_path / "ball")
        assert binary.name == "ball.bin"
        assert text.name == "ball.txt"
        assert binary.stat().st_size == 8 * coarse_ball_potential.values.size

        header, values = read_potential(tmp_path / "ball")
        assert header["mode"] == "axisym"
        assert header["byte_order"] == "little"
        assert header["spacing"] == pytest.approx(coarse_ball_potential.h)
        assert header["origin"][0] == 0.0
        assert header["body"]["kind"] == "ball"
        assert np.array_equal(values, coarse_ball_potential.values)

    def test_little_endian_c_order(self, coarse_ball_potential, tmp_path):
        """Test 2: raw bytes decode as little-endian float64 in C order."""
        binary, _ = export_potential(coarse_ball_potential, tmp_path / "raw")
        raw = np.frombuffer(binary.read_bytes(), dtype="<f8")
        assert np.array_equal(raw, coarse_ball_potential.values.ravel(order="C"))

    def test_missing_files(self, tmp_path):
        """Reading a missing export fails with a solver error."""
        with pytest.raises(SolverError):
            read_potential(tmp_path / "absent")
