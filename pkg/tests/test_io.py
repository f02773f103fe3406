import numpy as np
import pytest

from cortree import io


class TestCounts:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "counts.csv"
        mat = np.array([[0, 3, 1], [5, 0, 2]])
        io.write_counts(path, mat)
        np.testing.assert_array_equal(io.read_counts(path), mat)

    def test_header_written(self, tmp_path):
        path = tmp_path / "counts.csv"
        io.write_counts(path, np.array([[1, 2]]))
        assert path.read_text().splitlines()[0] == "bin_0,bin_1"

    def test_headerless_accepted(self, tmp_path):
        path = tmp_path / "raw.csv"
        path.write_text("1,2\n3,4\n")
        np.testing.assert_array_equal(io.read_counts(path), [[1, 2], [3, 4]])

    def test_negative_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("1,-2\n")
        with pytest.raises(io.IoError):
            io.read_counts(path)

    def test_non_integer_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("1,2.5\n")
        with pytest.raises(io.IoError):
            io.read_counts(path)

    def test_ragged_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("1,2\n3\n")
        with pytest.raises(io.IoError):
            io.read_counts(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(io.IoError):
            io.read_counts(tmp_path / "nope.csv")

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(io.IoError):
            io.read_counts(path)


class TestLabels:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "labels.csv"
        io.write_labels(path, [0, 2, 1, 1])
        np.testing.assert_array_equal(io.read_labels(path), [0, 2, 1, 1])

    def test_malformed(self, tmp_path):
        path = tmp_path / "labels.csv"
        path.write_text("label\nx\n")
        with pytest.raises(io.IoError):
            io.read_labels(path)


class TestFloatMatrix:
    def test_round_trip_exact(self, tmp_path):
        path = tmp_path / "mat.csv"
        mat = np.random.default_rng(0).normal(size=(3, 4))
        io.write_float_matrix(path, mat, "x")
        np.testing.assert_array_equal(io.read_float_matrix(path), mat)

    def test_write_is_byte_deterministic(self, tmp_path):
        mat = np.random.default_rng(1).normal(size=(2, 5))
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        io.write_float_matrix(a, mat, "v")
        io.write_float_matrix(b, mat.copy(), "v")
        assert a.read_bytes() == b.read_bytes()

    def test_vector_promoted(self, tmp_path):
        path = tmp_path / "vec.csv"
        io.write_float_matrix(path, np.array([1.5, 2.5]), "v")
        assert io.read_float_matrix(path).shape == (1, 2)
