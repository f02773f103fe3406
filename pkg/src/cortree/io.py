"""CSV interchange for count matrices, labels, and traces."""

import numpy as np


class IoError(ValueError):
    pass


def write_counts(path, counts):
    counts = np.asarray(counts)
    header = ",".join(f"bin_{j}" for j in range(counts.shape[1]))
    _write_int_csv(path, counts, header)


def read_counts(path):
    rows = _read_csv_rows(path)
    try:
        mat = np.array([[int(v) for v in row] for row in rows], dtype=np.int64)
    except ValueError as exc:
        raise IoError(f"{path}: non-integer entry in count matrix") from exc
    if mat.ndim != 2:
        raise IoError(f"{path}: ragged count matrix")
    if np.any(mat < 0):
        raise IoError(f"{path}: negative counts")
    return mat


def write_labels(path, labels):
    labels = np.asarray(labels, dtype=int).reshape(-1, 1)
    _write_int_csv(path, labels, "label")


def read_labels(path):
    rows = _read_csv_rows(path)
    try:
        labels = np.array([int(row[0]) for row in rows], dtype=int)
    except (ValueError, IndexError) as exc:
        raise IoError(f"{path}: malformed label file") from exc
    return labels


def write_float_matrix(path, mat, prefix):
    mat = np.atleast_2d(np.asarray(mat, dtype=float))
    header = ",".join(f"{prefix}_{j}" for j in range(mat.shape[1]))
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in mat:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def read_float_matrix(path):
    rows = _read_csv_rows(path)
    return np.array([[float(v) for v in row] for row in rows])


def _write_int_csv(path, mat, header):
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in mat:
            fh.write(",".join(str(int(v)) for v in row) + "\n")


def _read_csv_rows(path):
    """All data rows of a CSV, skipping a non-numeric header line if present."""
    try:
        with open(path) as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    if not lines:
        raise IoError(f"{path}: empty file")
    first = lines[0].split(",")[0]
    try:
        float(first)
        start = 0
    except ValueError:
        start = 1
    rows = [ln.split(",") for ln in lines[start:]]
    if not rows:
        raise IoError(f"{path}: no data rows")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise IoError(f"{path}: ragged rows")
    return rows
