"""Tensor serialization.

Binary format: 24-byte header of three little-endian uint64 dimensions
``(n1, n2, n3)`` followed by ``n1*n2*n3`` little-endian float64 values in
C order (entry ``(i, j, k)`` at flat position ``(i*n2 + j)*n3 + k``).

Debug text format: a directory of ``slice_NNNN.csv`` files, one per
mode-1 slice, each an ``n2 x n3`` comma-separated matrix.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .tensor import require_tensor3

_HEADER = struct.Struct("<3Q")


def save_tensor(t, path) -> None:
    t = require_tensor3(t)
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(*t.shape))
        fh.write(np.ascontiguousarray(t, dtype="<f8").tobytes())


def load_tensor(path) -> np.ndarray:
    path = Path(path)
    data = path.read_bytes()
    if len(data) < _HEADER.size:
        raise ValueError(f"{path}: truncated tensor header")
    shape = _HEADER.unpack_from(data)
    count = shape[0] * shape[1] * shape[2]
    body = data[_HEADER.size:]
    if len(body) != 8 * count:
        raise ValueError(
            f"{path}: expected {8 * count} value bytes for shape {shape}, got {len(body)}"
        )
    values = np.frombuffer(body, dtype="<f8").astype(np.float64)
    return values.reshape(shape)


def save_tensor_csv(t, directory) -> None:
    t = require_tensor3(t)
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for i in range(t.shape[0]):
        target = directory / f"slice_{i:04d}.csv"
        rows = [",".join(repr(float(v)) for v in row) for row in t[i]]
        target.write_text("\n".join(rows) + "\n", encoding="ascii")


def load_tensor_csv(directory) -> np.ndarray:
    directory = Path(directory)
    files = sorted(directory.glob("slice_*.csv"))
    if not files:
        raise ValueError(f"{directory}: no slice_*.csv files found")
    slices = []
    for path in files:
        rows = [
            [float(cell) for cell in line.split(",")]
            for line in path.read_text(encoding="ascii").splitlines()
            if line
        ]
        slices.append(np.array(rows, dtype=np.float64))
    return np.stack(slices, axis=0)
