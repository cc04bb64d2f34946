"""Dense third-order tensor algebra.

A tensor is a numpy array of shape ``(n1, n2, n3)`` with nonnegative float64
entries; its canonical linearization (used by the serializers in
:mod:`dyntopic.tensor_io`) is C order, i.e. entry ``(i, j, k)`` sits at flat
position ``(i * n2 + j) * n3 + k``.

Unfoldings follow the convention that the columns of the mode-m unfolding
are ordered with the lower-numbered remaining modes varying fastest, so

    unfold(T, 1) = A @ khatri_rao(C, B).T
    unfold(T, 2) = B @ khatri_rao(C, A).T
    unfold(T, 3) = C @ khatri_rao(B, A).T

whenever ``T`` is the reconstruction of factor matrices ``(A, B, C)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MODES = (1, 2, 3)


def _as_array(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise ValueError(f"{name} must be nonempty")
    return arr


def require_tensor3(t, name: str = "tensor") -> np.ndarray:
    """Validate and return ``t`` as a 3-way float64 array."""
    arr = np.asarray(t, dtype=np.float64)
    if arr.ndim != 3:
        raise ValueError(f"{name} must have exactly 3 modes, got shape {arr.shape}")
    if min(arr.shape) < 1:
        raise ValueError(f"{name} has an empty mode: shape {arr.shape}")
    return arr


def require_nonnegative(arr: np.ndarray, name: str = "input") -> np.ndarray:
    if arr.size and float(arr.min()) < 0.0:
        raise ValueError(f"{name} must be elementwise nonnegative")
    return arr


def _check_mode(mode: int) -> int:
    if mode not in _MODES:
        raise ValueError(f"mode must be 1, 2 or 3, got {mode!r}")
    return mode


@dataclass(frozen=True)
class CpFactors:
    """Factor matrices ``(A, B, C)`` of a rank-r CP decomposition.

    ``A`` is ``n1 x r``, ``B`` is ``n2 x r``, ``C`` is ``n3 x r``; all
    entries are nonnegative and the column count is shared.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        for name in ("A", "B", "C"):
            mat = np.asarray(getattr(self, name), dtype=np.float64)
            if mat.ndim != 2:
                raise ValueError(f"factor {name} must be 2-D")
            require_nonnegative(mat, f"factor {name}")
            object.__setattr__(self, name, mat)
        ranks = {self.A.shape[1], self.B.shape[1], self.C.shape[1]}
        if len(ranks) != 1:
            raise ValueError(f"factors disagree on rank: {sorted(ranks)}")
        if self.rank < 1:
            raise ValueError("rank must be at least 1")

    @property
    def rank(self) -> int:
        return self.A.shape[1]

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.A.shape[0], self.B.shape[0], self.C.shape[0])

    @property
    def matrices(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (self.A, self.B, self.C)


def outer3(a, b, c) -> np.ndarray:
    """Rank-one tensor ``a x b x c`` with entries ``a[i] * b[j] * c[k]``."""
    a = _as_array(a, "a")
    b = _as_array(b, "b")
    c = _as_array(c, "c")
    for name, v in (("a", a), ("b", b), ("c", c)):
        if v.ndim != 1:
            raise ValueError(f"{name} must be a vector")
        require_nonnegative(v, name)
    return a[:, None, None] * b[None, :, None] * c[None, None, :]


def unfold(t, mode: int) -> np.ndarray:
    """Mode-m unfolding of ``t`` as an ``n_m x (prod of other dims)`` matrix."""
    t = require_tensor3(t)
    _check_mode(mode)
    return np.reshape(np.moveaxis(t, mode - 1, 0), (t.shape[mode - 1], -1), order="F")


def fold(m, mode: int, shape: tuple[int, int, int]) -> np.ndarray:
    """Exact inverse of :func:`unfold` for the given mode and shape."""
    m = np.asarray(m, dtype=np.float64)
    _check_mode(mode)
    if len(shape) != 3 or min(shape) < 1:
        raise ValueError(f"shape must be 3 positive dimensions, got {shape!r}")
    others = [shape[i] for i in range(3) if i != mode - 1]
    expected = (shape[mode - 1], others[0] * others[1])
    if m.ndim != 2 or m.shape != expected:
        raise ValueError(
            f"matrix shape {m.shape} inconsistent with mode {mode} of {tuple(shape)}; "
            f"expected {expected}"
        )
    t = np.reshape(m, (shape[mode - 1], others[0], others[1]), order="F")
    return np.moveaxis(t, 0, mode - 1)


def khatri_rao(u, v) -> np.ndarray:
    """Columnwise Kronecker product: column l is ``kron(u[:, l], v[:, l])``."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.ndim != 2 or v.ndim != 2:
        raise ValueError("khatri_rao expects two matrices")
    if u.shape[1] != v.shape[1]:
        raise ValueError(
            f"column counts differ: {u.shape[1]} vs {v.shape[1]}"
        )
    n, r = u.shape
    m = v.shape[0]
    return (u[:, None, :] * v[None, :, :]).reshape(n * m, r)


def cp_reconstruct(factors: CpFactors) -> np.ndarray:
    """Dense tensor with entries ``sum_l A[i,l] * B[j,l] * C[k,l]``."""
    return np.einsum("ir,jr,kr->ijk", factors.A, factors.B, factors.C)


def frobenius_distance(x, y) -> float:
    """Square root of the sum of squared entrywise differences."""
    x = require_tensor3(x, "x")
    y = require_tensor3(y, "y")
    if x.shape != y.shape:
        raise ValueError(f"shape mismatch: {x.shape} vs {y.shape}")
    return float(np.linalg.norm(x - y))


def slice_mode(t, mode: int, index: int) -> np.ndarray:
    """2-D slice at ``index`` along ``mode``, remaining modes in ascending order."""
    t = require_tensor3(t)
    _check_mode(mode)
    dim = t.shape[mode - 1]
    if not 0 <= index < dim:
        raise ValueError(f"index {index} out of range for mode {mode} of size {dim}")
    if mode == 1:
        return t[index].copy()
    if mode == 2:
        return t[:, index, :].copy()
    return t[:, :, index].copy()


def stack_slices(slices, mode: int) -> np.ndarray:
    """Reassemble per-index 2-D slices along ``mode`` (inverse of slicing)."""
    _check_mode(mode)
    return np.stack([np.asarray(s, dtype=np.float64) for s in slices], axis=mode - 1)
