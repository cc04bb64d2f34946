"""Nonnegative matrix factorization and the NMF-based tensor baselines.

``nmf`` minimizes ``||X - A @ B||_F`` over nonnegative ``A`` (n1 x r) and
``B`` (r x n2) with Lee-Seung multiplicative updates, whose objective is
non-increasing at every iteration. The two tensor baselines reduce a
3-way tensor to matrix problems:

* ``direct_nmf`` slices the tensor along one mode and factorizes every
  slice independently;
* ``fixed_nmf`` concatenates the slices along their column dimension,
  factorizes once, and splits the coefficient matrix back per slice, so
  a single dictionary factor ``A`` is shared by all slices.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .rng import SplitMix64
from .tensor import require_nonnegative, require_tensor3, stack_slices
from .tensor import slice_mode as _take_slice


@dataclass(frozen=True)
class SolverOptions:
    """Iteration budget, stopping rule and seeding shared by all solvers.

    Iteration stops once ``|E_t - E_{t-1}| / max(E_{t-1}, epsilon)`` falls
    below ``rel_tol``; ``epsilon`` also guards update-rule denominators.
    """

    max_iters: int = 500
    rel_tol: float = 1e-8
    seed: int = 0
    epsilon: float = 1e-12

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")


@dataclass
class NmfResult:
    """Factor pair with the per-iteration objective trace."""

    A: np.ndarray
    B: np.ndarray
    error_history: np.ndarray
    converged: bool
    iterations: int

    @property
    def error(self) -> float:
        return float(self.error_history[-1])


@dataclass
class SlicedDecomposition:
    """Per-slice factor pairs of a slicewise tensor decomposition.

    For the shared-dictionary variant every entry of ``A_factors`` is the
    same array object, so slicewise and concatenated reconstructions agree
    bit for bit.
    """

    kind: str
    slice_mode: int
    A_factors: tuple[np.ndarray, ...]
    S_factors: tuple[np.ndarray, ...]
    reconstruction_error: float
    iterations: int
    rank: int = field(default=0)

    def __post_init__(self):
        if self.rank == 0:
            self.rank = self.A_factors[0].shape[1]

    @property
    def n_slices(self) -> int:
        return len(self.S_factors)

    @property
    def common_A(self) -> np.ndarray:
        if self.kind != "fixed":
            raise ValueError("only the fixed variant has a shared dictionary")
        return self.A_factors[0]

    def reconstruct(self) -> np.ndarray:
        mats = [a @ s for a, s in zip(self.A_factors, self.S_factors)]
        return stack_slices(mats, self.slice_mode)


def _init_factors(rng: SplitMix64, shape: tuple[int, int], scale: float, eps: float) -> np.ndarray:
    u = rng.uniform(shape[0] * shape[1]).reshape(shape)
    return (eps + (1.0 - eps) * u) * scale


def nmf(X, r: int, opts: SolverOptions | None = None) -> NmfResult:
    """Factorize a nonnegative matrix as ``X ~ A @ B`` at rank ``r``.

    Parameters
    ----------
    X : array_like, shape (n1, n2)
        Nonnegative data matrix.
    r : int
        Number of factor columns (latent topics), at least 1.
    opts : SolverOptions, optional
        Iteration budget, tolerance and seed; defaults used when omitted.

    Returns
    -------
    NmfResult
        Nonnegative ``A`` (n1 x r) and ``B`` (r x n2), the Frobenius error
        after every iteration (non-increasing), the convergence flag and
        the iteration count. Deterministic for a fixed seed.
    """
    opts = opts or SolverOptions()
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"X must be a matrix, got shape {X.shape}")
    require_nonnegative(X, "X")
    if r < 1:
        raise ValueError("rank must be at least 1")
    eps = opts.epsilon

    rng = SplitMix64(opts.seed)
    mean = float(X.mean())
    scale = np.sqrt(mean / r) if mean > 0 else 0.0
    A = _init_factors(rng, (X.shape[0], r), scale, eps)
    B = _init_factors(rng, (r, X.shape[1]), scale, eps)

    history = []
    converged = False
    prev = None
    for _ in range(opts.max_iters):
        B *= (A.T @ X) / (A.T @ A @ B + eps)
        A *= (X @ B.T) / (A @ (B @ B.T) + eps)
        err = float(np.linalg.norm(X - A @ B))
        history.append(err)
        if prev is not None and abs(err - prev) / max(prev, eps) < opts.rel_tol:
            converged = True
            break
        prev = err
    return NmfResult(A, B, np.array(history), converged, len(history))


def direct_nmf(T, r: int, slice_mode: int, opts: SolverOptions | None = None) -> SlicedDecomposition:
    """Independent rank-r NMF of every slice of ``T`` along ``slice_mode``.

    Slice ``i`` is solved with seed ``opts.seed + i`` so the per-slice
    problems stay independently reproducible. The reconstruction error is
    measured against the supplied tensor.
    """
    opts = opts or SolverOptions()
    T = require_tensor3(T)
    require_nonnegative(T, "tensor")
    n_slices = T.shape[slice_mode - 1]
    a_factors, s_factors = [], []
    iterations = 0
    for i in range(n_slices):
        res = nmf(_take_slice(T, slice_mode, i), r, replace(opts, seed=opts.seed + i))
        a_factors.append(res.A)
        s_factors.append(res.B)
        iterations += res.iterations
    dec = SlicedDecomposition("direct", slice_mode, tuple(a_factors), tuple(s_factors), 0.0, iterations)
    dec.reconstruction_error = float(np.linalg.norm(T - dec.reconstruct()))
    return dec


def fixed_nmf(T, r: int, slice_mode: int, opts: SolverOptions | None = None) -> SlicedDecomposition:
    """Rank-r NMF of the column-concatenated slices with one shared ``A``.

    The slices along ``slice_mode`` are joined left-to-right into a single
    matrix, factorized once, and the coefficient matrix is split back into
    per-slice blocks ``S_i``, so ``slice_i ~ A @ S_i`` with a common
    dictionary ``A``.
    """
    opts = opts or SolverOptions()
    T = require_tensor3(T)
    require_nonnegative(T, "tensor")
    n_slices = T.shape[slice_mode - 1]
    slices = [_take_slice(T, slice_mode, i) for i in range(n_slices)]
    res = nmf(np.hstack(slices), r, opts)
    width = slices[0].shape[1]
    s_factors = tuple(res.B[:, i * width:(i + 1) * width] for i in range(n_slices))
    dec = SlicedDecomposition(
        "fixed", slice_mode, (res.A,) * n_slices, s_factors, 0.0, res.iterations
    )
    dec.reconstruction_error = float(np.linalg.norm(T - dec.reconstruct()))
    return dec
