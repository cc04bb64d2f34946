"""Nonnegative CP decomposition by hierarchical alternating least squares.

Each sweep visits the three modes in order and, for the active mode,
updates one factor column at a time by exact nonnegative least squares
(the unconstrained minimizer clipped at zero), using the mode unfolding
and the Khatri-Rao product of the other two factors. Exact blockwise
minimization makes the Frobenius objective non-increasing per sweep.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .nmf import SolverOptions
from .rng import SplitMix64
from .tensor import (
    CpFactors,
    cp_reconstruct,
    khatri_rao,
    require_nonnegative,
    require_tensor3,
    unfold,
)


@dataclass
class NncpdResult:
    """CP factors with the per-sweep objective trace.

    ``column_rescues`` counts factor columns that collapsed to zero during
    a sweep and were reset to the epsilon guard (a diagnostic, not an
    error; it keeps the Gram matrices nonsingular).
    """

    factors: CpFactors
    error_history: np.ndarray
    converged: bool
    iterations: int
    seed: int
    column_rescues: int = 0
    restart_errors: tuple[float, ...] | None = None

    @property
    def error(self) -> float:
        return float(self.error_history[-1])


def nncpd_hals(
    T,
    r: int,
    opts: SolverOptions | None = None,
    init: tuple[np.ndarray, np.ndarray, np.ndarray] | None = None,
) -> NncpdResult:
    """Rank-r nonnegative CP decomposition of a nonnegative tensor.

    Parameters
    ----------
    T : array_like, shape (n1, n2, n3)
        Nonnegative data tensor.
    r : int
        Number of rank-one components, at least 1.
    opts : SolverOptions, optional
        Iteration budget, tolerance and seed.
    init : triple of arrays, optional
        Explicit starting factors ``(A0, B0, C0)``; when omitted, factors
        are seeded i.i.d. uniform on [epsilon, 1) scaled by
        ``(mean(T) * T.size / r) ** (1/3)``.

    Returns
    -------
    NncpdResult
        Nonnegative factors, the Frobenius error against ``T`` after every
        sweep (non-increasing), convergence flag, sweep count and seed.
        Deterministic for fixed seed and input.
    """
    opts = opts or SolverOptions()
    T = require_tensor3(T)
    require_nonnegative(T, "tensor")
    if r < 1:
        raise ValueError("rank must be at least 1")
    eps = opts.epsilon

    if init is not None:
        factors = [np.array(f, dtype=np.float64) for f in init]
        if tuple(f.shape for f in factors) != tuple((n, r) for n in T.shape):
            raise ValueError("init factor shapes inconsistent with tensor and rank")
        for f in factors:
            require_nonnegative(f, "init factor")
    else:
        rng = SplitMix64(opts.seed)
        mean = float(T.mean())
        scale = (mean * T.size / r) ** (1.0 / 3.0) if mean > 0 else 0.0
        factors = [
            (eps + (1.0 - eps) * rng.uniform(n * r).reshape(n, r)) * scale
            for n in T.shape
        ]

    history = []
    converged = False
    rescues = 0
    prev = None
    for _ in range(opts.max_iters):
        for mode in range(3):
            lo, hi = [factors[j] for j in range(3) if j != mode]
            gram = (lo.T @ lo) * (hi.T @ hi)
            target = unfold(T, mode + 1) @ khatri_rao(hi, lo)
            fac = factors[mode]
            for col in range(r):
                numer = target[:, col] - fac @ gram[:, col] + fac[:, col] * gram[col, col]
                updated = np.maximum(numer / max(gram[col, col], eps), 0.0)
                if not updated.any():
                    updated[:] = eps
                    rescues += 1
                fac[:, col] = updated
        err = float(np.linalg.norm(T - np.einsum("ir,jr,kr->ijk", *factors)))
        history.append(err)
        if prev is not None and abs(err - prev) / max(prev, eps) < opts.rel_tol:
            converged = True
            break
        prev = err

    return NncpdResult(
        factors=CpFactors(*factors),
        error_history=np.array(history),
        converged=converged,
        iterations=len(history),
        seed=opts.seed,
        column_rescues=rescues,
    )


def nncpd_best_of(T, r: int, opts: SolverOptions | None = None, restarts: int = 1) -> NncpdResult:
    """Best of ``restarts`` HALS runs seeded ``opts.seed + 0 .. restarts-1``.

    Returns the run with minimal final error; ``restart_errors`` records
    every run's final error in seed order.
    """
    opts = opts or SolverOptions()
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    results = [nncpd_hals(T, r, replace(opts, seed=opts.seed + k)) for k in range(restarts)]
    best = min(results, key=lambda res: res.error)
    best.restart_errors = tuple(res.error for res in results)
    return best


def temporal_spikes(C, top_k: int) -> list[tuple[int, float]]:
    """Largest jumps between consecutive rows of a factor matrix.

    Boundary ``t`` separates rows ``t`` and ``t+1`` and is scored by the
    maximum over columns of ``|C[t+1, l] - C[t, l]|``. Returns the
    ``top_k`` boundaries by descending magnitude, ties broken by smaller
    index; ``top_k`` larger than the boundary count returns them all.
    """
    C = np.asarray(C, dtype=np.float64)
    if C.ndim == 1:
        C = C[:, None]
    if C.ndim != 2:
        raise ValueError("factor must be a matrix")
    if C.shape[0] < 2:
        raise ValueError("factor needs at least 2 rows to have boundaries")
    if top_k < 0:
        raise ValueError("top_k must be nonnegative")
    magnitudes = np.abs(np.diff(C, axis=0)).max(axis=1)
    order = sorted(range(len(magnitudes)), key=lambda t: (-magnitudes[t], t))
    return [(t, float(magnitudes[t])) for t in order[:top_k]]
