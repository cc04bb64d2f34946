"""Portable seeded random number generation.

Every stochastic object in this package (solver initializations, synthetic
tensors, noise draws) is produced by SplitMix64, a 64-bit generator with a
one-line state transition, so that identical seeds give bit-identical
streams on any platform and the recipe can be reimplemented exactly in any
language:

    state_{i+1} = state_i + 0x9E3779B97F4A7C15          (mod 2^64)
    output_i    = mix(state_{i+1})

    mix(z): z ^= z >> 30; z *= 0xBF58476D1CE4E5B9
            z ^= z >> 27; z *= 0x94D049BB133111EB
            z ^= z >> 31                                 (mod 2^64)

Derived variates are also pinned:

* uniform in [0, 1):  (output >> 11) * 2^-53
* standard normals:   Box-Muller. A batch of n normals consumes
  2*ceil(n/2) raw outputs; the first half give radial uniforms
  u1 = ((raw >> 11) + 1) * 2^-53 in (0, 1], the second half angular
  uniforms u2 = (raw >> 11) * 2^-53, and the batch is the concatenation
  sqrt(-2 ln u1) * cos(2 pi u2) followed by sqrt(-2 ln u1) * sin(2 pi u2),
  truncated to n values.
"""

from __future__ import annotations

import numpy as np

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_U53 = 2.0 ** -53


def _mix(z: np.ndarray) -> np.ndarray:
    """SplitMix64 finalizer, elementwise on uint64 arrays (wraps mod 2^64)."""
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        return z ^ (z >> np.uint64(31))


class SplitMix64:
    """Stateful SplitMix64 stream seeded with a 64-bit integer."""

    def __init__(self, seed: int):
        self._seed = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
        self._drawn = 0

    def raw(self, n: int) -> np.ndarray:
        """Next ``n`` raw uint64 outputs."""
        if n < 0:
            raise ValueError("draw count must be nonnegative")
        idx = np.arange(self._drawn + 1, self._drawn + n + 1, dtype=np.uint64)
        self._drawn += n
        with np.errstate(over="ignore"):
            return _mix(self._seed + idx * _GAMMA)

    def uniform(self, n: int) -> np.ndarray:
        """``n`` doubles uniform on [0, 1)."""
        return (self.raw(n) >> np.uint64(11)).astype(np.float64) * _U53

    def normal(self, n: int) -> np.ndarray:
        """``n`` standard normal doubles via Box-Muller."""
        if n == 0:
            return np.empty(0)
        m = (n + 1) // 2
        raws = self.raw(2 * m) >> np.uint64(11)
        u1 = (raws[:m].astype(np.float64) + 1.0) * _U53
        u2 = raws[m:].astype(np.float64) * _U53
        radius = np.sqrt(-2.0 * np.log(u1))
        angle = 2.0 * np.pi * u2
        return np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])[:n]


def derive_seed(base: int, *parts: int | str) -> int:
    """Deterministic 64-bit seed from a base seed and a mixed token path.

    Strings are folded in as UTF-8 bytes, integers as 8 little-endian
    bytes; each byte and each token length passes through the SplitMix64
    finalizer, so distinct paths decorrelate. Stable across platforms and
    sessions (unlike builtin ``hash``).
    """
    h = np.uint64(base & 0xFFFFFFFFFFFFFFFF)
    for part in parts:
        if isinstance(part, str):
            data = part.encode("utf-8")
        else:
            value = int(part)
            if value < 0:
                raise ValueError("integer seed parts must be nonnegative")
            data = value.to_bytes(8, "little")
        for byte in data:
            h = _mix(h ^ np.uint64(byte))
        h = _mix(h ^ np.uint64(len(data)))
    return int(h)
