"""Small dense linear algebra and reproducible random streams.

Matrices and vectors are plain float64 numpy arrays. ``solve_spd`` goes
through a Cholesky factorization and never forms an explicit inverse.
"""

from __future__ import annotations

import numpy as np
from scipy import linalg

from .errors import DimensionMismatch, NotPositiveDefinite

_SYMMETRY_RTOL = 1e-12
_PIVOT_RTOL = 1e-12
_SEED_MASK = (1 << 64) - 1


def _as_matrix(a, name):
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {a.shape}")
    return a


def cholesky_factor(a):
    """Lower Cholesky factor of a symmetric positive-definite matrix.

    Raises
    ------
    NotPositiveDefinite
        If a pivot falls below ``1e-12 * max(diag(a))`` or the
        factorization breaks down.
    """
    a = _as_matrix(a, "A")
    n, k = a.shape
    if n != k:
        raise DimensionMismatch(f"A must be square, got shape {a.shape}")
    if n == 0:
        return a.copy()
    if not np.all(np.isfinite(a)):
        raise NotPositiveDefinite("matrix has non-finite entries")
    scale = np.max(np.abs(a))
    if np.max(np.abs(a - a.T)) > _SYMMETRY_RTOL * max(scale, 1e-300):
        raise NotPositiveDefinite("matrix is not symmetric")
    try:
        chol = linalg.cholesky(a, lower=True, check_finite=False)
    except linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from None
    pivots = np.diag(chol) ** 2
    if pivots.min() <= _PIVOT_RTOL * np.max(np.diag(a)):
        raise NotPositiveDefinite(
            f"pivot {pivots.min():.3e} below tolerance relative to max diagonal"
        )
    return chol


def solve_spd(a, b):
    """Solve ``A X = B`` for symmetric positive-definite ``A``.

    ``b`` may be a vector or a matrix; the result has the same shape.
    """
    a = _as_matrix(a, "A")
    b = np.asarray(b, dtype=np.float64)
    if b.ndim not in (1, 2) or b.shape[0] != a.shape[0]:
        raise DimensionMismatch(f"A is {a.shape}, B is {b.shape}")
    chol = cholesky_factor(a)
    if a.shape[0] == 0:
        return np.zeros_like(b)
    return linalg.cho_solve((chol, True), b, check_finite=False)


def quadratic_form(a, v):
    """Return ``v^T A v``."""
    a = _as_matrix(a, "A")
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or a.shape != (v.size, v.size):
        raise DimensionMismatch(f"A is {a.shape}, v is {v.shape}")
    return float(v @ a @ v)


class RngStream:
    """Deterministic random stream keyed by ``(master_seed, stream_index)``.

    Each stream wraps a Philox counter-based generator seeded from a
    ``SeedSequence`` whose spawn key is the stream index (plus any child
    path), so streams never depend on the order in which other streams are
    consumed. A stream is meant to have a single owner.
    """

    def __init__(self, master_seed: int, stream_index: int = 0, path: tuple = ()):
        if stream_index < 0:
            raise ValueError("stream_index must be nonnegative")
        self.master_seed = int(master_seed) & _SEED_MASK
        self.stream_index = int(stream_index)
        self.path = tuple(int(p) for p in path)
        seq = np.random.SeedSequence(
            self.master_seed, spawn_key=(self.stream_index, *self.path)
        )
        self.generator = np.random.Generator(np.random.Philox(seq))

    def child(self, key: int) -> "RngStream":
        """Independent sub-stream; the parent's state is untouched."""
        return RngStream(self.master_seed, self.stream_index, self.path + (key,))

    def __repr__(self):
        return (
            f"RngStream(master_seed={self.master_seed}, "
            f"stream_index={self.stream_index}, path={self.path})"
        )


def sample_standard_normal(rng: RngStream, n: int) -> np.ndarray:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return rng.generator.standard_normal(n)
