"""Small dense linear-algebra helpers shared across modules."""

from __future__ import annotations

import numpy as np


def null_space(A: np.ndarray, rcond: float = 1e-9) -> np.ndarray:
    """Orthonormal null space (columns) of a possibly very tall matrix."""
    A = np.asarray(A, dtype=float)
    if A.shape[0] > A.shape[1]:
        A = np.linalg.qr(A, mode="r")
    _, s, vt = np.linalg.svd(A, full_matrices=True)
    rank = int(np.sum(s > rcond * s[0])) if s.size and s[0] > 0 else 0
    return vt[rank:].T
