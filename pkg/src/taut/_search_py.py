"""Batched damped Gauss-Newton search for zeros of the orbit gradient (numpy).

For a height direction ``q`` the gradient of ``x -> <q, x>`` along the orbit,
in algebra coordinates, is ``f(x) = W x`` with ``W[a] = X_a^T q``.  Moving to
``exp(sum_b d_b X_b) x`` changes ``f`` to first order by ``J d`` with
``J = W V(x)`` where ``V(x)`` has columns ``X_b x``.  Steps solve
``(J^T J + mu I) d = -J^T f`` with an accept/reject damping schedule and are
applied through a vector Taylor series of the exponential, so every iterate
stays on the orbit up to rounding.
"""

from __future__ import annotations

import numpy as np

LAMBDA0 = 1e-3
LAMBDA_MIN = 1e-12
LAMBDA_MAX = 1e8
STEP_MAX = 1.0
TAYLOR_TERMS = 40


def expm_apply(M: np.ndarray, x: np.ndarray) -> np.ndarray:
    """``exp(M) x`` for stacks ``M`` (S, d, d) and ``x`` (S, d) by Taylor series."""
    y = x.copy()
    term = x.copy()
    scale = np.linalg.norm(x, axis=1) + 1e-300
    for k in range(1, TAYLOR_TERMS):
        term = np.einsum("sij,sj->si", M, term) / k
        y += term
        if np.all(np.linalg.norm(term, axis=1) < 1e-18 * scale):
            break
    return y


def solve_starts(
    basis: np.ndarray,
    q: np.ndarray,
    x0: np.ndarray,
    max_iter: int = 200,
    tol: float = 1e-30,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Run the search from every row of ``x0``.

    Returns final points (S, d), squared residuals ``|f|^2`` (S,) and iteration
    counts (S,).
    """
    basis = np.ascontiguousarray(basis, dtype=float)
    q = np.asarray(q, dtype=float)
    x = np.array(x0, dtype=float, ndmin=2)
    S = x.shape[0]
    m = basis.shape[0]
    W = np.einsum("aji,j->ai", basis, q)  # X_a^T q
    lam = np.full(S, LAMBDA0)
    active = np.ones(S, dtype=bool)
    iters = np.zeros(S, dtype=np.int64)
    f = x @ W.T
    r = np.einsum("sa,sa->s", f, f)
    eye = np.eye(m)
    for _ in range(max_iter):
        active &= (r >= tol) & (lam <= LAMBDA_MAX)
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        xa = x[idx]
        V = np.einsum("bij,sj->sib", basis, xa)  # (s, d, m)
        J = np.einsum("ai,sib->sab", W, V)
        A = np.einsum("sab,sac->sbc", J, J)
        g = np.einsum("sab,sa->sb", J, f[idx])
        mu = lam[idx] * (np.einsum("sii->s", A) / m + 1e-300)
        delta = -np.linalg.solve(A + mu[:, None, None] * eye, g[..., None])[..., 0]
        nrm = np.linalg.norm(delta, axis=1)
        delta *= np.minimum(1.0, STEP_MAX / np.maximum(nrm, 1e-300))[:, None]
        M = np.einsum("sb,bij->sij", delta, basis)
        xn = expm_apply(M, xa)
        fn = xn @ W.T
        rn = np.einsum("sa,sa->s", fn, fn)
        ok = rn < r[idx]
        acc = idx[ok]
        x[acc], f[acc], r[acc] = xn[ok], fn[ok], rn[ok]
        lam[acc] = np.maximum(lam[acc] / 3.0, LAMBDA_MIN)
        lam[idx[~ok]] *= 4.0
        iters[idx] += 1
    return x, r, iters
