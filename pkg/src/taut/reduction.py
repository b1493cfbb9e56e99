"""Fixed-point subspaces of principal isotropy, normalizers and reduced actions."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.linalg import expm
from scipy.optimize import least_squares

from ._linalg import null_space
from .orbit import cohomogeneity, orbit_chart
from .repbuilder import LinearRepresentation, bracket_closure_residual

__all__ = [
    "ReductionData",
    "fixed_subspace",
    "normalizer_algebra",
    "reduced_representation",
    "reduce_at",
    "weight_ratio",
    "rotation_speeds",
    "in_span",
    "find_intertwiner",
    "standard_su2_basis",
    "null_space",
    "orbit_distance",
    "isotypic_dims",
    "slice_decomposition",
    "restriction_decomposition",
]

log = logging.getLogger(__name__)

INVARIANCE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class ReductionData:
    rep: LinearRepresentation
    base_point: np.ndarray
    h_coeffs: np.ndarray  # rows: isotropy algebra in algebra coordinates
    h_discrete: tuple
    fixed_basis: np.ndarray  # d x dim V^H, orthonormal
    normalizer_coeffs: np.ndarray  # rows: n(h)
    nbar_coeffs: np.ndarray  # rows: complement of h in n(h)
    reduced_rep: LinearRepresentation | None = None
    l_generators: tuple = ()
    cohomogeneity: int | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def h_basis(self) -> np.ndarray:
        return np.einsum("ra,aij->rij", self.h_coeffs, self.rep.basis)

    @property
    def normalizer_basis(self) -> np.ndarray:
        """Complement of h in n(h), as matrices."""
        return np.einsum("ra,aij->rij", self.nbar_coeffs, self.rep.basis)

    @property
    def dim_fixed(self) -> int:
        return self.fixed_basis.shape[1]

    @property
    def dim_nbar(self) -> int:
        return self.nbar_coeffs.shape[0]

    def to_coords(self, v) -> np.ndarray:
        """Coordinates in V^H of a vector of V lying in V^H."""
        v = np.asarray(v, dtype=float)
        c = self.fixed_basis.T @ v
        if np.linalg.norm(self.fixed_basis @ c - v) > 1e-9 * max(1.0, np.linalg.norm(v)):
            raise ValueError("vector is not in the fixed subspace")
        return c

    def report(self, case: str = "") -> dict:
        return {
            "case": case,
            "dim_VH": self.dim_fixed,
            "dim_Nbar": self.dim_nbar,
            "cohomogeneity": self.cohomogeneity,
            "isotropy_dim": int(self.h_coeffs.shape[0]),
            "l_check": self.diagnostics.get("l_check"),
        }


def _flat_span(mats: np.ndarray) -> np.ndarray:
    """Orthonormal basis (columns) of the span of flattened matrices."""
    if len(mats) == 0:
        return np.zeros((0, 0))
    flat = np.asarray(mats).reshape(len(mats), -1).T
    u, s, _ = np.linalg.svd(flat, full_matrices=False)
    return u[:, s > 1e-10 * max(1.0, s[0])]


def fixed_subspace(rep: LinearRepresentation, h_basis, h_discrete: Sequence = ()) -> np.ndarray:
    """Common null space of the isotropy algebra and fixed space of discrete elements."""
    h_basis = np.asarray(h_basis, dtype=float).reshape(-1, rep.d, rep.d)
    if len(h_basis) and bracket_closure_residual(h_basis) > 1e-9:
        raise ValueError("isotropy basis is not a subalgebra")
    rows = [m for m in h_basis] + [np.asarray(g, dtype=float) - np.eye(rep.d) for g in h_discrete]
    if not rows:
        return np.eye(rep.d)
    ns = null_space(np.concatenate(rows, axis=0), rcond=1e-9)
    return ns


def normalizer_algebra(rep: LinearRepresentation, h_coeffs: np.ndarray) -> np.ndarray:
    """Coefficient rows spanning ``{X : [X, h] in h}``."""
    h_coeffs = np.atleast_2d(np.asarray(h_coeffs, dtype=float)).reshape(-1, rep.group_dim)
    m = rep.group_dim
    if h_coeffs.shape[0] == 0:
        return np.eye(m)
    hmats = np.einsum("ra,aij->rij", h_coeffs, rep.basis)
    Q = _flat_span(hmats)
    blocks = []
    for Y in hmats:
        br = np.einsum("aij,jk->aik", rep.basis, Y) - np.einsum("ij,ajk->aik", Y, rep.basis)
        flat = br.reshape(m, -1).T
        blocks.append(flat - Q @ (Q.T @ flat))
    sys = np.concatenate(blocks, axis=0)
    return null_space(sys, rcond=1e-9).T


def _complement(rows: np.ndarray, sub: np.ndarray, rep: LinearRepresentation) -> np.ndarray:
    """Rows of ``rows``' span orthogonal (Frobenius, via the matrices) to ``sub``'s span."""
    if sub.shape[0] == 0:
        return rows
    G = np.einsum("aij,bij->ab", rep.basis, rep.basis)  # Gram matrix of the algebra basis
    # project rows onto the G-orthogonal complement of sub inside span(rows)
    S = sub @ G @ sub.T
    proj = rows - (rows @ G @ sub.T) @ np.linalg.solve(S, sub)
    u, s, vt = np.linalg.svd(proj, full_matrices=False)
    k = rows.shape[0] - sub.shape[0]
    return (vt[:k].T * 1.0).T if k > 0 else np.zeros((0, rows.shape[1]))


def reduced_representation(rep: LinearRepresentation, reduction: "ReductionData", label: str | None = None) -> LinearRepresentation:
    """Normalizer elements (mod h) compressed to V^H coordinates."""
    return _compress(rep, reduction.fixed_basis, reduction.nbar_coeffs, label)


def _compress(rep: LinearRepresentation, fixed_basis: np.ndarray, nbar_coeffs: np.ndarray, label: str | None = None) -> LinearRepresentation:
    if fixed_basis.shape[1] == 0:
        raise ValueError("fixed subspace is trivial")
    mats = np.einsum("ra,aij->rij", nbar_coeffs, rep.basis)
    moved = np.einsum("rij,jk->rik", mats, fixed_basis)
    inside = np.einsum("ji,rjk->rik", fixed_basis, moved)
    leak = moved - np.einsum("ij,rjk->rik", fixed_basis, inside)
    worst = float(np.abs(leak).max(initial=0.0))
    if worst > INVARIANCE_TOL:
        raise RuntimeError(f"normalizer does not preserve V^H (residual {worst:.2e})")
    return LinearRepresentation(label or f"{rep.group_label}-reduced", inside, [(0, fixed_basis.shape[1], "VH")])


def reduce_at(
    rep: LinearRepresentation,
    p,
    h_discrete: Sequence = (),
    l_generators: Sequence = (),
    trials: int = 6,
    seed: int = 0,
) -> ReductionData:
    """Reduction data at a point with principal isotropy."""
    p = np.asarray(p, dtype=float)
    chart = orbit_chart(rep, p)
    coh, _ = cohomogeneity(rep, trials, seed)
    if rep.d - chart.orbit_dim != coh:
        raise ValueError(f"base point is not principal: codim {rep.d - chart.orbit_dim} vs cohomogeneity {coh}")
    h = chart.isotropy_coeffs
    F = fixed_subspace(rep, chart.isotropy_basis, h_discrete)
    n = normalizer_algebra(rep, h)
    nbar = _complement(n, h, rep)
    red = _compress(rep, F, nbar) if F.shape[1] else None
    diag = {}
    if l_generators:
        FL = fixed_subspace(rep, np.zeros((0, rep.d, rep.d)), l_generators)
        same = FL.shape[1] == F.shape[1] and np.linalg.norm(FL @ FL.T - F @ F.T) < 1e-9
        central = all(_is_central(rep, np.asarray(g) @ np.asarray(g)) for g in l_generators)
        diag["l_check"] = {
            "dim_VL": int(FL.shape[1]),
            "VL_equals_VH": bool(same),
            "squares_central": bool(central),
            "generators_fix_base_point": bool(all(np.linalg.norm(np.asarray(g) @ p - p) < 1e-9 for g in l_generators)),
        }
    return ReductionData(
        rep=rep,
        base_point=p,
        h_coeffs=h,
        h_discrete=tuple(np.asarray(g) for g in h_discrete),
        fixed_basis=F,
        normalizer_coeffs=n,
        nbar_coeffs=nbar,
        reduced_rep=red,
        l_generators=tuple(np.asarray(g) for g in l_generators),
        cohomogeneity=coh,
        diagnostics=diag,
    )


def _is_central(rep: LinearRepresentation, g: np.ndarray, tol: float = 1e-10) -> bool:
    comm = np.einsum("ij,ajk->aik", g, rep.basis) - np.einsum("aij,jk->aik", rep.basis, g)
    return bool(np.abs(comm).max(initial=0.0) < tol)


def in_span(rep: LinearRepresentation, coeffs: np.ndarray, span_rows: np.ndarray, tol: float = 1e-9) -> bool:
    """Whether algebra element(s) ``coeffs`` lie in the span of ``span_rows``."""
    coeffs = np.atleast_2d(coeffs)
    if span_rows.shape[0] == 0:
        return bool(np.abs(coeffs).max() < tol)
    sol, *_ = np.linalg.lstsq(span_rows.T, coeffs.T, rcond=None)
    return bool(np.abs(span_rows.T @ sol - coeffs.T).max() < tol)


def rotation_speeds(X: np.ndarray, planes: Sequence[tuple]) -> list[float]:
    """Angular speed of the one-parameter group ``exp(tX)`` on each oriented plane ``(u, v)``.

    Each plane must be invariant; ``u`` and ``v`` are orthonormalised first.
    """
    speeds = []
    for u, v in planes:
        u = np.asarray(u, float)
        u = u / np.linalg.norm(u)
        v = np.asarray(v, float)
        v = v - (v @ u) * u
        v = v / np.linalg.norm(v)
        P = np.stack([u, v], axis=1)
        img = X @ P
        leak = img - P @ (P.T @ img)
        if np.abs(leak).max() > 1e-9:
            raise ValueError("plane is not invariant")
        speeds.append(float(v @ X @ u))
    return speeds


def weight_ratio(generators, planes: Sequence[tuple], max_den: int = 12, tol: float = 1e-9) -> list:
    """Rotation-speed ratios of one-parameter groups on invariant planes.

    ``generators`` is a skew matrix, a stack of them, or a representation (its
    basis is used).  All speeds are divided by the smallest nonzero absolute
    speed and then rounded to rationals with denominator at most ``max_den``.
    One generator gives a list over planes; several give one tuple per plane.
    Entries that are not rational within ``tol`` come back as ``"unidentified"``.
    """
    single = False
    if isinstance(generators, LinearRepresentation):
        mats = generators.basis
    else:
        mats = np.asarray(generators, dtype=float)
        if mats.ndim == 2:
            mats, single = mats[None], True
    speeds = np.array([rotation_speeds(X, planes) for X in mats])
    nonzero = np.abs(speeds)[np.abs(speeds) > tol]
    if nonzero.size == 0:
        raise ValueError("one-parameter groups act trivially on every plane")
    unit = nonzero.min()

    def rational(x):
        f = Fraction(float(x)).limit_denominator(max_den)
        return f if abs(float(f) - x) < tol * max(1.0, abs(x)) else "unidentified"

    table = [[rational(v / unit) for v in row] for row in speeds]
    if single:
        return table[0]
    return [tuple(col) for col in zip(*table)]


def find_intertwiner(mats_a: np.ndarray, mats_b: np.ndarray, tol: float = 1e-9, seed: int = 0) -> np.ndarray | None:
    """Orthogonal ``T`` with ``T A_i T^T = B_i`` for all ``i``, or ``None``.

    The intertwiners form the null space of a linear system; a random element of
    it is invertible when the representations are equivalent, and its polar part
    is then an orthogonal intertwiner.
    """
    A = np.asarray(mats_a, dtype=float)
    B = np.asarray(mats_b, dtype=float)
    d = A.shape[1]
    eye = np.eye(d)
    # row-major vec: vec(T A) = (I kron A^T) vec(T), vec(B T) = (B kron I) vec(T)
    rows = np.concatenate([np.kron(eye, a.T) - np.kron(b, eye) for a, b in zip(A, B)])
    ns = null_space(rows, rcond=1e-10)
    if ns.shape[1] == 0:
        return None
    rng = np.random.default_rng(seed)
    T = (ns @ rng.normal(size=ns.shape[1])).reshape(d, d)
    u, s, vt = np.linalg.svd(T)
    if s[-1] < 1e-8 * s[0]:
        return None
    Q = u @ vt
    if max(np.abs(Q @ a @ Q.T - b).max() for a, b in zip(A, B)) > tol:
        return None
    return Q


def standard_su2_basis(mats: np.ndarray) -> np.ndarray:
    """Rescaled basis ``X1, X2, X3`` of a 3-dimensional compact simple span with
    ``[X1, X2] = 2 X3`` (and cyclically), the relations of ``i, j, k`` in the quaternions."""
    mats = np.asarray(mats, dtype=float)
    flat = mats.reshape(3, -1)
    q, _ = np.linalg.qr(flat.T)
    Y = q.T.reshape(mats.shape)
    br = Y[0] @ Y[1] - Y[1] @ Y[0]
    c = float(np.sum(br * Y[2]))
    if abs(c) < 1e-12 or np.abs(br - c * Y[2]).max() > 1e-8 * max(1.0, abs(c)):
        raise ValueError("span is not a copy of su(2)")
    X = (2.0 / c) * Y
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        if np.abs(X[i] @ X[j] - X[j] @ X[i] - 2 * X[k]).max() > 1e-8 * max(1.0, np.abs(X).max()):
            raise ValueError("span is not a copy of su(2)")
    return X


def orbit_distance(rep: LinearRepresentation, x, y, starts: int = 24, seed: int = 0) -> float:
    """Numerical ``min |g x - y|`` over the identity component, ``g = exp(sum c_a X_a)``.

    Multistart least squares in exponential coordinates; a value well above
    the solver tolerance means ``y`` is off the identity-component orbit of ``x``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if rep.group_dim == 0:
        return float(np.linalg.norm(x - y))
    rng = np.random.default_rng(seed)

    def resid(c):
        return expm(rep.element(c)) @ x - y

    best = np.inf
    for n in range(starts):
        c0 = np.zeros(rep.group_dim) if n == 0 else rng.normal(scale=2.0, size=rep.group_dim)
        sol = least_squares(resid, c0, xtol=1e-14, ftol=1e-14, gtol=1e-14, max_nfev=400)
        best = min(best, float(np.linalg.norm(sol.fun)))
        if best < 1e-10:
            break
    return best


def isotypic_dims(mats: np.ndarray, rtol: float = 1e-7) -> list[tuple[float, int]]:
    """Casimir eigenvalue clusters ``(value, multiplicity)`` of skew matrices ``mats``.

    ``mats`` must be orthonormal for the Frobenius product, so the Casimir is
    basis independent.  Value 0 is the trivial part; distinct irreducible types
    with equal Casimir values share a cluster.
    """
    mats = np.asarray(mats, dtype=float)
    d = mats.shape[1]
    if mats.shape[0] == 0:
        return [(0.0, d)]
    C = -np.einsum("aij,ajk->ik", mats, mats)
    w = np.sort(np.linalg.eigvalsh((C + C.T) / 2))
    scale = max(1.0, float(np.abs(w).max()))
    out: list[tuple[float, int]] = []
    start = 0
    for n in range(1, d + 1):
        if n == d or w[n] - w[n - 1] > rtol * scale:
            out.append((float(np.round(np.mean(w[start:n]), 9)) + 0.0, n - start))
            start = n
    return out


def _orthonormal_mats(mats: np.ndarray) -> np.ndarray:
    if mats.shape[0] == 0:
        return mats
    flat = mats.reshape(mats.shape[0], -1)
    _, s, vt = np.linalg.svd(flat, full_matrices=False)
    keep = s > 1e-10 * s.max()
    return vt[keep].reshape(-1, *mats.shape[1:])


def slice_decomposition(rep: LinearRepresentation, p) -> list[tuple[float, int]]:
    """Casimir clusters of the isotropy algebra on the normal space at ``p``."""
    chart = orbit_chart(rep, p)
    N = chart.normal_basis
    iso = _orthonormal_mats(chart.isotropy_basis)
    return isotypic_dims(np.einsum("ia,rij,jb->rab", N, iso, N))


def restriction_decomposition(rep: LinearRepresentation, p, summand: int) -> list[tuple[float, int]]:
    """Casimir clusters of the isotropy algebra at ``p`` on one summand."""
    chart = orbit_chart(rep, p)
    sl = rep.summand_slice(summand)
    iso = _orthonormal_mats(chart.isotropy_basis)
    return isotypic_dims(iso[:, sl, sl])
