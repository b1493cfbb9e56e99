"""Orbit geometry at a point: tangent/normal spaces, isotropy, cohomogeneity."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .repbuilder import LinearRepresentation, bracket_closure_residual

__all__ = [
    "RankAmbiguityError",
    "OrbitChart",
    "numerical_rank",
    "orbit_chart",
    "cohomogeneity",
    "random_unit_point",
    "random_group_element",
    "sample_orbit",
    "substantial_span",
    "discrete_isotropy_probe",
]

RANK_RTOL = 1e-8
RANK_GAP = 1e3


class RankAmbiguityError(ValueError):
    """Singular values straddle the rank cutoff without a clear gap."""


def numerical_rank(s: np.ndarray, rtol: float = RANK_RTOL, gap: float = RANK_GAP, scale: float | None = None) -> int:
    """Rank from descending singular values with a mandatory gap check."""
    s = np.asarray(s, dtype=float)
    if s.size == 0:
        return 0
    top = scale if scale is not None else s[0]
    if top <= 0:
        return 0
    cut = rtol * top
    r = int(np.sum(s > cut))
    lo = s[r - 1] if r > 0 else np.inf
    hi = s[r] if r < s.size else 0.0
    if hi > 0 and lo <= gap * hi:
        raise RankAmbiguityError(f"no clear rank gap: sigma_r={lo:.3e}, sigma_r+1={hi:.3e} (cut {cut:.1e})")
    return r


@dataclass(frozen=True, eq=False)
class OrbitChart:
    rep: LinearRepresentation
    base_point: np.ndarray
    tangent_basis: np.ndarray  # d x orbit_dim, orthonormal columns
    normal_basis: np.ndarray  # d x (d - orbit_dim)
    isotropy_coeffs: np.ndarray  # isotropy_dim x m, orthonormal rows in algebra coordinates
    singular_values: np.ndarray

    @property
    def orbit_dim(self) -> int:
        return self.tangent_basis.shape[1]

    @property
    def isotropy_dim(self) -> int:
        return self.isotropy_coeffs.shape[0]

    @property
    def isotropy_basis(self) -> np.ndarray:
        """Isotropy subalgebra as matrices (isotropy_dim x d x d)."""
        return np.einsum("ra,aij->rij", self.isotropy_coeffs, self.rep.basis)

    @property
    def codimension(self) -> int:
        return self.normal_basis.shape[1]


def orbit_chart(rep: LinearRepresentation, p, rtol: float = RANK_RTOL, gap: float = RANK_GAP) -> OrbitChart:
    """SVD of ``X -> X p``: rank is the orbit dimension, the null space the isotropy algebra."""
    p = np.asarray(p, dtype=float)
    A = rep.action_matrix(p)
    u, s, vt = np.linalg.svd(A, full_matrices=True)
    scale = np.linalg.norm(p) * max(1.0, float(np.abs(rep.basis).max(initial=0.0)))
    # a point orbit has all singular values at rounding level
    if s.size == 0 or s[0] <= 1e-12 * scale:
        r = 0
    else:
        r = numerical_rank(s, rtol, gap)
    return OrbitChart(
        rep=rep,
        base_point=p,
        tangent_basis=u[:, :r],
        normal_basis=u[:, r:],
        isotropy_coeffs=vt[r:],
        singular_values=s,
    )


def random_unit_point(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=d)
    return v / np.linalg.norm(v)


def cohomogeneity(rep: LinearRepresentation, trials: int = 8, seed: int = 0) -> tuple[int, np.ndarray]:
    """``d - max orbit dim`` over random unit points; returns the value and a witness."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    best, witness = None, None
    for _ in range(trials):
        p = random_unit_point(rep.d, rng)
        c = rep.d - orbit_chart(rep, p).orbit_dim
        if best is None or c < best:
            best, witness = c, p
    return best, witness


def random_group_element(rep: LinearRepresentation, rng: np.random.Generator, factors: int = 3, scale: float = 2.0) -> np.ndarray:
    """Product of exponentials of random algebra elements."""
    g = np.eye(rep.d)
    for _ in range(factors):
        g = expm(rep.random_element(rng, scale)) @ g
    return g


def sample_orbit(rep: LinearRepresentation, p, samples: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    p = np.asarray(p, dtype=float)
    return np.array([random_group_element(rep, rng) @ p for _ in range(samples)])


def substantial_span(rep: LinearRepresentation, p, samples: int | None = None, seed: int = 0, rtol: float = 1e-8) -> int:
    """Dimension of the affine span of the orbit through ``p``."""
    samples = samples or 2 * rep.d + 10
    if samples < rep.d + 1:
        raise ValueError(f"need at least d+1 = {rep.d + 1} samples")
    pts = sample_orbit(rep, p, samples, seed)
    centred = pts - pts.mean(axis=0)
    s = np.linalg.svd(centred, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def discrete_isotropy_probe(rep: LinearRepresentation, p, candidates, atol: float = 1e-9) -> list[int]:
    """Indices of the candidate orthogonal matrices that fix ``p``."""
    p = np.asarray(p, dtype=float)
    return [n for n, g in enumerate(candidates) if np.linalg.norm(np.asarray(g) @ p - p) < atol]


def isotropy_is_subalgebra(chart: OrbitChart) -> float:
    return bracket_closure_residual(chart.isotropy_basis)
