"""Critical sets of height functions on orbits.

A point ``x`` of the orbit ``G p`` is critical for ``h_q(x) = <q, x>`` exactly
when ``<q, X x> = 0`` for every ``X`` in the Lie algebra.  Critical points are
found by a multi-start damped Gauss-Newton search over the group (see
:mod:`taut.kernel`), deduplicated, classified by their Hessian, and grouped into
connected components by walking along the critical manifolds.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree

from . import kernel
from ._search_py import expm_apply
from .orbit import numerical_rank, random_group_element
from .repbuilder import LinearRepresentation

__all__ = [
    "HeightSpec",
    "CriticalComponent",
    "CriticalInventory",
    "HessianData",
    "criticality_residual",
    "hessian_data",
    "morse_index",
    "find_critical_set",
    "generic_morse_count",
    "betti_sum_of_tag",
    "default_starts",
]

log = logging.getLogger(__name__)

ACCEPT_RESIDUAL = 1e-14
DEDUP_DIST = 1e-5
EIG_RTOL = 1e-8
AMBIGUITY_BAND = (1e-11, 1e-6)
VALUE_DECIMALS = 7
MAX_CLUSTER_POINTS = 240


@dataclass(frozen=True)
class HeightSpec:
    """Height function ``<q, x>`` or squared distance ``|x - q|^2`` on an orbit."""

    q: np.ndarray
    kind: str = "height"

    def __post_init__(self):
        if self.kind not in ("height", "squared-distance"):
            raise ValueError(f"unknown kind {self.kind!r}")
        object.__setattr__(self, "q", np.asarray(self.q, dtype=float))

    def value(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if self.kind == "height":
            return float(self.q @ x)
        return float(np.sum((x - self.q) ** 2))


def betti_sum_of_tag(tag: str | None) -> int | None:
    """Z2 Betti sum of a tagged component, ``None`` when unknown."""
    if tag is None:
        return None
    if tag == "point":
        return 1
    if tag == "circle" or tag.startswith("sphere-"):
        return 2
    if tag == "cp2":
        return 3
    return None


@dataclass
class CriticalComponent:
    points: np.ndarray
    dim_estimate: int
    hessian_nullity: int
    morse_index: int
    value: float
    betti_tag: str | None = None
    verified: bool = True
    flags: list = field(default_factory=list)

    @property
    def representative(self) -> np.ndarray:
        return self.points[0]

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def betti_sum(self) -> int | None:
        return betti_sum_of_tag(self.betti_tag)

    def to_dict(self) -> dict:
        return {
            "dim": int(self.dim_estimate),
            "size": int(self.size),
            "index": int(self.morse_index),
            "nullity": int(self.hessian_nullity),
            "value": float(self.value),
            "betti_tag": self.betti_tag,
            "verified": bool(self.verified),
            "flags": list(self.flags),
            "representative": [float(v) for v in self.representative],
        }


@dataclass
class CriticalInventory:
    components: list
    search_stats: dict

    @property
    def total_betti_sum(self) -> int | None:
        sums = [c.betti_sum for c in self.components]
        return None if any(s is None for s in sums) else int(sum(sums))

    def dims(self) -> list[int]:
        return sorted(c.dim_estimate for c in self.components)

    def signature(self) -> tuple:
        """Sorted ``(dim, index)`` pairs; used to compare runs."""
        return tuple(sorted((c.dim_estimate, c.morse_index) for c in self.components))

    def count_by_dim(self) -> dict:
        out: dict = {}
        for c in self.components:
            out[c.dim_estimate] = out.get(c.dim_estimate, 0) + 1
        return dict(sorted(out.items()))

    def to_dict(self) -> dict:
        return {
            "components": [c.to_dict() for c in self.components],
            "total_betti_sum": self.total_betti_sum,
            "stats": dict(self.search_stats),
        }


# ---------------------------------------------------------------------------
# local quantities


def _w_matrix(rep: LinearRepresentation, q) -> np.ndarray:
    return np.einsum("aji,j->ai", rep.basis, np.asarray(q, dtype=float))


def criticality_residual(rep: LinearRepresentation, x, q) -> tuple[float, np.ndarray]:
    """``r = sum_a <q, X_a x>^2`` and its gradient in exponential-chart coordinates."""
    x = np.asarray(x, dtype=float)
    W = _w_matrix(rep, q)
    f = W @ x
    J = W @ rep.action_matrix(x)  # J[a, b] = <q, X_a X_b x>
    return float(f @ f), 2.0 * J.T @ f


@dataclass(frozen=True)
class HessianData:
    """Hessian of ``h_q`` on the orbit in algebra coordinates transverse to the isotropy."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns, in the reduced coordinates
    tangent_dirs: np.ndarray  # m x r algebra directions spanning the tangent space
    action: np.ndarray  # d x m matrix X -> X x
    scale: float

    @property
    def index(self) -> int:
        return int(np.sum(self.eigenvalues < -EIG_RTOL * self.scale))

    @property
    def nullity(self) -> int:
        return int(np.sum(np.abs(self.eigenvalues) <= EIG_RTOL * self.scale))

    @property
    def ambiguous(self) -> bool:
        rel = np.abs(self.eigenvalues) / self.scale
        return bool(np.any((rel > AMBIGUITY_BAND[0]) & (rel < AMBIGUITY_BAND[1])))

    def null_algebra_dirs(self) -> np.ndarray:
        """Algebra directions (m x nullity) moving along the critical manifold."""
        mask = np.abs(self.eigenvalues) <= EIG_RTOL * self.scale
        return self.tangent_dirs @ self.eigenvectors[:, mask]


def hessian_data(rep: LinearRepresentation, x, q) -> HessianData:
    x = np.asarray(x, dtype=float)
    A = rep.action_matrix(x)
    _, s, vt = np.linalg.svd(A, full_matrices=True)
    r = 0 if s.size == 0 or s[0] <= 1e-12 else numerical_rank(s)
    T = vt[:r].T
    W = _w_matrix(rep, q)
    J = W @ A
    H = 0.5 * (J + J.T)
    Hr = T.T @ H @ T
    if r == 0:
        return HessianData(np.zeros(0), np.zeros((0, 0)), T, A, 1.0)
    ev, evec = np.linalg.eigh(Hr)
    scale = max(float(np.abs(ev).max()), 1e-300)
    return HessianData(ev, evec, T, A, scale)


def morse_index(rep: LinearRepresentation, x, q, kind: str = "height") -> tuple[int, int]:
    """Index and nullity of the critical point ``x`` of ``h_q`` (or of ``|x - q|^2``)."""
    res, _ = criticality_residual(rep, x, q)
    if res > 1e-12:
        raise ValueError(f"point is not critical (residual {res:.2e})")
    hd = hessian_data(rep, x, q)
    if hd.ambiguous:
        log.warning("Hessian eigenvalue inside the ambiguity band at %s", np.round(x, 6))
    index = hd.index
    if kind == "squared-distance":
        index = len(hd.eigenvalues) - hd.nullity - index
    return index, hd.nullity


# ---------------------------------------------------------------------------
# search


def default_starts(rep: LinearRepresentation) -> int:
    return 2000 if rep.group_dim <= 15 else 8000


def _project(rep: LinearRepresentation, W: np.ndarray, x: np.ndarray, iters: int = 8) -> np.ndarray:
    """Minimum-norm Gauss-Newton steps back onto the critical set."""
    for _ in range(iters):
        f = W @ x
        if f @ f < 1e-30:
            break
        J = W @ rep.action_matrix(x)
        delta = -np.linalg.lstsq(J, f, rcond=1e-10)[0]
        x = expm_apply(rep.element(delta)[None], x[None])[0]
    return x


def _walk(rep, W, q, a, b, value, max_steps=400, step=0.15, target=1e-6) -> bool:
    """Follow the critical manifold from ``a`` towards ``b``; True when ``b`` is reached."""
    x = a.copy()
    best = np.linalg.norm(b - x)
    stall = 0
    for _ in range(max_steps):
        gap = b - x
        dist = np.linalg.norm(gap)
        if dist < target:
            return True
        hd = hessian_data(rep, x, q)
        N = hd.null_algebra_dirs()
        if N.shape[1] == 0:
            return False
        T = hd.action @ N
        c = np.linalg.lstsq(T, gap, rcond=1e-10)[0]
        move = T @ c
        mlen = np.linalg.norm(move)
        if mlen < 1e-3 * dist:
            return False
        if mlen > step:
            c *= step / mlen
        x = expm_apply(rep.element(N @ c)[None], x[None])[0]
        x = _project(rep, W, x)
        f = W @ x
        if f @ f > 1e-20 or abs(q @ x - value) > 1e-7:
            return False
        if dist < best * (1 - 1e-3):
            best, stall = dist, 0
        else:
            stall += 1
            if stall > 25:
                return False
    return np.linalg.norm(b - x) < target


def _local_dim(rep, W, q, x, h: float = 1e-3) -> int | None:
    """Dimension of the critical set near ``x`` from resampling along null directions."""
    hd = hessian_data(rep, x, q)
    N = hd.null_algebra_dirs()
    k = N.shape[1]
    if k == 0:
        return 0
    T = hd.action @ N
    disp = []
    for j in range(k):
        for sgn in (1.0, -1.0):
            c = np.zeros(k)
            c[j] = sgn * h / max(np.linalg.norm(T[:, j]), 1e-300)
            y = _project(rep, W, expm_apply(rep.element(N @ c)[None], x[None])[0])
            f = W @ y
            if f @ f > 1e-20 or abs(q @ (y - x)) > 1e-9:
                return None
            disp.append(y - x)
    s = np.linalg.svd(np.array(disp), compute_uv=False)
    return int(np.sum(s > 0.1 * h))


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> bool:
        ri, rj = self.find(i), self.find(j)
        if ri == rj:
            return False
        self.parent[max(ri, rj)] = min(ri, rj)
        return True

    def groups(self) -> list[list[int]]:
        out: dict = {}
        for i in range(len(self.parent)):
            out.setdefault(self.find(i), []).append(i)
        return [out[k] for k in sorted(out)]


def _canonical_order(pts: np.ndarray) -> np.ndarray:
    keys = np.round(pts, 8)
    return np.lexsort(keys.T[::-1])


def _dedup(pts: np.ndarray, dist: float = DEDUP_DIST) -> np.ndarray:
    if len(pts) == 0:
        return pts
    pts = pts[_canonical_order(pts)]
    tree = cKDTree(pts)
    keep = np.ones(len(pts), dtype=bool)
    for i in range(len(pts)):
        if not keep[i]:
            continue
        for j in tree.query_ball_point(pts[i], dist):
            if j > i:
                keep[j] = False
    return pts[keep]


def _cluster(rep, W, q, pts, value, neighbours=4) -> tuple[list[list[int]], list[str]]:
    """Connected pieces of a set of critical points sharing value, index and nullity."""
    n = len(pts)
    uf = _UnionFind(n)
    notes: list[str] = []
    if n == 1:
        return [[0]], notes
    tree = cKDTree(pts)
    k = min(neighbours + 1, n)
    _, nbrs = tree.query(pts, k=k)
    for i in range(n):
        for j in np.atleast_1d(nbrs[i])[1:]:
            j = int(j)
            if uf.find(i) != uf.find(j) and _walk(rep, W, q, pts[i], pts[j], value):
                uf.union(i, j)
    groups = uf.groups()
    # long walks between the remaining pieces, several attempts per pair
    merged = True
    while merged and len(groups) > 1:
        merged = False
        for gi in range(len(groups)):
            for gj in range(gi + 1, len(groups)):
                A, B = groups[gi], groups[gj]
                d = np.linalg.norm(pts[A][:, None, :] - pts[B][None, :, :], axis=2)
                order = np.argsort(d, axis=None)[:6]
                for flat in order:
                    ia, ib = np.unravel_index(flat, d.shape)
                    if _walk(rep, W, q, pts[A[ia]], pts[B[ib]], value, max_steps=1500) or _walk(
                        rep, W, q, pts[B[ib]], pts[A[ia]], value, max_steps=1500
                    ):
                        uf.union(A[ia], B[ib])
                        merged = True
                        notes.append("pieces joined by a long walk")
                        break
                if merged:
                    break
            if merged:
                groups = uf.groups()
                break
    return uf.groups(), notes


def _random_starts(rep: LinearRepresentation, p: np.ndarray, starts: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return np.array([random_group_element(rep, rng) @ p for _ in range(starts)])


def find_critical_set(
    rep: LinearRepresentation,
    p,
    spec: HeightSpec,
    starts: int | None = None,
    seed: int = 0,
    tag_rules: dict | None = None,
    max_iter: int = 200,
    tol: float = ACCEPT_RESIDUAL,
) -> CriticalInventory:
    """Multi-start enumeration of the critical set of ``spec`` on the orbit through ``p``.

    ``tag_rules`` maps a component dimension to a Betti tag; dimension 0 is
    always ``"point"`` and dimension 1 defaults to ``"circle"``.
    """
    starts = default_starts(rep) if starts is None else int(starts)
    if starts < 100:
        raise ValueError("starts must be at least 100")
    p = np.asarray(p, dtype=float)
    q = spec.q
    rules = {0: "point", 1: "circle"}
    rules.update(tag_rules or {})
    W = _w_matrix(rep, q)
    x0 = _random_starts(rep, p, starts, seed)
    x, r, iters = kernel.solve_starts(rep.basis, q, x0, max_iter=max_iter)
    ok = r < tol
    conv = x[ok]
    uniq = _dedup(conv)
    stats = {
        "starts": starts,
        "converged": int(ok.sum()),
        "deduped": int(len(uniq)),
        "backend": kernel.BACKEND,
        "mean_iterations": float(iters.mean()) if len(iters) else 0.0,
        "seed": int(seed),
    }
    if ok.sum() < 0.5 * starts:
        stats["warning"] = "fewer than half of the starts converged"
    # classify
    groups: dict = {}
    ambiguous_pts = 0
    for y in uniq:
        y = _project(rep, W, y)
        hd = hessian_data(rep, y, q)
        if hd.ambiguous:
            ambiguous_pts += 1
        key = (round(float(q @ y), VALUE_DECIMALS), hd.index, hd.nullity)
        groups.setdefault(key, []).append(y)
    stats["hessian_ambiguous_points"] = ambiguous_pts
    comps: list[CriticalComponent] = []
    for (value, index, nullity), pts in sorted(groups.items()):
        pts = np.array(pts)
        if spec.kind == "squared-distance":
            orbit_dim = hessian_data(rep, pts[0], q).eigenvalues.size
            index = orbit_dim - nullity - index
        if nullity == 0:
            for y in pts:
                comps.append(CriticalComponent(y[None], 0, 0, index, spec.value(y), "point"))
            continue
        if len(pts) > MAX_CLUSTER_POINTS:
            stride = int(np.ceil(len(pts) / MAX_CLUSTER_POINTS))
            pts = pts[::stride]
        pieces, notes = _cluster(rep, W, q, pts, value)
        for piece in pieces:
            members = pts[piece]
            ld = _local_dim(rep, W, q, members[0])
            flags = list(notes)
            verified = ld == nullity
            if not verified:
                flags.append(f"local resampling dimension {ld} differs from nullity {nullity}")
            if len(members) < 3:
                flags.append("component sampled by fewer than 3 points")
            tag = rules.get(nullity, "unidentified")
            if flags and any("fewer than 3" in f or "differs" in f for f in flags):
                tag = "unidentified"
            comps.append(
                CriticalComponent(members, nullity, nullity, index, spec.value(members[0]), tag, verified, flags)
            )
    return CriticalInventory(comps, stats)


def generic_morse_count(
    rep: LinearRepresentation,
    p,
    trials: int,
    seed: int = 0,
    starts: int | None = None,
    perturbations: int = 5,
    tol: float = ACCEPT_RESIDUAL,
) -> list[tuple[np.ndarray, int]]:
    """Critical-point counts of height functions in random nondegenerate directions."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    p = np.asarray(p, dtype=float)
    rng = np.random.default_rng(seed)
    out = []
    for t in range(trials):
        q = rng.normal(size=rep.d)
        for attempt in range(perturbations + 1):
            inv = find_critical_set(rep, p, HeightSpec(q), starts, seed=seed + 1000 * t + attempt, tol=tol)
            if all(c.hessian_nullity == 0 for c in inv.components):
                out.append((q, len(inv.components)))
                break
            q = q + 1e-2 * rng.normal(size=rep.d)
        else:
            log.warning("direction %d stayed degenerate after %d perturbations; skipped", t, perturbations)
    return out
