"""Lie algebra bases realised as skew-symmetric real matrices.

Every representation is stored at the Lie algebra level: a list of skew
``d x d`` matrices ``X_1, ..., X_m`` (one per basis element of the abstract
algebra) together with a table of summands ``V = V_1 + ... + V_k``.  Sums of
representations of the same group are block diagonal in the same algebra basis.
"""

from __future__ import annotations

import functools
import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.linalg import expm

from . import algebra as alg
from ._linalg import null_space

__all__ = [
    "LinearRepresentation",
    "TrialityTriple",
    "classical_basis",
    "spin_coeffs",
    "torus_rep",
    "quaternion_product_rep",
    "triality_lift",
    "triality_from_slot",
    "spin8_triples",
    "spin_subalgebra",
    "g2_basis",
    "spin9_rep",
    "spin10_halfspin",
    "spin9_vector_rep",
    "spin10_vector_rep",
    "phi",
    "direct_sum",
    "exp_map",
    "adjoint_rep",
    "conjugation_rep",
    "bracket_closure_residual",
    "realify",
    "dump_json",
    "load_json",
    "spin16_halfspin",
    "spin16_vector_rep",
    "spin16_blade",
    "spin16_vector_blade",
    "f4_rep",
    "albert_traceless_frame",
]

SKEW_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class LinearRepresentation:
    """Skew matrices ``basis[a]`` acting on ``R^d`` with summand bookkeeping."""

    group_label: str
    basis: np.ndarray
    summands: tuple = ()
    structures: dict = field(default_factory=dict)

    def __post_init__(self):
        b = np.array(self.basis, dtype=float)
        if b.ndim != 3 or b.shape[1] != b.shape[2]:
            raise ValueError(f"basis must have shape (m, d, d), got {b.shape}")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)
        summands = tuple((int(o), int(n), str(lbl)) for o, n, lbl in (self.summands or [(0, b.shape[1], "V")]))
        if sum(n for _, n, _ in summands) != b.shape[1]:
            raise ValueError("summand table does not cover the representation space")
        object.__setattr__(self, "summands", summands)
        structs = {}
        for k, v in dict(self.structures).items():
            v = np.array(v, dtype=float)
            v.setflags(write=False)
            structs[k] = v
        object.__setattr__(self, "structures", structs)

    @property
    def d(self) -> int:
        return self.basis.shape[1]

    @property
    def group_dim(self) -> int:
        return self.basis.shape[0]

    def element(self, coeffs) -> np.ndarray:
        """Algebra element ``sum_a c_a X_a`` as a matrix."""
        return np.tensordot(np.asarray(coeffs, dtype=float), self.basis, axes=1)

    def action_matrix(self, p) -> np.ndarray:
        """``d x m`` matrix whose columns are ``X_a p``."""
        return np.einsum("aij,j->ia", self.basis, np.asarray(p, dtype=float))

    def summand_slice(self, index: int) -> slice:
        o, n, _ = self.summands[index]
        return slice(o, o + n)

    def skew_residual(self) -> float:
        return float(np.abs(self.basis + self.basis.transpose(0, 2, 1)).max(initial=0.0))

    def closure_residual(self) -> float:
        return bracket_closure_residual(self.basis)

    def random_element(self, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
        return self.element(rng.normal(scale=scale, size=self.group_dim))

    def compress(self, frame: np.ndarray, label: str | None = None, summands=None) -> "LinearRepresentation":
        """Restrict to the invariant subspace spanned by the orthonormal columns of ``frame``."""
        frame = np.asarray(frame, dtype=float)
        moved = np.einsum("aij,jk->aik", self.basis, frame)
        leak = moved - frame @ np.einsum("ji,ajk->aik", frame, moved)
        if frame.shape[1] and np.abs(leak).max() > 1e-9:
            raise ValueError(f"subspace is not invariant (leak {np.abs(leak).max():.2e})")
        return LinearRepresentation(
            label or self.group_label,
            np.einsum("ji,ajk->aik", frame, moved),
            summands or [(0, frame.shape[1], "V")],
        )

    def restrict_algebra(self, coeffs: np.ndarray, label: str | None = None) -> "LinearRepresentation":
        """Representation of the subalgebra spanned by the rows of ``coeffs``."""
        coeffs = np.atleast_2d(coeffs)
        return LinearRepresentation(
            label or self.group_label,
            np.einsum("ra,aij->rij", coeffs, self.basis),
            self.summands,
            self.structures,
        )

    def reslot(self, parts: Sequence[tuple], label: str | None = None) -> "LinearRepresentation":
        """Build a sum from pieces of this representation.

        ``parts`` is a list of ``(summand_index, frame_or_None, label)``; each piece is
        the summand compressed to the orthonormal ``frame`` (8 x k, in the summand's
        own coordinates).  Repeating a summand index gives several copies.
        """
        blocks, table, offset = [], [], 0
        for idx, frame, lbl in parts:
            sl = self.summand_slice(idx)
            block = self.basis[:, sl, sl]
            if frame is not None:
                frame = np.asarray(frame, dtype=float)
                sub = LinearRepresentation(self.group_label, block).compress(frame)
                block = sub.basis
            blocks.append(block)
            table.append((offset, block.shape[1], lbl))
            offset += block.shape[1]
        return LinearRepresentation(label or self.group_label, _block_diag(blocks), table)


def _block_diag(blocks: Sequence[np.ndarray]) -> np.ndarray:
    m = blocks[0].shape[0]
    d = sum(b.shape[1] for b in blocks)
    out = np.zeros((m, d, d))
    o = 0
    for b in blocks:
        if b.shape[0] != m:
            raise ValueError("blocks use different algebra bases")
        n = b.shape[1]
        out[:, o : o + n, o : o + n] = b
        o += n
    return out


def bracket_closure_residual(basis: np.ndarray) -> float:
    """Largest least-squares residual of ``[X_a, X_b]`` against the span of the basis."""
    m = basis.shape[0]
    if m == 0:
        return 0.0
    flat = basis.reshape(m, -1).T
    q, r = np.linalg.qr(flat)
    keep = np.abs(np.diag(r)) > 1e-12 * max(1.0, np.abs(np.diag(r)).max())
    q = q[:, keep]
    worst = 0.0
    for a in range(m):
        br = np.einsum("ij,bjk->bik", basis[a], basis) - np.einsum("bij,jk->bik", basis, basis[a])
        br = br.reshape(m, -1).T
        res = br - q @ (q.T @ br)
        worst = max(worst, float(np.abs(res).max()))
    return worst


def direct_sum(reps: Sequence[LinearRepresentation], label: str | None = None) -> LinearRepresentation:
    """Block-diagonal sum of representations sharing one algebra basis."""
    if not reps:
        raise ValueError("direct_sum needs at least one representation")
    g = reps[0].group_label
    for r in reps[1:]:
        if r.group_label != g or r.group_dim != reps[0].group_dim:
            raise ValueError(f"group mismatch: {g} vs {r.group_label}")
    if len(reps) == 1:
        return reps[0]
    table, offset = [], 0
    for r in reps:
        for o, n, lbl in r.summands:
            table.append((offset + o, n, lbl))
        offset += r.d
    return LinearRepresentation(label or g, _block_diag([r.basis for r in reps]), table)


def exp_map(X: np.ndarray, t: float = 1.0) -> np.ndarray:
    """``exp(tX)`` for skew ``X``."""
    X = np.asarray(X, dtype=float)
    if np.abs(X + X.T).max(initial=0.0) > SKEW_TOL:
        raise ValueError("exp_map expects a skew-symmetric matrix")
    return expm(t * X)


# ---------------------------------------------------------------------------
# classical families

_J2 = np.array([[0.0, -1.0], [1.0, 0.0]])


def realify(a: np.ndarray) -> np.ndarray:
    """Complex ``n x n`` -> real ``2n x 2n``, coordinates ``(x1, y1, x2, y2, ...)``."""
    a = np.asarray(a, dtype=complex)
    return np.kron(a.real, np.eye(2)) + np.kron(a.imag, _J2)


def _quat_block_matrix(q: np.ndarray) -> np.ndarray:
    """Quaternionic ``n x n`` matrix (array n x n x 4) acting on H^n by left multiplication."""
    n = q.shape[0]
    out = np.zeros((4 * n, 4 * n))
    for a in range(n):
        for b in range(n):
            out[4 * a : 4 * a + 4, 4 * b : 4 * b + 4] = alg.left_matrix(alg.quaternion(q[a, b]))
    return out


def so_basis(n: int) -> np.ndarray:
    mats = []
    for i, j in itertools.combinations(range(n), 2):
        m = np.zeros((n, n))
        m[i, j], m[j, i] = -1.0, 1.0
        mats.append(m)
    return np.array(mats).reshape(-1, n, n)


def _su_complex_basis(n: int) -> list[np.ndarray]:
    mats = []
    for i, j in itertools.combinations(range(n), 2):
        m = np.zeros((n, n), dtype=complex)
        m[i, j], m[j, i] = -1, 1
        mats.append(m)
        m = np.zeros((n, n), dtype=complex)
        m[i, j] = m[j, i] = 1j
        mats.append(m)
    for k in range(1, n):
        diag = np.zeros(n)
        diag[:k] = 1.0
        diag[k] = -k
        mats.append(np.diag(1j * diag / np.sqrt(k * (k + 1) / 2)))
    return mats


def classical_basis(family: str, n: int, realified: bool = True) -> LinearRepresentation:
    """Vector representation of so(n), su(n) (on R^2n) or sp(n) (on R^4n = H^n).

    su(n) commutes with ``structures['J']`` (multiplication by i).  sp(n) acts by
    left multiplication of quaternionic matrices on columns of H^n and commutes with
    the right multiplications ``structures['J']`` (by i) and ``structures['K']`` (by j).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if family == "so":
        if n < 2:
            raise ValueError("so(n) needs n >= 2")
        return LinearRepresentation(f"so-{n}", so_basis(n), [(0, n, f"R{n}")])
    if not realified:
        raise ValueError(f"{family}(n) is realised on a real vector space only")
    if family == "su":
        if n < 2:
            raise ValueError("su(n) needs n >= 2")
        basis = np.array([realify(m) for m in _su_complex_basis(n)])
        return LinearRepresentation(
            f"su-{n}", basis, [(0, 2 * n, f"C{n}")], {"J": realify(1j * np.eye(n))}
        )
    if family == "sp":
        mats = []
        for a, b in itertools.combinations(range(n), 2):
            for unit in range(4):
                q = np.zeros((n, n, 4))
                if unit == 0:
                    q[a, b, 0], q[b, a, 0] = -1.0, 1.0
                else:
                    q[a, b, unit] = q[b, a, unit] = 1.0
                mats.append(_quat_block_matrix(q) / np.sqrt(2))
        for a in range(n):
            for unit in (1, 2, 3):
                q = np.zeros((n, n, 4))
                q[a, a, unit] = 1.0
                mats.append(_quat_block_matrix(q))
        rq = lambda name: np.kron(np.eye(n), alg.right_matrix(alg.quaternion(name)))
        return LinearRepresentation(
            f"sp-{n}", np.array(mats), [(0, 4 * n, f"H{n}")], {"J": rq("i"), "K": rq("j")}
        )
    raise ValueError(f"unknown family {family!r}")


def torus_rep(weights) -> LinearRepresentation:
    """Torus ``T^r`` on ``C^k``: summand ``l`` rotates by ``sum_a weights[l][a] * theta_a``."""
    w = np.atleast_2d(np.asarray(weights, dtype=float))
    k, r = w.shape
    basis = np.array([np.kron(np.diag(w[:, a]), _J2) for a in range(r)])
    table = [(2 * l, 2, "C") for l in range(k)]
    return LinearRepresentation(f"T{r}", basis, table, {"J": np.kron(np.eye(k), _J2)})


def quaternion_product_rep(factors: Sequence[str], summands: Sequence[tuple]) -> LinearRepresentation:
    """Products of unit quaternion groups acting on ``H + ... + H``.

    ``factors`` lists ``"sp1"`` (a copy of Sp(1), three algebra directions) or a
    quaternion unit name such as ``"j"`` (the circle ``exp(j theta)``).
    Each summand is ``(left, right, conj)``: factor indices (or ``None``) acting by
    ``x -> l_g x r_h`` with ``h`` replaced by its conjugate when ``conj`` is true,
    so ``(0, 1, True)`` is ``l_p r_{bar q}``.
    """
    units = ("i", "j", "k")
    dirs = []  # (factor index, quaternion unit)
    for f, kind in enumerate(factors):
        if kind == "sp1":
            dirs.extend((f, u) for u in units)
        elif kind in units:
            dirs.append((f, kind))
        else:
            raise ValueError(f"unknown factor {kind!r}")
    k = len(summands)
    basis = np.zeros((len(dirs), 4 * k, 4 * k))
    for a, (f, u) in enumerate(dirs):
        L = alg.left_matrix(alg.quaternion(u))
        R = alg.right_matrix(alg.quaternion(u))
        for l, spec in enumerate(summands):
            left, right, conj = (tuple(spec) + (True,))[:3]
            blk = np.zeros((4, 4))
            if left == f:
                blk += L
            if right == f:
                blk += -R if conj else R
            basis[a, 4 * l : 4 * l + 4, 4 * l : 4 * l + 4] = blk
    label = "x".join("Sp1" if kind == "sp1" else "U1" for kind in factors)
    return LinearRepresentation(label, basis, [(4 * l, 4, "H") for l in range(k)])


def adjoint_rep(rep: LinearRepresentation, label: str | None = None) -> LinearRepresentation:
    """Adjoint representation on an orthonormalised copy of the algebra.

    The basis is orthonormalised for the invariant form ``-tr(XY)`` of the given
    faithful matrix realisation, which makes every ``ad`` matrix skew.
    """
    return conjugation_rep(rep, rep.basis, label or f"{rep.group_label}-adj")


def conjugation_rep(rep: LinearRepresentation, span: np.ndarray, label: str | None = None) -> LinearRepresentation:
    """Action ``S -> [X, S]`` on an ad-invariant space of matrices spanned by ``span``."""
    m = span.shape[0]
    flat = span.reshape(m, -1)
    u, s, vt = np.linalg.svd(flat, full_matrices=False)
    keep = s > 1e-10 * s.max()
    frame = vt[keep].reshape(-1, *span.shape[1:])
    mats = []
    for X in rep.basis:
        br = np.einsum("ij,kjl->kil", X, frame) - np.einsum("kij,jl->kil", frame, X)
        coords = np.einsum("lij,kij->lk", frame, br)
        leak = br - np.einsum("lk,lij->kij", coords, frame)
        if np.abs(leak).max() > 1e-9:
            raise ValueError("span is not invariant under conjugation")
        mats.append(coords)
    return LinearRepresentation(label or rep.group_label, np.array(mats), [(0, frame.shape[0], label or "ad")])


# ---------------------------------------------------------------------------
# triality


@dataclass(frozen=True, eq=False)
class TrialityTriple:
    """Skew ``a, b, c`` with ``a(x y) = b(x) y + x c(y)`` for all octonions x, y."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def residual(self) -> float:
        return _triality_residual(self.a, self.b, self.c)

    def as_array(self) -> np.ndarray:
        return np.stack([self.a, self.b, self.c])


def _triality_residual(a, b, c) -> float:
    t = alg.structure_tensor(3)
    lhs = np.einsum("kl,stl->stk", a, t)
    rhs = np.einsum("us,utk->stk", b, t) + np.einsum("ut,suk->stk", c, t)
    return float(np.abs(lhs - rhs).max())


@functools.lru_cache(maxsize=None)
def _triality_system() -> tuple[np.ndarray, np.ndarray]:
    """Linear map ``(b, c) in gl(8)^2 -> [b(e_s) e_t + e_s c(e_t)]`` and its pseudo-inverse."""
    t = alg.structure_tensor(3)
    # unknown index: b[u, s] -> u*8+s, c[u, t] -> 64 + u*8+t
    M = np.zeros((8, 8, 8, 128))
    for u in range(8):
        for s in range(8):
            M[s, :, :, u * 8 + s] += t[u]  # b[u,s] e_u e_t
    for u in range(8):
        for tt in range(8):
            M[:, tt, :, 64 + u * 8 + tt] += t[:, u, :]  # c[u,t] e_s e_u
    M = M.reshape(512, 128)
    pinv = np.linalg.pinv(M, rcond=1e-12)
    M.setflags(write=False)
    pinv.setflags(write=False)
    return M, pinv


def triality_lift(a: np.ndarray) -> TrialityTriple:
    """Solve ``a(x y) = b(x) y + x c(y)`` for ``(b, c)`` given ``a`` in so(8).

    Over gl(8) x gl(8) the solution is unique up to ``(lambda I, -lambda I)``; the
    minimum-norm solution removes that ambiguity and lands in so(8) x so(8).
    """
    a = np.asarray(a, dtype=float)
    if np.abs(a + a.T).max() > SKEW_TOL:
        raise ValueError("triality_lift expects a in so(8)")
    t = alg.structure_tensor(3)
    M, pinv = _triality_system()
    rhs = np.einsum("kl,stl->stk", a, t).reshape(-1)
    sol = pinv @ rhs
    b = sol[:64].reshape(8, 8)
    c = sol[64:].reshape(8, 8)
    res = np.abs(M @ sol - rhs).max(initial=0.0)
    if res > 1e-8:
        raise RuntimeError(f"triality system inconsistent (residual {res:.2e})")
    return TrialityTriple(a, b, c)


@functools.lru_cache(maxsize=None)
def spin8_triples() -> np.ndarray:
    """Array (28, 3, 8, 8): triality triples lifted from the standard so(8) basis."""
    out = np.array([triality_lift(a).as_array() for a in so_basis(8)])
    out.setflags(write=False)
    return out


def triality_from_slot(slot: int, matrix: np.ndarray) -> TrialityTriple:
    """The unique triple whose ``slot``-component (0=a, 1=b, 2=c) equals ``matrix``."""
    triples = spin8_triples()
    A = triples[:, slot].reshape(28, -1).T
    coef, *_ = np.linalg.lstsq(A, np.asarray(matrix, float).reshape(-1), rcond=None)
    res = np.abs(A @ coef - np.asarray(matrix).reshape(-1)).max()
    if res > 1e-9:
        raise ValueError(f"matrix is not the {('a', 'b', 'c')[slot]}-slot of a triality triple ({res:.2e})")
    t = np.einsum("r,rsij->sij", coef, triples)
    return TrialityTriple(*t)


TRIALITY_SLOTS = ("R8_0", "R8_+", "R8_-")


def spin_subalgebra(constraints: Iterable = ()) -> LinearRepresentation:
    """Triples whose a-component kills each constraint octonion.

    The result acts on ``R8_0 + R8_+ + R8_-`` (slots a, b, c).  No constraint gives
    spin(8); ``[1]`` gives spin(7); ``[1, i]`` gives spin(6).
    """
    triples = spin8_triples()
    cons = [alg.octonion(c) if isinstance(c, str) else c for c in constraints]
    if cons:
        rows = np.concatenate([np.einsum("rij,j->ir", triples[:, 0], c.coords) for c in cons])
        coeff = null_space(rows, rcond=1e-10).T
    else:
        coeff = np.eye(28)
    sub = np.einsum("ra,asij->rsij", coeff, triples)
    basis = np.array([_block_diag([t[None, 0], t[None, 1], t[None, 2]])[0] for t in sub])
    label = {0: "spin-8", 1: "spin-7", 2: "spin-6"}.get(len(cons), f"spin8-sub{len(cons)}")
    return LinearRepresentation(label, basis, [(0, 8, "R8_0"), (8, 8, "R8_+"), (16, 8, "R8_-")])


def octonion_frame(names: Sequence[str]) -> np.ndarray:
    """Orthonormal 8 x k frame spanned by the named octonion units."""
    return np.stack([alg.octonion(n).coords for n in names], axis=1)


def g2_basis() -> LinearRepresentation:
    """Derivations of the octonions: 14 skew 8 x 8 matrices killing 1."""
    t = alg.structure_tensor(3)
    # D(e_s e_t) - D(e_s) e_t - e_s D(e_t) = 0, unknown D[k, l] -> k*8+l
    M = np.zeros((8, 8, 8, 64))
    for k in range(8):
        for l in range(8):
            M[:, :, k, k * 8 + l] += t[:, :, l]
    for u in range(8):
        for s in range(8):
            M[s, :, :, u * 8 + s] -= t[u]
    for u in range(8):
        for tt in range(8):
            M[:, tt, :, u * 8 + tt] -= t[:, u, :]
    ns = null_space(M.reshape(512, 64), rcond=1e-10).T
    basis = ns.reshape(-1, 8, 8)
    # orthonormal for -tr(XY)/2 so that the basis is well conditioned
    return LinearRepresentation("g2", basis, [(0, 8, "R8")])


# ---------------------------------------------------------------------------
# Spin(9) and Spin(10) via Clifford algebras


@functools.lru_cache(maxsize=None)
def _phi_generators() -> np.ndarray:
    """phi(e_0), ..., phi(e_8): 16 x 16 symmetric, phi(r, u)^2 = (r^2 + |u|^2) I."""
    eye8 = np.eye(8)
    out = np.zeros((9, 16, 16))
    out[0, :8, :8] = eye8
    out[0, 8:, 8:] = -eye8
    for m in range(8):
        u = alg.HypercomplexElement(alg.SPIN9_TO_CD[:, m])
        out[m + 1, :8, 8:] = alg.right_matrix(u)
        out[m + 1, 8:, :8] = alg.right_matrix(u.conj())
    out.setflags(write=False)
    return out


def phi(r: float, u) -> np.ndarray:
    """``[[r I, R_u], [R_conj(u), -r I]]`` with ``u`` given in CD coordinates."""
    u = u if isinstance(u, alg.HypercomplexElement) else alg.HypercomplexElement(np.asarray(u, float))
    out = np.zeros((16, 16))
    out[:8, :8] = r * np.eye(8)
    out[8:, 8:] = -r * np.eye(8)
    out[:8, 8:] = alg.right_matrix(u)
    out[8:, :8] = alg.right_matrix(u.conj())
    return out


def clifford_spin_basis(n: int, base: int = 0) -> list[alg.CliffordElement]:
    """``1/2 e_i e_j`` (i < j) in Cl(n), signature -1."""
    half = Fraction(1, 2)
    return [
        alg.clifford_blade((i, j), n, -1, base) * half
        for i, j in itertools.combinations(range(base, base + n), 2)
    ]


def spin_coeffs(x: alg.CliffordElement) -> np.ndarray:
    """Coordinates of a bivector of Cl(n) in the basis ``1/2 e_i e_j`` of spin(n)."""
    pairs = list(itertools.combinations(range(x.base, x.base + x.n), 2))
    out = np.zeros(len(pairs))
    for blade, c in x.blade_map.items():
        if len(blade) != 2:
            raise ValueError("spin_coeffs expects a bivector")
        out[pairs.index(blade)] = 2 * float(c)
    return out


def clifford_vector_action(x: alg.CliffordElement) -> np.ndarray:
    """Matrix of ``v -> x v - v x`` on the span of the generators."""
    n, base = x.n, x.base
    out = np.zeros((n, n))
    for k in range(n):
        ek = alg.clifford_generator(base + k, n, x.signature, base)
        br = x * ek - ek * x
        for blade, c in br.blade_map.items():
            if len(blade) != 1:
                raise ValueError("element does not preserve the vector space")
            out[blade[0] - base, k] = float(c)
    return out


def clifford_conjugation(g: alg.CliffordElement) -> np.ndarray:
    """Matrix of ``v -> g v g^{-1}`` on the generators, for ``g`` a signed blade."""
    if len(g.blade_map) != 1:
        raise ValueError("conjugation is implemented for single blades")
    (blade, coef), = g.blade_map.items()
    sq = (g * g).scalar_part()
    inv = g * (1 / sq)
    n, base = g.n, g.base
    out = np.zeros((n, n))
    for k in range(n):
        ek = alg.clifford_generator(base + k, n, g.signature, base)
        img = g * ek * inv
        for bl, c in img.blade_map.items():
            out[bl[0] - base, k] = float(c)
    return out


def delta9_matrix(x: alg.CliffordElement) -> np.ndarray:
    """Spin representation of an even element of Cl(9) (generators e_0..e_8) on R^16.

    Uses ``e_i -> sqrt(-1) phi(e_i)``, so an even blade of length 2k maps to
    ``(-1)^k phi_{i1} ... phi_{i2k}``.
    """
    if not x.is_even() or x.n != 9 or x.base != 0:
        raise ValueError("delta9_matrix takes even elements of Cl(9) on e_0..e_8")
    gens = _phi_generators()
    out = np.zeros((16, 16))
    for blade, c in x.blade_map.items():
        m = np.eye(16)
        for g in blade:
            m = m @ gens[g]
        out += float(c) * (-1) ** (len(blade) // 2) * m
    return out


def _cl9_complex(x: alg.CliffordElement, sign: int) -> np.ndarray:
    """``e_i -> sign * sqrt(-1) * phi(e_i)`` on all of Cl(9)."""
    gens = _phi_generators()
    out = np.zeros((16, 16), dtype=complex)
    for blade, c in x.blade_map.items():
        m = np.eye(16, dtype=complex)
        for g in blade:
            m = m @ gens[g]
        out += float(c) * (sign * 1j) ** len(blade) * m
    return out


def realify_split(a: np.ndarray) -> np.ndarray:
    """Complex ``n x n`` -> real ``2n x 2n`` on ``C^n = R^n + sqrt(-1) R^n``."""
    return np.block([[a.real, -a.imag], [a.imag, a.real]])


def delta10_matrix(x: alg.CliffordElement, sign: int) -> np.ndarray:
    """Half-spin image of an even element of Cl(10) (e_0..e_9) acting on R^32."""
    if not x.is_even() or x.n != 10 or x.base != 0:
        raise ValueError("delta10_matrix takes even elements of Cl(10) on e_0..e_9")
    return realify_split(_cl9_complex(alg.even_iso(x), sign))


def spin9_vector_rep() -> LinearRepresentation:
    basis = np.array([clifford_vector_action(x) for x in clifford_spin_basis(9)])
    return LinearRepresentation("spin-9", basis, [(0, 9, "R9")])


def spin9_rep() -> LinearRepresentation:
    """Delta_9 on R^16 = Ca + Ca, in the basis 1/2 e_i e_j of spin(9)."""
    basis = np.array([delta9_matrix(x) for x in clifford_spin_basis(9)])
    return LinearRepresentation("spin-9", basis, [(0, 16, "R16")])


def spin10_vector_rep() -> LinearRepresentation:
    basis = np.array([clifford_vector_action(x) for x in clifford_spin_basis(10)])
    return LinearRepresentation("spin-10", basis, [(0, 10, "R10")])


def spin10_halfspin(sign: str | int = "+") -> LinearRepresentation:
    """Delta_10^{+/-} on C^16 = R^16 + sqrt(-1) R^16, realified to R^32."""
    s = {"+": 1, "-": -1, 1: 1, -1: -1}[sign]
    basis = np.array([delta10_matrix(x, s) for x in clifford_spin_basis(10)])
    J = realify_split(1j * np.eye(16))
    conj = np.diag(np.r_[np.ones(16), -np.ones(16)])
    lbl = "C16_+" if s > 0 else "C16_-"
    return LinearRepresentation("spin-10", basis, [(0, 32, lbl)], {"J": J, "real": conj})


# ---------------------------------------------------------------------------
# serialisation


def dump_json(rep: LinearRepresentation) -> str:
    doc = {
        "group_label": rep.group_label,
        "d": rep.d,
        "basis": [m.reshape(-1).tolist() for m in rep.basis],
        "summands": [list(s) for s in rep.summands],
        "structure_matrices": {k: v.reshape(-1).tolist() for k, v in rep.structures.items()},
    }
    return json.dumps(doc)


def load_json(text: str) -> LinearRepresentation:
    doc = json.loads(text)
    d = int(doc["d"])
    basis = np.array(doc["basis"], dtype=float).reshape(-1, d, d)
    structs = {k: np.array(v, dtype=float).reshape(d, d) for k, v in doc.get("structure_matrices", {}).items()}
    return LinearRepresentation(doc["group_label"], basis, [tuple(s) for s in doc["summands"]], structs)


# ---------------------------------------------------------------------------
# Spin(16) half-spin and F4


def _cl8_gamma(u: alg.HypercomplexElement) -> np.ndarray:
    """``[[0, R_u], [-R_conj(u), 0]]``: squares to ``-|u|^2`` and gives Cl(8) on R^16."""
    out = np.zeros((16, 16))
    out[:8, 8:] = alg.right_matrix(u)
    out[8:, :8] = -alg.right_matrix(u.conj())
    return out


@functools.lru_cache(maxsize=None)
def _cl16_generators() -> np.ndarray:
    """Sixteen anticommuting 256 x 256 matrices squaring to -1 (graded tensor product of two Cl(8))."""
    gam = [_cl8_gamma(alg.HypercomplexElement(np.eye(8)[k])) for k in range(8)]
    vol = functools.reduce(np.matmul, gam)
    eye = np.eye(16)
    gens = [np.kron(g, eye) for g in gam] + [np.kron(vol, g) for g in gam]
    out = np.array(gens)
    out.setflags(write=False)
    return out


@functools.lru_cache(maxsize=None)
def _halfspin16_frame() -> np.ndarray:
    gens = _cl16_generators()
    omega = functools.reduce(np.matmul, gens)
    w, v = np.linalg.eigh((omega + omega.T) / 2)
    frame = v[:, w > 0]
    frame.setflags(write=False)
    return frame


def spin16_blade(blade: Sequence[int]) -> np.ndarray:
    """Image on the half-spin space R^128 of the Clifford monomial ``e_{i1} ... e_{ik}`` (k even, indices 0..15)."""
    if len(blade) % 2:
        raise ValueError("only even monomials act on a half-spin space")
    gens = _cl16_generators()
    m = functools.reduce(np.matmul, [gens[i] for i in blade], np.eye(256))
    F = _halfspin16_frame()
    return F.T @ m @ F


def spin16_halfspin() -> LinearRepresentation:
    """Half-spin representation of spin(16) on R^128, basis ``1/2 e_i e_j`` (i < j)."""
    basis = np.array([0.5 * spin16_blade((i, j)) for i, j in itertools.combinations(range(16), 2)])
    return LinearRepresentation("spin-16", basis, [(0, 128, "R128")])


def spin16_vector_rep() -> LinearRepresentation:
    """Vector representation in the same basis as :func:`spin16_halfspin`."""
    mats = []
    for i, j in itertools.combinations(range(16), 2):
        m = np.zeros((16, 16))
        # [1/2 e_i e_j, e_i] = e_j with e_i^2 = -1
        m[j, i], m[i, j] = 1.0, -1.0
        mats.append(m)
    return LinearRepresentation("spin-16", np.array(mats), [(0, 16, "R16")])


def spin16_vector_blade(blade: Sequence[int]) -> np.ndarray:
    """Action of an even monomial of Cl(16) on R^16 by conjugation: -1 on its indices."""
    if len(blade) % 2:
        raise ValueError("only even monomials lie in Spin(16)")
    diag = np.ones(16)
    for i in blade:
        diag[i] *= -1.0
    return np.diag(diag)


def _albert_coords() -> list[tuple]:
    # (kind, position) for the 27 coordinates: three diagonal reals, then three
    # off-diagonal octonions x1 (entry 23), x2 (31), x3 (12) with weight sqrt 2
    out = [("d", k) for k in range(3)]
    for slot in range(3):
        out.extend(("o", slot, c) for c in range(8))
    return out


def _albert_matrix(v: np.ndarray) -> np.ndarray:
    """Hermitian 3 x 3 octonion matrix (3, 3, 8) from 27 orthonormal coordinates."""
    X = np.zeros((3, 3, 8))
    for k in range(3):
        X[k, k, 0] = v[k]
    conj = np.r_[1.0, -np.ones(7)]
    for slot, (a, b) in enumerate(((1, 2), (2, 0), (0, 1))):
        x = v[3 + 8 * slot : 11 + 8 * slot] / np.sqrt(2)
        X[a, b] = x
        X[b, a] = conj * x
    return X


def _albert_vector(X: np.ndarray) -> np.ndarray:
    v = np.zeros(27)
    for k in range(3):
        v[k] = X[k, k, 0]
    for slot, (a, b) in enumerate(((1, 2), (2, 0), (0, 1))):
        v[3 + 8 * slot : 11 + 8 * slot] = X[a, b] * np.sqrt(2)
    return v


@functools.lru_cache(maxsize=None)
def _jordan_tensor() -> np.ndarray:
    """``T[i, j, k]``: k-th coordinate of ``E_i o E_j``, ``X o Y = (XY + YX)/2``."""
    t = alg.structure_tensor(3)
    mats = [_albert_matrix(e) for e in np.eye(27)]
    out = np.zeros((27, 27, 27))
    for i in range(27):
        for j in range(i, 27):
            xy = np.einsum("abp,bcq,pqr->acr", mats[i], mats[j], t)
            yx = np.einsum("abp,bcq,pqr->acr", mats[j], mats[i], t)
            out[i, j] = out[j, i] = _albert_vector((xy + yx) / 2)
    return out


def f4_rep() -> LinearRepresentation:
    """F4 as the derivations of the exceptional Jordan algebra, acting on its traceless part R^26."""
    T = _jordan_tensor()
    pairs = list(itertools.combinations(range(27), 2))
    # skew D = sum_{(a,b)} c_ab (E_ba - E_ab); derivation: D(x o y) = Dx o y + x o Dy
    gens = np.zeros((len(pairs), 27, 27))
    for n, (a, b) in enumerate(pairs):
        gens[n, b, a], gens[n, a, b] = 1.0, -1.0
    iu = np.triu_indices(27)
    lhs = np.einsum("ijk,nlk->nijl", T, gens, optimize=True)
    rhs = np.einsum("nkl,kjm->nljm", gens, T, optimize=True) + np.einsum("nkj,ikm->nijm", gens, T, optimize=True)
    rows = (lhs - rhs)[:, iu[0], iu[1]].reshape(len(pairs), -1)
    ns = null_space(rows.T, rcond=1e-10)
    ders = np.einsum("nr,nij->rij", ns, gens)
    frame = albert_traceless_frame()
    basis = np.einsum("ji,rjk,kl->ril", frame, ders, frame)
    return LinearRepresentation("f4", basis, [(0, 26, "R26")])


@functools.lru_cache(maxsize=None)
def albert_traceless_frame() -> np.ndarray:
    """27 x 26 orthonormal frame of the traceless Jordan matrices (diagonal part first)."""
    diag = np.array([[1.0, -1.0, 0.0], [1.0, 1.0, -2.0]]).T
    diag /= np.linalg.norm(diag, axis=0)
    frame = np.zeros((27, 26))
    frame[:3, :2] = diag
    frame[3:, 2:] = np.eye(24)
    frame.setflags(write=False)
    return frame
