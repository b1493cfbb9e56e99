"""Quaternions, octonions and real Clifford algebras.

Octonions are built from quaternions by the Cayley-Dickson doubling

    (a, b)(c, d) = (ac - conj(d) b, d a + b conj(c))

with an element ``(a, b)`` read as ``a + b e``.  Coordinates are stored in the
basis ``1, i, j, k, e, ie, je, ke``.  A second ordering
``1, e, i, j, k, ei, ej, ek`` is used for the nine-dimensional vector
representation of Spin(9); since ``ei = -ie`` the change of basis between the two
orderings is a signed permutation (:data:`SPIN9_TO_CD`).

Clifford algebras use exact rational coefficients on basis blades.
"""

from __future__ import annotations

import functools
import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

__all__ = [
    "QUATERNION_BASIS",
    "OCTONION_BASIS",
    "SPIN9_OCTONION_BASIS",
    "SPIN9_TO_CD",
    "HypercomplexElement",
    "MultOperator",
    "CliffordElement",
    "cd_mul",
    "quaternion",
    "octonion",
    "parse_octonion",
    "mul_operator",
    "left_matrix",
    "right_matrix",
    "structure_tensor",
    "clifford_generator",
    "clifford_blade",
    "clifford_scalar",
    "clifford_product",
    "even_iso",
    "blade_sign",
]

QUATERNION_BASIS = ("1", "i", "j", "k")
OCTONION_BASIS = ("1", "i", "j", "k", "e", "ie", "je", "ke")
# Basis {1, e, i, j, k, ei, ej, ek} used for R^9 = R + Ca in the Spin(9) model.
SPIN9_OCTONION_BASIS = ("1", "e", "i", "j", "k", "ei", "ej", "ek")


def _conj(x: np.ndarray) -> np.ndarray:
    out = -x
    out[0] = x[0]
    return out


def _cd(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    n = x.shape[0]
    if n == 1:
        return x * y
    h = n // 2
    a, b = x[:h], x[h:]
    c, d = y[:h], y[h:]
    return np.concatenate([_cd(a, c) - _cd(_conj(d), b), _cd(d, a) + _cd(b, _conj(c))])


@functools.lru_cache(maxsize=None)
def structure_tensor(level: int) -> np.ndarray:
    """Return ``T`` with ``(x y)_k = sum_ij T[i, j, k] x_i y_j``."""
    n = 2**level
    eye = np.eye(n)
    t = np.empty((n, n, n))
    for i in range(n):
        for j in range(n):
            t[i, j] = _cd(eye[i], eye[j])
    t.setflags(write=False)
    return t


def _level_of(n: int) -> int:
    if n == 4:
        return 2
    if n == 8:
        return 3
    raise ValueError(f"hypercomplex elements have 4 or 8 coordinates, got {n}")


@dataclass(frozen=True, eq=False)
class HypercomplexElement:
    """A quaternion (level 2) or octonion (level 3)."""

    coords: np.ndarray
    level: int = field(default=-1)

    def __post_init__(self):
        c = np.array(self.coords, dtype=float)
        if c.ndim != 1:
            raise ValueError("coords must be a vector")
        level = _level_of(c.shape[0])
        if self.level not in (-1, level):
            raise ValueError(f"{c.shape[0]} coordinates do not match level {self.level}")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)
        object.__setattr__(self, "level", level)

    @property
    def dim(self) -> int:
        return self.coords.shape[0]

    def conj(self) -> "HypercomplexElement":
        return HypercomplexElement(_conj(self.coords))

    def norm2(self) -> float:
        return float(self.coords @ self.coords)

    def norm(self) -> float:
        return float(np.sqrt(self.norm2()))

    def real(self) -> float:
        return float(self.coords[0])

    def __mul__(self, other):
        if isinstance(other, HypercomplexElement):
            return cd_mul(self, other)
        return HypercomplexElement(self.coords * float(other))

    def __rmul__(self, other):
        return HypercomplexElement(self.coords * float(other))

    def __add__(self, other: "HypercomplexElement") -> "HypercomplexElement":
        _check_level(self, other)
        return HypercomplexElement(self.coords + other.coords)

    def __sub__(self, other: "HypercomplexElement") -> "HypercomplexElement":
        _check_level(self, other)
        return HypercomplexElement(self.coords - other.coords)

    def __neg__(self) -> "HypercomplexElement":
        return HypercomplexElement(-self.coords)

    def isclose(self, other: "HypercomplexElement", atol: float = 1e-12) -> bool:
        return self.level == other.level and bool(np.allclose(self.coords, other.coords, atol=atol, rtol=0))

    def __repr__(self) -> str:
        names = QUATERNION_BASIS if self.level == 2 else OCTONION_BASIS
        terms = [f"{c:+.6g}{'' if n == '1' else n}" for c, n in zip(self.coords, names) if c != 0]
        return "HypercomplexElement(" + (" ".join(terms) or "0") + ")"


def _check_level(x: HypercomplexElement, y: HypercomplexElement) -> None:
    if x.level != y.level:
        raise ValueError(f"level mismatch: {x.level} vs {y.level}")


def cd_mul(x: HypercomplexElement, y: HypercomplexElement) -> HypercomplexElement:
    """Cayley-Dickson product of two elements of the same level."""
    _check_level(x, y)
    t = structure_tensor(x.level)
    return HypercomplexElement(np.einsum("i,j,ijk->k", x.coords, y.coords, t))


def quaternion(name_or_coords) -> HypercomplexElement:
    if isinstance(name_or_coords, str):
        return HypercomplexElement(np.eye(4)[QUATERNION_BASIS.index(name_or_coords)])
    return HypercomplexElement(np.asarray(name_or_coords, dtype=float))


def _basis_vectors() -> dict[str, np.ndarray]:
    eye = np.eye(8)
    vecs = {name: eye[n] for n, name in enumerate(OCTONION_BASIS)}
    # e i = -(i e), etc.
    for q in "ijk":
        vecs["e" + q] = -vecs[q + "e"]
    return vecs


_OCT_VECTORS = _basis_vectors()

# Column m holds the CD coordinates of the m-th element of SPIN9_OCTONION_BASIS.
SPIN9_TO_CD = np.stack([_OCT_VECTORS[n] for n in SPIN9_OCTONION_BASIS], axis=1)
SPIN9_TO_CD.setflags(write=False)

_TERM = re.compile(r"\s*([+-]?)\s*(\d+(?:\.\d*)?(?:/\d+)?)?\s*\*?\s*([a-z1]*)")


def parse_octonion(text: str) -> HypercomplexElement:
    """Parse a literal such as ``"je"``, ``"-ke"``, ``"1/2*i + ej"``.

    Names from both basis orderings are accepted; ``ei`` means ``-ie``.
    """
    text = text.replace(" ", "")
    if not text:
        raise ValueError("empty octonion literal")
    out = np.zeros(8)
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse octonion literal {text!r}")
        sign, coef, name = m.groups()
        value = float(Fraction(coef)) if coef else 1.0
        if sign == "-":
            value = -value
        if not name:
            name = "1"
        if name not in _OCT_VECTORS:
            raise ValueError(f"unknown octonion unit {name!r} in {text!r}")
        out += value * _OCT_VECTORS[name]
        pos = m.end()
    return HypercomplexElement(out)


def octonion(name_or_coords) -> HypercomplexElement:
    if isinstance(name_or_coords, str):
        return parse_octonion(name_or_coords)
    return HypercomplexElement(np.asarray(name_or_coords, dtype=float))


def left_matrix(u: HypercomplexElement) -> np.ndarray:
    """Matrix of ``x -> u x``."""
    return np.einsum("i,ijk->kj", u.coords, structure_tensor(u.level))


def right_matrix(u: HypercomplexElement) -> np.ndarray:
    """Matrix of ``x -> x u``."""
    return np.einsum("j,ijk->ki", u.coords, structure_tensor(u.level))


@dataclass(frozen=True, eq=False)
class MultOperator:
    matrix: np.ndarray
    side: str
    u: HypercomplexElement

    def __call__(self, x: HypercomplexElement) -> HypercomplexElement:
        return HypercomplexElement(self.matrix @ x.coords)


def mul_operator(u: HypercomplexElement, side: str = "left") -> MultOperator:
    if u.level != 3:
        raise ValueError("multiplication operators are built for octonions")
    if side == "left":
        m = left_matrix(u)
    elif side == "right":
        m = right_matrix(u)
    else:
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    m.setflags(write=False)
    return MultOperator(m, side, u)


# ---------------------------------------------------------------------------
# Clifford algebras


def blade_sign(a: tuple[int, ...], b: tuple[int, ...], signature: int) -> tuple[int, tuple[int, ...]]:
    """Product of two sorted basis blades: returns (sign, blade)."""
    sign = 1
    out = list(a)
    for g in b:
        # move g left past every larger generator already present
        pos = len(out)
        while pos > 0 and out[pos - 1] > g:
            pos -= 1
        sign *= (-1) ** (len(out) - pos)
        if pos > 0 and out[pos - 1] == g:
            out.pop(pos - 1)
            sign *= signature
        else:
            out.insert(pos, g)
    return sign, tuple(out)


@dataclass(frozen=True, eq=False)
class CliffordElement:
    """Element of Cl(n) (signature -1) or Cl_+(n) (signature +1).

    Generators are labelled ``base, ..., base + n - 1``.
    """

    blade_map: Mapping[tuple[int, ...], Fraction]
    n: int
    signature: int = -1
    base: int = 1

    def __post_init__(self):
        if self.signature not in (-1, 1):
            raise ValueError("signature must be -1 or +1")
        clean = {}
        for blade, coef in self.blade_map.items():
            blade = tuple(blade)
            if list(blade) != sorted(set(blade)):
                raise ValueError(f"blade {blade} is not strictly increasing")
            if blade and (blade[0] < self.base or blade[-1] >= self.base + self.n):
                raise ValueError(f"blade {blade} outside generators {self.base}..{self.base + self.n - 1}")
            coef = coef if isinstance(coef, Fraction) else Fraction(coef)
            if coef:
                clean[blade] = clean.get(blade, Fraction(0)) + coef
        object.__setattr__(self, "blade_map", {k: v for k, v in sorted(clean.items()) if v})

    def _same(self, other: "CliffordElement") -> None:
        if (self.n, self.signature, self.base) != (other.n, other.signature, other.base):
            raise ValueError("Clifford elements from different algebras")

    def __mul__(self, other):
        if isinstance(other, CliffordElement):
            return clifford_product(self, other)
        return CliffordElement({k: v * other for k, v in self.blade_map.items()}, self.n, self.signature, self.base)

    __rmul__ = __mul__

    def __add__(self, other: "CliffordElement") -> "CliffordElement":
        self._same(other)
        out = dict(self.blade_map)
        for k, v in other.blade_map.items():
            out[k] = out.get(k, Fraction(0)) + v
        return CliffordElement(out, self.n, self.signature, self.base)

    def __neg__(self) -> "CliffordElement":
        return self * -1

    def __sub__(self, other: "CliffordElement") -> "CliffordElement":
        return self + (-other)

    def __eq__(self, other) -> bool:
        if isinstance(other, CliffordElement):
            return (self.n, self.signature, self.base) == (other.n, other.signature, other.base) and dict(
                self.blade_map
            ) == dict(other.blade_map)
        if other == 0:
            return not self.blade_map
        return NotImplemented

    def __hash__(self):
        return hash((self.n, self.signature, self.base, tuple(self.blade_map.items())))

    def is_even(self) -> bool:
        return all(len(b) % 2 == 0 for b in self.blade_map)

    def scalar_part(self) -> Fraction:
        return self.blade_map.get((), Fraction(0))

    def __repr__(self) -> str:
        if not self.blade_map:
            return "0"
        parts = []
        for blade, c in self.blade_map.items():
            name = "".join(f"e{g}" for g in blade) or "1"
            parts.append(f"{c}*{name}")
        return " + ".join(parts)


def clifford_scalar(value, n: int, signature: int = -1, base: int = 1) -> CliffordElement:
    return CliffordElement({(): Fraction(value)}, n, signature, base)


def clifford_blade(generators: Iterable[int], n: int, signature: int = -1, base: int = 1) -> CliffordElement:
    """Ordered product ``e_{g1} e_{g2} ...`` reduced to a signed sorted blade."""
    out = clifford_scalar(1, n, signature, base)
    for g in generators:
        out = out * clifford_generator(g, n, signature, base)
    return out


def clifford_generator(index: int, n: int, signature: int = -1, base: int = 1) -> CliffordElement:
    return CliffordElement({(index,): Fraction(1)}, n, signature, base)


def clifford_product(a: CliffordElement, b: CliffordElement) -> CliffordElement:
    a._same(b)
    out: dict[tuple[int, ...], Fraction] = {}
    for ba, ca in a.blade_map.items():
        for bb, cb in b.blade_map.items():
            s, blade = blade_sign(ba, bb, a.signature)
            out[blade] = out.get(blade, Fraction(0)) + s * ca * cb
    return CliffordElement(out, a.n, a.signature, a.base)


def even_iso(x: CliffordElement) -> CliffordElement:
    """Isomorphism Cl^0(n) -> Cl(n-1) fixed by ``e_i e_n -> e_i``, ``e_i e_j -> e_i e_j``.

    ``e_n`` is the top generator.  With ``f_i = e_i e_n`` one has ``f_i^2 = -1`` and
    ``f_i f_j = -s e_i e_j`` (``s`` the signature), so every even blade is a signed
    product of distinct ``f``'s; the ``f``'s are sent to the generators of Cl(n-1).
    For signature -1 this reproduces the assignment above exactly.
    """
    if not x.is_even():
        raise ValueError("even_iso needs an element of the even subalgebra")
    top = x.base + x.n - 1
    s = x.signature
    out: dict[tuple[int, ...], Fraction] = {}
    for blade, c in x.blade_map.items():
        if blade and blade[-1] == top:
            gens = blade[:-1]
            factor = (-s) ** ((len(gens) - 1) // 2)
        else:
            gens = blade
            factor = (-s) ** (len(gens) // 2)
        out[gens] = out.get(gens, Fraction(0)) + factor * c
    return CliffordElement(out, x.n - 1, -1, x.base)


def permutation_sign(seq: Iterable[int]) -> int:
    """Sign of the permutation sorting ``seq`` (distinct entries)."""
    seq = list(seq)
    inv = sum(1 for i, j in itertools.combinations(range(len(seq)), 2) if seq[i] > seq[j])
    return -1 if inv % 2 else 1
