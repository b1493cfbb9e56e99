"""Z2 Poincaré polynomials of the spaces that occur as orbits and critical sets.

Spaces are written as small expression trees: atoms such as ``S3``, ``RP3``,
``CP2``, ``T2``, ``SU(3)``, ``Sp(2)``, ``G2``, ``V2(R8)`` joined by ``x`` for
products.  Products use the Künneth formula over the field Z2, i.e. polynomial
multiplication.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from typing import Union

import numpy as np

__all__ = [
    "PoincarePoly",
    "Atom",
    "Product",
    "SpaceDescriptor",
    "parse_space",
    "poincare_data",
    "ATOMS",
]


@dataclass(frozen=True)
class PoincarePoly:
    """Betti numbers ``b_0 .. b_top`` with Z2 coefficients."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(v) for v in self.coeffs)
        if not c or any(v < 0 for v in c):
            raise ValueError("Betti numbers must be a non-empty list of non-negative integers")
        while len(c) > 1 and c[-1] == 0:
            c = c[:-1]
        object.__setattr__(self, "coeffs", c)

    @property
    def total(self) -> int:
        return sum(self.coeffs)

    @property
    def top_degree(self) -> int:
        return len(self.coeffs) - 1

    def betti(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __mul__(self, other: "PoincarePoly") -> "PoincarePoly":
        return PoincarePoly(tuple(np.convolve(self.coeffs, other.coeffs).tolist()))

    def __str__(self) -> str:
        terms = []
        for k, b in enumerate(self.coeffs):
            if b == 0:
                continue
            if k == 0:
                terms.append(str(b))
                continue
            mono = "t" if k == 1 else f"t^{k}"
            terms.append(mono if b == 1 else f"{b}{mono}")
        return " + ".join(terms)


def _sphere(n: int) -> PoincarePoly:
    c = [0] * (n + 1)
    c[0] += 1
    c[n] += 1
    return PoincarePoly(tuple(c))


def _truncated(step: int, top: int) -> PoincarePoly:
    c = [0] * (top + 1)
    for k in range(0, top + 1, step):
        c[k] = 1
    return PoincarePoly(tuple(c))


def _prod(polys) -> PoincarePoly:
    return reduce(lambda a, b: a * b, polys, PoincarePoly((1,)))


def _group(name: str, n: int | None) -> PoincarePoly:
    if name == "SU":
        return _prod(_sphere(2 * k - 1) for k in range(2, n + 1))
    if name == "U":
        return _prod(_sphere(2 * k - 1) for k in range(1, n + 1))
    if name == "Sp":
        return _prod(_sphere(4 * k - 1) for k in range(1, n + 1))
    if name == "SO" and n == 3:
        return _truncated(1, 3)
    if name == "SO":
        # Z2 cohomology of SO(n) has a simple system of generators in degrees 1..n-1
        return _prod(_sphere(k) for k in range(1, n))
    if name == "G2":
        # H*(G2; Z2) = Z2[x3]/(x3^4) (x) Lambda(x5)
        return _truncated(3, 9) * _sphere(5)
    if name == "Spin" and n == 7:
        # H*(Spin(7); Z2) = Z2[x3]/(x3^4) (x) Lambda(x5, x7)
        return _truncated(3, 9) * _sphere(5) * _sphere(7)
    raise ValueError(f"no catalog entry for the group {name}{'' if n is None else f'({n})'}")


def _stiefel(k: int, n: int) -> PoincarePoly:
    # V_k(R^n): simple system of Z2 generators in degrees n-k .. n-1
    if not 1 <= k <= n:
        raise ValueError(f"V{k}(R{n}) is not defined")
    return _prod(_sphere(i) for i in range(n - k, n))


# name -> (regex, builder, provenance)
ATOMS: dict[str, tuple[str, object, str]] = {
    "sphere": (r"S(\d+)", lambda m: _sphere(int(m[1])), "one class in degrees 0 and n"),
    "rp": (r"RP(\d+)", lambda m: _truncated(1, int(m[1])), "Z2[w]/(w^(n+1)), |w| = 1"),
    "cp": (r"CP(\d+)", lambda m: _truncated(2, 2 * int(m[1])), "Z[c]/(c^(n+1)), |c| = 2"),
    "torus": (r"T(\d+)", lambda m: _prod([_sphere(1)] * int(m[1])), "product of circles"),
    "point": (r"pt", lambda m: PoincarePoly((1,)), "a point"),
    "group": (
        r"(SU|U|Sp|SO|Spin)\((\d+)\)|(G2)",
        lambda m: _group(m[3], None) if m[3] else _group(m[1], int(m[2])),
        "Z2 cohomology of compact Lie groups (odd-sphere products without 2-torsion; "
        "truncated polynomial generators for SO(n), G2 and Spin(7))",
    ),
    "stiefel": (r"V(\d+)\(R(\d+)\)", lambda m: _stiefel(int(m[1]), int(m[2])), "real Stiefel manifold"),
}


@dataclass(frozen=True)
class Atom:
    text: str
    kind: str

    @property
    def provenance(self) -> str:
        return ATOMS[self.kind][2]

    def poincare(self) -> PoincarePoly:
        pattern, build, _ = ATOMS[self.kind]
        return build(re.fullmatch(pattern, self.text))

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class Product:
    factors: tuple["SpaceDescriptor", ...]

    def poincare(self) -> PoincarePoly:
        return _prod(f.poincare() for f in self.factors)

    def __str__(self) -> str:
        return " x ".join(str(f) for f in self.factors)


SpaceDescriptor = Union[Atom, Product]


def _atom(text: str) -> Atom:
    for kind, (pattern, _, _) in ATOMS.items():
        if re.fullmatch(pattern, text):
            return Atom(text, kind)
    raise ValueError(f"unknown atom {text!r}")


def parse_space(text: str | SpaceDescriptor) -> SpaceDescriptor:
    """Parse ``"S3 x S5"``-style descriptors; a single atom stays an :class:`Atom`."""
    if isinstance(text, (Atom, Product)):
        return text
    parts = [s.strip() for s in re.split(r"\s+x\s+|\s*×\s*", text.strip()) if s.strip()]
    if not parts:
        raise ValueError("empty space descriptor")
    atoms = tuple(_atom(p) for p in parts)
    return atoms[0] if len(atoms) == 1 else Product(atoms)


def poincare_data(space: str | SpaceDescriptor) -> PoincarePoly:
    """Z2 Poincaré polynomial of a descriptor."""
    return parse_space(space).poincare()
