"""Named representations used by the case manifest, with point literals.

Each model is a :class:`Model`: the representation, one literal *kind* per
summand (how a human-readable point such as ``"1;j;e"`` is turned into
coordinates), and named group elements (discrete isotropy candidates, finite
generating sets) given as orthogonal matrices on the whole space.
"""

from __future__ import annotations

import functools
import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import algebra as alg
from . import repbuilder as rb
from .repbuilder import LinearRepresentation

__all__ = ["Model", "MODELS", "get_model", "model_ids", "parse_point", "parse_summand"]

F7_NAMES = ("i", "j", "k", "e", "ie", "je", "ke")
F6_NAMES = ("j", "k", "e", "ie", "je", "ke")


@dataclass(frozen=True, eq=False)
class Model:
    rep: LinearRepresentation
    kinds: tuple[str, ...]
    elements: dict = field(default_factory=dict)
    notes: str = ""

    def __post_init__(self):
        if len(self.kinds) != len(self.rep.summands):
            raise ValueError("one literal kind per summand is required")

    def point(self, literal) -> np.ndarray:
        return parse_point(self, literal)

    def element(self, name: str) -> np.ndarray:
        try:
            g = self.elements[name]
        except KeyError:
            raise KeyError(f"model has no element {name!r}; known: {sorted(self.elements)}") from None
        return g() if callable(g) else g


# ---------------------------------------------------------------------------
# literals

_VEC_TERM = re.compile(r"([+-]?)(\d+(?:\.\d*)?(?:/\d+)?)?\*?(i\*?)?e(\d+)")


def _coef(text: str | None) -> float:
    return float(Fraction(text)) if text and "/" in text else float(text) if text else 1.0


def _basis_combination(text: str, n: int, base: int, complex_: bool) -> np.ndarray:
    text = text.replace(" ", "")
    if text in ("0", ""):
        return np.zeros(2 * n if complex_ else n)
    out = np.zeros(2 * n if complex_ else n)
    pos = 0
    while pos < len(text):
        m = _VEC_TERM.match(text, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse vector literal {text!r}")
        sign, coef, imag, idx = m.groups()
        k = int(idx) - base
        if not 0 <= k < n:
            raise ValueError(f"basis index e{idx} out of range in {text!r}")
        v = -_coef(coef) if sign == "-" else _coef(coef)
        if complex_:
            out[2 * k + (1 if imag else 0)] += v
        elif imag:
            raise ValueError(f"imaginary unit in a real vector literal {text!r}")
        else:
            out[k] += v
        pos = m.end()
    return out


def _pair(text: str) -> np.ndarray:
    m = re.fullmatch(r"\((.*),(.*)\)", text.replace(" ", ""))
    if m is None:
        raise ValueError(f"expected a pair '(x,y)', got {text!r}")
    return np.r_[alg.octonion(m[1]).coords, alg.octonion(m[2]).coords]


def _complex_scalar(text: str) -> np.ndarray:
    z = complex(text.replace(" ", "").replace("i", "j"))
    return np.array([z.real, z.imag])


def parse_summand(kind: str, text: str) -> np.ndarray:
    """Coordinates of one summand from its literal.

    Any kind accepts an explicit list ``[a, b, ...]``.  Named kinds:
    ``oct`` (octonion such as ``"1/2*i+je"``), ``im7``/``im6`` (octonion in the
    span of i..ke, resp. j..ke), ``quat``, ``cplx`` (``"1"``, ``"-0.5+0.3i"``),
    ``vecN``/``vecN_0`` (``"e1+2e3"``, indices from 1, resp. 0), ``cvecN``
    (``"e1 + i*e2"``), ``caca`` (``"(1,e)"``), ``caca_c`` (``"(1,0)+eps(e,1)"``)
    and ``symN`` (``"diag(1,2,-3)"``).
    """
    text = text.strip()
    if text.startswith("["):
        return np.array([float(Fraction(t.strip())) for t in text.strip("[]").split(",") if t.strip()])
    if kind == "oct":
        return alg.octonion(text).coords
    if kind in ("im7", "im6"):
        names = F7_NAMES if kind == "im7" else F6_NAMES
        v = alg.octonion(text).coords
        frame = rb.octonion_frame(names)
        c = frame.T @ v
        if np.linalg.norm(frame @ c - v) > 1e-12:
            raise ValueError(f"{text!r} is not in the span of {', '.join(names)}")
        return c
    if kind == "quat":
        v = alg.octonion(text).coords
        if np.abs(v[4:]).max() > 0:
            raise ValueError(f"{text!r} is not a quaternion")
        return v[:4]
    if kind == "cplx":
        return _complex_scalar(text)
    if kind == "caca":
        return _pair(text)
    if kind == "caca_c":
        m = re.fullmatch(r"(\(.*?\))?\+?(?:eps(\(.*\)))?", text.replace(" ", ""))
        if m is None or not (m[1] or m[2]):
            raise ValueError(f"cannot parse {text!r}; expected '(x,y)+eps(z,w)'")
        re_part = _pair(m[1]) if m[1] else np.zeros(16)
        im_part = _pair(m[2]) if m[2] else np.zeros(16)
        return np.r_[re_part, im_part]
    m = re.fullmatch(r"(c?)vec(\d+)(_0)?", kind)
    if m:
        return _basis_combination(text, int(m[2]), 0 if m[3] else 1, bool(m[1]))
    m = re.fullmatch(r"sym(\d+)", kind)
    if m:
        n = int(m[1])
        d = re.fullmatch(r"diag\((.*)\)", text.replace(" ", ""))
        if d is None:
            raise ValueError(f"expected 'diag(...)' for a symmetric matrix, got {text!r}")
        entries = [float(Fraction(t)) for t in d[1].split(",")]
        if len(entries) != n or abs(sum(entries)) > 1e-12:
            raise ValueError("a traceless diagonal with n entries is required")
        return _sym_frame(n).T @ np.diag(entries).reshape(-1)
    raise ValueError(f"unknown literal kind {kind!r}")


def parse_point(model: Model, literal) -> np.ndarray:
    """Point of the model's space from ``"lit1; lit2; ..."`` or a full numeric list.

    A bare ``0`` is the zero vector of its summand whatever the kind.
    """
    if not isinstance(literal, str):
        v = np.asarray(literal, dtype=float)
        if v.shape != (model.rep.d,):
            raise ValueError(f"expected {model.rep.d} coordinates, got shape {v.shape}")
        return v
    text = literal.strip()
    if text.startswith("[") and ";" not in text:
        return parse_point(model, [float(Fraction(t.strip())) for t in text.strip("[]").split(",") if t.strip()])
    parts = [t for t in text.split(";")]
    if len(parts) != len(model.kinds):
        raise ValueError(f"expected {len(model.kinds)} summand literals separated by ';', got {len(parts)}")
    out = []
    for (o, n, lbl), kind, part in zip(model.rep.summands, model.kinds, parts):
        v = np.zeros(n) if part.strip() == "0" else parse_summand(kind, part)
        if v.shape != (n,):
            raise ValueError(f"summand {lbl} needs {n} coordinates, literal {part!r} gave {v.size}")
        out.append(v)
    return np.concatenate(out)


# ---------------------------------------------------------------------------
# helpers


def _sym_frame(n: int) -> np.ndarray:
    """(n*n) x dim orthonormal frame of traceless symmetric n x n matrices."""
    cols = []
    for k in range(1, n):
        m = np.zeros((n, n))
        m[np.arange(k), np.arange(k)] = 1.0
        m[k, k] = -k
        cols.append(m.reshape(-1) / np.linalg.norm(m))
    for i, j in itertools.combinations(range(n), 2):
        m = np.zeros((n, n))
        m[i, j] = m[j, i] = 1.0
        cols.append(m.reshape(-1) / np.sqrt(2))
    return np.array(cols).T


def _conjugation_on_frame(mats: np.ndarray, frame: np.ndarray) -> np.ndarray:
    """Matrices of ``S -> X S - S X`` in the coordinates of an orthonormal frame of matrices."""
    n = mats.shape[1]
    F = frame.T.reshape(-1, n, n)
    br = np.einsum("aij,kjl->akil", mats, F) - np.einsum("kij,ajl->akil", F, mats)
    return np.einsum("lij,akij->alk", F, br)


def _block(*mats) -> np.ndarray:
    d = sum(m.shape[0] for m in mats)
    out = np.zeros((d, d))
    o = 0
    for m in mats:
        n = m.shape[0]
        out[o : o + n, o : o + n] = m
        o += n
    return out


def _oct_diag(*signs) -> np.ndarray:
    """Diagonal sign matrix on Ca in Cayley-Dickson coordinates."""
    return np.diag(np.asarray(signs, dtype=float))


def _spin8_element(rep_parts, triple) -> np.ndarray:
    """Block action of a triality triple ``(A, B, C)`` on a reslotted sum."""
    blocks = []
    for slot, frame in rep_parts:
        g = triple[slot]
        blocks.append(g if frame is None else frame.T @ g @ frame)
    return _block(*blocks)


def _reslot_model(sub, parts, kinds, elements=None, notes="") -> Model:
    rep = sub.reslot([(s, f, lbl) for s, f, lbl in parts])
    els = {}
    for name, triple in (elements or {}).items():
        els[name] = _spin8_element([(s, f) for s, f, _ in parts], triple)
    return Model(rep, tuple(kinds), els, notes)


@functools.lru_cache(maxsize=None)
def _s(kind: str) -> LinearRepresentation:
    if kind == "8":
        return rb.spin_subalgebra()
    if kind == "7":
        return rb.spin_subalgebra(["1"])
    if kind == "6":
        return rb.spin_subalgebra(["1", "i"])
    raise KeyError(kind)


def _F7():
    return rb.octonion_frame(F7_NAMES)


def _F6():
    return rb.octonion_frame(F6_NAMES)


# sigma: e -> -e fixing H; the Z2 generator of the finite group L in the
# three-summand Spin(7) and four-summand Spin(8) reductions
_SIGMA = _oct_diag(1, 1, 1, 1, -1, -1, -1, -1)
# diagonal +-1 elements of SU(3) fixing 1, on C<1, j, e, ke> with complex structure l_i
_D1 = _oct_diag(1, 1, -1, -1, -1, -1, 1, 1)
_D2 = _oct_diag(1, 1, -1, -1, 1, 1, -1, -1)


# ---------------------------------------------------------------------------
# builders


def _torus_t2():
    return Model(rb.torus_rep([[1, 0], [0, 1], [1, 1]]), ("cplx",) * 3)


def _sp1sp1_h3():
    rep = rb.quaternion_product_rep(["sp1", "sp1"], [(0, None), (None, 1, True), (0, 1, True)])
    return Model(rep, ("quat",) * 3)


def _sp1cube_w():
    rep = rb.quaternion_product_rep(["sp1"] * 3, [(0, 1), (0, 2), (1, 2)])
    return Model(rep, ("quat",) * 3)


def _classical_copies(family: str, n: int, k: int):
    def build():
        base = rb.classical_basis(family, n)
        kind = {"so": f"vec{n}", "su": f"cvec{n}", "sp": "quat" if n == 1 else f"vec{4 * n}"}[family]
        return Model(rb.direct_sum([base] * k), (kind,) * k)

    return build


def _so3_s20_r3():
    so3 = rb.classical_basis("so", 3)
    frame = _sym_frame(3)
    sym = LinearRepresentation("so-3", _conjugation_on_frame(so3.basis, frame), [(0, 5, "S2_0R3")])
    rep = rb.direct_sum([sym, so3])

    def diag_element(signs):
        g = np.diag(signs).astype(float)
        F = frame.T.reshape(-1, 3, 3)
        act = np.einsum("lij,kij->lk", F, np.einsum("ij,kjl,ml->kim", g, F, g))
        return _block(act, g)

    els = {"d1": diag_element([1, -1, -1]), "d2": diag_element([-1, 1, -1])}
    return Model(rep, ("sym3", "vec3"), els)


def _su2_c2_r3():
    su2 = rb.classical_basis("su", 2)
    return Model(rb.direct_sum([su2, rb.adjoint_rep(su2, su2.group_label)]), ("cvec2", "vec3"))


def _su3_adj_c3():
    su3 = rb.classical_basis("su", 3)
    return Model(rb.direct_sum([rb.adjoint_rep(su3, su3.group_label), su3]), ("vec8", "cvec3"))


def _quaternion_hermitian_traceless() -> np.ndarray:
    """Frame (64 x 5) of traceless quaternion-Hermitian 2 x 2 matrices acting on H^2."""
    cols = []
    diag = np.zeros((2, 2, 4))
    diag[0, 0, 0], diag[1, 1, 0] = 1.0, -1.0
    cols.append(rb._quat_block_matrix(diag))
    for unit in range(4):
        q = np.zeros((2, 2, 4))
        q[0, 1, unit] = 1.0
        q[1, 0, unit] = 1.0 if unit == 0 else -1.0
        cols.append(rb._quat_block_matrix(q))
    mats = np.array(cols)
    return (mats / np.linalg.norm(mats.reshape(5, -1), axis=1)[:, None, None]).reshape(5, -1).T


def _sp2_c4_r5():
    sp2 = rb.classical_basis("sp", 2)
    frame = _quaternion_hermitian_traceless()
    r5 = LinearRepresentation("sp-2", _conjugation_on_frame(sp2.basis, frame), [(0, 5, "R5")])
    return Model(rb.direct_sum([sp2, r5]), ("vec8", "vec5"))


def _g2(k: int):
    def build():
        r7 = rb.g2_basis().compress(_F7(), summands=[(0, 7, "R7")])
        return Model(rb.direct_sum([r7] * k), ("im7",) * k)

    return build


def _spin7(pattern: str):
    def build():
        parts, kinds = [], []
        for ch in pattern:
            if ch == "7":
                parts.append((0, _F7(), "R7"))
                kinds.append("im7")
            else:
                parts.append((1, None, "R8"))
                kinds.append("oct")
        sigma = (_SIGMA, _SIGMA, _SIGMA)
        return _reslot_model(_s("7"), parts, kinds, {"sigma": sigma})

    return build


def _spin6(pattern: str):
    def build():
        parts, kinds = [], []
        for ch in pattern:
            if ch == "6":
                parts.append((0, _F6(), "R6"))
                kinds.append("im6")
            else:
                parts.append((1, None, "C4"))
                kinds.append("oct")
        return _reslot_model(_s("6"), parts, kinds)

    return build


def _spin8(pattern: str):
    slot = {"0": 0, "+": 1, "-": 2}

    def build():
        parts = [(slot[ch], None, rb.TRIALITY_SLOTS[slot[ch]]) for ch in pattern]
        els = {"sigma": (_SIGMA, _SIGMA, _SIGMA), "d1": (_D1, _D1, _D1), "d2": (_D2, _D2, _D2)}
        return _reslot_model(_s("8"), parts, ("oct",) * len(pattern), els)

    return build


def _delta9_diag(a) -> np.ndarray:
    """Element of the SU(3) isotropy with A = diag(a), B = 0, on Ca + Ca in CD coordinates."""
    d9 = np.r_[1.0, 1.0, a, a]  # spin(9)-basis ordering 1, e, i, j, k, ei, ej, ek
    P = alg.SPIN9_TO_CD
    one = P @ np.diag(d9) @ P.T
    return _block(one, one)


def _spin9(pattern: str):
    def build():
        reps, kinds = [], []
        for ch in pattern.split(","):
            if ch == "9":
                reps.append(rb.spin9_vector_rep())
                kinds.append("vec9_0")
            else:
                reps.append(rb.spin9_rep())
                kinds.append("caca")
        rep = rb.direct_sum(reps)
        els = {}
        if pattern == "16,16":
            for name, a in (("l1", [1, -1, -1]), ("l2", [-1, 1, -1])):
                g = _delta9_diag(a)
                els[name] = _block(g, g)
        return Model(rep, tuple(kinds), els)

    return build


def _clifford10_element(blade, signs) -> np.ndarray:
    g = alg.clifford_blade(tuple(blade), 10, -1, 0)
    blocks = []
    for s in signs:
        blocks.append(rb.clifford_conjugation(g) if s == 0 else rb.delta10_matrix(g, s))
    return _block(*blocks)


def _spin10(pattern: str):
    def build():
        reps, kinds, signs = [], [], []
        for ch in pattern.split(","):
            if ch == "10":
                reps.append(rb.spin10_vector_rep())
                kinds.append("vec10_0")
                signs.append(0)
            else:
                sign = ch[-1]
                reps.append(rb.spin10_halfspin(sign))
                kinds.append("caca_c")
                signs.append(1 if sign == "+" else -1)
        rep = rb.direct_sum(reps)
        els = {
            "omega6": functools.partial(_clifford10_element, (3, 4, 5, 6, 7, 8), signs),
            "e1e5e7e6": functools.partial(_clifford10_element, (1, 5, 7, 6), signs),
        }
        return Model(rep, tuple(kinds), els)

    return build


def _spin10_model():
    rep = rb.quaternion_product_rep(["j", "sp1", "sp1"], [(1, 0, True), (2, 0, False), (1, 2, True)])
    return Model(rep, ("quat",) * 3, notes="U1 x Sp1 x Sp1 on H + H + H")


def _spin16():
    rep = rb.direct_sum([rb.spin16_halfspin(), rb.spin16_vector_rep()])
    els = {}
    for name, blade in (("e0-e7", tuple(range(8))), ("e0-e3e8-e11", (0, 1, 2, 3, 8, 9, 10, 11))):
        els[name] = functools.partial(lambda b: _block(rb.spin16_blade(b), rb.spin16_vector_blade(b)), blade)
    return Model(rep, ("vec128", "vec16"), els)


def _f4():
    f4 = rb.f4_rep()
    return Model(rb.direct_sum([f4, f4]), ("vec26", "vec26"), notes="coordinates in the traceless Jordan frame")


MODELS: dict[str, Callable[[], Model]] = {
    "torus-t2-c3": _torus_t2,
    "sp1sp1-h3": _sp1sp1_h3,
    "sp1cube-w": _sp1cube_w,
    "so3-r3r3": _classical_copies("so", 3, 2),
    "so4-r4r4": _classical_copies("so", 4, 2),
    "sp1-h1h1": _classical_copies("sp", 1, 2),
    "su3-c3c3": _classical_copies("su", 3, 2),
    "su3-c3c3c3": _classical_copies("su", 3, 3),
    "so3-s20r3-r3": _so3_s20_r3,
    "su2-c2-r3": _su2_c2_r3,
    "su3-adj-c3": _su3_adj_c3,
    "sp2-c4-r5": _sp2_c4_r5,
    "g2-r7r7": _g2(2),
    "g2-r7r7r7": _g2(3),
    "spin6-r6c4": _spin6("6c"),
    "spin6-c4c4r6": _spin6("cc6"),
    "spin6-c4r6r6": _spin6("c66"),
    "spin7-r8r8": _spin7("88"),
    "spin7-r7r8": _spin7("78"),
    "spin7-r8r8r8": _spin7("888"),
    "spin7-r7r7r8": _spin7("778"),
    "spin7-r7r8r8": _spin7("788"),
    "spin7-r7r8r7r8": _spin7("7878"),
    "spin8-0+": _spin8("0+"),
    "spin8-00+": _spin8("00+"),
    "spin8-0+-": _spin8("0+-"),
    "spin8-000+": _spin8("000+"),
    "spin8-00++": _spin8("00++"),
    "spin8-00+-": _spin8("00+-"),
    "spin8-0000+": _spin8("0000+"),
    "spin9-r16r16": _spin9("16,16"),
    "spin9-r9r16": _spin9("9,16"),
    "spin9-r16r16r16": _spin9("16,16,16"),
    "spin10-r10c16": _spin10("10,16+"),
    "spin10-c16c16++": _spin10("16+,16+"),
    "spin10-c16c16+-": _spin10("16+,16-"),
    "spin10-reduced-model": _spin10_model,
    "spin16-r128r16": _spin16,
    "f4-r26r26": _f4,
}


def model_ids() -> list[str]:
    return sorted(MODELS)


@functools.lru_cache(maxsize=None)
def get_model(model_id: str) -> Model:
    try:
        builder = MODELS[model_id]
    except KeyError:
        raise KeyError(f"unknown representation id {model_id!r}") from None
    return builder()
