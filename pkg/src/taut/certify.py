"""Case registry, tautness certificates and report emission.

The registry (``data/cases.yaml``) lists one entry per representation with the
certificate operation that decides it, the base point, expected integers and
the verdict that the case is expected to produce.  ``run_case`` dispatches an
entry to its operation; ``run_all`` runs every entry and ``emit_report``
writes JSON or CSV.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Callable

import numpy as np
import yaml

from . import algebra as alg
from . import catalog
from . import repbuilder as rb
from .models import Model, get_model
from .morse import ACCEPT_RESIDUAL, HeightSpec, find_critical_set, generic_morse_count
from .orbit import orbit_chart, substantial_span
from .reduction import (
    find_intertwiner,
    in_span,
    null_space,
    orbit_distance,
    reduce_at,
    restriction_decomposition,
    slice_decomposition,
    standard_su2_basis,
    weight_ratio,
)
from .repbuilder import LinearRepresentation

__all__ = [
    "VERDICTS",
    "EXIT_MATCH",
    "EXIT_MISMATCH",
    "EXIT_INCONCLUSIVE",
    "CaseSpec",
    "TautnessCertificate",
    "load_registry",
    "case_seed",
    "run_case",
    "run_all",
    "emit_report",
    "exit_code",
    "certify_betti_mismatch",
    "certify_disconnected_isotropy",
    "certify_b1_torus",
    "certify_sphere_codim",
    "certify_taut_consistency",
    "certify_cited_theory",
    "certify_deferred",
    "certify_subsum",
    "certify_doubled_reduced_count",
    "MASTER_SEED",
]

log = logging.getLogger(__name__)

OBSTRUCTION = "obstruction-found"
CONSISTENT = "consistent"
CITED = "cited-theory"
INCONCLUSIVE = "inconclusive"
VERDICTS = (OBSTRUCTION, CONSISTENT, CITED, INCONCLUSIVE)

EXIT_MATCH, EXIT_MISMATCH, EXIT_INCONCLUSIVE = 0, 2, 3

MASTER_SEED = 20240611
MIN_TRIALS = 20
FIX_TOL = 1e-9
ORBIT_SEPARATION = 1e-4


# ---------------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class CaseSpec:
    id: str
    model: str
    op: str
    expected_verdict: str
    taut: bool
    title: str = ""
    point: object = None
    orbit: str | None = None
    starts: int | None = None
    params: dict = field(default_factory=dict)
    expected: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.op not in OPS:
            raise ValueError(f"case {self.id}: unknown certificate op {self.op!r}")
        if self.expected_verdict not in VERDICTS[:3]:
            raise ValueError(f"case {self.id}: bad expected verdict {self.expected_verdict!r}")
        if self.taut != (self.expected_verdict == CONSISTENT):
            raise ValueError(f"case {self.id}: taut rows certify consistent, all others do not")

    @classmethod
    def from_dict(cls, d: dict) -> "CaseSpec":
        d = dict(d)
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"case {d.get('id')}: unknown keys {sorted(unknown)}")
        return cls(**d)


def _registry_text(path: str | os.PathLike | None) -> str:
    if path is not None:
        return Path(path).read_text()
    return resources.files("taut").joinpath("data/cases.yaml").read_text()


_REGISTRY_CACHE: dict = {}


def load_registry(path: str | os.PathLike | None = None) -> dict[str, CaseSpec]:
    """Registered cases by id, in manifest order."""
    key = None if path is None else str(path)
    if key not in _REGISTRY_CACHE:
        data = yaml.safe_load(_registry_text(path))
        cases = {}
        for entry in data["cases"]:
            spec = CaseSpec.from_dict(entry)
            if spec.id in cases:
                raise ValueError(f"duplicate case id {spec.id}")
            cases[spec.id] = spec
        _REGISTRY_CACHE[key] = cases
    return _REGISTRY_CACHE[key]


def case_seed(master: int, case_id: str) -> int:
    """Per-case seed from the master seed; independent of execution order."""
    h = hashlib.sha256(f"{int(master)}:{case_id}".encode()).digest()
    return int.from_bytes(h[:4], "little")


# ---------------------------------------------------------------------------
# certificate


@dataclass
class TautnessCertificate:
    case_id: str
    verdict: str
    expected: dict
    evidence: dict
    seed: int
    tolerances: dict
    runtime_ms: float = 0.0
    diagnostics: list = field(default_factory=list)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if self.verdict == OBSTRUCTION and not self.evidence.get("inequality"):
            raise ValueError("an obstruction needs a strict numeric inequality in its evidence")

    @property
    def matches(self) -> bool:
        return self.verdict == self.expected.get("verdict")

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "case": self.case_id,
            "verdict": self.verdict,
            "expected": _jsonable(self.expected),
            "evidence": _jsonable(self.evidence),
            "seed": int(self.seed),
            "tolerances": _jsonable(self.tolerances),
            "diagnostics": list(self.diagnostics),
        }
        if timing:
            out["runtime_ms"] = round(float(self.runtime_ms), 1)
        return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if v == 0 or abs(v) >= 1e-300 else 0.0
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    return obj


@dataclass(frozen=True)
class RunOptions:
    seed: int
    starts: int | None = None
    tol: float = ACCEPT_RESIDUAL


def _inequality(lhs: int, rhs: int, what: str) -> dict | None:
    return {"lhs": int(lhs), "rhs": int(rhs), "relation": ">", "meaning": what} if lhs > rhs else None


def _catalog_total(descriptor: str) -> tuple[int, str]:
    poly = catalog.poincare_data(descriptor)
    return poly.total, str(poly)


# ---------------------------------------------------------------------------
# shared pieces


def _point(model: Model, literal) -> np.ndarray:
    if isinstance(literal, dict) and "random" in literal:
        g = np.random.default_rng(int(literal["random"]))
        return g.normal(size=model.rep.d)
    return model.point(literal)


def _summand_point(model: Model, spec, summand: int) -> np.ndarray:
    """Point supported on one summand: a literal for that summand or a seeded random vector."""
    sl = model.rep.summand_slice(summand)
    out = np.zeros(model.rep.d)
    if isinstance(spec, dict) and "random" in spec:
        out[sl] = np.random.default_rng(int(spec["random"])).normal(size=sl.stop - sl.start)
        return out
    parsed = model.point(spec)
    if np.abs(np.delete(parsed, np.arange(sl.start, sl.stop))).max(initial=0.0) > 0:
        raise ValueError(f"point {spec!r} is not supported on summand {summand}")
    return parsed


def _target(spec: CaseSpec, model: Model):
    """Representation, base point and reduction data (if any) a case's search runs on."""
    p = _point(model, spec.point)
    red_params = spec.params.get("reduce")
    if red_params is None:
        return model.rep, p, None
    lgen = [model.element(n) for n in red_params.get("l_generators", [])]
    red = reduce_at(model.rep, p, l_generators=lgen)
    if red.reduced_rep is None:
        raise ValueError("empty fixed subspace")
    return red.reduced_rep, red.to_coords(p), red


def _reduction_evidence(red, spec: CaseSpec) -> dict:
    ev = red.report(spec.id)
    ev.update(red.diagnostics)
    want = spec.expected.get("reduction")
    if want:
        got = {"dim_VH": ev["dim_VH"], "dim_Nbar": ev["dim_Nbar"], "cohomogeneity": ev["cohomogeneity"]}
        ev["matches_expected"] = got == {k: want[k] for k in got}
    lc = red.diagnostics.get("l_check")
    if lc is not None:
        ev["l_check_passed"] = bool(lc["VL_equals_VH"] and lc["squares_central"] and lc["generators_fix_base_point"])
    return ev


def _reduction_problems(ev: dict | None) -> list[str]:
    if ev is None:
        return []
    out = []
    if ev.get("matches_expected") is False:
        out.append("reduction integers differ from the registered values")
    if ev.get("l_check_passed") is False:
        out.append("finite group L does not reproduce V^H")
    return out


def _tag_rules(spec: CaseSpec) -> dict:
    return {int(k): v for k, v in spec.params.get("tag_rules", {}).items()}


def _height_vector(spec: CaseSpec, model: Model, red, x: np.ndarray) -> np.ndarray:
    q = spec.params.get("q")
    if q is None:
        return x
    if isinstance(q, dict) and "random" in q:
        return np.random.default_rng(int(q["random"])).normal(size=x.size)
    full = model.point(q)
    return full if red is None else red.to_coords(full)


def _weights_evidence(spec: CaseSpec, model: Model, red) -> dict | None:
    w = spec.params.get("weights")
    if w is None:
        return None
    if w["generators"] == "nbar":
        gens = red.normalizer_basis
    else:
        gens = np.array([model.rep.element(np.asarray(c, dtype=float)) for c in w["generators"]])
    planes = [(model.point(a), model.point(b)) for a, b in w["planes"]]
    got = weight_ratio(gens if len(gens) > 1 else gens[0], planes)
    fmt = [str(v) if not isinstance(v, tuple) else [str(t) for t in v] for v in got]
    return {"ratios": fmt, "expected": w["expected"], "matches": fmt == w["expected"]}


# ---------------------------------------------------------------------------
# operations


def certify_betti_mismatch(spec: CaseSpec, opts: RunOptions) -> tuple[str, dict, list]:
    """Critical-set Betti sum of one height function against the orbit's Betti sum."""
    model = get_model(spec.model)
    rep, x, red = _target(spec, model)
    q = _height_vector(spec, model, red, x)
    starts = opts.starts or spec.starts
    inv = find_critical_set(rep, x, HeightSpec(q), starts=starts, seed=opts.seed, tag_rules=_tag_rules(spec), tol=opts.tol)
    total, poly = _catalog_total(spec.orbit)
    found = inv.total_betti_sum
    ev: dict = {
        "inventory": {
            "count_by_dim": inv.count_by_dim(),
            "signature": [list(t) for t in inv.signature()],
            "betti_tags": [c.betti_tag for c in inv.components],
            "total_betti_sum": found,
            "stats": inv.search_stats,
        },
        "orbit": {"descriptor": spec.orbit, "poincare": poly, "betti_total": total},
    }
    diags = []
    if red is not None:
        ev["reduction"] = _reduction_evidence(red, spec)
        diags += _reduction_problems(ev["reduction"])
    wev = _weights_evidence(spec, model, red)
    if wev is not None:
        ev["weights"] = wev
        if not wev["matches"]:
            diags.append("rotation-speed ratios differ from the registered values")
    want = spec.expected.get("components")
    if want is not None and {int(k): v for k, v in want.items()} != inv.count_by_dim():
        diags.append(f"inventory {inv.count_by_dim()} differs from registered {want}; verdict withheld")
    if found is None:
        diags.append("a critical component could not be identified")
    if any(not c.verified for c in inv.components):
        diags.append("a component failed local dimension verification")
    if diags or found is None:
        return INCONCLUSIVE, ev, diags
    ineq = _inequality(found, total, "critical-set Betti sum exceeds orbit Betti sum")
    if ineq is None:
        return INCONCLUSIVE, ev, ["height function is perfect here; no obstruction from this direction"]
    ev["inequality"] = ineq
    return OBSTRUCTION, ev, diags


def _common_fixed_space(mats, sl: slice) -> np.ndarray:
    F = np.eye(sl.stop - sl.start)
    for g in mats:
        gr = F.T @ g[sl, sl] @ F
        w, V = np.linalg.eigh((gr + gr.T) / 2)
        F = F @ V[:, w > 0.5]
    return F


def certify_disconnected_isotropy(spec: CaseSpec, opts: RunOptions) -> tuple[str, dict, list]:
    """A discrete isotropy element at v1 that moves v2 off the identity-component orbit."""
    model = get_model(spec.model)
    rep = model.rep
    prm = spec.params
    s1, s2 = prm.get("summands", [0, 1])
    names = prm["candidates"]
    cands = [model.element(n) for n in names]
    sl1, sl2 = rep.summand_slice(s1), rep.summand_slice(s2)
    v1 = np.zeros(rep.d)
    if isinstance(spec.point, dict) and "fixed_by" in spec.point:
        F = _common_fixed_space([model.element(n) for n in spec.point["fixed_by"]], sl1)
        v1[sl1] = F @ np.random.default_rng(int(spec.point.get("seed", 0))).normal(size=F.shape[1])
        v1 /= np.linalg.norm(v1)
    else:
        v1 = _summand_point(model, spec.point, s1)
    chart = orbit_chart(rep, v1)
    fix = [float(np.linalg.norm(g @ v1 - v1)) for g in cands]
    ev: dict = {
        "probe": {
            "v1_orbit_dim": chart.orbit_dim,
            "v1_isotropy_dim": chart.isotropy_dim,
            "candidates": names,
            "candidate_fix_residuals": fix,
        }
    }
    want = spec.expected.get("v1_isotropy_dim")
    diags = []
    if want is not None and want != chart.isotropy_dim:
        diags.append(f"isotropy dimension {chart.isotropy_dim} at v1 differs from registered {want}")
    if max(fix) > FIX_TOL:
        diags.append("a candidate does not fix v1")
    if diags:
        return INCONCLUSIVE, ev, diags
    iso_rep = None
    if chart.isotropy_dim:
        iso_rep = LinearRepresentation(rep.group_label + "-iso", chart.isotropy_basis[:, sl2, sl2], [(0, sl2.stop - sl2.start, "V2")])
    rng = np.random.default_rng(opts.seed)
    samples = int(prm.get("v2_samples", 6))
    for n in range(samples):
        v2 = rng.normal(size=sl2.stop - sl2.start)
        v2 /= np.linalg.norm(v2)
        for name, g in zip(names, cands):
            gv2 = g[sl2, sl2] @ v2
            move = float(np.linalg.norm(gv2 - v2))
            if move < ORBIT_SEPARATION:
                continue
            dist = move if iso_rep is None else orbit_distance(iso_rep, v2, gv2, seed=opts.seed)
            if dist < ORBIT_SEPARATION:
                continue
            ev["probe"].update(
                {
                    "v2_sample": n,
                    "element": name,
                    "displacement": move,
                    "distance_to_identity_component_orbit": dist,
                    "components_lower_bound": 2,
                }
            )
            ev["inequality"] = _inequality(2, 1, "components of the isotropy orbit G_v1 v2")
            return OBSTRUCTION, ev, []
    return INCONCLUSIVE, ev, [f"all {samples} sampled v2 stay on one component; no obstruction found"]


def certify_b1_torus(spec: CaseSpec, opts: RunOptions) -> tuple[str, dict, list]:
    """First Betti number of a torus isotropy orbit against the bound from the centre."""
    model = get_model(spec.model)
    rep = model.rep
    s1, s2 = spec.params.get("summands", [0, 1])
    v1 = _summand_point(model, spec.point, s1)
    chart = orbit_chart(rep, v1)
    T = chart.isotropy_basis
    abelian = float(max((np.abs(a @ b - b @ a).max() for a in T for b in T), default=0.0))
    v2 = _summand_point(model, spec.params["v2"], s2)
    sl2 = rep.summand_slice(s2)
    act = np.einsum("rij,j->ir", T[:, sl2, sl2], v2[sl2])
    sv = np.linalg.svd(act, compute_uv=False)
    torus_orbit_dim = int(np.sum(sv > 1e-8 * max(1.0, sv.max(initial=0.0))))
    bound = int(spec.params["center_b1_bound"])
    ev = {
        "probe": {
            "v1_isotropy_dim": chart.isotropy_dim,
            "isotropy_commutator_max": abelian,
            "torus_orbit_dim": torus_orbit_dim,
            "b1_isotropy_orbit": torus_orbit_dim,
            "b1_bound_total_orbit": bound,
        }
    }
    diags = []
    rank = spec.expected.get("rank")
    if rank is not None and chart.isotropy_dim != rank:
        diags.append(f"isotropy at v1 has dimension {chart.isotropy_dim}, not the rank {rank}")
    if abelian > 1e-9:
        diags.append("isotropy algebra at v1 is not abelian")
    if torus_orbit_dim != chart.isotropy_dim:
        diags.append("v2 is not regular for the torus")
    if diags:
        return INCONCLUSIVE, ev, diags
    ineq = _inequality(torus_orbit_dim, bound, "b1 of the torus orbit G_v1 v2 exceeds the bound for b1 of G(v1, v2)")
    if ineq is None:
        return INCONCLUSIVE, ev, ["b1 within the bound"]
    ev["inequality"] = ineq
    return OBSTRUCTION, ev, []


def certify_sphere_codim(spec: CaseSpec, opts: RunOptions) -> tuple[str, dict, list]:
    """An orbit diffeomorphic to a sphere must have substantial codimension one in its sphere."""
    model = get_model(spec.model)
    rep = model.rep
    p = _point(model, spec.point)
    chart = orbit_chart(rep, p)
    span = substantial_span(rep, p, seed=opts.seed)
    sphere_dim = catalog.parse_space(spec.orbit).poincare().top_degree
    ev = {
        "span": {
            "orbit_dim": chart.orbit_dim,
            "isotropy_dim": chart.isotropy_dim,
            "substantial_span": span,
            "codim_in_sphere": span - 1 - chart.orbit_dim,
            "sphere": spec.orbit,
        }
    }
    diags = []
    if chart.isotropy_dim != 0 or chart.orbit_dim != sphere_dim or rep.group_dim != sphere_dim:
        diags.append("orbit is not a copy of the group sphere")
    for key in ("span", "orbit_dim"):
        want = spec.expected.get(key)
        got = span if key == "span" else chart.orbit_dim
        if want is not None and want != got:
            diags.append(f"{key} {got} differs from registered {want}")
    if diags:
        return INCONCLUSIVE, ev, diags
    codim = span - 1 - chart.orbit_dim
    ineq = _inequality(codim, 1, "substantial codimension of a sphere orbit in its sphere")
    if ineq is None:
        return CONSISTENT, ev, []
    ev["inequality"] = ineq
    return OBSTRUCTION, ev, []


def certify_taut_consistency(spec: CaseSpec, opts: RunOptions) -> tuple[str, dict, list]:
    """Generic Morse counts of height functions against the catalog Betti sum."""
    model = get_model(spec.model)
    rep, x, red = _target(spec, model)
    trials = int(spec.params.get("trials", MIN_TRIALS))
    if trials < MIN_TRIALS:
        raise ValueError(f"case {spec.id}: at least {MIN_TRIALS} directions are required")
    counts = generic_morse_count(rep, x, trials, seed=opts.seed, starts=opts.starts or spec.starts, tol=opts.tol)
    total, poly = _catalog_total(spec.orbit)
    ns = [n for _, n in counts]
    ev: dict = {
        "inventory": {"generic_counts": ns, "directions": len(ns)},
        "orbit": {"descriptor": spec.orbit, "poincare": poly, "betti_total": total},
    }
    diags = []
    if red is not None:
        ev["reduction"] = _reduction_evidence(red, spec)
        diags += _reduction_problems(ev["reduction"])
    fac = spec.params.get("factorization")
    if fac is not None:
        prod = catalog.poincare_data(f"{fac['orbit_v1']} x {fac['isotropy_orbit']}")
        ok = prod == catalog.poincare_data(spec.orbit)
        ev["factorization"] = {**fac, "product": str(prod), "holds": ok}
        if not ok:
            diags.append("Poincaré polynomial does not factor as registered")
    if max(ns, default=0) > total:
        ev["inequality"] = _inequality(max(ns), total, "critical points of a nondegenerate height function exceed the orbit Betti sum")
        return OBSTRUCTION, ev, diags + ["a registered taut row produced an excess count"]
    if len(ns) < MIN_TRIALS:
        diags.append(f"only {len(ns)} nondegenerate directions")
    if any(n != total for n in ns):
        diags.append("some counts fall short of the Betti sum (missed critical points)")
    if diags:
        return INCONCLUSIVE, ev, diags
    return CONSISTENT, ev, []


def certify_cited_theory(spec: CaseSpec, opts: RunOptions) -> tuple[str, dict, list]:
    """Verify the computable preconditions of a case whose last step is an external theorem."""
    model = get_model(spec.model)
    rep = model.rep
    p = _point(model, spec.point)
    chart = orbit_chart(rep, p)
    span = substantial_span(rep, p, seed=opts.seed)
    total, poly = _catalog_total(spec.orbit)
    got = {
        "orbit_dim": chart.orbit_dim,
        "isotropy_dim": chart.isotropy_dim,
        "span": span,
        "codim_in_sphere": span - 1 - chart.orbit_dim,
        "betti_total": total,
    }
    ev = {"span": got, "orbit": {"descriptor": spec.orbit, "poincare": poly}, "cites": spec.params.get("cites")}
    diags = [f"{k} {got[k]} differs from registered {v}" for k, v in spec.expected.items() if k in got and got[k] != v]
    if diags:
        return INCONCLUSIVE, ev, diags
    return CITED, ev, []


def _clusters(dec) -> dict:
    trivial = sum(n for v, n in dec if v == 0.0)
    return {"trivial": trivial, "nontrivial": sorted(n for v, n in dec if v != 0.0)}


def certify_deferred(spec: CaseSpec, opts: RunOptions) -> tuple[str, dict, list]:
    """Slice or isotropy-restriction decomposition matching a registered non-taut case."""
    model = get_model(spec.model)
    p = _point(model, spec.point)
    mode = spec.params["mode"]
    chart = orbit_chart(model.rep, p)
    if mode == "slice":
        dec = slice_decomposition(model.rep, p)
    elif mode == "restriction":
        dec = restriction_decomposition(model.rep, p, int(spec.params["summand"]))
    else:
        raise ValueError(f"case {spec.id}: unknown mode {mode!r}")
    got = _clusters(dec)
    target = spec.params["defers_to"]
    reg = load_registry()
    ev = {
        "reduction": {
            "mode": mode,
            "isotropy_dim": chart.isotropy_dim,
            "casimir_clusters": [[v, n] for v, n in dec],
            "decomposition": got,
            "defers_to": target,
            "target_expected_verdict": reg[target].expected_verdict if target in reg else None,
        }
    }
    diags = []
    want_iso = spec.expected.get("isotropy_dim")
    if want_iso is not None and want_iso != chart.isotropy_dim:
        diags.append(f"isotropy dimension {chart.isotropy_dim} differs from registered {want_iso}")
    want = spec.expected.get("decomposition")
    if want is not None and {"trivial": want["trivial"], "nontrivial": sorted(want["nontrivial"])} != got:
        diags.append(f"decomposition {got} differs from registered {want}")
    if target not in reg or reg[target].expected_verdict == CONSISTENT:
        diags.append(f"deferred case {target} is not a registered elimination")
    if diags:
        return INCONCLUSIVE, ev, diags
    return CITED, ev, []


def certify_subsum(spec: CaseSpec, opts: RunOptions) -> tuple[str, dict, list]:
    """A sub-sum of summands is literally another registered non-taut representation."""
    model = get_model(spec.model)
    target = spec.params["contains"]
    reg = load_registry()
    sub_spec = reg[target]
    sub = get_model(sub_spec.model)
    idx = spec.params["summands"]
    slices = [model.rep.summand_slice(i) for i in idx]
    rows = np.concatenate([np.arange(s.start, s.stop) for s in slices])
    block = model.rep.basis[:, rows][:, :, rows]
    same = block.shape == sub.rep.basis.shape and float(np.abs(block - sub.rep.basis).max()) < 1e-12
    ev: dict = {"reduction": {"contains": target, "summands": idx, "identical_block": same}}
    if not same:
        return INCONCLUSIVE, ev, ["selected summands do not reproduce the contained representation"]
    inner = run_case(target, seed=opts.seed, starts=opts.starts, tol=opts.tol)
    ev["reduction"]["contained_verdict"] = inner.verdict
    if inner.verdict != OBSTRUCTION:
        return INCONCLUSIVE, ev, [f"contained case {target} did not certify an obstruction"]
    ev["inequality"] = inner.evidence["inequality"]
    return OBSTRUCTION, ev, []


def _bivector_coeffs(terms) -> np.ndarray:
    x = None
    for (i, j), c in terms:
        b = alg.clifford_blade((i, j), 10, -1, 0)
        b = b if c > 0 else -b
        x = b if x is None else x + b
    return rb.spin_coeffs(x)


def certify_doubled_reduced_count(spec: CaseSpec, opts: RunOptions) -> tuple[str, dict, list]:
    """Critical sums on two components of a disconnected reduced orbit, added up."""
    model = get_model(spec.model)
    rep = model.rep
    prm = spec.params
    p = _point(model, spec.point)
    red = reduce_at(rep, p)
    F = red.fixed_basis
    ev: dict = {"reduction": _reduction_evidence(red, spec)}
    diags = _reduction_problems(ev["reduction"])
    comp = lambda coef: F.T @ rep.element(coef) @ F  # noqa: E731
    spans = [np.array([_bivector_coeffs(t) for t in s]) for s in prm["su2_spans"]]
    in_n = all(in_span(rep, c, red.normalizer_coeffs) for s in spans for c in s)
    A = [standard_su2_basis(np.array([comp(c) for c in s])) for s in spans]
    red_basis = red.reduced_rep.basis
    k = red_basis.shape[0]
    rows = np.concatenate(
        [(np.einsum("aij,jk->aik", red_basis, Y) - np.einsum("ij,ajk->aik", Y, red_basis)).reshape(k, -1).T for Y in red_basis]
    )
    cz = null_space(rows)
    centre = np.einsum("a,aij->ij", cz[:, 0], red_basis) if cz.shape[1] else None
    m_model = get_model(prm["model"])
    T = None
    if centre is not None:
        centre = centre / np.abs(np.linalg.eigvals(centre)).max()
        T = find_intertwiner(np.concatenate([[centre], A[0], A[1]]), m_model.rep.basis, seed=0)
    ev["reduction"].update(
        {"su2_spans_in_normalizer": bool(in_n), "centre_dim": int(cz.shape[1]), "model_equivalent": T is not None}
    )
    if not in_n or T is None:
        return INCONCLUSIVE, ev, diags + ["reduced action is not identified with the model"]
    g = model.element(prm["element"])
    preserve = float(np.abs(g @ F - F @ (F.T @ g @ F)).max())
    gm = T @ (F.T @ g @ F) @ T.T
    starts = opts.starts or spec.starts

    def two_components(lit):
        x = m_model.point(lit)
        y = gm @ x
        invs = [
            find_critical_set(m_model.rep, pt, HeightSpec(x), starts=starts, seed=opts.seed, tol=opts.tol) for pt in (x, y)
        ]
        return {
            "x": lit,
            "orbit_dim": orbit_chart(m_model.rep, x).orbit_dim,
            "components": [i.count_by_dim() for i in invs],
            "betti_sums": [i.total_betti_sum for i in invs],
            "orbit_distance_between_components": orbit_distance(m_model.rep, x, y, seed=opts.seed),
        }

    main = two_components(prm["x"])
    total, poly = _catalog_total(spec.orbit)
    ev["inventory"] = {**main, "element_preserves_VH": preserve}
    if "reference_x" in prm:
        ref = two_components(prm["reference_x"])
        ref["separated"] = ref["orbit_distance_between_components"] >= ORBIT_SEPARATION
        ev["inventory"]["reference"] = ref
    ev["orbit"] = {"descriptor": spec.orbit, "poincare": poly, "betti_total": total}
    sums = main["betti_sums"]
    if preserve > 1e-9:
        diags.append("element does not preserve V^H")
    if main["orbit_dim"] != red.dim_nbar:
        diags.append("model point is not on a principal orbit")
    if main["orbit_distance_between_components"] < ORBIT_SEPARATION:
        diags.append("the two points lie on one identity-component orbit")
    if any(s is None for s in sums):
        diags.append("unidentified critical component")
    want = spec.expected.get("betti_sums")
    if want is not None and list(sums) != list(want):
        diags.append(f"component sums {sums} differ from registered {want}")
    if diags:
        return INCONCLUSIVE, ev, diags
    lower = int(sum(sums))
    ineq = _inequality(lower, total, "lower bound for the critical Betti sum on the reduced orbit exceeds the orbit Betti sum")
    if ineq is None:
        return INCONCLUSIVE, ev, ["doubled bound does not exceed the Betti sum"]
    ev["inequality"] = ineq
    return OBSTRUCTION, ev, []


OPS: dict[str, Callable[[CaseSpec, RunOptions], tuple]] = {
    "betti_mismatch": certify_betti_mismatch,
    "disconnected_isotropy": certify_disconnected_isotropy,
    "b1_torus": certify_b1_torus,
    "sphere_codim": certify_sphere_codim,
    "taut_consistency": certify_taut_consistency,
    "cited_theory": certify_cited_theory,
    "deferred": certify_deferred,
    "subsum": certify_subsum,
    "doubled_reduced_count": certify_doubled_reduced_count,
}


# ---------------------------------------------------------------------------
# running


def master_seed(seed: int | None = None) -> int:
    if seed is not None:
        return int(seed)
    env = os.environ.get("TAUT_SEED")
    return int(env) if env else MASTER_SEED


def certify(spec: CaseSpec, seed: int | None = None, starts: int | None = None, tol: float = ACCEPT_RESIDUAL) -> TautnessCertificate:
    """Run one case given as a :class:`CaseSpec` (registered or ad hoc)."""
    s = case_seed(master_seed(seed), spec.id)
    opts = RunOptions(seed=s, starts=starts, tol=tol)
    t0 = time.perf_counter()
    try:
        verdict, evidence, diags = OPS[spec.op](spec, opts)
    except (ValueError, np.linalg.LinAlgError) as exc:
        log.warning("case %s failed: %s", spec.id, exc)
        verdict, evidence, diags = INCONCLUSIVE, {}, [f"error: {exc}"]
    runtime = 1000.0 * (time.perf_counter() - t0)
    expected = {"verdict": spec.expected_verdict, "taut": spec.taut, **spec.expected}
    if spec.orbit:
        expected.setdefault("orbit", spec.orbit)
    tolerances = {"accept_residual": tol, "fix": FIX_TOL, "orbit_separation": ORBIT_SEPARATION}
    if starts or spec.starts:
        tolerances["starts"] = starts or spec.starts
    return TautnessCertificate(spec.id, verdict, expected, evidence, s, tolerances, runtime, diags)


def run_case(case_id: str, seed: int | None = None, starts: int | None = None, tol: float = ACCEPT_RESIDUAL) -> TautnessCertificate:
    reg = load_registry()
    if case_id not in reg:
        raise KeyError(f"unregistered case {case_id!r}")
    return certify(reg[case_id], seed=seed, starts=starts, tol=tol)


def _run_one(args):
    case_id, seed, starts, tol = args
    return run_case(case_id, seed, starts, tol)


def run_all(seed: int | None = None, jobs: int = 1, starts: int | None = None, tol: float = ACCEPT_RESIDUAL, cases=None) -> list[TautnessCertificate]:
    """Every registered case (or the given subset), in manifest order."""
    ids = list(cases) if cases is not None else list(load_registry())
    seed = master_seed(seed)
    work = [(c, seed, starts, tol) for c in ids]
    if jobs <= 1:
        return [_run_one(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_one, work))


def exit_code(certs) -> int:
    if any(c.verdict == INCONCLUSIVE for c in certs):
        return EXIT_INCONCLUSIVE
    if any(not c.matches for c in certs):
        return EXIT_MISMATCH
    return EXIT_MATCH


CSV_FIELDS = ("case", "verdict", "expected_verdict", "match", "inequality", "seed", "runtime_ms")


def _csv_text(certs, timing: bool) -> str:
    buf = io.StringIO()
    fields = [f for f in CSV_FIELDS if timing or f != "runtime_ms"]
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for c in certs:
        ineq = c.evidence.get("inequality")
        row = {
            "case": c.case_id,
            "verdict": c.verdict,
            "expected_verdict": c.expected.get("verdict"),
            "match": c.matches,
            "inequality": f"{ineq['lhs']} > {ineq['rhs']}" if ineq else "",
            "seed": c.seed,
        }
        if timing:
            row["runtime_ms"] = round(c.runtime_ms, 1)
        w.writerow(row)
    return buf.getvalue()


def report_text(certs, fmt: str = "json", timing: bool = True) -> str:
    if fmt == "json":
        return json.dumps([c.to_dict(timing) for c in certs], indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        return _csv_text(certs, timing)
    raise ValueError(f"unknown report format {fmt!r}")


def emit_report(certs, path, fmt: str | None = None, timing: bool = True) -> Path:
    """Write certificates as JSON or CSV (format from the suffix when not given)."""
    path = Path(path)
    fmt = fmt or ("csv" if path.suffix.lower() == ".csv" else "json")
    text = report_text(list(certs), fmt, timing)
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc
    return path
