import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from taut import repbuilder as rb
from taut.models import get_model
from taut.orbit import (
    RankAmbiguityError,
    cohomogeneity,
    discrete_isotropy_probe,
    isotropy_is_subalgebra,
    numerical_rank,
    orbit_chart,
    substantial_span,
)


@pytest.mark.parametrize(
    "model,point,iso,orbit",
    [
        ("spin6-c4c4r6", "1; j; e", 0, 15),
        ("spin9-r16r16", "(1,0); (e,1)", 8, 28),
        ("spin9-r9r16", "e0; (1,1)", 14, 22),
    ],
)
def test_isotropy_dimensions(model, point, iso, orbit):
    m = get_model(model)
    chart = orbit_chart(m.rep, m.point(point))
    assert (chart.isotropy_dim, chart.orbit_dim) == (iso, orbit)


def test_zero_point_has_point_orbit():
    rep = rb.classical_basis("so", 3)
    chart = orbit_chart(rep, np.zeros(3))
    assert chart.orbit_dim == 0 and chart.isotropy_dim == 3


MODEL_NAMES = ["so3-r3r3", "su3-c3c3", "spin7-r7r8", "g2-r7r7", "spin9-r16r16"]


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(MODEL_NAMES), st.integers(0, 2**31))
def test_chart_invariants(name, seed):
    rep = get_model(name).rep
    rng = np.random.default_rng(seed)
    p = rng.normal(size=rep.d)
    chart = orbit_chart(rep, p)
    assert chart.orbit_dim + chart.isotropy_dim == rep.group_dim
    frame = np.hstack([chart.tangent_basis, chart.normal_basis])
    assert np.allclose(frame.T @ frame, np.eye(rep.d), atol=1e-10)
    assert np.abs(chart.isotropy_basis @ p).max(initial=0) < 1e-10
    X = rep.random_element(rng)
    assert np.abs(chart.normal_basis.T @ (X @ p)).max(initial=0) < 1e-10 * max(1, np.linalg.norm(X @ p))


def test_isotropy_is_closed_under_bracket():
    m = get_model("spin9-r16r16")
    chart = orbit_chart(m.rep, m.point("(1,0); (e,1)"))
    assert isotropy_is_subalgebra(chart) < 1e-9


@pytest.mark.parametrize("name,expected", [("spin7-r7r7r8", 4), ("spin8-000+", 7), ("spin9-r9r16", 3)])
def test_cohomogeneity(name, expected):
    coh, witness = cohomogeneity(get_model(name).rep, trials=4, seed=0)
    assert coh == expected
    assert witness.shape == (get_model(name).rep.d,)


def test_cohomogeneity_needs_trials():
    with pytest.raises(ValueError):
        cohomogeneity(rb.classical_basis("so", 3), trials=0)


def test_principal_orbit_dimension_is_generic():
    rep = get_model("spin7-r7r7r8").rep
    rng = np.random.default_rng(5)
    dims = [orbit_chart(rep, rng.normal(size=rep.d)).orbit_dim for _ in range(50)]
    assert dims.count(max(dims)) >= 45


def test_substantial_span_su2():
    m = get_model("su2-c2-r3")
    p = m.point("e1 + 0.3*e2; e1")
    assert substantial_span(m.rep, p) == 7
    assert orbit_chart(m.rep, p).orbit_dim == 3


def test_substantial_span_round_sphere():
    assert substantial_span(rb.classical_basis("so", 3), np.array([1.0, 0, 0])) == 3


def test_substantial_span_sp2():
    m = get_model("sp2-c4-r5")
    p = np.random.default_rng(0).normal(size=m.rep.d)
    assert substantial_span(m.rep, p) == 13


def test_substantial_span_needs_enough_samples():
    with pytest.raises(ValueError):
        substantial_span(rb.classical_basis("so", 3), np.array([1.0, 0, 0]), samples=3)


def test_probe_on_symmetric_matrices():
    m = get_model("so3-s20r3-r3")
    cands = [np.eye(m.rep.d), m.element("d1"), m.element("d2"), m.element("d1") @ m.element("d2")]
    assert discrete_isotropy_probe(m.rep, m.point("diag(1,2,-3); 0"), cands) == [0, 1, 2, 3]
    assert discrete_isotropy_probe(m.rep, m.point("0; [0.2, 0.7, -0.4]"), cands) == [0]


def test_probe_identity_only():
    rep = rb.classical_basis("so", 3)
    assert discrete_isotropy_probe(rep, np.array([0.3, 0.1, 2.0]), [np.eye(3)]) == [0]


def test_rank_gap_is_enforced():
    assert numerical_rank(np.array([1.0, 0.5, 1e-14])) == 2
    with pytest.raises(RankAmbiguityError):
        numerical_rank(np.array([1.0, 1e-7, 1e-9]))
