import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from taut import repbuilder as rb
from taut.models import get_model
from taut.morse import (
    HeightSpec,
    criticality_residual,
    find_critical_set,
    generic_morse_count,
    hessian_data,
    morse_index,
)
from taut.orbit import orbit_chart


@pytest.fixture(scope="module")
def torus():
    m = get_model("torus-t2-c3")
    p = m.point("1; 1; 1")
    return m.rep, p, find_critical_set(m.rep, p, HeightSpec(p), starts=300, seed=11)


def _torus_point(a, b):
    return np.array([np.cos(a), np.sin(a), np.cos(b), np.sin(b), np.cos(a + b), np.sin(a + b)])


def _torus_oracle_index(a, b):
    # h(a, b) = cos a + cos b + cos(a + b)
    hab = -np.cos(a + b)
    H = np.array([[-np.cos(a) + hab, hab], [hab, -np.cos(b) + hab]])
    return int(np.sum(np.linalg.eigvalsh(H) < 0))


TORUS_SOLUTIONS = [(0, 0), (np.pi, np.pi), (0, np.pi), (np.pi, 0), (2 * np.pi / 3, 2 * np.pi / 3), (-2 * np.pi / 3, -2 * np.pi / 3)]


def test_heightspec_kinds():
    assert HeightSpec([1.0, 0.0]).value([2.0, 3.0]) == 2.0
    assert HeightSpec([1.0, 0.0], "squared-distance").value([2.0, 3.0]) == 10.0
    with pytest.raises(ValueError):
        HeightSpec([1.0], "volume")


def test_residual_vanishes_in_normal_direction():
    m = get_model("spin7-r8r8")
    p = m.point("1; i")
    q = orbit_chart(m.rep, p).normal_basis[:, 0]
    assert criticality_residual(m.rep, p, q)[0] < 1e-20


def test_base_point_is_critical_for_itself_on_torus(torus):
    rep, p, _ = torus
    assert criticality_residual(rep, p, p)[0] == 0.0


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(["so3-r3r3", "torus-t2-c3", "g2-r7r7", "su3-c3c3"]), st.integers(0, 2**31))
def test_gradient_matches_finite_differences(name, seed):
    rep = get_model(name).rep
    rng = np.random.default_rng(seed)
    x, q = rng.normal(size=(2, rep.d))
    r0, grad = criticality_residual(rep, x, q)
    h = 1e-5
    fd = np.array(
        [
            (criticality_residual(rep, expm(h * X) @ x, q)[0] - criticality_residual(rep, expm(-h * X) @ x, q)[0]) / (2 * h)
            for X in rep.basis
        ]
    )
    assert np.linalg.norm(fd - grad) <= 1e-6 * max(1.0, np.linalg.norm(grad))


def test_torus_has_six_isolated_points(torus):
    _, _, inv = torus
    assert inv.count_by_dim() == {0: 6}
    assert inv.total_betti_sum == 6


def test_torus_indices_match_hessian_oracle(torus):
    rep, p, inv = torus
    oracle = sorted(_torus_oracle_index(a, b) for a, b in TORUS_SOLUTIONS)
    # h is a Morse function on T2, so the alternating index count is chi(T2) = 0
    assert sum((-1) ** k for k in oracle) == 0
    assert sorted(c.morse_index for c in inv.components) == oracle == [0, 0, 1, 1, 1, 2]
    for a, b in TORUS_SOLUTIONS:
        x = _torus_point(a, b)
        assert criticality_residual(rep, x, p)[0] < 1e-20
        assert morse_index(rep, x, p) == (_torus_oracle_index(a, b), 0)


def test_torus_maximum_has_full_index(torus):
    rep, p, _ = torus
    assert morse_index(rep, p, p) == (2, 0)


def test_su3_four_dimensional_component_has_nullity_four():
    m = get_model("su3-c3c3c3")
    p = m.point("e1; e2; e3")
    inv = find_critical_set(m.rep, p, HeightSpec(p), starts=2000, seed=3, tag_rules={4: "cp2"})
    assert inv.count_by_dim() == {0: 3, 4: 1}
    big = next(c for c in inv.components if c.dim_estimate == 4)
    assert big.betti_tag == "cp2"
    for x in big.points[:: max(1, big.size // 10)]:
        assert morse_index(m.rep, x, p)[1] == 4


def test_round_sphere_counts_two():
    rep = rb.classical_basis("so", 3)
    counts = generic_morse_count(rep, np.array([1.0, 0, 0]), trials=5, starts=100)
    assert [c for _, c in counts] == [2] * 5


def test_so3_pair_counts_four():
    m = get_model("so3-r3r3")
    counts = generic_morse_count(m.rep, m.point("e1; e2"), trials=4, starts=300, seed=2)
    assert [c for _, c in counts] == [4] * 4


def test_torus_direction_with_six_nondegenerate_points(torus):
    _, _, inv = torus
    assert all(c.hessian_nullity == 0 for c in inv.components)
    assert len(inv.components) == 6 > 4


def test_distance_and_height_share_critical_points():
    m = get_model("g2-r7r7")
    p = m.point("i; j")
    q = np.random.default_rng(8).normal(size=m.rep.d)
    a = find_critical_set(m.rep, p, HeightSpec(q), starts=300, seed=1)
    b = find_critical_set(m.rep, p, HeightSpec(q, "squared-distance"), starts=300, seed=1)
    pa = np.array(sorted(np.round(c.representative, 6).tolist() for c in a.components))
    pb = np.array(sorted(np.round(c.representative, 6).tolist() for c in b.components))
    assert np.allclose(pa, pb)
    for c in a.components:
        ih, n = morse_index(m.rep, c.representative, q)
        isd, _ = morse_index(m.rep, c.representative, q, "squared-distance")
        assert isd == orbit_chart(m.rep, p).orbit_dim - n - ih


@pytest.mark.parametrize("name,point", [("so3-r3r3", "e1; e2"), ("spin7-r7r8", "i; 1"), ("sp1sp1-h3", "1; 1; 1")])
def test_index_nullity_and_coindex_fill_the_tangent_space(name, point):
    m = get_model(name)
    p = m.point(point)
    inv = find_critical_set(m.rep, p, HeightSpec(p), starts=300, seed=4, tag_rules={2: "sphere-2"})
    dim = orbit_chart(m.rep, p).orbit_dim
    for c in inv.components:
        hd = hessian_data(m.rep, c.representative, p)
        pos = int(np.sum(hd.eigenvalues > 1e-8 * hd.scale))
        assert hd.index + hd.nullity + pos == dim


@pytest.mark.parametrize("name,point", [("so4-r4r4", "e1; e2"), ("spin6-c4c4r6", "1; j; e"), ("spin7-r7r8", "i; 1")])
def test_base_point_appears_when_q_is_base_point(name, point):
    m = get_model(name)
    p = m.point(point)
    inv = find_critical_set(m.rep, p, HeightSpec(p), starts=300, seed=5, tag_rules={2: "sphere-2", 3: "sphere-3"})
    pts = np.vstack([c.points for c in inv.components])
    assert np.min(np.linalg.norm(pts - p, axis=1)) < 1e-6


def test_betti_sum_at_least_component_count(torus):
    _, _, inv = torus
    assert inv.total_betti_sum >= len(inv.components)


def test_inventory_serialisation(torus):
    _, _, inv = torus
    doc = inv.to_dict()
    assert set(doc) == {"components", "total_betti_sum", "stats"}
    assert {"dim", "size", "index", "betti_tag", "representative"} <= set(doc["components"][0])
    assert doc["stats"]["starts"] == 300


def test_too_few_starts_rejected(torus):
    rep, p, _ = torus
    with pytest.raises(ValueError):
        find_critical_set(rep, p, HeightSpec(p), starts=50)


def test_same_seed_same_inventory(torus):
    rep, p, inv = torus
    again = find_critical_set(rep, p, HeightSpec(p), starts=300, seed=11)
    assert again.signature() == inv.signature()


def test_morse_index_requires_critical_point(torus):
    rep, p, _ = torus
    with pytest.raises(ValueError):
        morse_index(rep, _torus_point(0.3, 0.1), p)
