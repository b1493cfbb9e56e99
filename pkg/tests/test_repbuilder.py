import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from taut import algebra as alg
from taut import repbuilder as rb
from taut.models import MODELS, get_model


def _commutator(a, b):
    return a @ b - b @ a


# --- classical families -------------------------------------------------------------


def test_so3_standard_generators():
    rep = rb.classical_basis("so", 3)
    assert rep.group_dim == 3 and rep.d == 3
    X = rep.basis
    for a, b, c in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]:
        br = _commutator(X[a], X[b])
        assert np.allclose(np.abs(br), np.abs(X[c]))


def test_su4_commutes_with_complex_structure():
    rep = rb.classical_basis("su", 4)
    J = rep.structures["J"]
    assert rep.group_dim == 15 and rep.d == 8
    assert all(np.allclose(_commutator(X, J), 0) for X in rep.basis)


def test_sp2_commutes_with_quaternionic_structure():
    rep = rb.classical_basis("sp", 2)
    assert rep.group_dim == 10 and rep.d == 8
    for S in (rep.structures["J"], rep.structures["K"]):
        assert all(np.allclose(_commutator(X, S), 0) for X in rep.basis)


@pytest.mark.parametrize(
    "family,n,dim", [("so", 5, 10), ("so", 8, 28), ("su", 2, 3), ("su", 3, 8), ("sp", 1, 3), ("sp", 3, 21)]
)
def test_abstract_dimensions(family, n, dim):
    rep = rb.classical_basis(family, n)
    assert rep.group_dim == dim
    assert rep.skew_residual() < 1e-12
    assert rep.closure_residual() < 1e-9


def test_bad_rank_rejected():
    with pytest.raises(ValueError):
        rb.classical_basis("su", 0)
    with pytest.raises(ValueError):
        rb.classical_basis("xx", 2)


def test_non_skew_basis_is_caught_by_residual():
    rep = rb.LinearRepresentation("x", np.eye(3)[None])
    assert rep.skew_residual() == 2.0


# --- triality -----------------------------------------------------------------------


def test_lift_of_zero_is_zero():
    t = rb.triality_lift(np.zeros((8, 8)))
    assert np.allclose(t.b, 0) and np.allclose(t.c, 0)


def test_lift_is_linear():
    rng = np.random.default_rng(1)
    basis = rb.so_basis(8)
    for _ in range(10):
        a1, a2 = (np.tensordot(rng.normal(size=28), basis, 1) for _ in range(2))
        s = rb.triality_lift(a1 + a2).as_array()
        assert np.allclose(s, rb.triality_lift(a1).as_array() + rb.triality_lift(a2).as_array(), atol=1e-10)


def test_lift_satisfies_derivation_identity_on_so8():
    for a in rb.so_basis(8):
        t = rb.triality_lift(a)
        assert t.residual() < 1e-10
        assert np.abs(t.b + t.b.T).max() < 1e-10 and np.abs(t.c + t.c.T).max() < 1e-10


def test_lift_rejects_non_skew():
    with pytest.raises(ValueError):
        rb.triality_lift(np.eye(8))


def test_slot_projection_is_bijective():
    triples = rb.spin8_triples()
    for slot in range(3):
        assert np.linalg.matrix_rank(triples[:, slot].reshape(28, -1)) == 28


@pytest.mark.parametrize("cons,dim", [([], 28), (["1"], 21), (["1", "i"], 15)])
def test_spin_subalgebra_dimensions(cons, dim):
    rep = rb.spin_subalgebra(cons)
    assert rep.group_dim == dim and rep.d == 24
    assert rep.closure_residual() < 1e-9
    for c in cons:
        assert np.allclose(rep.basis[:, :8, :8] @ alg.octonion(c).coords, 0)


def test_g2_derivations():
    rep = rb.g2_basis()
    assert rep.group_dim == 14
    assert np.allclose(rep.basis @ alg.octonion("1").coords, 0)
    assert rep.closure_residual() < 1e-9
    for D in rep.basis:
        assert rb._triality_residual(D, D, D) < 1e-10


# --- Clifford models ----------------------------------------------------------------


def test_phi_squares_to_norm():
    rng = np.random.default_rng(2)
    for _ in range(100):
        r, u = rng.normal(), rng.normal(size=8)
        m = rb.phi(r, u)
        assert np.abs(m @ m - (r * r + u @ u) * np.eye(16)).max() < 1e-12


def test_spin9_basis():
    rep = rb.spin9_rep()
    assert rep.group_dim == 36 and rep.d == 16
    assert rep.skew_residual() < 1e-12
    assert rep.closure_residual() < 1e-9


@pytest.mark.parametrize("sign", [1, -1])
def test_volume_element_acts_as_plus_minus_j(sign):
    omega = alg.clifford_blade(range(10), 10, -1, base=0)
    rep = rb.spin10_halfspin(sign)
    assert np.allclose(rb.delta10_matrix(omega, sign), sign * rep.structures["J"], atol=1e-12)


def test_half_spins_differ():
    omega = alg.clifford_blade(range(10), 10, -1, base=0)
    plus, minus = rb.delta10_matrix(omega, 1), rb.delta10_matrix(omega, -1)
    assert np.allclose(plus, -minus)
    J = rb.spin10_halfspin("+").structures["J"]
    assert np.trace(plus @ J.T) == -np.trace(minus @ J.T) != 0


def test_spin10_halfspin_basis():
    rep = rb.spin10_halfspin("+")
    assert rep.group_dim == 45 and rep.d == 32
    assert rep.closure_residual() < 1e-9
    assert all(np.allclose(_commutator(X, rep.structures["J"]), 0) for X in rep.basis)


def test_spin10_restricts_to_two_copies_of_spin9():
    rep = rb.spin10_halfspin("+")
    pairs = list(itertools.combinations(range(10), 2))
    keep = [a for a, (i, j) in enumerate(pairs) if j != 9]
    assert len(keep) == 36
    real = rep.structures["real"]
    sub = rep.basis[keep]
    assert all(np.allclose(_commutator(X, real), 0) for X in sub)
    half = sub[:, :16, :16]
    assert np.linalg.matrix_rank(half.reshape(36, -1)) == 36
    assert rb.bracket_closure_residual(half) < 1e-9


# --- sums, exponentials, serialisation ------------------------------------------------


def test_direct_sum_of_one_rep_is_identity():
    rep = rb.classical_basis("so", 3)
    s = rb.direct_sum([rep])
    assert np.array_equal(s.basis, rep.basis) and s.summands == rep.summands


def test_spin7_r7r8r8_dimensions():
    rep = get_model("spin7-r7r8r8").rep
    assert (rep.d, rep.group_dim) == (23, 21)
    assert rep.closure_residual() < 1e-9


def test_direct_sum_rejects_group_mismatch():
    with pytest.raises(ValueError):
        rb.direct_sum([rb.classical_basis("so", 3), rb.classical_basis("su", 2)])


def test_exp_map():
    assert np.array_equal(rb.exp_map(np.zeros((3, 3))), np.eye(3))
    X = np.array([[0.0, -1.0], [1.0, 0.0]])
    assert np.allclose(rb.exp_map(X, np.pi / 2), [[0, -1], [1, 0]], atol=1e-15)
    with pytest.raises(ValueError):
        rb.exp_map(np.eye(2))


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 12), st.integers(0, 10_000), st.floats(-5, 5))
def test_exp_map_orthogonal(d, seed, t):
    A = np.random.default_rng(seed).normal(size=(d, d))
    g = rb.exp_map(A - A.T, t)
    assert np.allclose(g.T @ g, np.eye(d), atol=1e-12)
    assert np.isclose(np.linalg.det(g), 1.0)


def test_json_round_trip():
    rep = rb.spin10_halfspin("-")
    back = rb.load_json(rb.dump_json(rep))
    assert back.group_label == rep.group_label and back.summands == rep.summands
    assert np.array_equal(back.basis, rep.basis)
    assert np.array_equal(back.structures["J"], rep.structures["J"])


def test_adjoint_rep_is_a_representation():
    rep = rb.adjoint_rep(rb.classical_basis("su", 3))
    assert rep.d == 8 and rep.group_dim == 8
    assert rep.skew_residual() < 1e-10 and rep.closure_residual() < 1e-9


@pytest.mark.parametrize("name", sorted(MODELS))
def test_every_registered_model_is_a_representation(name):
    rep = get_model(name).rep
    assert rep.skew_residual() < 1e-10
    assert sum(n for _, n, _ in rep.summands) == rep.d
    if rep.d <= 48:
        assert rep.closure_residual() < 1e-9
