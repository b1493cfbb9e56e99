import pytest
from hypothesis import given
from hypothesis import strategies as st

from taut.catalog import ATOMS, PoincarePoly, parse_space, poincare_data

ATOM_SAMPLES = ["S1", "S4", "RP3", "RP5", "CP2", "T3", "pt", "SU(3)", "SU(4)", "U(2)", "Sp(2)", "SO(3)", "SO(4)", "G2", "Spin(7)", "V2(R7)", "V3(R8)"]


def test_s3_times_s5():
    p = poincare_data("S3 x S5")
    assert p.coeffs == (1, 0, 0, 1, 0, 1, 0, 0, 1)
    assert p.total == 4
    assert str(p) == "1 + t^3 + t^5 + t^8"


@pytest.mark.parametrize(
    "space,total",
    [("S3 x S5 x S7", 8), ("SU(4)", 8), ("RP3", 4), ("SO(3)", 4), ("V2(R8)", 4), ("T2", 4), ("CP2", 3), ("G2", 8), ("Sp(2)", 4)],
)
def test_totals(space, total):
    assert poincare_data(space).total == total


def test_rp_has_one_class_per_degree():
    assert poincare_data("RP4").coeffs == (1, 1, 1, 1, 1)


def test_stiefel_v2_r8_is_s6_times_s7_mod_2():
    assert poincare_data("V2(R8)") == poincare_data("S6 x S7")


def test_unicode_product_sign():
    assert poincare_data("S2×S3") == poincare_data("S2 x S3")


@pytest.mark.parametrize("bad", ["", "K3", "S3 x Q", "V9(R3)", "SO(99) x", "E8"])
def test_unknown_atoms_rejected(bad):
    with pytest.raises(ValueError):
        poincare_data(bad)


def test_negative_betti_numbers_rejected():
    with pytest.raises(ValueError):
        PoincarePoly((1, -1))


def test_trailing_zeros_trimmed():
    assert PoincarePoly((1, 0, 0)).coeffs == (1,)


def test_atoms_carry_provenance():
    atom = parse_space("CP2")
    assert atom.kind == "cp" and atom.provenance == ATOMS["cp"][2]


@given(st.sampled_from(ATOM_SAMPLES), st.sampled_from(ATOM_SAMPLES))
def test_kunneth_totals(a, b):
    assert poincare_data(f"{a} x {b}").total == poincare_data(a).total * poincare_data(b).total


@given(st.lists(st.sampled_from(ATOM_SAMPLES), min_size=1, max_size=4))
def test_connected_spaces_have_b0_one(atoms):
    p = poincare_data(" x ".join(atoms))
    assert p.betti(0) == 1
    assert p.betti(-1) == 0 and p.betti(p.top_degree + 1) == 0


def test_evaluation_is_deterministic():
    assert poincare_data("SU(3) x G2") == poincare_data("SU(3) x G2")
