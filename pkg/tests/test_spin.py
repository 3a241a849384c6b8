import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qbases.spin import (
    Basis,
    NonUnitaryError,
    SpinError,
    StarConstellation,
    basis_state,
    coherent_state,
    dicke_embed,
    dim_of,
    majorana_polynomial,
    make_spin_state,
    parametrize_basis_h3,
    parse_j,
    spin_of_dim,
    stars_from_state,
    state_from_stars,
)

amps = st.integers(2, 8).flatmap(
    lambda n: st.lists(st.tuples(st.floats(-1, 1), st.floats(-1, 1)), min_size=n, max_size=n)
).filter(lambda v: sum(a * a + b * b for a, b in v) > 1e-3)


def test_parse_j():
    assert parse_j("3/2") == 1.5
    assert parse_j(2) == 2.0
    assert dim_of("5/2") == 6 and spin_of_dim(4) == 1.5
    for bad in ("-1", "1/3", 0.25, "x"):
        with pytest.raises(SpinError):
            parse_j(bad)


def test_state_normalization_and_errors():
    s = make_spin_state(1, [1, 1j, 0])
    assert np.isclose(np.linalg.norm(s.amplitudes), 1)
    with pytest.raises(SpinError):
        make_spin_state(1, [0, 0, 0])
    with pytest.raises(SpinError):
        make_spin_state(1, [1, 0])


def test_basis_rejects_non_unitary():
    with pytest.raises(NonUnitaryError):
        Basis(np.array([[1, 1], [0, 1]]), 0.5)
    b = Basis(np.eye(3), 1)
    assert b.dim == 3 and b.residual == 0


def test_coherent_state_stars_coincide():
    s = coherent_state(2, 0.8, 1.3)
    stars = stars_from_state(s).stars
    assert np.allclose(stars, [[0.8, 1.3]] * 4, atol=1e-6)


def test_basis_state_stars_at_poles():
    stars = stars_from_state(basis_state(2, 0)).stars
    assert sorted(stars[:, 0].round(12)) == [0, 0, np.pi.__round__(12), np.pi.__round__(12)]
    assert np.allclose(stars_from_state(basis_state(1.5, -1.5)).stars[:, 0], np.pi)


def test_majorana_polynomial_sign_convention():
    c = majorana_polynomial([0, 1, 0]).coefficients
    assert np.allclose(c, [0, -np.sqrt(2), 0])


@settings(max_examples=60, deadline=None)
@given(amps)
def test_stellar_roundtrip(v):
    z = np.array([complex(a, b) for a, b in v])
    z /= np.linalg.norm(z)
    back = state_from_stars(stars_from_state(z)).amplitudes
    assert abs(np.vdot(back, z)) ** 2 >= 1 - 1e-9


def test_constellation_from_vectors_roundtrip():
    c = StarConstellation([[0.3, 1.0], [np.pi, 0.0], [0.0, 0.0]])
    again = StarConstellation.from_vectors(c.vectors())
    assert np.allclose(again.stars, c.stars)


def test_dicke_embedding_is_symmetric_and_normalized():
    s = make_spin_state(1.5, [0.3, 0.5j, -0.2, 0.7])
    psi = dicke_embed(s).tensor()
    assert np.isclose(np.linalg.norm(psi), 1)
    assert np.allclose(psi, psi.transpose(1, 0, 2))
    assert np.allclose(psi, psi.transpose(0, 2, 1))


def test_dicke_cap():
    with pytest.raises(SpinError):
        dicke_embed(np.ones(20), max_qubits=12)


def test_h3_parametrization_unitary():
    b = parametrize_basis_h3(0.4, 1.1, 0.7)
    assert b.residual < 1e-12
