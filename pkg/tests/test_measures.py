import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qbases import catalog as cat
from qbases.measures import (
    anticoherence,
    basis_quantumness,
    column_anticoherence,
    cue_average_estimate,
    haar_average_exact,
    haar_unitary,
    quantumness_report,
    reduced_density_matrices,
    reduced_purity,
    reduced_purity_oracle,
)
from qbases.spin import NonUnitaryError, SpinError, basis_state, coherent_state

from conftest import random_state


def test_coherent_states_have_zero_anticoherence():
    for j in (1, 1.5, 3):
        for t in range(1, int(2 * j) + 1):
            assert abs(anticoherence(coherent_state(j, 1.0, 2.0), t)) < 1e-12


def test_known_anticoherent_states():
    # |1,0> is 1-anticoherent; the tetrahedral j=2 state is 2-anticoherent
    assert np.isclose(anticoherence(basis_state(1, 0), 1), 1)
    tet = np.array([1, 0, 0, np.sqrt(2), 0]) / np.sqrt(3)
    assert np.isclose(anticoherence(tet, 1), 1)
    assert np.isclose(anticoherence(tet, 2), 1)


def test_reduced_density_matrix_is_a_state(rng):
    u = np.column_stack([random_state(rng, 6) for _ in range(3)])
    m = reduced_density_matrices(u, 2)
    assert m.shape == (3, 3, 3)
    for rho in m:
        assert np.allclose(rho, rho.conj().T)
        assert np.isclose(np.trace(rho).real, 1)
        assert np.linalg.eigvalsh(rho).min() > -1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 7), st.data())
def test_purity_matches_partial_trace(n, data):
    t = data.draw(st.integers(1, n - 1))
    seed = data.draw(st.integers(0, 2**32 - 1))
    psi = random_state(np.random.default_rng(seed), n)
    assert abs(reduced_purity(psi, t) - reduced_purity_oracle(psi, t)) < 1e-12


def test_order_bounds():
    with pytest.raises(SpinError):
        reduced_purity([1, 0, 0], 3)
    with pytest.raises(SpinError):
        haar_average_exact(4, 0)


def test_basis_quantumness_checks_unitarity():
    with pytest.raises(NonUnitaryError):
        basis_quantumness(np.array([[1, 0.1], [0, 1]]), 1)


def test_column_values_are_mean_components():
    u = cat.u5_quantum()
    cols = column_anticoherence(u, 2)
    assert np.isclose(cols.mean(), basis_quantumness(u, 2))


def test_report_contents():
    rep = quantumness_report(cat.u4_quantum(), [1, 2])
    assert np.isclose(rep.B[2], 0.75)
    d = rep.as_dict()
    assert set(d) == {"per_vector_A", "B", "orthonormality_residual"}


def test_haar_unitary_is_unitary(rng):
    u = haar_unitary(5, rng, size=4)
    assert np.allclose(u @ u.conj().transpose(0, 2, 1), np.eye(5), atol=1e-12)


def test_cue_estimate_reproducible():
    assert cue_average_estimate(4, 1, 500, seed=7) == cue_average_estimate(4, 1, 500, seed=7)
    with pytest.raises(ValueError):
        cue_average_estimate(4, 1, 0, seed=7)


def test_complementary_orders(rng):
    # the t- and (2j-t)-qubit reductions of a pure state share their purity
    for n in range(3, 9):
        psi = random_state(rng, n)
        two_j = n - 1
        for t in range(1, two_j):
            s = two_j - t
            ratio = (s + 1) * t / (s * (t + 1))
            assert np.isclose(anticoherence(psi, s), ratio * anticoherence(psi, t), atol=1e-12)
