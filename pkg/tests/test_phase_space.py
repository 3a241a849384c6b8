import numpy as np
import pytest

from qbases.phase_space import (
    QuadratureSpec,
    QuadratureError,
    coherent_wehrl,
    husimi,
    husimi_max,
    husimi_normalization,
    mean_wehrl_haar,
    wehrl_entropy,
    wehrl_entropy_fixed,
    basis_phase_space_stats,
)
from qbases.spin import NonUnitaryError, basis_state, coherent_state
from qbases.measures import haar_unitary

from conftest import random_state


def test_husimi_of_coherent_state_peaks_at_direction():
    s = coherent_state(2, 1.2, 0.4)
    assert np.isclose(husimi(s, 1.2, 0.4), 1)
    assert husimi(s, np.pi - 1.2, 0.4 + np.pi) < 1e-14
    r = husimi_max(s)
    assert np.isclose(r.q_max, 1) and r.d_fs < 1e-6


def test_husimi_broadcasts():
    th, ph = np.meshgrid(np.linspace(0, np.pi, 5), np.linspace(0, 6, 4))
    assert husimi([1, 0, 0], th, ph).shape == th.shape


def test_normalization(rng):
    for n in (2, 5, 9):
        assert abs(husimi_normalization(random_state(rng, n)) - 1) < 1e-12


def test_wehrl_bounds(rng):
    for n in (3, 5):
        s = wehrl_entropy(random_state(rng, n))
        assert coherent_wehrl(n) - 1e-9 <= s <= np.log(n)


def test_jm_wehrl_closed_form():
    vals = [wehrl_entropy(basis_state(1, m)) for m in (1, 0, -1)]
    assert np.isclose(np.mean(vals), 1 - np.log(2) / 3, atol=1e-9)


def test_haar_mean_wehrl():
    assert np.isclose(mean_wehrl_haar(2), 0.5)
    rng = np.random.default_rng(3)
    u = haar_unitary(4, rng, size=400)
    est = np.mean([wehrl_entropy_fixed(c, 32, 64) for m in u for c in m.T])
    assert abs(est - mean_wehrl_haar(4)) < 0.02


def test_fixed_grid_agrees_with_adaptive(rng):
    psi = random_state(rng, 6)
    assert abs(wehrl_entropy_fixed(psi, 512, 1024) - wehrl_entropy(psi)) < 1e-8


def test_quadrature_failure_is_reported(rng):
    spec = QuadratureSpec(16, 32, tol=1e-30, max_doublings=1)
    with pytest.raises(QuadratureError):
        wehrl_entropy(random_state(rng, 12), spec)
    with pytest.raises(ValueError):
        QuadratureSpec(4, 8)


def test_husimi_max_ring_degenerate():
    r = husimi_max(basis_state(2, 1))
    # |2,1>: Q = 4 c^6 s^2 maximal at cos^2(theta/2) = 3/4
    assert np.isclose(r.q_max, 4 * (3 / 4) ** 3 * (1 / 4))


def test_husimi_max_beats_grid(rng):
    psi = random_state(rng, 7)
    th, ph = np.meshgrid(np.linspace(0, np.pi, 200), np.linspace(0, 2 * np.pi, 400))
    assert husimi_max(psi).q_max >= husimi(psi, th, ph).max() - 1e-12


def test_stats_require_unitary():
    with pytest.raises(NonUnitaryError):
        basis_phase_space_stats(np.array([[1, 0.5], [0, 1]]))


def test_wehrl_matches_adaptive_cubature():
    from scipy.integrate import dblquad
    psi = np.array([1, 0, 0, np.sqrt(2), 0]) / np.sqrt(3)

    def integrand(phi, theta):
        q = husimi(psi, theta, phi)
        return -q * np.log(q) * np.sin(theta) if q > 0 else 0.0

    val, _ = dblquad(integrand, 0, np.pi, 0, 2 * np.pi, epsabs=1e-11, epsrel=1e-11)
    assert abs(5 / (4 * np.pi) * val - wehrl_entropy(psi)) < 1e-8
