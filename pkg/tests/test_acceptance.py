"""End-to-end acceptance checks, one test per criterion."""
import time
from math import comb, log, sqrt

import numpy as np
import pytest

from qbases import catalog as cat
from qbases.measures import (
    basis_quantumness,
    cue_average_estimate,
    haar_average_exact,
    haar_unitary,
    reduced_purity,
    reduced_purity_oracle,
    anticoherence,
)
from qbases.optimizer import (
    SearchConfig,
    gradient_bt,
    hessian_bt,
    lie_basis,
    multi_start_search,
    random_walk_search,
)
from qbases.measures import quantumness_unchecked
from qbases.phase_space import (
    coherent_wehrl,
    husimi,
    husimi_max,
    husimi_normalization,
    wehrl_entropy,
)
from qbases.rotations import (
    EulerAngles,
    basis_constellation,
    fingerprint,
    fingerprints_match,
    reference_polyhedron,
    rotate_state,
    rotation_matrix,
    match_error,
)
from qbases.spin import (
    Basis,
    coherent_state,
    identity_basis,
    stars_from_state,
    state_from_stars,
)
from scipy.linalg import expm

from conftest import random_state


def _b(u, t):
    return basis_quantumness(u, t)


@pytest.mark.criterion(1, "closed-form B_t of the catalog bases")
def test_closed_form_quantumness():
    t0 = time.perf_counter()
    checks = [
        (cat.fourier3(), 1, 1 / 9),
        (cat.u3_quantum(), 1, 1.0),
        (cat.u4_classical(), 1, 1 / 9),
        (cat.u4_quantum(), 1, 1.0),
        (cat.u4_quantum(), 2, 3 / 4),
        (cat.u5_quantum(), 1, 1.0),
        (cat.u5_quantum(), 2, 1.0),
        (cat.u5_quantum(), 3, 2 / 3),
        (cat.u6_classical(), 1, 8 * (137 - 34 * sqrt(10)) / 2025),
    ]
    for u, t, want in checks:
        assert abs(_b(u, t) - want) <= 1e-10
    u7 = cat.load_u7_quantum()
    for t, want in [(1, 1.0), (2, 1.0), (3, 1.0), (4, 5 / 6)]:
        assert abs(_b(u7, t) - want) <= 1e-4
    assert time.perf_counter() - t0 < 5


@pytest.mark.criterion(2, "B_1 of the |j,m> basis")
def test_jm_basis_column():
    t0 = time.perf_counter()
    want = {3: 1 / 3, 4: 4 / 9, 5: 1 / 2, 6: 8 / 15, 7: 5 / 9}
    for n, w in want.items():
        assert abs(_b(identity_basis(n), 1) - w) <= 1e-12
    assert time.perf_counter() - t0 < 1


@pytest.mark.criterion(3, "Haar average of B_t by Monte Carlo")
def test_haar_average():
    t0 = time.perf_counter()
    for n in range(3, 8):
        for t in (1, 2):
            mean, err = cue_average_estimate(n, t, 10_000, seed=100 * n + t)
            # t = 2j makes B_t identically zero, so err vanishes there
            assert abs(mean - haar_average_exact(n, t)) <= max(4 * err, 1e-12), (n, t, mean, err)
    assert time.perf_counter() - t0 < 60


@pytest.mark.criterion(4, "factorized purity equals explicit partial trace")
def test_purity_oracle(rng):
    t0 = time.perf_counter()
    for two_j in (2, 3, 4, 5, 6):
        for t in range(1, two_j + 1):
            for _ in range(100):
                psi = random_state(rng, two_j + 1)
                assert abs(reduced_purity(psi, t) - reduced_purity_oracle(psi, t)) <= 1e-12
    assert time.perf_counter() - t0 < 30


@pytest.mark.criterion(5, "Wehrl entropies")
def test_wehrl_values():
    t0 = time.perf_counter()
    for n in range(3, 8):
        j = (n - 1) / 2
        assert abs(wehrl_entropy(coherent_state(j, 0.7, 1.9)) - coherent_wehrl(n)) <= 1e-8
    want = {
        3: 1 - log(2) / 3,
        4: 3 / 2 - log(3) / 2,
        5: 2 - log(96) / 5,
        6: 5 / 2 - log(50) / 3,
        7: 3 - log(162000) / 7,
    }
    for n, w in want.items():
        mean = np.mean([wehrl_entropy(c) for c in np.eye(n)])
        assert abs(mean - w) <= 1e-6, (n, mean, w)
    u = cat.u3_quantum()
    assert abs(np.mean([wehrl_entropy(c) for c in u.T]) - (5 / 3 - log(2))) <= 1e-6
    assert time.perf_counter() - t0 < 60


@pytest.mark.criterion(6, "Husimi maxima")
def test_husimi_max_values():
    assert abs(husimi_max([0, 1, 0]).q_max - 1 / 2) <= 1e-8
    assert abs(husimi_max(cat.octahedron_state()).q_max - 2 / 9) <= 1e-8
    f3 = cat.fourier3()
    assert abs(np.mean([husimi_max(c).q_max for c in f3.T]) - (3 + 2 * sqrt(2)) / 6) <= 1e-6
    u6 = cat.u6_classical()
    assert abs(np.mean([husimi_max(c).q_max for c in u6.T]) - (11 + 2 * sqrt(10)) / 18) <= 1e-6


def _moved(u, x):
    return u @ expm(1j * lie_basis(u.shape[0]).combine(x))


@pytest.mark.criterion(7, "analytic gradient and Hessian of B_t")
def test_derivatives(rng):
    h = 1e-5
    for n in range(3, 7):
        r = n * n
        for t in (1, 2):
            for k in range(20):
                u = haar_unitary(n, rng)
                g = gradient_bt(u, t)
                fd = np.array([(quantumness_unchecked(_moved(u, h * e), t)
                                - quantumness_unchecked(_moved(u, -h * e), t)) / (2 * h)
                               for e in np.eye(r)])
                assert np.linalg.norm(g - fd) <= 1e-6 * np.linalg.norm(g) + 1e-9
                if k < 2:
                    _check_hessian(u, t, rng)
    for u in (cat.u3_quantum(), cat.u4_quantum(), cat.u5_quantum()):
        assert np.linalg.norm(gradient_bt(u, 1)) <= 1e-8


def _check_hessian(u, t, rng):
    n = u.shape[0]
    r = n * n
    eye = np.eye(r)
    hess = hessian_bt(u, t)
    hh = 1e-3
    f = lambda x: quantumness_unchecked(_moved(u, x), t)
    fd = np.zeros((r, r))
    for a in range(r):
        for b in range(a, r):
            ea, eb = hh * eye[a], hh * eye[b]
            fd[a, b] = fd[b, a] = (f(ea + eb) - f(ea - eb) - f(-ea + eb) + f(-ea - eb)) / (4 * hh * hh)
    assert np.abs(hess - fd).max() <= 1e-4 * max(1.0, np.abs(hess).max())


def _all_stars_match(u, solid, tol):
    pts = basis_constellation(u)
    return fingerprints_match(fingerprint(pts), fingerprint(reference_polyhedron(solid)), tol)


@pytest.mark.criterion(8, "random-walk search convergence")
def test_search_convergence():
    t0 = time.perf_counter()
    ms = multi_start_search(SearchConfig(3, "max-b1", seed=11), restarts=10)
    for run in ms.runs:
        assert run.value >= 1 - 1e-6
        assert _all_stars_match(run.basis, "octahedron", 1e-4)
    lex = random_walk_search(SearchConfig(5, "lex-b1-b2", seed=5))
    assert lex.value[1] >= 1 - 1e-4
    assert _all_stars_match(lex.basis, "dodecahedron", 1e-4)
    low = random_walk_search(SearchConfig(4, "min-b1", seed=3))
    assert low.value <= 1 / 9 + 1e-6
    assert time.perf_counter() - t0 < 600


@pytest.mark.criterion(9, "constrained refinement and N=6 fixture")
def test_refined_and_published_fixtures():
    ref = cat.constrained_refine_u5_classical()
    assert abs(ref.b1 - 0.1263012) <= 1e-5
    assert abs(ref.r2 - 7.564405) <= 1e-4
    u6 = cat.u6_quantum_symmetric()
    for t, want in [(1, 0.9999940), (2, 0.9892914), (3, 0.8793702)]:
        assert abs(basis_quantumness(u6, t, tol=1e-5) - want) <= 1e-4


@pytest.mark.criterion(10, "stellar and phase-space properties")
def test_property_suites(rng):
    ang = EulerAngles(0.41, 2.3, 5.1)
    rmat = rotation_matrix(ang)
    for k in range(200):
        n = 2 + k % 6                       # j = 1/2 .. 3
        psi = random_state(rng, n)
        back = state_from_stars(stars_from_state(psi)).amplitudes
        assert abs(np.vdot(back, psi)) ** 2 >= 1 - 1e-10
    for n in range(3, 8):
        psi = random_state(rng, n)
        rot = rotate_state(psi, ang).amplitudes
        for t in range(1, n - 1):
            assert abs(anticoherence(psi, t) - anticoherence(rot, t)) <= 1e-8
        assert abs(wehrl_entropy(psi) - wehrl_entropy(rot)) <= 1e-8
        assert abs(husimi_max(psi).q_max - husimi_max(rot).q_max) <= 1e-8
        stars = stars_from_state(psi)
        moved = stars.vectors() @ rmat.T
        assert match_error(moved, stars_from_state(rot).vectors()) <= 1e-8
        assert abs(husimi_normalization(psi) - 1) <= 1e-8
        for th, ph in stars.stars:
            assert husimi(psi, np.pi - th, ph + np.pi) <= 1e-10
