import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from qbases.rotations import (
    EulerAngles,
    angular_momentum_matrices,
    euler_from_rotation,
    find_aligning_rotation,
    fingerprint,
    generate_by_rotation,
    is_isocoherent,
    reference_polyhedron,
    rotate_constellation,
    rotate_state,
    rotation_matrix,
    state_equivalent,
    wigner_d,
)
from qbases.spin import SpinError, StarConstellation, coherent_state, stars_from_state
from qbases import catalog as cat

from conftest import random_state


def test_angular_momentum_algebra():
    for j in (0.5, 1, 2.5):
        jx, jy, jz = angular_momentum_matrices(j)
        assert np.allclose(jx @ jy - jy @ jx, 1j * jz)
        assert np.allclose(jx @ jx + jy @ jy + jz @ jz, j * (j + 1) * np.eye(int(2 * j + 1)))


def test_spin_half_d_matrix():
    a, b, g = 0.3, 1.2, 2.2
    d = wigner_d(0.5, (a, b, g))
    ref = np.array([[np.exp(-1j * (a + g) / 2) * np.cos(b / 2), -np.exp(-1j * (a - g) / 2) * np.sin(b / 2)],
                    [np.exp(1j * (a - g) / 2) * np.sin(b / 2), np.exp(1j * (a + g) / 2) * np.cos(b / 2)]])
    assert np.allclose(d, ref)


def test_d_matrix_homomorphism():
    a1, a2 = EulerAngles(0.2, 0.9, 1.4), EulerAngles(2.0, 2.5, 0.1)
    prod = rotation_matrix(a1) @ rotation_matrix(a2)
    both = euler_from_rotation(prod)
    d = wigner_d(1.5, a1) @ wigner_d(1.5, a2)
    d12 = wigner_d(1.5, both)
    phase = np.vdot(d12.ravel(), d.ravel())
    assert np.allclose(d, d12 * phase / abs(phase))


def test_rotation_matrix_matches_scipy():
    ang = EulerAngles(0.5, 1.0, 2.0)
    ref = Rotation.from_euler("ZYZ", ang.as_tuple()).as_matrix()
    assert np.allclose(rotation_matrix(ang), ref)


def test_euler_normalization():
    e = EulerAngles(7.0, -0.5, 0.0)
    assert 0 <= e.beta <= np.pi and 0 <= e.alpha < 2 * np.pi
    assert np.allclose(rotation_matrix(e), rotation_matrix((7.0, -0.5, 0.0)))


def test_coherent_state_rotates_to_direction():
    ang = EulerAngles(1.1, 0.7, 0.0)
    s = rotate_state(coherent_state(2, 0, 0), ang)
    assert np.isclose(abs(np.vdot(coherent_state(2, 0.7, 1.1).amplitudes, s.amplitudes)), 1)


def test_constellation_equivariance(rng):
    ang = EulerAngles(2.1, 0.4, 4.0)
    psi = random_state(rng, 6)
    a = rotate_constellation(stars_from_state(psi), ang)
    b = stars_from_state(rotate_state(psi, ang))
    assert np.allclose(fingerprint(a), fingerprint(b))
    assert find_aligning_rotation(a, b, 1e-8) is not None


def test_aligning_rotation_recovers_rotation(rng):
    pts = reference_polyhedron("cube")[:5] @ np.diag([1, 1, 1])
    pts = StarConstellation.from_vectors(pts + 0.1 * rng.standard_normal(pts.shape)).vectors()
    r = Rotation.random(random_state=4).as_matrix()
    found = find_aligning_rotation(pts, pts @ r.T, 1e-9)
    assert found is not None and np.allclose(found, r)


def test_mirror_images_are_not_equivalent():
    # a chiral constellation and its reflection share fingerprints
    pts = np.array([[1, 0, 0], [0, 1, 0], [0, 0, 1], [0.6, 0.0, -0.8], [-0.48, 0.6, 0.64]])
    mirror = pts * np.array([1, 1, -1])
    assert np.allclose(fingerprint(pts), fingerprint(mirror))
    assert find_aligning_rotation(pts, mirror, 1e-8) is None


def test_generate_by_rotation_orthogonality_check():
    with pytest.raises(SpinError):
        generate_by_rotation(coherent_state(1, 0, 0), [(0, 0, 0), (0, 0.1, 0), (0, 0.2, 0)])


def test_isocoherence():
    assert is_isocoherent(cat.u3_quantum())[0]
    flag, classes = is_isocoherent(np.eye(3))
    assert not flag and len(classes) == 2
    assert state_equivalent(coherent_state(2, 0, 0), coherent_state(2, 1, 2))


def test_reference_polyhedra_sizes():
    sizes = {"tetrahedron": 4, "octahedron": 6, "cube": 8, "cuboctahedron": 12,
             "icosahedron": 12, "dodecahedron": 20}
    for name, n in sizes.items():
        v = reference_polyhedron(name)
        assert v.shape == (n, 3) and np.allclose(np.linalg.norm(v, axis=1), 1)
    with pytest.raises(KeyError):
        reference_polyhedron("torus")


def test_spin_one_d_matrix_entries():
    a, b, g = 0.7, 1.3, 2.9
    c, s = np.cos(b / 2), np.sin(b / 2)
    e = np.exp
    ref = np.array([
        [c * c * e(-1j * (a + g)), -np.sqrt(2) * c * s * e(-1j * a), s * s * e(-1j * (a - g))],
        [np.sqrt(2) * c * s * e(-1j * g), np.cos(b), -np.sqrt(2) * c * s * e(1j * g)],
        [s * s * e(1j * (a - g)), np.sqrt(2) * c * s * e(1j * a), c * c * e(1j * (a + g))],
    ])
    assert np.allclose(wigner_d(1, (a, b, g)), ref)
