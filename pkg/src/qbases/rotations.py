"""Wigner D-matrices, rigid rotations of states and constellations, and
SU(2)-equivalence (iso-coherence) of basis vectors."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.linalg import expm
from scipy.optimize import linear_sum_assignment
from scipy.spatial.distance import pdist

from .spin import (
    Basis,
    SpinError,
    StarConstellation,
    as_amplitudes,
    as_matrix,
    make_spin_state,
    orthonormality_residual,
    parse_j,
    stars_from_state,
)

TWO_PI = 2 * np.pi


@dataclass(frozen=True)
class EulerAngles:
    """z-y-z Euler angles; ``beta`` in [0, pi], the others in [0, 2 pi)."""

    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        a, b, g = float(self.alpha), float(self.beta) % TWO_PI, float(self.gamma)
        if b > np.pi:
            # Ry(-b) = Rz(pi) Ry(b) Rz(-pi)
            b, a, g = TWO_PI - b, a + np.pi, g - np.pi
        object.__setattr__(self, "alpha", a % TWO_PI)
        object.__setattr__(self, "beta", b)
        object.__setattr__(self, "gamma", g % TWO_PI)

    def as_tuple(self):
        return (self.alpha, self.beta, self.gamma)


def _angles(angles) -> EulerAngles:
    return angles if isinstance(angles, EulerAngles) else EulerAngles(*angles)


def angular_momentum_matrices(j):
    """``(Jx, Jy, Jz)`` in the |j, m> basis ordered m = j, ..., -j."""
    j = parse_j(j)
    n = int(round(2 * j)) + 1
    m = j - np.arange(n)
    jz = np.diag(m).astype(complex)
    # <j, m+1| J+ |j, m> sits at row k-1, column k
    jp = np.diag(np.sqrt((j - m[1:]) * (j + m[1:] + 1)), k=1).astype(complex)
    jx = (jp + jp.conj().T) / 2
    jy = (jp - jp.conj().T) / 2j
    return jx, jy, jz


def wigner_d(j, angles) -> np.ndarray:
    """``exp(-i alpha Jz) exp(-i beta Jy) exp(-i gamma Jz)``."""
    a = _angles(angles)
    _, jy, jz = angular_momentum_matrices(j)
    m = np.diag(jz).real
    left = np.exp(-1j * a.alpha * m)
    right = np.exp(-1j * a.gamma * m)
    return left[:, None] * expm(-1j * a.beta * jy) * right[None, :]


def rotation_matrix(angles) -> np.ndarray:
    """SO(3) matrix ``Rz(alpha) Ry(beta) Rz(gamma)`` acting on star vectors."""
    a = _angles(angles)

    def rz(x):
        c, s = np.cos(x), np.sin(x)
        return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1.0]])

    c, s = np.cos(a.beta), np.sin(a.beta)
    ry = np.array([[c, 0, s], [0, 1.0, 0], [-s, 0, c]])
    return rz(a.alpha) @ ry @ rz(a.gamma)


def euler_from_rotation(r) -> EulerAngles:
    """z-y-z angles of an SO(3) matrix (inverse of ``rotation_matrix``)."""
    r = np.asarray(r, dtype=float)
    beta = np.arccos(np.clip(r[2, 2], -1, 1))
    if np.sin(beta) > 1e-12:
        alpha = np.arctan2(r[1, 2], r[0, 2])
        gamma = np.arctan2(r[2, 1], -r[2, 0])
    else:
        # gimbal lock: only alpha +- gamma is defined
        alpha = np.arctan2(r[1, 0], r[0, 0]) if r[2, 2] > 0 else np.arctan2(-r[1, 0], -r[0, 0])
        gamma = 0.0
    return EulerAngles(alpha, beta, gamma)


def rotate_state(state, angles):
    amps = as_amplitudes(state)
    j = (len(amps) - 1) / 2
    return make_spin_state(j, wigner_d(j, angles) @ amps)


def rotate_basis(basis, angles, tol: float = 1e-10) -> Basis:
    u = as_matrix(basis)
    j = (u.shape[0] - 1) / 2
    return Basis(wigner_d(j, angles) @ u, j, tol=tol)


def rotate_constellation(constellation: StarConstellation, angles) -> StarConstellation:
    return StarConstellation.from_vectors(constellation.vectors() @ rotation_matrix(angles).T)


def fingerprint(constellation) -> np.ndarray:
    """Sorted pairwise chordal distances between stars (rotation invariant)."""
    vecs = _vectors(constellation)
    return np.sort(pdist(vecs)) if len(vecs) > 1 else np.empty(0)


def _vectors(obj) -> np.ndarray:
    if isinstance(obj, StarConstellation):
        return obj.vectors()
    return np.asarray(obj, dtype=float).reshape(-1, 3)


def fingerprints_match(f1, f2, tol: float) -> bool:
    return len(f1) == len(f2) and (len(f1) == 0 or np.max(np.abs(f1 - f2)) <= tol)


def _frame(a, b):
    e1 = a / np.linalg.norm(a)
    e2 = np.cross(a, b)
    e2 /= np.linalg.norm(e2)
    return np.column_stack([e1, e2, np.cross(e1, e2)])


def _rotation_taking(a, b):
    """Some rotation with ``R a = b`` for unit vectors."""
    v = np.cross(a, b)
    c = float(np.dot(a, b))
    if np.linalg.norm(v) < 1e-14:
        if c > 0:
            return np.eye(3)
        # half turn about any axis orthogonal to a
        axis = np.cross(a, [1.0, 0, 0])
        if np.linalg.norm(axis) < 1e-8:
            axis = np.cross(a, [0, 1.0, 0])
        axis /= np.linalg.norm(axis)
        return 2 * np.outer(axis, axis) - np.eye(3)
    k = np.array([[0, -v[2], v[1]], [v[2], 0, -v[0]], [-v[1], v[0], 0]])
    return np.eye(3) + k + k @ k / (1 + c)


def match_error(a, b) -> float:
    """Largest distance in the optimal one-to-one pairing of two point sets."""
    a, b = _vectors(a), _vectors(b)
    if len(a) != len(b):
        return np.inf
    if len(a) == 0:
        return 0.0
    cost = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=-1)
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def find_aligning_rotation(source, target, tol: float = 1e-6):
    """Proper rotation ``R`` with ``R @ source`` equal to ``target`` as multisets
    (within ``tol``), or ``None``.

    Tries every image of a reference pair of non-collinear stars among pairs of
    target stars at the same chordal distance.
    """
    a, b = _vectors(source), _vectors(target)
    if len(a) != len(b):
        return None
    if len(a) == 0:
        return np.eye(3)
    a1 = a[0]
    cross = np.linalg.norm(np.cross(a1, a), axis=1)
    i2 = int(np.argmax(cross))
    if cross[i2] < 1e-8:
        # all stars on one axis; align the axis and check the multiset
        for b1 in b:
            r = _rotation_taking(a1, b1)
            if match_error(a @ r.T, b) <= tol:
                return r
        return None
    a2 = a[i2]
    d = np.linalg.norm(a1 - a2)
    fa = _frame(a1, a2)
    slack = max(4 * tol, 1e-9)
    for p in range(len(b)):
        for q in range(len(b)):
            if p == q or abs(np.linalg.norm(b[p] - b[q]) - d) > slack:
                continue
            if np.linalg.norm(np.cross(b[p], b[q])) < 1e-12:
                continue
            r = _frame(b[p], b[q]) @ fa.T
            if match_error(a @ r.T, b) <= tol:
                return r
    return None


def generate_by_rotation(fiducial, generators, tol: float = 1e-6) -> Basis:
    """Basis with columns ``D(g_i)|fiducial>``; the rotated copies must be
    mutually orthogonal within ``tol``."""
    amps = as_amplitudes(fiducial)
    amps = amps / np.linalg.norm(amps)
    j = (len(amps) - 1) / 2
    cols = np.column_stack([wigner_d(j, g) @ amps for g in generators])
    if cols.shape[1] != cols.shape[0]:
        raise SpinError(f"need {cols.shape[0]} generators, got {cols.shape[1]}")
    gram = cols.conj().T @ cols
    off = np.abs(gram - np.diag(np.diag(gram))).max()
    if off > tol:
        raise SpinError(f"rotated states are not orthogonal: max |<psi_i|psi_k>| = {off:.3g}")
    res = orthonormality_residual(cols)
    return Basis(cols, j, tol=max(res, 1e-10))


def is_isocoherent(basis, tol: float = 1e-6):
    """Whether all basis vectors are related by rotations.

    Returns ``(flag, classes)`` where ``classes`` is a partition of column
    indices into SU(2)-equivalence classes.  Columns are first compared by
    constellation fingerprint, then an aligning rotation is searched for, so
    mirror-image constellations are told apart.
    """
    u = as_matrix(basis)
    consts = [stars_from_state(u[:, i]) for i in range(u.shape[1])]
    prints = [fingerprint(c) for c in consts]
    classes: list[list[int]] = []
    for i, c in enumerate(consts):
        for cls in classes:
            rep = cls[0]
            if (fingerprints_match(prints[rep], prints[i], tol)
                    and find_aligning_rotation(consts[rep], c, tol) is not None):
                cls.append(i)
                break
        else:
            classes.append([i])
    return len(classes) == 1, classes


def state_equivalent(psi1, psi2, tol: float = 1e-6) -> bool:
    c1, c2 = stars_from_state(psi1), stars_from_state(psi2)
    return (fingerprints_match(fingerprint(c1), fingerprint(c2), tol)
            and find_aligning_rotation(c1, c2, tol) is not None)


def reference_polyhedron(name: str) -> np.ndarray:
    """Unit-sphere vertices of a few solids used to recognise constellations."""
    phi = (1 + np.sqrt(5)) / 2
    if name == "octahedron":
        v = np.vstack([np.eye(3), -np.eye(3)])
    elif name == "tetrahedron":
        v = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)
    elif name == "cube":
        v = np.array([[x, y, z] for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)], dtype=float)
    elif name == "cuboctahedron":
        v = []
        for i, k in combinations(range(3), 2):
            for s1 in (-1, 1):
                for s2 in (-1, 1):
                    p = np.zeros(3)
                    p[i], p[k] = s1, s2
                    v.append(p)
        v = np.array(v)
    elif name == "dodecahedron":
        v = [[x, y, z] for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)]
        for s1 in (-1, 1):
            for s2 in (-1, 1):
                v += [[0, s1 / phi, s2 * phi], [s1 / phi, s2 * phi, 0], [s1 * phi, 0, s2 / phi]]
        v = np.array(v, dtype=float)
    elif name == "icosahedron":
        v = []
        for s1 in (-1, 1):
            for s2 in (-1, 1):
                v += [[0, s1, s2 * phi], [s1, s2 * phi, 0], [s1 * phi, 0, s2]]
        v = np.array(v, dtype=float)
    else:
        raise KeyError(name)
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def basis_constellation(basis) -> np.ndarray:
    """All stars of all basis vectors as unit vectors, column by column."""
    u = as_matrix(basis)
    return np.vstack([stars_from_state(u[:, i]).vectors() for i in range(u.shape[1])])
