"""Spin-j states, orthonormal bases and the Majorana stellar representation.

Amplitude ordering follows the |j, m> basis from m = +j down to m = -j:
``amplitudes[k] = <j, j-k | psi>``.  Basis matrices use the same row order,
so ``U[k, i] = <j, j-k | psi_i>`` and column ``i`` is the ``i``-th vector.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from .roots import polynomial_roots

#: largest number of qubits for which the explicit Dicke embedding is built
DICKE_QUBIT_CAP = 12


class SpinError(ValueError):
    pass


class NonUnitaryError(ValueError):
    pass


def parse_j(j) -> float:
    """Spin quantum number from ``1``, ``1.5``, ``Fraction(3, 2)`` or ``"3/2"``."""
    try:
        two_j = Fraction(j) * 2 if isinstance(j, str) else Fraction(j).limit_denominator(4) * 2
    except (ValueError, TypeError) as exc:
        raise SpinError(f"cannot interpret spin {j!r}") from exc
    if two_j.denominator != 1 or two_j < 1:
        raise SpinError(f"spin must be a positive half-integer, got {j!r}")
    return float(two_j / 2)


def dim_of(j) -> int:
    return int(round(2 * parse_j(j))) + 1


def spin_of_dim(n: int) -> float:
    if n < 2:
        raise SpinError("dimension must be at least 2")
    return (n - 1) / 2


def binomial_weights(two_j: int) -> np.ndarray:
    return np.sqrt([comb(two_j, k) for k in range(two_j + 1)], dtype=float)


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class SpinState:
    """Normalized pure spin-j state in the J_z eigenbasis."""

    j: float
    amplitudes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "j", parse_j(self.j))
        amps = _frozen(self.amplitudes).reshape(-1)
        if len(amps) != self.dim:
            raise SpinError(f"spin {self.j} needs {self.dim} amplitudes, got {len(amps)}")
        if abs(np.vdot(amps, amps).real - 1) > 1e-12:
            raise SpinError("amplitudes are not normalized; use make_spin_state")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return int(round(2 * self.j)) + 1

    @property
    def two_j(self) -> int:
        return self.dim - 1

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)

    def overlap(self, other) -> complex:
        """<self|other>."""
        return complex(np.vdot(self.amplitudes, as_amplitudes(other)))

    def fidelity(self, other) -> float:
        """Phase-insensitive |<self|other>|."""
        return abs(self.overlap(other))


def make_spin_state(j, amplitudes) -> SpinState:
    """Normalize ``amplitudes`` into a spin-j state."""
    j = parse_j(j)
    amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
    n = int(round(2 * j)) + 1
    if len(amps) != n:
        raise SpinError(f"spin {j} needs {n} amplitudes, got {len(amps)}")
    norm = np.linalg.norm(amps)
    if norm == 0 or not np.isfinite(norm):
        raise SpinError("cannot normalize a zero or non-finite vector")
    return SpinState(j, amps / norm)


def basis_state(j, m) -> SpinState:
    """|j, m>."""
    j = parse_j(j)
    n = int(round(2 * j)) + 1
    k = j - float(Fraction(m))
    if abs(k - round(k)) > 1e-12 or not 0 <= round(k) < n:
        raise SpinError(f"m={m} is not a projection for spin {j}")
    amps = np.zeros(n, dtype=complex)
    amps[int(round(k))] = 1.0
    return SpinState(j, amps)


def as_amplitudes(state) -> np.ndarray:
    if isinstance(state, SpinState):
        return state.amplitudes
    return np.asarray(state, dtype=complex).reshape(-1)


def as_state(state) -> SpinState:
    if isinstance(state, SpinState):
        return state
    amps = np.asarray(state, dtype=complex).reshape(-1)
    return make_spin_state(spin_of_dim(len(amps)), amps)


def orthonormality_residual(matrix) -> float:
    """Sum over all entries of ``|U^dagger U - 1|``."""
    u = np.asarray(matrix, dtype=complex)
    return float(np.abs(u.conj().T @ u - np.eye(u.shape[1])).sum())


@dataclass(frozen=True)
class Basis:
    """Orthonormal basis stored as a unitary matrix whose columns are states.

    ``tol`` bounds the orthonormality residual accepted at construction.
    """

    matrix: np.ndarray
    j: float | None = None
    tol: float = field(default=1e-10, compare=False, repr=False)

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise SpinError(f"basis matrix must be square, got shape {m.shape}")
        j = spin_of_dim(m.shape[0]) if self.j is None else parse_j(self.j)
        if int(round(2 * j)) + 1 != m.shape[0]:
            raise SpinError(f"spin {j} does not match dimension {m.shape[0]}")
        res = orthonormality_residual(m)
        if not res <= self.tol:
            raise NonUnitaryError(f"orthonormality residual {res:.3g} exceeds {self.tol:.3g}")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "j", j)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def residual(self) -> float:
        return orthonormality_residual(self.matrix)

    def column(self, i: int) -> SpinState:
        v = self.matrix[:, i]
        return SpinState(self.j, v / np.linalg.norm(v))

    @property
    def columns(self) -> list[SpinState]:
        return [self.column(i) for i in range(self.dim)]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


def as_matrix(basis) -> np.ndarray:
    if isinstance(basis, Basis):
        return basis.matrix
    return np.asarray(basis, dtype=complex)


def identity_basis(n: int) -> Basis:
    """The |j, m> basis of dimension ``n``."""
    return Basis(np.eye(n, dtype=complex))


@dataclass(frozen=True)
class StarConstellation:
    """Multiset of Majorana stars as ``(theta, phi)`` rows."""

    stars: np.ndarray

    def __post_init__(self):
        s = np.array(self.stars, dtype=float).reshape(-1, 2)
        theta = np.clip(s[:, 0], 0.0, np.pi)
        phi = np.mod(s[:, 1], 2 * np.pi)
        phi[np.isclose(phi, 2 * np.pi, rtol=0, atol=1e-15)] = 0.0
        phi[(theta == 0.0) | (theta == np.pi)] = 0.0
        s = np.column_stack([theta, phi])
        s.flags.writeable = False
        object.__setattr__(self, "stars", s)

    def __len__(self):
        return len(self.stars)

    @property
    def j(self) -> float:
        return len(self.stars) / 2

    def vectors(self) -> np.ndarray:
        """Unit vectors of the stars, shape ``(2j, 3)``."""
        return spherical_to_cartesian(self.stars[:, 0], self.stars[:, 1])

    @classmethod
    def from_vectors(cls, vecs) -> StarConstellation:
        v = np.asarray(vecs, dtype=float).reshape(-1, 3)
        v = v / np.linalg.norm(v, axis=1, keepdims=True)
        theta = np.arccos(np.clip(v[:, 2], -1, 1))
        phi = np.arctan2(v[:, 1], v[:, 0])
        pole = np.hypot(v[:, 0], v[:, 1]) < 1e-15
        theta[pole & (v[:, 2] > 0)] = 0.0
        theta[pole & (v[:, 2] < 0)] = np.pi
        return cls(np.column_stack([theta, phi]))


def spherical_to_cartesian(theta, phi) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


@dataclass(frozen=True)
class ComplexPolynomial:
    """``w(z) = sum_k coefficients[k] z^(nominal_degree - k)``."""

    coefficients: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coefficients", _frozen(self.coefficients).reshape(-1))

    @property
    def nominal_degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, z):
        return np.polyval(self.coefficients, z)


@dataclass(frozen=True)
class SymmetricState:
    """State of ``num_qubits`` qubits; qubit 1 is the most significant bit."""

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amplitudes).reshape(-1)
        if len(amps) != 2 ** self.num_qubits:
            raise SpinError("amplitude vector length must be 2**num_qubits")
        object.__setattr__(self, "amplitudes", amps)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.num_qubits)


def majorana_polynomial(state) -> ComplexPolynomial:
    """Coefficients ``c_k = (-1)^k Z_k sqrt(binom(2j, k))``."""
    z = as_amplitudes(state)
    two_j = len(z) - 1
    signs = (-1.0) ** np.arange(two_j + 1)
    return ComplexPolynomial(signs * binomial_weights(two_j) * z)


def roots_to_stars(roots) -> StarConstellation:
    roots = np.asarray(roots, dtype=complex)
    inf = ~np.isfinite(roots)
    theta = np.where(inf, np.pi, 2 * np.arctan(np.abs(np.where(inf, 0, roots))))
    phi = np.where(inf | (roots == 0), 0.0, np.angle(np.where(inf, 1, roots)))
    return StarConstellation(np.column_stack([theta, phi]))


def stars_from_state(state) -> StarConstellation:
    """Majorana constellation of ``state`` via stereographic projection of the
    roots of its Majorana polynomial (root at infinity = south pole)."""
    poly = majorana_polynomial(state)
    return roots_to_stars(polynomial_roots(poly.coefficients))


def state_from_stars(constellation) -> SpinState:
    """Spin state whose Majorana stars are ``constellation``.

    Each star contributes the homogeneous factor
    ``cos(theta/2) z - exp(i phi) sin(theta/2)``; for finite stars this is the
    monic factor ``z - z_i`` up to a positive scale, and a star at the south
    pole lowers the degree.  The result is then normalized, which fixes the
    global phase.
    """
    if not isinstance(constellation, StarConstellation):
        constellation = StarConstellation(constellation)
    n = len(constellation)
    if n == 0:
        raise SpinError("empty constellation")
    poly = np.array([1.0 + 0j])
    for theta, phi in constellation.stars:
        factor = np.array([np.cos(theta / 2), -np.exp(1j * phi) * np.sin(theta / 2)])
        poly = np.convolve(poly, factor)
    signs = (-1.0) ** np.arange(n + 1)
    z = signs * poly / binomial_weights(n)
    return make_spin_state(n / 2, z)


def coherent_state(j, theta: float, phi: float) -> SpinState:
    """Spin coherent state pointing along ``(theta, phi)``.

    Symmetrized product of the qubit state
    ``cos(theta/2)|0> + exp(i phi) sin(theta/2)|1>``, so
    ``Z_k = sqrt(binom(2j,k)) cos^(2j-k)(theta/2) sin^k(theta/2) exp(i k phi)``.
    """
    j = parse_j(j)
    two_j = int(round(2 * j))
    k = np.arange(two_j + 1)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    z = binomial_weights(two_j) * c ** (two_j - k) * s ** k * np.exp(1j * k * phi)
    return make_spin_state(j, z)


def coherent_state_matrix(j, theta, phi) -> np.ndarray:
    """Coherent-state amplitudes for arrays of directions, shape ``(..., 2j+1)``."""
    two_j = int(round(2 * parse_j(j)))
    k = np.arange(two_j + 1)
    theta = np.asarray(theta, dtype=float)[..., None]
    phi = np.asarray(phi, dtype=float)[..., None]
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return binomial_weights(two_j) * c ** (two_j - k) * s ** k * np.exp(1j * k * phi)


def dicke_embed(state, max_qubits: int = DICKE_QUBIT_CAP) -> SymmetricState:
    """Map |j, m> to the Dicke state with ``j - m`` excitations on 2j qubits."""
    z = as_amplitudes(state)
    n = len(z) - 1
    if n > max_qubits:
        raise SpinError(f"{n} qubits exceed the Dicke embedding cap of {max_qubits}")
    idx = np.arange(2 ** n)
    weight = np.zeros(2 ** n, dtype=int)
    for b in range(n):
        weight += (idx >> b) & 1
    amps = z[weight] / binomial_weights(n)[weight]
    return SymmetricState(n, amps)


def parametrize_basis_h3(theta1: float, theta2: float, phi: float) -> Basis:
    """Three-parameter family covering all spin-1 bases up to rotation.

    The first vector has its two stars on the circle of latitude ``theta1``
    on opposite sides; the other two follow from orthogonality.
    """
    t = np.tan(theta1 / 2) ** 2
    if not (np.isfinite(t) and t > 1e-300 and t < 1e300):
        raise SpinError("theta1 must lie strictly inside (0, pi)")
    cot2 = 1.0 / t
    upsilon = (np.exp(-1j * phi) / np.tan(theta2 / 2) * cot2
               + np.exp(1j * phi) * np.tan(theta2 / 2)) / np.sqrt(2)
    if not np.isfinite(upsilon) or abs(upsilon) < 1e-300:
        raise SpinError("degenerate family member (Upsilon is zero or infinite)")
    cols = [
        [1.0, 0.0, -t],
        [1.0, upsilon, cot2],
        [1.0, -(1 + cot2 ** 2) / np.conj(upsilon), cot2],
    ]
    u = np.array(cols, dtype=complex).T
    u /= np.linalg.norm(u, axis=0)
    return Basis(u, 1)
