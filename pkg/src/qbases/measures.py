"""Anticoherence of spin states and quantumness of orthonormal bases.

The t-qubit reduced purity of the symmetric state associated with a spin-j
state is evaluated in closed form from the J_z amplitudes,

    R_t = sum_{k1,k2} | sum_n conj(Z[2j-n-k1]) Z[2j-n-k2] Gamma_n^{k1 k2} |^2,

with ``n = j + k`` running over ``0 .. 2j-t`` and

    Gamma_n^{k1 k2} = sqrt(C(n+k1, n) C(2j-n-k1, t-k1) C(n+k2, n) C(2j-n-k2, t-k2)) / C(2j, t).

The Gamma table factorizes as ``g[n, k1] * g[n, k2]``, so the bracket is the
reduced density matrix in the Dicke basis of ``t`` qubits.  An explicit
partial trace of the embedded multiqubit state serves as an oracle.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from .spin import (
    DICKE_QUBIT_CAP,
    NonUnitaryError,
    SpinError,
    as_amplitudes,
    as_matrix,
    dicke_embed,
    orthonormality_residual,
)


def _binom(n: int, k: int) -> int:
    return comb(n, k) if 0 <= k <= n else 0


@dataclass(frozen=True)
class PurityContext:
    """Precomputed Gamma coefficients for spin ``j`` and order ``t``."""

    two_j: int
    t: int
    weights: np.ndarray       # g[n, k], shape (2j-t+1, t+1)
    index: np.ndarray         # amplitude index 2j-n-k, same shape

    @property
    def j(self) -> float:
        return self.two_j / 2

    @property
    def gamma_table(self) -> np.ndarray:
        """``Gamma[n, k1, k2]``."""
        return self.weights[:, :, None] * self.weights[:, None, :]


@lru_cache(maxsize=None)
def purity_context(two_j: int, t: int) -> PurityContext:
    if not 1 <= t <= two_j:
        raise SpinError(f"order t={t} outside 1..{two_j}")
    total = comb(two_j, t)
    n = np.arange(two_j - t + 1)[:, None]
    k = np.arange(t + 1)[None, :]
    w = np.empty((two_j - t + 1, t + 1))
    for a in range(w.shape[0]):
        for b in range(t + 1):
            # exact integer ratio, then a single rounding
            w[a, b] = np.sqrt(_binom(a + b, a) * _binom(two_j - a - b, t - b) / total)
    idx = two_j - n - k
    for arr in (w, idx):
        arr.flags.writeable = False
    return PurityContext(two_j, t, w, idx)


def gamma_coefficient(ctx: PurityContext, k: int, k1: int, k2: int) -> float:
    """``Gamma_k^{k1 k2}`` straight from the binomial formula."""
    two_j, t = ctx.two_j, ctx.t
    num = (_binom(k + k1, k) * _binom(two_j - k - k1, t - k1)
           * _binom(k + k2, k) * _binom(two_j - k - k2, t - k2))
    return float(np.sqrt(num) / comb(two_j, t))


def _check_t(two_j: int, t: int):
    if not 1 <= t <= two_j:
        raise SpinError(f"order t={t} outside 1..{two_j}")


def reduced_density_matrices(u: np.ndarray, t: int) -> np.ndarray:
    """t-qubit reduced states (Dicke basis) of the columns of ``u``.

    ``u`` has shape ``(..., N, P)``; the result has shape ``(..., P, t+1, t+1)``.
    """
    ctx = purity_context(u.shape[-2] - 1, t)
    a = u[..., ctx.index, :] * ctx.weights[..., None]   # (..., n, k, P)
    return np.einsum("...nap,...nbp->...pab", a.conj(), a)


def _purities(u: np.ndarray, t: int) -> np.ndarray:
    m = reduced_density_matrices(u, t)
    return np.einsum("...ab,...ab->...", m.conj(), m).real


def reduced_purity(state, t: int) -> float:
    """Purity of the t-qubit reduction of the associated symmetric state."""
    z = as_amplitudes(state)
    _check_t(len(z) - 1, t)
    return float(_purities(z[:, None], t)[0])


def reduced_purity_oracle(state, t: int, max_qubits: int = DICKE_QUBIT_CAP) -> float:
    """Same quantity by brute force: embed into ``2j`` qubits, trace out the
    first ``2j - t`` explicitly and take ``tr(rho^2)``."""
    z = as_amplitudes(state)
    n = len(z) - 1
    _check_t(n, t)
    psi = dicke_embed(z, max_qubits=max_qubits).amplitudes
    psi = psi / np.linalg.norm(psi)
    mat = psi.reshape(2 ** (n - t), 2 ** t)
    rho = mat.T @ mat.conj()
    return float(np.vdot(rho, rho).real)


def anticoherence(state, t: int) -> float:
    """``A_t = (t+1)/t * (1 - R_t)``, 0 for coherent and 1 for t-anticoherent states."""
    return (t + 1) / t * (1.0 - reduced_purity(state, t))


def column_anticoherence(basis, t: int) -> np.ndarray:
    u = as_matrix(basis)
    _check_t(u.shape[0] - 1, t)
    return (t + 1) / t * (1.0 - _purities(u, t))


def basis_quantumness(basis, t: int, tol: float = 1e-8) -> float:
    """Mean t-anticoherence of the basis vectors."""
    u = as_matrix(basis)
    res = orthonormality_residual(u)
    if not res <= tol:
        raise NonUnitaryError(f"orthonormality residual {res:.3g} exceeds {tol:.3g}")
    return float(column_anticoherence(u, t).mean())


def quantumness_unchecked(u: np.ndarray, t: int) -> np.ndarray:
    """B_t of a unitary or a stack of unitaries, without validation."""
    return (t + 1) / t * (1.0 - _purities(u, t).mean(axis=-1))


@dataclass(frozen=True)
class QuantumnessReport:
    per_vector_A: dict
    B: dict
    orthonormality_residual: float

    def as_dict(self) -> dict:
        return {
            "per_vector_A": {str(t): list(map(float, v)) for t, v in self.per_vector_A.items()},
            "B": {str(t): float(v) for t, v in self.B.items()},
            "orthonormality_residual": self.orthonormality_residual,
        }


def quantumness_report(basis, t_list=None, tol: float = 1e-8) -> QuantumnessReport:
    u = as_matrix(basis)
    res = orthonormality_residual(u)
    if not res <= tol:
        raise NonUnitaryError(f"orthonormality residual {res:.3g} exceeds {tol:.3g}")
    if t_list is None:
        t_list = range(1, u.shape[0] - 1)
    per = {t: column_anticoherence(u, t) for t in t_list}
    return QuantumnessReport(per, {t: float(a.mean()) for t, a in per.items()}, res)


def haar_average_exact(n: int, t: int) -> float:
    """Haar average of B_t over U(n): ``(n-t-1)/(n-t)``."""
    if not 1 <= t <= n - 1:
        raise SpinError(f"order t={t} outside 1..{n - 1}")
    return (n - t - 1) / (n - t)


def haar_unitary(n: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Haar-random unitaries: QR of a complex Ginibre matrix with the phases
    of ``diag(R)`` moved into ``Q``."""
    shape = (n, n) if size is None else (size, n, n)
    g = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
    q, r = np.linalg.qr(g)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    return q * (d / np.abs(d))[..., None, :]


def cue_average_estimate(n: int, t: int, samples: int, seed: int,
                         chunk: int = 2048) -> tuple[float, float]:
    """Monte Carlo mean of B_t over Haar-random bases and its standard error."""
    if samples < 1:
        raise ValueError("samples must be positive")
    _check_t(n - 1, t)
    rng = np.random.default_rng(seed)
    values = []
    left = samples
    while left:
        k = min(chunk, left)
        values.append(quantumness_unchecked(haar_unitary(n, rng, size=k), t))
        left -= k
    v = np.concatenate(values)
    stderr = v.std(ddof=1) / np.sqrt(samples) if samples > 1 else float("nan")
    return float(v.mean()), float(stderr)
