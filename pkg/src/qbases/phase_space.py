"""Husimi function, Wehrl entropy and distance to the coherent states."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spin import (
    as_amplitudes,
    as_matrix,
    binomial_weights,
    coherent_state_matrix,
    orthonormality_residual,
    NonUnitaryError,
)


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class QuadratureSpec:
    """Gauss-Legendre nodes in cos(theta) times a uniform grid in phi.

    The grid is doubled in both directions until the entropy changes by less
    than ``tol``, at most ``max_doublings`` times.
    """

    n_theta: int = 32
    n_phi: int = 64
    tol: float = 1e-9
    max_doublings: int = 6

    def __post_init__(self):
        if self.n_theta < 16 or self.n_phi < 32:
            raise ValueError("QuadratureSpec needs n_theta >= 16 and n_phi >= 32")


@dataclass(frozen=True)
class HusimiExtremum:
    q_max: float
    location: tuple
    d_fs: float


def husimi(state, theta, phi):
    """``Q(theta, phi) = |<psi|theta, phi>|^2``; broadcasts over angle arrays."""
    z = as_amplitudes(state)
    j = (len(z) - 1) / 2
    amp = coherent_state_matrix(j, theta, phi) @ z.conj()
    q = np.abs(amp) ** 2
    return float(q) if q.ndim == 0 else q


def _husimi_grid(z: np.ndarray, n_theta: int, n_phi: int):
    """Husimi values on the product grid and the matching weights of
    ``(1/4pi) dOmega``."""
    two_j = len(z) - 1
    x, wx = np.polynomial.legendre.leggauss(n_theta)
    c = np.sqrt((1 + x) / 2)       # cos(theta/2)
    s = np.sqrt((1 - x) / 2)       # sin(theta/2)
    k = np.arange(two_j + 1)
    b = binomial_weights(two_j) * z.conj() * c[:, None] ** (two_j - k) * s[:, None] ** k
    # sum_k b_k exp(i k phi) on the uniform phi grid via inverse FFT
    pad = np.zeros((n_theta, n_phi), dtype=complex)
    m = min(two_j + 1, n_phi)
    pad[:, :m] = b[:, :m]
    if two_j + 1 > n_phi:
        for kk in range(n_phi, two_j + 1):
            pad[:, kk % n_phi] += b[:, kk]
    amp = np.fft.ifft(pad, axis=1) * n_phi
    q = np.abs(amp) ** 2
    weights = (wx / 2)[:, None] / n_phi
    return q, weights


def _entropy_on_grid(z, n_theta, n_phi) -> float:
    q, w = _husimi_grid(z, n_theta, n_phi)
    n = len(z)
    qlogq = np.zeros_like(q)
    pos = q > 1e-300
    qlogq[pos] = q[pos] * np.log(q[pos])
    return float(-n * (w * qlogq).sum())


def husimi_normalization(state, n_theta: int = 32, n_phi: int = 64) -> float:
    """``(N/4pi) * integral of Q`` (exactly 1 for a normalized state)."""
    z = as_amplitudes(state)
    q, w = _husimi_grid(z, n_theta, n_phi)
    return float(len(z) * (w * q).sum())


def wehrl_entropy(state, quad: QuadratureSpec | None = None) -> float:
    """``-(N/4pi) * integral of Q ln Q`` over the sphere."""
    quad = quad or QuadratureSpec()
    z = as_amplitudes(state)
    nt, nphi = quad.n_theta, quad.n_phi
    prev = _entropy_on_grid(z, nt, nphi)
    for _ in range(quad.max_doublings):
        nt, nphi = 2 * nt, 2 * nphi
        cur = _entropy_on_grid(z, nt, nphi)
        if abs(cur - prev) < quad.tol:
            return cur
        prev = cur
    raise QuadratureError(
        f"Wehrl entropy not converged to {quad.tol:g} after {quad.max_doublings} doublings")


def wehrl_entropy_fixed(state, n_theta: int, n_phi: int) -> float:
    """Single-grid estimate, for objectives evaluated many times."""
    return _entropy_on_grid(as_amplitudes(state), n_theta, n_phi)


def coherent_wehrl(n: int) -> float:
    """Minimum Wehrl entropy ``(N-1)/N``, attained by coherent states."""
    return (n - 1) / n


def mean_wehrl_haar(n: int) -> float:
    """Wehrl entropy averaged over random pure states: ``sum_{k=2}^N 1/k``."""
    if n < 2:
        raise ValueError("dimension must be at least 2")
    return float(sum(1.0 / k for k in range(2, n + 1)))


# Q in a stereographic chart: |p(z)|^2 / (1+|z|^2)^(2j), with
# p(z) = sum_k b_k z^k in the north chart and the reversed polynomial in
# w = conj-free 1/z coordinates on the south chart.

def _chart_poly(z: np.ndarray, south: bool) -> np.ndarray:
    """Ascending coefficients of the chart polynomial."""
    b = binomial_weights(len(z) - 1) * z.conj()
    return b[::-1] if south else b


def _log_q_derivatives(coef: np.ndarray, x: np.ndarray):
    """ln Q and its real gradient/Hessian at ``x = (Re w, Im w)``."""
    n = len(coef) - 1
    w = complex(x[0], x[1])
    p = np.polynomial.polynomial.polyval(w, coef)
    d1 = np.polynomial.polynomial.polyder(coef)
    d2 = np.polynomial.polynomial.polyder(d1)
    p1 = np.polynomial.polynomial.polyval(w, d1) if n >= 1 else 0.0
    p2 = np.polynomial.polynomial.polyval(w, d2) if n >= 2 else 0.0
    r = 1 + abs(w) ** 2
    if abs(p) == 0:
        return -np.inf, np.zeros(2), np.zeros((2, 2))
    f = np.log(abs(p) ** 2) - n * np.log(r)
    fz = p1 / p - n * np.conj(w) / r
    fzz = p2 / p - (p1 / p) ** 2 + n * np.conj(w) ** 2 / r ** 2
    fzzb = -n / r ** 2
    grad = np.array([2 * fz.real, -2 * fz.imag])
    hess = np.array([[2 * fzz.real + 2 * fzzb, -2 * fzz.imag],
                     [-2 * fzz.imag, -2 * fzz.real + 2 * fzzb]])
    return f, grad, hess


def _chart_point(theta: float, phi: float):
    """Chart coordinate for a direction: north chart ``tan(theta/2) e^{i phi}``,
    south chart ``cot(theta/2) e^{-i phi}``."""
    if theta <= np.pi / 2:
        return False, np.tan(theta / 2) * np.exp(1j * phi)
    return True, np.exp(-1j * phi) / np.tan(theta / 2)


def _chart_angles(south: bool, w: complex):
    theta = 2 * np.arctan(abs(w))
    phi = np.angle(w)
    if south:
        theta, phi = np.pi - theta, -phi
    return theta, phi % (2 * np.pi)


def _ascend(coef, x, maxiter: int = 100):
    """Damped Newton ascent of ln Q.  The shift keeps the model Hessian
    negative definite, which also covers degenerate maxima (rings)."""
    f, g, h = _log_q_derivatives(coef, x)
    for _ in range(maxiter):
        if np.linalg.norm(g) < 1e-13 * (1 + np.linalg.norm(x)):
            break
        top = np.linalg.eigvalsh(h)[-1]
        mu = max(0.0, top + 1e-10 * (1 + abs(top)))
        step = np.linalg.solve(h - mu * np.eye(2), -g)
        for _ in range(40):
            f_new, g_new, h_new = _log_q_derivatives(coef, x + step)
            if f_new >= f:
                break
            step = step / 2
        else:
            break
        if f_new == f and np.allclose(step, 0):
            break
        x, f, g, h = x + step, f_new, g_new, h_new
    return x


def husimi_max(state, grid=(90, 180), starts: int = 10) -> HusimiExtremum:
    """Global maximum of the Husimi function.

    A coarse grid locates candidate cells; the best ``starts`` of them are
    refined by damped Newton ascent on ln Q with analytic derivatives in the
    stereographic chart that keeps the point away from infinity.
    """
    z = as_amplitudes(state)
    z = z / np.linalg.norm(z)
    n_t, n_p = grid
    theta = (np.arange(n_t) + 0.5) * np.pi / n_t
    phi = np.arange(n_p) * 2 * np.pi / n_p
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    q = husimi(z, tt, pp)
    cand = [(float(husimi(z, 0.0, 0.0)), 0.0, 0.0), (float(husimi(z, np.pi, 0.0)), np.pi, 0.0)]
    order = np.argsort(q, axis=None)[::-1][:starts]
    cand += [(q.flat[i], tt.flat[i], pp.flat[i]) for i in order]
    best = max(cand)
    for _, th0, ph0 in cand:
        south, w0 = _chart_point(th0, ph0)
        x = _ascend(_chart_poly(z, south), np.array([w0.real, w0.imag]))
        th, ph = _chart_angles(south, complex(x[0], x[1]))
        val = float(husimi(z, th, ph))
        if val > best[0]:
            best = (val, th, ph)
    q_max = min(best[0], 1.0)
    return HusimiExtremum(q_max, (best[1], best[2]), float(np.arccos(np.sqrt(q_max))))


def basis_phase_space_stats(basis, quad: QuadratureSpec | None = None, tol: float = 1e-6):
    """Mean Wehrl entropy and mean Q_max over the basis vectors."""
    u = as_matrix(basis)
    res = orthonormality_residual(u)
    if not res <= tol:
        raise NonUnitaryError(f"orthonormality residual {res:.3g} exceeds {tol:.3g}")
    cols = [u[:, i] / np.linalg.norm(u[:, i]) for i in range(u.shape[1])]
    sw = np.mean([wehrl_entropy(c, quad) for c in cols])
    qm = np.mean([husimi_max(c).q_max for c in cols])
    return float(sw), float(qm)
