"""Roots of polynomials on the extended complex plane.

Simultaneous Aberth-Ehrlich iteration, with the companion-matrix eigenvalues
(``numpy.roots``) as a fallback when the iteration stalls.  Roots that
coincide up to floating point noise are detected as multiple roots and
replaced by a single refined value repeated with its multiplicity.

Coefficients are ordered from the highest power down, as in ``numpy.polyval``.
"""
from __future__ import annotations

import numpy as np
from scipy.cluster.hierarchy import fcluster, linkage

EPS = np.finfo(float).eps

#: leading (trailing) coefficients below this fraction of max|c| count as
#: roots at infinity (zero)
NEGLIGIBLE = 1e-13

#: single-linkage radii (chordal distance on the unit sphere) at which
#: candidate root clusters are tested for multiplicity
CLUSTER_RADII = (1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 3e-2, 1e-1)

#: relative size of a Taylor coefficient accepted as numerically zero
MULTIPLICITY_TOL = 1e-10


class RootFindingError(ValueError):
    pass


def _backward_bound(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    return np.polyval(np.abs(coeffs), np.abs(z))


def aberth(coeffs, maxiter: int = 500, offset: float = 0.4):
    """Aberth-Ehrlich iteration for all roots of a polynomial with nonzero
    leading and trailing coefficients.

    Returns ``(roots, converged)``.  Convergence means every root satisfies
    ``|p(z)| <= 8 n eps sum|c_k||z|^(n-k)``, i.e. is an exact root of a
    polynomial within rounding of the input.
    """
    c = np.asarray(coeffs, dtype=complex)
    n = len(c) - 1
    if n < 1:
        return np.empty(0, dtype=complex), True
    c = c / c[0]
    dc = np.polyder(c)
    # geometric-mean radius of the roots
    radius = abs(c[-1]) ** (1.0 / n)
    z = radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + offset))
    bound_scale = 8 * n * EPS
    best = z.copy()
    best_res = np.inf
    for _ in range(maxiter):
        pv = np.polyval(c, z)
        res = np.abs(pv) / np.maximum(_backward_bound(c, z), np.finfo(float).tiny)
        worst = res.max()
        if worst < best_res:
            best_res, best = worst, z.copy()
        if worst <= bound_scale:
            return z, True
        dpv = np.polyval(dc, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pv / dpv
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            s = (1.0 / diff).sum(axis=1)
            step = ratio / (1.0 - ratio * s)
        bad = ~np.isfinite(step)
        if bad.any():
            step[bad] = 1e-3 * (1 + abs(z[bad])) * np.exp(1j * np.arange(bad.sum()))
        done = res <= bound_scale
        step[done] = 0.0
        z = z - step
    return best, False


def _taylor(coeffs: np.ndarray, c: complex, order: int):
    """Taylor coefficients of ``p`` at ``c`` up to ``order`` and the matching
    coefficient-magnitude scales."""
    out, scale = [], []
    p = coeffs.astype(complex)
    pa = np.abs(coeffs)
    fact = 1.0
    for k in range(order + 1):
        if k:
            fact *= k
        out.append(np.polyval(p, c) / fact)
        scale.append(np.polyval(pa, abs(c)) / fact)
        p = np.polyder(p)
        pa = np.polyder(pa)
    return np.array(out), np.array(scale)


def _refine_multiple(coeffs: np.ndarray, zs: np.ndarray):
    """Test whether ``zs`` is one root of multiplicity ``len(zs)``.

    Returns the refined root or ``None``.
    """
    m = len(zs)
    centre = zs.mean()
    big = abs(centre) > 1.0
    if big:
        poly, w = coeffs[::-1], (1.0 / zs).mean()
    else:
        poly, w = coeffs, centre
    if len(poly) - 1 < m:
        return None
    deriv = poly.astype(complex)
    for _ in range(m - 1):
        deriv = np.polyder(deriv)
    dd = np.polyder(deriv)
    t, scale = _taylor(poly, w, m - 1)
    best = np.max(np.abs(t) / np.maximum(scale, np.finfo(float).tiny))
    for _ in range(8):
        d2 = np.polyval(dd, w)
        if d2 == 0:
            break
        trial = w - np.polyval(deriv, w) / d2
        tt, ss = _taylor(poly, trial, m - 1)
        err = np.max(np.abs(tt) / np.maximum(ss, np.finfo(float).tiny))
        if err >= best:
            break
        w, best = trial, err
    if best > MULTIPLICITY_TOL:
        return None
    return 1.0 / w if big else w


def _to_sphere(z: np.ndarray) -> np.ndarray:
    r2 = np.abs(z) ** 2
    return np.column_stack([2 * z.real, 2 * z.imag, 1 - r2]) / (1 + r2)[:, None]


def group_multiple_roots(coeffs, roots) -> np.ndarray:
    """Replace clusters of nearly coincident finite roots by exact repeats."""
    roots = np.asarray(roots, dtype=complex).copy()
    if len(roots) < 2:
        return roots
    coeffs = np.asarray(coeffs, dtype=complex)
    pts = _to_sphere(roots)
    tree = linkage(pts, method="single")
    accepted: dict[frozenset, complex] = {}
    for radius in CLUSTER_RADII:
        labels = fcluster(tree, radius, criterion="distance")
        for lab in np.unique(labels):
            members = frozenset(np.flatnonzero(labels == lab).tolist())
            if len(members) < 2 or members in accepted:
                continue
            val = _refine_multiple(coeffs, roots[sorted(members)])
            if val is None:
                continue
            for key in [k for k in accepted if k <= members]:
                del accepted[key]
            accepted[members] = val
    for members, val in accepted.items():
        roots[sorted(members)] = val
    return roots


def polynomial_roots(coeffs) -> np.ndarray:
    """All ``len(coeffs) - 1`` roots counting multiplicity.

    Roots at infinity (vanishing leading coefficients) are reported as
    ``complex(inf, 0)``; they come first, then finite roots.
    """
    c = np.asarray(coeffs, dtype=complex)
    n = len(c) - 1
    scale = np.abs(c).max() if len(c) else 0.0
    if n < 0 or scale == 0:
        raise RootFindingError("zero polynomial has no well-defined roots")
    small = np.abs(c) < NEGLIGIBLE * scale
    lead = int(np.argmin(small))          # first significant coefficient
    trail = int(np.argmin(small[::-1]))   # trailing negligible count
    core = c[lead:len(c) - trail]
    finite = np.empty(0, dtype=complex)
    if len(core) > 1:
        finite, ok = aberth(core)
        if not ok:
            finite = np.roots(core)
        finite = group_multiple_roots(core, finite)
    out = np.concatenate([
        np.full(lead, complex(np.inf, 0.0)),
        finite,
        np.zeros(trail, dtype=complex),
    ])
    assert len(out) == n
    return out


def relative_residuals(coeffs, roots) -> np.ndarray:
    """``|p(z)| / sum|c_k||z|^(n-k)`` for finite roots; 0 for roots at infinity
    (evaluated on the reversed polynomial at ``1/z``)."""
    c = np.asarray(coeffs, dtype=complex)
    out = []
    for z in np.asarray(roots):
        if not np.isfinite(z):
            out.append(abs(c[0]) / np.abs(c).max())
        elif abs(z) <= 1:
            out.append(abs(np.polyval(c, z)) / np.polyval(np.abs(c), abs(z)))
        else:
            w = 1 / z
            out.append(abs(np.polyval(c[::-1], w)) / np.polyval(np.abs(c[::-1]), abs(w)))
    return np.array(out)
