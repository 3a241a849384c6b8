"""Random-walk search over U(N) for bases of extreme quantumness, analytic
derivatives of B_t along Lie-algebra directions, and extremum certification.

Directions at ``U`` are ``U exp(i x H)`` for Hermitian generators ordered as
the N diagonal projectors ``|i><i|``, then ``|k><l| + |l><k|`` for k < l, then
``i(|k><l| - |l><k|)`` for k < l.
"""
from __future__ import annotations

import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from .measures import haar_unitary, purity_context, quantumness_unchecked
from .phase_space import wehrl_entropy_fixed
from .rotations import angular_momentum_matrices
from .spin import Basis, NonUnitaryError, as_matrix, orthonormality_residual, spin_of_dim

POLAR_EVERY = 1000
LEX_EPS = 1e-9


# -- Lie algebra ------------------------------------------------------------

@dataclass(frozen=True)
class LieBasis:
    """The N^2 Hermitian generators used as coordinate directions."""

    n: int
    matrices: np.ndarray = field(repr=False)   # (N^2, N, N)
    labels: tuple = field(repr=False)

    def coordinates(self, h) -> np.ndarray:
        """Real coordinates ``x`` with ``sum_r x_r H^r = h`` for Hermitian ``h``."""
        h = np.asarray(h)
        n = self.n
        k, l = np.triu_indices(n, 1)
        return np.concatenate([np.diag(h).real, h[k, l].real, h[k, l].imag])

    def combine(self, x) -> np.ndarray:
        return np.tensordot(np.asarray(x, dtype=float), self.matrices, axes=1)


@lru_cache(maxsize=None)
def lie_basis(n: int) -> LieBasis:
    k, l = np.triu_indices(n, 1)
    mats, labels = [], []
    for i in range(n):
        h = np.zeros((n, n), dtype=complex)
        h[i, i] = 1
        mats.append(h)
        labels.append(("diag", i, i))
    for a, b in zip(k, l):
        h = np.zeros((n, n), dtype=complex)
        h[a, b] = h[b, a] = 1
        mats.append(h)
        labels.append(("plus", int(a), int(b)))
    for a, b in zip(k, l):
        h = np.zeros((n, n), dtype=complex)
        h[a, b], h[b, a] = 1j, -1j
        mats.append(h)
        labels.append(("minus", int(a), int(b)))
    mats = np.array(mats)
    mats.flags.writeable = False
    return LieBasis(n, mats, tuple(labels))


def sample_gue(n: int, rng: np.random.Generator) -> np.ndarray:
    """``(G + G^dagger)/2`` with real and imaginary parts of G standard normal.

    Diagonal entries have variance 1, off-diagonal real and imaginary parts
    variance 1/2.
    """
    if n < 2:
        raise ValueError("GUE sampling needs N >= 2")
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (g + g.conj().T) / 2


def polar_unitary(u: np.ndarray) -> np.ndarray:
    """Closest unitary matrix (unitary factor of the polar decomposition)."""
    w, _, vh = np.linalg.svd(u)
    return w @ vh


# -- objectives ---------------------------------------------------------------

@dataclass(frozen=True)
class Objective:
    """``value(U)`` returns a float, or a tuple for lexicographic objectives."""

    name: str
    sense: str                 # "max" or "min"
    orders: tuple = ()         # the B_t orders involved, if any
    lexicographic: bool = False
    wehrl_grid: tuple = (48, 96)

    def value(self, u: np.ndarray):
        if self.orders:
            vals = tuple(float(quantumness_unchecked(u, t)) for t in self.orders)
            return vals if self.lexicographic else float(sum(vals))
        cols = u.T
        return float(np.mean([wehrl_entropy_fixed(c, *self.wehrl_grid) for c in cols]))

    def better(self, new, old, step: float = 0.0) -> bool:
        """Strict improvement of ``new`` over ``old``.

        Lexicographic objectives require the last order to improve while the
        leading ones may drop by at most ``max(LEX_EPS, step**2)``: a step of
        size ``a`` along a curved level set of B_1 costs about ``a**2``.
        """
        if self.lexicographic:
            sign = 1 if self.sense == "max" else -1
            slack = max(LEX_EPS, step * step)
            head = all(sign * (a - b) >= -slack for a, b in zip(new[:-1], old[:-1]))
            return head and sign * (new[-1] - old[-1]) > 0
        return new > old if self.sense == "max" else new < old


_OBJ_RE = re.compile(r"^(max|min|lex)-(b\d+(?:-(?:plus-)?b\d+)*)$")


def objective_from_name(name: str) -> Objective:
    """Parse objective names.

    Accepted: ``max-b1``, ``min-b1``, ``max-b1-plus-b2`` (any sum of orders),
    ``lex-b1-b2`` (lexicographic, maximized), ``max-wehrl``, ``min-wehrl``.
    Underscores are treated as dashes and case is ignored.
    """
    key = name.strip().lower().replace("_", "-")
    if key in ("max-wehrl", "max-mean-wehrl"):
        return Objective(key, "max")
    if key in ("min-wehrl", "min-mean-wehrl"):
        return Objective(key, "min")
    m = _OBJ_RE.match(key)
    if not m:
        raise ValueError(f"unknown objective {name!r}")
    kind, rest = m.groups()
    orders = tuple(int(x) for x in re.findall(r"b(\d+)", rest))
    if kind == "lex":
        if "plus" in rest or len(orders) < 2:
            raise ValueError(f"lexicographic objective needs at least two plain orders: {name!r}")
        return Objective(key, "max", orders, lexicographic=True)
    if "plus" not in rest and len(orders) > 1:
        raise ValueError(f"ambiguous objective {name!r}; use -plus- or lex-")
    return Objective(key, kind, orders)


OBJECTIVES = ("max-b1", "min-b1", "max-b1-plus-b2", "lex-b1-b2", "max-wehrl", "min-wehrl")


# -- random walk --------------------------------------------------------------

@dataclass(frozen=True)
class SearchConfig:
    n: int
    objective: str = "max-b1"
    initial_step: float = 0.1
    inner_steps: int = 500
    halvings: int = 47
    min_step: float = 1e-15
    seed: int = 0
    max_stall: int | None = None
    start: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("dimension must be at least 2")
        if not self.initial_step > self.min_step > 0:
            raise ValueError("need initial_step > min_step > 0")
        if self.inner_steps < 1 or self.halvings < 1:
            raise ValueError("inner_steps and halvings must be positive")
        bad = [t for t in objective_from_name(self.objective).orders if not 1 <= t <= self.n - 1]
        if bad:
            raise ValueError(f"orders {bad} outside 1..{self.n - 1} for N={self.n}")


@dataclass
class SearchResult:
    basis: Basis
    value: object
    trace: list            # (proposal index, objective value) for every accepted step
    seed: int
    accepted: int
    proposals: int
    config: SearchConfig
    elapsed: float = 0.0

    @property
    def scalar_value(self) -> float:
        v = self.value
        return float(v[-1]) if isinstance(v, tuple) else float(v)


def random_walk_search(config: SearchConfig) -> SearchResult:
    """Accept ``U exp(i a H)`` (H from the GUE) whenever the objective strictly
    improves; halve ``a`` after every ``inner_steps`` proposals."""
    obj = objective_from_name(config.objective)
    rng = np.random.default_rng(config.seed)
    n = config.n
    u = haar_unitary(n, rng) if config.start is None else polar_unitary(np.array(config.start, dtype=complex))
    best = obj.value(u)
    trace = [(0, best)]
    a = config.initial_step
    accepted = proposals = stall = 0
    t0 = time.perf_counter()
    for _ in range(config.halvings + 1):
        if a < config.min_step:
            break
        for _ in range(config.inner_steps):
            proposals += 1
            cand = u @ expm(1j * a * sample_gue(n, rng))
            val = obj.value(cand)
            if obj.better(val, best, a):
                u, best = cand, val
                accepted += 1
                stall = 0
                trace.append((proposals, best))
            else:
                stall += 1
            if proposals % POLAR_EVERY == 0:
                u = polar_unitary(u)
                best = obj.value(u)
            if config.max_stall is not None and stall >= config.max_stall:
                break
        else:
            a /= 2
            continue
        break
    u = polar_unitary(u)
    best = obj.value(u)
    return SearchResult(Basis(u, spin_of_dim(n)), best, trace, config.seed, accepted,
                        proposals, config, time.perf_counter() - t0)


def _run(config):
    return random_walk_search(config)


@dataclass
class MultiStartResult:
    best: SearchResult
    runs: list

    @property
    def values(self) -> np.ndarray:
        return np.array([r.scalar_value for r in self.runs])

    @property
    def spread(self) -> float:
        v = self.values
        return float(v.max() - v.min())


def multi_start_search(config: SearchConfig, restarts: int = 10,
                       workers: int | None = None) -> MultiStartResult:
    """Independent walks with seeds spawned from ``config.seed``."""
    seqs = np.random.SeedSequence(config.seed).spawn(restarts)
    configs = [_with_seed(config, int(s.generate_state(1)[0])) for s in seqs]
    if workers and workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            runs = list(pool.map(_run, configs))
    else:
        runs = [random_walk_search(c) for c in configs]
    obj = objective_from_name(config.objective)
    best = runs[0]
    for r in runs[1:]:
        if obj.better(r.value, best.value):
            best = r
    return MultiStartResult(best, runs)


def _with_seed(config: SearchConfig, seed: int) -> SearchConfig:
    kw = {f: getattr(config, f) for f in config.__dataclass_fields__}
    kw["seed"] = seed
    return SearchConfig(**kw)


# -- derivatives of B_t -------------------------------------------------------

@lru_cache(maxsize=None)
def _scatter(n: int, t: int) -> np.ndarray:
    """Matrix taking the flattened (n, k) Gamma grid back to amplitude rows."""
    ctx = purity_context(n - 1, t)
    s = np.zeros((n, ctx.index.size))
    s[ctx.index.ravel(), np.arange(ctx.index.size)] = ctx.weights.ravel()
    return s


def _pieces(u: np.ndarray, t: int):
    ctx = purity_context(u.shape[0] - 1, t)
    a = u[ctx.index, :] * ctx.weights[..., None]               # (n, k, P)
    m = np.einsum("nap,nbp->pab", a.conj(), a)                 # (P, k, k)
    c = np.einsum("pab,nap->nbp", m, a)                        # (n, k, P)
    v = _scatter(u.shape[0], t) @ c.conj().reshape(-1, u.shape[1])   # (N, P)
    return ctx, a, m, u.T @ v


def gradient_bt(basis, t: int) -> np.ndarray:
    """Derivatives of B_t along the N^2 Lie-algebra directions."""
    u = as_matrix(basis)
    n = u.shape[0]
    _, _, _, w = _pieces(u, t)
    scale = 4 * (t + 1) / (n * t)
    return scale * np.einsum("rij,ij->r", lie_basis(n).matrices, w).imag


def hessian_bt(basis, t: int) -> np.ndarray:
    """Second derivatives of ``x -> B_t(U exp(i sum_r x_r H^r))`` at x = 0."""
    u = as_matrix(basis)
    n = u.shape[0]
    hs = lie_basis(n).matrices
    ctx, a, m, w = _pieces(u, t)
    delta = 1j * np.einsum("kq,rqp->rkp", u, hs)                # (R, N, P)
    da = delta[:, ctx.index, :] * ctx.weights[None, ..., None]  # (R, n, k, P)
    dm = (np.einsum("rnap,nbp->rpab", da.conj(), a)
          + np.einsum("nap,rnbp->rpab", a.conj(), da))
    term_a = 2 * np.einsum("spab,rpab->rs", dm.conj(), dm).real
    y = np.einsum("pab,snbp->spna", m.conj(), da)
    x = np.einsum("rnap,spna->rs", da.conj(), y)
    term_b = 2 * (x + x.T).real
    tt = np.einsum("rqm,smp,qp->rs", hs, hs, w)
    term_c = -2 * (tt + tt.T).real
    h = -(t + 1) / (n * t) * (term_a + term_b + term_c)
    return (h + h.T) / 2


# -- certification ------------------------------------------------------------

@dataclass(frozen=True)
class ExtremumCertificate:
    value: float
    gradient_norm: float
    hessian_spectrum: np.ndarray
    gauge_null_count: int
    reduced_spectrum: np.ndarray
    gauge_residual: float
    classification: str

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "gradient_norm": self.gradient_norm,
            "hessian_spectrum": list(map(float, self.hessian_spectrum)),
            "gauge_null_count": self.gauge_null_count,
            "reduced_spectrum": list(map(float, self.reduced_spectrum)),
            "gauge_residual": self.gauge_residual,
            "classification": self.classification,
        }


def gauge_directions(basis) -> np.ndarray:
    """Lie coordinates of directions that leave every B_t unchanged: the N
    column phases and the three rigid rotations ``exp(-i eps J_a) U``."""
    u = as_matrix(basis)
    n = u.shape[0]
    lb = lie_basis(n)
    vecs = [np.eye(n * n)[i] for i in range(n)]
    for jm in angular_momentum_matrices(spin_of_dim(n)):
        vecs.append(lb.coordinates(-u.conj().T @ jm @ u))
    return np.array(vecs)


def certify_extremum(basis, t_list=(1,), null_tol: float = 1e-7,
                     grad_tol: float = 1e-6) -> ExtremumCertificate:
    """Gradient norm and Hessian of ``sum_t B_t``, classified on the
    complement of the gauge directions."""
    u = as_matrix(basis)
    res = orthonormality_residual(u)
    if res > 1e-6:
        raise NonUnitaryError(f"orthonormality residual {res:.3g} exceeds 1e-06")
    value = float(sum(quantumness_unchecked(u, t) for t in t_list))
    grad = sum(gradient_bt(u, t) for t in t_list)
    hess = sum(hessian_bt(u, t) for t in t_list)
    spectrum = np.linalg.eigvalsh(hess)
    gnorm = float(np.linalg.norm(grad))
    g = gauge_directions(u)
    # orthonormal gauge span and its complement
    q, s, _ = np.linalg.svd(g.T, full_matrices=True)
    rank = int((s > 1e-10 * s[0]).sum())
    span, comp = q[:, :rank], q[:, rank:]
    gauge_residual = float(np.abs(hess @ span).max()) if rank else 0.0
    reduced = np.linalg.eigvalsh(comp.T @ hess @ comp)
    nonnull = reduced[np.abs(reduced) >= null_tol]
    if gnorm >= grad_tol or nonnull.size == 0:
        label = "inconclusive"
    elif np.all(nonnull < 0):
        label = "local_max"
    elif np.all(nonnull > 0):
        label = "local_min"
    else:
        label = "saddle"
    return ExtremumCertificate(value, gnorm, spectrum, int((np.abs(spectrum) < null_tol).sum()),
                               reduced, gauge_residual, label)
