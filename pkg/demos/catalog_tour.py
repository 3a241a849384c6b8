"""Tour of the reference bases: quantumness, Wehrl entropy and Husimi maxima.

Run:  python3 demos/catalog_tour.py
"""
import numpy as np

from qbases import catalog as cat
from qbases.measures import basis_quantumness

print(f"{'basis':22s} {'N':>2s}  {'B_1':>10s} {'B_2':>10s} {'B_3':>10s}  {'<S_W>':>8s} {'<Q_max>':>8s}")
for name in cat.catalog_names():
    entry = cat.catalog_get(name)
    u = entry.basis.matrix
    n = u.shape[0]
    tol = max(entry.basis.residual * 10, 1e-8)
    bs = [max(basis_quantumness(u, t, tol=tol), 0.0) if t <= n - 1 else np.nan for t in (1, 2, 3)]
    sw, qm = cat.phase_space_summary(name)
    cells = " ".join(f"{b:10.7f}" if np.isfinite(b) else f"{'-':>10s}" for b in bs)
    print(f"{name:22s} {n:2d}  {cells}  {sw:8.4f} {qm:8.4f}")

# The quantum bases sit far from the coherent states; the |j,m> bases and the
# Fourier-like classical ones are close to them.
print()
for name in ("u5_quantum", "jm_basis_5"):
    rep = cat.catalog_verify(name)
    print(name, "PASS" if rep.ok else "FAIL")
    for ln in rep.lines:
        print(f"   {ln.measure:12s} {ln.observed:.8f} (reference {ln.expected:.8f}{'' if ln.gating else ', disputed'})")
