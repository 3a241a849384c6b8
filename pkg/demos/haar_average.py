"""Haar-random bases: Monte Carlo mean of B_t against (N-t-1)/(N-t).

Run:  python3 demos/haar_average.py
"""
from qbases.measures import cue_average_estimate, haar_average_exact

for n in range(3, 8):
    for t in (1, 2):
        mean, err = cue_average_estimate(n, t, 10_000, seed=n * 10 + t)
        exact = haar_average_exact(n, t)
        # t = 2j gives B_t = 0 for every basis, so the spread is pure roundoff
        z = abs(mean - exact) / err if err > 1e-12 else 0.0
        print(f"N={n} t={t}  {mean:.5f} +- {err:.5f}   exact {exact:.5f}   {z:4.1f} sigma")
