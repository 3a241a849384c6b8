"""Random-walk searches for the most and least quantum bases.

At N = 3 the maximum of B_1 is 1 and the six stars of the optimal basis form
an octahedron.  At N = 5 a lexicographic search (B_1 first, then B_2) ends on
a basis whose twenty stars form a dodecahedron.  At N = 4 the minimum of B_1
is 1/9.

Run:  python3 demos/search_extremal_bases.py
"""
import numpy as np

from qbases.optimizer import SearchConfig, certify_extremum, multi_start_search, random_walk_search
from qbases.rotations import basis_constellation, fingerprint, reference_polyhedron


def solid_distance(u, solid):
    a = fingerprint(basis_constellation(u))
    b = fingerprint(reference_polyhedron(solid))
    return float(np.abs(a - b).max()) if len(a) == len(b) else np.inf


ms = multi_start_search(SearchConfig(3, "max-b1", seed=1), restarts=5)
print("N=3 max B_1 over 5 restarts:", np.round(ms.values, 12))
print("   distance to octahedron:", f"{solid_distance(ms.best.basis, 'octahedron'):.2e}")
print("   certificate:", certify_extremum(ms.best.basis).classification)

lex = random_walk_search(SearchConfig(5, "lex-b1-b2", seed=5))
print("N=5 lexicographic (B_1, B_2):", np.round(lex.value, 10), f"after {lex.proposals} proposals")
print("   distance to dodecahedron:", f"{solid_distance(lex.basis, 'dodecahedron'):.2e}")

low = random_walk_search(SearchConfig(4, "min-b1", seed=3))
print("N=4 min B_1:", f"{low.value:.12f}", "(1/9 =", f"{1 / 9:.12f})")
print("   certificate:", certify_extremum(low.basis).classification)
