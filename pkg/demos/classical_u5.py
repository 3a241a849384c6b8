"""The least quantum basis found at N = 5.

Two of its vectors are rotated copies of one state and three of another.  A
one-parameter family keeps all five orthonormal; B_1 is minimized along it
with a bounded scalar search.

Run:  python3 demos/classical_u5.py
"""
from qbases import catalog as cat
from qbases.measures import column_anticoherence
from qbases.rotations import is_isocoherent

ref = cat.constrained_refine_u5_classical()
print(f"r2 = {ref.r2:.6f}, phi = {ref.phi:.8f}, r1 = {ref.r1:.6f}, B_1 = {ref.b1:.8f}")
u = cat.u5_classical(ref.r2)
_, classes = is_isocoherent(u, tol=1e-5)
a1 = column_anticoherence(u, 1)
for cls in classes:
    print(f"class {cls}: A_1 = {a1[cls[0]]:.6f}")
