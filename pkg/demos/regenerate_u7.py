"""Rebuild the N = 7 quantum basis fixture.

The basis is grown from the octahedral j = 3 state by a seeded search and
polished so that every column is a rotated octahedron.  By default the result
is written to a scratch directory; pass --install to overwrite the packaged
fixture (same as ``python -m qbases catalog --regenerate-u7``).

Run:  python3 demos/regenerate_u7.py [--install]
"""
import sys
import tempfile

import numpy as np

from qbases import catalog as cat
from qbases.fileio import read_basis_file
from qbases.measures import basis_quantumness

target = None if "--install" in sys.argv else tempfile.mkdtemp(prefix="u7_")
path = cat.write_u7_fixture(target)
basis, meta = read_basis_file(path)
print("wrote", path)
print("B_1..B_4:", [round(basis_quantumness(basis, t), 12) for t in range(1, 5)])
print("residual:", f"{basis.residual:.2e}", " meta:", {k: meta[k] for k in ("seed", "provenance") if k in meta})
