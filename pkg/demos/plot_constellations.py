"""Flat maps of the star constellations of a few reference bases.

Writes one Mercator and one orthographic SVG per basis into ./constellation_plots.

Run:  python3 demos/plot_constellations.py
"""
from pathlib import Path

from qbases import catalog as cat
from qbases.cli import render_svg
from qbases.spin import stars_from_state

out = Path("constellation_plots")
out.mkdir(exist_ok=True)
for name in ("u3_quantum", "u4_quantum", "u5_quantum", "u5_classical", "u7_quantum"):
    u = cat.catalog_get(name).basis.matrix
    consts = [stars_from_state(c) for c in u.T]
    labels = [f"psi_{i}" for i in range(len(consts))]
    for proj in ("mercator", "orthographic"):
        path = out / f"{name}_{proj}.svg"
        path.write_text(render_svg(labels, consts, proj))
        print("wrote", path)
