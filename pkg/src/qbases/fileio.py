"""JSON basis and constellation files.

Basis file::

    {"j": "3/2", "matrix": [[[re, im], ...], ...], "meta": {...}}

Constellation file::

    {"j": 1, "states": [{"label": "psi_0", "stars": [{"theta": t, "phi": p}, ...]}]}
"""
from __future__ import annotations

import json
import os
import tempfile
import warnings
from fractions import Fraction
from pathlib import Path

import numpy as np

from .spin import (
    Basis,
    NonUnitaryError,
    SpinError,
    StarConstellation,
    dim_of,
    orthonormality_residual,
    parse_j,
)

WARN_RESIDUAL = 1e-6
REJECT_RESIDUAL = 1e-3


class FileFormatError(ValueError):
    pass


def atomic_write_text(path, text: str):
    """Write to a temporary file in the target directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def format_j(j) -> str | int:
    f = Fraction(parse_j(j)).limit_denominator(2)
    return int(f) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise FileFormatError(f"{path}: {exc}") from exc


def basis_to_dict(matrix, j=None, meta=None) -> dict:
    u = np.asarray(matrix, dtype=complex)
    if j is None:
        j = (u.shape[0] - 1) / 2
    return {
        "j": format_j(j),
        "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in u],
        "meta": dict(meta or {}),
    }


def basis_from_dict(doc: dict, reject: float = REJECT_RESIDUAL,
                    warn: float = WARN_RESIDUAL) -> tuple[Basis, dict]:
    """Parse a basis document; returns the Basis and its meta map.

    Residuals above ``warn`` emit a warning, above ``reject`` raise
    ``NonUnitaryError``.
    """
    try:
        j = parse_j(doc["j"])
        rows = doc["matrix"]
        u = np.array([[complex(float(e[0]), float(e[1])) for e in row] for row in rows])
        meta = doc.get("meta", {}) or {}
    except (KeyError, TypeError, ValueError, IndexError, SpinError) as exc:
        raise FileFormatError(f"malformed basis document: {exc}") from exc
    n = dim_of(j)
    if u.shape != (n, n):
        raise FileFormatError(f"matrix shape {u.shape} does not match j={doc['j']} (N={n})")
    if not np.all(np.isfinite(u)):
        raise FileFormatError("matrix has non-finite entries")
    res = orthonormality_residual(u)
    if res > reject:
        raise NonUnitaryError(f"orthonormality residual {res:.3g} exceeds {reject:g}")
    if res > warn:
        warnings.warn(f"orthonormality residual {res:.3g} exceeds {warn:g}", stacklevel=2)
    return Basis(u, j, tol=max(res, 1e-10)), meta


def read_basis_file(path, **kw) -> tuple[Basis, dict]:
    doc = _load_json(path)
    if not isinstance(doc, dict):
        raise FileFormatError(f"{path}: expected a JSON object")
    return basis_from_dict(doc, **kw)


def write_basis_file(path, matrix, j=None, meta=None):
    atomic_write_text(path, json.dumps(basis_to_dict(matrix, j, meta), indent=1) + "\n")


def constellations_to_dict(j, constellations, labels=None) -> dict:
    labels = labels or [f"psi_{i}" for i in range(len(constellations))]
    return {
        "j": format_j(j),
        "states": [
            {"label": lab, "stars": [{"theta": float(t), "phi": float(p)} for t, p in c.stars]}
            for lab, c in zip(labels, constellations)
        ],
    }


def constellations_from_dict(doc: dict):
    """Returns ``(j, labels, constellations)``."""
    try:
        j = parse_j(doc["j"])
        labels, consts = [], []
        for entry in doc["states"]:
            stars = [(float(s["theta"]), float(s["phi"])) for s in entry["stars"]]
            labels.append(str(entry.get("label", f"psi_{len(labels)}")))
            consts.append(StarConstellation(stars))
    except (KeyError, TypeError, ValueError, SpinError) as exc:
        raise FileFormatError(f"malformed constellation document: {exc}") from exc
    for lab, c in zip(labels, consts):
        if len(c.stars) != round(2 * j):
            raise FileFormatError(f"state {lab!r} has {len(c.stars)} stars, expected {round(2 * j)}")
    return j, labels, consts


def read_constellation_file(path):
    doc = _load_json(path)
    if not isinstance(doc, dict):
        raise FileFormatError(f"{path}: expected a JSON object")
    return constellations_from_dict(doc)


def write_constellation_file(path, j, constellations, labels=None):
    atomic_write_text(path, json.dumps(constellations_to_dict(j, constellations, labels), indent=1) + "\n")
