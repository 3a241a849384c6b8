import json
import warnings

import numpy as np
import pytest
from jsonschema import validate

from qbases import catalog as cat
from qbases.fileio import (
    FileFormatError,
    atomic_write_text,
    basis_from_dict,
    basis_to_dict,
    format_j,
    read_basis_file,
    read_constellation_file,
    write_basis_file,
    write_constellation_file,
)
from qbases.spin import NonUnitaryError, stars_from_state

from test_cli import schema


def test_format_j():
    assert format_j(1.5) == "3/2" and format_j(2) == 2


def test_basis_roundtrip(tmp_path):
    u = cat.u4_quantum()
    write_basis_file(tmp_path / "b.json", u, 1.5, {"note": "x"})
    doc = json.loads((tmp_path / "b.json").read_text())
    validate(doc, schema("basis_file"))
    b, meta = read_basis_file(tmp_path / "b.json")
    assert np.array_equal(b.matrix, u) and meta == {"note": "x"} and b.j == 1.5


def test_residual_thresholds():
    u = np.eye(3, dtype=complex)
    u[0, 0] = 1 + 1e-5
    with pytest.warns(UserWarning):
        basis_from_dict(basis_to_dict(u))
    u[0, 0] = 1.01
    with pytest.raises(NonUnitaryError):
        basis_from_dict(basis_to_dict(u))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        basis_from_dict(basis_to_dict(np.eye(3)))


@pytest.mark.parametrize("doc", [
    {"matrix": [[[1, 0]]]},
    {"j": 1, "matrix": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]},
    {"j": "1/3", "matrix": []},
    {"j": 0.5, "matrix": [[[1], [0, 0]], [[0, 0], [1, 0]]]},
    {"j": 0.5, "matrix": [[["nan", 0], [0, 0]], [[0, 0], [1, 0]]]},
])
def test_malformed_basis(doc):
    with pytest.raises(FileFormatError):
        basis_from_dict(doc)


def test_unreadable_files(tmp_path):
    (tmp_path / "x.json").write_text("{not json")
    with pytest.raises(FileFormatError):
        read_basis_file(tmp_path / "x.json")
    with pytest.raises(FileFormatError):
        read_basis_file(tmp_path / "missing.json")
    (tmp_path / "l.json").write_text("[1, 2]")
    with pytest.raises(FileFormatError):
        read_constellation_file(tmp_path / "l.json")


def test_constellation_roundtrip(tmp_path):
    u = cat.u3_quantum()
    consts = [stars_from_state(c) for c in u.T]
    write_constellation_file(tmp_path / "c.json", 1, consts, ["a", "b", "c"])
    validate(json.loads((tmp_path / "c.json").read_text()), schema("constellation_file"))
    j, labels, back = read_constellation_file(tmp_path / "c.json")
    assert j == 1 and labels == ["a", "b", "c"]
    assert all(np.allclose(x.stars, y.stars) for x, y in zip(consts, back))


def test_constellation_cardinality(tmp_path):
    (tmp_path / "c.json").write_text(json.dumps(
        {"j": 1, "states": [{"label": "a", "stars": [{"theta": 0, "phi": 0}]}]}))
    with pytest.raises(FileFormatError):
        read_constellation_file(tmp_path / "c.json")


def test_atomic_write_leaves_no_temp(tmp_path):
    atomic_write_text(tmp_path / "sub" / "f.txt", "hello")
    assert [p.name for p in (tmp_path / "sub").iterdir()] == ["f.txt"]
