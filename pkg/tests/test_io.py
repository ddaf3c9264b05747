import io
import json
from fractions import Fraction as F

import numpy as np
import pytest

from spectile.certify import certificate_consistency_check, certify_nonspectral
from spectile.errors import DegenerateBody, ReportFormatError
from spectile.fourier import GridDomain, GridFunction
from spectile.io import (
    certificate_from_json,
    certificate_to_json,
    dumps,
    lattice_from_json,
    lattice_to_json,
    points_from_json,
    polytope_from_json,
    polytope_to_json,
    read_json,
    to_jsonable,
    write_grid_csv,
    write_text,
)
from spectile.lattice import Lattice
from spectile.spectral import Verdict


def test_polytope_json_keeps_rationals(std_triangle):
    obj = polytope_to_json(std_triangle)
    assert obj == {"dim": 2, "vertices": [["0", "0"], ["0", "1"], ["1", "0"]]}
    assert polytope_from_json({"vertices": [["1/3", "0"], [1, 0], ["0.5", 2]]}).vertices[0] == (F(1, 3), F(0))


def test_polytope_json_errors():
    with pytest.raises(ReportFormatError):
        polytope_from_json({"points": []})
    with pytest.raises(ReportFormatError):
        polytope_from_json({"vertices": []})
    with pytest.raises(ReportFormatError):
        polytope_from_json({"dim": 3, "vertices": [[0, 0], [1, 0], [0, 1]]})
    with pytest.raises(ReportFormatError):
        polytope_from_json({"vertices": [["x", 0], [1, 0], [0, 1]]})
    with pytest.raises(DegenerateBody):
        polytope_from_json({"vertices": [[0, 0], [1, 1], [2, 2]]})


def test_lattice_json():
    lattice = Lattice([[2, 1], [0, F(1, 2)]])
    assert lattice_to_json(lattice) == {"basis": [["2", "1"], ["0", "1/2"]]}
    assert lattice_from_json(lattice_to_json(lattice)) == lattice
    with pytest.raises(ReportFormatError):
        lattice_from_json([[1, 0], [0, 1]])


def test_points_json_with_and_without_window():
    pts = points_from_json({"points": [[0, 0], ["1/2", 1]]})
    assert len(pts) == 2
    assert pts.window.hi == (0.5, 1.0)
    framed = points_from_json({"points": [[0, 0]], "window": {"lo": [-1, -1], "hi": [1, 1]}})
    assert framed.window.lo == (-1.0, -1.0)


def test_to_jsonable_handles_report_values():
    value = {
        "verdict": Verdict.Refuted,
        "q": F(3, 8),
        "z": 1 + 2j,
        "flags": np.array([True, False]),
        "n": np.int64(4),
        "bad": float("nan"),
    }
    assert to_jsonable(value) == {
        "verdict": "refuted",
        "q": "3/8",
        "z": {"re": 1.0, "im": 2.0},
        "flags": [True, False],
        "n": 4,
        "bad": None,
    }


def test_dumps_is_deterministic(unit_triangle):
    cert = certify_nonspectral(unit_triangle)
    first, second = dumps(cert), dumps(certify_nonspectral(unit_triangle))
    assert first == second
    assert first.endswith("}\n")
    assert list(json.loads(first))[:3] == ["body", "dim", "normalization"]


def test_certificate_round_trip_through_a_file(tmp_path, unit_triangle):
    cert = certify_nonspectral(unit_triangle)
    path = tmp_path / "cert.json"
    write_text(path, dumps(certificate_to_json(cert)))
    loaded = certificate_from_json(read_json(path))
    assert loaded == cert
    assert certificate_consistency_check(loaded)


def test_malformed_certificates(tmp_path, unit_triangle):
    obj = certificate_to_json(certify_nonspectral(unit_triangle))
    del obj["rho_upper"]
    with pytest.raises(ReportFormatError):
        certificate_from_json(obj)
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ReportFormatError):
        read_json(path)


def test_write_grid_csv():
    grid = GridFunction(GridDomain((0.0, 0.0), (0.5, 0.5), (2, 2)), np.array([[1.0, 0.5], [0.25, 0.0]]))
    out = io.StringIO()
    assert write_grid_csv(grid, out) == 4
    lines = out.getvalue().splitlines()
    assert lines[0] == "x0,x1,value"
    assert lines[1] == "0.0,0.0,1.0"
    assert lines[2] == "0.0,0.5,0.5"
    assert lines[4] == "0.5,0.5,0.0"


@pytest.mark.parametrize(
    "obj",
    [
        {"points": [[0, 0]], "window": {"lo": [-1, -1]}},
        {"points": [[0, 0]], "window": [-1, 1]},
        {"points": [[0, 0], [1]]},
        {"points": []},
        {"points": [["x", 0]]},
    ],
)
def test_malformed_point_sets(obj):
    with pytest.raises(ReportFormatError):
        points_from_json(obj)
