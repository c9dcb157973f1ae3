import csv
import json

import numpy as np
import pytest

from qzak.output import (
    DIAGNOSTIC_COLUMNS,
    f_profiles,
    format_value,
    write_csv,
    write_diagnostics,
    write_json,
    write_region_boundary,
)


def test_format_value():
    assert format_value(0.1) == "0.10000000000000001"
    assert float(format_value(np.pi)) == np.pi
    assert format_value(np.float32(0.5)) == "0.5"
    assert format_value(3) == "3" and format_value(np.int64(-2)) == "-2"
    assert format_value(True) == "true" and format_value(np.bool_(False)) == "false"
    assert format_value("C1") == "C1"
    assert format_value(float("nan")) == "nan"


def test_csv_round_trip(tmp_path):
    path = write_csv(tmp_path / "a.csv", ("x", "name"), [(1 / 3, "a"), (2.0, "b")])
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["x", "name"] and float(rows[1][0]) == 1 / 3
    assert path.read_bytes().endswith(b"b\n")


def test_csv_header_only_and_width_check(tmp_path):
    path = write_csv(tmp_path / "e.csv", ("a", "b"), [])
    assert path.read_text() == "a,b\n"
    with pytest.raises(ValueError):
        write_csv(tmp_path / "bad.csv", ("a", "b"), [(1,)])


def test_json_is_sorted_and_finite(tmp_path):
    path = write_json(tmp_path / "a.json", {"b": np.float64(np.nan), "a": np.arange(2), "c": np.bool_(True)})
    text = path.read_text()
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text) == {"a": [0, 1], "b": "nan", "c": True}


def test_diagnostics_columns(tmp_path):
    diag = {c: [1.0, 2.0] for c in DIAGNOSTIC_COLUMNS[1:-2]}
    path = write_diagnostics(tmp_path / "d.csv", [0.0, 0.1], diag)
    rows = list(csv.reader(path.open()))
    assert tuple(rows[0]) == DIAGNOSTIC_COLUMNS
    assert rows[1][-1] == "nan" and len(rows) == 3


def test_region_boundary_file(tmp_path):
    rows = list(csv.reader(write_region_boundary(tmp_path / "r.csv").open()))
    assert rows[0] == ["k", "l"] and len(rows) == 7


def test_f_profiles():
    rows = f_profiles()
    assert len(rows) == 3 * 402
    assert [r[0] for r in rows[::402]] == ["1a", "1b", "1c"]
    xs = sorted({r[3] for r in rows})
    assert xs[0] == 0.0 and xs[-1] == 128.0 and 64.0 in xs
    # the minimum value in case 1c sits at zero
    c = [r for r in rows if r[0] == "1c"]
    assert min(r[4] for r in c) == pytest.approx(0.0, abs=1e-6)
