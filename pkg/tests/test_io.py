from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given

from quasistar.algebra import spec_distance
from quasistar.gns import FormSpec
from quasistar.hcq import gen_matrix_state
from quasistar.io import (
    SpecParseError,
    SpecValidationError,
    algebra_from_dict,
    algebra_to_dict,
    dump_algebra,
    dump_form,
    parse_algebra,
    parse_form,
)
from quasistar.report import Report

from conftest import commutative_specs, matrix_state_specs


def _arrays_identical(a, b):
    pairs = [(a.structure, b.structure), (a.star.matrix, b.star.matrix),
             (a.sharp.matrix, b.sharp.matrix), (a.gram, b.gram)]
    if (a.unit is None) != (b.unit is None):
        return False
    if a.unit is not None:
        pairs.append((a.unit, b.unit))
    return all(x.shape == y.shape and x.tobytes() == y.tobytes() for x, y in pairs)


def test_one_dim_file(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"dim": 1, "structure": [[[[1, 0]]]], "star": [[1]],
                             "sharp": [[[1, 0]]], "gram": [[1.0]]}))
    spec = parse_algebra(p)
    assert spec.dim == 1 and spec.unit is None


def test_non_hermitian_gram_names_check(tmp_path):
    d = algebra_to_dict(gen_matrix_state(2, [0.5, 0.5]))
    d["gram"][0][1] = [0.3, 0.0]
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(d))
    with pytest.raises(SpecValidationError) as exc:
        parse_algebra(p)
    assert exc.value.names == ["gram.hermitian"]
    assert "gram.hermitian" in str(exc.value)


def test_matrix_state_round_trip_bit_identical(tmp_path):
    spec = gen_matrix_state(2, ["2/3", "1/3"])
    p = tmp_path / "m.json"
    text = dump_algebra(spec, p)
    back = parse_algebra(p)
    assert _arrays_identical(spec, back)
    assert dump_algebra(back) == text


@given(commutative_specs())
def test_round_trip_property_commutative(data):
    spec, _ = data
    back = algebra_from_dict(json.loads(dump_algebra(spec)))
    assert _arrays_identical(spec, back)


@given(matrix_state_specs())
def test_round_trip_property_matrix_state(spec):
    back = algebra_from_dict(json.loads(dump_algebra(spec)))
    assert _arrays_identical(spec, back)


def test_form_round_trip(tmp_path):
    form = FormSpec(np.array([[0.5, 0.1j], [-0.1j, 0.25]]))
    p = tmp_path / "f.json"
    dump_form(form, p)
    back = parse_form(p)
    assert back.F.tobytes() == form.F.tobytes()


@pytest.mark.parametrize("content", [
    "not json",
    "[]",
    '{"dim": 1}',
    '{"dim": -1, "structure": [], "star": [], "sharp": [], "gram": []}',
    '{"dim": 1, "structure": [[1]], "star": [[1]], "sharp": [[1]], "gram": [[1]]}',
    '{"dim": 2, "structure": [[[1]]], "star": [[1]], "sharp": [[1]], "gram": [[1]]}',
    '{"dim": 1, "structure": [[["x"]]], "star": [[1]], "sharp": [[1]], "gram": [[1]]}',
    '{"dim": 1, "structure": [[[1e999999]]], "star": [[1]], "sharp": [[1]], "gram": [[1]]}',
    '{"dim": 1, "structure": [[[1]]], "star": [[1, 2]], "sharp": [[1]], "gram": [[1]]}',
    '{"format": "other", "dim": 1, "structure": [[[1]]], "star": [[1]], "sharp": [[1]], "gram": [[1]]}',
])
def test_malformed_inputs_raise_parse_or_validation(tmp_path, content):
    p = tmp_path / "x.json"
    p.write_text(content)
    with pytest.raises((SpecParseError, SpecValidationError)):
        parse_algebra(p)


def test_missing_file():
    with pytest.raises(SpecParseError):
        parse_algebra("/nonexistent/file.json")


def test_bad_form(tmp_path):
    p = tmp_path / "f.json"
    p.write_text(json.dumps({"matrix": [[1, 0], [0, -1]]}))
    with pytest.raises(SpecValidationError) as exc:
        parse_form(p)
    assert exc.value.names == ["form.positive"]
    p.write_text(json.dumps({"mat": []}))
    with pytest.raises(SpecParseError):
        parse_form(p)


def test_report_is_deterministic():
    def build():
        r = Report("check", {"eq": 1e-9})
        r.add_input("a.json", "0" * 64)
        r.results["z"] = np.array([1 + 2j, 3])
        r.results["a"] = np.float64(np.inf)
        return r
    assert build().to_json() == build().to_json()
    d = json.loads(build().to_json())
    assert d["results"]["z"] == [[1.0, 2.0], 3.0]
    assert d["results"]["a"] == "inf"


def test_spec_distance_after_reparse():
    spec = gen_matrix_state(3, ["1/2", "1/3", "1/6"])
    assert spec_distance(spec, algebra_from_dict(algebra_to_dict(spec))) == 0.0
