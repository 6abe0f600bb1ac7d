import json

from src.conventions import CONVENTIONS
from src.report import RunReport, canonical_json, digest


def test_canonical_json_sorts_keys():
    assert canonical_json({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'


def test_digest_ignores_key_order():
    assert digest({"a": 1, "b": 2}) == digest({"b": 2, "a": 1})


def test_report_round_trip():
    report = RunReport("transgress", {"algebra": "sl2"}, {"degree": 2}, {"chain_recurrence": True})
    data = json.loads(report.to_json())
    assert data["conventions"] == CONVENTIONS.as_dict()
    assert data["inputs_digest"] == report.inputs_digest
    assert "timing" not in data
    assert report.passed


def test_failed_assertion_fails_report():
    report = RunReport("ss verify-cone", {}, assertions={"commutes": False})
    assert not report.passed


def test_inputs_digest_depends_on_inputs():
    first = RunReport("transgress", {"polynomial": "x^2"})
    second = RunReport("transgress", {"polynomial": "y^2"})
    assert first.inputs_digest != second.inputs_digest
