"""Acceptance criteria and property batteries, one PASS/FAIL line each."""
import json

import pytest

from finmodels import batteries

CRITERIA = {"criterion_%d" % k: fn for k, fn in enumerate(batteries.CRITERIA, 1)}
PROPERTIES = {fn.__name__: fn for fn in batteries.PROPERTIES}


def _report(capsys, result):
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail


@pytest.mark.parametrize("name", sorted(CRITERIA, key=lambda s: int(s.split("_")[1])))
def test_criterion(name, capsys, tmp_path):
    fn = CRITERIA[name]
    if fn is batteries.criterion_4:
        archive = tmp_path / "retraction_witness.json"
        result = fn(archive=archive)
        # the witness is archived whatever the outcome
        doc = json.loads(archive.read_text())
        assert doc
    else:
        result = fn()
    _report(capsys, result)


@pytest.mark.parametrize("name", sorted(PROPERTIES))
def test_property(name, capsys):
    _report(capsys, PROPERTIES[name]())
