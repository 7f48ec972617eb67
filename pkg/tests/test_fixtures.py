"""Tests for the worked-example fixture runner."""

import json

import pytest

from thetacong.config import BUNDLED_FIXTURES
from thetacong.exceptions import FixtureError
from thetacong.fixtures import CHECKERS, load_fixtures, run_fixtures


def _write(tmp_path, data):
    path = tmp_path / "fixtures.json"
    path.write_text(data if isinstance(data, str) else json.dumps(data))
    return path


DOUBLE = {
    "kind": "double",
    "inputs": {"n": 39, "cos": "1/2", "point": ["-9", "-216"]},
    "expected": {"point": ["1849/16", "-91805/64"]},
}


# ── Bundled fixtures ───────────────────────────────────────────


def test_bundled_fixtures_pass():
    summary = run_fixtures()
    assert summary.ok, summary.failures
    assert summary.total == len(json.loads(BUNDLED_FIXTURES.read_text()))
    assert summary.passed == summary.total
    assert len(summary.annotations) == 10


def test_bundled_fixtures_cover_every_kind():
    kinds = {item["kind"] for item in load_fixtures(BUNDLED_FIXTURES)}
    assert kinds == set(CHECKERS)


# ── Runner ─────────────────────────────────────────────────────


def test_single_fixture(tmp_path):
    summary = run_fixtures(_write(tmp_path, [DOUBLE]))
    assert (summary.total, summary.passed) == (1, 1)
    assert summary.to_json()["failed"] == 0


def test_wrong_expectation_is_a_failure(tmp_path):
    wrong = dict(DOUBLE, expected={"point": ["1894/16", "-91805/64"]})
    summary = run_fixtures(_write(tmp_path, [DOUBLE, wrong]))
    assert not summary.ok
    assert summary.passed == 1
    assert summary.failures[0]["index"] == 1
    assert summary.failures[0]["message"].startswith("2P: got")


def test_library_error_is_a_failure(tmp_path):
    """A point off the curve is reported, not raised."""
    off = dict(DOUBLE, inputs={"n": 39, "cos": "1/2", "point": ["1", "1"]})
    summary = run_fixtures(_write(tmp_path, [off]))
    assert summary.failures[0]["message"].startswith("ThetaCongDomainError")


def test_annotations_collected(tmp_path):
    noted = dict(DOUBLE, paperNote="printed with another x")
    summary = run_fixtures(_write(tmp_path, [noted]))
    assert summary.annotations == [{"index": 0, "kind": "double", "note": "printed with another x"}]


def test_empty_file_passes(tmp_path):
    summary = run_fixtures(_write(tmp_path, ""))
    assert summary.ok
    assert summary.total == 0


# ── Malformed files ────────────────────────────────────────────


@pytest.mark.parametrize(
    "data",
    [
        "[{",
        {"kind": "double"},
        [1],
        [{"kind": "double", "inputs": {}}],
        [{"kind": "halve", "inputs": {}, "expected": {}}],
    ],
)
def test_malformed_files(tmp_path, data):
    with pytest.raises(FixtureError):
        load_fixtures(_write(tmp_path, data))


def test_missing_file(tmp_path):
    with pytest.raises(FixtureError):
        run_fixtures(tmp_path / "absent.json")


def test_bad_number_raises(tmp_path):
    bad = dict(DOUBLE, inputs={"n": 39, "cos": "1/2", "point": ["-9", "sqrt("]})
    with pytest.raises(FixtureError):
        run_fixtures(_write(tmp_path, [bad]))


def test_missing_input_raises(tmp_path):
    bad = dict(DOUBLE, inputs={"cos": "1/2", "point": ["-9", "-216"]})
    with pytest.raises(FixtureError):
        run_fixtures(_write(tmp_path, [bad]))
