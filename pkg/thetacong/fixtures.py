"""Checks of worked examples stored as JSON fixtures.

A fixture file is a JSON array of ``{kind, inputs, expected, paperNote}``
objects with every number written as an exact string ("p/q", "3 - 2*sqrt(3)").
Each kind maps to one checker; a checker returns None on success or a
message describing the mismatch.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from loguru import logger

from .arith import field_for, rat_from_str
from .config import BUNDLED_FIXTURES, WARN_ON_MISPRINTS, load_budget
from .construct import compose, search_type
from .correspondence import classify, phi, psi, to_conic_point, validate
from .curves import Angle, Curve, CurvePoint, is_in_2e, torsion_k, torsion_q
from .exceptions import FixtureError, InvalidTriangleError, SurdParseError, ThetaCongError
from .obstruct import obstruction_report
from .surd import parse_sides, parse_surd


@dataclass
class FixtureSummary:
    total: int = 0
    passed: int = 0
    failures: list = field(default_factory=list)
    annotations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "total": self.total,
            "passed": self.passed,
            "failed": len(self.failures),
            "failures": self.failures,
            "annotations": self.annotations,
        }


# ==================== Input helpers ====================


class _Case:
    """Parsed view of one fixture's inputs."""

    def __init__(self, inputs: dict):
        self.inputs = inputs
        self.field = field_for(inputs.get("m"))

    @property
    def angle(self) -> Angle:
        return Angle.from_cos(rat_from_str(self.inputs["cos"]))

    @property
    def n(self) -> int:
        return int(self.inputs["n"])

    @property
    def m(self) -> int:
        return int(self.inputs["m"])

    @property
    def curve(self) -> Curve:
        return Curve(self.n, self.angle, self.field)

    def point(self, values=None) -> CurvePoint:
        x, y = values if values is not None else self.inputs["point"]
        return CurvePoint(parse_surd(x, self.field), parse_surd(y, self.field))

    def triangle(self, key: str = "triangle", n: Optional[int] = None, field=None):
        field = field or self.field
        sides = parse_sides(self.inputs[key], field)
        return validate(*sides, n if n is not None else self.n, self.angle, field)


def _compare(label: str, got, want) -> Optional[str]:
    if got != want:
        return f"{label}: got {got}, expected {want}"
    return None


# ==================== Checkers ====================


def _check_double(case: _Case, expected: dict) -> Optional[str]:
    return _compare("2P", case.curve.double(case.point()), case.point(expected["point"]))


def _check_on_curve(case: _Case, expected: dict) -> Optional[str]:
    return _compare("on curve", case.curve.contains(case.point()), expected["onCurve"])


def _check_in_2e(case: _Case, expected: dict) -> Optional[str]:
    return _compare("in 2E", is_in_2e(case.curve, case.point()), expected["in2E"])


def _check_phi(case: _Case, expected: dict) -> Optional[str]:
    return _compare("phi", phi(case.triangle()), case.point(expected["point"]))


def _check_psi(case: _Case, expected: dict) -> Optional[str]:
    got = psi(case.curve, case.point())
    want = parse_sides(expected["triangle"], case.field)
    return _compare("psi", got.sides, want)


def _check_classify(case: _Case, expected: dict) -> Optional[str]:
    return _compare("type", classify(case.triangle()).value, expected["type"])


def _check_validate(case: _Case, expected: dict) -> Optional[str]:
    try:
        case.triangle()
    except InvalidTriangleError as e:
        if expected["valid"]:
            return f"unexpectedly invalid: {e}"
        return _compare("failed identity", e.identity, expected.get("identity", e.identity))
    return None if expected["valid"] else "unexpectedly valid"


def _check_conic_point(case: _Case, expected: dict) -> Optional[str]:
    point = to_conic_point(case.triangle())
    want = tuple(rat_from_str(c) for c in expected["point"])
    return _compare("conic point", (point.x, point.y, point.z), want) or _compare(
        "conic", [point.A, point.B], expected["conic"]
    )


def _check_torsion_q(case: _Case, expected: dict) -> Optional[str]:
    return _compare("torsion", torsion_q(case.n, case.angle).shape.value, expected["shape"])


def _check_torsion_k(case: _Case, expected: dict) -> Optional[str]:
    return _compare("torsion", torsion_k(case.n, case.angle, case.m).shape.value, expected["shape"])


def _check_search(case: _Case, expected: dict) -> Optional[str]:
    overrides = [f"{k}={v}" for k, v in case.inputs.get("budget", {}).items()]
    budget = load_budget(overrides=overrides)
    found = search_type(case.inputs["type"], case.n, case.angle, case.m, budget)
    if found.triangle is None:
        return f"no triangle found: {list(found.notes)}"
    want = parse_sides(expected["triangle"], case.field)
    return _compare("triangle", found.triangle.sides, want)


def _check_compose(case: _Case, expected: dict) -> Optional[str]:
    rational = field_for(None)
    T1 = case.triangle("first", case.n, rational)
    T2 = case.triangle("second", case.m * case.n, rational)
    T = compose(T1, T2, case.m)
    problem = _compare("UV", T.U * T.V, rat_from_str(expected["UV"]))
    mixed = T.W.a != 0 and T.W.b != 0
    return problem or _compare("W outside Q and sqrt(m)Q", mixed, expected["mixedW"])


def _check_obstruct(case: _Case, expected: dict) -> Optional[str]:
    report = obstruction_report(case.m, case.angle)
    got = {key: getattr(report, key).solvable for key in ("type2", "type3", "type4")}
    want = {key: expected[key] for key in ("type2", "type3", "type4")}
    return _compare("solvable", got, want)


CHECKERS: dict[str, Callable[[_Case, dict], Optional[str]]] = {
    "double": _check_double,
    "on_curve": _check_on_curve,
    "in_2e": _check_in_2e,
    "phi": _check_phi,
    "psi": _check_psi,
    "classify": _check_classify,
    "validate": _check_validate,
    "conic_point": _check_conic_point,
    "torsion_q": _check_torsion_q,
    "torsion_k": _check_torsion_k,
    "search": _check_search,
    "compose": _check_compose,
    "obstruct": _check_obstruct,
}


# ==================== Runner ====================


def load_fixtures(path) -> list[dict]:
    """
    Reads a fixture file.

    Raises:
        FixtureError: If the file cannot be read or is not an array of fixtures.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise FixtureError(f"Cannot read fixture file {path}: {e}") from e
    if not text.strip():
        logger.warning(f"Fixture file {path} is empty; nothing to check")
        return []
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise FixtureError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
    if not isinstance(data, list):
        raise FixtureError(f"{path}: expected a JSON array of fixtures")
    for i, item in enumerate(data):
        if not isinstance(item, dict):
            raise FixtureError(f"{path}: fixture {i} is not an object")
        missing = {"kind", "inputs", "expected"} - item.keys()
        if missing:
            raise FixtureError(f"{path}: fixture {i} lacks {sorted(missing)}")
        if item["kind"] not in CHECKERS:
            raise FixtureError(f"{path}: fixture {i} has unknown kind {item['kind']!r}")
    return data


def run_fixtures(path=None) -> FixtureSummary:
    """Runs every fixture in ``path`` (the bundled file by default)."""
    path = Path(path) if path is not None else BUNDLED_FIXTURES
    summary = FixtureSummary()
    for i, item in enumerate(load_fixtures(path)):
        summary.total += 1
        kind = item["kind"]
        note = item.get("paperNote")
        if note:
            summary.annotations.append({"index": i, "kind": kind, "note": note})
            if WARN_ON_MISPRINTS:
                logger.warning(f"Fixture {i} ({kind}): {note}")
        try:
            problem = CHECKERS[kind](_Case(item["inputs"]), item["expected"])
        except SurdParseError as e:
            raise FixtureError(f"{path}: fixture {i} ({kind}) has a bad number: {e}") from e
        except ThetaCongError as e:
            problem = f"{type(e).__name__}: {e}"
        except (KeyError, TypeError, ValueError) as e:
            raise FixtureError(f"{path}: fixture {i} ({kind}) is malformed: {e!r}") from e
        if problem is None:
            summary.passed += 1
            logger.debug(f"Fixture {i} ({kind}) passed")
        else:
            logger.error(f"Fixture {i} ({kind}) failed: {problem}")
            summary.failures.append({"index": i, "kind": kind, "message": problem})
    return summary


__all__ = ["FixtureSummary", "CHECKERS", "load_fixtures", "run_fixtures"]
