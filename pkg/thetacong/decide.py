"""Deciding whether n is (K, theta)-congruent for K = Q(sqrt(m)).

n is (K, theta)-congruent exactly when E_{n,theta}(K) has positive rank,
that is when E_{n,theta}(Q) or its twist E_{mn,theta}(Q) does. Ranks are
never computed: a bounded search for a point of order > 2 on either curve
certifies a triangle, and the order-4 torsion over K covers the cases where
that equivalence is out of reach. Exhausting the budget yields ``unknown``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from math import gcd
from typing import Optional

from loguru import logger

from .arith import QQ, QuadField, sqf
from .config import TORSION_ORDER_BOUND, SearchBudget
from .correspondence import Triangle, divide_by_sqrt_m, embed, triangle_from_point
from .curves import Angle, Curve, CurvePoint, make_curve, point_order, sort_points, torsion_k
from .exceptions import NotInImageError
from .search import first_witness


class Verdict(str, Enum):
    CONGRUENT = "congruent"
    UNKNOWN = "unknown"


class WitnessSource(str, Enum):
    E_N = "E_n/Q"
    E_MN = "E_mn/Q"
    TORSION = "torsion"


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    n: int
    m: int
    angle: Angle
    budget: SearchBudget
    triangle: Optional[Triangle] = None
    rational_triangle: Optional[Triangle] = None
    point: Optional[CurvePoint] = None
    curve: Optional[Curve] = None
    source: Optional[WitnessSource] = None
    order: Optional[int] = None
    notes: tuple = field(default_factory=tuple)

    @property
    def is_congruent(self) -> bool:
        return self.verdict == Verdict.CONGRUENT

    def to_json(self) -> dict:
        witness = None
        if self.triangle is not None:
            witness = {
                "triangle": self.triangle.to_json(),
                "rationalTriangle": self.rational_triangle.to_json() if self.rational_triangle else None,
                "point": self.point.to_json() if self.point else None,
                "curve": self.curve.to_json() if self.curve else None,
                "order": self.order,
            }
        return {
            "verdict": self.verdict.value,
            "n": self.n,
            "m": self.m,
            "r": self.angle.r,
            "s": self.angle.s,
            "witness": witness,
            "source": self.source.value if self.source else None,
            "notes": list(self.notes),
            "budget": self.budget.to_json(),
        }


def hypothesis_notes(n: int, m: int, angle: Angle) -> list[str]:
    """Violated hypotheses of the rank equivalence for (n, m, theta)."""
    notes = []
    g = gcd(m, n)
    if g != 1:
        notes.append(f"gcd(m, n) = {g}")
    if m * n in (2, 3, 6):
        notes.append(f"mn = {m * n} is in {{2, 3, 6}}")
    if m == sqf(2 * angle.r * (angle.r - angle.s)):
        notes.append(f"m = sqf(2r(r-s)) = {m}: positive rank is not necessary for a triangle")
    return notes


def _justification(order: Optional[int], source: WitnessSource) -> str:
    if order is None:
        return f"point of order > {TORSION_ORDER_BOUND} on {source.value} certifies positive rank"
    return f"torsion point of order {order} on {source.value}"


def _torsion_route(n: int, angle: Angle, m: int) -> Optional[tuple[Curve, CurvePoint, Triangle, int]]:
    torsion = torsion_k(n, angle, m)
    curve = Curve(n, angle, QuadField(m))
    for Q in sort_points(torsion.witnesses):
        try:
            triangle = triangle_from_point(curve, Q)
        except NotInImageError as e:
            logger.debug(f"Torsion witness {Q} gives no triangle: {e}")
            continue
        return curve, Q, triangle, point_order(curve, Q)
    return None


def _torsion_decision(
    n: int, m: int, angle: Angle, budget: SearchBudget, notes: list[str]
) -> Optional[Decision]:
    routed = _torsion_route(n, angle, m)
    if routed is None:
        return None
    curve, Q, triangle, order = routed
    notes = [*notes, f"torsion point of order {order} over {curve.field}; rank equivalence not used"]
    logger.success(f"Torsion route gives {triangle} over {curve.field}")
    return Decision(
        verdict=Verdict.CONGRUENT,
        n=n,
        m=m,
        angle=angle,
        budget=budget,
        triangle=triangle,
        point=Q,
        curve=curve,
        source=WitnessSource.TORSION,
        order=order,
        notes=tuple(notes),
    )


def decide(
    n: int,
    m: int,
    angle: Angle,
    budget: Optional[SearchBudget] = None,
    n_jobs: Optional[int] = None,
) -> Decision:
    """
    Searches E_{n,theta}(Q) and E_{mn,theta}(Q) by height, then the torsion of E_{n,theta}(K).

    When a hypothesis of the rank equivalence fails, the torsion of
    E_{n,theta}(K) is tried first and the search only runs if it gives no triangle.

    Args:
        n: Squarefree positive integer.
        m: Squarefree integer > 1.
        angle: The angle theta.
        budget: Search bounds; defaults come from the environment.
        n_jobs: joblib workers for the point search.

    Returns:
        Decision: ``congruent`` with a validated triangle over Q(sqrt(m)), or ``unknown``.
    """
    budget = budget or SearchBudget()
    base = make_curve(n, angle)
    K = QuadField(m)
    twist = Curve(m * n, angle, QQ)
    notes = hypothesis_notes(n, m, angle)
    for note in notes:
        logger.info(f"Hypothesis note: {note}")

    torsion_first = bool(notes)
    if torsion_first:
        decision = _torsion_decision(n, m, angle, budget, notes)
        if decision is not None:
            return decision

    hit = first_witness([base, twist], budget, n_jobs)
    if hit is not None:
        index, P, h = hit
        curve = (base, twist)[index]
        source = (WitnessSource.E_N, WitnessSource.E_MN)[index]
        rational = triangle_from_point(curve, P)
        triangle = embed(rational, K) if index == 0 else divide_by_sqrt_m(rational, n, K)
        order = point_order(curve, P)
        notes.append(_justification(order, source))
        return Decision(
            verdict=Verdict.CONGRUENT,
            n=n,
            m=m,
            angle=angle,
            budget=budget,
            triangle=triangle,
            rational_triangle=rational,
            point=P,
            curve=curve,
            source=source,
            order=order,
            notes=tuple(notes),
        )

    if not torsion_first:
        decision = _torsion_decision(n, m, angle, budget, notes)
        if decision is not None:
            return decision

    notes.append(f"no point of order > 2 below height {budget.max_height}")
    return Decision(verdict=Verdict.UNKNOWN, n=n, m=m, angle=angle, budget=budget, notes=tuple(notes))


__all__ = ["Verdict", "WitnessSource", "Decision", "hypothesis_notes", "decide"]
