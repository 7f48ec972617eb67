"""Local solvability of the conics attached to triangle Types 2, 3 and 4.

A (K, theta, n)-triangle of a given type yields a rational point on a conic
z^2 = A x^2 + B y^2 whose coefficients depend on m and theta only. When the
conic fails to be solvable at some place, no triangle of that type exists.
Hilbert symbols decide every place; the printed residue tables are kept as
a derived artifact and cross-checked against the symbols.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from loguru import logger

from .arith import (
    INFINITY,
    QuadField,
    hilbert,
    legendre,
    prime_divisors,
    signed_sqf,
    sqf,
    valuation,
)
from .correspondence import TriangleType, reduction_coefficients
from .curves import Angle
from .exceptions import ThetaCongDomainError, ThetaCongInternalError


@dataclass(frozen=True)
class Conic:
    """z^2 = A x^2 + B y^2 with nonzero integer coefficients."""

    A: int
    B: int

    def __post_init__(self):
        if self.A == 0 or self.B == 0:
            raise ThetaCongDomainError(f"Conic coefficients must be nonzero, got ({self.A}, {self.B})")

    def __str__(self):
        return f"z^2 = {self.A}x^2 + {self.B}y^2"

    def contains(self, x, y, z) -> bool:
        return z * z == self.A * x * x + self.B * y * y

    def square_classes(self) -> tuple[int, int]:
        return signed_sqf(self.A), signed_sqf(self.B)

    def places(self) -> list:
        """2, the odd primes dividing AB, then infinity; all other places are solvable."""
        odd = [p for p in prime_divisors(self.A * self.B) if p != 2]
        return [2] + odd + [INFINITY]

    def to_json(self) -> dict:
        return {"A": self.A, "B": self.B}


def conics_for(m: int, angle: Angle) -> tuple[Conic, Conic, Conic]:
    """The Type 2, Type 3 and Type 4 conics, unreduced."""
    QuadField(m)
    return tuple(
        Conic(*reduction_coefficients(tag, m, angle))
        for tag in (TriangleType.TYPE2, TriangleType.TYPE3, TriangleType.TYPE4)
    )


def locally_solvable(c: Conic, place) -> bool:
    return hilbert(c.A, c.B, place) == 1


def obstructed_places(c: Conic) -> list:
    return [place for place in c.places() if not locally_solvable(c, place)]


# ==================== Printed residue tables ====================

# (alpha, beta) -> residues (a, b) mod 8 that obstruct at p = 2
_TWO_ADIC_TABLE = {
    (0, 1): {(3, 1), (3, 5), (7, 5), (7, 7)},
    (1, 0): {(1, 3), (1, 5), (3, 5), (3, 7), (5, 3), (5, 7), (7, 3), (7, 7)},
    (1, 1): {(1, 3), (1, 5), (3, 1), (3, 3), (5, 1), (5, 7), (7, 5), (7, 7)},
}


def printed_table_verdict(p: int, x: int, y: int) -> Optional[bool]:
    """
    Obstruction verdict of the printed residue conditions for the pair (x, y) at p.

    The pair is written x = p^alpha a, y = p^beta b with alpha, beta in {0, 1}
    after removing square factors. Returns True when the tables declare the
    pair obstructed, False when they declare it solvable, and None for the
    odd-prime case (alpha, beta) = (0, 0), which the tables do not cover.
    """
    alpha, a = valuation(signed_sqf(x), p)
    beta, b = valuation(signed_sqf(y), p)
    if p == 2:
        if (alpha, beta) == (0, 0):
            return (a % 4, b % 4) == (3, 3)
        return (a % 8, b % 8) in _TWO_ADIC_TABLE[(alpha, beta)]
    if (alpha, beta) == (0, 0):
        return None
    if (alpha, beta) == (0, 1):
        return legendre(a, p) == -1
    if (alpha, beta) == (1, 0):
        return legendre(b, p) == -1
    product = legendre(a, p) * legendre(b, p)
    if p % 4 == 1:
        return product == -1
    return product == 1


# ==================== Reports ====================


@dataclass(frozen=True)
class TypeVerdict:
    conic: Conic
    obstructed: tuple = ()

    @property
    def solvable(self) -> bool:
        return not self.obstructed

    def to_json(self) -> dict:
        return {
            "solvable": self.solvable,
            "obstructed": list(self.obstructed),
            "conic": self.conic.to_json(),
        }


@dataclass(frozen=True)
class ObstructionReport:
    """Per-type local solvability for a pair (m, theta); independent of n."""

    m: int
    angle: Angle
    type2: TypeVerdict
    type3: TypeVerdict
    type4: TypeVerdict
    findings: tuple = field(default_factory=tuple)

    def verdict(self, tag: TriangleType) -> TypeVerdict:
        return {
            TriangleType.TYPE2: self.type2,
            TriangleType.TYPE3: self.type3,
            TriangleType.TYPE4: self.type4,
        }[TriangleType(tag)]

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "r": self.angle.r,
            "s": self.angle.s,
            "type2": self.type2.to_json(),
            "type3": self.type3.to_json(),
            "type4": self.type4.to_json(),
            "findings": list(self.findings),
        }


def table_inputs(m: int, angle: Angle) -> dict[TriangleType, int]:
    """The second entry X of the pair (m, X) the printed tables are stated for."""
    r, s = angle.r, angle.s
    return {
        TriangleType.TYPE2: sqf(r * r - s * s),
        TriangleType.TYPE3: sqf(2 * r * (r - s)),
        TriangleType.TYPE4: sqf(2 * r * (r + s)),
    }


def obstruction_report(m: int, angle: Angle) -> ObstructionReport:
    """Checks every relevant place of the three conics and audits the printed tables."""
    conics = conics_for(m, angle)
    tags = (TriangleType.TYPE2, TriangleType.TYPE3, TriangleType.TYPE4)
    verdicts = {}
    findings = []
    x_values = table_inputs(m, angle)
    for tag, conic in zip(tags, conics):
        x_value = x_values[tag]
        bad = obstructed_places(conic)
        if len(bad) == 1:
            # product formula: failures come in pairs
            raise ThetaCongInternalError(f"Single obstructed place {bad} for {conic}")
        verdicts[tag] = TypeVerdict(conic=conic, obstructed=tuple(bad))
        logger.debug(f"Type {tag.value}: {conic} obstructed at {bad or 'no place'}")

        for p in sorted(set(prime_divisors(m * x_value)) | {2}):
            printed = printed_table_verdict(p, m, x_value)
            if printed is None:
                continue
            direct = not locally_solvable(conic, p)
            if printed != direct:
                finding = {
                    "type": tag.value,
                    "place": p,
                    "pair": [m, x_value],
                    "printed": "obstructed" if printed else "solvable",
                    "direct": "obstructed" if direct else "solvable",
                }
                logger.warning(f"Residue table disagrees with Hilbert symbol: {finding}")
                findings.append(finding)

    return ObstructionReport(
        m=m,
        angle=angle,
        type2=verdicts[TriangleType.TYPE2],
        type3=verdicts[TriangleType.TYPE3],
        type4=verdicts[TriangleType.TYPE4],
        findings=tuple(findings),
    )


__all__ = [
    "Conic",
    "conics_for",
    "locally_solvable",
    "obstructed_places",
    "printed_table_verdict",
    "table_inputs",
    "TypeVerdict",
    "ObstructionReport",
    "obstruction_report",
]
