"""Triangles (U, V, W) with angle theta and their correspondence with 2E(K).

A triangle with sides in K, included angle theta between U and V and area
n * sqrt(r^2 - s^2) satisfies UV = 2rn and W^2 = U^2 + V^2 - (2s/r)UV. The
map phi sends it to (W^2/4, W(V^2 - U^2)/8) on E_{n,theta}; psi inverts phi
with principal square roots.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from loguru import logger

from .arith import (
    QQ,
    QuadElem,
    QuadField,
    as_rat,
    conj,
    field_for,
    is_rational,
    quad_sign,
    scalar_from_json,
    scalar_to_json,
)
from .curves import Angle, Curve, CurvePoint
from .exceptions import (
    InvalidTriangleError,
    NotInImageError,
    OutsideClassificationError,
    ThetaCongDomainError,
)


class TriangleType(str, Enum):
    RATIONAL = "rational"
    TYPE1 = "1"
    TYPE2 = "2"
    TYPE3 = "3"
    TYPE4 = "4"


@dataclass(frozen=True)
class Triangle:
    """A validated triangle; build it with ``validate``."""

    U: object
    V: object
    W: object
    n: int
    angle: Angle
    field: object = QQ

    @property
    def sides(self) -> tuple:
        return (self.U, self.V, self.W)

    def __str__(self):
        return f"({self.U}, {self.V}, {self.W})"

    def to_json(self) -> dict:
        return {
            "U": scalar_to_json(self.U),
            "V": scalar_to_json(self.V),
            "W": scalar_to_json(self.W),
            "n": self.n,
            "r": self.angle.r,
            "s": self.angle.s,
            "m": self.field.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> Triangle:
        try:
            field = field_for(data.get("m"))
            sides = [scalar_from_json(data[k], field) for k in ("U", "V", "W")]
            angle = Angle(int(data["r"]), int(data["s"]))
            n = int(data["n"])
        except (KeyError, TypeError) as e:
            raise ThetaCongDomainError(f"Malformed triangle payload: {data!r}") from e
        return validate(*sides, n, angle, field)


def validate(U, V, W, n: int, angle: Angle, field=QQ) -> Triangle:
    """
    Checks both defining identities exactly and normalizes so that U <= V.

    Raises:
        InvalidTriangleError: Naming the identity that fails.
    """
    U, V, W = (field.coerce(side) for side in (U, V, W))
    for name, side in (("U", U), ("V", V), ("W", W)):
        if quad_sign(side) <= 0:
            raise InvalidTriangleError(f"{name} > 0", f"{name} = {side}")
    if quad_sign(V - U) < 0:
        U, V = V, U
    r, s = angle.r, angle.s
    if U * V != 2 * r * n:
        raise InvalidTriangleError("UV = 2rn", f"UV = {U * V}, 2rn = {2 * r * n}")
    rhs = U * U + V * V - Fraction(2 * s, r) * U * V
    if W * W != rhs:
        raise InvalidTriangleError(
            "W^2 = U^2 + V^2 - (2s/r)UV", f"W^2 = {W * W}, right side = {rhs}"
        )
    return Triangle(U, V, W, n, angle, field)


# ==================== phi / psi ====================


def phi(T: Triangle) -> CurvePoint:
    """(W^2/4, W(V^2 - U^2)/8) on E_{n,theta} over the triangle's field."""
    coerce = T.field.coerce
    x = coerce(T.W * T.W / 4)
    y = coerce(T.W * (T.V * T.V - T.U * T.U) / 8)
    return CurvePoint(x, y)


def psi(curve: Curve, P: CurvePoint) -> Triangle:
    """Inverse of phi: the triangle with W = 2 sqrt(u) and U, V from sqrt(u + (r+s)n) -/+ sqrt(u - (r-s)n).

    Raises:
        NotInImageError: If a needed square root does not exist or v < 0.
    """
    if P.is_infinity:
        raise NotInImageError("infinity has no triangle")
    if not curve.contains(P):
        raise ThetaCongDomainError(f"{P} is not on {curve}")
    if quad_sign(P.y) < 0:
        raise NotInImageError(f"v = {P.y} is negative; use -P")
    r, s, n = curve.angle.r, curve.angle.s, curve.n
    roots = []
    for label, value in (("u", P.x), ("u + (r+s)n", P.x + (r + s) * n), ("u - (r-s)n", P.x - (r - s) * n)):
        root = curve.sqrt(value)
        if root is None:
            raise NotInImageError(f"{label} = {value} is not a square in {curve.field}")
        roots.append(root)
    sqrt_u, a, b = roots
    return validate(a - b, a + b, 2 * sqrt_u, n, curve.angle, curve.field)


def triangle_from_point(curve: Curve, P: CurvePoint) -> Triangle:
    """The triangle psi(2P), choosing the sign of 2P with v >= 0."""
    Q = curve.double(P)
    if Q.is_infinity:
        raise NotInImageError(f"{P} is 2-torsion; 2P is infinity")
    if quad_sign(Q.y) < 0:
        Q = -Q
    return psi(curve, Q)


def embed(T: Triangle, field) -> Triangle:
    """Views a triangle over Q as one over ``field``."""
    return Triangle(*(field.coerce(side) for side in T.sides), T.n, T.angle, field)


def divide_by_sqrt_m(T: Triangle, n: int, field: QuadField) -> Triangle:
    """Maps a rational triangle of area mn*alpha to the Type 1 triangle (U, V, W)/sqrt(m) of area n*alpha."""
    m = field.m
    if T.n != m * n:
        raise ThetaCongDomainError(f"Triangle has n = {T.n}, expected mn = {m * n}")
    sides = [field(0, as_rat(side) / m) for side in T.sides]
    return validate(*sides, n, T.angle, field)


# ==================== Classification ====================


def _is_pure(x) -> bool:
    return isinstance(x, QuadElem) and x.a == 0


def classify(T: Triangle) -> TriangleType:
    """
    Tags a triangle over Q(sqrt(m)) with one of the four types, or as rational.

    Raises:
        ThetaCongDomainError: If the triangle lives over Q.
        OutsideClassificationError: If no type matches.
    """
    if not isinstance(T.field, QuadField):
        raise ThetaCongDomainError("classify needs a triangle over a quadratic field")
    U, V, W = T.sides
    if all(is_rational(side) for side in T.sides):
        return TriangleType.RATIONAL
    if all(_is_pure(side) for side in T.sides):
        return TriangleType.TYPE1
    if is_rational(U) and is_rational(V) and _is_pure(W):
        return TriangleType.TYPE2
    if not is_rational(U) and not is_rational(V) and is_rational(W):
        if conj(U) == V:
            return TriangleType.TYPE3
        if conj(U) == -V:
            return TriangleType.TYPE4
    logger.warning(f"Triangle {T} over {T.field} matches no type")
    raise OutsideClassificationError(f"{T} over {T.field} matches none of the four types")


# ==================== Conic reductions ====================


@dataclass(frozen=True)
class ConicPoint:
    """A rational point (x, y, z) on z^2 = A x^2 + B y^2."""

    x: Fraction
    y: Fraction
    z: Fraction
    A: int
    B: int

    def to_json(self) -> dict:
        return {
            "point": [scalar_to_json(c) for c in (self.x, self.y, self.z)],
            "conic": {"A": self.A, "B": self.B},
        }


def reduction_coefficients(tag: TriangleType, m: int, angle: Angle) -> tuple[int, int]:
    """Coefficients (A, B) of the conic z^2 = A x^2 + B y^2 attached to a triangle type."""
    r, s = angle.r, angle.s
    if tag == TriangleType.TYPE2:
        return m, m * (r * r - s * s)
    if tag == TriangleType.TYPE3:
        return 2 * r * (r - s), 2 * m * r * (r + s)
    if tag == TriangleType.TYPE4:
        return 2 * r * (r + s), 2 * m * r * (r - s)
    raise ThetaCongDomainError(f"No conic reduction for type {tag.value}")


def to_conic_point(T: Triangle) -> ConicPoint:
    """
    Reduces a Type 2, 3 or 4 triangle to a rational point on its conic.

    Type 2 (u, v, w sqrt(m)) gives (ru - sv, v, mrw); Types 3 and 4 with
    V = u + v sqrt(m) give (u, v, rW).
    """
    tag = classify(T)
    m = T.field.m
    r, s = T.angle.r, T.angle.s
    A, B = reduction_coefficients(tag, m, T.angle)
    if tag == TriangleType.TYPE2:
        u, v, w = as_rat(T.U), as_rat(T.V), T.W.b
        point = (r * u - s * v, v, m * r * w)
    else:
        point = (T.V.a, T.V.b, r * as_rat(T.W))
    x, y, z = point
    if z * z != A * x * x + B * y * y:
        raise ThetaCongDomainError(f"({x}, {y}, {z}) is not on z^2 = {A}x^2 + {B}y^2")
    return ConicPoint(x, y, z, A, B)


__all__ = [
    "TriangleType",
    "Triangle",
    "ConicPoint",
    "validate",
    "phi",
    "psi",
    "triangle_from_point",
    "embed",
    "divide_by_sqrt_m",
    "classify",
    "reduction_coefficients",
    "to_conic_point",
]
