"""The theta-congruent curves E_{n,theta}: y^2 = x(x + (r+s)n)(x - (r-s)n).

Curves live over Q (``QQ``) or over a real quadratic field. Coordinates are
Fractions over Q and QuadElems over K; the group law is written once and works
for both because QuadElem mixes freely with Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from enum import Enum
from fractions import Fraction
from functools import cmp_to_key
from itertools import product
from math import gcd
from typing import Optional

from loguru import logger

from .arith import (
    QQ,
    QuadElem,
    QuadField,
    divisors,
    field_for,
    iroot,
    is_square_rat,
    is_squarefree,
    quad_sign,
    rat_from_str,
    scalar_from_json,
    scalar_to_json,
    sqf_decompose,
    SqfDecomp,
)
from .config import TORSION_ORDER_BOUND
from .exceptions import ThetaCongDomainError


# ==================== Angles ====================


@dataclass(frozen=True)
class Angle:
    """An angle theta with rational cosine s/r."""

    r: int
    s: int

    def __post_init__(self):
        for name in ("r", "s"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ThetaCongDomainError(f"Angle.{name} must be an integer, got {value!r}")
        if self.r <= 0 or self.s == 0 or abs(self.s) >= self.r:
            raise ThetaCongDomainError(f"Need 0 < |s| < r, got r={self.r}, s={self.s}")
        if gcd(self.r, self.s) != 1:
            raise ThetaCongDomainError(f"r and s must be coprime, got r={self.r}, s={self.s}")

    @classmethod
    def from_cos(cls, cos) -> Angle:
        """Builds the angle from cos(theta) given as "s/r" or a Fraction."""
        value = cos if isinstance(cos, Fraction) else rat_from_str(cos)
        return cls(r=value.denominator, s=value.numerator)

    @property
    def cos(self) -> Fraction:
        return Fraction(self.s, self.r)

    @property
    def alpha_sq(self) -> int:
        return self.r * self.r - self.s * self.s

    @property
    def alpha(self) -> SqfDecomp:
        return sqf_decompose(self.alpha_sq)

    def __str__(self):
        if (self.r, self.s) == (2, 1):
            return "pi/3"
        if (self.r, self.s) == (2, -1):
            return "2pi/3"
        return f"arccos({self.s}/{self.r})"

    def to_json(self) -> dict:
        return {"r": self.r, "s": self.s}


PI_OVER_3 = Angle(2, 1)
TWO_PI_OVER_3 = Angle(2, -1)


# ==================== Points ====================


@dataclass(frozen=True)
class CurvePoint:
    """An affine point (x, y), or the point at infinity when both are None."""

    x: object = None
    y: object = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __neg__(self) -> CurvePoint:
        if self.is_infinity:
            return self
        return CurvePoint(self.x, -self.y)

    def conj(self) -> CurvePoint:
        if self.is_infinity:
            return self
        return CurvePoint(_conj(self.x), _conj(self.y))

    def __str__(self):
        if self.is_infinity:
            return "infinity"
        return f"({self.x}, {self.y})"

    def to_json(self):
        if self.is_infinity:
            return "infinity"
        return {"x": scalar_to_json(self.x), "y": scalar_to_json(self.y)}

    @classmethod
    def from_json(cls, data, field=QQ) -> CurvePoint:
        if data == "infinity":
            return INFINITY_POINT
        try:
            return cls(scalar_from_json(data["x"], field), scalar_from_json(data["y"], field))
        except (KeyError, TypeError) as e:
            raise ThetaCongDomainError(f"Malformed point payload: {data!r}") from e


INFINITY_POINT = CurvePoint()


def _conj(value):
    return value.conj() if isinstance(value, QuadElem) else value


# ==================== Curves ====================


class TorsionShape(str, Enum):
    Z2xZ2 = "Z2xZ2"
    Z2xZ4 = "Z2xZ4"
    Z2xZ6 = "Z2xZ6"
    Z2xZ8 = "Z2xZ8"


@dataclass(frozen=True)
class Curve:
    """E_{n,theta} over ``field``; stored by (n, angle, field), never by raw coefficients."""

    n: int
    angle: Angle
    field: object = QQ

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise ThetaCongDomainError(f"n must be a positive integer, got {self.n!r}")

    # -- coefficients --

    @property
    def a2(self) -> int:
        return 2 * self.angle.s * self.n

    @property
    def a4(self) -> int:
        return -self.angle.alpha_sq * self.n * self.n

    @property
    def roots(self) -> tuple[int, int, int]:
        r, s, n = self.angle.r, self.angle.s, self.n
        return (0, -(r + s) * n, (r - s) * n)

    def cubic(self, x):
        _, e2, e3 = self.roots
        return x * (x - e2) * (x - e3)

    def __str__(self):
        e2, e3 = self.roots[1], self.roots[2]
        return f"E_{{{self.n},{self.angle}}}/{self.field}: y^2 = x(x + {-e2})(x - {e3})"

    def to_json(self) -> dict:
        return {"n": self.n, "r": self.angle.r, "s": self.angle.s, "m": self.field.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> Curve:
        try:
            return cls(int(data["n"]), Angle(int(data["r"]), int(data["s"])), field_for(data.get("m")))
        except (KeyError, TypeError, ValueError) as e:
            raise ThetaCongDomainError(f"Malformed curve payload: {data!r}") from e

    # -- points --

    def point(self, x, y) -> CurvePoint:
        """Builds an affine point, checking the curve equation."""
        P = CurvePoint(self.field.coerce(x), self.field.coerce(y))
        if not self.contains(P):
            raise ThetaCongDomainError(f"{P} is not on {self}")
        return P

    def contains(self, P: CurvePoint) -> bool:
        if P.is_infinity:
            return True
        if not (self.field.contains(P.x) and self.field.contains(P.y)):
            return False
        return P.y * P.y == self.cubic(P.x)

    def _require(self, *points: CurvePoint):
        for P in points:
            if not self.contains(P):
                raise ThetaCongDomainError(f"{P} is not on {self}")

    def _add(self, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
        if P.is_infinity:
            return Q
        if Q.is_infinity:
            return P
        if P.x == Q.x:
            if P.y + Q.y == 0:
                return INFINITY_POINT
            lam = (3 * P.x * P.x + 2 * self.a2 * P.x + self.a4) / (2 * P.y)
        else:
            lam = (Q.y - P.y) / (Q.x - P.x)
        x3 = lam * lam - self.a2 - P.x - Q.x
        y3 = lam * (P.x - x3) - P.y
        return CurvePoint(self.field.coerce(x3), self.field.coerce(y3))

    def add(self, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
        self._require(P, Q)
        return self._add(P, Q)

    def double(self, P: CurvePoint) -> CurvePoint:
        self._require(P)
        return self._add(P, P)

    def multiply(self, k: int, P: CurvePoint) -> CurvePoint:
        self._require(P)
        if k < 0:
            k, P = -k, -P
        result = INFINITY_POINT
        while k:
            if k & 1:
                result = self._add(result, P)
            P = self._add(P, P)
            k >>= 1
        return result

    def two_torsion(self) -> list[CurvePoint]:
        zero = self.field.coerce(0)
        return [INFINITY_POINT] + [CurvePoint(self.field.coerce(e), zero) for e in self.roots]

    def sqrt(self, value):
        return self.field.sqrt(value)


def make_curve(n: int, angle: Angle, field=QQ) -> Curve:
    """E_{n,theta} over ``field``; n must be squarefree."""
    if not is_squarefree(n):
        raise ThetaCongDomainError(f"n must be a squarefree positive integer, got {n!r}")
    return Curve(n, angle, field)


def is_on_curve(curve: Curve, P: CurvePoint) -> bool:
    return curve.contains(P)


def add(curve: Curve, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    return curve.add(P, Q)


def neg(P: CurvePoint) -> CurvePoint:
    return -P


def scalar_mul(curve: Curve, k: int, P: CurvePoint) -> CurvePoint:
    return curve.multiply(k, P)


def two_torsion(curve: Curve) -> list[CurvePoint]:
    return curve.two_torsion()


def point_order(curve: Curve, P: CurvePoint, bound: int = TORSION_ORDER_BOUND) -> Optional[int]:
    """Least k <= bound with kP = infinity, or None when P survives the bound."""
    curve._require(P)
    Q = P
    for k in range(1, bound + 1):
        if Q.is_infinity:
            return k
        Q = curve._add(Q, P)
    return None


# ==================== Halving ====================


def is_in_2e(curve: Curve, P: CurvePoint) -> bool:
    """True iff x - e is a square in the base field for all three roots e."""
    if P.is_infinity:
        return True
    curve._require(P)
    return all(curve.sqrt(P.x - e) is not None for e in curve.roots)


def halve_two_torsion(curve: Curve, e1) -> list[CurvePoint]:
    """All points Q with 2Q = (e1, 0)."""
    matches = [e for e in curve.roots if e == e1]
    if not matches:
        raise ThetaCongDomainError(f"{e1} is not a root of {curve}")
    e1 = matches[0]
    e2, e3 = [e for e in curve.roots if e != e1]
    disc = curve.sqrt((e1 - e2) * (e1 - e3))
    if disc is None:
        return []
    target = CurvePoint(curve.field.coerce(e1), curve.field.coerce(0))
    halves = []
    for x in (e1 + disc, e1 - disc):
        x = curve.field.coerce(x)
        y = curve.sqrt(curve.cubic(x))
        if y is None:
            continue
        for Q in (CurvePoint(x, y), CurvePoint(x, -y)):
            if Q not in halves and curve._add(Q, Q) == target:
                halves.append(Q)
    return halves


def halve_point(curve: Curve, P: CurvePoint) -> list[CurvePoint]:
    """All points Q with 2Q = P (the four halves, or none)."""
    if P.is_infinity:
        return curve.two_torsion()
    curve._require(P)
    if P.y == 0:
        return halve_two_torsion(curve, P.x)
    roots = [curve.sqrt(P.x - e) for e in curve.roots]
    if any(root is None for root in roots):
        return []
    s1, s2, s3 = roots
    halves = []
    for e2, e3 in product((1, -1), repeat=2):
        t2, t3 = e2 * s2, e3 * s3
        x = curve.field.coerce(P.x + s1 * t2 + s1 * t3 + t2 * t3)
        y = curve.sqrt(curve.cubic(x))
        if y is None:
            continue
        for Q in (CurvePoint(x, y), CurvePoint(x, -y)):
            if Q not in halves and curve._add(Q, Q) == P:
                halves.append(Q)
    return halves


def three_torsion_points(curve: Curve) -> list[CurvePoint]:
    """Rational points of order 3, from rational roots of the 3-division polynomial."""
    if curve.field is not QQ:
        raise ThetaCongDomainError("three_torsion_points works over Q only")
    a2, a4 = curve.a2, curve.a4

    def psi3(x):
        return 3 * x**4 + 4 * a2 * x**3 + 6 * a4 * x**2 - a4 * a4

    points = []
    # rational roots p/q with q | 3 and p | a4^2
    for p in divisors(a4 * a4):
        for q in (1, 3):
            for x in (Fraction(p, q), Fraction(-p, q)):
                if psi3(x) != 0:
                    continue
                y = is_square_rat(curve.cubic(x))
                if y is None:
                    continue
                for Q in (CurvePoint(x, y), CurvePoint(x, -y)):
                    if Q not in points and point_order(curve, Q, 3) == 3:
                        points.append(Q)
    return points


# ==================== Torsion ====================


@dataclass(frozen=True)
class TorsionClass:
    """Torsion shape plus witnesses of the orders beyond 2-torsion."""

    shape: TorsionShape
    witnesses: tuple = ()
    notes: tuple = dc_field(default_factory=tuple)

    def to_json(self) -> dict:
        return {
            "shape": self.shape.value,
            "witnesses": [P.to_json() for P in self.witnesses],
            "notes": list(self.notes),
        }


def _is_square_int(value) -> bool:
    return is_square_rat(Fraction(value)) is not None


def _eight_torsion_parameters(n: int, r: int, s: int) -> Optional[tuple[int, int]]:
    """Parameters (a, b) making E_{n,theta}(Q) contain Z2 x Z8, if any."""
    if n not in (1, 2):
        return None
    bound = iroot(r, 4) + 2
    for b in range(1, bound + 1):
        for a in range(b + 1, bound + 1):
            if gcd(a, b) != 1 or (a - b) % 2 == 0:
                continue
            if n == 1:
                # b < a < (1 + sqrt 2) b
                if (a - b) ** 2 < 2 * b * b and r == 8 * a**4 * b**4 and r - s == (a * a - b * b) ** 4:
                    return a, b
            elif (a - b) ** 2 > 2 * b * b and r == (a * a - b * b) ** 4 and r - s == 32 * a**4 * b**4:
                return a, b
    return None


_SIX_TORSION_FORMS = {
    1: (Fraction(1, 2), Fraction(1)),
    2: (Fraction(1), Fraction(2)),
    3: (Fraction(1, 6), Fraction(1, 3)),
    6: (Fraction(1, 3), Fraction(2, 3)),
}


def _six_torsion_parameters(n: int, r: int, s: int) -> Optional[tuple[int, int]]:
    """Parameters (u, v) making E_{n,theta}(Q) contain Z2 x Z6, if any."""
    if n not in _SIX_TORSION_FORMS:
        return None
    c_r, c_rs = _SIX_TORSION_FORMS[n]
    bound = iroot(3 * (r + s), 3) + 2
    for u in range(2, bound + 1):
        for v in range(1, (u - 1) // 2 + 1):
            if gcd(u, v) != 1:
                continue
            if r == c_r * (u - v) ** 3 * (u + v) and r + s == c_rs * u**3 * (u - 2 * v):
                return u, v
    return None


def _four_torsion_criterion(n: int, r: int, s: int) -> bool:
    if n == 1:
        return _is_square_int(2 * r) and _is_square_int(r - s)
    if n == 2:
        return _is_square_int(r) and _is_square_int(2 * (r - s))
    return False


def torsion_q(n: int, angle: Angle) -> TorsionClass:
    """Torsion of E_{n,theta}(Q) by the parametric classification, confirmed by witnesses."""
    curve = make_curve(n, angle)
    r, s = angle.r, angle.s
    if _eight_torsion_parameters(n, r, s):
        predicted = TorsionShape.Z2xZ8
    elif _six_torsion_parameters(n, r, s):
        predicted = TorsionShape.Z2xZ6
    elif _four_torsion_criterion(n, r, s):
        predicted = TorsionShape.Z2xZ4
    else:
        predicted = TorsionShape.Z2xZ2

    shape, witnesses = TorsionShape.Z2xZ2, ()
    order_four = halve_two_torsion(curve, curve.roots[2])
    if order_four:
        shape, witnesses = TorsionShape.Z2xZ4, tuple(order_four)
        order_eight = [Q for P in order_four for Q in halve_point(curve, P)]
        if order_eight:
            shape, witnesses = TorsionShape.Z2xZ8, tuple(order_eight)
    elif n in _SIX_TORSION_FORMS:
        order_three = three_torsion_points(curve)
        if order_three:
            shape = TorsionShape.Z2xZ6
            witnesses = tuple(
                curve._add(P, T) for P in order_three for T in curve.two_torsion()[1:]
            )

    notes = []
    if shape != predicted:
        note = f"parametric criterion predicts {predicted.value}, witnesses give {shape.value}"
        logger.warning(f"{curve}: {note}")
        notes.append(note)
    return TorsionClass(shape=shape, witnesses=witnesses, notes=tuple(notes))


def quadratic_hypothesis_violations(n: int, m: int) -> list[str]:
    """Reasons the torsion and rank statements over Q(sqrt(m)) do not apply."""
    violations = []
    g = gcd(m, n)
    if g != 1:
        violations.append(f"gcd(m, n) = {g}")
    if not is_squarefree(n):
        violations.append(f"n = {n} is not squarefree")
    if m * n in (2, 3, 6):
        violations.append(f"mn = {m * n} is in {{2, 3, 6}}")
    return violations


def order_four_closed_forms(n: int, angle: Angle, m: int) -> list[tuple[QuadElem, QuadElem]]:
    """Closed-form (x, y) pairs for order-4 points over Q(sqrt(m)), when m = sqf(2r(r-s)).

    Applies when n = sqf(2r) (scale h with 2r = h^2 sqf(2r)) or n = sqf(r-s)
    (scale k with r-s = k^2 sqf(r-s)). Returns [] otherwise.
    """
    K = QuadField(m)
    r, s = angle.r, angle.s
    d_dec = sqf_decompose(2 * r * (r - s))
    if d_dec.core != m:
        return []
    d = d_dec.root
    scales = []
    two_r = sqf_decompose(2 * r)
    if n == two_r.core:
        scales.append(two_r.root)
    r_minus_s = sqf_decompose(r - s)
    if n == r_minus_s.core:
        scales.append(r_minus_s.root)
    forms = []
    for h in scales:
        for sign in (1, -1):
            x = K((n * h) ** 2, sign * n * d)
            y = K(Fraction(d * d * m * n, h), sign * n * n * h * d)
            forms.append((x, y))
            forms.append((x, -y))
    return forms


def torsion_k(n: int, angle: Angle, m: int) -> TorsionClass:
    """Torsion of E_{n,theta}(Q(sqrt(m))) via halving ((r-s)n, 0)."""
    K = QuadField(m)
    curve = Curve(n, angle, K)
    violations = quadratic_hypothesis_violations(n, m)
    notes = [f"theorem inapplicable: {v}" for v in violations]

    order_four = halve_two_torsion(curve, curve.roots[2])
    if not order_four:
        return TorsionClass(shape=TorsionShape.Z2xZ2, notes=tuple(notes))

    shape, witnesses = TorsionShape.Z2xZ4, tuple(order_four)
    if violations:
        order_eight = [Q for P in order_four for Q in halve_point(curve, P)]
        if order_eight:
            shape, witnesses = TorsionShape.Z2xZ8, tuple(order_eight)

    forms = order_four_closed_forms(n, angle, m)
    if forms:
        printed_y = {y for _, y in forms}
        halving_y = {P.y for P in order_four}
        if printed_y == halving_y:
            notes.append("closed-form y-values agree with halving")
        else:
            notes.append("closed-form y-values disagree with halving")
        off_curve = sorted({str(x) for x, y in forms if not curve.contains(CurvePoint(x, y))})
        if off_curve:
            logger.warning(f"{curve}: closed-form x-values off the curve: {off_curve}")
            notes.append(f"closed-form x-values off the curve: {', '.join(off_curve)}")
    return TorsionClass(shape=shape, witnesses=witnesses, notes=tuple(notes))


# ==================== Twists ====================


def twist_descend(curve: Curve, P: CurvePoint) -> tuple[Curve, CurvePoint]:
    """Maps P = (x, y' sqrt(m)) on E_{n}/K with sigma(P) = -P to (m x, m^2 y') on E_{mn}/Q."""
    if not isinstance(curve.field, QuadField):
        raise ThetaCongDomainError("twist_descend needs a curve over a quadratic field")
    m = curve.field.m
    target = Curve(m * curve.n, curve.angle, QQ)
    if P.is_infinity:
        return target, INFINITY_POINT
    curve._require(P)
    x, y = curve.field.coerce(P.x), curve.field.coerce(P.y)
    if not (x.is_rational and y.is_pure):
        raise ThetaCongDomainError(f"sigma(P) != -P for P = {P}")
    image = CurvePoint(m * x.a, m * m * y.b)
    if not target.contains(image):
        raise ThetaCongDomainError(f"{image} is not on {target}")
    return target, image


def sort_points(points) -> list[CurvePoint]:
    """Deterministic order: by x then y under the real embedding."""

    def cmp(P, Q):
        for a, b in ((P.x, Q.x), (P.y, Q.y)):
            sign = quad_sign(a - b)
            if sign:
                return sign
        return 0

    return sorted(points, key=cmp_to_key(cmp))


__all__ = [
    "Angle",
    "PI_OVER_3",
    "TWO_PI_OVER_3",
    "CurvePoint",
    "INFINITY_POINT",
    "Curve",
    "TorsionShape",
    "TorsionClass",
    "make_curve",
    "is_on_curve",
    "add",
    "neg",
    "scalar_mul",
    "two_torsion",
    "point_order",
    "is_in_2e",
    "halve_two_torsion",
    "halve_point",
    "three_torsion_points",
    "torsion_q",
    "torsion_k",
    "order_four_closed_forms",
    "quadratic_hypothesis_violations",
    "twist_descend",
    "sort_points",
]
