"""Constructive searches for (K, theta, n)-triangles and the composition of two rational triangles.

Each search returns a ``Construction``: the triangle found (or None when the
budget is exhausted) together with a provenance record that says how it was
obtained, so results can be replayed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterator, Optional

from loguru import logger

from .arith import QQ, QuadElem, QuadField, as_rat, is_square_rat, rat_to_str
from .config import SearchBudget
from .correspondence import (
    Triangle,
    TriangleType,
    divide_by_sqrt_m,
    phi,
    psi,
    triangle_from_point,
    validate,
)
from .curves import Angle, Curve, CurvePoint
from .exceptions import (
    DegenerateSumError,
    NotInImageError,
    ThetaCongDomainError,
    ThetaCongInternalError,
)
from .obstruct import Conic, conics_for, obstructed_places
from .search import first_witness


@dataclass(frozen=True)
class Construction:
    """A search outcome: the triangle (None when absent) and how it was found."""

    triangle: Optional[Triangle]
    provenance: dict = field(default_factory=dict)
    notes: tuple = ()

    @property
    def found(self) -> bool:
        return self.triangle is not None

    def to_json(self) -> dict:
        return {
            "triangle": self.triangle.to_json() if self.triangle else None,
            "provenance": self.provenance,
            "notes": list(self.notes),
        }


def iter_rationals(max_height: int, positive: bool = False) -> Iterator[Fraction]:
    """Rationals p/q in lowest terms by ascending height max(|p|, q), ties by p then q."""
    for h in range(1, max_height + 1):
        pairs = {(p, h) for p in range(-h, h + 1)}
        pairs |= {(p, q) for p in (-h, h) for q in range(1, h)}
        for p, q in sorted(pairs):
            if positive and p <= 0:
                continue
            if gcd(p, q) != 1:
                continue
            yield Fraction(p, q)


def _check_field(n: int, m: int) -> QuadField:
    K = QuadField(m)
    if gcd(m, n) != 1:
        logger.warning(f"gcd(m, n) = {gcd(m, n)}; searching anyway")
    return K


# ==================== Type 1 ====================


def search_type1(
    n: int, angle: Angle, m: int, budget: Optional[SearchBudget] = None, n_jobs: Optional[int] = None
) -> Construction:
    """A rational triangle of area mn*alpha from E_{mn}(Q), divided by sqrt(m)."""
    K = _check_field(n, m)
    budget = budget or SearchBudget()
    curve = Curve(m * n, angle, QQ)
    hit = first_witness([curve], budget, n_jobs)
    if hit is None:
        return Construction(None, {"method": "type1-twist"}, ("no point of order > 2 below bound",))
    _, P, h = hit
    rational = triangle_from_point(curve, P)
    triangle = divide_by_sqrt_m(rational, n, K)
    provenance = {
        "method": "type1-twist",
        "curve": curve.to_json(),
        "point": P.to_json(),
        "height": h,
    }
    return Construction(triangle, provenance)


# ==================== Type 2 ====================


def search_type2(
    n: int, angle: Angle, m: int, budget: Optional[SearchBudget] = None
) -> Construction:
    """Rational U = p/q with U <= V = 2rn/U and W^2/m a rational square."""
    K = _check_field(n, m)
    budget = budget or SearchBudget()
    conic = conics_for(m, angle)[0]
    bad = obstructed_places(conic)
    if bad:
        note = f"conic locally obstructed at {bad}: {conic}"
        logger.info(note)
        return Construction(None, {"method": "type2-sweep"}, (note,))

    r, s = angle.r, angle.s
    product = 2 * r * n
    for U in iter_rationals(budget.max_param, positive=True):
        if U * U > product:
            continue
        V = product / U
        w_sq = U * U + V * V - Fraction(2 * s, r) * product
        c = is_square_rat(w_sq / m)
        if not c:
            continue
        triangle = validate(U, V, K(0, c), n, angle, K)
        logger.success(f"Type 2 triangle {triangle} at U = {U}")
        return Construction(triangle, {"method": "type2-sweep", "U": rat_to_str(U)})
    return Construction(None, {"method": "type2-sweep"}, ("no rational U below bound",))


# ==================== Types 3 and 4 ====================


def conic_point_at(base: tuple, m: int, t) -> Optional[tuple[Fraction, Fraction]]:
    """
    Second intersection of the line u - u0 = t(v - v0) with u^2 - m v^2 = const.

    The same formula serves m v^2 - u^2 = const. Returns None when t^2 = m.
    """
    u0, v0 = (Fraction(c) for c in base)
    t = Fraction(t)
    denominator = t * t - m
    if denominator == 0:
        return None
    lam = (2 * m * v0 - 2 * u0 * t) / denominator
    return u0 + t * lam, v0 + lam


def _base_conic(tag: TriangleType, n: int, angle: Angle, m: int) -> Conic:
    N = 2 * angle.r * n
    return Conic(m, N) if tag == TriangleType.TYPE3 else Conic(m, -N)


def find_conic_base(
    tag: TriangleType, n: int, angle: Angle, m: int, budget: SearchBudget
) -> Optional[tuple[Fraction, Fraction]]:
    """
    A point (a/c, b/c) on u^2 - m v^2 = 2rn (Type 3) or m v^2 - u^2 = 2rn (Type 4).

    Pairs (b, c) are tried by max(b, c), then c, then b, with b <= maxParam
    and c <= maxDenominator.
    """
    N = 2 * angle.r * n
    sign = 1 if tag == TriangleType.TYPE3 else -1
    for h in range(1, max(budget.max_param, budget.max_denominator) + 1):
        pairs = []
        if h <= budget.max_param:
            pairs += [(c, h) for c in range(1, min(h, budget.max_denominator) + 1)]
        if h <= budget.max_denominator:
            pairs += [(h, b) for b in range(0, min(h - 1, budget.max_param) + 1)]
        for c, b in sorted(pairs):
            if gcd(b, c) != 1:
                continue
            a_sq = sign * N * c * c + m * b * b
            a = is_square_rat(Fraction(a_sq)) if a_sq >= 0 else None
            if a is not None:
                return Fraction(a, c), Fraction(b, c)
    return None


def _conic_triangle(tag, u, v, n, angle, K) -> Optional[Triangle]:
    u, v = abs(u), abs(v)
    if v == 0:
        return None
    w = is_square_rat(2 * u * u + 2 * K.m * v * v - 4 * angle.s * n)
    if w is None:
        return None
    if tag == TriangleType.TYPE3:
        U = K(u, -v)
    else:
        U = K(-u, v)
    return validate(U, K(u, v), K(w), n, angle, K)


def _search_conic_type(
    tag: TriangleType, n: int, angle: Angle, m: int, budget: Optional[SearchBudget]
) -> Construction:
    K = _check_field(n, m)
    budget = budget or SearchBudget()
    method = f"type{tag.value}-parametrization"
    index = {TriangleType.TYPE3: 1, TriangleType.TYPE4: 2}[tag]
    for conic in (_base_conic(tag, n, angle, m), conics_for(m, angle)[index]):
        bad = obstructed_places(conic)
        if bad:
            note = f"conic locally obstructed at {bad}: {conic}"
            logger.info(note)
            return Construction(None, {"method": method}, (note,))

    base = find_conic_base(tag, n, angle, m, budget)
    if base is None:
        return Construction(None, {"method": method}, ("no local point found below bound",))
    base_json = [rat_to_str(c) for c in base]
    logger.debug(f"Type {tag.value} base point {base_json}")

    triangle = _conic_triangle(tag, *base, n, angle, K)
    if triangle is not None:
        return Construction(triangle, {"method": method, "base": base_json, "t": None})

    for t in iter_rationals(budget.max_param):
        point = conic_point_at(base, m, t)
        if point is None:
            continue
        u, v = point
        if tag == TriangleType.TYPE3:
            on_conic = u * u - m * v * v == 2 * angle.r * n
        else:
            on_conic = m * v * v - u * u == 2 * angle.r * n
        if not on_conic:
            raise ThetaCongInternalError(f"Parametrized point {point} left the conic at t = {t}")
        triangle = _conic_triangle(tag, u, v, n, angle, K)
        if triangle is not None:
            logger.success(f"Type {tag.value} triangle {triangle} at t = {t}")
            return Construction(
                triangle, {"method": method, "base": base_json, "t": rat_to_str(t)}
            )
    return Construction(
        None, {"method": method, "base": base_json}, ("no square W^2 below bound",)
    )


def search_type3(n: int, angle: Angle, m: int, budget: Optional[SearchBudget] = None) -> Construction:
    """Solves u^2 - m v^2 = 2rn and returns (u - v sqrt(m), u + v sqrt(m), W)."""
    return _search_conic_type(TriangleType.TYPE3, n, angle, m, budget)


def search_type4(n: int, angle: Angle, m: int, budget: Optional[SearchBudget] = None) -> Construction:
    """Solves m v^2 - u^2 = 2rn and returns (-u + v sqrt(m), u + v sqrt(m), W)."""
    return _search_conic_type(TriangleType.TYPE4, n, angle, m, budget)


def search_type(
    tag, n: int, angle: Angle, m: int, budget: Optional[SearchBudget] = None, n_jobs: Optional[int] = None
) -> Construction:
    """Dispatches to the search for ``tag``, given as a TriangleType or as "1" to "4"."""
    try:
        tag = TriangleType(tag if isinstance(tag, TriangleType) else str(tag))
    except ValueError as e:
        raise ThetaCongDomainError(f"Unknown triangle type {tag!r}") from e
    if tag == TriangleType.TYPE1:
        return search_type1(n, angle, m, budget, n_jobs)
    if tag == TriangleType.TYPE2:
        return search_type2(n, angle, m, budget)
    if tag == TriangleType.TYPE3:
        return search_type3(n, angle, m, budget)
    if tag == TriangleType.TYPE4:
        return search_type4(n, angle, m, budget)
    raise ThetaCongDomainError(f"No search for type {tag.value}")


# ==================== Composition ====================


def _sides(T: Triangle) -> tuple[Fraction, Fraction, Fraction]:
    return tuple(as_rat(side) for side in T.sides)


def composition_closed_form(T1: Triangle, T2: Triangle, m: int) -> tuple[Fraction, Fraction]:
    """
    Rational (a, b) with x(phi(T1) + phi(T2 / sqrt(m))) = a + b sqrt(m).

    With D = V^2 - U^2 and Delta = W2^2 - m W1^2:
    a = (m^3 W1^2 D1^2 + W2^2 D2^2) / (4 m Delta^2) - W1^2/4 - W2^2/(4m) - 2sn
    and b = -W1 W2 D1 D2 / (2 Delta^2).
    """
    QuadField(m)
    U1, V1, W1 = _sides(T1)
    U2, V2, W2 = _sides(T2)
    D1, D2 = V1 * V1 - U1 * U1, V2 * V2 - U2 * U2
    delta = W2 * W2 - m * W1 * W1
    if delta == 0:
        raise DegenerateSumError("W2^2 = m W1^2")
    s, n = T1.angle.s, T1.n
    a = (m**3 * W1 * W1 * D1 * D1 + W2 * W2 * D2 * D2) / (4 * m * delta * delta)
    a -= W1 * W1 / 4 + W2 * W2 / (4 * m) + 2 * s * n
    b = -W1 * W2 * D1 * D2 / (2 * delta * delta)
    return a, b


def closed_form_roots(c: Fraction, b: Fraction, m: int) -> list[QuadElem]:
    """
    Square roots alpha1 + alpha2 sqrt(m) of c + b sqrt(m) via
    alpha1 = +-sqrt((c +- sqrt(c^2 - m b^2)) / 2) and alpha2 = b / (2 alpha1).
    """
    K = QuadField(m)
    inner = is_square_rat(c * c - m * b * b)
    if inner is None:
        return []
    roots = []
    for branch in (c + inner, c - inner):
        alpha1 = is_square_rat(branch / 2)
        if not alpha1:
            continue
        for sign in (1, -1):
            root = K(sign * alpha1, b / (2 * sign * alpha1))
            if root * root == K(c, b) and root not in roots:
                roots.append(root)
    return roots


def composition_point(T1: Triangle, T2: Triangle, m: int) -> tuple[Curve, CurvePoint]:
    """phi(T1) + phi(T2 / sqrt(m)) on E_{n,theta} over Q(sqrt(m)), with v >= 0."""
    K = QuadField(m)
    if T1.angle != T2.angle:
        raise ThetaCongDomainError("Both triangles must share the angle")
    if T2.n != m * T1.n:
        raise ThetaCongDomainError(f"Second triangle has n = {T2.n}, expected {m * T1.n}")
    if T1.field != QQ or T2.field != QQ:
        raise ThetaCongDomainError("compose needs rational triangles")
    curve = Curve(T1.n, T1.angle, K)
    P1 = phi(Triangle(*(K.coerce(x) for x in T1.sides), T1.n, T1.angle, K))
    P2 = phi(divide_by_sqrt_m(T2, T1.n, K))
    if P1.x == P2.x:
        raise DegenerateSumError("phi(T1) and phi(T2 / sqrt(m)) share an x-coordinate")
    P = curve.add(P1, P2)
    if P.y < 0:
        P = -P
    return curve, P


def compose(T1: Triangle, T2: Triangle, m: int) -> Triangle:
    """
    Combines a rational triangle of area n*alpha and one of area mn*alpha into a (K, theta, n)-triangle.

    The group law on E_{n,theta}(K) gives the point; the closed forms are
    evaluated alongside and any disagreement is logged.

    Raises:
        DegenerateSumError: If W2^2 = m W1^2.
        ThetaCongInternalError: If psi fails on the sum.
    """
    a, b = composition_closed_form(T1, T2, m)
    curve, P = composition_point(T1, T2, m)
    if P.x != curve.field(a, b):
        logger.warning(f"Closed form a + b sqrt(m) = {curve.field(a, b)} differs from x(P) = {P.x}")
    try:
        triangle = psi(curve, P)
    except NotInImageError as e:
        raise ThetaCongInternalError(f"psi failed on the composed point {P}: {e}") from e

    r, s, n = curve.angle.r, curve.angle.s, curve.n
    checks = (
        ("u + (r+s)n", P.x + (r + s) * n, (triangle.V + triangle.U) / 2),
        ("u - (r-s)n", P.x - (r - s) * n, (triangle.V - triangle.U) / 2),
        ("4u", 4 * P.x, triangle.W),
    )
    for label, value, principal in checks:
        roots = closed_form_roots(value.a, value.b, m)
        if principal not in roots:
            logger.warning(f"Closed-form roots of {label} = {value} miss {principal}")
    logger.success(f"Composed triangle {triangle} over {curve.field}")
    return triangle


__all__ = [
    "Construction",
    "SearchBudget",
    "iter_rationals",
    "search_type",
    "search_type1",
    "search_type2",
    "search_type3",
    "search_type4",
    "find_conic_base",
    "conic_point_at",
    "composition_closed_form",
    "closed_form_roots",
    "composition_point",
    "compose",
]
