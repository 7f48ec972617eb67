"""Tests for triangles, phi/psi and the four-type classification."""

import random
from fractions import Fraction

import pytest

from thetacong.arith import QQ, QuadField, field_for, is_square_rat, sqf
from thetacong.correspondence import (
    ConicPoint,
    Triangle,
    TriangleType,
    classify,
    divide_by_sqrt_m,
    embed,
    phi,
    psi,
    reduction_coefficients,
    to_conic_point,
    triangle_from_point,
    validate,
)
from thetacong.curves import INFINITY_POINT, PI_OVER_3, TWO_PI_OVER_3, Angle, Curve, CurvePoint
from thetacong.exceptions import (
    InvalidTriangleError,
    NotInImageError,
    ThetaCongDomainError,
)

K13 = QuadField(13)
F = Fraction


# ── Fixtures ───────────────────────────────────────────────────


@pytest.fixture
def type1():
    return validate(K13(0, F(1, 2)), K13(0, F(24, 13)), K13(0, F(43, 26)), 3, PI_OVER_3, K13)


@pytest.fixture
def type2():
    return validate(3, 4, K13(0, 1), 3, PI_OVER_3, K13)


@pytest.fixture
def type3():
    return validate(K13(F(41, 3), F(-11, 3)), K13(F(41, 3), F(11, 3)), F(80, 3), 3, PI_OVER_3, K13)


@pytest.fixture
def type4():
    return validate(K13(-1, 1), K13(1, 1), 4, 3, PI_OVER_3, K13)


@pytest.fixture
def e39():
    return Curve(39, PI_OVER_3)


# ── validate ───────────────────────────────────────────────────


class TestValidate:
    def test_accepts_and_orders_sides(self):
        T = validate(4, 3, K13(0, 1), 3, PI_OVER_3, K13)
        assert (T.U, T.V) == (3, 4)
        assert T.W == K13(0, 1)

    def test_w_may_be_shorter_than_v(self, type2):
        """W = sqrt13 < V = 4 is allowed."""
        assert type2.W < type2.V

    @pytest.mark.parametrize(
        "sides, identity",
        [
            ((-3, -4, 5), "U > 0"),
            ((3, 4, -5), "W > 0"),
            ((1, 2, 3), "UV = 2rn"),
            ((3, 4, 4), "W^2 = U^2 + V^2 - (2s/r)UV"),
        ],
    )
    def test_names_failing_identity(self, sides, identity):
        with pytest.raises(InvalidTriangleError) as excinfo:
            validate(*[K13(x) for x in sides], 3, PI_OVER_3, K13)
        assert excinfo.value.identity == identity
        assert identity in str(excinfo.value)

    def test_obtuse_angle(self):
        """(1, 68, 19 sqrt13) has UV = 68 = 2rn for n = 17 and cos = -1/2."""
        T = validate(1, 68, K13(0, 19), 17, TWO_PI_OVER_3, K13)
        assert T.W * T.W == 1 + 68 * 68 + 68

    def test_json_round_trip(self, type3):
        payload = type3.to_json()
        assert payload["W"] == {"a": "80/3", "b": "0", "m": 13}
        assert (payload["n"], payload["r"], payload["s"], payload["m"]) == (3, 2, 1, 13)
        assert Triangle.from_json(payload) == type3

    def test_from_json_revalidates(self, type2):
        payload = type2.to_json()
        payload["n"] = 4
        with pytest.raises(InvalidTriangleError):
            Triangle.from_json(payload)
        with pytest.raises(ThetaCongDomainError):
            Triangle.from_json({"U": "1"})


# ── phi / psi ──────────────────────────────────────────────────


class TestPhiPsi:
    def test_phi_type2(self, type2):
        assert phi(type2) == CurvePoint(K13(F(13, 4)), K13(0, F(7, 8)))

    def test_phi_type3(self, type3):
        assert phi(type3) == CurvePoint(K13(F(1600, 9)), K13(0, F(18040, 27)))

    def test_phi_lands_on_curve(self, type1, type4):
        curve = Curve(3, PI_OVER_3, K13)
        for T in (type1, type4):
            assert curve.contains(phi(T))

    def test_psi_inverts_phi(self, type1, type2, type3, type4):
        curve = Curve(3, PI_OVER_3, K13)
        for T in (type1, type2, type3, type4):
            assert psi(curve, phi(T)) == T

    def test_psi_errors(self, type2):
        curve = Curve(3, PI_OVER_3, K13)
        with pytest.raises(NotInImageError):
            psi(curve, INFINITY_POINT)
        with pytest.raises(NotInImageError):
            psi(curve, -phi(type2))
        with pytest.raises(ThetaCongDomainError):
            psi(curve, CurvePoint(K13(1), K13(1)))

    def test_psi_rejects_non_squares(self, e39):
        """u = -9 is not a square."""
        with pytest.raises(NotInImageError):
            psi(e39, CurvePoint(F(-9), F(216)))

    def test_psi_at_two_torsion(self):
        """(1, 0) on E_{1,pi/3} is the equilateral triangle (2, 2, 2)."""
        T = psi(Curve(1, PI_OVER_3), CurvePoint(F(1), F(0)))
        assert T.sides == (2, 2, 2)

    def test_psi_phi_on_generated_triangles(self):
        """U random, V = 2rn/U and W = c sqrt(m) with m = sqf(W^2): 200 exact round trips."""
        rng = random.Random(5)
        angles = [PI_OVER_3, TWO_PI_OVER_3, Angle(16, 11), Angle(5, 3)]
        checked = 0
        while checked < 200:
            angle = rng.choice(angles)
            n = rng.choice([1, 2, 3, 5, 6, 7])
            U = F(rng.randint(1, 12), rng.randint(1, 12))
            V = 2 * angle.r * n / U
            w_sq = U * U + V * V - 4 * angle.s * n
            m = sqf(sqf(w_sq.numerator) * sqf(w_sq.denominator))
            field = field_for(m)
            c = is_square_rat(w_sq / m)
            W = c if field is QQ else field(0, c)
            T = validate(U, V, W, n, angle, field)
            assert psi(Curve(n, angle, field), phi(T)) == T
            checked += 1


# ── Points to triangles ────────────────────────────────────────


def test_triangle_from_point(e39):
    """2(-9, -216) gives the rational triangle (13/2, 24, 43/2)."""
    T = triangle_from_point(e39, e39.point(-9, -216))
    assert T.sides == (F(13, 2), F(24), F(43, 2))
    assert T.field == QQ


def test_triangle_from_two_torsion_fails(e39):
    with pytest.raises(NotInImageError):
        triangle_from_point(e39, CurvePoint(F(0), F(0)))


def test_divide_by_sqrt_m(e39, type1):
    rational = triangle_from_point(e39, e39.point(-9, -216))
    assert divide_by_sqrt_m(rational, 3, K13) == type1
    with pytest.raises(ThetaCongDomainError):
        divide_by_sqrt_m(rational, 5, K13)


def test_embed(e39):
    rational = triangle_from_point(e39, e39.point(-9, -216))
    T = embed(rational, K13)
    assert T.field == K13
    assert classify(T) == TriangleType.RATIONAL


# ── classify ───────────────────────────────────────────────────


class TestClassify:
    def test_four_types(self, type1, type2, type3, type4):
        assert classify(type1) == TriangleType.TYPE1
        assert classify(type2) == TriangleType.TYPE2
        assert classify(type3) == TriangleType.TYPE3
        assert classify(type4) == TriangleType.TYPE4

    def test_equilateral_scaled_is_type2(self):
        """(2, 2, 2 sqrt3) at 2pi/3: U and V rational, W pure."""
        K3 = QuadField(3)
        T = validate(2, 2, K3(0, 2), 1, TWO_PI_OVER_3, K3)
        assert classify(T) == TriangleType.TYPE2

    def test_needs_quadratic_field(self, e39):
        rational = triangle_from_point(e39, e39.point(-9, -216))
        with pytest.raises(ThetaCongDomainError):
            classify(rational)


# ── Conic reductions ───────────────────────────────────────────


class TestConicReduction:
    def test_type2(self, type2):
        """(ru - sv, v, mrw) = (2, 4, 26) on z^2 = 13x^2 + 39y^2."""
        point = to_conic_point(type2)
        assert point == ConicPoint(F(2), F(4), F(26), 13, 39)

    def test_type3(self, type3):
        point = to_conic_point(type3)
        assert (point.x, point.y, point.z) == (F(41, 3), F(11, 3), F(160, 3))
        assert (point.A, point.B) == (4, 156)

    def test_type4(self, type4):
        """(u, v, rW) = (1, 1, 8) on z^2 = 12x^2 + 52y^2."""
        point = to_conic_point(type4)
        assert (point.x, point.y, point.z) == (1, 1, 8)
        assert (point.A, point.B) == (12, 52)
        assert point.to_json() == {"point": ["1", "1", "8"], "conic": {"A": 12, "B": 52}}

    def test_type1_has_no_conic(self, type1):
        with pytest.raises(ThetaCongDomainError):
            to_conic_point(type1)

    def test_coefficients_at_obtuse_angle(self):
        assert reduction_coefficients(TriangleType.TYPE3, 13, TWO_PI_OVER_3) == (12, 52)
        assert reduction_coefficients(TriangleType.TYPE4, 13, TWO_PI_OVER_3) == (4, 156)
