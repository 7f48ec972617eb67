"""Tests for exact rationals, squarefree parts, Hilbert symbols and Q(sqrt(m))."""

import random
from fractions import Fraction
from functools import lru_cache

import mpmath
import pytest

from thetacong.arith import (
    INFINITY,
    QQ,
    QuadField,
    divisors,
    factorize,
    field_for,
    height,
    hilbert,
    iroot,
    is_prime,
    is_square_int,
    is_square_quad,
    is_square_rat,
    is_squarefree,
    legendre,
    prime_divisors,
    quad_sign,
    rat_from_str,
    rat_to_str,
    scalar_from_json,
    scalar_to_json,
    signed_sqf,
    sqf,
    sqf_decompose,
    valuation,
)
from thetacong.exceptions import ThetaCongDomainError


# ── Brute-force p-adic oracle ──────────────────────────────────


def _padic_square_residue(c: int, p: int, k: int) -> bool:
    """Whether every integer congruent to c mod p^k is a nonzero p-adic square.

    False when c vanishes mod p^k or the residue carries too little precision.
    """
    c %= p**k
    if c == 0:
        return False
    v = 0
    while c % p == 0:
        c //= p
        v += 1
    if v % 2:
        return False
    if p == 2:
        return v + 3 <= k and c % 8 == 1
    return v + 1 <= k and c % p in {i * i % p for i in range(1, p)}


def _padic_square_int(n: int, p: int) -> bool:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    if v % 2:
        return False
    if p == 2:
        return n % 8 == 1
    return n % p in {i * i % p for i in range(1, p)}


@lru_cache(maxsize=None)
def _conic_solvable(a: int, b: int, p: int) -> bool:
    """z^2 = a x^2 + b y^2 over Q_p, for squarefree a and b, by enumeration mod p^k."""
    if _padic_square_int(-a * b, p):
        return True
    k_a, _ = valuation(a, p)
    k_b, _ = valuation(b, p)
    if p == 2:
        k = 2 * valuation(4 * a * b, 2)[0] + 3
    else:
        k = k_a + k_b + 2
    M = p**k
    if any(_padic_square_residue(a + b * y * y, p, k) for y in range(M)):
        return True
    return any(_padic_square_residue(a * x * x + b, p, k) for x in range(0, M, p))


# ── Rationals and integers ─────────────────────────────────────


def test_rat_strings():
    """Rats print as p/q in lowest terms and parse back."""
    assert rat_to_str(Fraction(6, 4)) == "3/2"
    assert rat_to_str(Fraction(-8, 4)) == "-2"
    assert rat_from_str("3/6") == Fraction(1, 2)
    assert rat_from_str(" -7 ") == Fraction(-7)


@pytest.mark.parametrize("text", ["1.5", "1/0", "a/b", "1/2/3", ""])
def test_rat_from_str_rejects(text):
    """Floats, zero denominators and junk are rejected."""
    with pytest.raises(ThetaCongDomainError):
        rat_from_str(text)


def test_height_and_roots():
    assert height(Fraction(-7, 3)) == 7
    assert height(Fraction(2, 9)) == 9
    assert iroot(10**20, 2) == 10**10
    assert iroot(26, 3) == 2
    assert iroot(27, 3) == 3


def test_factorization_helpers():
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert factorize(-97) == {97: 1}
    assert prime_divisors(156) == [2, 3, 13]
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert divisors(-9) == [1, 3, 9]
    with pytest.raises(ThetaCongDomainError):
        factorize(0)
    with pytest.raises(ThetaCongDomainError):
        divisors(0)


def test_primes_and_integer_squares():
    assert [p for p in range(30) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert not is_prime(True)
    assert is_square_int(10**40) == 10**20
    assert is_square_int(0) == 0
    assert is_square_int(10**40 + 1) is None
    assert is_square_int(-4) is None


def test_squarefree_parts():
    """N = root^2 * core with the core squarefree."""
    decomp = sqf_decompose(72)
    assert (decomp.core, decomp.root) == (2, 6)
    assert decomp.value == 72
    assert sqf(12) == 3
    assert sqf(13) == 13
    assert signed_sqf(-12) == -3
    assert is_squarefree(39)
    assert not is_squarefree(4)
    with pytest.raises(ThetaCongDomainError):
        sqf_decompose(0)


def test_valuation():
    assert valuation(-24, 2) == (3, -3)
    assert valuation(7, 3) == (0, 7)


# ── Symbols ────────────────────────────────────────────────────


def test_legendre():
    assert legendre(2, 7) == 1
    assert legendre(3, 7) == -1
    assert legendre(14, 7) == 0
    with pytest.raises(ThetaCongDomainError):
        legendre(1, 2)
    with pytest.raises(ThetaCongDomainError):
        legendre(1, 9)


def test_hilbert_known_values():
    """Classical values: -1 is a sum of two squares only at odd p."""
    assert hilbert(-1, -1, INFINITY) == -1
    assert hilbert(-1, -1, 2) == -1
    assert hilbert(-1, -1, 3) == 1
    assert hilbert(2, 3, 3) == -1
    assert hilbert(2, 3, 2) == -1
    assert hilbert(2, 3, INFINITY) == 1


def test_hilbert_rejects_bad_places():
    with pytest.raises(ThetaCongDomainError):
        hilbert(0, 3, 3)
    with pytest.raises(ThetaCongDomainError):
        hilbert(2, 3, 4)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_hilbert_matches_padic_enumeration(p):
    """The closed formulas agree with brute-force local solvability for |a|, |b| <= 30."""
    values = [v for v in range(-30, 31) if v]
    for a in values:
        for b in values:
            expected = _conic_solvable(signed_sqf(a), signed_sqf(b), p)
            assert (hilbert(a, b, p) == 1) == expected, (a, b, p)


def test_hilbert_product_formula():
    """prod_v (a, b)_v = 1 over all places, on random pairs."""
    rng = random.Random(20240601)
    for _ in range(1000):
        a = rng.choice([-1, 1]) * rng.randint(1, 10**4)
        b = rng.choice([-1, 1]) * rng.randint(1, 10**4)
        places = set(prime_divisors(2 * a * b))
        product = hilbert(a, b, INFINITY)
        for p in places:
            product *= hilbert(a, b, p)
        assert product == 1, (a, b)


# ── Q(sqrt(m)) ─────────────────────────────────────────────────


@pytest.fixture
def K13():
    return QuadField(13)


@pytest.mark.parametrize("m", [1, 0, -5, 4, 12])
def test_quad_field_rejects_bad_m(m):
    with pytest.raises(ThetaCongDomainError):
        QuadField(m)


def test_field_for():
    assert field_for(None) is QQ
    assert field_for(1) is QQ
    assert field_for(13) == QuadField(13)


class TestQuadElem:
    """Arithmetic on a + b sqrt(m)."""

    def test_product_and_norm(self, K13):
        """(1 + sqrt13)(-1 + sqrt13) = 12."""
        x, y = K13(1, 1), K13(-1, 1)
        assert x * y == 12
        assert x.norm() == -12
        assert x.conj() == K13(1, -1)

    def test_division(self, K13):
        x = K13(Fraction(41, 3), Fraction(-11, 3))
        assert x / x == 1
        assert (1 / x) * x == 1
        assert x ** 2 == x * x
        assert x ** -1 == 1 / x
        with pytest.raises(ZeroDivisionError):
            x / K13(0, 0)

    def test_mixed_fields_raise(self):
        with pytest.raises(ThetaCongDomainError):
            QuadField(2)(1, 1) + QuadField(3)(1, 1)

    def test_rational_elements_equal_fractions(self, K13):
        assert K13(Fraction(5, 2)) == Fraction(5, 2)
        assert hash(K13(Fraction(5, 2))) == hash(Fraction(5, 2))
        assert K13(0, 1) != 0

    def test_str(self, K13):
        assert str(K13(Fraction(41, 3), Fraction(-11, 3))) == "41/3 - 11*sqrt(13)/3"
        assert str(K13(-1, 1)) == "-1 + sqrt(13)"
        assert str(K13(0, Fraction(1, 2))) == "sqrt(13)/2"
        assert str(K13(7)) == "7"

    def test_flags(self, K13):
        assert K13(3).is_rational
        assert K13(0, 3).is_pure
        assert not K13(1, 1).is_pure

    def test_json(self, K13):
        x = K13(1, Fraction(-2, 3))
        assert scalar_to_json(x) == {"a": "1", "b": "-2/3", "m": 13}
        assert scalar_from_json(scalar_to_json(x), K13) == x
        assert scalar_to_json(Fraction(3, 4)) == "3/4"
        assert scalar_from_json("3/4", QQ) == Fraction(3, 4)


def test_quad_sign_mixed_signs(K13):
    """sqrt(13) is about 3.606."""
    assert quad_sign(K13(-3, 1)) == 1
    assert quad_sign(K13(-4, 1)) == -1
    assert quad_sign(K13(4, -1)) == 1
    assert quad_sign(K13(3, -1)) == -1
    assert quad_sign(K13(0, 0)) == 0
    assert quad_sign(Fraction(-1, 2)) == -1


def test_quad_sign_agrees_with_mpmath():
    """Exact signs match a 60-digit evaluation."""
    rng = random.Random(7)
    with mpmath.workdps(60):
        _check_signs(rng)


def _check_signs(rng):
    for _ in range(1000):
        m = rng.choice([2, 3, 5, 6, 7, 13, 17])
        a = Fraction(rng.randint(-500, 500), rng.randint(1, 50))
        b = Fraction(rng.randint(-500, 500), rng.randint(1, 50))
        x = QuadField(m)(a, b)
        approx = mpmath.mpf(a.numerator) / a.denominator + mpmath.mpf(b.numerator) / b.denominator * mpmath.sqrt(m)
        expected = 0 if (a == 0 and b == 0) else (1 if approx > 0 else -1)
        assert quad_sign(x) == expected, x


class TestSquareRoots:
    """Square roots inside Q and Q(sqrt(m))."""

    def test_rational(self):
        assert is_square_rat(Fraction(9, 4)) == Fraction(3, 2)
        assert is_square_rat(Fraction(2)) is None
        assert is_square_rat(Fraction(-4)) is None
        assert is_square_rat(0) == 0

    def test_quadratic(self):
        K3 = QuadField(3)
        assert is_square_quad(K3(7, 4)) == K3(2, 1)
        assert is_square_quad(K3(3)) == K3(0, 1)
        assert is_square_quad(K3(21, -12)) == K3(-3, 2)
        assert is_square_quad(K3(-1)) is None
        assert is_square_quad(K3(2)) is None
        assert is_square_quad(K3(0)) == K3(0)

    def test_random_squares(self):
        """The positive root of x^2 is |x|, for random x."""
        rng = random.Random(11)
        for _ in range(1000):
            K = QuadField(rng.choice([2, 3, 5, 13, 21]))
            x = K(Fraction(rng.randint(-99, 99), rng.randint(1, 20)), Fraction(rng.randint(-99, 99), rng.randint(1, 20)))
            if not x:
                continue
            root = is_square_quad(x * x)
            assert root == (x if quad_sign(x) > 0 else -x)

    def test_non_squares(self):
        """x^2 * (1 + sqrt2) is never a square."""
        K2 = QuadField(2)
        for a in range(1, 20):
            x = K2(a, 1)
            assert is_square_quad(x * x * K2(1, 1)) is None
