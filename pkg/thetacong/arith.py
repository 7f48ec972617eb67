"""Exact arithmetic: rationals, squarefree parts, quadratic symbols and Q(sqrt(m)).

Rationals are ``fractions.Fraction`` throughout. Elements of a real quadratic
field are ``QuadElem`` values ``a + b*sqrt(m)`` with rational ``a`` and ``b``;
the real embedding sends ``sqrt(m)`` to the positive root, and every sign
decision is made with integer comparisons only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from sympy import integer_nthroot
from sympy.ntheory import divisors as positive_divisors
from sympy.ntheory import isprime, legendre_symbol

from .exceptions import ThetaCongDomainError

INFINITY = "inf"

Scalar = Union[int, Fraction, "QuadElem"]


# ==================== Rationals ====================


def as_rat(value) -> Fraction:
    """Coerces an int, Fraction or rational QuadElem to a Fraction."""
    if isinstance(value, QuadElem):
        if value.b != 0:
            raise ThetaCongDomainError(f"{value} is not rational")
        return value.a
    if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
        raise ThetaCongDomainError(f"Expected an exact rational, got {value!r}")
    return Fraction(value)


def rat_to_str(q) -> str:
    """Serializes a rational as "p/q", omitting q when it is 1."""
    q = as_rat(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def rat_from_str(text: str) -> Fraction:
    """Parses "p/q" or "p" (no floats, no whitespace tricks)."""
    text = str(text).strip()
    parts = text.split("/")
    try:
        if len(parts) == 1:
            return Fraction(int(parts[0]))
        if len(parts) == 2:
            den = int(parts[1])
            if den == 0:
                raise ZeroDivisionError
            return Fraction(int(parts[0]), den)
    except (ValueError, ZeroDivisionError):
        pass
    raise ThetaCongDomainError(f"Not an exact rational: {text!r}")


def height(q) -> int:
    """Naive height max(|p|, q) of a rational in lowest terms."""
    q = as_rat(q)
    return max(abs(q.numerator), q.denominator)


# ==================== Integers ====================


def iroot(n: int, k: int) -> int:
    """Largest integer r >= 0 with r**k <= n, for n >= 0."""
    if n < 0:
        raise ThetaCongDomainError("iroot needs a non-negative argument")
    return int(integer_nthroot(n, k)[0])


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of |n| by trial division."""
    n = abs(n)
    if n == 0:
        raise ThetaCongDomainError("Cannot factor 0")
    factors: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def prime_divisors(n: int) -> list[int]:
    return sorted(factorize(n))


def divisors(n: int) -> list[int]:
    """Positive divisors of |n|, ascending."""
    if n == 0:
        raise ThetaCongDomainError("0 has infinitely many divisors")
    return [int(d) for d in positive_divisors(abs(n))]


def is_prime(p: int) -> bool:
    if isinstance(p, bool) or not isinstance(p, int) or p < 2:
        return False
    return bool(isprime(p))


@dataclass(frozen=True)
class SqfDecomp:
    """N = root**2 * core with core squarefree."""

    core: int
    root: int

    @property
    def value(self) -> int:
        return self.root**2 * self.core


def sqf_decompose(n: int) -> SqfDecomp:
    """Splits a positive integer into its squarefree core and square root part.

    Raises:
        ThetaCongDomainError: If n <= 0.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n <= 0:
        raise ThetaCongDomainError(f"sqf_decompose needs a positive integer, got {n!r}")
    core, root = 1, 1
    for p, k in factorize(n).items():
        root *= p ** (k // 2)
        if k % 2:
            core *= p
    return SqfDecomp(core=core, root=root)


def sqf(n: int) -> int:
    return sqf_decompose(n).core


def signed_sqf(n: int) -> int:
    """Squarefree representative of the square class of a nonzero integer."""
    if n == 0:
        raise ThetaCongDomainError("0 has no square class")
    return (1 if n > 0 else -1) * sqf(abs(n))


def is_squarefree(n: int) -> bool:
    return isinstance(n, int) and n >= 1 and sqf(n) == n


def valuation(n: int, p: int) -> tuple[int, int]:
    """Returns (k, u) with n = p**k * u and p not dividing u."""
    if n == 0:
        raise ThetaCongDomainError("valuation of 0 is infinite")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k, n


# ==================== Symbols ====================


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p).

    Raises:
        ThetaCongDomainError: If p is not an odd prime.
    """
    if p == 2 or not is_prime(p):
        raise ThetaCongDomainError(f"legendre needs an odd prime, got {p!r}")
    return int(legendre_symbol(a % p, p))


def _eps(u: int) -> int:
    return ((u - 1) // 2) % 2


def _omega(u: int) -> int:
    return ((u * u - 1) // 8) % 2


def hilbert(a: int, b: int, place) -> int:
    """Hilbert symbol (a, b) at a prime p or at INFINITY.

    Returns 1 iff z^2 = a x^2 + b y^2 has a nonzero solution in the completion.
    """
    if a == 0 or b == 0:
        raise ThetaCongDomainError("Hilbert symbol needs nonzero arguments")
    if place == INFINITY:
        return -1 if a < 0 and b < 0 else 1
    p = place
    if not is_prime(p):
        raise ThetaCongDomainError(f"Not a place: {place!r}")
    alpha, u = valuation(a, p)
    beta, v = valuation(b, p)
    if p == 2:
        e = _eps(u) * _eps(v) + alpha * _omega(v) + beta * _omega(u)
        return -1 if e % 2 else 1
    sign = -1 if (alpha * beta * _eps(p)) % 2 else 1
    if beta % 2:
        sign *= legendre(u, p)
    if alpha % 2:
        sign *= legendre(v, p)
    return sign


# ==================== Square roots ====================


def is_square_int(n: int) -> Optional[int]:
    if n < 0:
        return None
    root, exact = integer_nthroot(n, 2)
    return int(root) if exact else None


def is_square_rat(q) -> Optional[Fraction]:
    """Principal square root of a rational square, or None."""
    q = as_rat(q)
    num = is_square_int(q.numerator)
    if num is None:
        return None
    den = is_square_int(q.denominator)
    if den is None:
        return None
    return Fraction(num, den)


# ==================== Fields ====================


class RationalField:
    """The field Q; coordinates are plain Fractions."""

    m = None

    def __repr__(self):
        return "QQ"

    def __str__(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def coerce(self, value) -> Fraction:
        return as_rat(value)

    def contains(self, value) -> bool:
        return not isinstance(value, QuadElem) or value.b == 0

    def sqrt(self, value) -> Optional[Fraction]:
        return is_square_rat(value)

    def conj(self, value):
        return self.coerce(value)

    def to_json(self):
        return None


QQ = RationalField()


@dataclass(frozen=True)
class QuadField:
    """Real quadratic field Q(sqrt(m)) with m > 1 squarefree."""

    m: int

    def __post_init__(self):
        if isinstance(self.m, bool) or not isinstance(self.m, int):
            raise ThetaCongDomainError(f"m must be an integer, got {self.m!r}")
        if self.m <= 1 or not is_squarefree(self.m):
            raise ThetaCongDomainError(f"m must be a squarefree integer > 1, got {self.m}")

    def __str__(self):
        return f"Q(sqrt({self.m}))"

    def __call__(self, a=0, b=0) -> QuadElem:
        return QuadElem(as_rat(a), as_rat(b), self)

    @property
    def sqrt_m(self) -> QuadElem:
        return self(0, 1)

    def coerce(self, value) -> QuadElem:
        if isinstance(value, QuadElem):
            if value.field != self:
                raise ThetaCongDomainError(f"{value} does not lie in {self}")
            return value
        return self(value)

    def contains(self, value) -> bool:
        return not isinstance(value, QuadElem) or value.field == self

    def sqrt(self, value) -> Optional[QuadElem]:
        return is_square_quad(self.coerce(value))

    def conj(self, value) -> QuadElem:
        return self.coerce(value).conj()

    def to_json(self):
        return self.m


def field_for(m: Optional[int]):
    """QQ for m None (or 1), Q(sqrt(m)) otherwise."""
    if m is None or m == 1:
        return QQ
    return QuadField(m)


@dataclass(frozen=True, eq=False)
class QuadElem:
    """The element a + b*sqrt(m) of ``field``."""

    a: Fraction
    b: Fraction
    field: QuadField

    def __post_init__(self):
        object.__setattr__(self, "a", as_rat(self.a))
        object.__setattr__(self, "b", as_rat(self.b))

    # -- coercion helpers --

    def _lift(self, other) -> Optional[QuadElem]:
        if isinstance(other, QuadElem):
            if other.field != self.field:
                raise ThetaCongDomainError(f"Mixed fields {self.field} and {other.field}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return QuadElem(Fraction(other), Fraction(0), self.field)
        return None

    # -- arithmetic --

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadElem(self.a + o.a, self.b + o.b, self.field)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(-self.a, -self.b, self.field)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadElem(self.a - o.a, self.b - o.b, self.field)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        m = self.field.m
        return QuadElem(
            self.a * o.a + m * self.b * o.b, self.a * o.b + self.b * o.a, self.field
        )

    __rmul__ = __mul__

    def inverse(self) -> QuadElem:
        nrm = self.norm()
        if nrm == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        return QuadElem(self.a / nrm, -self.b / nrm, self.field)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- structure --

    def conj(self) -> QuadElem:
        """Galois conjugate a - b*sqrt(m)."""
        return QuadElem(self.a, -self.b, self.field)

    def norm(self) -> Fraction:
        return self.a * self.a - self.field.m * self.b * self.b

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    @property
    def is_pure(self) -> bool:
        """True when the element is a rational multiple of sqrt(m)."""
        return self.a == 0

    def sign(self) -> int:
        return quad_sign(self)

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __eq__(self, other):
        if isinstance(other, QuadElem):
            return self.field == other.field and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.field.m))

    def __lt__(self, other):
        return quad_sign(self - other) < 0

    def __gt__(self, other):
        return quad_sign(self - other) > 0

    def __le__(self, other):
        return quad_sign(self - other) <= 0

    def __ge__(self, other):
        return quad_sign(self - other) >= 0

    def __str__(self):
        if self.b == 0:
            return rat_to_str(self.a)
        surd = f"sqrt({self.field.m})"
        coef = self.b
        if coef == 1:
            tail = surd
        elif coef == -1:
            tail = f"-{surd}"
        elif coef.denominator == 1:
            tail = f"{coef.numerator}*{surd}"
        elif abs(coef.numerator) == 1:
            tail = f"{'-' if coef < 0 else ''}{surd}/{coef.denominator}"
        else:
            tail = f"{coef.numerator}*{surd}/{coef.denominator}"
        if self.a == 0:
            return tail
        if tail.startswith("-"):
            return f"{rat_to_str(self.a)} - {tail[1:]}"
        return f"{rat_to_str(self.a)} + {tail}"

    def __repr__(self):
        return f"QuadElem({self})"

    def to_json(self) -> dict:
        return {"a": rat_to_str(self.a), "b": rat_to_str(self.b), "m": self.field.m}

    @classmethod
    def from_json(cls, data: dict) -> QuadElem:
        try:
            return cls(rat_from_str(data["a"]), rat_from_str(data["b"]), QuadField(int(data["m"])))
        except (KeyError, TypeError) as e:
            raise ThetaCongDomainError(f"Malformed QuadElem payload: {data!r}") from e


# ==================== Generic helpers ====================


def quad_sign(x) -> int:
    """Exact sign of a rational or of a + b*sqrt(m) under the real embedding."""
    if not isinstance(x, QuadElem):
        q = as_rat(x)
        return (q > 0) - (q < 0)
    sa = (x.a > 0) - (x.a < 0)
    sb = (x.b > 0) - (x.b < 0)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # mixed signs: the larger of a^2 and m b^2 wins; they are never equal
    if x.a * x.a > x.field.m * x.b * x.b:
        return sa
    return sb


def conj(x):
    """sigma on K, identity on Q."""
    if isinstance(x, QuadElem):
        return x.conj()
    return as_rat(x)


def is_rational(x) -> bool:
    return not isinstance(x, QuadElem) or x.b == 0


def is_square_quad(x: QuadElem) -> Optional[QuadElem]:
    """Square root of x in its field, positive under the real embedding, or None."""
    field = x.field
    if not x:
        return field(0)
    if quad_sign(x) < 0:
        return None
    if x.b == 0:
        root = is_square_rat(x.a)
        if root is not None:
            return field(root)
        root = is_square_rat(x.a / field.m)
        if root is not None:
            return field(0, root)
        return None
    n0 = is_square_rat(x.norm())
    if n0 is None:
        return None
    for c_sq in ((x.a + n0) / 2, (x.a - n0) / 2):
        c = is_square_rat(c_sq)
        if not c:
            continue
        candidate = field(c, x.b / (2 * c))
        if candidate * candidate == x:
            return candidate if quad_sign(candidate) > 0 else -candidate
    return None


def scalar_to_json(value):
    """Rat string over Q, QuadElem payload over K."""
    if isinstance(value, QuadElem):
        return value.to_json()
    return rat_to_str(value)


def scalar_from_json(data, field):
    if isinstance(data, dict):
        return field.coerce(QuadElem.from_json(data))
    return field.coerce(rat_from_str(data))
