"""Scalar arithmetic: exact rationals, quadratic irrationals, and float tolerances.

Coordinates throughout the package are plain Python numbers: ``int`` /
``fractions.Fraction`` (exact mode), ``float`` (tolerance mode), or
:class:`Quad` for values of the form a + b*sqrt(d) with rational a, b
(needed wherever sqrt(2), sqrt(3), sqrt(10) must compare exactly).
A computation runs in exact mode iff every scalar feeding it is exact.
"""

from __future__ import annotations

import math
from fractions import Fraction

#: Default tolerance for every float-mode geometric comparison.
DEFAULT_TOL = 1e-9

_EXACT_TYPES = (int, Fraction)


def is_exact(x) -> bool:
    """True if x carries exact (rounding-free) arithmetic."""
    return isinstance(x, _EXACT_TYPES) or isinstance(x, Quad)


def all_exact(xs) -> bool:
    return all(is_exact(x) for x in xs)


def to_float(x) -> float:
    if isinstance(x, Quad):
        return x.to_float()
    return float(x)


def parse_scalar(token: str):
    """Parse a scalar token: 'p/q' -> Fraction, integer literal -> int, else float."""
    token = token.strip()
    if "/" in token:
        return Fraction(token)
    try:
        return int(token)
    except ValueError:
        return float(token)


def format_scalar(x) -> str:
    """Inverse of parse_scalar for int/Fraction/float (Quad is not a file scalar)."""
    if isinstance(x, Quad):
        raise TypeError("Quad scalars have no file representation; convert first")
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
    if isinstance(x, int):
        return str(x)
    return repr(x)


def rational_sqrt(x: Fraction | int) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("negative radicand")
    rn = math.isqrt(x.numerator)
    rd = math.isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None


def squarefree_split(n: int) -> tuple[int, int]:
    """n = s*s*d with d squarefree; returns (s, d). Trial division, fine for small n."""
    if n <= 0:
        raise ValueError("need a positive integer")
    s, d, p = 1, n, 2
    while p * p <= d:
        while d % (p * p) == 0:
            d //= p * p
            s *= p
        p += 1
    return s, d


class Quad:
    """Exact element a + b*sqrt(d) of a real quadratic field (a, b rational, d squarefree > 1).

    Supports ring arithmetic, exact division, and exact order comparisons.
    Mixing two Quads with different d is an error; rationals coerce freely.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d=2):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = int(d)
        if self.d <= 1:
            raise ValueError("d must be a squarefree integer > 1")

    # -- coercion -----------------------------------------------------------
    def _coerce(self, other) -> "Quad | None":
        if isinstance(other, Quad):
            if other.b == 0:
                return Quad(other.a, 0, self.d)
            if other.d != self.d and self.b != 0:
                raise ValueError(f"cannot mix sqrt({self.d}) with sqrt({other.d})")
            return Quad(other.a, other.b, other.d if self.b == 0 else self.d)
        if isinstance(other, _EXACT_TYPES):
            return Quad(other, 0, self.d)
        return None

    # -- ring ops -----------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return self.to_float() + other
        d = self.d if self.b != 0 else o.d
        return Quad(self.a + o.a, self.b + o.b, d)

    __radd__ = __add__

    def __neg__(self):
        return Quad(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Quad) else -Fraction(other) if isinstance(other, _EXACT_TYPES) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return self.to_float() * other
        d = self.d if self.b != 0 else o.d
        return Quad(self.a * o.a + d * self.b * o.b, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def inverse(self) -> "Quad":
        norm = self.a * self.a - self.d * self.b * self.b
        if norm == 0:
            raise ZeroDivisionError("Quad division by zero")
        return Quad(self.a / norm, -self.b / norm, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return self.to_float() / other
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    # -- order --------------------------------------------------------------
    def sign(self) -> int:
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: compare a^2 against d*b^2
        lhs, rhs = a * a, self.d * b * b
        if lhs == rhs:  # would force sqrt(d) rational; unreachable for squarefree d>1
            return 0
        return (1 if a > 0 else -1) if lhs > rhs else (1 if b > 0 else -1)

    def _diff_sign(self, other) -> int:
        o = self._coerce(other)
        if o is None:
            f = self.to_float()
            return (f > other) - (f < other)
        return (self - o).sign()

    def __eq__(self, other):
        if isinstance(other, float):
            return self.to_float() == other
        try:
            return self._diff_sign(other) == 0
        except (ValueError, TypeError):
            return NotImplemented

    def __lt__(self, other):
        return self._diff_sign(other) < 0

    def __le__(self, other):
        return self._diff_sign(other) <= 0

    def __gt__(self, other):
        return self._diff_sign(other) > 0

    def __ge__(self, other):
        return self._diff_sign(other) >= 0

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    # -- conversion ---------------------------------------------------------
    def to_float(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    __float__ = to_float

    def __repr__(self):
        return f"Quad({self.a}, {self.b}, d={self.d})"


def quad_sqrt(x: Fraction | int) -> "Quad | Fraction":
    """Exact square root of a nonnegative rational as Fraction or Quad.

    sqrt(p/q) = sqrt(p*q)/q = (s/q)*sqrt(d) with p*q = s^2*d, d squarefree.
    """
    x = Fraction(x)
    r = rational_sqrt(x)
    if r is not None:
        return r
    s, d = squarefree_split(x.numerator * x.denominator)
    return Quad(0, Fraction(s, x.denominator), d)
