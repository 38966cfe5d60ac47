"""Exact scalars: rationals (backed by :class:`fractions.Fraction`) and
numbers of the form ``a + b*sqrt(c)`` with rational ``a, b, c``.
"""
from __future__ import annotations

import math
from decimal import Decimal, localcontext
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Union

Rational = Fraction
Scalar = Union[int, Fraction, "QuadraticNumber"]

_TRIAL_DIVISION_LIMIT = 100_000


def rat_normalize(p: int, q: int) -> Fraction:
    """Canonical rational ``p/q`` (reduced, positive denominator)."""
    if q == 0:
        raise ZeroDivisionError("division by zero")
    return Fraction(p, q)


def to_rational(x) -> Fraction:
    """Parse ints, Fractions, ``"p/q"`` strings and decimal strings exactly.

    Floats are converted through their shortest repr, so ``0.1`` becomes
    ``1/10`` rather than the binary expansion.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite number {x!r}")
        return Fraction(repr(x))
    if isinstance(x, str):
        s = x.strip()
        if "/" in s:
            num, den = s.split("/", 1)
            return rat_normalize(int(num), int(den))
        return Fraction(s)
    if isinstance(x, _RationalABC):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def rat_str(x: Fraction) -> str:
    """Serialize as ``"p/q"`` or ``"p"`` when the denominator is 1."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _split_square(s: int) -> tuple[int, int]:
    """Return ``(k, r)`` with ``s == k*k*r``, pulling out square factors."""
    k = 1
    r = s
    root = math.isqrt(r)
    if root * root == r:
        return root, 1
    p = 2
    while p * p <= r and p <= _TRIAL_DIVISION_LIMIT:
        pp = p * p
        while r % pp == 0:
            r //= pp
            k *= p
        p += 1 if p == 2 else 2
    root = math.isqrt(r)
    if root * root == r:
        return k * root, 1
    return k, r


def _sign_single(a: Fraction, b: Fraction, c: Fraction) -> int:
    """Exact sign of ``a + b*sqrt(c)``."""
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0) if c else 0
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb if sa == 0 else sa
    lhs = a * a
    rhs = b * b * c
    if lhs > rhs:
        return sa
    if lhs < rhs:
        return sb
    return 0


class QuadraticNumber:
    """Immutable exact number ``a + b*sqrt(c)``.

    The radicand is stored as a squarefree integer when square factors can be
    found by trial division, so equal numbers usually share one representation.
    Arithmetic between two irrational values requires a common radicand;
    ordering works across radicands and is always exact.
    """

    __slots__ = ("a", "b", "c")

    def __init__(self, a=0, b=0, c=0):
        a = to_rational(a)
        b = to_rational(b)
        c = to_rational(c)
        if c < 0:
            raise ValueError("negative radicand")
        if b == 0 or c == 0:
            b = Fraction(0)
            c = Fraction(0)
        else:
            # sqrt(p/q) = sqrt(p*q)/q, then pull square factors out of p*q
            k, r = _split_square(c.numerator * c.denominator)
            b = b * Fraction(k, c.denominator)
            if r == 1:
                a, b, c = a + b, Fraction(0), Fraction(0)
            else:
                c = Fraction(r)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    def __setattr__(self, name, value):
        raise AttributeError("QuadraticNumber is immutable")

    @classmethod
    def sqrt(cls, r) -> "QuadraticNumber":
        return cls(0, 1, r)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def to_rational(self) -> Fraction:
        if self.b != 0:
            raise ValueError(f"{self} is irrational")
        return self.a

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "QuadraticNumber":
        if isinstance(x, QuadraticNumber):
            return x
        return QuadraticNumber(to_rational(x))

    def _common_radicand(self, other: "QuadraticNumber") -> Fraction:
        if self.b == 0:
            return other.c
        if other.b == 0 or self.c == other.c:
            return self.c
        raise ValueError(
            f"mixed radicands sqrt({self.c}) and sqrt({other.c}) are not supported"
        )

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        c = self._common_radicand(o)
        return QuadraticNumber(self.a + o.a, self.b + o.b, c)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.c)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        c = self._common_radicand(o)
        return QuadraticNumber(
            self.a * o.a + self.b * o.b * c, self.a * o.b + self.b * o.a, c
        )

    __rmul__ = __mul__

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber(self.a, -self.b, self.c)

    def norm(self) -> Fraction:
        """Field norm ``a**2 - b**2*c``."""
        return self.a * self.a - self.b * self.b * self.c

    def __truediv__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if o.b == 0:
            if o.a == 0:
                raise ZeroDivisionError("division by zero")
            return QuadraticNumber(self.a / o.a, self.b / o.a, self.c)
        self._common_radicand(o)
        nrm = o.norm()
        if nrm == 0:
            raise ZeroDivisionError("division by zero")
        return (self * o.conjugate()) / nrm

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = QuadraticNumber(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- ordering ---------------------------------------------------------

    def sign(self) -> int:
        return _sign_single(self.a, self.b, self.c)

    def compare(self, other) -> int:
        """Exact three-way comparison, also across different radicands."""
        o = self._coerce(other)
        if self.b == 0 or o.b == 0 or self.c == o.c:
            return (self - o).sign()
        # self - o = u + v with u = A + B*sqrt(c1), v = -o.b*sqrt(c2)
        A = self.a - o.a
        B = self.b
        C = -o.b
        su = _sign_single(A, B, self.c)
        sv = (C > 0) - (C < 0)
        if su == 0:
            return sv
        if su == sv:
            return su
        # opposite signs: compare u^2 against v^2, itself a single-radicand sign
        t = _sign_single(A * A + B * B * self.c - C * C * o.c, 2 * A * B, self.c)
        if t > 0:
            return su
        if t < 0:
            return sv
        return 0

    def _cmp_or_ni(self, other):
        try:
            return self.compare(other)
        except TypeError:
            return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, (QuadraticNumber, int, Fraction)):
            return NotImplemented
        return self.compare(other) == 0

    def __lt__(self, other):
        r = self._cmp_or_ni(other)
        return r if r is NotImplemented else r < 0

    def __le__(self, other):
        r = self._cmp_or_ni(other)
        return r if r is NotImplemented else r <= 0

    def __gt__(self, other):
        r = self._cmp_or_ni(other)
        return r if r is NotImplemented else r > 0

    def __ge__(self, other):
        r = self._cmp_or_ni(other)
        return r if r is NotImplemented else r >= 0

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.c))

    def __bool__(self):
        return self.sign() != 0

    # -- conversion -------------------------------------------------------

    def to_decimal(self, digits: int = 40) -> Decimal:
        with localcontext() as ctx:
            ctx.prec = digits
            val = Decimal(self.a.numerator) / Decimal(self.a.denominator)
            if self.b:
                root = (Decimal(self.c.numerator) / Decimal(self.c.denominator)).sqrt()
                val += Decimal(self.b.numerator) / Decimal(self.b.denominator) * root
            return +val

    def __float__(self):
        if self.b == 0:
            return float(self.a)
        return float(self.to_decimal())

    def __repr__(self):
        return f"QuadraticNumber({rat_str(self.a)!r}, {rat_str(self.b)!r}, {rat_str(self.c)!r})"

    def __str__(self):
        if self.b == 0:
            return rat_str(self.a)
        root = f"√{rat_str(self.c)}"
        if self.a == 0:
            return f"{rat_str(self.b)}·{root}"
        op = "+" if self.b > 0 else "-"
        return f"{rat_str(self.a)} {op} {rat_str(abs(self.b))}·{root}"

    def to_json(self) -> dict:
        return {
            "a": rat_str(self.a),
            "b": rat_str(self.b),
            "c": rat_str(self.c),
            "float": float(self),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "QuadraticNumber":
        return cls(to_rational(doc["a"]), to_rational(doc["b"]), to_rational(doc["c"]))


def as_quadratic(x) -> QuadraticNumber:
    return x if isinstance(x, QuadraticNumber) else QuadraticNumber(to_rational(x))


def quad_compare(x, y) -> int:
    """-1, 0 or 1 according to whether ``x`` is less than, equal to, or greater than ``y``."""
    return as_quadratic(x).compare(y)


def sign(x) -> int:
    if isinstance(x, QuadraticNumber):
        return x.sign()
    return (x > 0) - (x < 0)


def exact_to_json(x):
    """Serialize a rational as ``"p/q"`` and a QuadraticNumber as a dict."""
    if isinstance(x, QuadraticNumber):
        return rat_str(x.a) if x.is_rational else x.to_json()
    return rat_str(to_rational(x))


def exact_from_json(doc):
    if isinstance(doc, dict):
        q = QuadraticNumber.from_json(doc)
        return q.a if q.is_rational else q
    return to_rational(doc)
