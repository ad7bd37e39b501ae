"""Exact arithmetic in Q(sqrt2, sqrt3) and its complexification.

Every constant that appears in the Sasakian/M-theory computations
(lambda = sqrt(3/2), beta, mu_1, mu_2, ...) lives in the real field
K = Q(sqrt2, sqrt3) with basis (1, sqrt2, sqrt3, sqrt6).  Elements are
stored as four integer numerators over one positive common denominator,
which keeps multiplication cheap; the public ``a, b, c, d`` properties
expose the rational coefficients.

A float backend with a relative tolerance is provided alongside so the
same generic code paths can run in double precision.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import total_ordering
from numbers import Rational

__all__ = [
    "ScalarError",
    "NoRealSolution",
    "NotRepresentable",
    "QuadScalar",
    "CScalar",
    "FloatScalar",
    "qf_arith",
    "qf_sqrt_of_rational",
    "to_float",
    "parse_quad",
    "parse_complex",
    "format_complex",
    "ExactBackend",
    "FloatBackend",
    "EXACT",
    "get_backend",
]


class ScalarError(ArithmeticError):
    """Base class for field-arithmetic failures."""


class NoRealSolution(ScalarError):
    """Raised when a square root of a negative rational is requested."""


class NotRepresentable(ScalarError):
    """Raised when a square root falls outside Q(sqrt2, sqrt3)."""


def _sign_z_sqrt2(p: int, q: int) -> int:
    # sign of p + q*sqrt2 for integers p, q
    sp = (p > 0) - (p < 0)
    sq = (q > 0) - (q < 0)
    if sq == 0:
        return sp
    if sp == 0 or sp == sq:
        return sq
    diff = p * p - 2 * q * q
    return sp if diff > 0 else (-sp if diff < 0 else 0)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return Fraction(int(x.numerator), int(x.denominator))
    if isinstance(x, (int, Rational)):
        return Fraction(int(x.numerator), int(x.denominator))
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected a rational, got {type(x).__name__}")


@total_ordering
class QuadScalar:
    """An element a + b*sqrt2 + c*sqrt3 + d*sqrt6 with rational a..d."""

    __slots__ = ("_n", "_den", "_hash")

    def __init__(self, a=0, b=0, c=0, d=0):
        fr = [_as_fraction(x) for x in (a, b, c, d)]
        den = math.lcm(*(f.denominator for f in fr))
        nums = tuple(f.numerator * (den // f.denominator) for f in fr)
        self._set(nums, den)

    def _set(self, nums, den):
        g = math.gcd(den, *nums)
        if g > 1:
            nums = tuple(x // g for x in nums)
            den //= g
        if not any(nums):
            den = 1
        self._n = nums
        self._den = den
        self._hash = None

    @classmethod
    def _raw(cls, nums, den) -> QuadScalar:
        obj = cls.__new__(cls)
        if den < 0:
            nums = tuple(-x for x in nums)
            den = -den
        obj._set(nums, den)
        return obj

    @classmethod
    def from_rational(cls, q) -> QuadScalar:
        f = _as_fraction(q)
        return cls._raw((f.numerator, 0, 0, 0), f.denominator)

    # -- coefficient access -------------------------------------------------
    @property
    def a(self) -> Fraction:
        return Fraction(self._n[0], self._den)

    @property
    def b(self) -> Fraction:
        return Fraction(self._n[1], self._den)

    @property
    def c(self) -> Fraction:
        return Fraction(self._n[2], self._den)

    @property
    def d(self) -> Fraction:
        return Fraction(self._n[3], self._den)

    @property
    def coefficients(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    def is_rational(self) -> bool:
        return not any(self._n[1:])

    # -- arithmetic ---------------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, QuadScalar):
            return other
        if isinstance(other, (int, Rational)):
            return QuadScalar.from_rational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d1, d2 = self._den, o._den
        if d1 == d2:
            return QuadScalar._raw(tuple(x + y for x, y in zip(self._n, o._n)), d1)
        return QuadScalar._raw(
            tuple(x * d2 + y * d1 for x, y in zip(self._n, o._n)), d1 * d2
        )

    __radd__ = __add__

    def __neg__(self):
        return QuadScalar._raw(tuple(-x for x in self._n), self._den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a1, b1, c1, d1 = self._n
        a2, b2, c2, d2 = o._n
        nums = (
            a1 * a2 + 2 * b1 * b2 + 3 * c1 * c2 + 6 * d1 * d2,
            a1 * b2 + b1 * a2 + 3 * (c1 * d2 + d1 * c2),
            a1 * c2 + c1 * a2 + 2 * (b1 * d2 + d1 * b2),
            a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        )
        return QuadScalar._raw(nums, self._den * o._den)

    __rmul__ = __mul__

    def conj2(self) -> QuadScalar:
        """Galois conjugate sqrt2 -> -sqrt2."""
        a, b, c, d = self._n
        return QuadScalar._raw((a, -b, c, -d), self._den)

    def conj3(self) -> QuadScalar:
        """Galois conjugate sqrt3 -> -sqrt3."""
        a, b, c, d = self._n
        return QuadScalar._raw((a, b, -c, -d), self._den)

    def inverse(self) -> QuadScalar:
        if not any(self._n):
            raise ZeroDivisionError("QuadScalar division by zero")
        # x * conj3(x) lies in Q(sqrt2); then multiply by its sqrt2-conjugate
        c3 = self.conj3()
        m = self * c3
        c2 = m.conj2()
        r = m * c2
        return (c3 * c2) * QuadScalar._raw((r._den, 0, 0, 0), r._n[0])

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = QuadScalar._raw((1, 0, 0, 0), 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- order and equality -------------------------------------------------
    def sign(self) -> int:
        """Exact sign (-1, 0, 1) of the real number represented."""
        a, b, c, d = self._n
        # x = P + Q sqrt3 with P = a + b sqrt2, Q = c + d sqrt2
        sp = _sign_z_sqrt2(a, b)
        sq = _sign_z_sqrt2(c, d)
        if sq == 0:
            return sp
        if sp == 0 or sp == sq:
            return sq
        # P^2 - 3 Q^2 in Z[sqrt2]
        r = a * a + 2 * b * b - 3 * (c * c + 2 * d * d)
        s = 2 * a * b - 6 * c * d
        sn = _sign_z_sqrt2(r, s)
        return sp * sn

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, CScalar):
                return other == self
            return NotImplemented
        return self._den == o._den and self._n == o._n

    def __lt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(Fraction(self._n[0], self._den))
            else:
                self._hash = hash((self._n, self._den))
        return self._hash

    def __bool__(self):
        return any(self._n)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        return to_float(self).value

    # -- text ---------------------------------------------------------------
    def __str__(self):
        parts = []
        for coef, unit in zip(self.coefficients, ("", "r2", "r3", "r6")):
            if coef == 0:
                continue
            parts.append((coef, unit))
        if not parts:
            return "0"
        out = ""
        for k, (coef, unit) in enumerate(parts):
            mag = abs(coef)
            body = str(mag) if not unit else (unit if mag == 1 else f"{mag}*{unit}")
            if k == 0:
                out = ("-" if coef < 0 else "") + body
            else:
                out += (" - " if coef < 0 else " + ") + body
        return out

    def __repr__(self):
        return f"QuadScalar({str(self)!r})"


def _cs(x):
    if isinstance(x, CScalar):
        return x
    if isinstance(x, QuadScalar):
        return CScalar(x, _QZERO)
    if isinstance(x, (int, Rational)):
        return CScalar(QuadScalar.from_rational(x), _QZERO)
    return None


class CScalar:
    """Complex number re + i*im with re, im in Q(sqrt2, sqrt3)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, QuadScalar) else QuadScalar.from_rational(re)
        self.im = im if isinstance(im, QuadScalar) else QuadScalar.from_rational(im)

    def __add__(self, other):
        o = _cs(other)
        if o is None:
            return NotImplemented
        return CScalar(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return CScalar(-self.re, -self.im)

    def __sub__(self, other):
        o = _cs(other)
        if o is None:
            return NotImplemented
        return CScalar(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _cs(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (QuadScalar, int, Rational)):
            return CScalar(self.re * other, self.im * other)
        if not isinstance(other, CScalar):
            return NotImplemented
        return CScalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def conjugate(self) -> CScalar:
        return CScalar(self.re, -self.im)

    def abs2(self) -> QuadScalar:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> CScalar:
        n = self.abs2()
        if not n:
            raise ZeroDivisionError("CScalar division by zero")
        inv = n.inverse()
        return CScalar(self.re * inv, -self.im * inv)

    def __truediv__(self, other):
        o = _cs(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _cs(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __eq__(self, other):
        o = _cs(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self) -> float:
        return abs(complex(self))

    def __str__(self):
        return format_complex(self)

    def __repr__(self):
        return f"CScalar({format_complex(self)!r})"


_QZERO = QuadScalar()
_QONE = QuadScalar(1)
I = CScalar(0, 1)


@dataclass(frozen=True)
class FloatScalar:
    """A double-precision value together with its comparison tolerance."""

    value: float
    rel_tol: float = 1e-9

    def __float__(self):
        return self.value

    def isclose(self, other, abs_tol: float = 0.0) -> bool:
        return math.isclose(self.value, float(other), rel_tol=self.rel_tol, abs_tol=abs_tol)


def qf_arith(x: QuadScalar, y: QuadScalar, op: str) -> QuadScalar:
    """Apply ``op`` in {add, sub, mul, div}; division by zero raises."""
    ops = {
        "add": lambda: x + y,
        "sub": lambda: x - y,
        "mul": lambda: x * y,
        "div": lambda: x / y,
    }
    if op not in ops:
        raise ValueError(f"unknown operation {op!r}")
    return ops[op]()


def qf_sqrt_of_rational(q) -> QuadScalar:
    """Nonnegative square root of a rational inside Q(sqrt2, sqrt3).

    Raises NoRealSolution for q < 0 and NotRepresentable when sqrt(q)
    is not a rational multiple of 1, sqrt2, sqrt3 or sqrt6.
    """
    f = _as_fraction(q)
    if f < 0:
        raise NoRealSolution(f"no real solution: sqrt({f}) with {f} < 0")
    if f == 0:
        return QuadScalar()
    # sqrt(p/q) = sqrt(p*q)/q
    m = f.numerator * f.denominator
    for k, slot in ((1, 0), (2, 1), (3, 2), (6, 3)):
        if m % k:
            continue
        s = math.isqrt(m // k)
        if s * s * k == m:
            coef = [0, 0, 0, 0]
            coef[slot] = Fraction(s, f.denominator)
            return QuadScalar(*coef)
    raise NotRepresentable(f"sqrt({f}) is not representable in Q(sqrt2, sqrt3)")


def to_float(x, rel_tol: float = 1e-9) -> FloatScalar:
    """Correctly rounded double for an exact scalar (real part for CScalar)."""
    if isinstance(x, CScalar):
        x = x.re
    if isinstance(x, (int, Rational)):
        return FloatScalar(float(Fraction(x)), rel_tol)
    a, b, c, d = x._n
    digits = max(len(str(abs(v))) for v in (a, b, c, d, x._den))
    with localcontext() as ctx:
        ctx.prec = 40 + 2 * digits
        val = (
            Decimal(a)
            + Decimal(b) * Decimal(2).sqrt()
            + Decimal(c) * Decimal(3).sqrt()
            + Decimal(d) * Decimal(6).sqrt()
        ) / Decimal(x._den)
    return FloatScalar(float(val), rel_tol)


# -- literal grammar ------------------------------------------------------

_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
    (?:
        sqrt\(\s*(?P<sq>[0-9]+(?:/[0-9]+)?)\s*\)
      | (?P<num>[0-9]+(?:/[0-9]+)?)(?:\s*\*\s*(?P<u1>r[236]))?
      | (?P<u2>r[236])
    )\s*""",
    re.VERBOSE,
)


def parse_quad(text: str) -> QuadScalar:
    """Parse ``"p/q + p/q*r2 + p/q*r3 + p/q*r6"`` or ``"sqrt(p/q)"``."""
    if isinstance(text, QuadScalar):
        return text
    if isinstance(text, (int, Rational)):
        return QuadScalar.from_rational(text)
    s = text.strip()
    if not s:
        raise ValueError("empty scalar literal")
    total = QuadScalar()
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad scalar literal {text!r} at position {pos}")
        if not first and m.group("sign") is None:
            raise ValueError(f"missing operator in scalar literal {text!r}")
        sign = -1 if m.group("sign") == "-" else 1
        if m.group("sq") is not None:
            term = qf_sqrt_of_rational(Fraction(m.group("sq")))
        else:
            coef = Fraction(m.group("num")) if m.group("num") else Fraction(1)
            unit = m.group("u1") or m.group("u2")
            slots = {None: 0, "r2": 1, "r3": 2, "r6": 3}
            c = [0, 0, 0, 0]
            c[slots[unit]] = coef
            term = QuadScalar(*c)
        total = total + term if sign > 0 else total - term
        pos = m.end()
        first = False
    return total


def format_complex(z) -> str:
    z = _cs(z)
    if not z.im:
        return str(z.re)
    if not z.re:
        return f"i*({z.im})"
    return f"{z.re} + i*({z.im})"


def parse_complex(text: str) -> CScalar:
    """Parse ``"<re>"``, ``"i*(<im>)"`` or ``"<re> + i*(<im>)"``."""
    if isinstance(text, CScalar):
        return text
    s = text.strip()
    k = s.find("i*(")
    if k < 0:
        return CScalar(parse_quad(s))
    if not s.endswith(")"):
        raise ValueError(f"bad complex literal {text!r}")
    im = parse_quad(s[k + 3 : -1])
    head = s[:k].rstrip()
    if not head:
        return CScalar(_QZERO, im)
    if head[-1] not in "+-":
        raise ValueError(f"bad complex literal {text!r}")
    if head[-1] == "-":
        im = -im
    return CScalar(parse_quad(head[:-1]), im)


# -- backends -------------------------------------------------------------


class ExactBackend:
    """Exact arithmetic: real scalars are QuadScalar, complex are CScalar."""

    name = "exact"
    tolerance = 0.0
    exact = True
    i = I

    def real(self, x):
        if isinstance(x, (QuadScalar, CScalar)):
            return x
        if isinstance(x, str):
            return parse_quad(x)
        return QuadScalar.from_rational(x)

    def complex(self, re, im=0):
        z = _cs(self.real(re))
        return z + I * _cs(self.real(im)) if im else z

    def conj(self, z):
        if isinstance(z, CScalar):
            return z.conjugate()
        return z

    def sqrt_rational(self, q):
        return qf_sqrt_of_rational(q)

    def is_zero(self, x, scale: float = 1.0) -> bool:
        return not x

    def magnitude(self, x) -> float:
        if isinstance(x, CScalar):
            return abs(x)
        return abs(float(x)) if isinstance(x, QuadScalar) else abs(float(Fraction(x)))

    def __repr__(self):
        return "ExactBackend()"


class FloatBackend:
    """Double precision with a relative tolerance (default 1e-9)."""

    name = "float"
    exact = False
    i = 1j

    def __init__(self, tolerance: float = 1e-9):
        self.tolerance = float(tolerance)

    def real(self, x):
        if isinstance(x, str):
            x = parse_quad(x)
        if isinstance(x, CScalar):
            return complex(x)
        return float(x)

    def complex(self, re, im=0):
        if isinstance(re, (complex, CScalar)) and not im:
            return complex(re)
        return self.real(re) + 1j * self.real(im)

    def conj(self, z):
        return z.conjugate() if isinstance(z, complex) else z

    def sqrt_rational(self, q):
        f = _as_fraction(q)
        if f < 0:
            raise NoRealSolution(f"no real solution: sqrt({f}) with {f} < 0")
        return math.sqrt(f)

    def is_zero(self, x, scale: float = 1.0) -> bool:
        return abs(x) <= self.tolerance * max(1.0, scale)

    def magnitude(self, x) -> float:
        return abs(x)

    def __repr__(self):
        return f"FloatBackend(tolerance={self.tolerance!r})"


EXACT = ExactBackend()


def get_backend(spec=None):
    """Build a backend from ``"exact"``, ``"float"`` or ``{"float": {"tolerance": t}}``."""
    if spec is None or spec == "exact":
        return EXACT
    if isinstance(spec, (ExactBackend, FloatBackend)):
        return spec
    if spec == "float":
        return FloatBackend()
    if isinstance(spec, dict) and set(spec) == {"float"}:
        opts = spec["float"] or {}
        return FloatBackend(opts.get("tolerance", 1e-9))
    raise ValueError(f"unknown backend {spec!r}")
