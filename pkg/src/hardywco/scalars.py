"""Complex scalars with an exact (Gaussian rational) and a floating mode.

Coefficients built from ints, :class:`~fractions.Fraction` or decimal strings
stay exact through field operations; anything touching a ``float`` or
``complex`` falls back to ordinary floating point.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from numbers import Rational
from typing import Union

# coefficient equality tolerance (numeric mode)
COEFF_TOL = 1e-12
# geometric predicates (circle membership, fixed-point location)
GEOM_TOL = 1e-10


class GaussianRational:
    """Exact complex number ``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @property
    def real(self) -> Fraction:
        return self.re

    @property
    def imag(self) -> Fraction:
        return self.im

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __abs__(self) -> float:
        return math.sqrt(self.abs2())

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __add__(self, other):
        o = _lift(other)
        if o is None:
            return complex(self) + other
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _lift(other)
        if o is None:
            return complex(self) - other
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _lift(other)
        if o is None:
            return other - complex(self)
        return o - self

    def __mul__(self, other):
        o = _lift(other)
        if o is None:
            return complex(self) * other
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _lift(other)
        if o is None:
            return complex(self) / other
        n = o.abs2()
        if n == 0:
            raise ZeroDivisionError("division by exact zero")
        return GaussianRational((self.re * o.re + self.im * o.im) / n,
                                (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, other):
        o = _lift(other)
        if o is None:
            return other / complex(self)
        return o / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return complex(self) ** n
        if n < 0:
            return GaussianRational(1) / (self ** (-n))
        result, base = GaussianRational(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        o = _lift(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) == other
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        if self.im == 0:
            return f"GaussianRational({self.re})"
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        sign = "+" if self.im >= 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


Scalar = Union[GaussianRational, complex]


def _lift(x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Rational)) and not isinstance(x, bool):
        return GaussianRational(x)
    if isinstance(x, bool):
        return GaussianRational(int(x))
    return None


def _real_part(text: str) -> Fraction:
    if text in ("", "+"):
        return Fraction(1)
    if text == "-":
        return Fraction(-1)
    return Fraction(text)


def parse_scalar(text: str) -> Scalar:
    """Parse ``"0.5"``, ``"1/3"``, ``"2i"``, ``"0.3+0.4j"``, ``"1/3-2/5i"`` exactly."""
    s = text.strip().replace(" ", "")
    try:
        if not s.endswith(("i", "j")):
            return GaussianRational(Fraction(s))
        body = s[:-1]
        # split at the last sign that is not a leading sign or an exponent sign
        for k in range(len(body) - 1, 0, -1):
            if body[k] in "+-" and body[k - 1] not in "eE":
                return GaussianRational(Fraction(body[:k]), _real_part(body[k:]))
        return GaussianRational(0, _real_part(body))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"cannot parse complex scalar {text!r}") from None


def exact(x) -> GaussianRational:
    """Convert to an exact scalar; floats convert to their binary value."""
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, str):
        v = parse_scalar(x)
        return v if isinstance(v, GaussianRational) else exact(v)
    if isinstance(x, complex):
        return GaussianRational(Fraction(x.real), Fraction(x.imag))
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return GaussianRational(Fraction(x[0]), Fraction(x[1]))
    return GaussianRational(Fraction(x))


def as_scalar(x) -> Scalar:
    """Normalise user input: rationals become exact, floats become complex."""
    lifted = _lift(x)
    if lifted is not None:
        return lifted
    if isinstance(x, str):
        return parse_scalar(x)
    if hasattr(x, "dtype"):  # numpy scalars
        return complex(x)
    if isinstance(x, (float, complex)):
        return complex(x)
    raise TypeError(f"not a scalar: {x!r}")


def is_exact(x) -> bool:
    return isinstance(x, GaussianRational)


def all_exact(*xs) -> bool:
    return all(isinstance(x, GaussianRational) for x in xs)


def to_complex(x) -> complex:
    return complex(x)


def conj(x):
    if isinstance(x, GaussianRational):
        return x.conjugate()
    return complex(x).conjugate()


def abs2(x):
    """Squared modulus; exact Fraction in exact mode."""
    if isinstance(x, GaussianRational):
        return x.abs2()
    z = complex(x)
    return z.real * z.real + z.imag * z.imag


def is_zero(x, tol: float = 0.0) -> bool:
    if isinstance(x, GaussianRational):
        return not x
    return abs(complex(x)) <= tol


def _sqrt_fraction(q: Fraction):
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def sqrt(x) -> Scalar:
    """Principal square root, exact whenever the root is Gaussian rational."""
    if isinstance(x, GaussianRational):
        m = _sqrt_fraction(x.abs2())
        if m is not None:
            re2 = (m + x.re) / 2
            im2 = (m - x.re) / 2
            r, i = _sqrt_fraction(re2), _sqrt_fraction(im2)
            if r is not None and i is not None:
                if x.im < 0:
                    i = -i
                root = GaussianRational(r, i)
                if root * root == x:
                    return root
    return cmath.sqrt(complex(x))


def close(x, y, tol: float) -> bool:
    """Equality of scalars: exact when both are exact and ``tol == 0``."""
    if tol == 0 and isinstance(x, GaussianRational) and isinstance(y, GaussianRational):
        return x == y
    if tol == 0:
        return complex(x) == complex(y)
    return abs(complex(x) - complex(y)) <= tol


def real_cmp(x, y) -> int:
    """Compare two real quantities (Fraction or float); returns -1, 0, 1."""
    if x < y:
        return -1
    if x > y:
        return 1
    return 0


def to_pair(x) -> list:
    z = complex(x)
    return [z.real + 0.0, z.imag + 0.0]  # no signed zeros in output


def from_pair(v) -> Scalar:
    """``[re, im]`` (or a bare number) from JSON; Fractions stay exact."""
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ValueError(f"expected [re, im], got {v!r}")
        re_part, im_part = v
        if isinstance(re_part, float) or isinstance(im_part, float):
            return complex(float(re_part), float(im_part))
        return GaussianRational(Fraction(re_part), Fraction(im_part))
    return as_scalar(v)
