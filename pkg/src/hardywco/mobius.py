"""Linear fractional maps of the unit disc: algebra, geometry, dynamics.

A :class:`MobiusMap` stores the projective coefficients of
``z -> (a z + b) / (c z + d)``.  The same class carries linear fractional
*weights*, which may be constant (``ad - bc = 0``); operations that need an
honest Mobius transformation reject constants.

Coefficients are exact :class:`~hardywco.scalars.GaussianRational` values when
every input is rational, and ``complex`` otherwise.  Exact maps compare
exactly; numeric maps compare within :data:`~hardywco.scalars.COEFF_TOL`
after normalisation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

import numpy as np

from . import scalars as S
from .errors import (
    ConstantMap,
    DegenerateMap,
    IdentityMap,
    InvalidParameters,
    InvalidTranslation,
    NotSelfmap,
    PointNotInDisc,
)
from .scalars import COEFF_TOL, GEOM_TOL, GaussianRational


class _Infinity:
    """Marker for the fixed point at infinity."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()


def _normalize(coeffs):
    """Scale so the first largest-modulus coefficient becomes exactly 1."""
    if S.all_exact(*coeffs):
        mods = [S.abs2(x) for x in coeffs]
        top = max(mods)
        k = mods.index(top)
    else:
        coeffs = [complex(x) for x in coeffs]
        mods = [abs(x) for x in coeffs]
        top = max(mods)
        k = next(i for i, m in enumerate(mods) if m >= top * (1 - COEFF_TOL))
    pivot = coeffs[k]
    out = [x / pivot for x in coeffs]
    out[k] = GaussianRational(1) if isinstance(pivot, GaussianRational) else 1 + 0j
    return tuple(out)


class MobiusMap:
    """``z -> (a z + b) / (c z + d)``, immutable and projectively normalised.

    Constant maps are representable (normalised to ``(0, beta, 0, 1)``) so the
    class can also carry weights such as ``psi == gamma``.
    """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        coeffs = [S.as_scalar(x) for x in (a, b, c, d)]
        if not S.all_exact(*coeffs):
            coeffs = [complex(x) for x in coeffs]
        for x in coeffs:
            if not S.is_exact(x) and not np.isfinite(x):
                raise ValueError("MobiusMap coefficients must be finite")
        a, b, c, d = coeffs
        if S.is_zero(c) and S.is_zero(d):
            raise DegenerateMap("denominator vanishes identically")
        det = a * d - b * c
        scale = max(abs(complex(x)) for x in coeffs)
        if S.is_zero(det, tol=COEFF_TOL * scale * scale):
            value = b / d if not S.is_zero(d) else a / c
            zero = GaussianRational(0) if S.is_exact(value) else 0j
            one = GaussianRational(1) if S.is_exact(value) else 1 + 0j
            normed = (zero, value, zero, one)
        else:
            normed = _normalize(coeffs)
        for name, value in zip(self.__slots__, normed):
            object.__setattr__(self, name, value)

    def __setattr__(self, name, value):
        raise AttributeError("MobiusMap is immutable")

    # construction helpers -------------------------------------------------
    @classmethod
    def identity(cls) -> "MobiusMap":
        return cls(1, 0, 0, 1)

    @classmethod
    def constant(cls, value) -> "MobiusMap":
        return cls(0, value, 0, 1)

    @classmethod
    def linear(cls, delta) -> "MobiusMap":
        """``z -> delta z``."""
        return cls(delta, 0, 0, 1)

    @classmethod
    def kernel(cls, beta) -> "MobiusMap":
        """The reproducing kernel ``K_beta(z) = 1 / (1 - conj(beta) z)``."""
        beta = S.as_scalar(beta)
        return cls(0, 1, -S.conj(beta), 1)

    @classmethod
    def from_ratio(cls, num: Sequence, den: Sequence) -> "MobiusMap":
        """From ascending-power coefficient lists ``num = [n0, n1]``, ``den = [d0, d1]``."""
        num = list(num) + [0] * (2 - len(num))
        den = list(den) + [0] * (2 - len(den))
        if len(num) > 2 or len(den) > 2:
            raise ValueError("linear fractional weights have degree <= 1")
        return cls(num[1], num[0], den[1], den[0])

    # basic properties -----------------------------------------------------
    @property
    def coefficients(self):
        return (self.a, self.b, self.c, self.d)

    @property
    def exact(self) -> bool:
        return S.all_exact(*self.coefficients)

    @property
    def determinant(self):
        return self.a * self.d - self.b * self.c

    @property
    def is_constant(self) -> bool:
        return S.is_zero(self.a) and S.is_zero(self.c)

    @property
    def value(self):
        """The constant value of a constant map."""
        if not self.is_constant:
            raise ValueError("map is not constant")
        return self.b / self.d

    @property
    def is_identity(self) -> bool:
        tol = 0 if self.exact else COEFF_TOL
        return (S.is_zero(self.b, tol) and S.is_zero(self.c, tol)
                and S.close(self.a, self.d, tol))

    @property
    def num(self):
        """Numerator coefficients in ascending powers."""
        return (self.b, self.a)

    @property
    def den(self):
        """Denominator coefficients in ascending powers."""
        return (self.d, self.c)

    def pole(self):
        """Finite pole ``-d/c``, or ``INFINITY`` when ``c == 0``."""
        if S.is_zero(self.c):
            return INFINITY
        return -self.d / self.c

    def zero(self):
        """Zero of the numerator, ``INFINITY`` for a nonzero constant, ``None`` for 0."""
        if S.is_zero(self.a):
            return INFINITY if not S.is_zero(self.b) else None
        return -self.b / self.a

    def pole_outside_closed_disc(self) -> bool:
        if self.is_constant or S.is_zero(self.c):
            return True
        if self.exact:
            return S.abs2(self.d) > S.abs2(self.c)
        return abs(self.d) > abs(self.c) * (1 + COEFF_TOL)

    def matrix(self) -> np.ndarray:
        return np.array([[complex(self.a), complex(self.b)],
                         [complex(self.c), complex(self.d)]])

    # evaluation -----------------------------------------------------------
    def __call__(self, z):
        if isinstance(z, np.ndarray):
            a, b, c, d = (complex(x) for x in self.coefficients)
            return (a * z + b) / (c * z + d)
        z = S.as_scalar(z)
        den = self.c * z + self.d
        if S.is_zero(den):
            return INFINITY
        return (self.a * z + self.b) / den

    def derivative(self, z):
        z = S.as_scalar(z)
        den = self.c * z + self.d
        return self.determinant / (den * den)

    # algebra --------------------------------------------------------------
    def __matmul__(self, other: "MobiusMap") -> "MobiusMap":
        return compose(self, other)

    def __mul__(self, k) -> "MobiusMap":
        """Scale the map's values by a constant."""
        k = S.as_scalar(k)
        return MobiusMap(k * self.a, k * self.b, self.c, self.d)

    __rmul__ = __mul__

    def equals(self, other: "MobiusMap", tol: Optional[float] = None) -> bool:
        """Projective equality; ``tol=0`` demands exact coefficient equality."""
        if tol is None:
            tol = 0 if (self.exact and other.exact) else COEFF_TOL
        u, v = self.coefficients, other.coefficients
        if tol == 0:
            return all(S.close(x, y, 0) for x, y in zip(u, v))
        cu = [complex(x) for x in u]
        cv = [complex(x) for x in v]
        top = max(abs(x) for x in cu)
        k = next(i for i, x in enumerate(cu) if abs(x) >= top * (1 - 1e-9))
        if abs(cv[k]) <= tol:
            return False
        cu = [x / cu[k] for x in cu]
        cv = [x / cv[k] for x in cv]
        return all(abs(x - y) <= tol for x, y in zip(cu, cv))

    def __eq__(self, other):
        if not isinstance(other, MobiusMap):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def __repr__(self):
        return "MobiusMap(a={!s}, b={!s}, c={!s}, d={!s})".format(*self.coefficients)

    # serialisation --------------------------------------------------------
    def to_json(self) -> list:
        return [S.to_pair(x) for x in self.coefficients]

    @classmethod
    def from_json(cls, data) -> "MobiusMap":
        if len(data) != 4:
            raise ValueError("MobiusMap JSON needs four [re, im] pairs")
        return cls(*(S.from_pair(v) for v in data))


# --------------------------------------------------------------------------
# map classification variants


@dataclass(frozen=True)
class Identity:
    automorphism = True

    @property
    def name(self) -> str:
        return "Identity"


@dataclass(frozen=True)
class Constant:
    value: object
    automorphism = False

    @property
    def name(self) -> str:
        return "Constant"


@dataclass(frozen=True)
class InteriorDW:
    p: object
    derivative: object
    automorphism = False

    @property
    def name(self) -> str:
        return "InteriorDW"


@dataclass(frozen=True)
class EllipticAutomorphism:
    p: object
    derivative: object
    automorphism = True

    @property
    def name(self) -> str:
        return "EllipticAutomorphism"


@dataclass(frozen=True)
class ParabolicAutomorphism:
    omega: object
    derivative = 1
    automorphism = True

    @property
    def name(self) -> str:
        return "ParabolicAutomorphism"


@dataclass(frozen=True)
class ParabolicNonAutomorphism:
    omega: object
    derivative = 1
    automorphism = False

    @property
    def name(self) -> str:
        return "ParabolicNonAutomorphism"


@dataclass(frozen=True)
class HyperbolicAutomorphism:
    omega: object
    derivative: object
    automorphism = True

    @property
    def name(self) -> str:
        return "HyperbolicAutomorphism"


@dataclass(frozen=True)
class HyperbolicNonAutomorphism:
    omega: object
    derivative: object
    automorphism = False

    @property
    def name(self) -> str:
        return "HyperbolicNonAutomorphism"


MapClass = Union[Identity, Constant, InteriorDW, EllipticAutomorphism,
                 ParabolicAutomorphism, ParabolicNonAutomorphism,
                 HyperbolicAutomorphism, HyperbolicNonAutomorphism]


def denjoy_wolff(cls: MapClass):
    """Denjoy-Wolff point of a classification (``None`` for identity/elliptic)."""
    if isinstance(cls, InteriorDW):
        return cls.p
    if isinstance(cls, Constant):
        return cls.value
    if isinstance(cls, EllipticAutomorphism):
        return cls.p
    return getattr(cls, "omega", None)


@dataclass(frozen=True)
class CowenTriple:
    """Factors of ``C_phi^* = M_g C_sigma M_h^*`` (coefficients scaled to ``d = 1``)."""

    g: MobiusMap
    sigma: MobiusMap
    h: MobiusMap


# --------------------------------------------------------------------------
# operations


def _require_nonconstant(m: MobiusMap):
    if m.is_constant:
        raise ConstantMap("operation needs a nonconstant map")


def compose(m1: MobiusMap, m2: MobiusMap) -> MobiusMap:
    """``m1 o m2`` via the coefficient-matrix product."""
    a1, b1, c1, d1 = m1.coefficients
    a2, b2, c2, d2 = m2.coefficients
    return MobiusMap(a1 * a2 + b1 * c2, a1 * b2 + b1 * d2,
                     c1 * a2 + d1 * c2, c1 * b2 + d1 * d2)


def inverse(m: MobiusMap) -> MobiusMap:
    _require_nonconstant(m)
    a, b, c, d = m.coefficients
    return MobiusMap(d, -b, -c, a)


def image_circle(m: MobiusMap):
    """Centre and squared radius of ``m(unit circle)``.

    Returns ``None`` when the image is a line (pole on the unit circle).  The
    third value is the sign of ``|d|^2 - |c|^2``: positive means the open disc
    maps to the bounded side.
    """
    _require_nonconstant(m)
    a, b, c, d = m.coefficients
    A = S.abs2(d) - S.abs2(c)
    if S.is_exact(A) and A == 0 or not S.is_exact(A) and abs(A) <= COEFF_TOL:
        return None
    centre = (S.conj(d) * b - S.conj(c) * a) / A
    radius2 = S.abs2(m.determinant) / (A * A)
    return centre, radius2, (1 if A > 0 else -1)


def is_disc_selfmap(m: MobiusMap) -> bool:
    """True iff ``m`` maps the open unit disc into itself."""
    if m.is_constant:
        raise ConstantMap("is_disc_selfmap is defined for nonconstant maps")
    circ = image_circle(m)
    if circ is None:
        return False
    centre, radius2, side = circ
    if side < 0:
        return False
    if m.exact:
        # |w0| + r <= 1, squared without radicals
        w2 = S.abs2(centre)
        if w2 > 1:
            return False
        slack = 1 + w2 - radius2
        return slack >= 0 and 4 * w2 <= slack * slack
    far = abs(complex(centre)) + float(np.sqrt(radius2))
    return far <= 1 + COEFF_TOL


def is_automorphism(m: MobiusMap) -> bool:
    if m.is_constant:
        return False
    circ = image_circle(m)
    if circ is None:
        return False
    centre, radius2, side = circ
    if side < 0:
        return False
    if m.exact:
        return centre == 0 and radius2 == 1
    return abs(complex(centre)) <= GEOM_TOL and abs(radius2 - 1) <= 2 * GEOM_TOL


def fixed_points(m: MobiusMap) -> List:
    """Roots of ``c z^2 + (d - a) z - b``; a double root is listed twice.

    ``INFINITY`` appears when ``c == 0``.
    """
    _require_nonconstant(m)
    if m.is_identity:
        raise IdentityMap("every point is fixed by the identity")
    a, b, c, d = m.coefficients
    tol = 0 if m.exact else COEFF_TOL
    if S.is_zero(c, tol):
        if S.is_zero(d - a, tol):
            return [INFINITY, INFINITY]
        return [b / (d - a), INFINITY]
    disc = (d - a) * (d - a) + 4 * b * c
    if S.is_zero(disc, tol):
        root = (a - d) / (2 * c)
        return [root, root]
    r = S.sqrt(disc)
    if not m.exact or not S.is_exact(r):
        a, b, c, d, r = (complex(x) for x in (a, b, c, d, r))
        # the smaller root via the product of roots -b/c avoids cancellation
        plus, minus = (a - d + r) / 2, (a - d - r) / 2
        if abs(plus) >= abs(minus):
            return [plus / c, -b / plus]
        return [-b / minus, minus / c]
    return [(a - d + r) / (2 * c), (a - d - r) / (2 * c)]


def _modulus_vs_one(z, exact: bool) -> int:
    """-1 inside, 0 on, +1 outside the unit circle (numeric within GEOM_TOL)."""
    if exact and S.is_exact(z):
        return S.real_cmp(S.abs2(z), 1)
    r = abs(complex(z))
    if abs(r - 1) <= GEOM_TOL:
        return 0
    return -1 if r < 1 else 1


def classify(m) -> MapClass:
    """Classify a disc selfmap by its Denjoy-Wolff point."""
    if not isinstance(m, MobiusMap):
        m = MobiusMap.constant(m)
    if m.is_constant:
        beta = m.value
        if _modulus_vs_one(beta, m.exact) >= 0:
            raise NotSelfmap("constant value is not inside the disc")
        return Constant(beta)
    if m.is_identity:
        return Identity()
    if not is_disc_selfmap(m):
        raise NotSelfmap(f"{m!r} does not map the disc into itself")
    auto = is_automorphism(m)
    pts = [p for p in fixed_points(m) if p is not INFINITY]
    for p in pts:
        if _modulus_vs_one(p, m.exact) < 0:
            delta = m.derivative(p)
            if auto:
                return EllipticAutomorphism(p, delta)
            return InteriorDW(p, delta)
    candidates = []
    for p in pts:
        if _modulus_vs_one(p, m.exact) == 0:
            if not (m.exact and S.is_exact(p)):
                p = complex(p) / abs(complex(p))
            deriv = m.derivative(p)
            dv = complex(deriv)
            if abs(dv.imag) <= GEOM_TOL and 0 < dv.real <= 1 + GEOM_TOL:
                candidates.append((p, deriv))
    if not candidates:
        raise NotSelfmap("no attracting fixed point found in the closed disc")
    omega, deriv = min(candidates, key=lambda pd: complex(pd[1]).real)
    if m.exact and S.is_exact(deriv):
        parabolic = deriv == 1
    else:
        parabolic = abs(complex(deriv) - 1) <= GEOM_TOL
        deriv = complex(deriv).real
    if parabolic:
        return ParabolicAutomorphism(omega) if auto else ParabolicNonAutomorphism(omega)
    if auto:
        return HyperbolicAutomorphism(omega, deriv)
    return HyperbolicNonAutomorphism(omega, deriv)


def _in_open_disc(p) -> bool:
    return _modulus_vs_one(p, S.is_exact(p)) < 0


def alpha(p) -> MobiusMap:
    """The self-inverse automorphism ``(p - z) / (1 - conj(p) z)``."""
    p = S.as_scalar(p)
    if not _in_open_disc(p):
        raise PointNotInDisc(f"|p| must be < 1, got {p}")
    return MobiusMap(-1, p, -S.conj(p), 1)


def halfplane_map() -> MobiusMap:
    """``T(z) = (1 + z) / (1 - z)``, disc onto the right half-plane."""
    return MobiusMap(1, 1, -1, 1)


def canonical_parabolic(t) -> MobiusMap:
    """Parabolic selfmap fixing 1: ``((2 - t) z + t) / (-t z + (2 + t))``."""
    t = S.as_scalar(t)
    if S.is_zero(t) or complex(t).real < 0:
        raise InvalidTranslation(f"need Re(t) >= 0 and t != 0, got {t}")
    return MobiusMap(2 - t, t, -t, 2 + t)


def canonical_hyperbolic(r, t) -> MobiusMap:
    """Hyperbolic selfmap fixing 1 with ``phi'(1) = 1/r``."""
    r = S.as_scalar(r)
    t = S.as_scalar(t)
    rc = complex(r)
    if abs(rc.imag) > 0 or rc.real <= 1 or complex(t).real < 0:
        raise InvalidParameters(f"need real r > 1 and Re(t) >= 0, got r={r}, t={t}")
    return MobiusMap(1 + r - t, r + t - 1, r - t - 1, 1 + r + t)


def cowen_aux(m: MobiusMap) -> CowenTriple:
    """Cowen auxiliary functions ``g, sigma, h`` with coefficients scaled so ``d = 1``."""
    if m.is_constant or not is_disc_selfmap(m):
        raise NotSelfmap("Cowen's formula needs a nonconstant disc selfmap")
    a, b, c, d = (x / m.d for x in m.coefficients)
    g = MobiusMap(0, 1, -S.conj(b), S.conj(d))
    sigma = MobiusMap(S.conj(a), -S.conj(c), -S.conj(b), S.conj(d))
    h = MobiusMap(c, d, 0, 1)
    return CowenTriple(g=g, sigma=sigma, h=h)
