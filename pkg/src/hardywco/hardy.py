"""Truncated Maclaurin series and reproducing kernels of H^2(U).

Series are plain complex coefficient vectors wrapped in :class:`TaylorPoly`
(index ``k`` holds the coefficient of ``z**k``).  Kernel combinations stay
symbolic as (weight, point) pairs so kernel identities can be checked exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np

from . import scalars as S
from .errors import (
    CompositionDiverges,
    InsufficientQuadrature,
    PoleInClosedDisc,
    PointNotInDisc,
)
from .mobius import MobiusMap

DEFAULT_ORDER = 64


class TaylorPoly:
    """Coefficients ``f_0 .. f_N`` of a truncated power series (read-only)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        arr = np.array(coeffs, dtype=complex).ravel()
        if arr.size == 0:
            raise ValueError("a TaylorPoly needs at least one coefficient")
        if not np.all(np.isfinite(arr)):
            raise ValueError("TaylorPoly coefficients must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("TaylorPoly is immutable")

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def __len__(self):
        return self.coeffs.size

    def __getitem__(self, k):
        return self.coeffs[k]

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(z, self.coeffs)

    def derivative(self) -> "TaylorPoly":
        if self.order == 0:
            return TaylorPoly([0])
        return TaylorPoly(self.coeffs[1:] * np.arange(1, self.order + 1))

    def truncate(self, N: int) -> "TaylorPoly":
        """Coefficients ``0..N``, zero-padded when the series is shorter."""
        return TaylorPoly(_fit(self.coeffs, N + 1))

    def degree(self, tol: float = 0.0) -> int:
        nz = np.nonzero(np.abs(self.coeffs) > tol)[0]
        return int(nz[-1]) if nz.size else 0

    def __add__(self, other):
        n = max(len(self), len(other))
        return TaylorPoly(_fit(self.coeffs, n) + _fit(np.asarray(other.coeffs), n))

    def __sub__(self, other):
        n = max(len(self), len(other))
        return TaylorPoly(_fit(self.coeffs, n) - _fit(np.asarray(other.coeffs), n))

    def __mul__(self, k):
        return TaylorPoly(self.coeffs * complex(k))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TaylorPoly):
            return NotImplemented
        return len(self) == len(other) and bool(np.all(self.coeffs == other.coeffs))

    __hash__ = None

    def __repr__(self):
        return f"TaylorPoly({np.array2string(self.coeffs, precision=6)})"

    def to_json(self) -> list:
        return [[float(c.real), float(c.imag)] for c in self.coeffs]

    @classmethod
    def from_json(cls, data) -> "TaylorPoly":
        return cls([complex(S.from_pair(v)) for v in data])


def _fit(arr: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros(n, dtype=complex)
    m = min(n, arr.size)
    out[:m] = arr[:m]
    return out


def lft_coefficients(a, b, c, d, n: int) -> np.ndarray:
    """First ``n`` Maclaurin coefficients of ``(a z + b)/(c z + d)``.

    No pole check; callers decide whether the expansion is meaningful.
    """
    a, b, c, d = (complex(x) for x in (a, b, c, d))
    if n <= 0:
        return np.zeros(0, dtype=complex)
    # 1/(cz + d) = (1/d) sum (-c/d)^k z^k
    geo = np.empty(n, dtype=complex)
    geo[0] = 1 / d
    ratio = -c / d
    for k in range(1, n):
        geo[k] = geo[k - 1] * ratio
    out = b * geo
    out[1:] += a * geo[:-1]
    return out


def taylor_of_lft(m: MobiusMap, N: int = DEFAULT_ORDER) -> TaylorPoly:
    """Maclaurin coefficients ``0..N`` of a linear fractional map or weight."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    if not m.pole_outside_closed_disc():
        raise PoleInClosedDisc(f"pole {m.pole()} lies in the closed disc")
    return TaylorPoly(lft_coefficients(*m.coefficients, N + 1))


def as_series(f, N: int) -> TaylorPoly:
    """Coerce a MobiusMap or TaylorPoly symbol to coefficients ``0..N``."""
    if isinstance(f, TaylorPoly):
        return f.truncate(N)
    if isinstance(f, MobiusMap):
        return taylor_of_lft(f, N)
    return TaylorPoly([complex(f)]).truncate(N)


def series_mul(f: TaylorPoly, g: TaylorPoly, N: int) -> TaylorPoly:
    """Cauchy product truncated at order ``N``."""
    n = N + 1
    prod = np.convolve(_fit(f.coeffs, n), _fit(g.coeffs, n))[:n]
    return TaylorPoly(prod)


def series_compose(f: TaylorPoly, phi: TaylorPoly, N: int) -> TaylorPoly:
    """Coefficients ``0..N`` of ``f o phi`` by Horner's scheme.

    Uses every coefficient of ``f`` (which may be longer than ``N + 1``);
    intermediate powers of ``phi`` are cut at ``N``.
    """
    if abs(phi.coeffs[0]) >= 1:
        raise CompositionDiverges(f"|phi(0)| = {abs(phi.coeffs[0])} >= 1")
    n = N + 1
    p = _fit(phi.coeffs, n)
    acc = np.zeros(n, dtype=complex)
    for fk in f.coeffs[::-1]:
        acc = np.convolve(acc, p)[:n]
        acc[0] += fk
    return TaylorPoly(acc)


def series_exp(f: TaylorPoly, N: int) -> TaylorPoly:
    """Coefficients ``0..N`` of ``exp(f)`` via ``E' = f' E``."""
    n = N + 1
    v = _fit(f.coeffs, n)
    dv = v * np.arange(n)
    e = np.zeros(n, dtype=complex)
    e[0] = np.exp(v[0])
    for k in range(1, n):
        e[k] = np.dot(dv[1:k + 1], e[k - 1::-1]) / k
    return TaylorPoly(e)


def h2_inner(f: TaylorPoly, g: TaylorPoly) -> complex:
    n = max(len(f), len(g))
    return complex(np.vdot(_fit(g.coeffs, n), _fit(f.coeffs, n)))


def h2_norm(f: TaylorPoly) -> float:
    return float(np.linalg.norm(f.coeffs))


def boundary_values(f: TaylorPoly, M: int) -> np.ndarray:
    """``f(exp(2 pi i j / M))`` for ``j = 0..M-1``."""
    return np.fft.ifft(_alias(f.coeffs, M)) * M


def _alias(c: np.ndarray, M: int) -> np.ndarray:
    out = np.zeros(M, dtype=complex)
    for start in range(0, c.size, M):
        chunk = c[start:start + M]
        out[:chunk.size] += chunk
    return out


def boundary_norm_check(f: TaylorPoly, M: int) -> float:
    """Trapezoidal value of ``(1/2pi) int |f(e^{it})|^2 dt`` on ``M`` nodes.

    Exact for polynomials once ``M >= 2 deg(f) + 1``.
    """
    need = 2 * f.degree() + 1
    if M < need:
        raise InsufficientQuadrature(f"need M >= {need}, got {M}")
    vals = boundary_values(f, M)
    return float(np.mean(np.abs(vals) ** 2))


def sup_on_circle(f, M: int = 1024) -> float:
    """Grid estimate of ``max |f|`` on the unit circle."""
    theta = 2 * np.pi * np.arange(M) / M
    z = np.exp(1j * theta)
    return float(np.max(np.abs(f(z))))


# --------------------------------------------------------------------------
# reproducing kernels


def _check_point(p) -> complex:
    p = complex(p)
    if not abs(p) < 1:
        raise PointNotInDisc(f"kernel point {p} is not in the open disc")
    return p


@dataclass(frozen=True)
class KernelCombo:
    """Finite combination ``sum w_j K_{p_j}``; empty means the zero function."""

    terms: Tuple[Tuple[complex, complex], ...] = ()

    def __post_init__(self):
        terms = tuple((complex(w), _check_point(p)) for w, p in self.terms)
        object.__setattr__(self, "terms", terms)

    def __add__(self, other: "KernelCombo") -> "KernelCombo":
        return KernelCombo(self.terms + other.terms)

    def __sub__(self, other: "KernelCombo") -> "KernelCombo":
        return self + other.scale(-1)

    def scale(self, k) -> "KernelCombo":
        k = complex(k)
        return KernelCombo(tuple((k * w, p) for w, p in self.terms))

    def __call__(self, z):
        return kernel_eval(self, z)

    def inner(self, other: "KernelCombo") -> complex:
        total = 0j
        for w, a in self.terms:
            for v, b in other.terms:
                total += w * np.conj(v) * kernel_inner(a, b)
        return total

    def norm(self) -> float:
        return float(np.sqrt(max(self.inner(self).real, 0.0)))

    def taylor(self, N: int = DEFAULT_ORDER) -> TaylorPoly:
        k = np.arange(N + 1)
        out = np.zeros(N + 1, dtype=complex)
        for w, p in self.terms:
            out += w * np.conj(p) ** k
        return TaylorPoly(out)

    def is_zero(self, tol: float = 0.0) -> bool:
        return self.norm() <= tol

    def to_json(self) -> list:
        return [[S.to_pair(w), S.to_pair(p)] for w, p in self.terms]


def kernel_at(beta, weight=1) -> KernelCombo:
    return KernelCombo(((weight, beta),))


def kernel_norm(beta) -> float:
    beta = _check_point(beta)
    return 1 / np.sqrt(1 - abs(beta) ** 2)


def kernel_inner(a, b) -> complex:
    """``<K_a, K_b> = K_a(b) = 1 / (1 - conj(a) b)``."""
    a, b = _check_point(a), _check_point(b)
    return 1 / (1 - np.conj(a) * b)


def kernel_eval(combo: KernelCombo, z) -> complex:
    z = complex(z)
    return sum((w / (1 - np.conj(p) * z) for w, p in combo.terms), 0j)


def kernel_combo_from(terms: Iterable[Sequence]) -> KernelCombo:
    return KernelCombo(tuple((w, p) for w, p in terms))
