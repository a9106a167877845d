"""Spectrum predictions, finite-section eigenvalues and the parabolic
approximate-eigenvector residual.

Finite-section eigenvalues are reported raw.  For non-compact operators
(``|delta| = 1`` or unitary parabolic/hyperbolic symbols) they need not
approximate the spectrum; the unit-circle prediction is checked through
:func:`bbc_numeric_check` instead.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
import scipy.linalg

from . import scalars as S
from .errors import (
    EmptySet,
    InvalidParameters,
    NotCertifiedNormal,
    NumericalBreakdown,
    TruncationInsufficient,
)
from .hardy import TaylorPoly, series_exp
from .mobius import MobiusMap, canonical_parabolic, classify
from .operators import INNER_CAP, WcoSpec, _as_lft, finite_section, is_normal, is_unitary, section
from .synthesis import LftWco, matches_ifpn, unitary_pair

log = logging.getLogger(__name__)

# Hausdorff threshold used by spectrum comparison reports
COMPARE_TOL = 1e-4


@dataclass(frozen=True)
class KernelOrbit:
    """Closure of ``{gamma * delta**n : n >= 0}``."""

    gamma: complex
    delta: complex

    def points(self, N: int) -> np.ndarray:
        g, d = complex(self.gamma), complex(self.delta)
        pts = g * d ** np.arange(N)
        if abs(d) < 1 and g != 0:
            pts = np.append(pts, 0)
        return pts

    def to_json(self) -> dict:
        return {"kind": "KernelOrbit", "gamma": S.to_pair(self.gamma),
                "delta": S.to_pair(self.delta)}


@dataclass(frozen=True)
class UnitCircle:
    def to_json(self) -> dict:
        return {"kind": "UnitCircle"}


@dataclass(frozen=True)
class Unpredicted:
    reason: str = ""

    def to_json(self) -> dict:
        return {"kind": "Unpredicted", "reason": self.reason}


Prediction = Union[KernelOrbit, UnitCircle, Unpredicted]


def _as_pair(W) -> Optional[LftWco]:
    if isinstance(W, LftWco):
        return W
    psi = _as_lft(W.psi)
    if psi is None or not isinstance(W.phi, MobiusMap):
        return None
    return LftWco(psi, W.phi)


def predict_spectrum(W, N: int = 64, tol: float = 1e-8) -> Prediction:
    """Spectrum predicted for a certified normal or unitary operator."""
    pair = _as_pair(W)
    if pair is None:
        raise NotCertifiedNormal("spectrum prediction needs linear fractional symbols")
    wco = pair.wco()
    if pair.weight.is_constant and S.is_zero(pair.weight.value):
        return KernelOrbit(0, 0)
    normal = is_normal(wco, N, tol)
    if normal.certificate == "exact-IFPN":
        if normal.verdict != "normal":
            raise NotCertifiedNormal("the pair fails the interior fixed point normal form")
        m = matches_ifpn(pair)
        return KernelOrbit(complex(m.gamma), complex(m.delta))
    unitary = is_unitary(wco, N, tol)
    if unitary.verdict == "unitary":
        cls = classify(pair.symbol)
        if cls.name.startswith(("Parabolic", "Hyperbolic")):
            return UnitCircle()
        return Unpredicted(f"unitary with {cls.name} symbol")
    if normal.verdict == "normal":
        return Unpredicted(f"normal ({normal.certificate}) without interior fixed point")
    raise NotCertifiedNormal(f"normality not certified ({normal.verdict}, {normal.certificate})")


def section_eigenvalues(W: WcoSpec, N: int = 64) -> np.ndarray:
    """All eigenvalues of the ``N x N`` finite section."""
    if N < 8:
        raise ValueError("section_eigenvalues needs N >= 8")
    A = finite_section(W, N)
    if not np.any(np.triu(A, 1)):
        # lower triangular (phi(0) = 0): the diagonal is the spectrum
        return A.diagonal().copy()
    try:
        ev = scipy.linalg.eigvals(A)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalBreakdown(str(exc)) from exc
    if not np.all(np.isfinite(ev)):
        raise NumericalBreakdown("eigensolver returned non-finite values")
    return ev


def hausdorff(A: Sequence, B: Sequence) -> float:
    """Hausdorff distance between two finite point sets in the plane."""
    a = np.asarray(A, dtype=complex).ravel()
    b = np.asarray(B, dtype=complex).ravel()
    if a.size == 0 or b.size == 0:
        raise EmptySet("hausdorff distance needs nonempty sets")
    D = np.abs(a[:, None] - b[None, :])
    return float(max(D.min(axis=1).max(), D.min(axis=0).max()))


def sort_points(points) -> np.ndarray:
    """Sort by ``(re, im)`` for deterministic output."""
    pts = np.asarray(points, dtype=complex)
    return pts[np.lexsort((pts.imag, pts.real))]


def sort_eigenvalues(points) -> np.ndarray:
    """Sort by modulus descending, then by argument."""
    pts = np.asarray(points, dtype=complex)
    return pts[np.lexsort((np.angle(pts), -np.abs(pts)))]


def orbit_gap(pred: KernelOrbit, N: int) -> float:
    """Distance from 0 to the first ``N`` orbit points when 0 is added to close the orbit."""
    d = abs(complex(pred.delta))
    if d >= 1 or pred.gamma == 0:
        return 0.0
    return abs(complex(pred.gamma)) * d ** (N - 1)


def compare(W, N: int = 64, tol: float = 1e-8) -> dict:
    """Prediction versus section eigenvalues as ``{prediction, N, hausdorff, pass}``."""
    pred = predict_spectrum(W, N, tol)
    pair = _as_pair(W)
    ev = section_eigenvalues(pair.wco(), N)
    report = {"prediction": pred.to_json(), "N": N, "hausdorff": None, "pass": None}
    if isinstance(pred, KernelOrbit):
        dist = hausdorff(ev, pred.points(N))
        report["hausdorff"] = dist
        report["pass"] = dist < COMPARE_TOL + orbit_gap(pred, N)
    return report


# --------------------------------------------------------------------------
# approximate eigenvectors for parabolic unitaries


def _check_bbc_t(t) -> complex:
    t = complex(S.as_scalar(t))
    if t == 0 or t.real != 0:
        raise InvalidParameters(f"t must be nonzero and purely imaginary, got {t}")
    return t


def bbc_residual_sq(t, s) -> float:
    """Squared residual of the normalised approximate eigenvector ``G_s``.

    Equal to ``2 - 8(s+1)^2 / (4(s+1)^2 + |t|^2 (s-1)^2)``, evaluated in the
    cancellation-free form ``2|t|^2 (s-1)^2 / (4(s+1)^2 + |t|^2 (s-1)^2)``.
    """
    t = _check_bbc_t(t)
    s = float(s)
    if not s > 1:
        raise InvalidParameters(f"s must exceed 1, got {s}")
    tt = abs(t) ** 2
    h2 = (s - 1) ** 2
    return 2 * tt * h2 / (4 * (s + 1) ** 2 + tt * h2)


def bbc_nu(t, c=1) -> complex:
    """The unimodular eigenvalue factor ``c (2 + t) / sqrt(4 + |t|^2)``."""
    t = complex(S.as_scalar(t))
    return complex(c) * (2 + t) / np.sqrt(4 + abs(t) ** 2)


def inner_exp_series(lam: float, order: int) -> TaylorPoly:
    """Coefficients ``0..order`` of ``exp(lam (1 + z) / (1 - z))``."""
    u = np.full(order + 1, 2.0 * lam, dtype=complex)
    u[0] = lam
    return series_exp(TaylorPoly(u), order)


def bbc_vector(s: float, lam: float, order: int) -> np.ndarray:
    """Coefficients ``0..order`` of ``G_s = exp(lam (1+z)/(1-z)) / (s - z)``."""
    geo = s ** -(np.arange(order + 1) + 1.0)
    S_lam = inner_exp_series(lam, order).coeffs
    return np.convolve(geo, S_lam)[: order + 1]


def bbc_numeric_check(t, s, lam, N: int = 256, inner: Optional[int] = None,
                      rtol: float = 1e-6) -> float:
    """``||P_N (W - nu e^{lam t}) G_s|| / ||G_s||`` for the parabolic unitary with ``c = 1``.

    ``G_s`` is expanded to order ``M - 1`` and hit with the ``N x M`` section.
    ``M`` doubles from ``8N`` until the residual moves by less than
    ``rtol`` between successive ``M``; ``inner`` pins ``M``.  The norm of
    ``G_s`` is the closed form ``1/sqrt(s^2 - 1)``.
    """
    t = _check_bbc_t(t)
    s, lam = float(s), float(lam)
    if not 1.05 < s <= 2:
        raise InvalidParameters(f"s must lie in (1.05, 2], got {s}")
    if not -2 <= lam <= -0.1:
        raise InvalidParameters(f"lambda must lie in [-2, -0.1], got {lam}")
    if N < 128:
        raise InvalidParameters(f"N must be at least 128, got {N}")
    W = unitary_pair(canonical_parabolic(t), 1).wco()
    mu = bbc_nu(t) * np.exp(lam * t)
    g_norm = 1 / np.sqrt(s * s - 1)

    def residual(M):
        G = bbc_vector(s, lam, M - 1)
        out = section(W, N, M) @ G - mu * G[:N]
        return float(np.linalg.norm(out) / g_norm)

    if inner is not None:
        return residual(inner)
    M = 8 * N
    prev = residual(M)
    while True:
        if 2 * M > INNER_CAP:
            raise TruncationInsufficient(
                f"residual not settled to {rtol:g} with inner dimension {M}")
        cur = residual(2 * M)
        if abs(cur - prev) <= rtol:
            return cur
        M, prev = 2 * M, cur
