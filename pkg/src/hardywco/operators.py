"""Weighted composition operators ``W f = psi * (f o phi)`` on H^2.

Matrices are taken in the monomial basis: column ``n`` of a section holds the
Maclaurin coefficients of ``psi * phi**n``.

Gram-type products (``A^*A``, ``AA^*``) are formed over an *inner* index that
is widened until its tail is negligible, so that the ``h x h`` block returned
is the compression of ``W^*W`` (resp. ``WW^*``) itself rather than a product
of truncations.  Passing ``inner=N`` reproduces the plain square-section
product.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple, Union

import numpy as np
from scipy.signal import lfilter

from . import scalars as S
from .errors import NotSelfmap, PointNotInDisc, UnboundedWeight
from .hardy import KernelCombo, TaylorPoly, sup_on_circle
from .mobius import (
    MobiusMap,
    classify,
    cowen_aux,
    inverse,
    is_automorphism,
    is_disc_selfmap,
)

log = logging.getLogger(__name__)

Symbol = Union[MobiusMap, TaylorPoly]

DEFAULT_N = 64
DEFAULT_TOL = 1e-8
# relative size of the discarded half of the inner index at convergence
INNER_EPS = 1e-14
INNER_CAP = 1 << 16


def _coerce_symbol(x) -> Symbol:
    if isinstance(x, (MobiusMap, TaylorPoly)):
        return x
    if isinstance(x, (list, tuple, np.ndarray)):
        return TaylorPoly(x)
    return MobiusMap.constant(x)


def _symbol_to_json(x: Symbol):
    if isinstance(x, TaylorPoly):
        return {"series": x.to_json()}
    return {"num": [S.to_pair(v) for v in x.num], "den": [S.to_pair(v) for v in x.den]}


def _symbol_from_json(data, as_map: bool) -> Symbol:
    if isinstance(data, dict):
        if "series" in data:
            return TaylorPoly.from_json(data["series"])
        if "num" in data:
            num = [S.from_pair(v) for v in data["num"]]
            den = [S.from_pair(v) for v in data.get("den", [[1, 0]])]
            return MobiusMap.from_ratio(num, den)
        if "coeffs" in data:
            return MobiusMap.from_json(data["coeffs"])
        raise ValueError(f"unrecognised symbol JSON keys: {sorted(data)}")
    if as_map and isinstance(data, list) and len(data) == 4:
        return MobiusMap.from_json(data)
    return MobiusMap.constant(S.from_pair(data))


@dataclass(frozen=True)
class WcoSpec:
    """Symbol data ``(psi, phi)`` of a weighted composition operator.

    Either symbol may be linear fractional (:class:`MobiusMap`) or a
    polynomial (:class:`TaylorPoly`).  ``phi`` must map the disc into itself
    and a linear fractional ``psi`` must be bounded on the disc.
    """

    psi: Symbol
    phi: Symbol

    def __post_init__(self):
        psi = _coerce_symbol(self.psi)
        phi = _coerce_symbol(self.phi)
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "phi", phi)
        if isinstance(psi, MobiusMap) and not psi.pole_outside_closed_disc():
            raise UnboundedWeight(f"weight pole {psi.pole()} lies in the closed disc")
        if isinstance(phi, MobiusMap):
            if phi.is_constant:
                if not abs(complex(phi.value)) < 1:
                    raise NotSelfmap("constant symbol must lie in the disc")
            elif not is_disc_selfmap(phi):
                raise NotSelfmap(f"{phi!r} is not a disc selfmap")
        else:
            if sup_on_circle(phi) > 1 + S.COEFF_TOL:
                raise NotSelfmap("polynomial symbol leaves the closed disc")

    @property
    def mode(self) -> str:
        both_lft = isinstance(self.psi, MobiusMap) and isinstance(self.phi, MobiusMap)
        return "exact" if both_lft else "numeric"

    def psi_at(self, z) -> complex:
        return complex(self.psi(z)) if isinstance(self.psi, MobiusMap) else complex(self.psi(complex(z)))

    def phi_at(self, z) -> complex:
        return complex(self.phi(z)) if isinstance(self.phi, MobiusMap) else complex(self.phi(complex(z)))

    def to_json(self) -> dict:
        phi = self.phi.to_json() if isinstance(self.phi, MobiusMap) else _symbol_to_json(self.phi)
        return {"psi": _symbol_to_json(self.psi), "phi": phi}

    @classmethod
    def from_json(cls, data: dict) -> "WcoSpec":
        if "weight" in data and "symbol" in data:
            return cls(_symbol_from_json(data["weight"], False),
                       _symbol_from_json(data["symbol"], True))
        return cls(_symbol_from_json(data["psi"], False), _symbol_from_json(data["phi"], True))


def _filter(sym: Symbol) -> Tuple[np.ndarray, np.ndarray]:
    """IIR/FIR coefficients realising multiplication by ``sym`` on series."""
    if isinstance(sym, MobiusMap):
        a, b, c, d = (complex(x) for x in sym.coefficients)
        return np.array([b, a]), np.array([d, c])
    return np.asarray(sym.coeffs), np.array([1.0 + 0j])


def _times(filt, x: np.ndarray) -> np.ndarray:
    return lfilter(filt[0], filt[1], x)


def section(W: WcoSpec, rows: int, cols: Optional[int] = None) -> np.ndarray:
    """``rows x cols`` block of the matrix of ``W`` (column ``n`` = ``psi phi^n``)."""
    cols = rows if cols is None else cols
    psi_f, phi_f = _filter(W.psi), _filter(W.phi)
    A = np.empty((rows, cols), dtype=complex)
    if cols == 0 or rows == 0:
        return A
    unit = np.zeros(rows, dtype=complex)
    unit[0] = 1
    col = _times(psi_f, unit)
    if rows <= 64 and cols > rows:
        # many short columns: multiplication by phi as a triangular Toeplitz matrix
        T = np.column_stack([_times(phi_f, np.eye(rows, dtype=complex)[:, j]) for j in range(rows)])
        for n in range(cols):
            A[:, n] = col
            col = T @ col
        return A
    for n in range(cols):
        A[:, n] = col
        col = _times(phi_f, col)
    return A


def _exact_section(W: WcoSpec, N: int) -> np.ndarray:
    """Finite section in Gaussian-rational arithmetic, rounded once at the end."""
    def series(sym):
        if isinstance(sym, MobiusMap):
            a, b, c, d = (S.exact(x) for x in sym.coefficients)
            geo = [1 / d]
            for _ in range(1, N):
                geo.append(geo[-1] * (-c / d))
            out = [b * g for g in geo]
            for k in range(1, N):
                out[k] = out[k] + a * geo[k - 1]
            return out
        return [S.exact(complex(x)) for x in sym.truncate(N - 1).coeffs]

    psi, phi = series(W.psi), series(W.phi)
    zero = S.GaussianRational(0)
    phi_nz = [(j, v) for j, v in enumerate(phi) if v]
    A = np.empty((N, N), dtype=complex)
    col = psi
    for n in range(N):
        A[:, n] = [complex(v) for v in col]
        nxt = [zero] * N
        for k, v in enumerate(col):
            if not v:
                continue
            for j, p in phi_nz:
                if k + j >= N:
                    break
                nxt[k + j] = nxt[k + j] + v * p
        col = nxt
    return A


def finite_section(W: WcoSpec, N: int = DEFAULT_N, exact: bool = False) -> np.ndarray:
    """The ``N x N`` compression of ``W`` to ``span{1, z, ..., z^(N-1)}``.

    ``exact=True`` computes the entries in rational arithmetic (every symbol
    coefficient taken at its exact binary/rational value) and rounds once.
    """
    if N < 1:
        raise ValueError("N must be positive")
    if exact:
        return _exact_section(W, N)
    return section(W, N, N)


def _widen(build: Callable[[int], object], tail: Callable[[object, int], float],
           start: int, inner: Optional[int]):
    """Double the inner dimension ``M`` until ``tail(build(M), M)`` is negligible.

    ``tail`` returns the size of the contribution of indices ``[M/2, M)``
    relative to the whole.  ``inner`` pins ``M`` instead.
    """
    if inner is not None:
        return build(inner), inner
    M = start
    while True:
        X = build(M)
        rel = tail(X, M)
        if rel <= INNER_EPS:
            return X, M
        if M >= INNER_CAP:
            log.warning("inner dimension capped at %d; relative tail %.3g", M, rel)
            return X, M
        M *= 2


def _rel(part: float, whole: float) -> float:
    return part / whole if whole else 0.0


def column_gram(W: WcoSpec, h: int, inner: Optional[int] = None, start: int = 64) -> np.ndarray:
    """``h x h`` compression of ``W^* W``."""
    C, _ = _widen(lambda M: section(W, M, h),
                  lambda X, M: _rel(np.linalg.norm(X[M // 2:, :]), np.linalg.norm(X)),
                  max(start, 2 * h), inner)
    return C.conj().T @ C


def row_gram(W: WcoSpec, h: int, inner: Optional[int] = None, start: int = 64) -> np.ndarray:
    """``h x h`` compression of ``W W^*``."""
    R, _ = _widen(lambda M: section(W, h, M),
                  lambda X, M: _rel(np.linalg.norm(X[:, M // 2:]), np.linalg.norm(X)),
                  max(start, 2 * h), inner)
    return R @ R.conj().T


def _block(N: int) -> int:
    return N // 2


def commutator_defect(W: WcoSpec, N: int = DEFAULT_N, inner: Optional[int] = None) -> float:
    """Spectral norm of ``W^*W - WW^*`` on the top-left ``N//2`` block."""
    h = _block(N)
    start = N if inner is None else inner
    D = column_gram(W, h, inner, start) - row_gram(W, h, inner, start)
    return float(np.linalg.norm(D, 2))


def unitarity_defect(W: WcoSpec, N: int = DEFAULT_N, inner: Optional[int] = None) -> Tuple[float, float]:
    """``(||W^*W - I||, ||WW^* - I||)`` on the top-left ``N//2`` block."""
    h = _block(N)
    start = N if inner is None else inner
    eye = np.eye(h)
    return (float(np.linalg.norm(column_gram(W, h, inner, start) - eye, 2)),
            float(np.linalg.norm(row_gram(W, h, inner, start) - eye, 2)))


def hermitian_defect(W: WcoSpec, N: int = DEFAULT_N) -> float:
    A = finite_section(W, N)
    h = _block(N)
    return float(np.linalg.norm((A - A.conj().T)[:h, :h], 2))


def adjoint_on_kernel(W: WcoSpec, v: KernelCombo) -> KernelCombo:
    """``W^* sum w K_b = sum w conj(psi(b)) K_{phi(b)}``, exactly."""
    terms = []
    for w, beta in v.terms:
        image = W.phi_at(beta)
        if not abs(image) < 1:
            raise PointNotInDisc(f"phi({beta}) = {image} left the disc")
        terms.append((w * np.conj(W.psi_at(beta)), image))
    return KernelCombo(tuple(terms))


def cowen_adjoint_section(phi: MobiusMap, N: int = DEFAULT_N) -> np.ndarray:
    """Section of ``M_g C_sigma M_h^*``, the Cowen factorisation of ``C_phi^*``."""
    aux = cowen_aux(phi)
    ident = MobiusMap.identity()
    G = finite_section(WcoSpec(aux.g, ident), N)
    C = finite_section(WcoSpec(1, aux.sigma), N)
    H = finite_section(WcoSpec(aux.h, ident), N)
    return G @ C @ H.conj().T


# --------------------------------------------------------------------------
# reports and testers


@dataclass(frozen=True)
class Report:
    """Outcome of a normality / unitarity / Hermitian test."""

    verdict: str
    defect: float
    tolerance: float
    certificate: str
    N: int
    detail: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.verdict.startswith("not_") and not self.certificate:
            raise ValueError("a negative verdict needs a certificate")
        if self.defect < 0:
            raise ValueError("defect must be nonnegative")

    @property
    def passed(self) -> bool:
        return self.verdict in ("normal", "unitary", "hermitian")

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "defect": self.defect, "tolerance": self.tolerance,
               "certificate": self.certificate, "N": self.N}
        out.update(self.detail)
        return out


NormalityReport = Report


def _weight_zero_in_disc(psi: Symbol) -> Optional[complex]:
    if isinstance(psi, MobiusMap):
        z = psi.zero()
        if z is None or not isinstance(z, (S.GaussianRational, complex)):
            return None
        return complex(z) if abs(complex(z)) < 1 else None
    c = np.trim_zeros(np.asarray(psi.coeffs), "b")
    if c.size <= 1:
        return None
    roots = np.roots(c[::-1])
    inside = roots[np.abs(roots) < 1 - S.GEOM_TOL]
    return complex(inside[0]) if inside.size else None


def _weight_is_zero(psi: Symbol) -> bool:
    if isinstance(psi, MobiusMap):
        return psi.is_constant and S.is_zero(psi.value)
    return not np.any(psi.coeffs)


def _as_lft(sym: Symbol) -> Optional[MobiusMap]:
    """Linear fractional form of a symbol when it has one (polynomials of degree <= 1)."""
    if isinstance(sym, MobiusMap):
        return sym
    if sym.degree() <= 1:
        c = sym.truncate(1).coeffs
        return MobiusMap(complex(c[1]), complex(c[0]), 0, 1)
    return None


def find_nonunivalence_witness(phi: TaylorPoly, grid: int = 41, radius: float = 0.95,
                               candidates: int = 32):
    """Points ``a != b`` in the disc with ``phi(a) == phi(b)``, or ``None``."""
    xs = np.linspace(-radius, radius, grid)
    Z = (xs[:, None] + 1j * xs[None, :]).ravel()
    z = Z[np.abs(Z) < radius]
    w = phi(z)
    gap = np.abs(w[:, None] - w[None, :])
    sep = np.abs(z[:, None] - z[None, :])
    gap[sep < 0.05] = np.inf
    order = np.argsort(gap, axis=None)[: 2 * candidates]
    dphi = phi.derivative()
    for flat in order:
        i, j = np.unravel_index(flat, gap.shape)
        a, b = complex(z[i]), complex(z[j])
        target = complex(phi(a))
        for _ in range(60):
            slope = complex(dphi(b))
            if slope == 0:
                break
            step = (complex(phi(b)) - target) / slope
            b -= step
            if abs(step) < 1e-15 or abs(b) >= 1:
                break
        if (abs(b) < 1 and abs(a - b) > 1e-6
                and abs(complex(phi(b)) - target) <= 1e-12 * (1 + abs(target))):
            return a, b
    return None


def is_normal(W: WcoSpec, N: int = DEFAULT_N, tol: float = DEFAULT_TOL) -> Report:
    """Normality test: exact certificates first, commutator defect otherwise."""
    from . import synthesis  # circular at import time

    def report(verdict, certificate, defect=None, **detail):
        if defect is None:
            defect = commutator_defect(W, N)
        return Report(verdict, float(defect), tol, certificate, N, detail)

    if _weight_is_zero(W.psi):
        return report("normal", "zero-weight", 0.0)
    zero = _weight_zero_in_disc(W.psi)
    if zero is not None:
        return report("not_normal", "kernel-zero", zero=S.to_pair(zero))

    psi = _as_lft(W.psi)
    phi = W.phi if isinstance(W.phi, MobiusMap) else None
    if psi is not None and phi is not None:
        pair = synthesis.LftWco(psi, phi)
        cls = classify(phi)
        if cls.name in ("Identity", "Constant", "InteriorDW", "EllipticAutomorphism"):
            match = synthesis.matches_ifpn(pair)
            verdict = "normal" if match.matches else "not_normal"
            return report(verdict, "exact-IFPN", p=S.to_pair(match.p),
                          delta=S.to_pair(match.delta), gamma=S.to_pair(match.gamma))
        if synthesis.has_fwf_weight(pair):
            ok = synthesis.lfs_condition(phi)
            return report("normal" if ok else "not_normal", "exact-LFS")

    if isinstance(W.phi, TaylorPoly) and W.phi.degree() >= 2:
        witness = find_nonunivalence_witness(W.phi)
        if witness is not None:
            a, b = witness
            return report("not_normal", "non-univalence",
                          witness=[S.to_pair(a), S.to_pair(b)])

    defect = commutator_defect(W, N)
    scale = float(np.linalg.norm(finite_section(W, N), 2)) ** 2
    threshold = tol * max(scale, np.finfo(float).tiny)
    if defect <= threshold:
        verdict = "normal"
    elif defect <= 10 * threshold:
        verdict = "inconclusive"
    else:
        verdict = "not_normal"
    return report(verdict, "commutator", defect, scale=scale)


def is_unitary(W: WcoSpec, N: int = DEFAULT_N, tol: float = DEFAULT_TOL) -> Report:
    """Unitarity: exact kernel-form test for linear fractional symbols, Gram defect otherwise."""
    psi = _as_lft(W.psi)
    phi = W.phi if isinstance(W.phi, MobiusMap) else None
    if psi is not None and phi is not None:
        defect = max(unitarity_defect(W, N))
        if phi.is_constant or not is_automorphism(phi):
            return Report("not_unitary", defect, tol, "not-automorphism", N)
        beta = inverse(phi)(0)
        psi_beta = psi(beta)
        if S.is_zero(psi_beta):
            return Report("not_unitary", defect, tol, "kernel-form", N)
        expected = MobiusMap.kernel(beta) * (1 / S.conj(psi_beta))
        ok = psi.equals(expected)
        return Report("unitary" if ok else "not_unitary", defect, tol,
                      "exact-automorphism" if ok else "kernel-form", N,
                      {"beta": S.to_pair(beta)})
    defect = max(unitarity_defect(W, N))
    if defect <= tol:
        return Report("unitary", defect, tol, "gram", N)
    verdict = "inconclusive" if defect <= 10 * tol else "not_unitary"
    return Report(verdict, defect, tol, "gram", N)


def is_hermitian(W: WcoSpec, N: int = DEFAULT_N, tol: float = DEFAULT_TOL) -> Report:
    A = finite_section(W, N)
    defect = hermitian_defect(W, N)
    threshold = tol * float(np.linalg.norm(A, 2))
    if defect <= threshold:
        return Report("hermitian", defect, tol, "section", N)
    verdict = "inconclusive" if defect <= 10 * threshold else "not_hermitian"
    return Report(verdict, defect, tol, "section", N)


# --------------------------------------------------------------------------
# export


def _fmt(x: float) -> str:
    return format(x, ".17g")


def matrix_to_csv(A: np.ndarray) -> str:
    """Row-major CSV with entries written as ``re+imj``."""
    lines = []
    for row in np.asarray(A):
        cells = []
        for z in row:
            im = _fmt(z.imag + 0.0)
            sign = "" if im.startswith("-") else "+"
            cells.append(f"{_fmt(z.real + 0.0)}{sign}{im}j")
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
