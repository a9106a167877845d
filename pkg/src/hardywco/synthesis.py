"""Constructors for unitary and normal linear fractional pairs, and exact
equality tests between weighted composition operators with linear fractional
data.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np

from . import scalars as S
from .errors import (
    DeltaTooLarge,
    NoInteriorFixedPoint,
    NotAutomorphism,
    NotSelfmap,
    NotUnimodular,
    PointNotInDisc,
    UnboundedWeight,
)
from .mobius import (
    MobiusMap,
    alpha,
    canonical_parabolic,
    classify,
    compose,
    cowen_aux,
    inverse,
    is_automorphism,
    is_disc_selfmap,
)
from .operators import WcoSpec, _rel, _widen, finite_section, section

NUMERIC_EQ_TOL = 1e-10


@dataclass(frozen=True)
class LftWco:
    """A weight ``num/den`` (both of degree <= 1) paired with a Mobius symbol."""

    weight: MobiusMap
    symbol: MobiusMap

    def __post_init__(self):
        if not isinstance(self.weight, MobiusMap):
            object.__setattr__(self, "weight", MobiusMap.constant(self.weight))
        if not self.weight.pole_outside_closed_disc():
            raise UnboundedWeight(f"weight pole {self.weight.pole()} lies in the closed disc")
        sym = self.symbol
        if sym.is_constant:
            if not abs(complex(sym.value)) < 1:
                raise NotSelfmap("constant symbol must lie in the disc")
        elif not is_disc_selfmap(sym):
            raise NotSelfmap(f"{sym!r} is not a disc selfmap")

    @property
    def exact(self) -> bool:
        return self.weight.exact and self.symbol.exact

    def wco(self) -> WcoSpec:
        return WcoSpec(self.weight, self.symbol)

    def to_json(self) -> dict:
        return {
            "weight": {"num": [S.to_pair(x) for x in self.weight.num],
                       "den": [S.to_pair(x) for x in self.weight.den]},
            "symbol": self.symbol.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "LftWco":
        w = data["weight"]
        weight = MobiusMap.from_ratio([S.from_pair(v) for v in w["num"]],
                                      [S.from_pair(v) for v in w.get("den", [[1, 0]])])
        return cls(weight, MobiusMap.from_json(data["symbol"]))


def _unimodular(c) -> bool:
    if S.is_exact(c):
        return S.abs2(c) == 1
    return abs(abs(complex(c)) - 1) <= S.COEFF_TOL


def unitary_pair(phi: MobiusMap, c=1) -> LftWco:
    """The unitary pair ``(c K_beta / ||K_beta||, phi)`` with ``phi(beta) = 0``."""
    c = S.as_scalar(c)
    if not _unimodular(c):
        raise NotUnimodular(f"|c| must be 1, got {abs(complex(c))}")
    if not is_automorphism(phi):
        raise NotAutomorphism(f"{phi!r} is not a disc automorphism")
    beta = inverse(phi)(0)
    scale = c * S.sqrt(1 - S.abs2(beta))
    return LftWco(MobiusMap.kernel(beta) * scale, phi)


def _check_disc_point(p):
    p = S.as_scalar(p)
    inside = S.abs2(p) < 1 if S.is_exact(p) else abs(p) < 1
    if not inside:
        raise PointNotInDisc(f"|p| must be < 1, got {p}")
    return p


def normal_pair_interior(p, delta, gamma=1) -> LftWco:
    """Normal pair with interior fixed point ``p``, ``phi'(p) = delta``, ``psi(p) = gamma``.

    ``delta = 0`` gives the constant symbol ``phi == p`` (a rank-one operator).
    """
    p = _check_disc_point(p)
    delta = S.as_scalar(delta)
    gamma = S.as_scalar(gamma)
    too_big = S.abs2(delta) > 1 if S.is_exact(delta) else abs(delta) > 1 + S.COEFF_TOL
    if too_big:
        raise DeltaTooLarge(f"|delta| must be <= 1, got {abs(complex(delta))}")
    pp = S.abs2(p)
    pc = S.conj(p)
    phi = MobiusMap(delta - pp, p * (1 - delta), pc * (delta - 1), 1 - pp * delta)
    psi = MobiusMap(0, gamma * (1 - pp), -pc * (1 - delta), 1 - pp * delta)
    return LftWco(psi, phi)


def normal_pair_parabolic(t, rho=1) -> LftWco:
    """``(rho K_{sigma(0)}, canonical_parabolic(t))`` with ``sigma`` the Cowen auxiliary map."""
    phi = canonical_parabolic(t)
    sigma0 = cowen_aux(phi).sigma(0)
    return LftWco(MobiusMap.kernel(sigma0) * S.as_scalar(rho), phi)


class IfpnMatch(NamedTuple):
    matches: bool
    p: object
    delta: object
    gamma: object


def _interior_fixed_point(phi: MobiusMap):
    if phi.is_constant:
        return phi.value, 0
    if phi.is_identity:
        return 0, 1
    cls = classify(phi)
    if cls.name not in ("InteriorDW", "EllipticAutomorphism"):
        raise NoInteriorFixedPoint(f"{cls.name} symbol has no fixed point in the disc")
    return cls.p, cls.derivative


def matches_ifpn(W: LftWco) -> IfpnMatch:
    """Does ``W`` have the normal form for a symbol fixing ``p`` in the disc?

    ``p``, ``delta = phi'(p)`` and ``gamma = psi(p)`` are read off ``W`` and the
    pair is compared with :func:`normal_pair_interior` at those values.
    """
    p, delta = _interior_fixed_point(W.symbol)
    gamma = W.weight(p)
    model = normal_pair_interior(p, delta, gamma)
    ok = operator_equality_lft(W.weight, W.symbol, model.weight, model.symbol)
    return IfpnMatch(ok, p, delta, gamma)


def has_fwf_weight(W: LftWco) -> bool:
    """Is the weight a nonzero multiple of ``K_{sigma(0)}``?"""
    phi = W.symbol
    if phi.is_constant or not is_disc_selfmap(phi):
        return False
    psi0 = W.weight(0)
    if S.is_zero(psi0):
        return False
    expected = MobiusMap.kernel(cowen_aux(phi).sigma(0)) * psi0
    return W.weight.equals(expected)


def lfs_sides(phi: MobiusMap) -> Tuple[Tuple[MobiusMap, MobiusMap], Tuple[MobiusMap, MobiusMap]]:
    """``((w_left, sigma o phi), (w_right, phi o sigma))`` for ``psi = K_{sigma(0)}``."""
    if phi.is_constant or not is_disc_selfmap(phi):
        raise NotSelfmap("the commutation comparison needs a nonconstant disc selfmap")
    a, b, c, d = phi.coefficients
    ac, bc, cc, dc = (S.conj(x) for x in (a, b, c, d))
    dd = S.abs2(d)
    left_w = MobiusMap(0, dd, -(bc * a - dc * c), dd - S.abs2(b))
    right_w = MobiusMap(0, dd, -(bc * d - c * ac), dd - S.abs2(c))
    sigma = cowen_aux(phi).sigma
    return (left_w, compose(sigma, phi)), (right_w, compose(phi, sigma))


def lfs_condition(phi: MobiusMap) -> bool:
    """Normality of ``W_{K_sigma(0), phi}`` decided by comparing ``W^*W`` with ``WW^*``."""
    (lw, ls), (rw, rs) = lfs_sides(phi)
    return operator_equality_lft(lw, ls, rw, rs)


def operator_equality_lft(w1: MobiusMap, tau1: MobiusMap, w2: MobiusMap, tau2: MobiusMap,
                          mode: Optional[str] = None) -> bool:
    """``W_{w1,tau1} == W_{w2,tau2}``, i.e. equal weights and equal symbols.

    ``mode="exact"`` compares coefficients exactly (floats at their binary
    value); ``"numeric"`` allows 1e-10 on normalised coefficients.  The
    default is exact when every coefficient is rational.
    """
    if mode is None:
        mode = "exact" if all(m.exact for m in (w1, tau1, w2, tau2)) else "numeric"
    if mode not in ("exact", "numeric"):
        raise ValueError(f"mode must be 'exact' or 'numeric', got {mode!r}")
    tol = 0 if mode == "exact" else NUMERIC_EQ_TOL
    return w1.equals(w2, tol) and tau1.equals(tau2, tol)


def conjugation_check(p, delta, N: int = 64, inner: Optional[int] = None) -> float:
    """Central-block norm of ``U C_{delta z} U^* - W_{psi, phi}`` for the normal pair at ``(p, delta)``.

    ``U = W_{K_p/||K_p||, alpha_p}`` and ``U^* = ||K_p||^{-1} M_g C_{alpha_p}``
    with ``g = 1/(1 - conj(p) z)``.
    """
    if N < 16:
        raise ValueError("conjugation_check needs N >= 16")
    p = _check_disc_point(p)
    target = normal_pair_interior(p, delta, 1)
    delta = complex(delta)
    ap = alpha(p)
    mu = np.sqrt(1 - abs(complex(p)) ** 2)
    U = WcoSpec(MobiusMap.kernel(p) * complex(mu), ap)
    g = MobiusMap(0, 1, -S.conj(p), 1)
    Ustar = WcoSpec(g * complex(mu), ap)
    h = N // 2

    def build(M):
        # repeated products, matching how sections form powers of delta
        powers = np.cumprod(np.r_[1, np.full(M - 1, delta)])
        return section(U, h, M) * powers, section(Ustar, M, h)

    def tail(X, M):
        R, C = X
        return _rel(np.linalg.norm(R[:, M // 2:]) * np.linalg.norm(C[M // 2:, :]),
                    np.linalg.norm(R) * np.linalg.norm(C))

    (R, C), _ = _widen(build, tail, 2 * N, inner)
    P = R @ C
    A = finite_section(target.wco(), N)[:h, :h]
    return float(np.linalg.norm(P - A, 2))
