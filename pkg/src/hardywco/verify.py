"""Battery of theorem checks run by ``hardywco verify``.

Each check returns a :class:`CheckResult`; the randomised ones draw from a
``numpy`` generator seeded by the caller so runs are reproducible.
"""

from __future__ import annotations

import cmath
import json
from dataclasses import dataclass, field
from typing import Callable, Dict, List

import numpy as np

from . import scalars as S
from .hardy import TaylorPoly, boundary_norm_check, h2_norm, kernel_at, taylor_of_lft
from .mobius import (
    MobiusMap,
    alpha,
    canonical_hyperbolic,
    canonical_parabolic,
    compose,
    inverse,
)
from .operators import (
    WcoSpec,
    adjoint_on_kernel,
    commutator_defect,
    finite_section,
    is_normal,
    is_unitary,
    unitarity_defect,
)
from .spectrum import (
    KernelOrbit,
    bbc_numeric_check,
    bbc_residual_sq,
    hausdorff,
    predict_spectrum,
    section_eigenvalues,
)
from .synthesis import (
    LftWco,
    conjugation_check,
    lfs_condition,
    matches_ifpn,
    normal_pair_interior,
    unitary_pair,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: Dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "pass": self.passed, **self.detail}


# --------------------------------------------------------------------------
# random generators


def random_disc_point(rng: np.random.Generator, rmax: float = 0.9) -> complex:
    r = rmax * np.sqrt(rng.uniform())
    return complex(r * np.exp(2j * np.pi * rng.uniform()))


def random_selfmap(rng: np.random.Generator) -> MobiusMap:
    """``zeta * alpha_a(r * alpha_b(z))`` with ``r`` in (0, 1]; a disc selfmap."""
    zeta = cmath.exp(2j * np.pi * rng.uniform())
    r = rng.uniform(0.2, 1.0)
    a, b = random_disc_point(rng, 0.8), random_disc_point(rng, 0.8)
    return compose(MobiusMap.linear(zeta), compose(alpha(a), compose(MobiusMap.linear(r), alpha(b))))


def random_weight(rng: np.random.Generator) -> MobiusMap:
    """Bounded linear fractional weight ``(u z + v) / (1 - conj(w) z)``."""
    u = complex(*rng.normal(size=2))
    v = complex(*rng.normal(size=2))
    w = random_disc_point(rng, 0.9)
    return MobiusMap(u, v, -np.conj(w), 1)


def random_automorphism(rng: np.random.Generator) -> MobiusMap:
    return compose(MobiusMap.linear(cmath.exp(2j * np.pi * rng.uniform())),
                   alpha(random_disc_point(rng, 0.95)))


# --------------------------------------------------------------------------
# invariant suites


def mobius_roundtrip_suite(seed: int = 0, cases: int = 1000) -> CheckResult:
    """Inverse, composition and JSON round trips on random selfmaps and automorphisms."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    failures = 0
    ident = MobiusMap.identity()
    for k in range(cases):
        m = random_selfmap(rng) if k % 2 else random_automorphism(rng)
        inv = inverse(m)
        ok = compose(m, inv).equals(ident, 1e-10) and compose(inv, m).equals(ident, 1e-10)
        ok = ok and inverse(inv).equals(m, 1e-10)
        ok = ok and MobiusMap.from_json(json.loads(json.dumps(m.to_json()))).equals(m, 0)
        z = random_disc_point(rng, 0.99)
        err = abs(complex(inv(m(z))) - z)
        worst = max(worst, err)
        if not ok or err > 1e-9:
            failures += 1
    return CheckResult("mobius-roundtrip", failures == 0,
                       {"cases": cases, "failures": failures, "max_point_error": worst})


def hardy_parseval_suite(seed: int = 0, cases: int = 1000) -> CheckResult:
    """Boundary quadrature of ``|f|^2`` equals the coefficient energy."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(cases):
        order = int(rng.integers(0, 48))
        f = TaylorPoly(rng.normal(size=order + 1) + 1j * rng.normal(size=order + 1))
        M = 2 * order + 1 + int(rng.integers(0, 64))
        quad = boundary_norm_check(f, M)
        exact = h2_norm(f) ** 2
        worst = max(worst, abs(quad - exact) / exact)
    return CheckResult("hardy-parseval", worst <= 1e-12, {"cases": cases, "max_rel_error": worst})


# --------------------------------------------------------------------------
# theorem checks


def check_wrkl(seed: int = 0, pairs: int = 20, N: int = 64) -> CheckResult:
    """Exact kernel adjoint against the conjugate-transposed section."""
    rng = np.random.default_rng(seed)
    worst_ratio = 0.0
    for _ in range(pairs):
        W = WcoSpec(random_weight(rng), random_selfmap(rng))
        beta = random_disc_point(rng, 0.7)
        A = finite_section(W, N)
        kb = np.conj(beta) ** np.arange(N)
        via_section = A.conj().T @ kb
        via_kernel = adjoint_on_kernel(W, kernel_at(beta)).taylor(N - 1).coeffs
        psi_norm = h2_norm(taylor_of_lft(W.psi, 2048))
        bound = abs(beta) ** 32 * psi_norm + 1e-8
        err = float(np.linalg.norm(via_section - via_kernel))
        worst_ratio = max(worst_ratio, err / bound)
    return CheckResult("WRKL", worst_ratio < 1, {"pairs": pairs, "worst_error_over_bound": worst_ratio})


UNITARY_BETAS = [0, 0.3, 0.5j, -0.6, 0.8, 0.4 + 0.4j, -0.5 - 0.5j, 0.7j, 0.2 - 0.6j]


def grid_automorphisms() -> List[MobiusMap]:
    """Nine automorphisms ``zeta * alpha_beta`` with ``|beta| <= 0.8``."""
    out = []
    for k, beta in enumerate(UNITARY_BETAS):
        zeta = cmath.exp(2j * np.pi * k / 9)
        phi = compose(MobiusMap.linear(zeta), alpha(beta)) if beta else MobiusMap.linear(zeta)
        out.append(phi)
    return out


def check_uwco(N: int = 64, tol: float = 1e-8) -> CheckResult:
    worst = 0.0
    for phi in grid_automorphisms():
        for c in (1, 1j):
            W = unitary_pair(phi, c).wco()
            worst = max(worst, *unitarity_defect(W, N))
    necessity = is_unitary(WcoSpec(1, alpha(0.5)), N, tol).verdict == "not_unitary"
    return CheckResult("UWCO", worst < tol and necessity,
                       {"max_gram_defect": worst, "psi_one_alpha_half_rejected": necessity})


def check_sct_a(N: int = 64) -> CheckResult:
    """Elliptic unitaries: predicted orbit lies on the unit circle."""
    worst = 0.0
    ok = True
    for p, zeta in [(0.5, 1j), (0.3 + 0.4j, cmath.exp(0.7j)), (-0.6j, -1)]:
        ap = alpha(p)
        phi = compose(ap, compose(MobiusMap.linear(zeta), ap))
        pred = predict_spectrum(unitary_pair(phi, 1j), N)
        ok = ok and isinstance(pred, KernelOrbit)
        if isinstance(pred, KernelOrbit):
            worst = max(worst, abs(abs(pred.gamma) - 1), abs(abs(pred.delta) - 1))
    return CheckResult("SCT-a", ok and worst < 1e-12, {"max_unimodularity_error": worst})


def check_sct_b_bbc() -> CheckResult:
    s = 1.2
    closed = 2 - 8 * (s + 1) ** 2 / (4 * (s + 1) ** 2 + 4 * (s - 1) ** 2)
    formula_ok = abs(bbc_residual_sq(2j, s) - closed) < 1e-14
    small = bbc_residual_sq(2j, 1.01)
    small_ok = abs(small - 4.95e-5) < 5e-7
    numeric = bbc_numeric_check(2j, s, -1.0, 256)
    gap = abs(numeric - np.sqrt(closed))
    return CheckResult("SCT-b-BBC", formula_ok and small_ok and gap < 5e-3,
                       {"rho_1.01": small, "residual": numeric, "closed_form": float(np.sqrt(closed)),
                        "gap": gap})


def check_cnwco(N: int = 64) -> CheckResult:
    """Round trip of the interior normal form, normality of its output, and the 0-fixed corollary."""
    round_trip = True
    worst = 0.0
    for p in (0, 0.5, 0.3 + 0.4j, -0.8, 0.6j):
        for delta in (0, 0.5, 0.9j, -1, cmath.exp(1j)):
            for gamma in (1, 1j, 2):
                pair = normal_pair_interior(p, delta, gamma)
                m = matches_ifpn(pair)
                round_trip &= bool(m.matches) and abs(complex(m.p) - p) < 1e-9 \
                    and abs(complex(m.delta) - delta) < 1e-9 and abs(complex(m.gamma) - gamma) < 1e-9
                if delta != 0:
                    W = pair.wco()
                    scale = np.linalg.norm(finite_section(W, N), 2) ** 2
                    worst = max(worst, commutator_defect(W, N) / scale)
    constant_ok = is_normal(WcoSpec(2, MobiusMap.linear(0.5)), N).verdict == "normal"
    kernel_rejected = not matches_ifpn(LftWco(MobiusMap.kernel(0.3), MobiusMap.linear(0.5))).matches
    passed = round_trip and worst < 1e-8 and constant_ok and kernel_rejected
    return CheckResult("CNWCO", passed, {"round_trip": round_trip, "max_rel_commutator": worst,
                                         "constant_weight_normal": constant_ok,
                                         "kernel_weight_rejected": kernel_rejected})


CONJ_P = [0, 0.5, 0.3 + 0.4j, -0.8, 0.8j]
CONJ_DELTA = [0.5, 0.9j, -0.9]
CONJ_UNIMODULAR = [1, 1j, -1, cmath.exp(0.25j * np.pi)]


def check_fcry(N: int = 64) -> CheckResult:
    inner = max(conjugation_check(p, d, N) for p in CONJ_P for d in CONJ_DELTA)
    boundary = max(conjugation_check(p, d, N) for p in CONJ_P for d in CONJ_UNIMODULAR)
    return CheckResult("FCRY", inner < 1e-8 and boundary < 1e-6,
                       {"max_defect_delta_le_0.9": inner, "max_defect_delta_eq_1": boundary})


def check_scnifp() -> CheckResult:
    exact = True
    for delta in (0.5, 0.9j, 1):
        d = S.exact(delta)
        A = finite_section(WcoSpec(1, MobiusMap.linear(d)), 8, exact=True)
        exact &= bool(np.array_equal(A, np.diag([complex(d ** n) for n in range(8)])))
    W = normal_pair_interior(0.5, 0.5, 1).wco()
    dists = []
    for N in (16, 32, 64):
        target = np.append(0.5 ** np.arange(N), 0)
        dists.append(hausdorff(section_eigenvalues(W, N), target))
    monotone = all(b <= a for a, b in zip(dists, dists[1:]))
    return CheckResult("SCNIFP", exact and dists[-1] < 1e-4 and monotone,
                       {"diagonal_exact": exact, "hausdorff": dists, "monotone": monotone})


PARABOLIC_T = [1, 2, S.parse_scalar("2+i"), S.parse_scalar("2i")]
HYPERBOLIC_RT = [(r, t) for r in (S.parse_scalar("1.5"), 2, 4)
                 for t in (S.parse_scalar("0.1"), 1, S.parse_scalar("0.5+i"), S.parse_scalar("2-3i"))]


def check_rlfc_parabolic() -> CheckResult:
    results = [lfs_condition(canonical_parabolic(t)) for t in PARABOLIC_T]
    return CheckResult("RLFC-parabolic", all(results), {"cases": len(results)})


def check_rlfc_hyperbolic() -> CheckResult:
    results = [lfs_condition(canonical_hyperbolic(r, t)) for r, t in HYPERBOLIC_RT]
    return CheckResult("RLFC-hyperbolic", not any(results), {"cases": len(results)})


def check_mnz(N: int = 64) -> CheckResult:
    psi = MobiusMap(1, S.parse_scalar("-0.3"), 0, 1)
    ok = True
    for phi in (alpha(0.5), MobiusMap.linear(0.5), canonical_parabolic(1), TaylorPoly([0, 0, 1])):
        rep = is_normal(WcoSpec(psi, phi), N)
        ok &= rep.verdict == "not_normal" and rep.certificate == "kernel-zero"
    return CheckResult("MNZ", ok, {})


def check_wupu() -> CheckResult:
    W = WcoSpec(1, TaylorPoly([0, 0, 1]))
    defects = [commutator_defect(W, N) for N in (16, 32, 64)]
    return CheckResult("WUPU", min(defects) > 0.01, {"defects": defects})


def theorem_checks(seed: int = 0, N: int = 64, tol: float = 1e-8) -> List[Callable[[], CheckResult]]:
    return [
        lambda: check_wrkl(seed, N=N),
        lambda: check_uwco(N, tol),
        lambda: check_sct_a(N),
        check_sct_b_bbc,
        lambda: check_cnwco(N),
        lambda: check_fcry(N),
        check_scnifp,
        check_rlfc_parabolic,
        check_rlfc_hyperbolic,
        lambda: check_mnz(N),
        check_wupu,
    ]


def run_all(seed: int = 0, N: int = 64, tol: float = 1e-8, cases: int = 1000) -> dict:
    theorems = [check() for check in theorem_checks(seed, N, tol)]
    invariants = [mobius_roundtrip_suite(seed, cases), hardy_parseval_suite(seed, cases)]
    return {
        "theorems": [r.to_json() for r in theorems],
        "invariants": [r.to_json() for r in invariants],
        "passed": sum(r.passed for r in theorems),
        "total": len(theorems),
        "ok": all(r.passed for r in theorems + invariants),
    }
