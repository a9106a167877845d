import cmath
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardywco.errors import NotSelfmap, UnboundedWeight
from hardywco.hardy import TaylorPoly, h2_norm, kernel_at, series_mul, taylor_of_lft
from hardywco.mobius import MobiusMap, alpha, canonical_parabolic, compose
from hardywco.operators import (
    Report,
    WcoSpec,
    adjoint_on_kernel,
    column_gram,
    commutator_defect,
    cowen_adjoint_section,
    find_nonunivalence_witness,
    finite_section,
    hermitian_defect,
    is_hermitian,
    is_normal,
    is_unitary,
    matrix_to_csv,
    row_gram,
    section,
    unitarity_defect,
)
from hardywco.scalars import parse_scalar
from hardywco.synthesis import normal_pair_interior, normal_pair_parabolic, unitary_pair


def block(A, N):
    return A[: N // 2, : N // 2]


def test_spec_validation():
    with pytest.raises(NotSelfmap):
        WcoSpec(1, MobiusMap.linear(2))
    with pytest.raises(NotSelfmap):
        WcoSpec(1, TaylorPoly([0, 0.8, 0.5]))
    with pytest.raises(UnboundedWeight):
        WcoSpec(MobiusMap(0, 1, -1, 1), MobiusMap.identity())
    assert WcoSpec(1, alpha(0.5)).mode == "exact"
    assert WcoSpec(TaylorPoly([1, 2]), alpha(0.5)).mode == "numeric"


def test_diagonal_section():
    d = 0.3 - 0.6j
    A = finite_section(WcoSpec(1, MobiusMap.linear(d)), 4)
    assert np.array_equal(A, np.diag(d ** np.arange(4)))


def test_scalar_identity_section():
    g = 2 - 1j
    assert np.array_equal(finite_section(WcoSpec(g, MobiusMap.identity()), 6), g * np.eye(6))


def test_unitary_section_by_hand():
    psi = MobiusMap.kernel(0.5) * np.sqrt(0.75)
    A = finite_section(WcoSpec(psi, alpha(0.5)), 2)
    r = np.sqrt(0.75)
    assert np.allclose(A, r * np.array([[1, 0.5], [0.5, -0.75 + 0.25]]), atol=1e-15)


def test_section_columns_are_weighted_powers():
    W = WcoSpec(MobiusMap(0.2, 1, -0.3j, 1), alpha(0.4 + 0.1j))
    A = finite_section(W, 12)
    psi = taylor_of_lft(W.psi, 11)
    phi = taylor_of_lft(W.phi, 11)
    col = psi
    for n in range(12):
        assert np.allclose(A[:, n], col.coeffs, atol=1e-14)
        col = series_mul(col, phi, 11)


def test_exact_section_matches_numeric():
    W = WcoSpec(MobiusMap(1, F(1, 3), F(-1, 4), 1), alpha(F(1, 5)))
    assert np.allclose(finite_section(W, 16, exact=True), finite_section(W, 16), atol=1e-13)


def test_adjoint_on_kernel_examples():
    phi = alpha(0.3j)
    v = kernel_at(0.4 - 0.2j, 2)
    out = adjoint_on_kernel(WcoSpec(1, phi), v)
    assert out.terms == ((2, complex(phi(0.4 - 0.2j))),)
    psi = MobiusMap(1, -0.5, 0, 1)
    assert adjoint_on_kernel(WcoSpec(psi, phi), kernel_at(0.5)).is_zero()
    beta = 0.5
    U = unitary_pair(alpha(beta), 1).wco()
    image = adjoint_on_kernel(U, kernel_at(beta))
    (w, pt), = image.terms
    assert pt == 0 and w == pytest.approx(np.conj(U.psi_at(beta)))
    # W (conj(psi(beta)) K_0) = K_beta
    back = w * taylor_of_lft(U.psi, 40).coeffs
    assert np.allclose(back, kernel_at(beta).taylor(40).coeffs, atol=1e-14)


def test_cowen_adjoint_section_examples():
    d = 0.5 + 0.25j
    A = finite_section(WcoSpec(1, MobiusMap.linear(d)), 16)
    assert np.allclose(cowen_adjoint_section(MobiusMap.linear(d), 16), A.conj().T, atol=0)
    for phi in (alpha(0.5), MobiusMap(1, 1, 0, 2)):
        C = cowen_adjoint_section(phi, 64)
        A = finite_section(WcoSpec(1, phi), 64)
        assert np.linalg.norm(block(C - A.conj().T, 64), 2) < 1e-8


def test_commutator_defect_examples():
    assert commutator_defect(WcoSpec(3j, MobiusMap.linear(0.5)), 32) == 0
    for N in (16, 24, 64):
        assert commutator_defect(WcoSpec(1, TaylorPoly([0, 0, 1])), N) > 0.01
    assert commutator_defect(normal_pair_interior(0.5, 0.5, 1).wco(), 64) < 1e-8


def test_square_section_commutator_is_weaker():
    # the plain square-section product leaves an edge error that the widened product removes
    W = unitary_pair(alpha(0.5), 1).wco()
    assert commutator_defect(W, 64) < 1e-12
    assert max(unitarity_defect(W, 64, inner=64)) > 0.5


def test_is_normal_examples():
    r = is_normal(WcoSpec(MobiusMap(1, -0.3, 0, 1), alpha(0.5)))
    assert (r.verdict, r.certificate) == ("not_normal", "kernel-zero")
    r = is_normal(WcoSpec(TaylorPoly([-0.3, 1]), TaylorPoly([0, 0.2, 0.3])))
    assert (r.verdict, r.certificate) == ("not_normal", "kernel-zero")
    r = is_normal(WcoSpec(1, MobiusMap.linear(0.7j)))
    assert r.verdict == "normal" and r.certificate == "exact-IFPN"
    r = is_normal(normal_pair_parabolic(2).wco())
    assert (r.verdict, r.certificate) == ("normal", "exact-LFS")
    assert is_normal(WcoSpec(0, alpha(0.2))).verdict == "normal"


def test_is_normal_series_paths():
    r = is_normal(WcoSpec(1, TaylorPoly([0, 0, 1])))
    assert (r.verdict, r.certificate) == ("not_normal", "non-univalence")
    a, b = r.detail["witness"]
    assert abs(complex(*a) ** 2 - complex(*b) ** 2) < 1e-12
    r = is_normal(WcoSpec(1, TaylorPoly([0, 0.5, 0.2])))
    assert (r.verdict, r.certificate) == ("not_normal", "commutator")
    r = is_normal(WcoSpec(TaylorPoly([2]), TaylorPoly([0, 0.5j])))
    assert (r.verdict, r.certificate) == ("normal", "commutator")


def test_witness_search():
    assert find_nonunivalence_witness(TaylorPoly([0, 0.5, 0.2])) is None
    a, b = find_nonunivalence_witness(TaylorPoly([0.1, 0, 0, 0.9]))
    assert abs(a - b) > 1e-6 and abs(0.9 * a ** 3 - 0.9 * b ** 3) < 1e-12


def test_is_unitary_examples():
    zeta = cmath.exp(0.4j)
    r = is_unitary(WcoSpec(1, MobiusMap.linear(zeta)))
    assert r.verdict == "unitary"
    beta = 0.5
    psi = MobiusMap.kernel(beta) * np.sqrt(1 - beta ** 2)
    assert is_unitary(WcoSpec(psi, alpha(beta))).verdict == "unitary"
    r = is_unitary(WcoSpec(1, alpha(0.5)))
    assert r.verdict == "not_unitary" and r.certificate == "kernel-form"
    assert is_unitary(WcoSpec(1, MobiusMap.linear(0.5))).verdict == "not_unitary"
    # numeric path with a series weight
    assert is_unitary(WcoSpec(TaylorPoly([1j]), TaylorPoly([0, 1]))).verdict == "unitary"


def test_is_hermitian_examples():
    assert is_hermitian(WcoSpec(2.5, MobiusMap.linear(-0.4))).verdict == "hermitian"
    assert is_hermitian(WcoSpec(1j, MobiusMap.identity())).verdict == "not_hermitian"
    r = is_hermitian(WcoSpec(1, alpha(0.5)), 32)
    assert r.verdict == "not_hermitian" and r.defect > 0.01
    assert hermitian_defect(WcoSpec(1, alpha(0.5)), 32) == r.defect


def test_report_invariants():
    with pytest.raises(ValueError):
        Report("not_normal", 1.0, 1e-8, "", 64)
    with pytest.raises(ValueError):
        Report("normal", -1.0, 1e-8, "commutator", 64)
    r = Report("normal", 0.0, 1e-8, "commutator", 64)
    assert set(r.to_json()) == {"verdict", "defect", "tolerance", "certificate", "N"}


def test_csv_export():
    A = np.array([[1 + 2j, -0.5j], [0.25, -1 - 1j]])
    text = matrix_to_csv(A)
    assert text == "1+2j,0-0.5j\n0.25+0j,-1-1j\n"
    back = np.array([[complex(c) for c in line.split(",")] for line in text.splitlines()])
    assert np.array_equal(back, A)


def test_grams_are_hermitian_psd():
    W = WcoSpec(MobiusMap(0.3, 1, 0.2j, 1), canonical_parabolic(parse_scalar("1+i")))
    for Gm in (column_gram(W, 16), row_gram(W, 16)):
        assert np.allclose(Gm, Gm.conj().T, atol=1e-13)
        assert np.linalg.eigvalsh(Gm).min() > -1e-12


# -- invariants ----------------------------------------------------------

disc = st.complex_numbers(max_magnitude=0.8, allow_nan=False, allow_infinity=False)


@st.composite
def lft_operators(draw):
    zeta = cmath.exp(1j * draw(st.floats(0, 6.28)))
    r = draw(st.floats(0.2, 1.0))
    phi = compose(MobiusMap.linear(zeta), compose(alpha(draw(disc)), compose(MobiusMap.linear(r), alpha(draw(disc)))))
    w = draw(st.complex_numbers(max_magnitude=0.85, allow_nan=False))
    psi = MobiusMap(draw(st.complex_numbers(max_magnitude=2, allow_nan=False)),
                    draw(st.complex_numbers(max_magnitude=2, allow_nan=False)), -np.conj(w), 1)
    return WcoSpec(psi, phi)


@settings(max_examples=40, deadline=None)
@given(lft_operators(), disc)
def test_adjoint_consistency(W, beta):
    N = 64
    A = finite_section(W, N)
    via_section = A.conj().T @ (np.conj(beta) ** np.arange(N))
    via_kernel = adjoint_on_kernel(W, kernel_at(beta)).taylor(N - 1).coeffs
    psi_norm = h2_norm(taylor_of_lft(W.psi, 4096))
    assert np.linalg.norm(via_section - via_kernel) <= psi_norm * abs(beta) ** (N // 2) + 1e-8


@settings(max_examples=20, deadline=None)
@given(disc, st.floats(0, 6.28), st.sampled_from([1, 1j, -1]))
def test_exact_unitary_certificate_is_involutive(beta, theta, c):
    phi = compose(MobiusMap.linear(cmath.exp(1j * theta)), alpha(beta))
    W = unitary_pair(phi, c).wco()
    r = is_unitary(W, 64)
    assert r.certificate == "exact-automorphism"
    assert max(unitarity_defect(W, 64)) < 1e-8


@pytest.mark.parametrize("W", [
    WcoSpec(MobiusMap(1, -0.3, 0, 1), alpha(0.5)),
    WcoSpec(1, TaylorPoly([0, 0, 1])),
    WcoSpec(1, TaylorPoly([0, 0.5, 0.2])),
    WcoSpec(1, alpha(0.5)),
    WcoSpec(MobiusMap.kernel(0.3), MobiusMap.linear(0.5)),
])
def test_not_normal_is_stable_in_N(W):
    for N in (16, 32):
        if is_normal(W, N).verdict == "not_normal":
            assert is_normal(W, 2 * N).verdict == "not_normal"


@settings(max_examples=15, deadline=None)
@given(lft_operators(), lft_operators())
def test_composition_covariance(W1, W2):
    N, M = 32, 1024
    h = N // 2
    product = section(W1, h, M) @ section(W2, M, h)
    order = N  # rows below N only see coefficients below N
    psi1 = taylor_of_lft(W1.psi, order)
    psi2_phi1 = taylor_of_lft(compose(W2.psi, W1.phi), order)
    weight = series_mul(psi1, psi2_phi1, order)
    composed = WcoSpec(weight, compose(W2.phi, W1.phi))
    target = finite_section(composed, N)[:h, :h]
    scale = 1 + np.linalg.norm(target)
    assert np.linalg.norm(product - target) < 1e-8 * scale
