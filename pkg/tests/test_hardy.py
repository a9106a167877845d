from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardywco.errors import CompositionDiverges, InsufficientQuadrature, PoleInClosedDisc, PointNotInDisc
from hardywco.hardy import (
    KernelCombo,
    TaylorPoly,
    as_series,
    boundary_norm_check,
    h2_inner,
    h2_norm,
    kernel_at,
    kernel_eval,
    kernel_inner,
    kernel_norm,
    series_compose,
    series_exp,
    series_mul,
    sup_on_circle,
    taylor_of_lft,
)
from hardywco.mobius import MobiusMap, alpha


def close(a, b, tol=1e-12):
    return np.allclose(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex), atol=tol, rtol=0)


def test_taylor_of_lft_examples():
    d = 0.5 + 0.5j
    assert close(taylor_of_lft(MobiusMap.linear(d), 3).coeffs, [0, d, 0, 0])
    assert close(taylor_of_lft(MobiusMap.kernel(F(1, 2)), 3).coeffs, [1, 0.5, 0.25, 0.125])
    assert close(taylor_of_lft(MobiusMap(0, 1, -1, 2), 2).coeffs, [0.5, 0.25, 0.125])
    with pytest.raises(PoleInClosedDisc):
        taylor_of_lft(MobiusMap(0, 1, -1, 1), 4)


def test_series_mul_examples():
    f = TaylorPoly([1, 2, 3])
    assert series_mul(f, TaylorPoly([1]), 2) == f
    assert close(series_mul(TaylorPoly([1, 1]), TaylorPoly([1, -1]), 2).coeffs, [1, 0, -1])
    k = taylor_of_lft(MobiusMap.kernel(0.5), 4)
    assert close(series_mul(k, TaylorPoly([1, -0.5]), 4).coeffs, [1, 0, 0, 0, 0])


def test_series_compose_examples():
    f = TaylorPoly([1, -2, 0.5j])
    assert close(series_compose(f, TaylorPoly([0, 1]), 2).coeffs, f.coeffs)
    d = 0.7 - 0.2j
    assert close(series_compose(TaylorPoly([0, 0, 1]), TaylorPoly([0, d]), 4).coeffs, [0, 0, d * d, 0, 0])
    # K_{1/2} o alpha_{1/2} = (4/3)(1 - z/2) after cancelling 1 - z/2 against the kernel pole
    k = taylor_of_lft(MobiusMap.kernel(0.5), 200)
    got = series_compose(k, taylor_of_lft(alpha(0.5), 3), 3).coeffs
    assert close(got, [4 / 3, -2 / 3, 0, 0], 1e-12)
    with pytest.raises(CompositionDiverges):
        series_compose(f, TaylorPoly([1, 0.1]), 3)


def test_h2_norm_examples():
    assert h2_norm(TaylorPoly([1, 0, 0])) == 1
    assert h2_norm(TaylorPoly([3, 4j])) == pytest.approx(5)
    k = taylor_of_lft(MobiusMap.kernel(0.6), 400)
    assert h2_norm(k) == pytest.approx(1.25, abs=1e-12)


def test_boundary_norm_examples():
    assert boundary_norm_check(TaylorPoly([1, 1]), 8) == pytest.approx(2)
    for M in (3, 4, 17):
        assert boundary_norm_check(TaylorPoly([1, 0, 0]), M) == pytest.approx(1)
    rng = np.random.default_rng(1)
    for _ in range(20):
        f = TaylorPoly(rng.normal(size=17) + 1j * rng.normal(size=17))
        assert abs(boundary_norm_check(f, 64) - h2_norm(f) ** 2) < 1e-12 * h2_norm(f) ** 2
    with pytest.raises(InsufficientQuadrature):
        boundary_norm_check(TaylorPoly([1, 1, 1]), 4)


def test_kernel_examples():
    assert kernel_norm(0) == 1
    assert close(kernel_at(0).taylor(5).coeffs, [1, 0, 0, 0, 0, 0])
    assert kernel_inner(0.5, 0.5) == pytest.approx(4 / 3)
    assert kernel_eval(kernel_at(0.5), 0) == 1
    with pytest.raises(PointNotInDisc):
        kernel_at(1.0)


def test_kernel_combo_inner_matches_series():
    v = KernelCombo(((1, 0.5), (2j, -0.3 + 0.4j), (-1, 0.1j)))
    series = v.taylor(600)
    assert abs(v.inner(v) - h2_inner(series, series)) < 1e-12
    assert (v - v).is_zero(1e-12)


def test_sup_on_circle():
    assert sup_on_circle(TaylorPoly([0, 0, 1])) == pytest.approx(1)
    assert sup_on_circle(TaylorPoly([0.5, 0.5])) == pytest.approx(1)


def test_series_exp_matches_numpy():
    f = TaylorPoly([0.1, 0.5, -0.2j])
    e = series_exp(f, 60)
    for z in (0.3, -0.2 + 0.4j):
        assert abs(e(z) - np.exp(f(z))) < 1e-12


# -- properties ---------------------------------------------------------

coeffs = st.lists(st.complex_numbers(max_magnitude=2, allow_nan=False), min_size=1, max_size=12)
inner_pt = st.complex_numbers(max_magnitude=0.6, allow_nan=False)


@settings(max_examples=80, deadline=None)
@given(coeffs, coeffs, inner_pt)
def test_series_mul_pointwise(a, b, z):
    f, g = TaylorPoly(a), TaylorPoly(b)
    n = len(a) + len(b)
    assert abs(series_mul(f, g, n)(z) - f(z) * g(z)) < 1e-9


@settings(max_examples=80, deadline=None)
@given(coeffs, st.complex_numbers(max_magnitude=0.4, allow_nan=False),
       st.complex_numbers(max_magnitude=0.5, allow_nan=False), inner_pt)
def test_series_compose_pointwise(a, p0, p1, z):
    f, phi = TaylorPoly(a), TaylorPoly([p0, p1])
    n = 12 * 8
    val = series_compose(f, phi, n)(z * 0.5)
    assert abs(val - f(phi(z * 0.5))) < 1e-8


@settings(max_examples=80, deadline=None)
@given(coeffs, inner_pt)
def test_reproducing_property(a, beta):
    f = TaylorPoly(a)
    assert abs(h2_inner(f, kernel_at(beta).taylor(len(a) + 5)) - f(beta)) < 1e-10


@settings(max_examples=50, deadline=None)
@given(coeffs, st.integers(0, 40))
def test_parseval(a, extra):
    f = TaylorPoly(a)
    M = 2 * f.order + 1 + extra
    assert abs(boundary_norm_check(f, M) - h2_norm(f) ** 2) <= 1e-12 * max(1, h2_norm(f) ** 2)


def test_as_series_scalar():
    assert close(as_series(2.5, 3).coeffs, [2.5, 0, 0, 0])
