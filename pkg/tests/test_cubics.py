"""Cubic algebra tests.

The symbolic block re-derives the normal-form tensor from third partial
derivatives of the defining polynomial and proves the trace identity for the
full seven-parameter family of harmonic cubics, so the numeric code is
checked against an independent construction.
"""

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from nksix.cubics import (
    StabilizerClass,
    classify_stabilizer,
    cubic_eval,
    fiber_r_bounds,
    fiber_solve,
    gauss_map,
    harmonic_projection,
    in_gauss_image,
    is_harmonic,
    jacobi_eigh,
    normal_form,
    normal_form_eval,
    random_harmonic_cubic,
    random_rotation,
    sigma,
    so3_act,
    symmetrize3,
    trace_vector,
)


def cubic_from_free(v):
    """Independent harmonic-cubic builder: 7 free entries, diagonals from
    the trace constraints."""
    h112, h113, h122, h123, h133, h223, h233 = v
    h111 = -h122 - h133
    h222 = -h112 - h233
    h333 = -h113 - h223
    entries = {
        (0, 0, 0): h111, (0, 0, 1): h112, (0, 0, 2): h113,
        (0, 1, 1): h122, (0, 1, 2): h123, (0, 2, 2): h133,
        (1, 1, 1): h222, (1, 1, 2): h223, (1, 2, 2): h233,
        (2, 2, 2): -h113 - h223,
    }
    h = np.zeros((3, 3, 3))
    for (i, j, k), val in entries.items():
        for p in {(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)}:
            h[p] = val
    assert abs(h[2, 2, 2] - h333) < 1e-15
    return h


# ---------------------------------------------------------------- symbolic


def test_normal_form_matches_polynomial_third_derivatives():
    x, y, z = sp.symbols("x y z")
    rs, ss, as_, bs = sp.symbols("r s a b")
    p = sp.Rational(1, 8) * (
        rs * x * (2 * x**2 - 3 * y**2 - 3 * z**2)
        + 3 * ss * x * (y**2 - z**2)
        + as_ * y * (y**2 - 3 * z**2)
        + bs * z * (3 * y**2 - z**2)
    )
    v = (x, y, z)
    rng = np.random.default_rng(11)
    for _ in range(5):
        vals = rng.normal(size=4)
        subs = dict(zip((rs, ss, as_, bs), vals))
        h = normal_form(*vals)
        for i in range(3):
            for j in range(3):
                for k in range(3):
                    want = float(
                        (sp.diff(p, v[i], v[j], v[k]) / 6).subs(subs)
                    )
                    assert h[i, j, k] == pytest.approx(want, abs=1e-13)


def test_normal_form_is_harmonic_symbolically():
    x, y, z = sp.symbols("x y z")
    rs, ss, as_, bs = sp.symbols("r s a b")
    p = sp.Rational(1, 8) * (
        rs * x * (2 * x**2 - 3 * y**2 - 3 * z**2)
        + 3 * ss * x * (y**2 - z**2)
        + as_ * y * (y**2 - 3 * z**2)
        + bs * z * (3 * y**2 - z**2)
    )
    lap = sp.diff(p, x, 2) + sp.diff(p, y, 2) + sp.diff(p, z, 2)
    assert sp.simplify(lap) == 0


def test_trace_identity_symbolic_full_family():
    free = sp.symbols("a0:7")
    h112, h113, h122, h123, h133, h223, h233 = free
    entries = {
        (0, 0, 0): -h122 - h133, (0, 0, 1): h112, (0, 0, 2): h113,
        (0, 1, 1): h122, (0, 1, 2): h123, (0, 2, 2): h133,
        (1, 1, 1): -h112 - h233, (1, 1, 2): h223, (1, 2, 2): h233,
        (2, 2, 2): -h113 - h223,
    }
    h = {}
    for (i, j, k), val in entries.items():
        for p in {(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)}:
            h[p] = val

    def hg(i, j, k):
        return h[(i, j, k)]

    K = {}
    for (i, j, k) in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        K[(i, i)] = sum(
            hg(j, j, q) * hg(k, k, q) - hg(j, k, q) ** 2 for q in range(3)
        )
    trK = sp.expand(K[(0, 0)] + K[(1, 1)] + K[(2, 2)])
    norm2 = sp.expand(
        sum(h[(i, j, k)] ** 2 for i in range(3) for j in range(3) for k in range(3))
    )
    assert sp.simplify(trK + norm2 / 2) == 0


# ----------------------------------------------------------------- numeric


def test_gauss_map_anchor_values():
    # p = x(2x^2 - 3y^2 - 3z^2): tensor entries 2, -1, -1 on the diagonal slots
    h = cubic_from_free([0, 0, -1, 0, -1, 0, 0])
    assert np.allclose(gauss_map(h), np.diag([1.0, -3.0, -3.0]))
    # p = 3 sqrt(3) x (y^2 - z^2)
    c = np.sqrt(3.0)
    h = cubic_from_free([0, 0, c, 0, -c, 0, 0])
    assert np.allclose(gauss_map(h), -3.0 * np.eye(3))
    # p = y(y^2 - 3z^2): entries h222 = 1, h233 = -1
    h = cubic_from_free([0, 0, 0, 0, 0, 0, -1])
    assert np.allclose(gauss_map(h), np.diag([-2.0, 0.0, 0.0]))
    # p = -sqrt(6) x y z: h123 = -sqrt(6)/6, K = -(1/6) I
    h = cubic_from_free([0, 0, 0, -np.sqrt(6.0) / 6.0, 0, 0, 0])
    assert np.allclose(gauss_map(h), -np.eye(3) / 6.0)


@settings(max_examples=150, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=7, max_size=7))
def test_trace_identity_and_image(v):
    h = cubic_from_free(v)
    K = gauss_map(h)
    n2 = float(np.sum(h * h))
    assert abs(np.trace(K) + 0.5 * n2) <= 1e-12 * (1.0 + n2)
    assert in_gauss_image(K)


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.floats(-2, 2), min_size=7, max_size=7),
    st.integers(0, 10**6),
)
def test_equivariance(v, seed):
    h = cubic_from_free(v)
    R = random_rotation(np.random.default_rng(seed))
    K1 = gauss_map(so3_act(R, h))
    K2 = R @ gauss_map(h) @ R.T
    scale = 1.0 + float(np.max(np.abs(K2)))
    assert np.max(np.abs(K1 - K2)) <= 1e-11 * scale
    # sigma is an invariant
    assert sigma(K1) == pytest.approx(sigma(K2), abs=1e-10 * scale**2)


def test_harmonic_projection_and_symmetrize():
    rng = np.random.default_rng(5)
    T = rng.normal(size=(3, 3, 3))
    S = symmetrize3(T)
    assert np.allclose(S, np.transpose(S, (1, 0, 2)))
    assert np.allclose(S, np.transpose(S, (0, 2, 1)))
    h = harmonic_projection(T)
    assert is_harmonic(h)
    assert np.max(np.abs(trace_vector(h))) < 1e-12
    # projection is idempotent
    assert np.allclose(harmonic_projection(h), h, atol=1e-12)
    # and orthogonal: <T - h, h> uses only the trace part
    hp = random_harmonic_cubic(rng)
    assert abs(np.sum((symmetrize3(T) - h) * hp)) < 1e-10


def test_jacobi_against_numpy():
    rng = np.random.default_rng(6)
    for _ in range(100):
        A = rng.normal(size=(3, 3))
        M = A + A.T
        w, V = jacobi_eigh(M)
        assert np.all(np.diff(w) <= 1e-13)
        assert np.allclose(V @ V.T, np.eye(3), atol=1e-13)
        assert np.linalg.det(V) == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(V @ np.diag(w) @ V.T, M, atol=1e-12 * max(1, abs(w[0])))
        wref = np.sort(np.linalg.eigvalsh(M))[::-1]
        assert np.allclose(w, wref, atol=1e-12 * max(1.0, abs(wref).max()))


def test_fiber_solve_frozen_case():
    K = np.diag([0.0, -1.0, -4.0])
    assert sigma(K) == pytest.approx(4.0 / 3.0)
    h = fiber_solve(K, 0.0)
    s2 = np.sqrt(2.0)
    s22 = np.sqrt(22.0)
    expected = {
        (0, 0, 1): s22 / 3.0,
        (2, 2, 1): -s22 / 9.0,
        (0, 0, 2): 1.0 / (3.0 * s2),
        (1, 1, 2): 4.0 / (9.0 * s2),
        (0, 0, 0): 0.0,
        (1, 1, 1): -2.0 * s22 / 9.0,
        (2, 2, 2): -7.0 / (9.0 * s2),
        (1, 1, 0): 0.0,
        (2, 2, 0): 0.0,
        (0, 1, 2): 0.0,
    }
    for idx, val in expected.items():
        assert h[idx] == pytest.approx(val, abs=1e-12), idx
    assert np.allclose(gauss_map(h), K, atol=1e-12)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.floats(-2, 2), min_size=7, max_size=7))
def test_fiber_roundtrip(v):
    h0 = cubic_from_free(v)
    K = gauss_map(h0)
    w = np.sort(np.linalg.eigvalsh(K))[::-1]
    scale_w = max(1.0, abs(w).max())
    if w[0] - w[1] < 5e-2 * scale_w or w[1] - w[2] < 5e-2 * scale_w:
        return  # conditioning of the closed forms degrades near coalescence
    rmin, rmax = fiber_r_bounds(K)
    r = np.sqrt(0.5 * (rmin**2 + rmax**2))
    scale = 1.0 + float(np.max(np.abs(K)))
    for signs in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
        h = fiber_solve(K, r, signs=signs)
        assert is_harmonic(h)
        assert np.max(np.abs(gauss_map(h) - K)) <= 1e-9 * scale


def test_fiber_solve_errors():
    with pytest.raises(ValueError):
        fiber_solve(np.diag([-1.0, -1.0, -2.0]), 0.0)  # repeated eigenvalue
    K = np.diag([0.0, -1.0, -4.0])
    _, rmax = fiber_r_bounds(K)
    with pytest.raises(ValueError):
        fiber_solve(K, 2.0 * rmax + 1.0)
    with pytest.raises(ValueError):
        fiber_solve(K, 0.0, signs=(2, 1))


def test_classification_representatives_and_boundaries():
    reps = {
        StabilizerClass.SO3: (0, 0, 0, 0),
        StabilizerClass.SO2: (2, 0, 0, 0),
        StabilizerClass.A4: (0, 3, 0, 0),
        StabilizerClass.S3: (0, 0, 2, 0),
        StabilizerClass.Z3: (2, 0, 1, 0),
        StabilizerClass.Z2: (2, 1, 0, 0),
        StabilizerClass.TRIVIAL: (1.0, 2.0, 3.0, 4.0),
    }
    rng = np.random.default_rng(12)
    for cls, params in reps.items():
        h = normal_form(*params)
        assert classify_stabilizer(h) is cls
        for _ in range(10):
            R = random_rotation(rng)
            assert classify_stabilizer(so3_act(R, h)) is cls, (cls, params)
    # coalescence identities
    assert classify_stabilizer(normal_form(2, 0, 2 * np.sqrt(2), 0)) is StabilizerClass.A4
    assert classify_stabilizer(normal_form(2, 2, 0, 0)) is StabilizerClass.S3
    # the other branch of the two-repeated-eigenvalue stratum
    assert classify_stabilizer(normal_form(1, 0, 4, 0)) is StabilizerClass.Z3
    # scale invariance
    assert classify_stabilizer(1e-3 * normal_form(2, 0, 1, 0)) is StabilizerClass.Z3
    assert classify_stabilizer(1e3 * normal_form(2, 1, 0, 0)) is StabilizerClass.Z2


def test_classification_robust_to_jet_noise():
    rng = np.random.default_rng(13)
    h = so3_act(random_rotation(rng), normal_form(2, 0, 0, 0))
    noisy = h + 1e-9 * symmetrize3(rng.normal(size=(3, 3, 3)))
    assert classify_stabilizer(noisy) is StabilizerClass.SO2


def test_normal_form_eval():
    params = (1.0, 2.0, -1.0, 0.5)
    x = np.array([0.3, -0.7, 1.1])
    xx, yy, zz = x
    want = (
        params[0] * xx * (2 * xx**2 - 3 * yy**2 - 3 * zz**2)
        + 3 * params[1] * xx * (yy**2 - zz**2)
        + params[2] * yy * (yy**2 - 3 * zz**2)
        + params[3] * zz * (3 * yy**2 - zz**2)
    ) / 8.0
    assert normal_form_eval(params, x) == pytest.approx(want, abs=1e-14)
    assert cubic_eval(normal_form(*params), x) == pytest.approx(want, abs=1e-14)


def test_sigma_and_image_boundary_cases():
    # zero matrix is in the image (zero cubic)
    assert in_gauss_image(np.zeros((3, 3)))
    # positive trace is not
    assert not in_gauss_image(np.eye(3))
    # negative sigma is not: diag(2,-3,-4) has sigma = -2/3
    assert not in_gauss_image(np.diag([2.0, -3.0, -4.0]))
    # lambda_1^2 > sigma >= 0 is not: diag(2,-4,-5) has sigma = 2/3 < 4
    assert not in_gauss_image(np.diag([2.0, -4.0, -5.0]))
    # frozen anchor is, and diag(1,-3,-4) is too (1 <= sigma = 5/3)
    assert in_gauss_image(np.diag([0.0, -1.0, -4.0]))
    assert in_gauss_image(np.diag([1.0, -3.0, -4.0]))
