"""Gallery constructions against their frozen invariants.

Oracle notes.  The orbit generators are pinned structurally (derivation
property, so(3) brackets, equivariance with the cubic identification),
which determines them up to conjugation; all frozen curvature and class
values below were cross-checked against the intrinsic finite-difference
curvature pipeline, which shares no code with the Gauss-equation path.
"""

import numpy as np
import pytest

from nksix.cubics import (
    StabilizerClass,
    classify_stabilizer,
    gauss_map,
    is_harmonic,
    jacobi_eigh,
)
from nksix.gallery import (
    CubicIdentification,
    L1_differential,
    L1_point,
    cubic_identification,
    irreducible_so3_action,
    make_L0,
    make_L1,
    make_L2,
    make_boruvka,
    make_clifford_legendrian_curve,
    make_holomorphic_cone_link,
    make_veronese_hopf_lift,
    orbit_actions,
    su2_action,
)
from nksix.jets import (
    austere_residual,
    chen_delta,
    frame_at,
    fundamental_cubic,
    gauss_curvature,
    is_quasi_einstein,
    lagrangian_residual,
    pseudoholomorphic_residual,
    riemann_K,
    sample_points,
    sectional_curvature,
    volume_calibration_residual,
)
from nksix.octonion import basis_im, is_g2_derivation


def test_orbit_actions_structure():
    acts = orbit_actions()
    assert set(acts) == {"reducible", "irreducible"}
    for act in acts.values():
        U1, U2, U3 = act.generators
        for U in act.generators:
            ok, res = is_g2_derivation(U)
            assert ok, f"{act.name}: residual {res}"
            assert np.allclose(U, -U.T)
        assert np.allclose(U1 @ U2 - U2 @ U1, 2 * U3, atol=1e-13)
        assert np.allclose(U2 @ U3 - U3 @ U2, 2 * U1, atol=1e-13)
        assert np.allclose(U3 @ U1 - U1 @ U3, 2 * U2, atol=1e-13)
        # cached exponentials: orthogonal, unit determinant, one-parameter
        R = act.exp(0, 0.37)
        assert np.allclose(R @ R.T, np.eye(7), atol=1e-13)
        assert np.isclose(np.linalg.det(R), 1.0)
        assert np.allclose(
            act.exp(1, 0.2) @ act.exp(1, 0.3), act.exp(1, 0.5), atol=1e-13
        )


def test_identification_isometry_equivariance():
    ident = cubic_identification()
    G = np.einsum("aijk,bijk->ab", ident.images, ident.images)
    assert np.allclose(G, np.eye(7), atol=1e-13)
    for i in range(7):
        assert is_harmonic(ident.images[i])
    # round trip
    rng = np.random.default_rng(5)
    v = rng.standard_normal(7)
    assert np.allclose(ident.point_of(ident.of_point(v)), v, atol=1e-13)
    # exact intertwining with the irreducible action
    act = irreducible_so3_action()
    for a in range(3):
        for k in range(7):
            lhs = ident.of_point(act.generators[a] @ np.eye(7)[k])
            rhs = CubicIdentification.gen_act(
                ident.rot_generators[a], ident.images[k]
            )
            assert np.allclose(lhs, rhs, atol=1e-12)


def test_L0_totally_geodesic():
    L0 = make_L0()
    pts = sample_points(L0, 4)
    assert lagrangian_residual(L0, pts) < 1e-12
    assert volume_calibration_residual(L0, pts) < 1e-10
    for u in pts[:3]:
        fr = frame_at(L0, u)
        assert np.linalg.norm(fr.second_fundamental) < 1e-9
        assert abs(sectional_curvature(L0, u, 0, 1) - 1.0) < 1e-9
        assert np.linalg.norm(fundamental_cubic(L0, u)) < 1e-9
    h = fundamental_cubic(L0, pts[0])
    assert classify_stabilizer(h) is StabilizerClass.SO3


def test_L1_metric_matches_invariant_frame():
    # |dF(v)|^2 = (4/9) w1^2 + (8/3)(w2^2 + w3^2) in the left-invariant
    # frame coordinates w of the 3-sphere
    rng = np.random.default_rng(11)
    for _ in range(50):
        q = rng.standard_normal(4)
        q /= np.linalg.norm(q)
        v = rng.standard_normal(4)
        v -= (v @ q) * q
        x1, x2, x3, x4 = q
        w = np.array(
            [
                x2 * v[0] - x1 * v[1] + x4 * v[2] - x3 * v[3],
                x3 * v[0] - x4 * v[1] - x1 * v[2] + x2 * v[3],
                x4 * v[0] + x3 * v[1] - x2 * v[2] - x1 * v[3],
            ]
        )
        df = L1_differential(q, v)
        lhs = float(np.dot(df, df))
        rhs = (4.0 / 9.0) * w[0] ** 2 + (8.0 / 3.0) * (w[1] ** 2 + w[2] ** 2)
        assert abs(lhs - rhs) < 1e-12
        p = L1_point(q)
        assert abs(np.linalg.norm(p) - 1.0) < 1e-12
        assert abs(np.dot(p, df)) < 1e-12


def test_L1_geometry():
    L1 = make_L1()
    pts = sample_points(L1, 4)
    assert lagrangian_residual(L1, pts) < 1e-12
    assert volume_calibration_residual(L1, pts) < 1e-10
    h = fundamental_cubic(L1, pts[0])
    K = gauss_map(h)
    w, _ = jacobi_eigh(K)
    assert np.allclose(
        w, [5.0 / 16.0, -15.0 / 16.0, -15.0 / 16.0], atol=1e-8
    )
    assert classify_stabilizer(h) is StabilizerClass.SO2
    assert is_quasi_einstein(K)
    assert abs(chen_delta(h) - 11.0 / 8.0) < 1e-8
    assert austere_residual(h) > 1e-2
    # the reducible SU(2) moves L1 into itself: generator directions are
    # tangent to the image
    su2 = su2_action()
    for u in pts[:3]:
        p = L1.eval(u)
        T = frame_at(L1, u).frame
        for U in su2.generators:
            vec = U @ p
            assert np.linalg.norm(vec - T.T @ (T @ vec)) < 1e-10


def test_L2_constant_curvature_orbit():
    L2 = make_L2()
    pts = sample_points(L2, 4)
    assert lagrangian_residual(L2, pts) < 1e-12
    assert volume_calibration_residual(L2, pts) < 1e-10
    for u in pts[:3]:
        fr = frame_at(L2, u)
        assert np.linalg.norm(fr.mean_curvature) < 1e-10
        for i, j in ((0, 1), (0, 2), (1, 2)):
            assert abs(sectional_curvature(L2, u, i, j) - 1.0 / 16.0) < 1e-10
    h = fundamental_cubic(L2, pts[0])
    assert np.allclose(gauss_map(h), -(15.0 / 16.0) * np.eye(3), atol=1e-10)
    assert classify_stabilizer(h) is StabilizerClass.A4
    assert austere_residual(h) < 1e-12
    # intrinsic curvature from metric derivatives agrees
    assert np.max(np.abs(riemann_K(L2, pts[1]) + 15.0 / 16.0 * np.eye(3))) < 1e-6


def test_L2_membership_oracle():
    ident = cubic_identification()
    act = irreducible_so3_action()
    rng = np.random.default_rng(23)
    e2 = basis_im(2)
    for _ in range(10):
        # random word in the group applied to the base point
        x = e2
        for _ in range(3):
            k = rng.integers(0, 3)
            x = act.exp(int(k), float(rng.uniform(0, 2 * np.pi))) @ x
        assert ident.in_orbit_of_e2(x)
    for _ in range(10):
        v = rng.standard_normal(7)
        v /= np.linalg.norm(v)
        assert not ident.in_orbit_of_e2(v)
    # non-unit vectors are rejected outright
    assert not ident.in_orbit_of_e2(2.0 * e2)


def test_boruvka_sphere():
    B = make_boruvka()
    pts = sample_points(B, 5)
    assert pseudoholomorphic_residual(B, pts) < 1e-12
    for u in pts:
        assert abs(gauss_curvature(B, u) - 1.0 / 6.0) < 1e-12
    fr = frame_at(B, pts[0])
    assert np.linalg.norm(fr.mean_curvature) < 1e-10
    # chart degenerates exactly where cos(2 beta) does
    s = np.linalg.svd(B.jac(np.array([1.0, np.pi / 4])), compute_uv=False)
    assert s[-1] < 1e-12
    s = np.linalg.svd(B.jac(np.array([1.0, 0.0])), compute_uv=False)
    assert s[-1] > 1.0


def test_veronese_hopf_lift():
    V = make_veronese_hopf_lift()
    # the generating curve is null for the complex bilinear form
    rng = np.random.default_rng(3)
    for _ in range(5):
        w = complex(*rng.uniform(-1, 1, size=2))
        c = np.array([(1 - w * w) / 2, 1j * (1 + w * w) / 2, w])
        assert abs(np.sum(c * c)) < 1e-14
    pts = sample_points(V, 4)
    assert lagrangian_residual(V, pts) < 1e-12
    assert volume_calibration_residual(V, pts) < 1e-10
    assert np.linalg.norm(frame_at(V, pts[0]).mean_curvature) < 1e-8
    h = fundamental_cubic(V, pts[0])
    assert classify_stabilizer(h) is StabilizerClass.S3
    assert austere_residual(h) < 1e-12
    assert abs(chen_delta(h) - 2.0) < 1e-6


def test_cone_link():
    C = make_holomorphic_cone_link("quadratic")
    assert C.name == "cone_link:quadratic"
    pts = sample_points(C, 4)
    assert lagrangian_residual(C, pts) < 1e-12
    assert volume_calibration_residual(C, pts) < 1e-10
    for u in pts[:3]:
        assert np.linalg.norm(frame_at(C, u).mean_curvature) < 1e-8
        h = fundamental_cubic(C, u)
        assert classify_stabilizer(h) is StabilizerClass.S3
        assert austere_residual(h) < 1e-12
    with pytest.raises(KeyError):
        make_holomorphic_cone_link("cubic")


def test_clifford_legendrian():
    CL = make_clifford_legendrian_curve()
    pts = sample_points(CL, 5)
    assert pseudoholomorphic_residual(CL, pts) < 1e-12
    for u in pts:
        assert abs(gauss_curvature(CL, u)) < 1e-8
    assert np.linalg.norm(frame_at(CL, pts[0]).mean_curvature) < 1e-8
    # phase search lands on an alignment making det[c, d1, d2] real negative
    alpha = CL.extras["phase"]
    c = (
        np.exp(1j * alpha)
        * np.array([np.exp(0.7j), np.exp(1.9j), np.exp(-2.6j)])
        / np.sqrt(3.0)
    )
    d1 = 1j * c * np.array([1.0, 0.0, -1.0])
    d2 = 1j * c * np.array([0.0, 1.0, -1.0])
    det = np.linalg.det(np.column_stack([c, d1, d2]))
    assert abs(det + 1.0 / np.sqrt(3.0)) < 1e-10
    # Legendrian for the equatorial contact structure: tangents annihilate
    # the Reeb direction i * position
    for u in pts[:4]:
        p = CL.eval(u)
        J0p = np.zeros(7)
        # multiplication by i in the z-coordinates swaps paired components
        J0p[2], J0p[1] = p[1], -p[2]
        J0p[4], J0p[3] = p[3], -p[4]
        J0p[6], J0p[5] = p[5], -p[6]
        Jc = CL.jac(u)
        assert np.max(np.abs(J0p @ Jc)) < 1e-12


def test_gallery_extras_present():
    for mk in (
        make_L0,
        make_L1,
        make_L2,
        make_boruvka,
        make_veronese_hopf_lift,
        make_holomorphic_cone_link,
        make_clifford_legendrian_curve,
    ):
        patch = mk()
        assert patch.extras.get("kind") in {"lagrangian", "pholo_curve"}
        lo = np.array([d[0] for d in patch.domain])
        hi = np.array([d[1] for d in patch.domain])
        assert np.all(patch.anchor > lo) and np.all(patch.anchor < hi)
        p = patch.eval(patch.anchor)
        assert abs(np.linalg.norm(p) - 1.0) < 1e-12
