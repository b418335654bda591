"""Jet pipeline tests on charts whose geometry is known in closed form.

Two reference families: totally geodesic spheres (everything vanishes) and
latitude 3-spheres at angle gamma (umbilic with principal curvature
cot gamma), which exercise the Hessian and curvature paths against exact
values.  The Chen invariant is cross-checked against its eigenvalue
identity, and the austere frame search against hand-classified cubics.
"""

import numpy as np
import pytest

from nksix.cubics import gauss_map, normal_form, random_harmonic_cubic
from nksix.jets import (
    ImmersionPatch,
    austere_residual,
    chen_delta,
    frame_at,
    fundamental_cubic,
    gauss_curvature,
    induced_metric,
    is_austere,
    is_quasi_einstein,
    lagrangian_residual,
    pseudoholomorphic_residual,
    ricci,
    riemann_K,
    sample_points,
    second_fundamental_form,
    sectional_curvature,
    volume_calibration_residual,
)
from nksix.octonion import basis_im

DOM3 = ((0.3, 2.8), (0.3, 2.8), (0.3, 2.8))


def sph3(u):
    t, p, s = u
    return np.array(
        [
            np.cos(t),
            np.sin(t) * np.cos(p),
            np.sin(t) * np.sin(p) * np.cos(s),
            np.sin(t) * np.sin(p) * np.sin(s),
        ]
    )


def dsph3(u):
    t, p, s = u
    ct, st = np.cos(t), np.sin(t)
    cp, sp = np.cos(p), np.sin(p)
    cs, ss = np.cos(s), np.sin(s)
    return np.array(
        [
            [-st, 0.0, 0.0],
            [ct * cp, -st * sp, 0.0],
            [ct * sp * cs, st * cp * cs, -st * sp * ss],
            [ct * sp * ss, st * cp * ss, st * sp * cs],
        ]
    )


def geodesic_lagrangian_patch(analytic=True):
    E = np.stack([basis_im(i) for i in (1, 3, 5, 7)])

    def f(u):
        return sph3(u) @ E

    jac = (lambda u: E.T @ dsph3(u)) if analytic else None
    return ImmersionPatch(dim=3, domain=DOM3, eval=f, jac=jac, name="geodesic")


def latitude_patch(gamma, analytic=True):
    E = np.stack([basis_im(i) for i in (4, 5, 6, 7)])

    def f(u):
        return np.cos(gamma) * basis_im(1) + np.sin(gamma) * (sph3(u) @ E)

    jac = (lambda u: np.sin(gamma) * (E.T @ dsph3(u))) if analytic else None
    return ImmersionPatch(dim=3, domain=DOM3, eval=f, jac=jac, name="latitude")


U0 = np.array([1.0, 1.2, 0.7])
U1 = np.array([0.8, 2.0, 1.5])


def test_geodesic_sphere_jets_vanish():
    P = geodesic_lagrangian_patch()
    fr = frame_at(P, U0)
    assert np.max(np.abs(fr.second_fundamental)) < 1e-9
    assert np.linalg.norm(fr.mean_curvature) < 1e-9
    assert np.max(np.abs(fr.frame @ fr.frame.T - np.eye(3))) < 1e-12
    assert lagrangian_residual(P, points=[U0, U1]) < 1e-12
    assert volume_calibration_residual(P, points=[U0, U1]) < 1e-10
    assert sectional_curvature(P, U0, 0, 1) == pytest.approx(1.0, abs=1e-9)
    assert np.max(np.abs(fundamental_cubic(P, U0))) < 1e-9
    assert np.max(np.abs(riemann_K(P, U0))) < 1e-7


def test_geodesic_sphere_fd_fallback():
    P = geodesic_lagrangian_patch(analytic=False)
    assert P.jet_mode == "fd"
    fr = frame_at(P, U0)
    assert np.max(np.abs(fr.second_fundamental)) < 1e-8
    assert lagrangian_residual(P, points=[U0]) < 1e-10


def test_latitude_sphere_umbilic():
    gamma = 0.8
    P = latitude_patch(gamma)
    fr = frame_at(P, U0)
    ct = 1.0 / np.tan(gamma)
    II = fr.second_fundamental
    for i in range(3):
        for j in range(3):
            want = ct if i == j else 0.0
            assert np.linalg.norm(II[i, j]) == pytest.approx(want, abs=1e-8)
    assert np.linalg.norm(fr.mean_curvature) == pytest.approx(3 * ct, abs=1e-8)
    assert sectional_curvature(P, U0, 0, 2) == pytest.approx(1 + ct * ct, abs=1e-8)
    # intrinsic route: a round 3-sphere of radius sin(gamma)
    K = riemann_K(P, U0)
    assert np.max(np.abs(K - ct * ct * np.eye(3))) < 1e-6
    # metric is that of the unit chart scaled by sin(gamma)^2
    g = induced_metric(P, U0)
    gref = dsph3(U0).T @ dsph3(U0) * np.sin(gamma) ** 2
    assert np.max(np.abs(g - gref)) < 1e-12


def test_latitude_not_lagrangian_and_cubic_guard():
    P = latitude_patch(0.8)
    assert lagrangian_residual(P, points=[U0]) > 0.3
    with pytest.raises(ValueError):
        fundamental_cubic(P, U0)


def test_associative_sphere_is_pseudoholomorphic():
    E = np.stack([basis_im(i) for i in (1, 2, 3)])

    def f(u):
        t, p = u
        return np.array([np.cos(t), np.sin(t) * np.cos(p), np.sin(t) * np.sin(p)]) @ E

    P = ImmersionPatch(dim=2, domain=((0.3, 2.8), (0.1, 6.1)), eval=f)
    assert pseudoholomorphic_residual(P, n_per_axis=8) < 1e-10
    assert gauss_curvature(P, np.array([1.1, 0.9])) == pytest.approx(1.0, abs=1e-8)

    def fbad(u):
        t, p = u
        return np.array([np.cos(t), np.sin(t) * np.cos(p), np.sin(t) * np.sin(p)]) @ np.stack(
            [basis_im(i) for i in (1, 2, 4)]
        )

    Pbad = ImmersionPatch(dim=2, domain=((0.3, 2.8), (0.1, 6.1)), eval=fbad)
    assert pseudoholomorphic_residual(Pbad, n_per_axis=8) > 0.5


def test_sample_points_shapes_and_determinism():
    P2 = ImmersionPatch(
        dim=2, domain=((0.0, 1.0), (2.0, 3.0)), eval=lambda u: basis_im(1)
    )
    pts = sample_points(P2, n_per_axis=5)
    assert pts.shape == (25, 2)
    assert pts[:, 0].min() >= 0.0 and pts[:, 1].max() <= 3.0
    P3 = ImmersionPatch(
        dim=3, domain=DOM3, eval=lambda u: basis_im(1)
    )
    a = sample_points(P3, n_per_axis=4)
    b = sample_points(P3, n_per_axis=4)
    assert a.shape == (16, 3)
    assert np.array_equal(a, b)


def test_second_fundamental_form_wrapper():
    P = latitude_patch(0.7)
    II = second_fundamental_form(P, U0)
    assert II.shape == (3, 3, 7)
    ct = 1.0 / np.tan(0.7)
    assert np.linalg.norm(II[1, 1]) == pytest.approx(ct, abs=1e-8)


def test_ricci_and_quasi_einstein():
    K = np.diag([5.0 / 16.0, -15.0 / 16.0, -15.0 / 16.0])
    R = ricci(K)
    assert np.allclose(R, np.diag([1.0 / 8.0, 11.0 / 8.0, 11.0 / 8.0]))
    assert is_quasi_einstein(K)
    rng = np.random.default_rng(2)
    K2 = gauss_map(random_harmonic_cubic(rng))
    assert not is_quasi_einstein(K2)


def test_chen_delta_eigenvalue_identity():
    rng = np.random.default_rng(42)
    for _ in range(10):
        h = random_harmonic_cubic(rng)
        d = chen_delta(h)
        lam = float(np.max(np.linalg.eigvalsh(ricci(gauss_map(h)))))
        assert d == pytest.approx(lam, abs=1e-7)
    # frozen anchor for the quasi-Einstein example
    assert chen_delta(normal_form(2 * np.sqrt(5), 0, 0, 0)) == pytest.approx(
        11.0 / 8.0, abs=1e-8
    )
    # vanishing cubic: round sphere, delta = scalar/2 - 1 = 2
    assert chen_delta(np.zeros((3, 3, 3))) == pytest.approx(2.0, abs=1e-12)


def test_austere_classification():
    s5, s10 = np.sqrt(5.0), np.sqrt(10.0)
    assert is_austere(np.zeros((3, 3, 3)))
    assert not is_austere(normal_form(2 * s5, 0, 0, 0))
    assert is_austere(normal_form(0, 3, 0, 0))
    assert is_austere(normal_form(0, 0, 2, 0))
    assert is_austere(normal_form(2 * s5, 0, 2 * s10, 0))
    # an austere family whose generic member has trivial stabilizer
    assert is_austere(normal_form(1, 1, 1, 0))
    assert not is_austere(normal_form(1, 2, 3, 4))
    # residual scale separation
    assert austere_residual(normal_form(2 * s5, 0, 0, 0)) > 1e-3
    assert austere_residual(normal_form(0, 0, 2, 0)) < 1e-14
    with pytest.raises(ValueError):
        is_austere(np.ones((3, 3, 3)))  # not harmonic


def test_chart_validation():
    P = ImmersionPatch(
        dim=3, domain=DOM3, eval=lambda u: 1.5 * basis_im(1)
    )
    with pytest.raises(ValueError):
        frame_at(P, U0)
    with pytest.raises(ValueError):
        ImmersionPatch(dim=2, domain=DOM3, eval=lambda u: basis_im(1))
    with pytest.raises(ValueError):
        riemann_K(
            ImmersionPatch(dim=2, domain=DOM3[:2], eval=lambda u: basis_im(1)), U0[:2]
        )
