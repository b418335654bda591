"""Pointwise differential geometry of immersed patches in the six-sphere.

An `ImmersionPatch` wraps a chart map from a parameter box into the unit
sphere of Im O together with optional analytic first and second derivative
callbacks.  `frame_at` turns the two-jet at a parameter point into an
orthonormal tangent frame, the induced metric, the second fundamental form
taken inside the sphere (ambient Hessian projected off the point and the
tangent space) and the mean curvature vector.

On a Lagrangian 3-fold the normal bundle is J applied to the tangent bundle
and the second fundamental form collapses into the fundamental cubic
h_ijk = <II(e_i, e_j), J e_k>, a symmetric 3-tensor; it is trace-free
exactly when the immersion is minimal.

Derivatives fall back to central finite differences with one Richardson
extrapolation step whenever an analytic callback is missing, which keeps
first derivatives near 1e-11 and Hessians near 1e-9 in relative error.
Intrinsic curvature (`riemann_K`) is always computed from the metric alone,
so comparing it with the algebraic curvature of the fundamental cubic is a
genuine cross-check of the whole jet pipeline.
"""

from __future__ import annotations

import dataclasses
from typing import Callable, Sequence

import numpy as np
import scipy.optimize

from .cubics import gauss_map, random_rotation, symmetrize3, trace_vector
from .forms import im_omega_at, project_tangent
from .octonion import cross, phi0

__all__ = [
    "ImmersionPatch",
    "FrameAtPoint",
    "frame_at",
    "sample_points",
    "induced_metric",
    "second_fundamental_form",
    "fundamental_cubic",
    "riemann_K",
    "ricci",
    "lagrangian_residual",
    "pseudoholomorphic_residual",
    "volume_calibration_residual",
    "gauss_curvature",
    "sectional_curvature",
    "chen_delta",
    "is_quasi_einstein",
    "is_austere",
    "austere_residual",
]


@dataclasses.dataclass
class ImmersionPatch:
    """A chart of a submanifold of the unit sphere in Im O.

    eval maps a length-`dim` parameter vector to a unit 7-vector.  jac and
    hess, when given, return the 7 x dim Jacobian and the dim x dim x 7
    array of second partials; jet_mode records whether first derivatives
    come from a callback ("analytic") or finite differences ("fd").
    """

    dim: int
    domain: tuple[tuple[float, float], ...]
    eval: Callable[[np.ndarray], np.ndarray]
    jet_mode: str = "fd"
    jac: Callable[[np.ndarray], np.ndarray] | None = None
    hess: Callable[[np.ndarray], np.ndarray] | None = None
    name: str = ""
    anchor: np.ndarray | None = None
    extras: dict = dataclasses.field(default_factory=dict)

    def __post_init__(self):
        if len(self.domain) != self.dim:
            raise ValueError("domain must give one interval per parameter")
        if self.jac is not None:
            self.jet_mode = "analytic"
        if self.anchor is None:
            self.anchor = np.array([0.5 * (a + b) for a, b in self.domain])


@dataclasses.dataclass
class FrameAtPoint:
    """Two-jet data at one parameter point, in an orthonormal tangent frame."""

    param: np.ndarray
    point: np.ndarray  # unit 7-vector
    frame: np.ndarray  # dim x 7, rows orthonormal tangent vectors
    coeffs: np.ndarray  # dim x dim, frame[i] = jacobian @ coeffs[:, i]
    metric: np.ndarray  # dim x dim, from the raw chart Jacobian
    second_fundamental: np.ndarray  # dim x dim x 7 normal vectors
    mean_curvature: np.ndarray  # length-7 trace of II


# ------------------------------------------------------------ differencing


def _fd_jac(f: Callable, u: np.ndarray, h: float = 1e-5) -> np.ndarray:
    """Central differences with one Richardson step; columns are partials."""
    u = np.asarray(u, dtype=float)
    cols = []
    for a in range(u.size):
        e = np.zeros_like(u)
        e[a] = 1.0
        d1 = (f(u + h * e) - f(u - h * e)) / (2.0 * h)
        d2 = (f(u + 0.5 * h * e) - f(u - 0.5 * h * e)) / h
        cols.append((4.0 * d2 - d1) / 3.0)
    return np.stack(cols, axis=-1)


def _fd_hess_from_jac(jac: Callable, u: np.ndarray, h: float = 1e-5) -> np.ndarray:
    """d(jac)/du_a by Richardson central differences; returns [a, b, :]."""
    u = np.asarray(u, dtype=float)
    n = u.size
    rows = []
    for a in range(n):
        e = np.zeros_like(u)
        e[a] = 1.0
        d1 = (jac(u + h * e) - jac(u - h * e)) / (2.0 * h)
        d2 = (jac(u + 0.5 * h * e) - jac(u - 0.5 * h * e)) / h
        rows.append(((4.0 * d2 - d1) / 3.0).T)  # dim x 7
    H = np.stack(rows, axis=0)  # a, b, 7
    return 0.5 * (H + np.transpose(H, (1, 0, 2)))


def _fd_hess_from_eval(f: Callable, u: np.ndarray, h: float = 2e-3) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    n = u.size
    f0 = f(u)

    def second(a, b, step):
        ea = np.zeros_like(u)
        ea[a] = step
        if a == b:
            return (f(u + ea) - 2.0 * f0 + f(u - ea)) / step**2
        eb = np.zeros_like(u)
        eb[b] = step
        return (
            f(u + ea + eb) - f(u + ea - eb) - f(u - ea + eb) + f(u - ea - eb)
        ) / (4.0 * step**2)

    H = np.zeros((n, n, f0.size))
    for a in range(n):
        for b in range(a, n):
            d1 = second(a, b, h)
            d2 = second(a, b, 0.5 * h)
            val = (4.0 * d2 - d1) / 3.0
            H[a, b] = val
            H[b, a] = val
    return H


def patch_jac(patch: ImmersionPatch, u: np.ndarray) -> np.ndarray:
    if patch.jac is not None:
        return np.asarray(patch.jac(np.asarray(u, dtype=float)))
    return _fd_jac(patch.eval, u)


def patch_hess(patch: ImmersionPatch, u: np.ndarray) -> np.ndarray:
    if patch.hess is not None:
        return np.asarray(patch.hess(np.asarray(u, dtype=float)))
    if patch.jac is not None:
        return _fd_hess_from_jac(patch.jac, u)
    return _fd_hess_from_eval(patch.eval, u)


# ------------------------------------------------------------------ frames


def _gram_schmidt(cols: np.ndarray):
    """Sequential Gram-Schmidt on the columns; returns (Q, R) with
    orthonormal columns Q and upper triangular R, cols = Q R."""
    cols = np.asarray(cols, dtype=float)
    m, n = cols.shape
    Q = np.zeros((m, n))
    R = np.zeros((n, n))
    for j in range(n):
        v = cols[:, j].copy()
        for i in range(j):
            R[i, j] = np.dot(Q[:, i], v)
            v -= R[i, j] * Q[:, i]
        # second pass for orthogonality at machine precision
        for i in range(j):
            c = np.dot(Q[:, i], v)
            R[i, j] += c
            v -= c * Q[:, i]
        R[j, j] = np.linalg.norm(v)
        if R[j, j] < 1e-13:
            raise ValueError("chart Jacobian is rank deficient at this point")
        Q[:, j] = v / R[j, j]
    return Q, R


def frame_at(patch: ImmersionPatch, u: np.ndarray) -> FrameAtPoint:
    u = np.asarray(u, dtype=float)
    p = np.asarray(patch.eval(u), dtype=float)
    n = np.linalg.norm(p)
    if abs(n - 1.0) > 1e-8:
        raise ValueError(f"chart leaves the unit sphere at {u}: |p| = {n}")
    p = p / n
    J = patch_jac(patch, u)
    metric = J.T @ J
    # tangency cleanup (FD jacobians drift off tangency at ~1e-11)
    Jt = J - np.outer(p, p @ J)
    Q, R = _gram_schmidt(Jt)
    coeffs = np.linalg.solve(R, np.eye(patch.dim))
    H = patch_hess(patch, u)
    # II(e_i, e_j): push the parameter Hessian through the frame
    # coefficients, then remove radial and tangential parts
    Hf = np.einsum("ai,bj,abn->ijn", coeffs, coeffs, H)
    Hf = Hf - np.einsum("ijn,n,m->ijm", Hf, p, p)
    tang = np.einsum("ijn,kn->ijk", Hf, Q.T)
    Hf = Hf - np.einsum("ijk,kn->ijn", tang, Q.T)
    mean = np.einsum("iin->n", Hf)
    return FrameAtPoint(
        param=u,
        point=p,
        frame=Q.T,
        coeffs=coeffs,
        metric=metric,
        second_fundamental=Hf,
        mean_curvature=mean,
    )


def sample_points(
    patch: ImmersionPatch,
    n_per_axis: int = 32,
    margin: float = 1e-3,
    seed: int = 0,
) -> np.ndarray:
    """Deterministic parameter samples: a full mesh for 2-parameter charts,
    n_per_axis^2 uniform draws for 3-parameter ones."""
    lo = np.array([a for a, _ in patch.domain])
    hi = np.array([b for _, b in patch.domain])
    span = hi - lo
    lo2 = lo + margin * span
    hi2 = hi - margin * span
    if patch.dim == 2:
        xs = [np.linspace(lo2[k], hi2[k], n_per_axis) for k in range(2)]
        G = np.meshgrid(*xs, indexing="ij")
        return np.stack([g.ravel() for g in G], axis=-1)
    rng = np.random.default_rng(seed)
    m = n_per_axis * n_per_axis
    return lo2 + rng.random((m, patch.dim)) * (hi2 - lo2)


# ------------------------------------------------------- named quantities


def induced_metric(patch: ImmersionPatch, u: np.ndarray) -> np.ndarray:
    J = patch_jac(patch, u)
    return J.T @ J


def second_fundamental_form(patch: ImmersionPatch, u: np.ndarray) -> np.ndarray:
    """II in an orthonormal tangent frame, as a dim x dim x 7 array of
    ambient normal vectors (see frame_at for the frame itself)."""
    return frame_at(patch, u).second_fundamental


def fundamental_cubic(
    patch: ImmersionPatch, u: np.ndarray, asym_tol: float = 1e-3
) -> np.ndarray:
    """h_ijk = <II(e_i, e_j), J e_k> for a Lagrangian 3-fold chart.

    Raises when the raw tensor is far from symmetric, which happens exactly
    when the patch is not Lagrangian (then J e_k is not normal)."""
    if patch.dim != 3:
        raise ValueError("the fundamental cubic needs a 3-parameter chart")
    fr = frame_at(patch, u)
    Jf = np.stack([cross(fr.point, fr.frame[k]) for k in range(3)])
    raw = np.einsum("ijn,kn->ijk", fr.second_fundamental, Jf)
    scale = max(1.0, float(np.max(np.abs(raw))))
    sym = symmetrize3(raw)
    if float(np.max(np.abs(raw - sym))) > asym_tol * scale:
        raise ValueError(
            "second fundamental form is not J-symmetric here; "
            "the chart does not look Lagrangian"
        )
    return sym


def _christoffel(gfun: Callable, u: np.ndarray, h: float) -> np.ndarray:
    n = u.size
    dg = np.empty((n, n, n))
    for a in range(n):
        e = np.zeros(n)
        e[a] = 1.0
        d1 = (gfun(u + h * e) - gfun(u - h * e)) / (2.0 * h)
        d2 = (gfun(u + 0.5 * h * e) - gfun(u - 0.5 * h * e)) / h
        dg[a] = (4.0 * d2 - d1) / 3.0
    ginv = np.linalg.inv(gfun(u))
    # Gamma^c_ab = 1/2 g^{cd} (d_a g_bd + d_b g_ad - d_d g_ab)
    # dg[a, b, d] = d_a g_bd, so the three terms are the transposes
    # identity, (1,0,2) and (1,2,0) respectively
    return 0.5 * np.einsum(
        "cd,abd->cab",
        ginv,
        dg + np.transpose(dg, (1, 0, 2)) - np.transpose(dg, (1, 2, 0)),
    )


def riemann_K(patch: ImmersionPatch, u: np.ndarray) -> np.ndarray:
    """Intrinsic curvature matrix of a 3-parameter chart, in the same
    orthonormal frame as `fundamental_cubic`:

        K_ii = R(e_j, e_k, e_j, e_k) - 1,   K_ij = R(e_j, e_k, e_k, e_i)

    for (i, j, k) cyclic, computed purely from the induced metric.
    """
    if patch.dim != 3:
        raise ValueError("riemann_K needs a 3-parameter chart")
    u = np.asarray(u, dtype=float)
    n = patch.dim

    def gfun(v):
        return induced_metric(patch, v)

    h1, h2 = 1e-4, 1e-3
    dGamma = np.empty((n, n, n, n))
    for a in range(n):
        e = np.zeros(n)
        e[a] = 1.0
        d1 = (
            _christoffel(gfun, u + h2 * e, h1) - _christoffel(gfun, u - h2 * e, h1)
        ) / (2.0 * h2)
        d2 = (
            _christoffel(gfun, u + 0.5 * h2 * e, h1)
            - _christoffel(gfun, u - 0.5 * h2 * e, h1)
        ) / h2
        dGamma[a] = (4.0 * d2 - d1) / 3.0
    Gamma = _christoffel(gfun, u, h1)
    g = gfun(u)
    # R^l_{kab} = d_a Gamma^l_{bk} - d_b Gamma^l_{ak}
    #             + Gamma^l_{ae} Gamma^e_{bk} - Gamma^l_{be} Gamma^e_{ak}
    Rup = np.empty((n, n, n, n))
    for l in range(n):
        for k in range(n):
            for a in range(n):
                for b in range(n):
                    Rup[l, k, a, b] = (
                        dGamma[a, l, b, k]
                        - dGamma[b, l, a, k]
                        + sum(
                            Gamma[l, a, e] * Gamma[e, b, k]
                            - Gamma[l, b, e] * Gamma[e, a, k]
                            for e in range(n)
                        )
                    )
    # Rm(d_a, d_b, d_k, d_d) = g_{dl} R^l_{kab}
    Rm = np.einsum("dl,lkab->abkd", g, Rup)
    fr = frame_at(patch, u)
    C = fr.coeffs  # frame[i] corresponds to parameter vector C[:, i]
    # R4[i,j,k,l] = Rm(E_i, E_j, E_l, E_k) = <R(E_i, E_j) E_l, E_k>
    R4 = np.einsum("abkd,ai,bj,kq,dl->ijql", Rm, C, C, C, C)
    # with this convention R4[i,j,i,j] is the sectional curvature of (i, j)
    K = np.empty((3, 3))
    for (i, j, k) in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        K[i, i] = R4[j, k, k, j] - 1.0
        val = R4[j, k, i, k]
        K[i, j] = val
        K[j, i] = val
    return K


def ricci(K: np.ndarray) -> np.ndarray:
    """Ricci matrix from the curvature matrix: Ric = (tr K + 2) I - K."""
    K = np.asarray(K, dtype=float)
    return (np.trace(K) + 2.0) * np.eye(3) - K


# ------------------------------------------------------------- residuals


def _frame_iter(patch, points, n_per_axis):
    if points is None:
        points = sample_points(patch, n_per_axis=n_per_axis)
    for u in points:
        yield frame_at(patch, u)


def lagrangian_residual(
    patch: ImmersionPatch,
    points: Sequence[np.ndarray] | None = None,
    n_per_axis: int = 16,
) -> float:
    """sup over samples of |omega(e_i, e_j)| in an orthonormal frame."""
    if patch.dim != 3:
        raise ValueError("Lagrangian means a 3-parameter chart")
    worst = 0.0
    for fr in _frame_iter(patch, points, n_per_axis):
        for i in range(3):
            for j in range(i + 1, 3):
                worst = max(worst, abs(phi0(fr.point, fr.frame[i], fr.frame[j])))
    return worst


def pseudoholomorphic_residual(
    patch: ImmersionPatch,
    points: Sequence[np.ndarray] | None = None,
    n_per_axis: int = 16,
) -> float:
    """sup over samples of |J e_1 -+ e_2|: zero exactly on J-invariant
    tangent planes."""
    if patch.dim != 2:
        raise ValueError("a pseudoholomorphic curve chart has 2 parameters")
    worst = 0.0
    for fr in _frame_iter(patch, points, n_per_axis):
        Je1 = cross(fr.point, fr.frame[0])
        s = 1.0 if np.dot(Je1, fr.frame[1]) >= 0 else -1.0
        worst = max(worst, float(np.linalg.norm(Je1 - s * fr.frame[1])))
    return worst


def volume_calibration_residual(
    patch: ImmersionPatch,
    points: Sequence[np.ndarray] | None = None,
    n_per_axis: int = 8,
) -> float:
    """sup over samples of | -ImOmega(e_1, e_2, e_3) - s | with the sign s
    chosen at the anchor point; vanishing means -ImOmega restricts to the
    Riemannian volume form, the special-Lagrangian phase condition."""
    fr0 = frame_at(patch, patch.anchor)
    v0 = -im_omega_at(
        fr0.point,
        project_tangent(fr0.point, fr0.frame[0]),
        project_tangent(fr0.point, fr0.frame[1]),
        project_tangent(fr0.point, fr0.frame[2]),
    )
    s = 1.0 if v0 >= 0 else -1.0
    worst = 0.0
    for fr in _frame_iter(patch, points, n_per_axis):
        val = -im_omega_at(
            fr.point,
            project_tangent(fr.point, fr.frame[0]),
            project_tangent(fr.point, fr.frame[1]),
            project_tangent(fr.point, fr.frame[2]),
        )
        worst = max(worst, abs(val - s))
    return worst


# ------------------------------------------------------------- curvature


def gauss_curvature(patch: ImmersionPatch, u: np.ndarray) -> float:
    """Intrinsic curvature of a 2-parameter chart via the ambient sphere:
    K = 1 + <II_11, II_22> - |II_12|^2."""
    if patch.dim != 2:
        raise ValueError("gauss_curvature needs a 2-parameter chart")
    II = frame_at(patch, u).second_fundamental
    return float(1.0 + np.dot(II[0, 0], II[1, 1]) - np.dot(II[0, 1], II[0, 1]))


def sectional_curvature(patch: ImmersionPatch, u: np.ndarray, i: int, j: int) -> float:
    II = frame_at(patch, u).second_fundamental
    return float(1.0 + np.dot(II[i, i], II[j, j]) - np.dot(II[i, j], II[i, j]))


def _riemann4_from_cubic(h: np.ndarray) -> np.ndarray:
    R4 = np.einsum("ikq,jlq->ijkl", h, h) - np.einsum("ilq,jkq->ijkl", h, h)
    d = np.eye(3)
    R4 += np.einsum("ik,jl->ijkl", d, d) - np.einsum("il,jk->ijkl", d, d)
    return R4


def chen_delta(h: np.ndarray, grid: int = 32, descent_steps: int = 20) -> float:
    """delta = (scalar curvature)/2 - inf over tangent planes of the
    sectional curvature, computed from the fundamental cubic by a mesh over
    the projective plane of normals plus a shrinking pattern search."""
    h = np.asarray(h, dtype=float)
    R4 = _riemann4_from_cubic(h)

    def sec_perp(nvec):
        P = np.eye(3) - np.outer(nvec, nvec)
        return 0.5 * float(np.einsum("ijkl,ik,jl->", R4, P, P))

    def n_of(theta, phi):
        st = np.sin(theta)
        return np.array([st * np.cos(phi), st * np.sin(phi), np.cos(theta)])

    best = (np.inf, 0.0, 0.0)
    for theta in np.linspace(0.0, np.pi, grid):
        for phi in np.linspace(0.0, np.pi, grid, endpoint=False):
            val = sec_perp(n_of(theta, phi))
            if val < best[0]:
                best = (val, theta, phi)
    val, theta, phi = best
    step = np.pi / grid
    for _ in range(descent_steps):
        moved = False
        for dt, dp in ((step, 0), (-step, 0), (0, step), (0, -step)):
            cand = sec_perp(n_of(theta + dt, phi + dp))
            if cand < val:
                val, theta, phi = cand, theta + dt, phi + dp
                moved = True
        if not moved:
            step *= 0.5
    K = gauss_map(h)
    return float(np.trace(K) + 3.0 - val)


def is_quasi_einstein(K: np.ndarray, tol: float = 1e-6) -> bool:
    """Whether the Ricci tensor built from K has a repeated eigenvalue."""
    w = np.sort(np.linalg.eigvalsh(ricci(K)))
    scale = max(1.0, float(np.max(np.abs(w))))
    return bool(np.min(np.diff(w)) <= tol * scale)


# --------------------------------------------------------------- austere


def _rodrigues(w: np.ndarray) -> np.ndarray:
    theta = np.linalg.norm(w)
    Wh = np.array(
        [[0.0, -w[2], w[1]], [w[2], 0.0, -w[0]], [-w[1], w[0], 0.0]]
    )
    if theta < 1e-12:
        return np.eye(3) + Wh + 0.5 * (Wh @ Wh)
    return (
        np.eye(3)
        + (np.sin(theta) / theta) * Wh
        + ((1.0 - np.cos(theta)) / theta**2) * (Wh @ Wh)
    )


def _austere_objective(h_unit: np.ndarray):
    def f(w, R0):
        R = _rodrigues(w) @ R0
        hr = np.einsum("ai,bj,ck,ijk->abc", R, R, R, h_unit)
        # slice matrices have zero trace (harmonicity), so the spectrum is
        # {0, +-lam} exactly when the determinant vanishes
        return sum(np.linalg.det(2.0 * hr[i]) ** 2 for i in range(3))

    return f


def austere_residual(h: np.ndarray, n_random: int = 16, seed: int = 3) -> float:
    """Minimum over frames of the sum of squared slice determinants for the
    unit-normalized cubic: zero exactly on austere cubics."""
    h = np.asarray(h, dtype=float)
    nh = float(np.sqrt(np.sum(h * h)))
    if nh < 1e-14:
        return 0.0
    hu = h / nh
    if float(np.max(np.abs(trace_vector(hu)))) > 1e-6:
        raise ValueError("austere analysis expects a harmonic cubic")
    obj = _austere_objective(hu)
    _, V = np.linalg.eigh(gauss_map(hu))
    if np.linalg.det(V) < 0:
        V[:, 0] = -V[:, 0]
    seeds = [np.eye(3), V.T]
    cyc = np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]], dtype=float)
    seeds.append(cyc @ V.T)
    seeds.append(cyc @ cyc @ V.T)
    rng = np.random.default_rng(seed)
    for _ in range(n_random):
        seeds.append(random_rotation(rng))
    best = np.inf
    for R0 in seeds:
        res = scipy.optimize.minimize(
            obj,
            np.zeros(3),
            args=(R0,),
            method="BFGS",
            options={"maxiter": 80, "gtol": 1e-14},
        )
        best = min(best, float(res.fun))
        if best < 1e-24:
            break
    return best


def is_austere(h: np.ndarray, tol: float = 1e-10, **kw) -> bool:
    """Whether some rotation takes the cubic to a frame where every slice
    matrix has symmetric spectrum {0, +lam, -lam}."""
    return austere_residual(h, **kw) <= tol
