"""Tubes over pseudoholomorphic curves, rulings, and moving frames.

The machinery here certifies the circle-bundle side of the story: adapted
unitary frames along a pseudoholomorphic surface, the Maurer-Cartan form
of the aggregate frame and its structure equations, torsion extraction,
tube constructors over a chosen normal 2-plane bundle, pointwise ruling
detection on Lagrangian 3-folds, and the holomorphic 2-form test for
circle lifts (Omega-check): the lift x = f3 + conj(f3) sweeps a ruled
Lagrangian exactly when kappa_32 ^ kappa_31 vanishes, and that vanishing
is measured together with the direct pullback of the fundamental 2-form.

Finite differencing uses two scales: a fine Richardson stencil for the
frame derivative inside the Maurer-Cartan solve, and a coarser one for
exterior derivatives of the extracted 1-forms.
"""

from __future__ import annotations

import dataclasses

import numpy as np
from scipy.integrate import solve_ivp

from .cubics import so3_act
from .jets import ImmersionPatch, frame_at, fundamental_cubic
from .octonion import basis_im, cross, phi0

__all__ = [
    "PholoFrame",
    "pholo_frame",
    "UnitaryFramePath",
    "adapted_frame_path",
    "frame_validation_residual",
    "MCComponents",
    "maurer_cartan_extract",
    "torsion",
    "TorsionResult",
    "omega_check_residual",
    "n1_gauge",
    "n2_gauge",
    "perturbed_gauge",
    "TubeSpec",
    "bundle_N1",
    "bundle_N2",
    "bundle_hopf",
    "make_tube",
    "make_swept_orbit_tube",
    "RulingDirection",
    "RulingReport",
    "detect_ruling",
    "fit_circle",
    "circle_frame_ode",
    "CircleFrameResult",
    "fiber_circle_points",
    "align_cubic_frames",
]

_METRIC_WEIGHTS = np.diag([1.0, 2.0, 2.0, 2.0, 2.0, 2.0, 2.0]).astype(complex)


# ----------------------------------------------------------- pholo frames


@dataclasses.dataclass
class PholoFrame:
    """Adapted frame at a point of a non-totally-geodesic
    pseudoholomorphic surface: real sextet (t1, t2, n1, n2, b1, b2) and
    the complex triple (t, n, b), plus the invariant |h|."""

    point: np.ndarray
    t1: np.ndarray
    t2: np.ndarray
    n1: np.ndarray
    n2: np.ndarray
    b1: np.ndarray
    b2: np.ndarray
    t: np.ndarray
    n: np.ndarray
    b: np.ndarray
    h_norm: float


def pholo_frame(
    patch: ImmersionPatch,
    u: np.ndarray,
    tangent_angle: float = 0.0,
    tol: float = 1e-8,
) -> PholoFrame:
    """Adapted frame of a pseudoholomorphic 2-parameter chart at u.

    n1 = II(t1,t1)/|h|, n2 = II(t1,t2)/|h|, b1 = t1 x n1,
    b2 = t2 x (II(t2,t2)/|h|); the complex vectors are f = (v - i Jv)/2.
    Raises at a totally geodesic point, reporting the offending |h|.
    """
    if patch.dim != 2:
        raise ValueError("pholo_frame needs a 2-parameter chart")
    fr = frame_at(patch, u)
    p = fr.point
    e1, e2 = fr.frame[0], fr.frame[1]
    Je1 = cross(p, e1)
    s = 1.0 if float(np.dot(Je1, e2)) >= 0.0 else -1.0
    if np.linalg.norm(Je1 - s * e2) > 1e-6:
        raise ValueError("chart is not pseudoholomorphic at this point")
    c, sn = np.cos(tangent_angle), np.sin(tangent_angle)
    # coordinates of t1 and t2 = J t1 in the (e1, e2) frame
    a1 = np.array([c, sn * s])
    a2 = np.array([-sn, c * s])
    II = fr.second_fundamental
    h = lambda x, y: np.einsum("i,j,ijk->k", x, y, II)
    h11 = h(a1, a1)
    h_norm = float(np.linalg.norm(h11))
    if h_norm < tol:
        raise ValueError(
            f"totally geodesic point: |h| = {h_norm:.3e} below tolerance"
        )
    t1 = c * e1 + sn * s * e2
    t2 = cross(p, t1)
    n1 = h11 / h_norm
    n2 = h(a1, a2) / h_norm
    b1 = cross(t1, n1)
    b2 = cross(t2, h(a2, a2) / h_norm)
    mk = lambda v: 0.5 * (v - 1j * cross(p, v))
    return PholoFrame(
        point=p, t1=t1, t2=t2, n1=n1, n2=n2, b1=b1, b2=b2,
        t=mk(t1), n=mk(n1), b=mk(b1), h_norm=h_norm,
    )


def _aggregate(u_vec, f1, f2, f3) -> np.ndarray:
    return np.column_stack(
        [u_vec.astype(complex), f1, f2, f3, f1.conj(), f2.conj(), f3.conj()]
    )


def frame_validation_residual(g: np.ndarray) -> float:
    """Worst violation of the unitary-frame conditions for an aggregate
    g = [u, f1, f2, f3, conj f1, conj f2, conj f3]: norms, unitarity of
    the weighted inverse, the J-eigenvector property u x f = i f, and the
    cross-product triple relations."""
    u = g[:, 0].real
    f = [g[:, 1], g[:, 2], g[:, 3]]
    res = abs(np.linalg.norm(u) - 1.0)
    res = max(res, float(np.max(np.abs(g[:, 0].imag))))
    for fi in f:
        res = max(res, abs(np.linalg.norm(fi) - 1.0 / np.sqrt(2.0)))
        res = max(res, float(np.max(np.abs(cross(u, fi) - 1j * fi))))
    res = max(
        res,
        float(np.max(np.abs(_METRIC_WEIGHTS @ g.conj().T @ g - np.eye(7)))),
    )
    res = max(res, float(np.max(np.abs(cross(f[0], f[0].conj()) - 0.5j * u))))
    res = max(res, float(np.max(np.abs(cross(f[1], f[2]) - f[0].conj()))))
    res = max(res, float(np.max(np.abs(cross(f[2], f[0]) - f[1].conj()))))
    res = max(res, float(np.max(np.abs(cross(f[0], f[1]) - f[2].conj()))))
    return res


@dataclasses.dataclass
class UnitaryFramePath:
    """A smooth field of unitary frame aggregates over a 2-parameter
    domain; `at(u)` returns the 7x7 complex aggregate."""

    at: object
    domain: tuple
    name: str = ""

    def validation_residual(self, points) -> float:
        return max(frame_validation_residual(self.at(u)) for u in points)


def n2_gauge(patch: ImmersionPatch):
    """(f2, f3) = (n, b): the tube direction f3 spans the second normal
    bundle."""

    def lift(u):
        fr = pholo_frame(patch, u)
        return fr.n, fr.b

    return lift


def n1_gauge(patch: ImmersionPatch):
    """(f2, f3) = (-b, n): the tube direction f3 spans the first normal
    bundle; the sign keeps the cross-product triple relations."""

    def lift(u):
        fr = pholo_frame(patch, u)
        return -fr.b, fr.n

    return lift


def perturbed_gauge(lift, amplitude: float = 0.2):
    """Mix (f2, f3) by a non-constant rotation in their plane.  The
    result is still a valid unitary frame (the rotation respects the
    cross-product relations) but the f3 direction no longer stays inside
    one normal line, so the circle-lift correspondence breaks."""

    def new_lift(u):
        f2, f3 = lift(u)
        rho = amplitude * np.sin(u[0] + 2.0 * u[1])
        c, s = np.cos(rho), np.sin(rho)
        return c * f2 - s * f3, s * f2 + c * f3

    return new_lift


def adapted_frame_path(
    patch: ImmersionPatch, gauge: str = "N2", name: str = ""
) -> UnitaryFramePath:
    if gauge == "N2":
        lift = n2_gauge(patch)
    elif gauge == "N1":
        lift = n1_gauge(patch)
    else:
        raise ValueError(f"unknown gauge {gauge!r}; use 'N1' or 'N2'")

    def at(u):
        fr = pholo_frame(patch, u)
        f2, f3 = lift(u)
        return _aggregate(fr.point, fr.t, f2, f3)

    return UnitaryFramePath(
        at=at, domain=patch.domain, name=name or f"{patch.name}:{gauge}"
    )


# ------------------------------------------------- Maurer-Cartan extraction


def _dframe(at, u, a, delta, domain):
    """Richardson central derivative of the aggregate along parameter a,
    falling back to a one-sided stencil at the domain boundary."""
    lo, hi = domain[a]
    step = np.zeros(len(u))
    step[a] = 1.0

    def central(d):
        return (at(u + d * step) - at(u - d * step)) / (2.0 * d)

    def forward(d, sgn):
        return sgn * (
            -3.0 * at(u) + 4.0 * at(u + sgn * d * step) - at(u + sgn * 2 * d * step)
        ) / (2.0 * d)

    room_lo, room_hi = u[a] - lo, hi - u[a]
    if min(room_lo, room_hi) >= delta:
        return (4.0 * central(delta / 2.0) - central(delta)) / 3.0
    sgn = 1.0 if room_hi > room_lo else -1.0
    return (4.0 * forward(delta / 2.0, sgn) - forward(delta, sgn)) / 3.0


def _phi_at(at, u, domain, delta=1e-3):
    """phi_a = g^{-1} d_a g for a = 0, 1; g^{-1} via the weighted
    Hermitian transpose."""
    g = at(u)
    ginv = _METRIC_WEIGHTS @ g.conj().T
    return [ginv @ _dframe(at, u, a, delta, domain) for a in (0, 1)]


def _theta_kappa(phi):
    """theta (3-vector) and kappa (3x3) from one phi sample; the frame
    block structure puts -2i theta in the first column."""
    theta = phi[1:4, 0] / (-2.0j)
    kappa = phi[1:4, 1:4]
    return theta, kappa


def _cross_mat(v):
    """[v] with [v] w = v x w for complex 3-vectors."""
    return np.array(
        [
            [0.0, -v[2], v[1]],
            [v[2], 0.0, -v[0]],
            [-v[1], v[0], 0.0],
        ],
        dtype=complex,
    )


@dataclasses.dataclass
class MCComponents:
    """Sampled Maurer-Cartan data: theta[i][a], kappa[i][a] for sample
    point i and parameter direction a, plus residual summaries."""

    points: list
    theta: list
    kappa: list
    skew_residual: float
    trace_residual: float
    theta_struct_residual: float
    kappa_struct_residual: float


def maurer_cartan_extract(
    path: UnitaryFramePath,
    points,
    inner_delta: float = 1e-3,
    outer_delta: float = 1e-2,
    structure_points: int = 4,
) -> MCComponents:
    """Extract theta and kappa at the given parameter points and measure
    the structure-equation residuals at a subset of them.

    d theta = -kappa ^ theta + [conj theta] ^ conj theta
    d kappa = -kappa ^ kappa + 3 theta ^ theta* - (theta^T ^ conj theta) Id
    """
    points = [np.asarray(p, dtype=float) for p in points]
    thetas, kappas = [], []
    skew = tr = 0.0
    for u in points:
        g = path.at(u)
        vr = frame_validation_residual(g)
        if vr > 1e-6:
            raise ValueError(f"frame not unitary at {u}: residual {vr:.2e}")
        th, ka = zip(*(_theta_kappa(p) for p in _phi_at(path.at, u, path.domain, inner_delta)))
        thetas.append(list(th))
        kappas.append(list(ka))
        for k in ka:
            skew = max(skew, float(np.max(np.abs(k + k.conj().T))))
            tr = max(tr, abs(complex(np.trace(k))))

    def tk_field(u):
        th, ka = zip(*(_theta_kappa(p) for p in _phi_at(path.at, u, path.domain, inner_delta)))
        return np.stack(th), np.stack(ka)

    th_res = ka_res = 0.0
    for u in points[: max(1, structure_points)]:
        d = outer_delta
        lo = np.array([r[0] for r in path.domain])
        hi = np.array([r[1] for r in path.domain])
        if np.any(u - 2 * d < lo) or np.any(u + 2 * d > hi):
            continue

        def deriv(a):
            step = np.zeros(2)
            step[a] = 1.0

            def cen(dd):
                tp, kp = tk_field(u + dd * step)
                tm, km = tk_field(u - dd * step)
                return (tp - tm) / (2 * dd), (kp - km) / (2 * dd)

            t1, k1 = cen(d / 2.0)
            t2, k2 = cen(d)
            return (4 * t1 - t2) / 3.0, (4 * k1 - k2) / 3.0

        dth0, dka0 = deriv(0)
        dth1, dka1 = deriv(1)
        th, ka = tk_field(u)
        # exterior derivative on the 2-dim parameter space
        dtheta = dth0[1] - dth1[0]
        dkappa = dka0[1] - dka1[0]
        rhs_t = (
            -(ka[0] @ th[1] - ka[1] @ th[0])
            + _cross_mat(th[0].conj()) @ th[1].conj()
            - _cross_mat(th[1].conj()) @ th[0].conj()
        )
        wedge = lambda A, B: A @ B
        rhs_k = (
            -(wedge(ka[0], ka[1]) - wedge(ka[1], ka[0]))
            + 3.0 * (np.outer(th[0], th[1].conj()) - np.outer(th[1], th[0].conj()))
            - (th[0] @ th[1].conj() - th[1] @ th[0].conj()) * np.eye(3)
        )
        th_res = max(th_res, float(np.max(np.abs(dtheta - rhs_t))))
        ka_res = max(ka_res, float(np.max(np.abs(dkappa - rhs_k))))
    return MCComponents(
        points=points,
        theta=thetas,
        kappa=kappas,
        skew_residual=skew,
        trace_residual=tr,
        theta_struct_residual=th_res,
        kappa_struct_residual=ka_res,
    )


@dataclasses.dataclass
class TorsionResult:
    k1: complex
    k2: complex
    residual: float


def torsion(patch: ImmersionPatch, u: np.ndarray) -> TorsionResult:
    """Torsion k1 (and k2) of a pseudoholomorphic chart at u, from the
    adapted frame: kappa_32 = k1 theta_1, kappa_21 = k2 theta_1."""
    path = adapted_frame_path(patch, "N2")
    u = np.asarray(u, dtype=float)
    th, ka = zip(*(_theta_kappa(p) for p in _phi_at(path.at, u, path.domain)))
    t1 = np.array([th[0][0], th[1][0]])
    norm2 = float(np.vdot(t1, t1).real)
    if norm2 < 1e-16:
        raise ValueError("tangent form theta_1 vanishes at this point")
    k32 = np.array([ka[0][2, 1], ka[1][2, 1]])
    k21 = np.array([ka[0][1, 0], ka[1][1, 0]])
    k1 = complex(np.vdot(t1, k32) / norm2)
    k2 = complex(np.vdot(t1, k21) / norm2)
    res = max(
        float(np.max(np.abs(k32 - k1 * t1))),
        float(np.max(np.abs(k21 - k2 * t1))),
        float(np.max(np.abs([th[0][1], th[1][1], th[0][2], th[1][2]]))),
    ) / np.sqrt(norm2)
    return TorsionResult(k1=k1, k2=k2, residual=res)


def omega_check_residual(
    patch: ImmersionPatch,
    lift,
    grid: int = 16,
    inner_delta: float = 1e-3,
) -> tuple[float, float]:
    """Joint test of the circle-lift correspondence: returns

      (max |kappa_32 ^ kappa_31| / |theta_1 ^ conj theta_1|,
       max Lagrangian-angle residual of the lift x = f3 + conj f3)

    over a grid x grid sampling of the chart; both vanish together
    exactly when the lift sweeps a ruled Lagrangian."""

    def at(u):
        fr = pholo_frame(patch, u)
        f2, f3 = lift(u)
        return _aggregate(fr.point, fr.t, f2, f3)

    lo = np.array([r[0] for r in patch.domain])
    hi = np.array([r[1] for r in patch.domain])
    pad = 0.02 * (hi - lo)
    axes = [
        np.linspace(lo[a] + pad[a], hi[a] - pad[a], grid) for a in (0, 1)
    ]
    om = lag = 0.0
    dom = patch.domain
    for x0 in axes[0]:
        for x1 in axes[1]:
            u = np.array([x0, x1])
            phis = _phi_at(at, u, dom, inner_delta)
            th, ka = zip(*(_theta_kappa(p) for p in phis))
            area = abs(
                th[0][0] * np.conj(th[1][0]) - th[1][0] * np.conj(th[0][0])
            )
            wedge = ka[0][2, 1] * ka[1][2, 0] - ka[1][2, 1] * ka[0][2, 0]
            om = max(om, abs(wedge) / max(area, 1e-300))
            # direct Lagrangian angle of the lifted surface
            xmap = lambda v: 2.0 * np.real(lift(v)[1])
            dx = [
                _dframe(lambda w: xmap(w), u, a, inner_delta, dom)
                for a in (0, 1)
            ]
            x = xmap(u)
            denom = np.linalg.norm(dx[0]) * np.linalg.norm(dx[1])
            lag = max(lag, abs(phi0(x, dx[0], dx[1])) / max(denom, 1e-300))
    return om, lag


# ------------------------------------------------------------------ tubes


@dataclasses.dataclass
class TubeSpec:
    """Tube data: a 2-parameter base chart, a rule u -> (v1, v2) giving
    an oriented orthonormal pair spanning the circle plane, and the
    radius gamma in (0, pi/2]."""

    base: ImmersionPatch
    plane_bundle: object
    gamma: float
    bundle_name: str = ""


def bundle_N2(base: ImmersionPatch):
    """Second-normal-space circle plane (b1, J b1)."""

    def rule(u):
        fr = pholo_frame(base, u)
        return fr.b1, cross(fr.point, fr.b1)

    return rule


def bundle_N1(base: ImmersionPatch):
    """First-normal-space circle plane (n1, J n1)."""

    def rule(u):
        fr = pholo_frame(base, u)
        return fr.n1, cross(fr.point, fr.n1)

    return rule


def bundle_hopf(base: ImmersionPatch):
    """Circle plane (e1, i p) over a Legendrian base inside the
    equatorial 5-sphere {x1 = 0}; raises if the base fails either
    condition."""
    e1 = basis_im(1)

    def J0(p):
        q = np.zeros(7)
        q[2], q[1] = p[1], -p[2]
        q[4], q[3] = p[3], -p[4]
        q[6], q[5] = p[5], -p[6]
        return q

    def rule(u):
        from .jets import patch_jac

        p = np.asarray(base.eval(u), dtype=float)
        if abs(p[0]) > 1e-8:
            raise ValueError(
                "hopf bundle needs a base inside the equatorial 5-sphere"
            )
        reeb = J0(p)
        if np.max(np.abs(reeb @ patch_jac(base, u))) > 1e-8:
            raise ValueError("hopf bundle needs a Legendrian base surface")
        return e1, reeb

    return rule


_BUNDLES = {"N1": bundle_N1, "N2": bundle_N2, "hopf": bundle_hopf}


def make_tube(
    spec: TubeSpec, name: str = "", fiber_domain: tuple | None = None
) -> ImmersionPatch:
    """Tube of radius gamma: (u, t) -> cos(gamma) p(u) + sin(gamma)
    (cos t v1(u) + sin t v2(u)).  Jets are finite-difference.
    `fiber_domain` restricts the circle parameter; suspension-type tubes
    (where the map collapses at isolated fiber angles) need it."""
    if spec.base.dim != 2:
        raise ValueError("tube base must be a 2-parameter chart")
    if not 0.0 < spec.gamma <= np.pi / 2.0 + 1e-12:
        raise ValueError("tube radius gamma must lie in (0, pi/2]")
    cg, sg = np.cos(spec.gamma), np.sin(spec.gamma)

    def ev(u):
        v1, v2 = spec.plane_bundle(u[:2])
        p = spec.base.eval(u[:2])
        return cg * p + sg * (np.cos(u[2]) * v1 + np.sin(u[2]) * v2)

    dom = (*spec.base.domain, fiber_domain or (1e-2, 2 * np.pi - 1e-2))
    patch = ImmersionPatch(
        dim=3,
        domain=dom,
        eval=ev,
        name=name or f"tube({spec.base.name},{spec.bundle_name},{spec.gamma:.4f})",
        extras={"kind": "lagrangian", "gamma": spec.gamma},
    )
    from .jets import patch_jac

    for u in (patch.anchor, np.array([d[0] + 0.3 * (d[1] - d[0]) for d in dom])):
        s = np.linalg.svd(patch_jac(patch, u), compute_uv=False)
        if s[-1] < 1e-6:
            raise ValueError(f"tube map degenerates at sampled point {u}")
    return patch


def make_swept_orbit_tube(
    action,
    word: tuple[int, ...],
    domain2,
    center: np.ndarray,
    v1: np.ndarray,
    v2: np.ndarray,
    gamma: float,
    name: str,
    extras: dict | None = None,
) -> ImmersionPatch:
    """Tube over a 2-parameter group orbit, parameterized as the group
    sweep of one fiber circle: (u0, u1, t) -> exp(u0 U) exp(u1 U')
    [cos(gamma) c + sin(gamma)(v1 cos t + v2 sin t)].  For an equivariant
    plane bundle this is the same submanifold as `make_tube` over the
    orbit chart, with analytic first and second derivatives."""
    cg, sg = np.cos(gamma), np.sin(gamma)

    def circle(t):
        return cg * center + sg * (np.cos(t) * v1 + np.sin(t) * v2)

    def dcircle(t):
        return sg * (-np.sin(t) * v1 + np.cos(t) * v2)

    def d2circle(t):
        return sg * (-np.cos(t) * v1 - np.sin(t) * v2)

    G = [action.generators[k] for k in word]

    def ev(u):
        return action.exp(word[0], u[0]) @ (action.exp(word[1], u[1]) @ circle(u[2]))

    def jac(u):
        A = action.exp(word[0], u[0])
        B = action.exp(word[1], u[1])
        c, dc = circle(u[2]), dcircle(u[2])
        return np.stack(
            [G[0] @ (A @ (B @ c)), A @ (G[1] @ (B @ c)), A @ (B @ dc)], axis=-1
        )

    def hess(u):
        A = action.exp(word[0], u[0])
        B = action.exp(word[1], u[1])
        c, dc, d2c = circle(u[2]), dcircle(u[2]), d2circle(u[2])
        Bc, Bdc = B @ c, B @ dc
        H = np.zeros((3, 3, 7))
        H[0, 0] = G[0] @ (G[0] @ (A @ Bc))
        H[0, 1] = H[1, 0] = G[0] @ (A @ (G[1] @ Bc))
        H[0, 2] = H[2, 0] = G[0] @ (A @ Bdc)
        H[1, 1] = A @ (G[1] @ (G[1] @ Bc))
        H[1, 2] = H[2, 1] = A @ (G[1] @ Bdc)
        H[2, 2] = A @ (B @ d2c)
        return H

    dom = (*domain2, (1e-2, 2 * np.pi - 1e-2))
    return ImmersionPatch(
        dim=3, domain=dom, eval=ev, jac=jac, hess=hess, name=name,
        extras=extras or {"kind": "lagrangian", "gamma": gamma},
    )


# ---------------------------------------------------------------- rulings


@dataclasses.dataclass
class RulingDirection:
    e_frame: np.ndarray
    ambient: np.ndarray
    r: float
    radius: float
    isolated: bool


@dataclasses.dataclass
class RulingReport:
    isolated: list
    non_isolated: list
    all_directions: bool

    @property
    def radii(self):
        return sorted({round(d.radius, 9) for d in self.isolated})


def _ruling_radius(r: float) -> float:
    return 4.0 / np.sqrt(16.0 + r * r)


def _fibonacci_sphere(n: int) -> np.ndarray:
    k = np.arange(n) + 0.5
    phi = np.arccos(1.0 - 2.0 * k / n)
    theta = np.pi * (1.0 + np.sqrt(5.0)) * k
    return np.stack(
        [np.sin(phi) * np.cos(theta), np.sin(phi) * np.sin(theta), np.cos(phi)],
        axis=-1,
    )


def detect_ruling(
    patch: ImmersionPatch,
    u: np.ndarray,
    seeds: int = 200,
    zero_tol: float = 1e-9,
    iso_tol: float = 1e-5,
) -> RulingReport:
    """Critical directions of the fundamental cubic at u: unit tangents e
    with II(e, e) parallel to Je, i.e. h(e, e, .) parallel to e.  Each
    direction carries r = 4 h(e,e,e) (canonicalized to r >= 0) and the
    fiber radius 4 (16 + r^2)^{-1/2}.  Directions whose projected
    criticality Jacobian is singular are flagged non-isolated; a cubic
    below zero_tol makes every direction critical (radius-1 fibers
    everywhere)."""
    h = fundamental_cubic(patch, u)
    scale = np.linalg.norm(h)
    if scale < zero_tol:
        return RulingReport(isolated=[], non_isolated=[], all_directions=True)
    fr = frame_at(patch, u)

    def crit(e):
        v = np.einsum("i,j,ijk->k", e, e, h)
        return v - (e @ v) * e

    found = []
    for e in _fibonacci_sphere(seeds):
        e = e.copy()
        ok = False
        for _ in range(60):
            g = crit(e)
            if np.linalg.norm(g) < 1e-13 * scale:
                ok = True
                break
            # projected Newton step in an orthonormal basis of e-perp
            W = np.linalg.svd(np.eye(3) - np.outer(e, e))[0][:, :2]
            J = np.zeros((2, 2))
            d = 1e-7
            for a in range(2):
                ep = e + d * W[:, a]
                ep /= np.linalg.norm(ep)
                em = e - d * W[:, a]
                em /= np.linalg.norm(em)
                J[:, a] = W.T @ (crit(ep) - crit(em)) / (2 * d)
            try:
                st = np.linalg.solve(J, -(W.T @ g))
            except np.linalg.LinAlgError:
                break
            if np.linalg.norm(st) > 0.5:
                st *= 0.5 / np.linalg.norm(st)
            e = e + W @ st
            e /= np.linalg.norm(e)
        if ok:
            found.append(e)

    iso, non_iso = [], []
    for e in found:
        if any(
            min(np.linalg.norm(e - d.e_frame), np.linalg.norm(e + d.e_frame)) < 1e-5
            for d in iso + non_iso
        ):
            continue
        W = np.linalg.svd(np.eye(3) - np.outer(e, e))[0][:, :2]
        J = np.zeros((2, 2))
        d = 1e-6
        for a in range(2):
            ep = e + d * W[:, a]
            ep /= np.linalg.norm(ep)
            em = e - d * W[:, a]
            em /= np.linalg.norm(em)
            J[:, a] = W.T @ (crit(ep) - crit(em)) / (2 * d)
        smin = np.linalg.svd(J, compute_uv=False)[-1]
        r = 4.0 * float(np.einsum("i,j,k,ijk->", e, e, e, h))
        if r < 0:
            e, r = -e, -r
        direction = RulingDirection(
            e_frame=e,
            ambient=e @ fr.frame,
            r=r,
            radius=_ruling_radius(r),
            isolated=bool(smin > iso_tol * scale),
        )
        (iso if direction.isolated else non_iso).append(direction)
    return RulingReport(isolated=iso, non_isolated=non_iso, all_directions=False)


# ------------------------------------------------------- circles and fibers


def fit_circle(points) -> tuple[np.ndarray, float, np.ndarray, float]:
    """Least-squares circle through >= 4 ambient points: affine 2-plane
    by SVD, then the algebraic fit 2 y.c + (R^2 - |c|^2) = |y|^2 in plane
    coordinates.  Returns (center, radius, plane basis rows, max
    residual), the residual combining out-of-plane distance and radial
    misfit."""
    P = np.asarray(points, dtype=float)
    if P.ndim != 2 or P.shape[0] < 4:
        raise ValueError("need at least 4 points")
    o = P.mean(axis=0)
    Q = P - o
    _, s, Vt = np.linalg.svd(Q, full_matrices=False)
    if s[1] < 1e-12 * max(s[0], 1.0):
        raise ValueError("points are collinear; no unique circle plane")
    W = Vt[:2]
    y = Q @ W.T
    plane_res = float(np.max(np.abs(Q - y @ W)))
    A = np.column_stack([2.0 * y, np.ones(len(y))])
    rhs = np.sum(y * y, axis=1)
    sol, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    c2, d = sol[:2], sol[2]
    R = float(np.sqrt(max(d + c2 @ c2, 0.0)))
    center = o + c2 @ W
    rad_res = float(np.max(np.abs(np.linalg.norm(y - c2, axis=1) - R)))
    return center, R, W, max(plane_res, rad_res)


@dataclasses.dataclass
class CircleFrameResult:
    points: np.ndarray
    radius: float
    closure: float
    fit_residual: float


def circle_frame_ode(
    r: float,
    x0: np.ndarray | None = None,
    e0: np.ndarray | None = None,
    samples: int = 64,
) -> CircleFrameResult:
    """Integrate the fiber frame system x' = e, e' = -x + (r/4) n,
    n' = -(r/4) e with n(0) = J_{x0} e0 over one period and fit the
    resulting circle; the radius must be 4 (16 + r^2)^{-1/2}."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    if x0 is None:
        x0 = basis_im(1)
    if e0 is None:
        e0 = basis_im(2)
    x0 = np.asarray(x0, dtype=float)
    e0 = np.asarray(e0, dtype=float)
    n0 = cross(x0, e0)
    mu = r / 4.0
    T = 2.0 * np.pi / np.sqrt(1.0 + mu * mu)

    def rhs(_, y):
        x, e, n = y[:7], y[7:14], y[14:]
        return np.concatenate([e, -x + mu * n, -mu * e])

    sol = solve_ivp(
        rhs,
        (0.0, T),
        np.concatenate([x0, e0, n0]),
        t_eval=np.linspace(0.0, T, samples),
        rtol=1e-12,
        atol=1e-12,
        method="DOP853",
    )
    if not sol.success:
        raise RuntimeError(f"fiber integration failed: {sol.message}")
    pts = sol.y[:7].T
    closure = float(np.linalg.norm(sol.y[:, -1] - sol.y[:, 0]))
    _, R, _, res = fit_circle(pts)
    return CircleFrameResult(points=pts, radius=R, closure=closure, fit_residual=res)


def fiber_circle_points(
    patch: ImmersionPatch, u: np.ndarray, direction: RulingDirection, samples: int = 64
) -> np.ndarray:
    """Ambient points of the candidate ruling circle through patch(u) in
    the given critical direction."""
    p = np.asarray(patch.eval(np.asarray(u, dtype=float)), dtype=float)
    return circle_frame_ode(
        direction.r, x0=p, e0=direction.ambient, samples=samples
    ).points


# ----------------------------------------------------------- frame alignment


def align_cubic_frames(
    patch_a: ImmersionPatch,
    u_a: np.ndarray,
    patch_b: ImmersionPatch,
    u_b: np.ndarray,
    attempts: int = 60,
    seed: int = 0,
):
    """Orthogonal map of R^7 sending the adapted frame of patch_a at u_a
    to that of patch_b at u_b, with the tangent gauge rotated so the two
    fundamental cubics match.  Returns (A, gauge residual).

    Both frames are first put into the same calibration orientation
    (sign of -Im Omega on the tangent frame); an orthonormal frame map
    between equally-oriented Lagrangian frames preserves the cross
    product, so when the cubics also match, A aligns the patches by a
    symmetry of the ambient structure."""
    from scipy.optimize import minimize

    from .forms import im_omega_at

    fra, frb = frame_at(patch_a, u_a), frame_at(patch_b, u_b)
    ha = fundamental_cubic(patch_a, u_a)
    hb = fundamental_cubic(patch_b, u_b)
    base_a = fra.frame.copy()

    def cal_sign(point, frame):
        return -im_omega_at(point, frame[0], frame[1], frame[2]) >= 0.0

    if cal_sign(fra.point, base_a) != cal_sign(frb.point, frb.frame):
        flip = np.diag([1.0, 1.0, -1.0])
        base_a = flip @ base_a
        ha = np.einsum("ai,bj,ck,ijk->abc", flip, flip, flip, ha)
    rng = np.random.default_rng(seed)

    def rot(w):
        th = np.linalg.norm(w)
        if th < 1e-14:
            return np.eye(3)
        k = w / th
        K = np.array(
            [[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]]
        )
        return np.eye(3) + np.sin(th) * K + (1 - np.cos(th)) * (K @ K)

    def obj(w):
        return float(np.sum((so3_act(rot(w), ha) - hb) ** 2))

    best_w, best_v = np.zeros(3), obj(np.zeros(3))
    for _ in range(attempts):
        w0 = rng.uniform(-np.pi, np.pi, size=3)
        res = minimize(obj, w0, method="BFGS", options={"gtol": 1e-14})
        if res.fun < best_v:
            best_v, best_w = res.fun, res.x
        if best_v < 1e-22:
            break
    Ta = rot(best_w) @ base_a
    Tb = frb.frame
    Ma = np.column_stack(
        [fra.point, *Ta, *(cross(fra.point, t) for t in Ta)]
    )
    Mb = np.column_stack(
        [frb.point, *Tb, *(cross(frb.point, t) for t in Tb)]
    )
    return Mb @ Ma.T, float(np.sqrt(best_v))
