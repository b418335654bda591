"""Explicit Lagrangian and pseudoholomorphic examples in the six-sphere.

Every factory returns an `ImmersionPatch` with analytic first derivatives
(orbit charts carry analytic second derivatives too), so downstream jets
run at close to machine precision.

The catalogue:

  make_L0        totally geodesic Lagrangian {x2 = x4 = x6 = 0}
  make_L1        quaternionic graph q |-> (sqrt5/3) qbar e1 q + (2/3) q e5,
                 an SU(2)-orbit with quasi-Einstein induced metric
  make_L2        orbit of e2 under the irreducible SO(3) in G2, constant
                 curvature 1/16
  make_boruvka   orbit of e1 under the same SO(3): the classical constant
                 curvature 1/6 pseudoholomorphic 2-sphere
  make_veronese_hopf_lift      circle-phase lift of the null curve
                 w |-> ((1-w^2)/2, i(1+w^2)/2, w)
  make_holomorphic_cone_link   link of a holomorphic cone in C^3 (preset
                 "quadratic" is w |-> (1, w, w^2))
  make_clifford_legendrian_curve  the flat Legendrian torus in the
                 equatorial 5-sphere, phase-aligned by a 1-d search

`CubicIdentification` realizes the linear isometry between Im O and the
space of harmonic cubics on R^3 that intertwines the irreducible SO(3)
with rotations of R^3 (each basis vector maps to a unit-norm cubic); it
converts orbit membership questions into eigenvalue conditions on the
curvature matrix of the cubic.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .cubics import gauss_map
from .forms import embed_c3
from .jets import ImmersionPatch
from .octonion import basis_im, conj, im_part, mul, octonion

__all__ = [
    "OrbitAction",
    "su2_action",
    "irreducible_so3_action",
    "orbit_actions",
    "orbit_patch",
    "CubicIdentification",
    "cubic_identification",
    "make_L0",
    "make_L1",
    "L1_point",
    "L1_differential",
    "make_L2",
    "make_boruvka",
    "make_veronese_hopf_lift",
    "make_holomorphic_cone_link",
    "make_clifford_legendrian_curve",
    "CONE_PRESETS",
]

_MARGIN = 1e-2


def _E(i: int, j: int) -> np.ndarray:
    """Elementary rotation generator in the e_i e_j plane (1-based)."""
    M = np.zeros((7, 7))
    M[i - 1, j - 1] = 1.0
    M[j - 1, i - 1] = -1.0
    return M


@dataclasses.dataclass
class OrbitAction:
    """A tuple of commuting-with-nothing skew generators acting on Im O,
    with cached eigendecompositions so one-parameter subgroups evaluate as
    a couple of small complex matrix products."""

    name: str
    generators: tuple[np.ndarray, ...]

    def __post_init__(self):
        self._eig = []
        for U in self.generators:
            lam, V = np.linalg.eig(U)
            self._eig.append((lam, V, np.linalg.inv(V)))

    def exp(self, k: int, t: float) -> np.ndarray:
        lam, V, Vinv = self._eig[k]
        return ((V * np.exp(t * lam)) @ Vinv).real

    def apply(self, k: int, t: float, v: np.ndarray) -> np.ndarray:
        return self.exp(k, t) @ v


def su2_action() -> OrbitAction:
    """The SU(2) of unit quaternions acting on Im O; stabilizes the
    quaternionic graph family pointwise as a set."""
    U1 = -2 * _E(2, 3) + _E(4, 5) + _E(6, 7)
    U2 = -2 * _E(3, 1) + _E(4, 6) - _E(5, 7)
    U3 = -2 * _E(1, 2) - _E(4, 7) - _E(5, 6)
    return OrbitAction("su2", (U1, U2, U3))


def irreducible_so3_action() -> OrbitAction:
    """The principal SO(3) in G2: Im O is its unique 7-dimensional
    irreducible representation, [U1, U2] = 2 U3 and cyclically.

    The sign pattern is forced: a torus element a E23 + b E45 + c E67 is a
    derivation of the cross product only when a + b + c = 0, and the three
    generators must intertwine with `CubicIdentification` under double-speed
    rotations of R^3.  Both conditions are asserted exactly in the tests.
    """
    s6, s10 = np.sqrt(6.0), np.sqrt(10.0)
    U1 = -4 * _E(2, 3) - 2 * _E(4, 5) + 6 * _E(6, 7)
    U2 = s6 * (-2 * _E(1, 5) + _E(2, 6) - _E(3, 7)) + s10 * (-_E(2, 4) - _E(3, 5))
    U3 = s6 * (2 * _E(1, 4) - _E(2, 7) - _E(3, 6)) + s10 * (_E(2, 5) - _E(3, 4))
    return OrbitAction("so3_irreducible", (U1, U2, U3))


def orbit_actions() -> dict[str, OrbitAction]:
    return {"reducible": su2_action(), "irreducible": irreducible_so3_action()}


def orbit_patch(
    action: OrbitAction,
    word: tuple[int, ...],
    base_vector: np.ndarray,
    domain: tuple[tuple[float, float], ...],
    name: str,
    extras: dict | None = None,
) -> ImmersionPatch:
    """Chart u |-> exp(u_0 U_{w_0}) ... exp(u_last U_{w_last}) v with
    analytic first and second derivatives."""
    v0 = np.asarray(base_vector, dtype=float)
    n = len(word)

    def factors(u):
        return [action.exp(word[k], u[k]) for k in range(n)]

    def ev(u):
        x = v0
        for M in reversed(factors(u)):
            x = M @ x
        return x

    def jac(u):
        Ms = factors(u)
        cols = []
        for a in range(n):
            x = v0
            for k in reversed(range(n)):
                x = Ms[k] @ x
                if k == a:
                    x = action.generators[word[k]] @ x
            cols.append(x)
        return np.stack(cols, axis=-1)

    def hess(u):
        Ms = factors(u)
        H = np.zeros((n, n, 7))
        for a in range(n):
            for b in range(a, n):
                x = v0
                for k in reversed(range(n)):
                    x = Ms[k] @ x
                    if k == a:
                        x = action.generators[word[k]] @ x
                    if k == b:
                        x = action.generators[word[k]] @ x
                H[a, b] = x
                H[b, a] = x
        return H

    return ImmersionPatch(
        dim=n,
        domain=domain,
        eval=ev,
        jac=jac,
        hess=hess,
        name=name,
        extras=extras or {},
    )


# ------------------------------------------------------- identification


def _tensor_of_monomials(d: dict[tuple[int, int, int], float]) -> np.ndarray:
    """Cubic tensor from monomial coefficients keyed by sorted index
    triples, e.g. {(0, 1, 1): -3.0} for -3 x y^2."""
    import itertools
    from collections import Counter
    from math import factorial

    h = np.zeros((3, 3, 3))
    for mono, c in d.items():
        cnt = Counter(mono)
        mult = 6
        for v in cnt.values():
            mult //= factorial(v)
        for p in set(itertools.permutations(mono)):
            h[p] = c / mult
    return h


class CubicIdentification:
    """The equivariant isometry Im O -> {harmonic cubics on R^3}.

    `of_point` maps a 7-vector to its cubic tensor, `point_of` inverts.
    `rot_generators` are the 3 x 3 matrices A_a with
    of_point(U_a v) = gen_act(A_a, of_point(v)) for the irreducible
    generators U_a, each generating rotations at twice unit speed.
    """

    def __init__(self):
        s6, s10, s15 = np.sqrt(6.0), np.sqrt(10.0), np.sqrt(15.0)
        self.images = np.stack(
            [
                _tensor_of_monomials(
                    {(0, 0, 0): 2 * s10 / 10, (0, 1, 1): -3 * s10 / 10,
                     (0, 2, 2): -3 * s10 / 10}
                ),
                _tensor_of_monomials({(0, 1, 2): -s6}),
                _tensor_of_monomials({(0, 1, 1): s6 / 2, (0, 2, 2): -s6 / 2}),
                _tensor_of_monomials(
                    {(0, 0, 1): -4 * s15 / 10, (1, 1, 1): s15 / 10,
                     (1, 2, 2): s15 / 10}
                ),
                _tensor_of_monomials(
                    {(0, 0, 2): -4 * s15 / 10, (1, 1, 2): s15 / 10,
                     (2, 2, 2): s15 / 10}
                ),
                _tensor_of_monomials({(1, 1, 1): 0.5, (1, 2, 2): -1.5}),
                _tensor_of_monomials({(2, 2, 2): 0.5, (1, 1, 2): -1.5}),
            ]
        )
        a = 2.0
        self.rot_generators = (
            np.array([[0.0, 0.0, 0.0], [0.0, 0.0, -a], [0.0, a, 0.0]]),
            np.array([[0.0, 0.0, a], [0.0, 0.0, 0.0], [-a, 0.0, 0.0]]),
            np.array([[0.0, -a, 0.0], [a, 0.0, 0.0], [0.0, 0.0, 0.0]]),
        )

    def of_point(self, v: np.ndarray) -> np.ndarray:
        return np.einsum("i,ijkl->jkl", np.asarray(v, dtype=float), self.images)

    def point_of(self, h: np.ndarray) -> np.ndarray:
        return np.einsum("ijkl,jkl->i", self.images, np.asarray(h, dtype=float))

    @staticmethod
    def gen_act(A: np.ndarray, h: np.ndarray) -> np.ndarray:
        """Derivative of the rotation action at the identity."""
        return (
            np.einsum("ai,ijk->ajk", A, h)
            + np.einsum("bj,ijk->ibk", A, h)
            + np.einsum("ck,ijk->ijc", A, h)
        )

    def curvature_matrix_of_point(self, v: np.ndarray) -> np.ndarray:
        return gauss_map(self.of_point(v))

    def in_orbit_of_e2(self, v: np.ndarray, tol: float = 1e-8) -> bool:
        """Membership in the constant-curvature orbit of e2: the cubic of
        a unit point lies on it exactly when K = -(1/6) Id."""
        v = np.asarray(v, dtype=float)
        n = np.linalg.norm(v)
        if abs(n - 1.0) > 1e-8:
            return False
        K = self.curvature_matrix_of_point(v / n)
        return float(np.max(np.abs(K + np.eye(3) / 6.0))) <= tol


def cubic_identification() -> CubicIdentification:
    return CubicIdentification()


# ------------------------------------------------------------- examples


def _sph3(u):
    t, p, s = u
    return np.array(
        [
            np.cos(t),
            np.sin(t) * np.cos(p),
            np.sin(t) * np.sin(p) * np.cos(s),
            np.sin(t) * np.sin(p) * np.sin(s),
        ]
    )


def _dsph3(u):
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


_SPH3_DOMAIN = ((0.3, 2.8), (0.3, 2.8), (_MARGIN, 2 * np.pi - _MARGIN))


def make_L0() -> ImmersionPatch:
    """Totally geodesic Lagrangian: unit sphere of span{e1, e3, e5, e7}."""
    E = np.stack([basis_im(i) for i in (1, 3, 5, 7)])

    def ev(u):
        return _sph3(u) @ E

    def jac(u):
        return E.T @ _dsph3(u)

    return ImmersionPatch(
        dim=3,
        domain=_SPH3_DOMAIN,
        eval=ev,
        jac=jac,
        name="L0",
        extras={
            "kind": "lagrangian",
            "expected_sectional": 1.0,
            "expected_class": "SO(3)",
            "expected_austere": True,
        },
    )


# quaternions sit in span{1, e1, e2, e3}: i -> e1, j -> e2, k -> e3
_SQ5_3 = np.sqrt(5.0) / 3.0
_E1_O = octonion(0.0, basis_im(1))
_E5_O = octonion(0.0, basis_im(5))


def _q_to_oct(q: np.ndarray) -> np.ndarray:
    o = np.zeros(8)
    o[:4] = q
    return o


def L1_point(q: np.ndarray) -> np.ndarray:
    """(sqrt5/3) qbar e1 q + (2/3) q e5 for a unit quaternion q."""
    qo = _q_to_oct(q)
    val = _SQ5_3 * mul(mul(conj(qo), _E1_O), qo) + (2.0 / 3.0) * mul(qo, _E5_O)
    return im_part(val)


def L1_differential(q: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Derivative of L1_point at q in the tangent direction v."""
    qo, vo = _q_to_oct(q), _q_to_oct(v)
    val = _SQ5_3 * (
        mul(mul(conj(vo), _E1_O), qo) + mul(mul(conj(qo), _E1_O), vo)
    ) + (2.0 / 3.0) * mul(vo, _E5_O)
    return im_part(val)


def make_L1() -> ImmersionPatch:
    def ev(u):
        return L1_point(_sph3(u))

    def jac(u):
        q = _sph3(u)
        dq = _dsph3(u)
        return np.stack([L1_differential(q, dq[:, a]) for a in range(3)], axis=-1)

    return ImmersionPatch(
        dim=3,
        domain=_SPH3_DOMAIN,
        eval=ev,
        jac=jac,
        name="L1",
        extras={
            "kind": "lagrangian",
            "expected_class": "SO(2)",
            "expected_austere": False,
            "expected_K": np.diag([5.0 / 16.0, -15.0 / 16.0, -15.0 / 16.0]),
            "quasi_einstein": True,
            "chen": 11.0 / 8.0,
        },
    )


def make_L2() -> ImmersionPatch:
    """Orbit of e2 under the irreducible SO(3): constant curvature 1/16."""
    act = irreducible_so3_action()
    # Euler-style chart at double speed: gimbal locks at 2 beta in {0, pi,
    # 2 pi}, so beta stays strictly inside (0, pi/2)
    dom = (
        (_MARGIN, 2 * np.pi - _MARGIN),
        (0.1, np.pi / 2 - 0.1),
        (_MARGIN, 2 * np.pi - _MARGIN),
    )
    return orbit_patch(
        act,
        word=(2, 1, 2),
        base_vector=basis_im(2),
        domain=dom,
        name="L2",
        extras={
            "kind": "lagrangian",
            "expected_sectional": 1.0 / 16.0,
            "expected_class": "A4",
            "expected_austere": True,
            "expected_K": -(15.0 / 16.0) * np.eye(3),
        },
    )


def make_boruvka() -> ImmersionPatch:
    """Orbit of e1 under the irreducible SO(3): the constant curvature 1/6
    pseudoholomorphic 2-sphere.  The chart degenerates where cos(2 beta)
    vanishes, so beta stays inside (-pi/4, pi/4)."""
    act = irreducible_so3_action()
    # chart (gamma, beta) |-> exp(gamma U3) exp(beta U2) e1; d/dgamma is
    # proportional to cos(2 beta), so beta keeps clear of +-pi/4
    dom = (
        (_MARGIN, 2 * np.pi - _MARGIN),
        (-np.pi / 4 + 0.15, np.pi / 4 - 0.15),
    )
    return orbit_patch(
        act,
        word=(2, 1),
        base_vector=basis_im(1),
        domain=dom,
        name="boruvka",
        extras={
            "kind": "pholo_curve",
            "expected_curvature": 1.0 / 6.0,
            "null_torsion": True,
        },
    )


# ------------------------------------------------- circle-phase lifts


def _phase_lift_patch(c, dc, name, w_domain, extras) -> ImmersionPatch:
    """(w1, w2, theta) |-> e^{i theta} c(w) / |c(w)| embedded in the
    equatorial C^3, for a holomorphic curve c."""

    def parts(u):
        w = complex(u[0], u[1])
        cw = c(w)
        dcw = dc(w)
        r = np.linalg.norm(cw)
        return w, cw, dcw, r

    def ev(u):
        _, cw, _, r = parts(u)
        return embed_c3(np.exp(1j * u[2]) * cw / r)

    def jac(u):
        _, cw, dcw, r = parts(u)
        ph = np.exp(1j * u[2])
        # d/dw1 c = c', d/dw2 c = i c'; d|c| = Re<c, dc>_H / |c|
        g1 = float(np.real(np.vdot(cw, dcw))) / r
        g2 = float(np.real(np.vdot(cw, 1j * dcw))) / r
        d1 = ph * (dcw / r - cw * g1 / r**2)
        d2 = ph * (1j * dcw / r - cw * g2 / r**2)
        d3 = 1j * ph * cw / r
        return np.stack([embed_c3(d) for d in (d1, d2, d3)], axis=-1)

    dom = (*w_domain, (_MARGIN, 2 * np.pi - _MARGIN))
    return ImmersionPatch(
        dim=3, domain=dom, eval=ev, jac=jac, name=name, extras=extras
    )


def make_veronese_hopf_lift() -> ImmersionPatch:
    """Circle lift of the null curve ((1-w^2)/2, i(1+w^2)/2, w)."""

    def c(w):
        return np.array([(1 - w * w) / 2, 1j * (1 + w * w) / 2, w])

    def dc(w):
        return np.array([-w, 1j * w, 1.0])

    return _phase_lift_patch(
        c,
        dc,
        "veronese",
        ((-0.9, 0.9), (-0.9, 0.9)),
        extras={
            "kind": "lagrangian",
            "expected_class": "S3",
            "expected_austere": True,
            "chen": 2.0,
        },
    )


CONE_PRESETS = {
    "quadratic": (
        lambda w: np.array([1.0 + 0j, w, w * w]),
        lambda w: np.array([0.0 + 0j, 1.0 + 0j, 2 * w]),
    ),
}


def make_holomorphic_cone_link(preset: str = "quadratic") -> ImmersionPatch:
    """Link of the complex cone over a holomorphic curve; Lagrangian and
    minimal for every holomorphic c."""
    if preset not in CONE_PRESETS:
        raise KeyError(
            f"unknown cone preset {preset!r}; have {sorted(CONE_PRESETS)}"
        )
    c, dc = CONE_PRESETS[preset]
    return _phase_lift_patch(
        c,
        dc,
        f"cone_link:{preset}",
        ((-0.8, 0.8), (-0.8, 0.8)),
        extras={
            "kind": "lagrangian",
            "expected_class": "S3",
            "expected_austere": True,
        },
    )


def make_clifford_legendrian_curve(phase_grid: int = 720) -> ImmersionPatch:
    """The flat Legendrian torus (e^{i t1}, e^{i t2}, e^{-i(t1+t2)})/sqrt3
    in the equatorial 5-sphere, with the overall phase chosen by a search
    that makes the complex determinant det[c, d1 c, d2 c] real and
    negative (the alignment needed by the circle-suspension builders)."""

    def torus(alpha, u):
        t1, t2 = u
        return (
            np.exp(1j * alpha)
            * np.array(
                [np.exp(1j * t1), np.exp(1j * t2), np.exp(-1j * (t1 + t2))]
            )
            / np.sqrt(3.0)
        )

    def det_phase(alpha):
        u = (0.4, 1.1)
        cw = torus(alpha, u)
        d1 = 1j * cw * np.array([1.0, 0.0, -1.0])
        d2 = 1j * cw * np.array([0.0, 1.0, -1.0])
        return np.linalg.det(np.column_stack([cw, d1, d2]))

    # 1-d phase alignment: minimize |det - (-|det|)| over a grid, then
    # polish by golden-section around the best grid point
    target = lambda a: abs(det_phase(a) + abs(det_phase(a)))
    alphas = np.linspace(0.0, 2 * np.pi, phase_grid, endpoint=False)
    vals = [target(a) for a in alphas]
    a0 = alphas[int(np.argmin(vals))]
    lo, hi = a0 - 2 * np.pi / phase_grid, a0 + 2 * np.pi / phase_grid
    gr = (np.sqrt(5.0) - 1.0) / 2.0
    x1, x2 = hi - gr * (hi - lo), lo + gr * (hi - lo)
    for _ in range(60):
        if target(x1) < target(x2):
            hi, x2 = x2, x1
            x1 = hi - gr * (hi - lo)
        else:
            lo, x1 = x1, x2
            x2 = lo + gr * (hi - lo)
    alpha = 0.5 * (lo + hi)

    def ev(u):
        return embed_c3(torus(alpha, u))

    def jac(u):
        cw = torus(alpha, u)
        d1 = 1j * cw * np.array([1.0, 0.0, -1.0])
        d2 = 1j * cw * np.array([0.0, 1.0, -1.0])
        return np.stack([embed_c3(d1), embed_c3(d2)], axis=-1)

    dom = ((_MARGIN, 2 * np.pi - _MARGIN), (_MARGIN, 2 * np.pi - _MARGIN))
    return ImmersionPatch(
        dim=2,
        domain=dom,
        eval=ev,
        jac=jac,
        name="clifford",
        extras={
            "kind": "pholo_curve",
            "expected_curvature": 0.0,
            "null_torsion": False,
            "legendrian": True,
            "phase": alpha,
        },
    )
