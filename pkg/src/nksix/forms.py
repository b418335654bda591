"""Nearly Kahler structure tensors on the unit sphere in Im O.

At a unit imaginary octonion p the tangent space is p-perp inside R^7 and

    J_p u        = p x u                      (almost complex structure)
    omega_p(u,v) = phi0(p, u, v) = <J_p u, v> (fundamental 2-form)
    Upsilon_p    = phi0 restricted to T_p     (real part of the (3,0)-form)
    ImOmega_p    = -star_phi0(p, ., ., .)     (imaginary part)

With these signs Omega = Upsilon + i ImOmega is a (3,0)-form:
ImOmega(Ju, v, w) = Upsilon(u, v, w).  On the totally geodesic Lagrangian
{x2 = x4 = x6 = 0} the restriction of -ImOmega is the volume form for the
orientation (e3, e5, e7) at the point e1.

All evaluators insist their vector arguments are tangent to the sphere at p
(tolerance 1e-10 relative); use `project_tangent` first if a vector might
drift off tangency.  Components may be complex, in which case the forms are
extended complex-bilinearly.
"""

from __future__ import annotations

import numpy as np

from .octonion import PHI0_TENSOR, STAR_PHI0_TENSOR, cross, phi0, star_phi0

__all__ = [
    "TANGENCY_TOL",
    "project_tangent",
    "almost_complex_J",
    "omega_at",
    "upsilon_at",
    "im_omega_at",
    "embed_c3",
]

TANGENCY_TOL = 1e-10


def _check_point(p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape != (7,):
        raise ValueError(f"sphere point must be a 7-vector, got shape {p.shape}")
    n = np.linalg.norm(p)
    if abs(n - 1.0) > TANGENCY_TOL:
        raise ValueError(f"point is off the unit sphere: |p| = {n!r}")
    return p


def _check_tangent(p: np.ndarray, v: np.ndarray, name: str = "v") -> np.ndarray:
    v = np.asarray(v)
    if v.shape != (7,):
        raise ValueError(f"{name} must be a 7-vector, got shape {v.shape}")
    ip = np.dot(p, v)
    if abs(ip) > TANGENCY_TOL * max(1.0, float(np.linalg.norm(v))):
        raise ValueError(
            f"{name} is not tangent at p: <p,{name}> = {ip!r}; "
            "use project_tangent to make it so"
        )
    return v


def project_tangent(p: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Orthogonal projection of v onto the tangent space at p."""
    p = _check_point(p)
    v = np.asarray(v)
    return v - np.dot(p, v) * p


def almost_complex_J(p: np.ndarray, u: np.ndarray) -> np.ndarray:
    """J_p u = p x u.  Tangent in, tangent out; J_p^2 = -id."""
    p = _check_point(p)
    u = _check_tangent(p, u, "u")
    return cross(p, u)


def omega_at(p: np.ndarray, u: np.ndarray, v: np.ndarray):
    """Fundamental 2-form omega_p(u, v) = phi0(p, u, v)."""
    p = _check_point(p)
    u = _check_tangent(p, u, "u")
    v = _check_tangent(p, v, "v")
    return phi0(p, u, v)


def upsilon_at(p: np.ndarray, u: np.ndarray, v: np.ndarray, w: np.ndarray):
    """Real part of the complex volume form: phi0 restricted to T_p."""
    p = _check_point(p)
    u = _check_tangent(p, u, "u")
    v = _check_tangent(p, v, "v")
    w = _check_tangent(p, w, "w")
    return phi0(u, v, w)


def im_omega_at(p: np.ndarray, u: np.ndarray, v: np.ndarray, w: np.ndarray):
    """Imaginary part of the complex volume form, -star_phi0(p, u, v, w)."""
    p = _check_point(p)
    u = _check_tangent(p, u, "u")
    v = _check_tangent(p, v, "v")
    w = _check_tangent(p, w, "w")
    return -star_phi0(p, u, v, w)


def embed_c3(z: np.ndarray) -> np.ndarray:
    """C^3 -> Im O along the e1-perp: (z1, z2, z3) lands in
    span{e2, ..., e7} with z1 = x2 + i x3, z2 = x4 + i x5, z3 = x6 + i x7."""
    z = np.asarray(z)
    if z.shape != (3,):
        raise ValueError(f"expected a C^3 vector, got shape {z.shape}")
    return np.array(
        [0.0, z[0].real, z[0].imag, z[1].real, z[1].imag, z[2].real, z[2].imag]
    )
