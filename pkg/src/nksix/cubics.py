"""Harmonic cubics on R^3 and the quadratic curvature map K.

A cubic is stored as a fully symmetric 3x3x3 array h, identified with the
polynomial p(x) = h_ijk x_i x_j x_k (so the x^3 coefficient is h_111 and the
x y^2 coefficient is 3 h_122).  Harmonic means sum_j h_ijj = 0 for each i.

The curvature map sends a cubic to the symmetric matrix K(h) with, for
(i, j, k) a cyclic permutation of (1, 2, 3),

    K_ii = sum_q h_jjq h_kkq - h_jkq^2
    K_ij = sum_q h_ikq h_kjq - h_ijq h_kkq

It is SO(3)-equivariant, K(rho . h) = rho K(h) rho^T, and on harmonic cubics
satisfies tr K = -|h|^2 / 2.  A symmetric matrix K arises from a harmonic
cubic exactly when

    tr K <= 0,   sigma(K) >= 0,   lambda_max(K)^2 <= sigma(K),

where sigma(K) = ((tr K)^2 - tr(K^2)) / 6.  Over an interior K the fiber is
parameterized by one ruling parameter r (plus discrete sign choices), and
`fiber_solve` reconstructs a cubic from (K, r) in closed form.

The normal forms C(r, s, a, b) are the harmonic cubics

    (1/8) [ r x (2x^2 - 3y^2 - 3z^2) + 3 s x (y^2 - z^2)
            + a y (y^2 - 3z^2) + b z (3y^2 - z^2) ]

and every harmonic cubic is SO(3)-equivalent to one of them.  Stabilizer
classes under the rotation action follow the eigenvalue pattern of K; see
`classify_stabilizer`.
"""

from __future__ import annotations

import enum

import numpy as np

__all__ = [
    "StabilizerClass",
    "symmetrize3",
    "harmonic_projection",
    "trace_vector",
    "is_harmonic",
    "cubic_eval",
    "so3_act",
    "random_rotation",
    "random_harmonic_cubic",
    "normal_form",
    "normal_form_eval",
    "gauss_map",
    "sigma",
    "jacobi_eigh",
    "in_gauss_image",
    "fiber_r_bounds",
    "fiber_solve",
    "classify_stabilizer",
    "classify_from_K",
]

_CYCLIC = ((0, 1, 2), (1, 2, 0), (2, 0, 1))


class StabilizerClass(enum.Enum):
    """Conjugacy class of the rotation stabilizer of a harmonic cubic."""

    SO3 = "SO(3)"
    SO2 = "SO(2)"
    A4 = "A4"
    S3 = "S3"
    Z3 = "Z3"
    Z2 = "Z2"
    TRIVIAL = "trivial"


def symmetrize3(T: np.ndarray) -> np.ndarray:
    T = np.asarray(T, dtype=float)
    out = np.zeros_like(T)
    for perm in ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)):
        out += np.transpose(T, perm)
    return out / 6.0


def trace_vector(h: np.ndarray) -> np.ndarray:
    """t_i = sum_j h_ijj; zero exactly when h is harmonic."""
    return np.einsum("ijj->i", np.asarray(h))


def is_harmonic(h: np.ndarray, tol: float = 1e-10) -> bool:
    h = np.asarray(h)
    scale = max(1.0, float(np.sqrt(np.sum(h * h))))
    return float(np.max(np.abs(trace_vector(h)))) <= tol * scale


def harmonic_projection(T: np.ndarray) -> np.ndarray:
    """Orthogonal projection of a symmetric 3-tensor onto harmonic cubics."""
    S = symmetrize3(T)
    t = trace_vector(S)
    d = np.eye(3)
    correction = (
        np.einsum("ij,k->ijk", d, t)
        + np.einsum("jk,i->ijk", d, t)
        + np.einsum("ki,j->ijk", d, t)
    ) / 5.0
    return S - correction


def cubic_eval(h: np.ndarray, x: np.ndarray) -> float:
    return float(np.einsum("ijk,i,j,k->", h, x, x, x))


def so3_act(rho: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Push a cubic forward by a rotation: (rho . h)(x) = h(rho^T x)."""
    return np.einsum("ai,bj,ck,ijk->abc", rho, rho, rho, h)


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    A = rng.normal(size=(3, 3))
    Q, R = np.linalg.qr(A)
    Q = Q @ np.diag(np.sign(np.diag(R)))
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


def random_harmonic_cubic(rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    return harmonic_projection(rng.normal(size=(3, 3, 3)) * scale)


def normal_form(r: float, s: float, a: float, b: float) -> np.ndarray:
    """Tensor of the normal form C(r, s, a, b); see the module docstring."""
    h = np.zeros((3, 3, 3))

    def put(i, j, k, v):
        for p in {(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)}:
            h[p] = v

    put(0, 0, 0, r / 4.0)
    put(0, 1, 1, (s - r) / 8.0)
    put(0, 2, 2, -(r + s) / 8.0)
    put(1, 1, 1, a / 8.0)
    put(1, 2, 2, -a / 8.0)
    put(1, 1, 2, b / 8.0)
    put(2, 2, 2, -b / 8.0)
    return h


def normal_form_eval(params, x) -> float:
    r, s, a, b = params
    return cubic_eval(normal_form(r, s, a, b), np.asarray(x, dtype=float))


def gauss_map(h: np.ndarray) -> np.ndarray:
    """The symmetric matrix K(h); SO(3)-equivariant, quadratic in h."""
    h = np.asarray(h, dtype=float)
    K = np.zeros((3, 3))
    for (i, j, k) in _CYCLIC:
        K[i, i] = np.dot(h[j, j], h[k, k]) - np.dot(h[j, k], h[j, k])
        val = np.dot(h[i, k], h[k, j]) - np.dot(h[i, j], h[k, k])
        K[i, j] = val
        K[j, i] = val
    return K


def sigma(K: np.ndarray) -> float:
    K = np.asarray(K, dtype=float)
    t = np.trace(K)
    return (t * t - np.trace(K @ K)) / 6.0


def jacobi_eigh(M: np.ndarray, tol: float = 1e-14, max_sweeps: int = 50):
    """Cyclic Jacobi diagonalization of a small symmetric matrix.

    Returns (w, V) with eigenvalues w in descending order and V a rotation
    (det +1) whose columns are the corresponding eigenvectors.
    """
    A = np.asarray(M, dtype=float).copy()
    n = A.shape[0]
    V = np.eye(n)
    scale = max(1.0, float(np.max(np.abs(A))))
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off = max(off, abs(A[p, q]))
                if abs(A[p, q]) <= tol * scale:
                    continue
                theta = 0.5 * np.arctan2(2.0 * A[p, q], A[q, q] - A[p, p])
                c, s = np.cos(theta), np.sin(theta)
                J = np.eye(n)
                J[p, p] = c
                J[q, q] = c
                J[p, q] = s
                J[q, p] = -s
                A = J.T @ A @ J
                V = V @ J
        if off <= tol * scale:
            break
    w = np.diag(A).copy()
    order = np.argsort(-w)
    w = w[order]
    V = V[:, order]
    if np.linalg.det(V) < 0:
        V[:, -1] = -V[:, -1]
    return w, V


def in_gauss_image(K: np.ndarray, slack: float = 1e-10) -> bool:
    """Whether K lies in the closed image of the curvature map."""
    K = np.asarray(K, dtype=float)
    eps = slack * (1.0 + float(np.sum(K * K)))
    if np.trace(K) > eps:
        return False
    sig = sigma(K)
    if sig < -eps:
        return False
    w, _ = jacobi_eigh(K)
    return w[0] * w[0] <= sig + eps


def fiber_r_bounds(K: np.ndarray) -> tuple[float, float]:
    """Admissible range [r_min, r_max] of the nonnegative ruling parameter
    over a matrix with distinct eigenvalues in the image interior."""
    w, _ = jacobi_eigh(K)
    l1, l2, l3 = w
    sig = sigma(K)
    _require_distinct(w)
    lo2 = (l2 * l2 - sig) / (2.0 * (l1 - l2))
    hi2 = (l1 - l2) ** 2 * (l3 * l3 - sig) / (2.0 * (l1 - l3) ** 3)
    lo2 = max(lo2, 0.0)
    if hi2 < lo2 - 1e-14 * (1.0 + abs(hi2)):
        raise ValueError(
            f"empty ruling-parameter interval for this matrix: "
            f"[{lo2}, {hi2}] in r^2; is it in the image?"
        )
    hi2 = max(hi2, lo2)
    return float(np.sqrt(lo2)), float(np.sqrt(hi2))


def _require_distinct(w: np.ndarray) -> None:
    scale = max(1.0, float(np.max(np.abs(w))))
    if w[0] - w[1] <= 1e-9 * scale or w[1] - w[2] <= 1e-9 * scale:
        raise ValueError(
            "fiber reconstruction needs distinct eigenvalues; got "
            f"{w.tolist()} (repeated values belong to the symmetric classes)"
        )


def fiber_solve(
    K: np.ndarray, r: float, signs: tuple[int, int] = (1, 1)
) -> np.ndarray:
    """Closed-form harmonic cubic h with gauss_map(h) = K and ruling
    parameter r.

    The two entries of `signs` pick the branches of the two square roots;
    all four choices map to the same K.  K must have distinct eigenvalues
    and r must lie inside `fiber_r_bounds(K)` (up to sign).
    """
    K = np.asarray(K, dtype=float)
    w, V = jacobi_eigh(K)
    l1, l2, l3 = w
    sig = sigma(K)
    _require_distinct(w)
    s1, s2 = signs
    if s1 not in (-1, 1) or s2 not in (-1, 1):
        raise ValueError("signs must be +-1")

    rad112 = ((l1 - l2) ** 2 * (l3 * l3 - sig) - 2.0 * (l1 - l3) ** 3 * r * r) / (
        2.0 * (l1 - l2) ** 2 * (l2 - l3)
    )
    rad113 = ((sig - l2 * l2) + 2.0 * (l1 - l2) * r * r) / (2.0 * (l2 - l3))
    tol = 1e-12 * (1.0 + float(np.max(np.abs(w))) ** 3)
    if rad112 < -tol or rad113 < -tol:
        raise ValueError(
            f"ruling parameter r = {r} outside the admissible interval "
            f"{fiber_r_bounds(K)}"
        )
    h112 = s1 * np.sqrt(max(rad112, 0.0))
    h113 = s2 * np.sqrt(max(rad113, 0.0))

    h331 = r
    h221 = (l1 - l3) / (l1 - l2) * r
    h332 = -(l1 - l2) / (l2 - l3) * h112
    h223 = (l1 - l3) / (l2 - l3) * h113

    h = np.zeros((3, 3, 3))

    def put(i, j, k, v):
        for p in {(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)}:
            h[p] = v

    put(2, 2, 0, h331)
    put(1, 1, 0, h221)
    put(0, 0, 1, h112)
    put(2, 2, 1, h332)
    put(0, 0, 2, h113)
    put(1, 1, 2, h223)
    put(0, 1, 2, 0.0)
    put(0, 0, 0, -h221 - h331)
    put(1, 1, 1, -h112 - h332)
    put(2, 2, 2, -h113 - h223)
    return so3_act(V, h)


def classify_from_K(
    K: np.ndarray, eps_eig: float = 1e-6, eps_cls: float = 1e-6
) -> StabilizerClass:
    """Stabilizer class from the eigenvalue pattern of K (assumed to come
    from a harmonic cubic of roughly unit norm; classify_stabilizer
    normalizes before calling this)."""
    K = np.asarray(K, dtype=float)
    nK = float(np.sqrt(np.sum(K * K)))
    if nK <= 1e-12:
        return StabilizerClass.SO3
    w, _ = jacobi_eigh(K)
    l1, l2, l3 = w
    scale = max(1.0, nK)
    e = eps_eig * scale
    g12, g23 = l1 - l2, l2 - l3
    sig = sigma(K)

    def matches_sigma(lam: float) -> bool:
        return abs(lam * lam - sig) <= eps_cls * (sig + lam * lam + 1e-300)

    if g12 <= e and g23 <= e:
        return StabilizerClass.A4 if l1 < 0 else StabilizerClass.TRIVIAL
    if g12 <= e or g23 <= e:
        if abs(l1) <= e and abs(l2) <= e and l3 < 0:
            return StabilizerClass.S3
        if g23 <= e and matches_sigma(l1):
            return StabilizerClass.SO2
        return StabilizerClass.Z3
    if matches_sigma(l1) or matches_sigma(l2):
        return StabilizerClass.Z2
    return StabilizerClass.TRIVIAL


def classify_stabilizer(
    h: np.ndarray,
    eps_eig: float = 1e-6,
    eps_cls: float = 1e-6,
    zero_tol: float = 1e-6,
) -> StabilizerClass:
    """Rotation stabilizer class of a harmonic cubic.

    The cubic is normalized first (the class is scale invariant), so the
    tolerances refer to a unit-norm tensor.  `zero_tol` is the absolute
    norm below which h counts as the zero cubic.
    """
    h = np.asarray(h, dtype=float)
    nh = float(np.sqrt(np.sum(h * h)))
    if nh <= zero_tol:
        return StabilizerClass.SO3
    return classify_from_K(gauss_map(h / nh), eps_eig=eps_eig, eps_cls=eps_cls)
