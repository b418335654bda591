"""Octonion arithmetic and the seven-dimensional cross product.

Conventions
-----------
An octonion is a length-8 real vector over the basis (1, e1, ..., e7).
An imaginary octonion is a length-7 real vector over (e1, ..., e7).

The multiplication of imaginary units is generated by e_i e_i = -1 and the
seven signed triples

    (1 2 3)+  (1 4 5)+  (1 6 7)+  (2 4 6)+  (2 5 7)-  (3 4 7)-  (3 5 6)-

meaning e1 e2 = e3, e2 e5 = -e7, and so on, extended cyclically within each
triple and antisymmetrically.  All structure constants are integers, so basis
products are exact in floating point.

The cross product on Im O is u x v = Im(uv) for imaginary u, v, equivalently
uv = -<u,v> 1 + u x v.  The associated calibration 3-form is
phi0(u,v,w) = <u x v, w>; its Euclidean Hodge dual (orientation
e1 ^ ... ^ e7 > 0) is the coassociative 4-form star_phi0.

Some references negate e7; `flip_e7` converts vectors between the two
conventions.  Everything in this package uses the table above.
"""

from __future__ import annotations

import itertools

import numpy as np

__all__ = [
    "SIGNED_TRIPLES",
    "STRUCTURE",
    "CROSS_STRUCT",
    "PHI0_TENSOR",
    "STAR_PHI0_TENSOR",
    "basis_im",
    "octonion",
    "mul",
    "conj",
    "re_part",
    "im_part",
    "embed_im",
    "cross",
    "phi0",
    "star_phi0",
    "is_g2_derivation",
    "flip_e7",
]

# (i, j, k, sign): e_i e_j = sign * e_k, 1-based imaginary indices
SIGNED_TRIPLES = (
    (1, 2, 3, 1),
    (1, 4, 5, 1),
    (1, 6, 7, 1),
    (2, 4, 6, 1),
    (2, 5, 7, -1),
    (3, 4, 7, -1),
    (3, 5, 6, -1),
)


def _build_structure() -> np.ndarray:
    """Structure tensor M with (e_i e_j) = sum_k M[i, j, k] e_k, indices 0..7
    where 0 is the real unit."""
    M = np.zeros((8, 8, 8))
    M[0, :, :] = np.eye(8)
    M[:, 0, :] = np.eye(8)
    for i in range(1, 8):
        M[i, i, 0] = -1.0
    for i, j, k, s in SIGNED_TRIPLES:
        for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
            M[a, b, c] = s
            M[b, a, c] = -s
    return M


STRUCTURE = _build_structure()
# cross-product structure constants on Im O: (e_i x e_j)_k, 0-based
CROSS_STRUCT = STRUCTURE[1:, 1:, 1:].copy()
# phi0 as a 3-tensor; phi0(u,v,w) = PHI0_TENSOR contracted with u, v, w
PHI0_TENSOR = CROSS_STRUCT  # <e_i x e_j, e_k> coincides componentwise


def _build_star_phi0() -> np.ndarray:
    psi = np.zeros((7, 7, 7, 7))
    for perm in itertools.permutations(range(7)):
        # parity of the permutation
        p = list(perm)
        parity = 1
        for idx in range(7):
            while p[idx] != idx:
                tgt = p[idx]
                p[idx], p[tgt] = p[tgt], p[idx]
                parity = -parity
        val = PHI0_TENSOR[perm[0], perm[1], perm[2]]
        if val != 0.0:
            psi[perm[3], perm[4], perm[5], perm[6]] += parity * val / 6.0
    return psi


STAR_PHI0_TENSOR = _build_star_phi0()


def basis_im(i: int) -> np.ndarray:
    """Imaginary basis vector e_i, i in 1..7, as a length-7 array."""
    v = np.zeros(7)
    v[i - 1] = 1.0
    return v


def octonion(re: float = 0.0, im: np.ndarray | None = None) -> np.ndarray:
    o = np.zeros(8)
    o[0] = re
    if im is not None:
        o[1:] = im
    return o


def mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Octonion product of two length-8 vectors (bilinear table extension)."""
    return np.einsum("i,j,ijk->k", a, b, STRUCTURE)


def conj(a: np.ndarray) -> np.ndarray:
    out = -np.asarray(a, dtype=float).copy()
    out[0] = a[0]
    return out


def re_part(a: np.ndarray) -> float:
    return float(a[0])


def im_part(a: np.ndarray) -> np.ndarray:
    return np.asarray(a)[1:].copy()


def embed_im(u: np.ndarray) -> np.ndarray:
    """Imaginary 7-vector -> octonion 8-vector."""
    return octonion(0.0, np.asarray(u, dtype=float))


def cross(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Cross product on Im O.  Accepts real or complex components
    (complex inputs are treated componentwise bilinearly)."""
    return np.einsum("i,j,ijk->k", u, v, CROSS_STRUCT)


def phi0(u: np.ndarray, v: np.ndarray, w: np.ndarray):
    """The associative calibration phi0(u,v,w) = <u x v, w>."""
    return np.einsum("i,j,k,ijk->", u, v, w, PHI0_TENSOR)


def star_phi0(a: np.ndarray, b: np.ndarray, c: np.ndarray, d: np.ndarray):
    """Hodge dual 4-form of phi0, orientation e1 ^ ... ^ e7 > 0."""
    return np.einsum("i,j,k,l,ijkl->", a, b, c, d, STAR_PHI0_TENSOR)


def is_g2_derivation(U: np.ndarray, tol: float = 1e-10) -> tuple[bool, float]:
    """Whether U(u x v) = Uu x v + u x Uv across all basis pairs.

    Returns (verdict, max residual).  Derivations of the cross product
    algebra form the Lie algebra g2.
    """
    U = np.asarray(U, dtype=float)
    lhs = np.einsum("kl,ijl->ijk", U, CROSS_STRUCT)
    rhs = np.einsum("li,ljk->ijk", U, CROSS_STRUCT) + np.einsum(
        "lj,ilk->ijk", U, CROSS_STRUCT
    )
    res = float(np.max(np.abs(lhs - rhs)))
    return res < tol, res


def flip_e7(v: np.ndarray) -> np.ndarray:
    """Convert a 7- or 8-vector to the convention where the last imaginary
    unit carries the opposite sign (used by some other references)."""
    out = np.asarray(v, dtype=float).copy()
    out[-1] = -out[-1]
    return out
