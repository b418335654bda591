#!/usr/bin/env python3
"""From a curvature matrix back to a second fundamental form.

The quadratic map h -> K(h) sends the fundamental cubic of a minimal
Lagrangian to the matrix that the Gauss equation forces on its curvature
tensor.  This script inverts it numerically:

  1. test whether a given symmetric matrix lies in the image at all,
  2. find the admissible interval of the ruling parameter r,
  3. reconstruct a cubic for several r values and classify each one,
  4. confirm every reconstruction maps back onto the target.

Run:  python3 demos/curvature_to_cubic.py
"""

import numpy as np

from nksix.cubics import (
    classify_stabilizer,
    fiber_r_bounds,
    fiber_solve,
    gauss_map,
    in_gauss_image,
    jacobi_eigh,
    sigma,
)


def invert(K: np.ndarray, label: str) -> None:
    w, _ = jacobi_eigh(K)
    print(f"\n== {label}")
    print(f"   eigenvalues  {np.array2string(w, precision=6)}")
    print(f"   sigma        {sigma(K):.6f}   trace {np.trace(K):+.6f}")
    if not in_gauss_image(K):
        print("   not in the image of the Gauss map; nothing to reconstruct")
        return

    try:
        rmin, rmax = fiber_r_bounds(K)
    except ValueError as exc:
        print(f"   {exc}")
        return
    print(f"   admissible r interval  [{rmin:.6f}, {rmax:.6f}]")

    for t in (0.0, 0.5, 1.0):
        r = rmin + t * (rmax - rmin)
        try:
            h = fiber_solve(K, r)
        except ValueError as exc:
            print(f"   r={r:.4f}: {exc}")
            continue
        back = float(np.max(np.abs(gauss_map(h) - K)))
        cls = classify_stabilizer(h)
        print(f"   r={r:8.4f}  class {cls.name:7s}  |K(h)-K| = {back:.2e}")


def main() -> None:
    print("reconstructing cubics over curvature matrices")

    invert(np.diag([0.0, -1.0, -4.0]), "distinct spectrum, generic fiber")

    # boundary of the image: the interval degenerates to a point
    invert(np.diag([0.25, -0.5, -1.25]), "near the image boundary")

    # repeated eigenvalues belong to the symmetric classes and fall
    # outside the closed-form reconstruction
    invert(np.diag([0.3125, -0.9375, -0.9375]), "repeated eigenvalue (SO2 orbit)")

    # obviously outside: a positive definite matrix cannot appear, the
    # trace identity forces trace K = -|h|^2/2 <= 0
    invert(np.diag([1.0, 0.5, 0.25]), "positive definite, not realizable")


if __name__ == "__main__":
    main()
