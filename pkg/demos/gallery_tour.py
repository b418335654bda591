#!/usr/bin/env python3
"""Tour of the example gallery.

Builds every registered submanifold, then prints the headline facts next
to the residuals that certify them: defining condition (Lagrangian or
pseudoholomorphic), minimality, curvature constants, cubic stabilizer
class, austere flag, and circle rulings.

Run:  python3 demos/gallery_tour.py
"""

import numpy as np

from nksix.cubics import classify_stabilizer, gauss_map
from nksix.jets import (
    frame_at,
    fundamental_cubic,
    gauss_curvature,
    is_austere,
    lagrangian_residual,
    pseudoholomorphic_residual,
    riemann_K,
    sample_points,
)
from nksix.report import build_example, example_ids
from nksix.tubes import detect_ruling


def describe(ex: str) -> None:
    patch = build_example(ex)
    print(f"\n== {ex}  ({patch.dim}-parameter chart)")

    if patch.dim == 2:
        res = pseudoholomorphic_residual(patch, n_per_axis=12)
        kind = "pseudoholomorphic"
    else:
        res = lagrangian_residual(patch, n_per_axis=12)
        kind = "Lagrangian"
    print(f"   {kind} residual      {res:.3e}")

    fr = frame_at(patch, patch.anchor)
    print(f"   |mean curvature|    {np.linalg.norm(fr.mean_curvature):.3e}")

    if patch.dim == 2:
        ks = [gauss_curvature(patch, u) for u in sample_points(patch, 6, seed=0)]
        print(f"   Gauss curvature     {min(ks):.6f} .. {max(ks):.6f}")
        return

    K = riemann_K(patch, patch.anchor)
    sec = np.diag(K) + 1.0
    print(f"   sectional (frame)   {np.array2string(sec, precision=6)}")

    h = fundamental_cubic(patch, patch.anchor)
    if np.linalg.norm(h) < 1e-8:
        print("   fundamental cubic   zero (totally geodesic)")
    else:
        cls = classify_stabilizer(h)
        print(f"   cubic class         {cls.name}   austere={is_austere(h)}")
        print(f"   tr K vs -|h|^2/2    {np.trace(gauss_map(h)) + 0.5 * np.sum(h * h):+.1e}")

    rul = detect_ruling(patch, patch.anchor)
    if rul.all_directions:
        print("   rulings             geodesic circles in every direction")
    elif rul.isolated:
        radii = ", ".join(f"{d.radius:.6f}" for d in rul.isolated)
        print(f"   isolated rulings    radii {radii}")
    else:
        print("   rulings             none isolated")


def main() -> None:
    print("registered examples:", ", ".join(example_ids()))
    for ex in example_ids():
        if ex == "n1_tube_clifford":
            continue  # the deliberate non-example; see moving_frames.py
        describe(ex)

    print("\n== n1_tube_clifford  (negative control)")
    bad = build_example("n1_tube_clifford")
    print(f"   Lagrangian residual {lagrangian_residual(bad, n_per_axis=12):.3e}"
          "   <- fails by design: the first normal bundle of a curve with")
    print("   torsion does not produce a Lagrangian tube")


if __name__ == "__main__":
    main()
