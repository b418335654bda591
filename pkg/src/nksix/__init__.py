"""nksix: computational geometry of the nearly Kahler six-sphere.

Modules
-------
octonion   octonion arithmetic, cross product, phi0 / star_phi0, g2 test
forms      the nearly Kahler structure tensors J, omega, Upsilon, Im Omega
jets       immersion patches, induced metric, second fundamental form,
           fundamental cubic, curvature, Lagrangian / pseudoholomorphic
           residuals, austere and quasi-Einstein predicates
cubics     harmonic cubics on R^3, the K map, Gauss image membership,
           fiber solving, stabilizer classification, normal forms
gallery    explicit submanifold constructions: totally geodesic sphere,
           quasi-Einstein SO(2) example, A4 orbit, Veronese and cone-link
           lifts, constant-curvature pseudoholomorphic curves, the
           Clifford Legendrian curve, group orbit actions
tubes      pseudoholomorphic frames, tube constructions, ruling detection,
           circle fitting, frame ODEs, structure-equation extraction
report     verification runs, sweeps, report serialization
cli        the `nksix` command line
"""

__version__ = "0.1.0"
