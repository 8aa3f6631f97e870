"""Exact and numerical checks for extremal Kaehler metrics on blow-ups.

Submodules
----------
exact_geometry
    Delzant polytopes, corner chops, volumes, barycenters, Futaki functional.
projective_actions
    Hermitian generators on P^m, invariant algebras and conditions (i)-(iii).
class_calculus
    Cohomology classes on blown-up P^2, Cremona, epsilon families.
radial_metrics
    Radial scalar curvature, the Burns-Simanca metric, gluing schedules.
biharmonic_match
    Biharmonic extensions and per-mode matching determinants.
report, cli
    Scenario analysis, verification suites and the ``kbl`` command.
"""

__version__ = "0.1.0"
