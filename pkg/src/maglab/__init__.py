"""Numerical laboratory for metric-affine geometry.

Computes torsion, nonmetricity, curvature, Cartan connections and Lie
derivatives on manifolds with a metric and an independent connection;
integrates transport, extremal and deviation equations; and evaluates
relativistic observables (time delay, Doppler shift, frame boosts) for
Schwarzschild and Friedmann spacetimes.
"""

__version__ = "0.1.0"
