"""Numerics for the Coulomb/hyperbolic spectral correspondence.

Implements, at desk scale, the unitary map between positive-energy Coulomb
generalized eigenfunctions and hyperbolic-space Laplacian eigenfunctions,
its repulsive variant, the classical Moser map, and the shared scattering
matrix, together with the quadrature/ODE machinery needed to verify the
defining identities numerically.
"""

__version__ = "0.1.0"
