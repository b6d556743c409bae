"""Real orthonormal spherical-harmonic bases and sphere quadrature, d in {2, 3}.

d=2 uses the Fourier basis {1/sqrt(2pi), cos(l phi)/sqrt(pi), sin(l phi)/sqrt(pi)};
d=3 uses real orthonormal spherical harmonics built from associated Legendre
functions.  Only orthonormality matters downstream; no phase convention is
relied upon.
"""

from __future__ import annotations

import math

import numpy as np

from .numerics import gauss_legendre

__all__ = [
    "sphere_area",
    "harmonic_count",
    "real_harmonic",
    "sphere_quadrature",
    "as_unit",
    "normalized",
    "random_directions",
]


def sphere_area(d):
    """Surface area of the unit sphere S^{d-1}."""
    return 2.0 * np.pi ** (d / 2.0) / math.gamma(d / 2.0)


def harmonic_count(d, ell):
    """Dimension of the degree-ell harmonic space on S^{d-1}."""
    if d == 2:
        return 1 if ell == 0 else 2
    if d == 3:
        return 2 * ell + 1
    raise ValueError("harmonic bases implemented for d in {2, 3}")


def as_unit(v, tol=1e-12):
    """Validate that v lies on the unit sphere (|v| = 1 within tol)."""
    v = np.asarray(v, dtype=float)
    if abs(np.linalg.norm(v) - 1.0) > tol:
        raise ValueError("direction must be a unit vector")
    return v


def normalized(v):
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if n == 0:
        raise ValueError("cannot normalize the zero vector")
    return v / n


def random_directions(d, n, rng):
    """n uniformly random unit vectors on S^{d-1}."""
    v = rng.standard_normal((n, d))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _assoc_legendre(ell, m, x):
    """Associated Legendre P_l^m(x) on [-1,1], no Condon-Shortley phase."""
    x = np.asarray(x, dtype=float)
    pmm = np.ones_like(x)
    if m > 0:
        s = np.sqrt(np.maximum(0.0, 1.0 - x * x))
        fact = 1.0
        for _ in range(m):
            pmm = pmm * fact * s
            fact += 2.0
    if ell == m:
        return pmm
    pm1 = x * (2.0 * m + 1.0) * pmm
    if ell == m + 1:
        return pm1
    for ll in range(m + 2, ell + 1):
        pmm, pm1 = pm1, (x * (2 * ll - 1) * pm1 - (ll + m - 1) * pmm) / (ll - m)
    return pm1


def real_harmonic(d, ell, j, points):
    """Real orthonormal harmonic Y_{ell, j} at unit points of shape (n, d).

    j indexes the degree-ell basis: d=2 gives j=0 the cosine and j=1 the
    sine mode; d=3 orders j = 0..2*ell with m = j - ell (sine modes for
    m < 0, zonal m = 0, cosine modes for m > 0).
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != d:
        raise ValueError("points dimension mismatch")
    if not 0 <= j < harmonic_count(d, ell):
        raise ValueError("harmonic index out of range")
    if d == 2:
        phi = np.arctan2(pts[:, 1], pts[:, 0])
        if ell == 0:
            return np.full(pts.shape[0], 1.0 / np.sqrt(2.0 * np.pi))
        if j == 0:
            return np.cos(ell * phi) / np.sqrt(np.pi)
        return np.sin(ell * phi) / np.sqrt(np.pi)
    # d == 3
    m = j - ell
    ct = np.clip(pts[:, 2], -1.0, 1.0)
    phi = np.arctan2(pts[:, 1], pts[:, 0])
    am = abs(m)
    norm = math.sqrt(
        (2 * ell + 1)
        / (4.0 * np.pi)
        * math.exp(math.lgamma(ell - am + 1) - math.lgamma(ell + am + 1))
    )
    p = _assoc_legendre(ell, am, ct)
    if m == 0:
        return norm * p
    if m > 0:
        return math.sqrt(2.0) * norm * p * np.cos(am * phi)
    return math.sqrt(2.0) * norm * p * np.sin(am * phi)


def sphere_quadrature(d, n_polar=64, n_azimuth=128):
    """Quadrature points/weights on S^{d-1} integrating dtheta exactly enough.

    d=2: trapezoid on the circle (spectrally accurate for smooth periodic
    integrands).  d=3: Gauss-Legendre in cos(theta) x trapezoid in phi,
    exact for harmonics up to high degree.
    """
    if d == 2:
        n = max(n_azimuth, 4)
        phi = 2.0 * np.pi * np.arange(n) / n
        pts = np.column_stack([np.cos(phi), np.sin(phi)])
        w = np.full(n, 2.0 * np.pi / n)
        return pts, w
    if d == 3:
        ct, wt = gauss_legendre(n_polar)
        phi = 2.0 * np.pi * np.arange(n_azimuth) / n_azimuth
        st = np.sqrt(1.0 - ct * ct)
        x = np.outer(st, np.cos(phi)).ravel()
        y = np.outer(st, np.sin(phi)).ravel()
        z = np.outer(ct, np.ones(n_azimuth)).ravel()
        w = np.outer(wt, np.full(n_azimuth, 2.0 * np.pi / n_azimuth)).ravel()
        return np.column_stack([x, y, z]), w
    raise ValueError("sphere quadrature implemented for d in {2, 3}")
