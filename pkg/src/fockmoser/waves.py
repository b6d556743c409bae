"""Generalized eigenfunctions: Coulomb perturbed plane waves, hyperbolic
plane waves, their partial-wave radial forms, and Poisson-operator synthesis.

Conventions
-----------
The positive Coulomb spectrum is parametrized by E = 1/(2 hbar^2 lam^2); the
perturbed plane wave is

    psi(x; theta0) = c * exp(i x.theta0/(hbar^2 lam))
                       * M(i lam; (d-1)/2; i(|x| - x.theta0)/(hbar^2 lam)),
    c = |lam|^{d/2-1} hbar^{d/2} sqrt(2 pi),

the repulsive variant carries an extra e^{-pi |lam|} and the first slot
negated, and the hyperbolic plane wave on the Poincare ball is

    e_lam(u; theta0) = ((1-|u|^2)/|u-theta0|^2)^{(d-1)/2 - i lam}.

The hyperbolic radial operator used for residual checks comes from the ball
metric ds^2 = 4|du|^2/(1-|u|^2)^2.  For a conformal metric g = c(u)^2 delta
with c = 2/(1-rho^2), the Laplace-Beltrami operator on f(rho) Y_l is
c^{-2} [Delta_euc - l(l+d-2)/rho^2] + (d-2) c^{-2} (grad log c . grad), i.e.

    ((1-rho^2)^2/4) (f'' + (d-1)/rho f' - l(l+d-2)/rho^2 f)
        + ((d-2) rho (1-rho^2)/2) f',

with -Delta eigenvalue lam^2 + (d-1)^2/4.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import harmonics, specfun

__all__ = [
    "SpectralParams",
    "BoundaryData",
    "WaveField",
    "coulomb_plane_wave",
    "repulsive_plane_wave",
    "hyperbolic_plane_wave",
    "coulomb_partial_wave",
    "repulsive_partial_wave",
    "hyperbolic_partial_wave",
    "partial_wave_radial",
    "poisson_synthesize",
    "poisson_quadrature_oracle",
    "eigen_residual_coulomb",
    "eigen_residual_hyperbolic",
    "planewave_laplace_residual",
]


@dataclass(frozen=True)
class SpectralParams:
    """Dimension d >= 2, semiclassical hbar > 0, spectral parameter lam != 0."""

    d: int
    hbar: float = 1.0
    lam: float = 1.0

    def __post_init__(self):
        if self.d < 2 or self.d != int(self.d):
            raise ValueError("d must be an integer >= 2")
        if self.hbar <= 0:
            raise ValueError("hbar must be positive")
        if self.lam == 0:
            raise ValueError("lam must be nonzero")

    @property
    def energy(self):
        """E = 1/(2 hbar^2 lam^2) on the positive continuous spectrum."""
        return 1.0 / (2.0 * self.hbar**2 * self.lam**2)

    @property
    def norm_const(self):
        """c = |lam|^{d/2-1} hbar^{d/2} sqrt(2 pi)."""
        return (
            abs(self.lam) ** (self.d / 2.0 - 1.0)
            * self.hbar ** (self.d / 2.0)
            * np.sqrt(2.0 * np.pi)
        )


class BoundaryData:
    """Truncated expansion of f in the real harmonic basis on S^{d-1}.

    coeffs[ell] is a complex array of length harmonics.harmonic_count(d, ell)
    for ell = 0..ell_max.
    """

    def __init__(self, d, coeffs):
        self.d = int(d)
        self.coeffs = [np.asarray(c, dtype=complex).ravel() for c in coeffs]
        for ell, c in enumerate(self.coeffs):
            expected = harmonics.harmonic_count(self.d, ell)
            if c.size != expected:
                raise ValueError(
                    f"degree {ell} needs {expected} coefficients, got {c.size}"
                )

    @property
    def ell_max(self):
        return len(self.coeffs) - 1

    def items(self):
        for ell, c in enumerate(self.coeffs):
            for j, v in enumerate(c):
                yield ell, j, v

    def norm(self):
        return float(np.sqrt(sum(np.sum(np.abs(c) ** 2) for c in self.coeffs)))

    def evaluate(self, points):
        """f(theta) at unit points (n, d)."""
        pts = np.atleast_2d(points)
        out = np.zeros(pts.shape[0], dtype=complex)
        for ell, j, v in self.items():
            if v != 0:
                out += v * harmonics.real_harmonic(self.d, ell, j, pts)
        return out

    @classmethod
    def single_mode(cls, d, ell, j, ell_max=None):
        ell_max = ell if ell_max is None else ell_max
        coeffs = [
            np.zeros(harmonics.harmonic_count(d, k), dtype=complex)
            for k in range(ell_max + 1)
        ]
        coeffs[ell][j] = 1.0
        return cls(d, coeffs)

    @classmethod
    def random(cls, d, ell_max, rng):
        coeffs = []
        for ell in range(ell_max + 1):
            n = harmonics.harmonic_count(d, ell)
            coeffs.append(rng.standard_normal(n) + 1j * rng.standard_normal(n))
        return cls(d, coeffs)


@dataclass(frozen=True)
class WaveField:
    """Complex samples of a generalized eigenfunction on a spatial grid."""

    grid: np.ndarray
    values: np.ndarray
    kind: str
    params: SpectralParams

    def __post_init__(self):
        grid = np.atleast_2d(np.asarray(self.grid, dtype=float))
        values = np.asarray(self.values, dtype=complex).ravel()
        if grid.shape[0] != values.shape[0]:
            raise ValueError("values length must equal grid length")
        if self.kind not in ("coulomb", "hyperbolic", "repulsive"):
            raise ValueError("kind must be coulomb | hyperbolic | repulsive")
        if self.kind == "hyperbolic" and np.any(
            np.linalg.norm(grid, axis=1) >= 1.0
        ):
            raise ValueError("hyperbolic fields live strictly inside the ball")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    def to_csv(self, path):
        """CSV export: x1..xd, re, im with a metadata header line."""
        d = self.grid.shape[1]
        with open(path, "w", newline="") as fh:
            fh.write(
                f"# kind={self.kind},d={self.params.d},"
                f"hbar={self.params.hbar!r},lambda={self.params.lam!r}\n"
            )
            writer = csv.writer(fh)
            writer.writerow([f"x{i + 1}" for i in range(d)] + ["re", "im"])
            for p, v in zip(self.grid, self.values):
                writer.writerow(
                    [f"{c:.17g}" for c in p] + [f"{v.real:.17g}", f"{v.imag:.17g}"]
                )


# ---------------------------------------------------------------------------
# Plane waves
# ---------------------------------------------------------------------------


def _points_2d(x, d):
    pts = np.atleast_2d(np.asarray(x, dtype=float))
    if pts.shape[1] != d:
        raise ValueError("point dimension mismatch")
    return pts


def coulomb_plane_wave(params, x, theta0, policy=None):
    """Perturbed plane wave psi_{hbar,lam}(x; theta0) of the attractive branch."""
    theta0 = harmonics.as_unit(theta0, tol=1e-9)
    pts = _points_2d(x, params.d)
    scalar = np.asarray(x).ndim == 1
    dot = pts @ theta0
    r = np.linalg.norm(pts, axis=1)
    scale = 1.0 / (params.hbar**2 * params.lam)
    m = specfun.olver_M(
        1j * params.lam, (params.d - 1) / 2.0, 1j * scale * (r - dot), policy
    )
    out = params.norm_const * np.exp(1j * scale * dot) * m
    return out[0] if scalar else out


def repulsive_plane_wave(params, x, theta0, policy=None):
    """Repulsive-branch perturbed plane wave: extra e^{-pi|lam|}, first slot negated."""
    theta0 = harmonics.as_unit(theta0, tol=1e-9)
    pts = _points_2d(x, params.d)
    scalar = np.asarray(x).ndim == 1
    dot = pts @ theta0
    r = np.linalg.norm(pts, axis=1)
    scale = 1.0 / (params.hbar**2 * params.lam)
    m = specfun.olver_M(
        -1j * params.lam, (params.d - 1) / 2.0, 1j * scale * (r - dot), policy
    )
    out = (
        params.norm_const
        * np.exp(-np.pi * abs(params.lam))
        * np.exp(1j * scale * dot)
        * m
    )
    return out[0] if scalar else out


def hyperbolic_plane_wave(lam, u, theta0):
    """e_lam(u; theta0) = ((1-|u|^2)/|u-theta0|^2)^{(d-1)/2 - i lam}, |u| < 1."""
    theta0 = harmonics.as_unit(theta0, tol=1e-9)
    d = theta0.size
    pts = _points_2d(u, d)
    scalar = np.asarray(u).ndim == 1
    r2 = np.sum(pts * pts, axis=1)
    if np.any(r2 >= 1.0):
        raise ValueError("hyperbolic plane wave requires |u| < 1")
    base = (1.0 - r2) / np.sum((pts - theta0) ** 2, axis=1)
    out = np.exp(((d - 1) / 2.0 - 1j * lam) * np.log(base))
    return out[0] if scalar else out


# ---------------------------------------------------------------------------
# Partial waves
# ---------------------------------------------------------------------------


def coulomb_partial_wave(params, ell, r, policy=None):
    """Radial factor of P_coulomb[Y_ell] (multiply by Y_ell(x^) for the field).

    c 2^{d-1} pi^{(d-1)/2} Gamma((d-1)/2+l-i lam)/Gamma((d-1)/2-i lam)
      * (2 i r~)^l e^{i r~} M((d-1)/2+l-i lam; d-1+2l; -2 i r~),
    with r~ = r/(hbar^2 lam).
    """
    d, lam = params.d, params.lam
    r = np.asarray(r, dtype=float)
    scalar = r.ndim == 0
    rt = np.atleast_1d(r) / (params.hbar**2 * lam)
    a = (d - 1) / 2.0 + ell - 1j * lam
    pref = (
        params.norm_const
        * 2.0 ** (d - 1)
        * np.pi ** ((d - 1) / 2.0)
        * np.exp(specfun.log_gamma(a) - specfun.log_gamma((d - 1) / 2.0 - 1j * lam))
    )
    m = specfun.olver_M(a, d - 1.0 + 2 * ell, -2j * rt, policy)
    out = pref * (2j * rt) ** ell * np.exp(1j * rt) * m
    return out[0] if scalar else out


def repulsive_partial_wave(params, ell, r, policy=None):
    """Radial factor of the repulsive Poisson operator on Y_ell.

    Same Euler-integral chain as the attractive case with i lam negated in
    the M slots (the measure factors are unchanged), carrying the
    e^{-pi |lam|} of the repulsive plane wave.
    """
    d, lam = params.d, params.lam
    r = np.asarray(r, dtype=float)
    scalar = r.ndim == 0
    rt = np.atleast_1d(r) / (params.hbar**2 * lam)
    a = (d - 1) / 2.0 + ell + 1j * lam
    pref = (
        params.norm_const
        * np.exp(-np.pi * abs(lam))
        * 2.0 ** (d - 1)
        * np.pi ** ((d - 1) / 2.0)
        * np.exp(specfun.log_gamma(a) - specfun.log_gamma((d - 1) / 2.0 + 1j * lam))
    )
    m = specfun.olver_M(a, d - 1.0 + 2 * ell, -2j * rt, policy)
    out = pref * (2j * rt) ** ell * np.exp(1j * rt) * m
    return out[0] if scalar else out


def hyperbolic_partial_wave(lam, d, ell, rho):
    """Radial factor of P_hyperbolic[Y_ell] on the ball at radius rho in [0, 1).

    (2 pi)^{d/2} Gamma((d-1)/2-i lam+l)/Gamma((d-1)/2-i lam)
      * (2 rho/(1-rho^2))^{1-d/2} P^{-(d/2-1+l)}_{-1/2+i lam}((1+rho^2)/(1-rho^2)).
    rho = 0 is allowed only for d = 2 (for d >= 3 take a one-sided limit).
    """
    rho = np.asarray(rho, dtype=float)
    scalar = rho.ndim == 0
    rho = np.atleast_1d(rho)
    if np.any((rho < 0) | (rho >= 1.0)):
        raise ValueError("rho must lie in [0, 1)")
    if d >= 3 and np.any(rho == 0.0):
        raise ValueError("rho = 0 is a coordinate singularity for d >= 3")
    mu = d / 2.0 - 1.0 + ell
    x = (1.0 + rho * rho) / (1.0 - rho * rho)
    gam = np.exp(
        specfun.log_gamma((d - 1) / 2.0 - 1j * lam + ell)
        - specfun.log_gamma((d - 1) / 2.0 - 1j * lam)
    )
    with np.errstate(divide="ignore"):
        radial = np.where(
            rho > 0.0, (2.0 * rho / (1.0 - rho * rho)) ** (1.0 - d / 2.0), 1.0
        )
    p = np.empty_like(x)
    pos = rho > 0.0
    if np.any(pos):
        p[pos] = specfun.conical_legendre_P(lam, mu, x[pos])
    if np.any(~pos):
        # d = 2, rho = 0: x = 1 exactly; P^{-l}(1) = 1 for l = 0, else 0
        p[~pos] = 1.0 if ell == 0 else 0.0
    out = (2.0 * np.pi) ** (d / 2.0) * gam * radial * p
    return out[0] if scalar else out


def partial_wave_radial(kind, params, ell, r, policy=None):
    """Dispatch the radial partial-wave factor by field kind."""
    if kind == "coulomb":
        return coulomb_partial_wave(params, ell, r, policy)
    if kind == "repulsive":
        return repulsive_partial_wave(params, ell, r, policy)
    if kind == "hyperbolic":
        return hyperbolic_partial_wave(params.lam, params.d, ell, r)
    raise ValueError("kind must be coulomb | hyperbolic | repulsive")


# ---------------------------------------------------------------------------
# Poisson synthesis
# ---------------------------------------------------------------------------


def poisson_synthesize(kind, params, f, points, policy=None):
    """Poisson operator applied to truncated boundary data, mode by mode.

    F(x) = sum_{l,j} f_{lj} * radial_l(|x|) * Y_{lj}(x^); equals the direct
    sphere quadrature of the plane-wave kernel against f for smooth data.
    """
    if f.d != params.d:
        raise ValueError("boundary data dimension mismatch")
    pts = _points_2d(points, params.d)
    r = np.linalg.norm(pts, axis=1)
    if kind == "hyperbolic" and np.any(r >= 1.0):
        raise ValueError("hyperbolic synthesis requires points inside the ball")
    hats = pts / np.where(r > 0, r, 1.0)[:, None]
    values = np.zeros(pts.shape[0], dtype=complex)
    for ell in range(f.ell_max + 1):
        coeffs = f.coeffs[ell]
        if not np.any(coeffs):
            continue
        radial = partial_wave_radial(kind, params, ell, r, policy)
        angular = np.zeros(pts.shape[0], dtype=complex)
        for j, v in enumerate(coeffs):
            if v != 0:
                angular += v * harmonics.real_harmonic(params.d, ell, j, hats)
        values += radial * angular
    return WaveField(pts, values, kind, params)


def poisson_quadrature_oracle(
    kind, params, f, points, n_polar=64, n_azimuth=256, policy=None
):
    """Direct sphere quadrature of the plane-wave kernel against f.

    Independent of the partial-wave route: trapezoid on the circle for d=2,
    Gauss-Legendre x trapezoid product rule for d=3.
    """
    pts = _points_2d(points, params.d)
    thetas, w = harmonics.sphere_quadrature(params.d, n_polar, n_azimuth)
    fvals = f.evaluate(thetas)
    out = np.empty(pts.shape[0], dtype=complex)
    for i, x in enumerate(pts):
        if kind == "coulomb":
            kernel = _coulomb_kernel_many_thetas(params, x, thetas, policy)
        elif kind == "repulsive":
            kernel = _repulsive_kernel_many_thetas(params, x, thetas, policy)
        elif kind == "hyperbolic":
            kernel = _hyperbolic_kernel_many_thetas(params.lam, x, thetas)
        else:
            raise ValueError("unknown kind")
        out[i] = np.sum(w * kernel * fvals)
    return out


def _coulomb_kernel_many_thetas(params, x, thetas, policy):
    dot = thetas @ x
    r = np.linalg.norm(x)
    scale = 1.0 / (params.hbar**2 * params.lam)
    m = specfun.olver_M(
        1j * params.lam, (params.d - 1) / 2.0, 1j * scale * (r - dot), policy
    )
    return params.norm_const * np.exp(1j * scale * dot) * m


def _repulsive_kernel_many_thetas(params, x, thetas, policy):
    dot = thetas @ x
    r = np.linalg.norm(x)
    scale = 1.0 / (params.hbar**2 * params.lam)
    m = specfun.olver_M(
        -1j * params.lam, (params.d - 1) / 2.0, 1j * scale * (r - dot), policy
    )
    return (
        params.norm_const
        * np.exp(-np.pi * abs(params.lam))
        * np.exp(1j * scale * dot)
        * m
    )


def _hyperbolic_kernel_many_thetas(lam, u, thetas):
    d = thetas.shape[1]
    r2 = float(u @ u)
    base = (1.0 - r2) / np.sum((thetas - u) ** 2, axis=1)
    return np.exp(((d - 1) / 2.0 - 1j * lam) * np.log(base))


# ---------------------------------------------------------------------------
# Eigen-equation residuals (order-2 finite differences)
# ---------------------------------------------------------------------------


def _uniform_spacing(grid):
    grid = np.asarray(grid, dtype=float)
    if grid.size < 3:
        raise ValueError("need at least 3 grid points")
    h = np.diff(grid)
    if np.max(np.abs(h - h[0])) > 1e-9 * abs(h[0]):
        raise ValueError("grid must be uniform")
    return grid, float(h[0])


def eigen_residual_coulomb(params, ell, r_grid, sign="+", policy=None):
    """max |(radial operator - E) psi_l| / max |psi_l| on the interior grid.

    The operator is -hbar^2/2 (d_r^2 + (d-1)/r d_r - l(l+d-2)/r^2) -+ 1/r
    applied by central differences; scales as O(h^2).
    """
    grid, h = _uniform_spacing(r_grid)
    if grid[0] - h <= 0:
        raise ValueError("grid (with stencil margin) must stay away from r = 0")
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' (attractive) or '-' (repulsive)")
    full = np.concatenate([[grid[0] - h], grid, [grid[-1] + h]])
    wave = coulomb_partial_wave if sign == "+" else repulsive_partial_wave
    psi = wave(params, ell, full, policy)
    r = full[1:-1]
    d = params.d
    d2 = (psi[2:] - 2.0 * psi[1:-1] + psi[:-2]) / h**2
    d1 = (psi[2:] - psi[:-2]) / (2.0 * h)
    pot = -1.0 / r if sign == "+" else 1.0 / r
    op = (
        -params.hbar**2
        / 2.0
        * (d2 + (d - 1) / r * d1 - ell * (ell + d - 2) / r**2 * psi[1:-1])
        + pot * psi[1:-1]
    )
    resid = op - params.energy * psi[1:-1]
    return float(np.max(np.abs(resid)) / np.max(np.abs(psi[1:-1])))


def eigen_residual_hyperbolic(lam, d, ell, rho_grid):
    """Residual of the ball-model radial Laplace-Beltrami eigen-equation.

    Applies -[((1-rho^2)^2/4)(d^2 + (d-1)/rho d - l(l+d-2)/rho^2)
    + ((d-2) rho (1-rho^2)/2) d] - (lam^2 + (d-1)^2/4) to the partial wave.
    """
    grid, h = _uniform_spacing(rho_grid)
    if grid[0] - h <= 0 or grid[-1] + h >= 1.0:
        raise ValueError("grid (with stencil margin) must stay inside (0, 1)")
    full = np.concatenate([[grid[0] - h], grid, [grid[-1] + h]])
    psi = hyperbolic_partial_wave(lam, d, ell, full)
    rho = full[1:-1]
    d2 = (psi[2:] - 2.0 * psi[1:-1] + psi[:-2]) / h**2
    d1 = (psi[2:] - psi[:-2]) / (2.0 * h)
    lap = (1.0 - rho * rho) ** 2 / 4.0 * (
        d2 + (d - 1) / rho * d1 - ell * (ell + d - 2) / rho**2 * psi[1:-1]
    ) + (d - 2) * rho * (1.0 - rho * rho) / 2.0 * d1
    ev = lam * lam + (d - 1) ** 2 / 4.0
    resid = -lap - ev * psi[1:-1]
    return float(np.max(np.abs(resid)) / np.max(np.abs(psi[1:-1])))


def planewave_laplace_residual(lam, theta0, center, half_width, n, d=2):
    """Residual of e_lam under the full FD Laplace-Beltrami on a d=2 grid."""
    if d != 2:
        raise ValueError("plane-wave grid residual implemented for d = 2")
    c = np.asarray(center, dtype=float)
    xs = np.linspace(c[0] - half_width, c[0] + half_width, n)
    ys = np.linspace(c[1] - half_width, c[1] + half_width, n)
    h = xs[1] - xs[0]
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    pts = np.column_stack([X.ravel(), Y.ravel()])
    if np.any(np.linalg.norm(pts, axis=1) >= 1.0):
        raise ValueError("grid must stay inside the unit ball")
    E = hyperbolic_plane_wave(lam, pts, theta0).reshape(n, n)
    lap = (
        E[2:, 1:-1] + E[:-2, 1:-1] + E[1:-1, 2:] + E[1:-1, :-2] - 4.0 * E[1:-1, 1:-1]
    ) / h**2
    r2 = (X[1:-1, 1:-1] ** 2 + Y[1:-1, 1:-1] ** 2)
    lap_g = (1.0 - r2) ** 2 / 4.0 * lap
    ev = lam * lam + 0.25
    resid = -lap_g - ev * E[1:-1, 1:-1]
    return float(np.max(np.abs(resid)) / np.max(np.abs(E)))
