"""Shared quadrature, extrapolation, finite-difference and ODE machinery.

The oscillatory radial integrals in this package are conditionally (or only
Abel-) convergent; they are computed by damping the integrand with
``e^{-eps r}`` over a decreasing ladder of eps values and Richardson
extrapolation to eps = 0, mirroring the decay device used to make the
closed-form identities rigorous.  Gauss rules have their nodes polished by
Newton iteration on the orthogonal-polynomial recurrence to ~1e-15.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import eigh_tridiagonal

__all__ = [
    "QuadratureSpec",
    "OdeSpec",
    "Trajectory",
    "gauss_legendre",
    "gauss_jacobi",
    "richardson_extrapolate",
    "integrate_damped_oscillatory",
    "ode_integrate",
    "finite_difference_jacobian",
    "DampingConvergenceWarning",
]

DEFAULT_DAMPING_LADDER = (0.2, 0.1, 0.05, 0.025, 0.0125)


class DampingConvergenceWarning(UserWarning):
    """Successive damping extrapolants disagree beyond the requested tolerance."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Parameters for the damped-oscillatory integrator.

    node_count: Gauss-Legendre nodes per panel.
    jacobi_alpha, jacobi_beta: endpoint weight exponents (> -1) for callers
        that build endpoint-singular rules.
    damping_ladder: strictly decreasing positive eps values.
    extrapolation_order: polynomial order of the Richardson extrapolation,
        must be < len(damping_ladder).
    """

    node_count: int = 16
    jacobi_alpha: float = 0.0
    jacobi_beta: float = 0.0
    damping_ladder: Sequence[float] = DEFAULT_DAMPING_LADDER
    extrapolation_order: int = 3

    def __post_init__(self):
        if self.node_count < 2:
            raise ValueError("node_count must be >= 2")
        if self.jacobi_alpha <= -1 or self.jacobi_beta <= -1:
            raise ValueError("jacobi exponents must be > -1")
        ladder = tuple(float(e) for e in self.damping_ladder)
        if len(ladder) == 0 or any(e <= 0 for e in ladder):
            raise ValueError("damping ladder must be positive")
        if any(b >= a for a, b in zip(ladder, ladder[1:])):
            raise ValueError("damping ladder must be strictly decreasing")
        if not 0 <= self.extrapolation_order < len(ladder):
            raise ValueError("extrapolation_order must be < ladder length")
        object.__setattr__(self, "damping_ladder", ladder)


@dataclass(frozen=True)
class OdeSpec:
    """Adaptive Runge-Kutta tolerances and collision-event radius."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = np.inf
    event_threshold: float = 1e-8

    def __post_init__(self):
        if not (0 < self.rel_tol < 1 and 0 < self.abs_tol < 1):
            raise ValueError("tolerances must lie in (0, 1)")
        if self.max_step <= 0:
            raise ValueError("max_step must be positive")
        if self.event_threshold <= 0:
            raise ValueError("event_threshold must be positive")


@dataclass(frozen=True)
class Trajectory:
    """Time-stamped states with per-sample event markers.

    states has shape (n, m) with one flat state per row; event_flags is a
    tuple of None or "collision_reflection" per sample.
    """

    times: np.ndarray
    states: np.ndarray
    event_flags: tuple = ()

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        states = np.asarray(self.states, dtype=float)
        if times.ndim != 1 or states.shape[0] != times.shape[0]:
            raise ValueError("states length must equal times length")
        if np.any(np.diff(times) <= 0):
            raise ValueError("times must be strictly increasing")
        flags = tuple(self.event_flags) or (None,) * len(times)
        if len(flags) != len(times):
            raise ValueError("event_flags length must equal times length")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "event_flags", flags)

    def __len__(self):
        return len(self.times)


# ---------------------------------------------------------------------------
# Gauss rules
# ---------------------------------------------------------------------------

_legendre_cache: dict = {}
_jacobi_cache: dict = {}


def _legendre_eval(n, x):
    """P_n(x) and P_n'(x) by the three-term recurrence."""
    p0 = np.ones_like(x)
    p1 = x.copy()
    for j in range(2, n + 1):
        p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    return p1, dp


def gauss_legendre(n):
    """Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].

    Newton iteration on the Legendre recurrence from the standard cosine
    initial guesses; exact for polynomials of degree <= 2n-1.
    """
    if n < 1 or n != int(n):
        raise ValueError("n must be a positive integer")
    n = int(n)
    if n in _legendre_cache:
        x, w = _legendre_cache[n]
        return x.copy(), w.copy()
    if n == 1:
        x, w = np.zeros(1), np.full(1, 2.0)
    else:
        k = np.arange(n)
        x = np.cos(np.pi * (k + 0.75) / (n + 0.5))
        for _ in range(100):
            p, dp = _legendre_eval(n, x)
            dx = p / dp
            x = x - dx
            if np.max(np.abs(dx)) < 1e-15:
                break
        _, dp = _legendre_eval(n, x)
        w = 2.0 / ((1.0 - x * x) * dp * dp)
        order = np.argsort(x)
        x, w = x[order], w[order]
    _legendre_cache[n] = (x, w)
    return x.copy(), w.copy()


def _jacobi_eval(n, a, b, x):
    """P_n^{(a,b)}(x) and its derivative by the three-term recurrence."""
    p0 = np.ones_like(x)
    if n == 0:
        return p0, np.zeros_like(x)
    p1 = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x
    for k in range(2, n + 1):
        c1 = 2.0 * k * (k + a + b) * (2.0 * k + a + b - 2.0)
        c2 = (2.0 * k + a + b - 1.0) * (a * a - b * b)
        c3 = (
            (2.0 * k + a + b - 1.0)
            * (2.0 * k + a + b)
            * (2.0 * k + a + b - 2.0)
        )
        c4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * (2.0 * k + a + b)
        p0, p1 = p1, ((c2 + c3 * x) * p1 - c4 * p0) / c1
    dp = (
        n * (a - b - (2.0 * n + a + b) * x) * p1
        + 2.0 * (n + a) * (n + b) * p0
    ) / ((2.0 * n + a + b) * (1.0 - x * x))
    return p1, dp


def gauss_jacobi(n, alpha, beta):
    """Gauss-Jacobi rule for the weight (1-t)^alpha (1+t)^beta on [-1, 1].

    Golub-Welsch eigenvalues give global initial guesses; nodes are then
    polished by Newton iteration on the Jacobi recurrence and weights come
    from the derivative formula.  Exact for polynomials of degree <= 2n-1
    against the weight.
    """
    if n < 1 or n != int(n):
        raise ValueError("n must be a positive integer")
    if alpha <= -1 or beta <= -1:
        raise ValueError("alpha and beta must be > -1")
    n = int(n)
    key = (n, float(alpha), float(beta))
    if key in _jacobi_cache:
        x, w = _jacobi_cache[key]
        return x.copy(), w.copy()
    a, b = float(alpha), float(beta)
    mu0 = math.exp(
        (a + b + 1.0) * math.log(2.0)
        + math.lgamma(a + 1.0)
        + math.lgamma(b + 1.0)
        - math.lgamma(a + b + 2.0)
    )
    if n == 1:
        x = np.array([(b - a) / (a + b + 2.0)])
        w = np.array([mu0])
    else:
        k = np.arange(n, dtype=float)
        diag = np.empty(n)
        diag[0] = (b - a) / (a + b + 2.0)
        kk = k[1:]
        diag[1:] = (b * b - a * a) / (
            (2.0 * kk + a + b) * (2.0 * kk + a + b + 2.0)
        )
        off = np.empty(n - 1)
        off[0] = math.sqrt(
            4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b) ** 2 * (3.0 + a + b))
        )
        if n > 2:
            kk = k[2:]
            off[1:] = np.sqrt(
                4.0
                * kk
                * (kk + a)
                * (kk + b)
                * (kk + a + b)
                / (
                    (2.0 * kk + a + b) ** 2
                    * (2.0 * kk + a + b + 1.0)
                    * (2.0 * kk + a + b - 1.0)
                )
            )
        x, _ = eigh_tridiagonal(diag, off, select="a")
        for _ in range(3):
            p, dp = _jacobi_eval(n, a, b, x)
            x = x - p / dp
        _, dp = _jacobi_eval(n, a, b, x)
        logc = (
            (a + b + 1.0) * math.log(2.0)
            + math.lgamma(n + a + 1.0)
            + math.lgamma(n + b + 1.0)
            - math.lgamma(n + 1.0)
            - math.lgamma(n + a + b + 1.0)
        )
        w = math.exp(logc) / ((1.0 - x * x) * dp * dp)
    _jacobi_cache[key] = (x, w)
    return x.copy(), w.copy()


def panel_rule(a, b, panel_length, node_count):
    """Composite Gauss-Legendre nodes/weights covering [a, b]."""
    if b <= a:
        raise ValueError("need b > a")
    n_panels = max(1, int(np.ceil((b - a) / panel_length)))
    x0, w0 = gauss_legendre(node_count)
    edges = np.linspace(a, b, n_panels + 1)
    half = np.diff(edges) / 2.0
    mid = (edges[:-1] + edges[1:]) / 2.0
    nodes = (mid[:, None] + half[:, None] * x0[None, :]).ravel()
    weights = (half[:, None] * w0[None, :]).ravel()
    return nodes, weights


# ---------------------------------------------------------------------------
# Richardson extrapolation and damped oscillatory integrals
# ---------------------------------------------------------------------------


def richardson_extrapolate(samples, order, even=False):
    """Polynomial extrapolation of (eps_k, value_k) samples to eps = 0.

    Uses the (order+1) samples of smallest eps; extrapolates in eps (or
    eps^2 when ``even`` declares even symmetry).  Returns (limit,
    error_estimate) where the estimate is the spread between the final
    extrapolant and the one of one order lower.
    """
    pts = sorted(((float(e), complex(v)) for e, v in samples), key=lambda p: p[0])
    eps = np.array([p[0] for p in pts])
    if np.any(eps <= 0):
        raise ValueError("eps values must be positive")
    if len(set(eps.tolist())) != len(eps):
        raise ValueError("degenerate damping ladder (repeated eps)")
    if not 0 <= order < len(pts):
        raise ValueError("order must satisfy 0 <= order < len(samples)")

    def _neville(points):
        xs = np.array([p[0] for p in points])
        if even:
            xs = xs * xs
        vs = np.array([p[1] for p in points], dtype=complex)
        n = len(points)
        tab = vs.copy()
        for m in range(1, n):
            tab[: n - m] = (
                xs[m : m + n - m] * tab[: n - m] - xs[: n - m] * tab[1 : n - m + 1]
            ) / (xs[m : m + n - m] - xs[: n - m])
        return tab[0]

    small = pts[: order + 1]
    limit = _neville(small)
    if order == 0:
        err = abs(limit - small[-1][1])
    else:
        err = abs(limit - _neville(pts[:order]))
    return limit, float(err)


def integrate_damped_oscillatory(
    f: Callable[[np.ndarray], np.ndarray],
    r_max: float,
    spec: Optional[QuadratureSpec] = None,
    panel_length: float = 1.0,
    tol: Optional[float] = None,
):
    """lim_{eps->0} int_0^{r_max} f(r) e^{-eps r} dr by Richardson in eps.

    ``f`` must accept a float array of abscissae and return complex values.
    The integrand is sampled once on composite Gauss-Legendre panels (choose
    ``panel_length`` so each panel sees at most ~1 radian of the integrand's
    fastest phase); each ladder eps reuses the samples.  Returns (value,
    error_estimate); warns with DampingConvergenceWarning when the last two
    extrapolants differ by more than 10x ``tol`` (skipped when tol is
    None).
    """
    if spec is None:
        spec = QuadratureSpec()
    nodes, weights = panel_rule(0.0, r_max, panel_length, spec.node_count)
    fv = np.asarray(f(nodes), dtype=complex)
    if fv.shape != nodes.shape:
        raise ValueError("f must return one value per node")
    ladder = np.asarray(spec.damping_ladder)
    vals = [np.sum(weights * fv * np.exp(-eps * nodes)) for eps in ladder]
    value, err = richardson_extrapolate(
        list(zip(ladder, vals)), spec.extrapolation_order
    )
    if tol is not None and err > 10.0 * tol:
        warnings.warn(
            f"damping extrapolants differ by {err:.3e} (> 10 x tol = {10 * tol:.1e})",
            DampingConvergenceWarning,
            stacklevel=2,
        )
    return value, err


# ---------------------------------------------------------------------------
# ODE integration with collision events
# ---------------------------------------------------------------------------


def ode_integrate(
    field,
    y0,
    t_span,
    spec: Optional[OdeSpec] = None,
    event_fn=None,
    reflect_fn=None,
    t_eval=None,
):
    """Adaptive RK45 integration with optional collision reflection.

    field(t, y) -> dy/dt on flat state vectors.  event_fn(t, y) -> float is
    located where it crosses zero from above (direction -1); at each event
    the sample is flagged "collision_reflection" and reflect_fn(t, y) ->
    (y_new, time_delay) restarts the integration at t + time_delay.  An
    event without a reflect_fn raises; step-size underflow raises.
    """
    if spec is None:
        spec = OdeSpec()
    t0, t1 = float(t_span[0]), float(t_span[1])
    if t1 <= t0:
        raise ValueError("need t1 > t0")
    y = np.asarray(y0, dtype=float).ravel()

    events = None
    if event_fn is not None:
        def _event(t, y):
            return event_fn(t, y)

        _event.terminal = True
        _event.direction = -1
        events = [_event]

    times, states, flags = [], [], []
    t_eval = None if t_eval is None else np.asarray(t_eval, dtype=float)
    t_cur = t0
    while True:
        seg_eval = None
        if t_eval is not None:
            seg_eval = t_eval[(t_eval > t_cur + 1e-300) & (t_eval <= t1)]
            seg_eval = None if seg_eval.size == 0 else seg_eval
        sol = solve_ivp(
            field,
            (t_cur, t1),
            y,
            method="RK45",
            rtol=spec.rel_tol,
            atol=spec.abs_tol,
            max_step=spec.max_step,
            events=events,
            t_eval=seg_eval,
            dense_output=False,
        )
        if sol.status == -1:
            raise RuntimeError(f"ODE integration failed: {sol.message}")
        for tt, yy in zip(sol.t, sol.y.T):
            if times and tt <= times[-1]:
                continue
            times.append(float(tt))
            states.append(yy.copy())
            flags.append(None)
        if sol.status == 1:  # event
            t_e = float(sol.t_events[0][0])
            y_e = sol.y_events[0][0]
            if reflect_fn is None:
                raise RuntimeError(
                    "collision event located but no reflection callback supplied"
                )
            if not times or t_e > times[-1]:
                times.append(t_e)
                states.append(np.asarray(y_e, dtype=float))
                flags.append("collision_reflection")
            else:
                flags[-1] = "collision_reflection"
            y_new, delay = reflect_fn(t_e, np.asarray(y_e, dtype=float))
            if delay < 0:
                raise ValueError("reflection time delay must be >= 0")
            t_cur = t_e + float(delay)
            y = np.asarray(y_new, dtype=float).ravel()
            if t_cur >= t1:
                break
            if delay > 0:
                times.append(t_cur)
                states.append(y.copy())
                flags.append(None)
            continue
        break
    return Trajectory(np.array(times), np.array(states), tuple(flags))


def finite_difference_jacobian(fn, point, h):
    """Central-difference Jacobian of fn at point; entrywise error O(h^2)."""
    if h <= 0:
        raise ValueError("h must be positive")
    p = np.asarray(point, dtype=float).ravel()
    f0 = np.asarray(fn(p), dtype=float).ravel()
    m, n = f0.size, p.size
    jac = np.empty((m, n))
    for j in range(n):
        dp = np.zeros(n)
        dp[j] = h
        fp = np.asarray(fn(p + dp), dtype=float).ravel()
        fm = np.asarray(fn(p - dp), dtype=float).ravel()
        if not (np.all(np.isfinite(fp)) and np.all(np.isfinite(fm))):
            raise ValueError("map undefined at a finite-difference stencil point")
        jac[:, j] = (fp - fm) / (2.0 * h)
    return jac
