"""Vectorized double-double (~31 significant digits) complex arithmetic.

The confluent-hypergeometric power series on the imaginary axis cancels
catastrophically: the largest term is ~e^{|z|} while the sum is O(1), so at
|z| = 40 plain float64 has no correct digits left.  The handful of routines
here implement error-free transformations (Knuth two-sum, Dekker split
product) on numpy arrays so that the series can be summed with ~31 digits
and still vectorize.  Only what the series loop needs is provided.

A double-double is a pair (hi, lo) of float64 arrays with ``hi + lo`` the
represented value and ``|lo| <= ulp(hi)/2``.  Complex double-doubles are
4-tuples ``(re_hi, re_lo, im_hi, im_lo)``.
"""

from __future__ import annotations

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1, Dekker splitter for float64


def _two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def _quick_two_sum(a, b):
    # requires |a| >= |b|
    s = a + b
    err = b - (s - a)
    return s, err


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    lo = a - hi
    return hi, lo


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


def dd_add(xh, xl, yh, yl):
    """(xh,xl) + (yh,yl), accurate variant."""
    sh, se = _two_sum(xh, yh)
    tl, te = _two_sum(xl, yl)
    se = se + tl
    sh, se = _quick_two_sum(sh, se)
    se = se + te
    return _quick_two_sum(sh, se)


def dd_mul(xh, xl, yh, yl):
    """(xh,xl) * (yh,yl)."""
    ph, pe = _two_prod(xh, yh)
    pe = pe + (xh * yl + xl * yh)
    return _quick_two_sum(ph, pe)


def cdd(z):
    """Lift complex float64 array to a complex double-double."""
    z = np.asarray(z, dtype=complex)
    zero = np.zeros(z.shape)
    return (np.real(z).copy(), zero.copy(), np.imag(z).copy(), zero.copy())


def cdd_scalar(re_hi, re_lo, im_hi, im_lo):
    """Complex double-double scalar from explicit hi/lo parts."""
    return (float(re_hi), float(re_lo), float(im_hi), float(im_lo))


def cdd_add(x, y):
    rh, rl = dd_add(x[0], x[1], y[0], y[1])
    ih, il = dd_add(x[2], x[3], y[2], y[3])
    return (rh, rl, ih, il)


def cdd_mul(x, y):
    # (a+bi)(c+di) = (ac - bd) + (ad + bc)i
    ac_h, ac_l = dd_mul(x[0], x[1], y[0], y[1])
    bd_h, bd_l = dd_mul(x[2], x[3], y[2], y[3])
    ad_h, ad_l = dd_mul(x[0], x[1], y[2], y[3])
    bc_h, bc_l = dd_mul(x[2], x[3], y[0], y[1])
    rh, rl = dd_add(ac_h, ac_l, -bd_h, -bd_l)
    ih, il = dd_add(ad_h, ad_l, bc_h, bc_l)
    return (rh, rl, ih, il)


def cdd_to_complex(x):
    return (x[0] + x[1]) + 1j * (x[2] + x[3])


def cdd_abs2_hi(x):
    """float64 estimate of |x|^2 (for convergence checks only)."""
    return x[0] * x[0] + x[2] * x[2]
