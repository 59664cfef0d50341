"""Special-function kernels: Laguerre polynomials, Hermite functions,
dilated Gaussians, and the closed-form fractional Fourier transform of a
dilated Gaussian.

Conventions
-----------
The dilated Gaussian is ``phi_a(t) = a**(1/4) * exp(-a*pi*t**2)`` with
``||phi_a||_2 = 2**(-1/4)``.  Hermite functions use the exp(-pi t^2)
weight and are L2-normalized, ``h_0(t) = 2**(1/4) * exp(-pi*t**2)``;
higher degrees carry the conventional positive leading coefficient.
"""
from __future__ import annotations

import numpy as np

from .exceptions import OverflowGuardError
from .grid import Grid

_SIN_EPS = 1e-8  # below this |sin(alpha)| the FrFT falls back to alpha in pi*Z


def laguerre_eval(n: int, z):
    """Laguerre polynomial L_n(z) by the three-term recurrence.

    Stable for n <= 200, |z| <= 1e3.  Accepts scalars or arrays.
    """
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    z = np.asarray(z, dtype=float)
    prev = np.ones_like(z)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 - z
    for k in range(1, n):
        cur, prev = ((2 * k + 1 - z) * cur - k * prev) / (k + 1), cur
    return cur if cur.ndim else float(cur)


def laguerre_function(n: int, z):
    """Laguerre function exp(-z/2) * L_n(z).

    Runs the recurrence on the pre-damped values so intermediates stay
    bounded by 1 for z >= 0; safe for the large lattice arguments that
    would overflow the bare polynomial.
    """
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    z = np.asarray(z, dtype=float)
    prev = np.exp(-z / 2.0)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = (1.0 - z) * prev
    for k in range(1, n):
        cur, prev = ((2 * k + 1 - z) * cur - k * prev) / (k + 1), cur
    return cur if cur.ndim else float(cur)


def hermite_values(n: int, t) -> np.ndarray:
    """L2-normalized Hermite function of degree n at arbitrary points.

    Uses the normalized three-term recurrence in the scaled variable
    u = sqrt(2*pi)*t; never differentiates the Gaussian numerically.
    """
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    t = np.asarray(t, dtype=float)
    u = np.sqrt(2.0 * np.pi) * t
    scale = (2.0 * np.pi) ** 0.25
    prev = np.pi ** -0.25 * np.exp(-u * u / 2.0)
    if n == 0:
        out = scale * prev
    else:
        cur = np.sqrt(2.0) * u * prev
        for k in range(1, n):
            cur, prev = np.sqrt(2.0 / (k + 1)) * u * cur - np.sqrt(k / (k + 1.0)) * prev, cur
        out = scale * cur
    if not np.all(np.isfinite(out)):
        raise OverflowGuardError(
            f"Hermite recurrence overflowed for n={n}; grid extent too large for this degree"
        )
    return out


def hermite_samples(n: int, grid: Grid) -> np.ndarray:
    """Samples of h_n on the grid's time lattice."""
    return hermite_values(n, grid.t)


def dilated_gauss_values(a: float, t) -> np.ndarray:
    if a <= 0:
        raise ValueError(f"dilation must be positive, got {a}")
    t = np.asarray(t, dtype=float)
    return a ** 0.25 * np.exp(-a * np.pi * t * t)


def dilated_gauss_samples(a: float, grid: Grid) -> np.ndarray:
    """Samples of phi_a(t) = a^{1/4} exp(-a pi t^2) on the time lattice."""
    return dilated_gauss_values(a, grid.t)


def frft_gauss_coeffs(a: float, alpha: float) -> tuple[complex, complex]:
    """Closed-form coefficients (C, w) with F_alpha phi_a (u) = C * exp(-pi*w*u^2).

    Derived by completing the square in the FrFT integral of the dilated
    Gaussian; c_alpha is the square root of 1 - i*cot(alpha) with positive
    real part (the principal branch, since the real part of the radicand
    is 1).  Re(w) > 0 for every a > 0 and every angle.
    """
    if a <= 0:
        raise ValueError(f"dilation must be positive, got {a}")
    s = np.sin(alpha)
    c = np.cos(alpha)
    if abs(s) < _SIN_EPS:
        # alpha in pi*Z: identity or reflection, and phi_a is even either way
        return complex(a ** 0.25), complex(a)
    cot = c / s
    c_alpha = np.sqrt(complex(1.0, -cot))
    beta = complex(a, -cot)  # Gaussian integral parameter, Re(beta) = a > 0
    w = complex(s, -a * c) / complex(a * s, -c)
    C = c_alpha * a ** 0.25 / np.sqrt(beta)
    return complex(C), complex(w)


def frft_gauss_values(a: float, alpha: float, u) -> np.ndarray:
    """F_alpha phi_a evaluated at arbitrary points (a chirped Gaussian)."""
    C, w = frft_gauss_coeffs(a, alpha)
    u = np.asarray(u, dtype=float)
    return C * np.exp(-np.pi * w * u * u)


def frft_gauss_samples(a: float, alpha: float, grid: Grid) -> np.ndarray:
    """Samples of the fractional Fourier transform of phi_a on the time lattice."""
    return frft_gauss_values(a, alpha, grid.t).astype(np.complex128)
