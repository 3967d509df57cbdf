"""Numeric kernels shared by the form-factor models.

Small-argument branches use Taylor series to avoid the cancellation in
sin(x) - x*cos(x) and sin(x)/x; the switch points are fixed so results are
continuous to well below 1e-9 relative.  The cylindrical Bessel function J1
uses the Abramowitz & Stegun rational approximations (absolute error below
about 1e-7), so no special-function library is needed at runtime.
"""

from __future__ import annotations

import numpy as np

SPHERE_SERIES_CUTOFF = 1e-2
SINC_SERIES_CUTOFF = 1e-4
J1C_SERIES_CUTOFF = 1e-2


def sphere_kernel(x: np.ndarray) -> np.ndarray:
    """K(x) = 3*(sin x - x*cos x)/x^3, the uniform-sphere amplitude."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = np.abs(x) < SPHERE_SERIES_CUTOFF
    xs = x[small]
    x2 = xs * xs
    out[small] = 1.0 - x2 / 10.0 + x2 * x2 / 280.0
    xl = x[~small]
    out[~small] = 3.0 * (np.sin(xl) - xl * np.cos(xl)) / (xl ** 3)
    return out


def sinc(y: np.ndarray) -> np.ndarray:
    """sin(y)/y with a series branch below the cutoff."""
    y = np.asarray(y, dtype=float)
    out = np.empty_like(y)
    small = np.abs(y) < SINC_SERIES_CUTOFF
    ys = y[small]
    out[small] = 1.0 - ys * ys / 6.0
    yl = y[~small]
    out[~small] = np.sin(yl) / yl
    return out


def bessel_j1(x: np.ndarray) -> np.ndarray:
    """Cylindrical Bessel function J1 via the A&S rational approximations."""
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    out = np.empty_like(x)

    small = ax < 8.0
    xs = x[small]
    y = xs * xs
    num = xs * (72362614232.0 + y * (-7895059235.0 + y * (242396853.1
          + y * (-2972611.439 + y * (15704.48260 + y * (-30.16036606))))))
    den = 144725228442.0 + y * (2300535178.0 + y * (18583304.74
          + y * (99447.43394 + y * (376.9991397 + y))))
    out[small] = num / den

    xl = ax[~small]
    z = 8.0 / xl
    y = z * z
    p1 = (1.0 + y * (0.183105e-2 + y * (-0.3516396496e-4
          + y * (0.2457520174e-5 + y * (-0.240337019e-6)))))
    q1 = (0.04687499995 + y * (-0.2002690873e-3 + y * (0.8449199096e-5
          + y * (-0.88228987e-6 + y * 0.105787412e-6))))
    phase = xl - 2.356194491
    val = np.sqrt(0.636619772 / xl) * (np.cos(phase) * p1 - z * np.sin(phase) * q1)
    out[~small] = val * np.sign(x[~small])
    return out


def j1c(z: np.ndarray) -> np.ndarray:
    """2*J1(z)/z, the cylinder cross-section amplitude; series at small z."""
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    small = np.abs(z) < J1C_SERIES_CUTOFF
    zs = z[small]
    z2 = zs * zs
    out[small] = 1.0 - z2 / 8.0 + z2 * z2 / 192.0
    zl = z[~small]
    out[~small] = 2.0 * bessel_j1(zl) / zl
    return out


def gauss_unit(order: int = 76) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights transformed to the interval [0, 1]."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return 0.5 * (nodes + 1.0), 0.5 * weights


GAUSS76_NODES, GAUSS76_WEIGHTS = gauss_unit(76)
