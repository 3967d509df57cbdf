"""Ellipsoid of revolution form factor, orientationally averaged.

    r(u) = sqrt(Re^2 (1 - u^2) + Rp^2 u^2)
    I(q) = 1e-4 * scale * V * (sld - sld_solvent)^2
           * int_0^1 K(q r(u))^2 du + background

with K the uniform-sphere amplitude, u the cosine of the angle between the
polar axis and q, and V = (4/3) pi Rp Re^2.
"""

import numpy as np

from .base import ParameterSpec
from .kernels import GAUSS76_NODES, GAUSS76_WEIGHTS, gauss_unit, sphere_kernel

name = "ellipsoid"
title = "Ellipsoid of revolution with uniform scattering length density"
category = "shape:ellipsoid"
description = """\
Scattering from randomly oriented ellipsoids of revolution with polar radius
Rp along the symmetry axis and equatorial radius Re.  Rp = Re recovers the
sphere; Rp > Re is prolate, Rp < Re oblate.
"""
equation = """\
I(q) = 1e-4 * scale * V * (sld - sld_solvent)^2
       * integral_0^1 [3 (sin x - x cos x)/x^3]^2 du + background
x = q * sqrt(Re^2 (1-u^2) + Rp^2 u^2),  V = (4/3) pi Rp Re^2
"""
validity = """\
Accurate while the quadrature resolves the kernel oscillations
(q * max(Rp, Re) up to a few tens); dilute and monodisperse assumed.
"""

parameters = [
    ParameterSpec("sld", "1e-6/Ang^2", 4.0, -1000.0, 1000.0,
                  "Ellipsoid scattering length density"),
    ParameterSpec("sld_solvent", "1e-6/Ang^2", 1.0, -1000.0, 1000.0,
                  "Solvent scattering length density"),
    ParameterSpec("radius_polar", "Ang", 20.0, 0.1, 1e5,
                  "Radius along the rotation axis"),
    ParameterSpec("radius_equatorial", "Ang", 400.0, 0.1, 1e5,
                  "Radius perpendicular to the rotation axis"),
]


def orientation_average(q: np.ndarray, radius_polar: float,
                        radius_equatorial: float, order: int = 76) -> np.ndarray:
    """int_0^1 K(q r(u))^2 du evaluated by Gauss-Legendre quadrature."""
    if order == 76:
        nodes, weights = GAUSS76_NODES, GAUSS76_WEIGHTS
    else:
        nodes, weights = gauss_unit(order)
    q = np.asarray(q, dtype=float)[:, None]
    u = nodes[None, :]
    r_eff = np.sqrt(radius_equatorial ** 2 * (1.0 - u * u)
                    + radius_polar ** 2 * u * u)
    amp = sphere_kernel(q * r_eff)
    return (amp * amp) @ weights


def form(q: np.ndarray, sld: float, sld_solvent: float,
         radius_polar: float, radius_equatorial: float) -> np.ndarray:
    volume = (4.0 / 3.0) * np.pi * radius_polar * radius_equatorial ** 2
    contrast = sld - sld_solvent
    return (1e-4 * volume * contrast * contrast
            * orientation_average(q, radius_polar, radius_equatorial))
