"""Right circular cylinder form factor, orientationally averaged.

    A(q, u) = sinc(q L u / 2) * 2 J1(q R s) / (q R s),   s = sqrt(1 - u^2)
    I(q) = 1e-4 * scale * V * (sld - sld_solvent)^2 * int_0^1 A^2 du + background

with u = cos(alpha) the orientation cosine and V = pi R^2 L.  The average
uses fixed 76-point Gauss-Legendre quadrature.
"""

import numpy as np

from .base import ParameterSpec
from .kernels import GAUSS76_NODES, GAUSS76_WEIGHTS, gauss_unit, j1c, sinc

name = "cylinder"
title = "Right circular cylinder with uniform scattering length density"
category = "shape:cylinder"
description = """\
Scattering from randomly oriented rigid cylinders of radius R and length L.
The orientational average over the angle between the cylinder axis and q is
computed by fixed-order Gaussian quadrature.
"""
equation = """\
I(q) = 1e-4 * scale * V * (sld - sld_solvent)^2 * integral_0^1 A(q,u)^2 du
       + background
A(q,u) = [sin(q L u / 2) / (q L u / 2)] * [2 J1(q R s) / (q R s)],
s = sqrt(1 - u^2),  V = pi R^2 L
"""
validity = """\
Accurate while the quadrature resolves the kernel oscillations (phase
arguments q*R and q*L/2 up to a few tens); dilute and monodisperse assumed.
"""

parameters = [
    ParameterSpec("sld", "1e-6/Ang^2", 4.0, -1000.0, 1000.0,
                  "Cylinder scattering length density"),
    ParameterSpec("sld_solvent", "1e-6/Ang^2", 1.0, -1000.0, 1000.0,
                  "Solvent scattering length density"),
    ParameterSpec("radius", "Ang", 20.0, 0.1, 1e5, "Cylinder radius"),
    ParameterSpec("length", "Ang", 400.0, 0.1, 1e6, "Cylinder length"),
]


def orientation_average(q: np.ndarray, radius: float, length: float,
                        order: int = 76) -> np.ndarray:
    """int_0^1 A(q,u)^2 du evaluated by Gauss-Legendre quadrature."""
    if order == 76:
        nodes, weights = GAUSS76_NODES, GAUSS76_WEIGHTS
    else:
        nodes, weights = gauss_unit(order)
    q = np.asarray(q, dtype=float)[:, None]
    u = nodes[None, :]
    s = np.sqrt(np.clip(1.0 - u * u, 0.0, 1.0))
    amp = sinc(0.5 * q * length * u) * j1c(q * radius * s)
    return (amp * amp) @ weights


def form(q: np.ndarray, sld: float, sld_solvent: float,
         radius: float, length: float) -> np.ndarray:
    volume = np.pi * radius ** 2 * length
    contrast = sld - sld_solvent
    return 1e-4 * volume * contrast * contrast * orientation_average(q, radius, length)
