"""Uniform sphere form factor.

    I(q) = 1e-4 * scale * V * (sld - sld_solvent)^2 * K(q*r)^2 + background
    K(x) = 3 * (sin x - x cos x) / x^3,   V = (4/3) pi r^3

SLDs are in 1e-6/Ang^2 numeric units and V in Ang^3; the 1e-4 prefactor
converts the resulting 1e-12/Ang to 1/cm.
"""

import numpy as np

from .base import ParameterSpec
from .kernels import sphere_kernel

name = "sphere"
title = "Spheres with uniform scattering length density"
category = "shape:sphere"
description = """\
Scattering from monodisperse homogeneous spheres of radius r in a solvent.
The scale factor corresponds to the particle volume fraction when the data
are on absolute scale and the contrast is correct.
"""
equation = """\
I(q) = 1e-4 * scale * V * (sld - sld_solvent)^2
       * [3 (sin(qr) - qr cos(qr)) / (qr)^3]^2 + background
V = (4/3) pi r^3
"""
validity = """\
Valid for dilute, randomly oriented, monodisperse spheres; no structure
factor or polydispersity is included.
"""

parameters = [
    ParameterSpec("sld", "1e-6/Ang^2", 1.0, -1000.0, 1000.0,
                  "Sphere scattering length density"),
    ParameterSpec("sld_solvent", "1e-6/Ang^2", 6.3, -1000.0, 1000.0,
                  "Solvent scattering length density"),
    ParameterSpec("radius", "Ang", 50.0, 0.1, 1e5, "Sphere radius"),
]


def form(q: np.ndarray, sld: float, sld_solvent: float, radius: float) -> np.ndarray:
    volume = (4.0 / 3.0) * np.pi * radius ** 3
    contrast = sld - sld_solvent
    amplitude = sphere_kernel(q * radius)
    return 1e-4 * volume * contrast * contrast * amplitude * amplitude
