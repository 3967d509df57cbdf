"""Lamellar sheet (bilayer) form factor for dilute, uncorrelated lamellae.

    I(q) = 1e-4 * scale * 8 pi (sld - sld_solvent)^2 sin^2(q d / 2) / (d q^4)
           + background

where d is the sheet thickness.  No inter-lamellar structure factor is
included, so there are no Bragg-like stacking peaks.
"""

import numpy as np

from .base import ParameterSpec

name = "lamellar"
title = "Randomly oriented lamellae of uniform scattering length density"
category = "shape:lamellae"
description = """\
Scattering from dilute randomly oriented lamellar sheets of thickness d.
Captures the q^-2 sheet scattering decorated by the thickness form factor;
stacking correlations between lamellae are not modeled.
"""
equation = """\
I(q) = 1e-4 * scale * 8 pi (sld - sld_solvent)^2 * sin^2(q d / 2) / (d q^4)
       + background
"""
validity = """\
Dilute limit only: no stacking structure factor, so paracrystalline peaks
from ordered stacks are absent.
"""

parameters = [
    ParameterSpec("sld", "1e-6/Ang^2", 1.0, -1000.0, 1000.0,
                  "Sheet scattering length density"),
    ParameterSpec("sld_solvent", "1e-6/Ang^2", 6.0, -1000.0, 1000.0,
                  "Solvent scattering length density"),
    ParameterSpec("thickness", "Ang", 50.0, 0.1, 1e5, "Sheet thickness"),
]


def form(q: np.ndarray, sld: float, sld_solvent: float, thickness: float) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    contrast = sld - sld_solvent
    half = 0.5 * q * thickness
    return (1e-4 * 8.0 * np.pi * contrast * contrast
            * np.sin(half) ** 2 / (thickness * q ** 4))
