"""Shared types for the form-factor model registry."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..errors import SaskitError


class UnknownModel(SaskitError):
    def __init__(self, name: str):
        super().__init__(f"unknown model {name!r}")
        self.name = name


class UnknownParameter(SaskitError):
    def __init__(self, model: str, name: str):
        super().__init__(f"model {model!r} has no parameter {name!r}")
        self.name = name


class ParameterOutOfBounds(SaskitError):
    def __init__(self, name: str, value: float, lower: float, upper: float):
        super().__init__(
            f"parameter {name!r} = {value:g} outside bounds [{lower:g}, {upper:g}]")
        self.name = name


class InvalidRange(SaskitError):
    pass


@dataclass(frozen=True)
class ParameterSpec:
    name: str
    units: str
    default: float
    lower: float
    upper: float
    description: str

    def __post_init__(self):
        if not self.lower <= self.default <= self.upper:
            raise SaskitError(
                f"parameter {self.name!r}: default {self.default} outside bounds")


# every model carries these two, prepended by the registry
COMMON_PARAMETERS = (
    ParameterSpec("scale", "", 1.0, 0.0, 1000.0, "Overall intensity scale factor"),
    ParameterSpec("background", "1/cm", 0.001, 0.0, 1000.0, "Flat incoherent background"),
)


@dataclass(frozen=True)
class ModelInfo:
    name: str
    category: str
    parameters: tuple[ParameterSpec, ...]
    title: str
    description: str
    equation: str
    validity: str

    def __post_init__(self):
        names = [p.name for p in self.parameters]
        if len(names) != len(set(names)):
            raise SaskitError(f"model {self.name!r}: duplicate parameter names")
        if "scale" not in names or "background" not in names:
            raise SaskitError(f"model {self.name!r}: scale/background missing")

    def parameter(self, name: str) -> ParameterSpec:
        for p in self.parameters:
            if p.name == name:
                return p
        raise UnknownParameter(self.name, name)

    def defaults(self) -> dict[str, float]:
        return {p.name: p.default for p in self.parameters}

    def doc_text(self) -> str:
        return model_doc(self)


# q-independent form callable: form(q_array, **shape_params) -> intensity array
FormFunction = Callable[..., np.ndarray]


@dataclass(frozen=True)
class QGrid:
    """Strictly ascending positive scattering-vector values, 1/A."""

    points: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "points", np.asarray(self.points, dtype=float))
        if self.points.size == 0:
            raise InvalidRange("q grid is empty")
        if not np.all(self.points > 0):
            raise InvalidRange("q values must be positive")
        if not np.all(np.diff(self.points) > 0):
            raise InvalidRange("q values must be strictly ascending")

    def __len__(self) -> int:
        return int(self.points.size)


def model_doc(info: ModelInfo) -> str:
    """Structured plain-text documentation for one model.

    Emitted as one document per model (title, description, parameter table,
    equation, validity notes) and consumed by the documentation index.
    """
    width = max(len(p.name) for p in info.parameters)
    rows = [
        f"  {p.name.ljust(width)}  {p.default:<10g} {p.units or '-':<12} {p.description}"
        for p in info.parameters
    ]
    header = f"  {'name'.ljust(width)}  {'default':<10} {'units':<12} description"
    return "\n".join([
        info.title,
        "=" * len(info.title),
        "",
        info.description.strip(),
        "",
        "Parameters",
        "----------",
        header,
        *rows,
        "",
        "Equation",
        "--------",
        info.equation.strip(),
        "",
        "Validity",
        "--------",
        info.validity.strip(),
        "",
    ])
