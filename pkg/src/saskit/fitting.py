"""Bounded Levenberg-Marquardt fitting of a registry model to a dataset.

Free parameters are mapped to an unbounded internal coordinate through a
sigmoid, x = lo + (hi - lo) / (1 + exp(-t)), which keeps the optimizer smooth
at the bounds and guarantees every returned value lies strictly inside them.
The damping factor starts at 1e-3, multiplies by 10 on a rejected step and
divides by 10 on an accepted one; steps are only ever accepted when they
lower chi-square, so the final chi-square never exceeds the initial one.

Residuals are normalized per point: r_i = (I_model(q_i) - I_i) / sigma_i with
sigma_i = dI_i when the dataset carries error bars, otherwise
sigma_i = max(eps_abs, f_rel * |I_i|).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import models
from .dataio import Dataset
from .errors import SaskitError

logger = logging.getLogger(__name__)


class FitProblemError(SaskitError):
    pass


class DegreesOfFreedomExhausted(SaskitError):
    pass


class SingularJacobian(SaskitError):
    def __init__(self, names: list[str]):
        super().__init__(
            "Jacobian has all-zero columns for: " + ", ".join(names)
            + " (parameter has no effect on the model at this point)")
        self.names = names


class EvaluationFailure(SaskitError):
    pass


@dataclass
class FitParameter:
    name: str
    value: float
    lower: float
    upper: float
    fixed: bool = False

    def __post_init__(self):
        if not self.fixed:
            if not self.lower < self.upper:
                raise FitProblemError(
                    f"{self.name}: need lower < upper for a free parameter")
            if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
                raise FitProblemError(
                    f"{self.name}: free parameters need finite bounds")
        if not self.lower <= self.value <= self.upper:
            raise FitProblemError(
                f"{self.name}: value {self.value:g} outside "
                f"[{self.lower:g}, {self.upper:g}]")


@dataclass
class FitOptions:
    max_iter: int = 200
    ftol: float = 1e-10
    xtol: float = 1e-10
    eps_abs: float = 1e-6      # absolute sigma floor, 1/cm
    f_rel: float = 0.01        # relative sigma fallback
    restarts: int = 0
    restart_seed: int = 0


@dataclass
class FitProblem:
    model: str
    dataset: Dataset
    parameters: list[FitParameter]
    registry: models.Registry = field(default_factory=lambda: models._DEFAULT)

    def __post_init__(self):
        info = self.registry.get(self.model)
        spec_names = [p.name for p in info.parameters]
        got_names = [p.name for p in self.parameters]
        if sorted(spec_names) != sorted(got_names):
            missing = set(spec_names) - set(got_names)
            extra = set(got_names) - set(spec_names)
            raise FitProblemError(
                f"parameters do not match model {self.model!r}"
                + (f"; missing {sorted(missing)}" if missing else "")
                + (f"; unknown {sorted(extra)}" if extra else ""))
        if not self.free_parameters():
            raise FitProblemError("no free parameter")
        n, p = len(self.dataset), len(self.free_parameters())
        if n <= p:
            raise DegreesOfFreedomExhausted(f"{n} points for {p} free parameters")

    def free_parameters(self) -> list[FitParameter]:
        return [p for p in self.parameters if not p.fixed]

    def fixed_values(self) -> dict[str, float]:
        return {p.name: p.value for p in self.parameters if p.fixed}

    def initial_values(self) -> dict[str, float]:
        return {p.name: p.value for p in self.parameters}


@dataclass
class FitResult:
    values: dict[str, float]            # every parameter, fitted or fixed
    uncertainties: dict[str, float]     # free parameters only, 1-sigma
    chi2_reduced: float
    residuals: np.ndarray
    iterations: int
    converged: bool
    fixed: dict[str, float]

    def to_dict(self) -> dict:
        return {
            "values": self.values,
            "uncertainties": self.uncertainties,
            "chi2_reduced": self.chi2_reduced,
            "residuals": [float(r) for r in self.residuals],
            "iterations": self.iterations,
            "converged": self.converged,
            "fixed": self.fixed,
        }


def build_problem(model: str, dataset: Dataset,
                  fixed: dict[str, float] | None = None,
                  initial: dict[str, float] | None = None,
                  bounds: dict[str, tuple[float, float]] | None = None,
                  registry: models.Registry | None = None) -> FitProblem:
    """Assemble a FitProblem: named parameters fixed, the rest free.

    Free parameters start at ``initial`` (falling back to the model default)
    within ``bounds`` (falling back to the model's parameter bounds).
    """
    registry = registry if registry is not None else models._DEFAULT
    fixed = fixed or {}
    initial = initial or {}
    bounds = bounds or {}
    info = registry.get(model)
    known = {p.name for p in info.parameters}
    for key in (*fixed, *initial, *bounds):
        if key not in known:
            raise models.UnknownParameter(model, key)
    params = []
    for spec in info.parameters:
        if spec.name in fixed:
            value = float(fixed[spec.name])
            lo = min(spec.lower, value)
            hi = max(spec.upper, value)
            params.append(FitParameter(spec.name, value, lo, hi, fixed=True))
        else:
            lo, hi = bounds.get(spec.name, (spec.lower, spec.upper))
            value = float(initial.get(spec.name, spec.default))
            params.append(FitParameter(spec.name, value, float(lo), float(hi)))
    return FitProblem(model=model, dataset=dataset, parameters=params,
                      registry=registry)


def sigma_vector(dataset: Dataset, options: FitOptions | None = None) -> np.ndarray:
    options = options or FitOptions()
    if dataset.d_intensity is not None:
        return dataset.d_intensity
    return np.maximum(options.eps_abs, options.f_rel * np.abs(dataset.intensity))


def residuals(problem: FitProblem, trial: dict[str, float],
              options: FitOptions | None = None) -> np.ndarray:
    """Normalized residuals (model - data)/sigma at the trial parameter values."""
    sigma = sigma_vector(problem.dataset, options)
    model_i = problem.registry.evaluate(problem.model, trial, problem.dataset.q)
    return (model_i - problem.dataset.intensity) / sigma


def chi2_reduced(residual_values: np.ndarray, n_free: int) -> float:
    n = len(residual_values)
    if n <= n_free:
        raise DegreesOfFreedomExhausted(f"{n} residuals for {n_free} free parameters")
    return float(np.sum(np.asarray(residual_values) ** 2) / (n - n_free))


# --- bounded <-> unbounded reparameterization ---

_FRACTION_CLIP = 1e-12
# largest per-component move in the unbounded coordinate per iteration; a
# single unclamped step can otherwise drive the sigmoid so deep into
# saturation that finite differences underflow to exactly zero
_MAX_INTERNAL_STEP = 12.0


def _sigmoid(t: np.ndarray) -> np.ndarray:
    out = np.empty_like(t)
    pos = t >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-t[pos]))
    e = np.exp(t[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def to_internal(value: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    fraction = np.clip((np.asarray(value, dtype=float) - lo) / (hi - lo),
                       _FRACTION_CLIP, 1.0 - _FRACTION_CLIP)
    return np.log(fraction / (1.0 - fraction))

def from_internal(t: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    return lo + (hi - lo) * _sigmoid(np.asarray(t, dtype=float))


def internal_derivative(t: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    s = _sigmoid(np.asarray(t, dtype=float))
    return (hi - lo) * s * (1.0 - s)


def finite_difference_jacobian(fn, t: np.ndarray,
                               r0: np.ndarray | None = None) -> np.ndarray:
    """Forward-difference Jacobian with per-component step 1e-6*max(|t_j|, 1)."""
    r0 = fn(t) if r0 is None else r0
    jacobian = np.empty((len(r0), len(t)))
    for j in range(len(t)):
        step = 1e-6 * max(abs(t[j]), 1.0)
        probe = t.copy()
        probe[j] += step
        jacobian[:, j] = (fn(probe) - r0) / step
    return jacobian


def fit_lm(problem: FitProblem, options: FitOptions | None = None) -> FitResult:
    """Levenberg-Marquardt on the sigmoid-transformed free parameters."""
    options = options or FitOptions()
    result = _fit_single(problem, options)
    if options.restarts > 0:
        best = result
        rng = np.random.default_rng(options.restart_seed)
        free = problem.free_parameters()
        for _ in range(options.restarts):
            jitter = rng.standard_normal(len(free))
            jittered_params = []
            k = 0
            for p in problem.parameters:
                if p.fixed:
                    jittered_params.append(p)
                else:
                    t0 = to_internal(np.array([p.value]),
                                     np.array([p.lower]), np.array([p.upper]))
                    x = from_internal(t0 + jitter[k], np.array([p.lower]),
                                      np.array([p.upper]))[0]
                    jittered_params.append(replace(p, value=float(x)))
                    k += 1
            candidate = _fit_single(
                FitProblem(problem.model, problem.dataset, jittered_params,
                           problem.registry),
                options)
            if candidate.chi2_reduced < best.chi2_reduced:
                best = candidate
        return best
    return result


def _fit_single(problem: FitProblem, options: FitOptions) -> FitResult:
    free = problem.free_parameters()
    names = [p.name for p in free]
    lo = np.array([p.lower for p in free])
    hi = np.array([p.upper for p in free])
    fixed_values = problem.fixed_values()
    sigma = sigma_vector(problem.dataset, options)
    data_i = problem.dataset.intensity
    q = problem.dataset.q

    def residual_of(t: np.ndarray) -> np.ndarray:
        values = dict(fixed_values)
        values.update(zip(names, from_internal(t, lo, hi)))
        model_i = problem.registry.evaluate(problem.model, values, q)
        return (model_i - data_i) / sigma

    t = to_internal(np.array([p.value for p in free]), lo, hi)
    try:
        r = residual_of(t)
    except SaskitError as exc:
        raise EvaluationFailure(f"model evaluation failed at start: {exc}") from exc
    chi2 = float(r @ r)

    lam = 1e-3
    converged = False
    iterations = 0
    for iterations in range(1, options.max_iter + 1):
        jacobian = finite_difference_jacobian(residual_of, t, r)
        if iterations == 1:
            dead = [names[j] for j in range(len(names))
                    if not np.any(jacobian[:, j])]
            if dead:
                raise SingularJacobian(dead)
        hessian = jacobian.T @ jacobian
        gradient = jacobian.T @ r
        diag = np.diag(np.maximum(np.diag(hessian), 1e-30))

        accepted = False
        while True:
            try:
                step = np.linalg.solve(hessian + lam * diag, -gradient)
            except np.linalg.LinAlgError:
                step = None
            if step is not None:
                # keep single moves out of sigmoid saturation
                step = np.clip(step, -_MAX_INTERNAL_STEP, _MAX_INTERNAL_STEP)
            if step is not None and float(np.linalg.norm(step)) < options.xtol:
                converged = True
                break
            if step is not None:
                try:
                    r_try = residual_of(t + step)
                except SaskitError:
                    r_try = None
                if r_try is not None and np.all(np.isfinite(r_try)):
                    chi2_try = float(r_try @ r_try)
                    if chi2_try < chi2:
                        t = t + step
                        drop = chi2 - chi2_try
                        r, chi2 = r_try, chi2_try
                        lam = max(lam / 10.0, 1e-12)
                        accepted = True
                        if drop <= options.ftol * max(chi2 + drop, 1e-300):
                            converged = True
                        break
            lam *= 10.0
            if lam > 1e15:
                break
        if converged or not accepted:
            break

    jacobian = finite_difference_jacobian(residual_of, t, r)
    n_free = len(free)
    chi2_red = chi2_reduced(r, n_free)
    covariance = None
    try:
        covariance = np.linalg.inv(jacobian.T @ jacobian)
    except np.linalg.LinAlgError:
        covariance = np.linalg.pinv(jacobian.T @ jacobian)
    var_t = np.maximum(np.diag(covariance), 0.0) * chi2_red
    sigma_x = np.sqrt(var_t) * np.abs(internal_derivative(t, lo, hi))

    final_free = from_internal(t, lo, hi)
    values = dict(fixed_values)
    values.update(zip(names, (float(v) for v in final_free)))
    # report in the model's declared parameter order
    info = problem.registry.get(problem.model)
    ordered = {spec.name: values[spec.name] for spec in info.parameters}

    logger.info("fit %s: converged=%s iterations=%d chi2_reduced=%.6g",
                problem.model, converged, iterations, chi2_red)
    return FitResult(
        values=ordered,
        uncertainties=dict(zip(names, (float(s) for s in sigma_x))),
        chi2_reduced=chi2_red,
        residuals=r,
        iterations=iterations,
        converged=converged,
        fixed=dict(fixed_values),
    )


def fit_report(problem: FitProblem, result: FitResult) -> str:
    """Human-readable fit summary: model, free/fixed values, quality."""
    info = problem.registry.get(problem.model)
    free_names = [p.name for p in problem.free_parameters()]
    lines = [
        f"Model: {problem.model}",
        f"Points: {len(problem.dataset)}   Free parameters: {len(free_names)}",
        "Converged: " + ("yes" if result.converged else
                         "NO (iteration limit or stalled)")
        + f" after {result.iterations} iterations",
        f"Reduced chi-square: {result.chi2_reduced:.6g}",
        "Free parameters:",
    ]
    for name in free_names:
        spec = info.parameter(name)
        units = f" {spec.units}" if spec.units else ""
        lines.append(f"  {name} = {result.values[name]:.6g}"
                     f" +/- {result.uncertainties[name]:.3g}{units}")
    if result.fixed:
        lines.append("Fixed parameters:")
        for name, value in result.fixed.items():
            spec = info.parameter(name)
            units = f" {spec.units}" if spec.units else ""
            lines.append(f"  {name} = {value:.6g}{units}")
    return "\n".join(lines)
