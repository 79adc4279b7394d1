"""Dirichlet-Laplacian realization on an interval.

With A the Dirichlet Laplacian on (0, L), the eigenpairs are analytic,

    lambda_n = (n pi / L)^2,     phi_n(x) = sqrt(2/L) sin(n pi x / L),

so every mode reduces to the scalar problem with rho = -lambda_n and the
solution field is the truncated eigenfunction sum.  For this diagonal
self-adjoint family the operator norm is the supremum of the mode values,
so the norm curve is exact up to truncation, which is detected (argmax
resting on the last retained mode) rather than estimated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, MemdiffError, ModeError, TruncationError
from .resolvent import Curve, CurveMethod, series_S, series_curve
from .special import DEFAULT_SERIES_CONTROL, SeriesControl
from .symbols import KernelParams, ScalarProblem
from .volterra import VolterraConfig, solve_volterra

__all__ = [
    "SpectralModel",
    "eigen_pairs",
    "mode_curve",
    "field",
    "operator_norm_curve",
]


@dataclass(frozen=True)
class SpectralModel:
    """Interval length, retained mode count, and initial-datum coefficients
    <u0, phi_n> for n = 1..n_modes."""

    length: float
    n_modes: int
    u0_coeffs: tuple[float, ...]

    def __post_init__(self) -> None:
        if not (math.isfinite(self.length) and self.length > 0.0):
            raise DomainError(f"length must be > 0, got {self.length}")
        if self.n_modes < 1:
            raise DomainError(f"n_modes must be >= 1, got {self.n_modes}")
        coeffs = tuple(float(c) for c in self.u0_coeffs)
        if len(coeffs) != self.n_modes:
            raise DomainError(
                f"expected {self.n_modes} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "u0_coeffs", coeffs)

    def eigenvalue(self, n: int) -> float:
        if not (1 <= n <= self.n_modes):
            raise DomainError(f"mode index must lie in 1..{self.n_modes}, got {n}")
        return (n * math.pi / self.length) ** 2


def eigen_pairs(model: SpectralModel) -> list[tuple[float, Callable]]:
    """[(lambda_n, phi_n)] with phi_n L2-normalized on (0, length)."""
    L = model.length
    norm = math.sqrt(2.0 / L)

    def make_phi(n: int) -> Callable:
        def phi(x, _n=n):
            return norm * np.sin(_n * math.pi * np.asarray(x, dtype=float) / L)
        return phi

    return [(model.eigenvalue(n), make_phi(n)) for n in range(1, model.n_modes + 1)]


def mode_curve(model: SpectralModel, params: KernelParams, n: int, times,
               method: str | CurveMethod = CurveMethod.SERIES,
               ctl: SeriesControl = DEFAULT_SERIES_CONTROL) -> Curve:
    """Resolvent curve of mode n: exactly the scalar route at rho = -lambda_n.

    For the Volterra route the grid must be uniform (it becomes the
    stepping grid).  Failures carry the offending mode index.
    """
    prob = ScalarProblem(params, -model.eigenvalue(n))
    method = CurveMethod(method)
    try:
        if method is CurveMethod.SERIES:
            return series_curve(prob, times, ctl)
        if method is CurveMethod.VOLTERRA:
            grid = np.asarray(times, dtype=float)
            steps = np.diff(grid)
            if grid.size < 2 or grid[0] != 0.0 or not np.allclose(
                    steps, steps[0], rtol=1e-12, atol=0.0):
                raise DomainError(
                    "the Volterra route needs a uniform grid starting at 0")
            return solve_volterra(prob, VolterraConfig(float(steps[0]), grid.size - 1))
        raise DomainError(f"unsupported mode-curve method {method!r}")
    except ModeError:
        raise
    except MemdiffError as exc:
        raise ModeError(f"mode {n}: {exc}", mode_index=n) from exc


def field(model: SpectralModel, params: KernelParams, t: float, x_grid,
          ctl: SeriesControl = DEFAULT_SERIES_CONTROL) -> np.ndarray:
    """u(t, x) = sum_n S_n(t) <u0, phi_n> phi_n(x) over the retained modes."""
    x = np.asarray(x_grid, dtype=float)
    if np.any(x < 0.0) or np.any(x > model.length):
        raise DomainError("x_grid must lie inside [0, length]")
    out = np.zeros_like(x)
    for (lam_n, phi), coeff, n in zip(
            eigen_pairs(model), model.u0_coeffs, range(1, model.n_modes + 1)):
        if coeff == 0.0:
            continue
        try:
            s_n = series_S(ScalarProblem(params, -lam_n), t, ctl)
        except MemdiffError as exc:
            raise ModeError(f"mode {n}: {exc}", mode_index=n) from exc
        out += s_n * coeff * phi(x)
    return out


def operator_norm_curve(model: SpectralModel, params: KernelParams, times,
                        method: str | CurveMethod = CurveMethod.SERIES,
                        ctl: SeriesControl = DEFAULT_SERIES_CONTROL,
                        boundary_tol: float = 0.1) -> Curve:
    """Pointwise sup over modes of |S_n(t)|, exact for this diagonal family.

    Raises :class:`TruncationError` when the sup rests on the last retained
    mode for more than ``boundary_tol`` of the grid (the truncation is then
    suspect and n_modes should grow).
    """
    curves = [mode_curve(model, params, n, times, method, ctl)
              for n in range(1, model.n_modes + 1)]
    stacked = np.vstack([np.abs(c.values) for c in curves])
    argmax = np.argmax(stacked, axis=0)
    if model.n_modes > 1:
        boundary_frac = float(np.mean(argmax == model.n_modes - 1))
        if boundary_frac > boundary_tol:
            raise TruncationError(
                f"the norm rests on the last retained mode over "
                f"{boundary_frac:.0%} of the grid; increase n_modes")
    grid = curves[0].times
    # The norm curve is not a single scalar problem; tag it with the first
    # mode only through the method label and leave problem unset.
    return Curve(grid, stacked.max(axis=0), CurveMethod(method), None)
