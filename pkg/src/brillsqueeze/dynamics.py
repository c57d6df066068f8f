"""Drift and diffusion matrices of the quadrature fluctuations, and stability.

Quadrature ordering is fixed to ``(X_a1, P_a1, X_b, P_b, X_cs, P_cs)`` with
``X = (o + o^dag)/sqrt(2)`` and ``P = i(o^dag - o)/sqrt(2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ParameterError
from .model import EffectiveParams, SystemParams, derive_effective_params, resolve_detunings

__all__ = [
    "QUADRATURES",
    "STABILITY_TOL",
    "DriftModel",
    "StabilityReport",
    "build_drift_matrix",
    "build_noise_matrix",
    "build_drift_model",
    "check_stability",
]

QUADRATURES = ("X_a1", "P_a1", "X_b", "P_b", "X_cs", "P_cs")
STABILITY_TOL = 1e-12


@dataclass(frozen=True)
class DriftModel:
    M: np.ndarray
    A: np.ndarray
    ordering: tuple = QUADRATURES


@dataclass(frozen=True)
class StabilityReport:
    stable: bool
    spectral_abscissa: float


def build_drift_matrix(eff: EffectiveParams, p: SystemParams) -> np.ndarray:
    """Linear drift generator of the fluctuation quadratures.

    Both mechanical quadratures are damped at ``gamma_m/2``; see the README
    for the sign of the ``(P_cs, P_cs)`` entry.
    """
    d1, db = resolve_detunings(p, eff)
    k = p.kappa_1 / 2
    gb = p.gamma_b / 2
    gm = p.gamma_m / 2
    Gb = p.G_b
    Gc2 = 2.0 * eff.G_c_eff
    w = eff.omega_m_eff
    M = np.array(
        [
            [-k, d1, 0.0, -Gb, 0.0, 0.0],
            [-d1, -k, Gb, 0.0, Gc2, 0.0],
            [0.0, -Gb, -gb, db, 0.0, 0.0],
            [Gb, 0.0, -db, -gb, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, -gm, w],
            [Gc2, 0.0, 0.0, 0.0, -w, -gm],
        ]
    )
    if not np.all(np.isfinite(M)):
        raise ParameterError("drift matrix has non-finite entries")
    return M


def build_noise_matrix(eff: EffectiveParams, p: SystemParams) -> np.ndarray:
    """Diagonal diffusion matrix: vacuum for the optical and acoustic modes,
    a squeezed thermal bath for the mechanical mode."""
    if p.n_m < 0 or not math.isfinite(eff.r):
        raise ParameterError("need n_m >= 0 and a finite squeezing parameter")
    thermal = p.gamma_m * (2.0 * p.n_m + 1.0) / 2.0
    return np.diag(
        [
            p.kappa_1 / 2,
            p.kappa_1 / 2,
            p.gamma_b / 2,
            p.gamma_b / 2,
            math.exp(2 * eff.r) * thermal,
            math.exp(-2 * eff.r) * thermal,
        ]
    )


def build_drift_model(p: SystemParams, eff: EffectiveParams | None = None) -> DriftModel:
    if eff is None:
        eff = derive_effective_params(p)
    return DriftModel(M=build_drift_matrix(eff, p), A=build_noise_matrix(eff, p))


def check_stability(M) -> StabilityReport:
    """Spectral abscissa of ``M`` and the stability verdict.

    Marginal systems (abscissa within ``STABILITY_TOL`` of zero) count as
    unstable.
    """
    M = np.asarray(M, dtype=float)
    if not np.all(np.isfinite(M)):
        raise ParameterError("drift matrix must be finite")
    try:
        eig = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigenvalue computation did not converge: {exc}") from exc
    if not np.all(np.isfinite(eig)):
        raise NumericalError("eigenvalue computation returned non-finite values")
    abscissa = float(np.max(eig.real))
    return StabilityReport(stable=abscissa < -STABILITY_TOL, spectral_abscissa=abscissa)
