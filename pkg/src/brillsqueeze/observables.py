"""Original-frame squeezing metrics and the single-point pipeline.

The dB convention is ``-10*log10(variance/0.5)``: positive numbers mean
squeezing below the vacuum level, and 3.0103 dB is the 3 dB limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import DriftModel, StabilityReport, build_drift_model, check_stability
from .errors import DomainError
from .model import EffectiveParams, SystemParams, derive_effective_params
from .steady_state import solve_lyapunov

__all__ = [
    "VACUUM_VARIANCE",
    "SqueezingReport",
    "PointSolution",
    "position_variance",
    "variance_db",
    "effective_phonon_number",
    "solve_point",
    "report_from_solution",
    "evaluate_point",
]

VACUUM_VARIANCE = 0.5
_X_CS, _P_CS = 4, 5


@dataclass(frozen=True)
class SqueezingReport:
    """Metrics of one parameter point.

    The variance fields are ``None`` when the point is unstable, so that no
    table ever carries a variance without a valid steady state behind it.
    """

    variance: float | None
    variance_db: float | None
    n_eff: float | None
    stable: bool
    spectral_abscissa: float

    def as_dict(self):
        return {
            "variance": self.variance,
            "variance_db": self.variance_db,
            "n_eff": self.n_eff,
            "stable": self.stable,
            "spectral_abscissa": self.spectral_abscissa,
        }


@dataclass(frozen=True)
class PointSolution:
    params: SystemParams
    effective: EffectiveParams
    model: DriftModel
    stability: StabilityReport
    covariance: np.ndarray | None


def position_variance(V, r):
    """Mechanical position variance in the original (unsqueezed) frame."""
    return math.exp(-2.0 * r) * float(V[_X_CS, _X_CS])


def variance_db(variance):
    """Squeezing degree in dB relative to the vacuum variance 1/2."""
    if not variance > 0:
        raise DomainError(f"variance must be positive, got {variance!r}")
    return -10.0 * math.log10(variance / VACUUM_VARIANCE)


def effective_phonon_number(V, r):
    """Mean phonon number of the mechanical mode in the original frame."""
    return 0.5 * (math.exp(-2.0 * r) * float(V[_X_CS, _X_CS]) + math.exp(2.0 * r) * float(V[_P_CS, _P_CS]) - 1.0)


def solve_point(p: SystemParams, need_covariance=True) -> PointSolution:
    """Effective parameters, drift model, stability and (if stable) covariance."""
    eff = derive_effective_params(p)
    model = build_drift_model(p, eff)
    stability = check_stability(model.M)
    V = None
    if stability.stable and need_covariance:
        V = solve_lyapunov(model.M, model.A, check_stable=False)
    return PointSolution(p, eff, model, stability, V)


def report_from_solution(sol: PointSolution) -> SqueezingReport:
    if sol.covariance is None:
        return SqueezingReport(None, None, None, sol.stability.stable, sol.stability.spectral_abscissa)
    r = sol.effective.r
    var = position_variance(sol.covariance, r)
    n_eff = effective_phonon_number(sol.covariance, r)
    assert n_eff > -1e-9, f"negative phonon number {n_eff}"
    return SqueezingReport(
        variance=var,
        variance_db=variance_db(var),
        n_eff=n_eff,
        stable=True,
        spectral_abscissa=sol.stability.spectral_abscissa,
    )


def evaluate_point(p: SystemParams) -> SqueezingReport:
    """Full pipeline for one parameter point."""
    return report_from_solution(solve_point(p))
