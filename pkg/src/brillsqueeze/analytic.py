"""Closed-form weak-coupling cooling model.

Used as an independent check of the Lyapunov pipeline: the radiation
pressure force spectrum of the optical mode, dressed by the Brillouin
acoustic mode, sets the optomechanical cooling rate, and a rate equation
gives the steady squeezed-frame occupation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import HeatingRegimeError, ParameterError
from .model import SystemParams, derive_effective_params, resolve_detunings

__all__ = [
    "CoolingRates",
    "AnalyticPrediction",
    "force_spectrum",
    "analytic_cooling_rates",
    "analytic_phonon_and_variance",
    "supermode_frequencies",
    "analytic_prediction",
]


@dataclass(frozen=True)
class CoolingRates:
    """Cooling rate, broadened optical linewidth and backaction occupation.

    ``gamma_c`` comes from the exact spectrum difference; ``gamma_c_approx``
    is the resonant shortcut ``4 G'_c**2 / kappa_eff``.
    """

    gamma_c: float
    gamma_c_approx: float
    kappa_eff: float
    n_c: float
    s_plus: float
    s_minus: float

    @property
    def backaction_heating(self):
        """``gamma_c * n_c``, the numerator term the rate equation drops."""
        return self.gamma_c * self.n_c


@dataclass(frozen=True)
class AnalyticPrediction:
    rates: CoolingRates
    n_eff_s: float
    n_eff: float
    variance: float


def force_spectrum(omega, Delta_1, Delta_b, G_b, kappa_1, gamma_b):
    """Spectral density of ``F = a_1 + a_1^dag`` with the acoustic mode
    eliminated. Accepts scalar or array ``omega``."""
    if kappa_1 <= 0 or gamma_b <= 0:
        raise ParameterError("kappa_1 and gamma_b must be positive")
    omega = np.asarray(omega, dtype=float)
    g2 = G_b * G_b
    acoustic = gamma_b / 2 - 1j * (omega - Delta_b)
    num = g2 * gamma_b / np.abs(acoustic) ** 2 + kappa_1
    den = np.abs(kappa_1 / 2 - 1j * (omega - Delta_1) + g2 / acoustic) ** 2
    out = num / den
    return float(out) if out.ndim == 0 else out


def analytic_cooling_rates(G_c_eff, G_b, kappa_1, gamma_b, omega_m_eff, Delta_1, Delta_b):
    s_plus = force_spectrum(omega_m_eff, Delta_1, Delta_b, G_b, kappa_1, gamma_b)
    s_minus = force_spectrum(-omega_m_eff, Delta_1, Delta_b, G_b, kappa_1, gamma_b)
    diff = s_plus - s_minus
    if diff <= 0:
        raise HeatingRegimeError(
            f"S_FF(+w)={s_plus:.4g} does not exceed S_FF(-w)={s_minus:.4g}; no net cooling"
        )
    kappa_eff = kappa_1 + 4.0 * G_b * G_b / gamma_b
    return CoolingRates(
        gamma_c=G_c_eff**2 * diff,
        gamma_c_approx=4.0 * G_c_eff**2 / kappa_eff,
        kappa_eff=kappa_eff,
        n_c=s_minus / diff,
        s_plus=s_plus,
        s_minus=s_minus,
    )


def analytic_phonon_and_variance(rates: CoolingRates, gamma_m, N_eff, r):
    """Rate-equation occupation (squeezed and original frame) and variance.

    Returns ``(n_eff_s, n_eff, variance)``. The ``gamma_c * n_c`` term is
    left out of the numerator; see :attr:`CoolingRates.backaction_heating`.
    """
    total = gamma_m + rates.gamma_c
    if total <= 0:
        raise ParameterError("gamma_m + gamma_c must be positive")
    n_s = gamma_m * N_eff / total
    n_eff = math.cosh(2 * r) * n_s + math.sinh(r) ** 2
    variance = (n_s + 0.5) * math.exp(-2 * r)
    return n_s, n_eff, variance


def supermode_frequencies(Delta_1, G_b):
    """Frequencies of the hybrid optical-acoustic modes ``(a_+, a_-)``."""
    return Delta_1 - abs(G_b), Delta_1 + abs(G_b)


def analytic_prediction(p: SystemParams) -> AnalyticPrediction:
    eff = derive_effective_params(p)
    d1, db = resolve_detunings(p, eff)
    rates = analytic_cooling_rates(eff.G_c_eff, p.G_b, p.kappa_1, p.gamma_b, eff.omega_m_eff, d1, db)
    n_s, n_eff, var = analytic_phonon_and_variance(rates, p.gamma_m, eff.N_eff, eff.r)
    return AnalyticPrediction(rates, n_s, n_eff, var)
