"""Physical inputs and the effective linearised model.

All rates and frequencies are in units of the bare mechanical frequency
``omega_m`` unless stated otherwise.
"""

from __future__ import annotations

import dataclasses
import math
import warnings
from dataclasses import dataclass

from .errors import InconsistentCouplingError, ParameterError

__all__ = [
    "SystemParams",
    "EffectiveParams",
    "solve_mechanical_steady_state",
    "compute_pump_amplitude",
    "derive_effective_params",
]


def _require_finite(**values):
    for name, value in values.items():
        if value is None:
            continue
        if not math.isfinite(value):
            raise ParameterError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class SystemParams:
    """Raw physical inputs of the three-mode device.

    Defaults reproduce the working point used throughout the figures
    (``G_b`` excepted, which defaults to the optimal 0.124).

    ``Delta_1`` and ``Delta_b`` may be left as ``None``, in which case they
    are locked to the effective mechanical frequency of the squeezed frame.
    """

    omega_m: float = 1.0
    g_c1: float = 1e-4
    kappa_1: float = 0.02
    gamma_b: float = 0.4
    gamma_m: float = 1e-4
    eta: float = 1e-4
    n_m: float = 100.0
    G_c: float = 0.15
    G_b: float = 0.124
    Delta_1: float | None = None
    Delta_b: float | None = None

    def __post_init__(self):
        _require_finite(**{f.name: getattr(self, f.name) for f in dataclasses.fields(self)})
        if self.omega_m <= 0:
            raise ParameterError("omega_m must be positive")
        for name in ("kappa_1", "gamma_b", "gamma_m"):
            if getattr(self, name) <= 0:
                raise ParameterError(f"{name} must be positive")
        for name in ("eta", "n_m", "G_c", "G_b", "g_c1"):
            if getattr(self, name) < 0:
                raise ParameterError(f"{name} must be non-negative")
        if self.gamma_m >= self.kappa_1:
            warnings.warn(
                f"gamma_m={self.gamma_m} is not small compared with kappa_1={self.kappa_1}; "
                "the steady-state amplitudes neglect gamma_m",
                RuntimeWarning,
                stacklevel=3,
            )

    @classmethod
    def field_names(cls):
        return tuple(f.name for f in dataclasses.fields(cls))

    def replace(self, **changes) -> SystemParams:
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class EffectiveParams:
    """Quantities derived from :class:`SystemParams`.

    ``omega_m_eff`` and ``G_c_eff`` are the mechanical frequency and the
    optomechanical coupling in the squeezed frame; ``N_eff`` and ``M_eff``
    are the occupation and anomalous correlation of the transformed
    thermal bath.
    """

    beta: float
    Lambda: float
    r: float
    omega_m_eff: float
    G_c_eff: float
    N_eff: float
    M_eff: float
    linearization_ratio: float


def solve_mechanical_steady_state(g_c1, alpha1_sq, eta, omega_m=1.0):
    """Real mechanical amplitude from the classical force balance.

    Solves ``16*eta*beta**3 + (12*eta + omega_m)*beta - g_c1*alpha1_sq = 0``
    by bisection. The left-hand side is strictly increasing for
    ``eta >= 0`` and ``omega_m > 0``, so the real root is unique and lies in
    ``[0, g_c1*alpha1_sq/omega_m]``.

    Parameters
    ----------
    g_c1 : float
        Single-photon optomechanical coupling.
    alpha1_sq : float
        Intracavity photon number ``|alpha_1|**2``.
    eta : float
        Duffing amplitude.
    omega_m : float
        Bare mechanical frequency.

    Returns
    -------
    float
        The root ``beta``, bisected down to adjacent floating-point numbers.
    """
    _require_finite(g_c1=g_c1, alpha1_sq=alpha1_sq, eta=eta, omega_m=omega_m)
    if eta < 0 or omega_m <= 0 or alpha1_sq < 0:
        raise ParameterError("need eta >= 0, omega_m > 0 and alpha1_sq >= 0")
    force = g_c1 * alpha1_sq
    if force == 0:
        return 0.0

    def f(b):
        return (16.0 * eta * b * b + 12.0 * eta + omega_m) * b - force

    lo, hi = 0.0, force / omega_m
    if force < 0:
        lo, hi = hi, 0.0
    if f(hi) == 0:
        return hi
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= min(lo, hi) or mid >= max(lo, hi):
            break
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return lo if abs(f(lo)) <= abs(f(hi)) else hi


def compute_pump_amplitude(kappa_ex2, eps_d2, kappa_2, Delta_2):
    """Steady intracavity amplitude of the strongly pumped optical mode.

    ``sqrt(kappa_ex2) * eps_d2 / (kappa_2/2 + 1j*Delta_2)``. Multiplying its
    modulus by the single-photon Brillouin rate gives ``G_b``.
    """
    _require_finite(kappa_ex2=kappa_ex2, eps_d2=eps_d2, kappa_2=kappa_2, Delta_2=Delta_2)
    if kappa_2 <= 0:
        raise ParameterError("kappa_2 must be positive")
    if not 0 <= kappa_ex2 <= kappa_2:
        raise ParameterError("need 0 <= kappa_ex2 <= kappa_2")
    return complex(math.sqrt(kappa_ex2) * eps_d2) / complex(kappa_2 / 2, Delta_2)


def derive_effective_params(p: SystemParams) -> EffectiveParams:
    """Map physical inputs to the squeezed-frame model parameters."""
    if p.g_c1 == 0:
        if p.G_c > 0:
            raise InconsistentCouplingError("G_c > 0 requires a non-zero g_c1")
        alpha1_sq = 0.0
    else:
        alpha1_sq = (p.G_c / p.g_c1) ** 2
    beta = solve_mechanical_steady_state(p.g_c1, alpha1_sq, p.eta, p.omega_m)
    Lambda = 3.0 * p.eta * (4.0 * beta * beta + 1.0)
    x = 4.0 * Lambda / p.omega_m
    r = 0.25 * math.log1p(x)
    omega_m_eff = p.omega_m * math.sqrt(1.0 + x)
    G_c_eff = p.G_c * (1.0 + x) ** -0.25
    N_eff = math.cosh(2 * r) * p.n_m + math.sinh(r) ** 2
    M_eff = math.sinh(2 * r) * (p.n_m + 0.5)

    small = max(p.g_c1, p.eta * beta)
    large = min(Lambda, p.G_c)
    ratio = small / large if large > 0 else math.nan
    return EffectiveParams(
        beta=beta,
        Lambda=Lambda,
        r=r,
        omega_m_eff=omega_m_eff,
        G_c_eff=G_c_eff,
        N_eff=N_eff,
        M_eff=M_eff,
        linearization_ratio=ratio,
    )


def resolve_detunings(p: SystemParams, eff: EffectiveParams):
    """Return ``(Delta_1, Delta_b)``, substituting the locked value for ``None``."""
    d1 = eff.omega_m_eff if p.Delta_1 is None else p.Delta_1
    db = eff.omega_m_eff if p.Delta_b is None else p.Delta_b
    return d1, db
