"""Steady-state mechanical squeezing in a Brillouin-assisted optomechanical system."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BrillSqueezeError,
    ConfigError,
    DomainError,
    HeatingRegimeError,
    InconsistentCouplingError,
    InfeasibleError,
    NumericalError,
    ParameterError,
    StabilityError,
    StiffnessError,
)
from .model import (  # noqa: E402
    EffectiveParams,
    SystemParams,
    compute_pump_amplitude,
    derive_effective_params,
    solve_mechanical_steady_state,
)
from .dynamics import (  # noqa: E402
    DriftModel,
    StabilityReport,
    build_drift_matrix,
    build_drift_model,
    build_noise_matrix,
    check_stability,
)
from .steady_state import integrate_covariance, is_physical, solve_lyapunov  # noqa: E402
from .observables import (  # noqa: E402
    SqueezingReport,
    effective_phonon_number,
    evaluate_point,
    position_variance,
    variance_db,
)
from .analytic import (  # noqa: E402
    CoolingRates,
    analytic_cooling_rates,
    analytic_phonon_and_variance,
    force_spectrum,
    supermode_frequencies,
)
from .sweep import SweepConfig, SweepResult, figure_preset, optimize_squeezing, run_sweep  # noqa: E402
