"""Steady-state and transient covariance of the Gaussian fluctuations.

The steady state solves ``M V + V M^T = -A``. The transient solves
``dV/dt = M V + V M^T + A`` with an explicit embedded Runge-Kutta scheme and
serves as an independent check on the algebraic solve.
"""

from __future__ import annotations

import math

import numpy as np
import scipy.linalg

from .dynamics import check_stability
from .errors import NumericalError, ParameterError, StabilityError, StiffnessError
from .model import EffectiveParams

__all__ = [
    "LYAPUNOV_RTOL",
    "solve_lyapunov",
    "lyapunov_residual",
    "symplectic_form",
    "is_physical",
    "default_initial_covariance",
    "integrate_covariance",
]

LYAPUNOV_RTOL = 1e-10


def lyapunov_residual(M, V, A) -> float:
    """Relative residual ``||M V + V M^T + A||_inf / ||A||_inf``."""
    R = M @ V + V @ M.T + A
    scale = np.linalg.norm(A, np.inf)
    if scale == 0:
        scale = 1.0
    return float(np.linalg.norm(R, np.inf) / scale)


def _kron_solve(M, A):
    n = M.shape[0]
    eye = np.eye(n)
    # column-major vec: vec(M V) = (I kron M) vec V, vec(V M^T) = (M kron I) vec V
    K = np.kron(eye, M) + np.kron(M, eye)
    rhs = -A.reshape(-1, order="F")
    try:
        lu = scipy.linalg.lu_factor(K, check_finite=False)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(f"Lyapunov system could not be factorised: {exc}") from exc
    if np.any(np.diag(lu[0]) == 0):
        raise NumericalError("Lyapunov system is singular")
    x = scipy.linalg.lu_solve(lu, rhs, check_finite=False)
    # one step of iterative refinement
    x = x + scipy.linalg.lu_solve(lu, rhs - K @ x, check_finite=False)
    return x.reshape((n, n), order="F")


def solve_lyapunov(M, A, method="kron", check_stable=True):
    """Steady-state covariance for drift ``M`` and diffusion ``A``.

    Parameters
    ----------
    M, A : array_like
        Square drift and diffusion matrices.
    method : {"kron", "schur"}
        ``"kron"`` vectorises the equation into a dense ``n**2`` system
        solved by pivoted LU. ``"schur"`` uses the Bartels-Stewart solver
        from SciPy.
    check_stable : bool
        Verify stability before solving. Callers that already hold a
        :class:`StabilityReport` may skip the repeated eigenvalue problem.
        The residual is checked on every solve regardless.

    Returns
    -------
    numpy.ndarray
        The symmetrised solution ``V``.

    Raises
    ------
    StabilityError
        If ``M`` is not Hurwitz.
    NumericalError
        If the solve fails or the relative residual exceeds ``LYAPUNOV_RTOL``.
    """
    M = np.asarray(M, dtype=float)
    A = np.asarray(A, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or A.shape != M.shape:
        raise ParameterError("M and A must be square matrices of equal shape")
    if check_stable:
        report = check_stability(M)
        if not report.stable:
            raise StabilityError(
                f"drift matrix is not stable (spectral abscissa {report.spectral_abscissa:.3e})",
                report.spectral_abscissa,
            )
    if method == "kron":
        V = _kron_solve(M, A)
    elif method == "schur":
        try:
            V = scipy.linalg.solve_continuous_lyapunov(M, -A)
            # one correction solve on the residual
            V = V + scipy.linalg.solve_continuous_lyapunov(M, -(M @ V + V @ M.T + A))
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise NumericalError(f"Bartels-Stewart solve failed: {exc}") from exc
    else:
        raise ParameterError(f"unknown Lyapunov method {method!r}")
    V = 0.5 * (V + V.T)
    if not np.all(np.isfinite(V)):
        raise NumericalError("Lyapunov solution is not finite")
    res = lyapunov_residual(M, V, A)
    if res >= LYAPUNOV_RTOL:
        raise NumericalError(f"Lyapunov residual {res:.2e} exceeds {LYAPUNOV_RTOL:.0e}")
    return V


def symplectic_form(n_modes=3):
    """``Omega`` with ``[X_k, P_k] = i`` in the interleaved ordering."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def is_physical(V, tol=1e-9):
    """True if ``V`` is symmetric and obeys ``V + (i/2) Omega >= 0``."""
    V = np.asarray(V, dtype=float)
    n = V.shape[0]
    if n % 2 or V.shape != (n, n):
        return False
    if not np.allclose(V, V.T, rtol=0, atol=1e-12 * max(1.0, np.abs(V).max())):
        return False
    H = V + 0.5j * symplectic_form(n // 2)
    return bool(np.linalg.eigvalsh(H).min() >= -tol * max(1.0, np.abs(V).max()))


def default_initial_covariance(eff: EffectiveParams):
    """Uncoupled state: optical and acoustic vacuum, mechanics at ``N_eff``."""
    m = eff.N_eff + 0.5
    return np.diag([0.5, 0.5, 0.5, 0.5, m, m])


# Dormand-Prince 5(4) tableau
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B_LOW = np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)
_E = _B - _B_LOW
_A = [np.array(row) for row in _A]


def _triangle_operator(M, A):
    """Affine map on the upper-triangle entries equivalent to the full ODE."""
    n = M.shape[0]
    iu = np.triu_indices(n)
    m = len(iu[0])
    L = np.empty((m, m))
    for k in range(m):
        V = np.zeros((n, n))
        V[iu[0][k], iu[1][k]] = 1.0
        V[iu[1][k], iu[0][k]] = 1.0
        L[:, k] = (M @ V + V @ M.T)[iu]
    return L, A[iu], iu


def integrate_covariance(M, A, V0, t_final, tol=1e-10, max_steps=5_000_000):
    """Integrate the covariance equation from ``V0`` to ``t_final``.

    Only the upper triangle is propagated, so every accepted state is exactly
    symmetric. The step is accepted when the embedded error estimate per unit
    time is below ``tol * (1 + max|V|)``.

    Raises
    ------
    StiffnessError
        If the step size underflows; ``exc.time`` holds the failing time.
    """
    M = np.asarray(M, dtype=float)
    A = np.asarray(A, dtype=float)
    V0 = np.asarray(V0, dtype=float)
    if t_final < 0 or not math.isfinite(t_final):
        raise ParameterError("t_final must be finite and non-negative")
    if not np.allclose(V0, V0.T, rtol=0, atol=1e-12 * max(1.0, np.abs(V0).max())):
        raise ParameterError("V0 must be symmetric")
    n = M.shape[0]
    L, a, iu = _triangle_operator(M, A)
    y = V0[iu].copy()

    def rhs(u):
        return L @ u + a

    t = 0.0
    scale_rate = max(np.abs(L).sum(axis=1).max(), 1e-300)
    h = min(t_final, 0.01 / scale_rate) if t_final > 0 else 0.0
    k = np.empty((7, y.size))
    k[0] = rhs(y)
    steps = 0
    end_slack = 1e-13 * max(1.0, t_final)
    while t_final - t > end_slack:
        if steps >= max_steps:
            raise NumericalError(f"step budget exhausted at t={t:.6g}")
        if h <= 1e-14 * max(1.0, abs(t)):
            raise StiffnessError(f"step size underflow at t={t:.6g}", t)
        h = min(h, t_final - t)
        for s in range(1, 7):
            k[s] = rhs(y + h * (_A[s] @ k[:s]))
        y_new = y + h * (_B @ k)
        err_rate = np.abs(_E @ k).max()
        bound = tol * (1.0 + np.abs(y_new).max())
        if err_rate <= bound:
            t += h
            y = y_new
            k[0] = k[6]
            steps += 1
        if err_rate == 0:
            factor = 5.0
        else:
            factor = min(5.0, max(0.2, 0.9 * (bound / err_rate) ** 0.25))
        h *= factor
    V = np.empty((n, n))
    V[iu] = y
    V.T[iu] = y
    return V
