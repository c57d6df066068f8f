import warnings

import numpy as np
import pytest

from brillsqueeze import SystemParams, build_drift_model, check_stability, derive_effective_params


@pytest.fixture
def fig2():
    """Working point of the detuning/coupling maps (point B)."""
    return SystemParams(G_c=0.15, G_b=0.124)


def random_physical_params(rng, fast=False):
    """Random parameters in (or, with ``fast``, well above) the physical regime.

    ``fast`` uses large decay rates so that the slowest relaxation time is short
    enough for explicit time integration.
    """
    if fast:
        values = dict(
            kappa_1=rng.uniform(0.2, 1.0),
            gamma_b=rng.uniform(0.2, 1.5),
            gamma_m=rng.uniform(0.1, 0.4),
            eta=rng.uniform(0.0, 5e-3),
            n_m=rng.uniform(0.0, 20.0),
            G_c=rng.uniform(0.0, 0.3),
            G_b=rng.uniform(0.0, 0.4),
            g_c1=1e-2,
        )
    else:
        values = dict(
            kappa_1=10 ** rng.uniform(-3, 0),
            gamma_b=10 ** rng.uniform(-2, 0.3),
            gamma_m=10 ** rng.uniform(-5, -3),
            eta=rng.uniform(0.0, 2e-4),
            n_m=rng.uniform(0.0, 1000.0),
            G_c=rng.uniform(0.0, 0.3),
            G_b=rng.uniform(0.0, 0.3),
        )
    if rng.random() < 0.5:
        values["Delta_1"] = rng.uniform(0.5, 5.0)
        values["Delta_b"] = rng.uniform(0.5, 5.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return SystemParams(**values)


def random_stable_systems(seed, count, fast=False, min_margin=0.0):
    """``count`` stable (params, eff, DriftModel, StabilityReport) tuples."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        p = random_physical_params(rng, fast=fast)
        eff = derive_effective_params(p)
        model = build_drift_model(p, eff)
        report = check_stability(model.M)
        if report.stable and -report.spectral_abscissa > min_margin:
            out.append((p, eff, model, report))
    return out


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
