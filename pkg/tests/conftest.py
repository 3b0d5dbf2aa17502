import sys
import warnings
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from acceptance_log import RESULTS as ACCEPTANCE  # noqa: E402

from uniform_inclusions import (  # noqa: E402
    Circle,
    LoadingParameters,
    MapGauge,
    NormalizationNotice,
    ProblemSetup,
    solve,
    validate_domain,
)

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

PAIR = [Circle(-1.5, 1), Circle(1.5, 1)]
TRIPLE = [Circle(-2, 1), Circle(2 * np.exp(1j * np.pi / 3), 1), Circle(2 * np.exp(-1j * np.pi / 3), 1)]


def quiet_domain(circles):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NormalizationNotice)
        return validate_domain(circles)


def pair_setup(kappa=2.0, max_level=4, N=64, tau=2.0, tau_inf=1.0, mode="antisymmetric", **kw):
    k = kappa if np.ndim(kappa) else [kappa, kappa]
    gauge = kw.pop("gauge", MapGauge(mode=mode))
    return ProblemSetup(
        quiet_domain(PAIR),
        LoadingParameters(tau, tau_inf, k),
        gauge,
        base_point=kw.pop("base_point", 0),
        max_level=max_level,
        quadrature_n=N,
        **kw,
    )


@pytest.fixture(scope="session")
def pair_domain():
    return quiet_domain(PAIR)


@pytest.fixture(scope="session")
def triple_domain():
    return quiet_domain(TRIPLE)


@pytest.fixture(scope="session")
def pair_solution():
    return solve(pair_setup())


# -- acceptance summary -------------------------------------------------------

def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[k]
        ok = all(p[1] for p in parts)
        tr.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}")
        for name, good, detail in parts:
            tr.write_line(f"    [{'pass' if good else 'FAIL'}] {name}: {detail}")
