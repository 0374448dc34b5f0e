import numpy as np
import pytest

from medgate.core import SystemParams, params_from_reduced


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def symmetric_params():
    """E_C = E_Q = E_Q' = 0.1, J1 = J2 = 0.05 (R = 1, J' = 1)."""
    return SystemParams(e_q=0.1, e_c=0.1, e_qp=0.1, j1=0.05, j2=0.05)


@pytest.fixture
def reference_adiabatic_params():
    """Non-degenerate control (R = 1.2) used for the slow-gate checks."""
    return params_from_reduced(e_c=0.1, r=1.2, j1p=1.0, j2p=1.0)


def random_dynamic_params(rng, n_sets=1):
    """Random parameter sets in the pulsed-gate regime (alpha=1, E_Q=E_Q'),
    with K = sqrt((R-1)^2 + 4J1'^2 + 4J2'^2) bounded away from zero."""
    out = []
    while len(out) < n_sets:
        e_c = rng.uniform(0.05, 0.3)
        r = rng.uniform(0.2, 3.0)
        j1p = rng.uniform(0.05, 2.0)
        j2p = rng.uniform(0.05, 2.0)
        k = np.sqrt((r - 1.0) ** 2 + 4 * j1p ** 2 + 4 * j2p ** 2)
        if k < 0.3:
            continue
        out.append(params_from_reduced(e_c, r, j1p, j2p))
    return out if n_sets > 1 else out[0]
