import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from twofold import find_cycle_newton, monodromy, resonant_system


@pytest.fixture(scope="session")
def desk_params():
    """The standing desk-scale example: C = 1, H = 0.04, Lambda = 1."""
    return resonant_system(1.0, 0.04, 1.0)


@pytest.fixture(scope="session")
def series_params():
    """Mid-range hyperbola parameters used for the expansion fits."""
    return resonant_system(1.0, 0.5, 1.0)


@pytest.fixture(scope="session")
def desk_cycle(desk_params):
    from twofold import asymptotic_seed
    return find_cycle_newton(desk_params, asymptotic_seed(desk_params))


@pytest.fixture(scope="session")
def desk_monodromy(desk_params, desk_cycle):
    return monodromy(desk_params, desk_cycle)
