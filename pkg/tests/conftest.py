import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from heatline import (
    ModeSet,
    build_kernel_terms,
    construct_potential,
    default_target_spectrum,
    make_two_zone_grid,
    make_uniform_grid,
    verify_potential,
)


@pytest.fixture(scope="session")
def spectrum():
    return default_target_spectrum()


@pytest.fixture(scope="session")
def terms(spectrum):
    return build_kernel_terms(spectrum)


@pytest.fixture(scope="session")
def grid300():
    return make_uniform_grid(300)


@pytest.fixture(scope="session")
def pot300(spectrum, grid300):
    return construct_potential(spectrum, grid300)


@pytest.fixture(scope="session")
def report300(pot300, spectrum):
    return verify_potential(pot300, spectrum)


@pytest.fixture(scope="session")
def modes300(report300):
    return ModeSet.from_reports(report300)


@pytest.fixture(scope="session")
def pot_two_zone_50_75(spectrum):
    return construct_potential(spectrum, make_two_zone_grid(50, 75))
