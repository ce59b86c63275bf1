import logging
from pathlib import Path

import pytest
from click.testing import CliRunner
from hypothesis import settings as hypothesis_settings

from app.core.config import SolverLimits
from app.core.logging_config import APP_LOGGER
from app.infrastructure.formats.instance_format import parse_instance
from utils import InstanceFactory


hypothesis_settings.register_profile("repeatable", derandomize=True, deadline=None)
hypothesis_settings.load_profile("repeatable")

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(autouse=True)
def reset_app_logger():
    """The CLI installs its own handler on the 'app' logger; undo it after every test."""
    yield
    app_logger = logging.getLogger(APP_LOGGER)
    app_logger.handlers[:] = []
    app_logger.setLevel(logging.NOTSET)
    app_logger.propagate = True


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def golden_dir() -> Path:
    return FIXTURES / "golden"


@pytest.fixture
def five_species_path() -> Path:
    return FIXTURES / "five_species.inst"


@pytest.fixture
def decoy_path() -> Path:
    return FIXTURES / "decoy.inst"


@pytest.fixture
def five_species(five_species_path):
    """Five species A..E, budget 3."""
    return parse_instance(five_species_path.read_text())


@pytest.fixture
def decoy(decoy_path):
    """x1, x2 worth 1 each; z worth 10 but only alive with the worthless y. Budget 2."""
    return parse_instance(decoy_path.read_text())


@pytest.fixture
def limits() -> SolverLimits:
    return SolverLimits()


@pytest.fixture
def factory() -> InstanceFactory:
    return InstanceFactory(seed=20240611)


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def temp_directory(tmp_path) -> Path:
    return tmp_path
