import logging

import pytest

from nqcalc.config import DEFAULT_SEED, LOG_LEVEL_VARIABLE, SEED_VARIABLE, Settings, load_settings
from nqcalc.errors import ConfigError


def test_defaults():
    settings = load_settings({})
    assert settings == Settings(DEFAULT_SEED, "WARNING")
    assert settings.level == logging.WARNING


def test_values_from_the_environment():
    settings = load_settings({SEED_VARIABLE: " 7 ", LOG_LEVEL_VARIABLE: "debug"})
    assert settings.seed == 7
    assert settings.level == logging.DEBUG


@pytest.mark.parametrize(
    "environ, variable",
    [
        pytest.param({SEED_VARIABLE: "seven"}, SEED_VARIABLE, id="seed"),
        pytest.param({LOG_LEVEL_VARIABLE: "LOUD"}, LOG_LEVEL_VARIABLE, id="level"),
    ],
)
def test_invalid_values(environ, variable):
    with pytest.raises(ConfigError) as excinfo:
        load_settings(environ)
    assert excinfo.value.variable == variable


@pytest.mark.parametrize(
    "level, count, expected",
    [
        pytest.param("WARNING", 0, logging.WARNING, id="quiet"),
        pytest.param("WARNING", 1, logging.INFO, id="verbose"),
        pytest.param("ERROR", 1, logging.INFO, id="verbose-overrides"),
        pytest.param("WARNING", 2, logging.DEBUG, id="debug"),
        pytest.param("DEBUG", 1, logging.DEBUG, id="keeps-debug"),
    ],
)
def test_verbosity(level, count, expected):
    assert Settings(log_level=level).verbosity(count) == expected
