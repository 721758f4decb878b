import pytest
import structlog


@pytest.fixture(autouse=True)
def resetLogging():
    # main() binds structlog to the captured stderr of the running test
    yield
    structlog.reset_defaults()
