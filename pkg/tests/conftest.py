import numpy as np
import pytest
from hypothesis import settings

from loidreau.gf import Field
from loidreau.scheme import Params

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

P3 = Params.parse("2,24,24,18,3")
P2 = Params.parse("2,20,20,14,2")


@pytest.fixture(scope="session")
def F24():
    return Field(24)


@pytest.fixture(scope="session")
def F20():
    return Field(20)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[key])
