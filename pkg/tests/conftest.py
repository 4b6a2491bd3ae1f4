import math

import pytest
from hypothesis import HealthCheck, settings

from shrinkers import (AmbientConfig, IntegratorSettings, Near, build_family,
                       find_angenent_torus, find_immersed_sphere)

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def cfg2():
    return AmbientConfig(2)


@pytest.fixture(scope="session")
def st():
    return IntegratorSettings()


@pytest.fixture(scope="session")
def torus2(cfg2, st):
    return find_angenent_torus(cfg2, st)


@pytest.fixture(scope="session")
def families2(cfg2, st, torus2):
    r_ang = torus2[0]
    return {
        Near.PLANE: build_family(cfg2, st, Near.PLANE, 4),
        Near.ANGENENT_TORUS: build_family(cfg2, st, Near.ANGENENT_TORUS, 4, r_ang=r_ang),
        Near.CYLINDER: build_family(cfg2, st, Near.CYLINDER, 3, r_ang=r_ang),
    }


@pytest.fixture(scope="session")
def immersed2(cfg2, st, torus2):
    return find_immersed_sphere(cfg2, st, r_ang=torus2[0])


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
