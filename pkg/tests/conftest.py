import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from twinbuild.isom import identity_isometry, pair_foundation, seed_domain
from twinbuild.twin import spherical_double
from twinbuild.workbench.catalog import generate_building

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

CUBE = "rank1(3)^3"


@pytest.fixture(scope="session")
def panel3():
    return generate_building("rank1(3)")


@pytest.fixture(scope="session")
def fano():
    return generate_building("fano")


@pytest.fixture(scope="session")
def cube():
    return generate_building(CUBE)


@pytest.fixture(scope="session")
def pg32():
    return generate_building("pg32")


@pytest.fixture(scope="session")
def panel3_double(panel3):
    return spherical_double(panel3)


@pytest.fixture(scope="session")
def fano_double(fano):
    return spherical_double(fano)


@pytest.fixture(scope="session")
def cube_double(cube):
    return spherical_double(cube)


@pytest.fixture(scope="session")
def pg32_double(pg32):
    return spherical_double(pg32)


def base_pair(t, plus=0):
    return plus, int(t.opposites(plus)[0])


def identity_seed(t, cbar):
    return identity_isometry(t, seed_domain(t, cbar))


def identity_local(t, cbar):
    return identity_isometry(t, pair_foundation(t, cbar))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# criterion number -> (passed, note); filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, note = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {note}")
