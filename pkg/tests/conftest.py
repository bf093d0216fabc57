import pytest

import rotsurf as rs


@pytest.fixture(scope="session")
def cfg():
    return rs.IntegratorConfig()


@pytest.fixture(scope="session")
def lambda0(cfg):
    return rs.find_lambda0(cfg, tol=1e-8)


@pytest.fixture(scope="session")
def launch(cfg):
    return rs.launch_separatrix(cfg)


@pytest.fixture(scope="session")
def sep_profile(cfg):
    return rs.separatrix_profile(cfg)
