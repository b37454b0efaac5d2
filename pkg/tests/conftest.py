import shutil

import numpy as np
import pytest

from riparian_accounts import kernels
from riparian_accounts.config import load_config
from riparian_accounts.fixture import fixture_config, fixture_dir
from riparian_accounts.pipeline import build_documents, run_physical


@pytest.fixture(params=kernels.available())
def backend(request):
    """Run the test once per available kernel backend."""
    previous = kernels.backend_name()
    kernels.set_backend(request.param)
    yield request.param
    kernels.set_backend(previous)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def fixture_cfg():
    return load_config(fixture_config())


@pytest.fixture(scope="session")
def native_max_cfg():
    return load_config(fixture_config(native_max=True))


@pytest.fixture(scope="session")
def fixture_inputs(fixture_cfg):
    return fixture_cfg.load_inputs()


@pytest.fixture(scope="session")
def fixture_physical(fixture_cfg, fixture_inputs):
    return run_physical(fixture_cfg, fixture_inputs)


@pytest.fixture(scope="session")
def fixture_docs(fixture_cfg):
    return build_documents(fixture_cfg, "all")


@pytest.fixture
def fixture_copy(tmp_path):
    """Writable copy of the bundled fixture directory."""
    dst = tmp_path / "fixture"
    shutil.copytree(fixture_dir(), dst, ignore=shutil.ignore_patterns("natcap_out"))
    return dst
