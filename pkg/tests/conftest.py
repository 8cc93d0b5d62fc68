import os
from pathlib import Path

import numpy as np
import pytest

config_path = Path(__file__).parent / "configs" / "local.toml"
if not config_path.exists():
    raise FileNotFoundError("Test configuration file not found.")

os.environ["QUIVERFLOW_CONFIG"] = config_path.as_posix()
os.environ.pop("QUIVERFLOW_THREADS", None)


@pytest.fixture(autouse=True)
def fresh_config():
    from quiverflow.config import reset_config_cache

    reset_config_cache()
    yield
    reset_config_cache()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(42)
