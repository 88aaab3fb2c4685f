from pathlib import Path

import numpy as np
import pytest

CONFIGS_DIR = Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def configs_dir():
    return CONFIGS_DIR
