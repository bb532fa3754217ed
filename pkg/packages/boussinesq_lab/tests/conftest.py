from __future__ import annotations

import os
import sys
from pathlib import Path

import numpy as np
import pytest


def pytest_configure() -> None:
    # Keep tests runnable without requiring an editable install.
    repo_root = Path(__file__).resolve().parents[3]
    src = repo_root / "packages" / "boussinesq_lab" / "src"
    if str(src) not in sys.path:
        sys.path.insert(0, str(src))

    # Bare config names must never resolve against a user machine config.
    base = Path.cwd() / ".pytest_tmp" / "boussinesq_lab_config"
    base.mkdir(parents=True, exist_ok=True)
    os.environ["BOUSSINESQ_LAB_CONFIG_DIR"] = str(base)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def grid16():
    from boussinesq_lab.spectral import make_grid

    return make_grid(16, 16)


@pytest.fixture
def params():
    from boussinesq_lab.models import Params

    return Params(nu=1.0, eta=1.0)
