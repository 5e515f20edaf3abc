import os
import pathlib

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[2]


@pytest.fixture(scope="session")
def cli():
    path = os.environ.get("FRONTAL_LAB_BIN") or str(ROOT / "build" / "frontal-lab")
    if not pathlib.Path(path).exists():
        pytest.skip("frontal-lab binary not built")
    return path
