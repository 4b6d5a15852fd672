import json
from importlib.resources import files

import pytest

from hcov.permgroup import load_default_catalog


def load_figure(name: str) -> dict:
    return json.loads(files("hcov").joinpath(f"data/figures/{name}").read_text())


@pytest.fixture(scope="session")
def catalog():
    return load_default_catalog()
