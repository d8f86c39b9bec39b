import json
import pathlib

import pytest

DATA = pathlib.Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def ref():
    """Frozen reference values from the independent high-precision route."""
    with open(DATA / "reference_values.json") as fh:
        return json.load(fh)
