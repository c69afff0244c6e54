"""The repo-level schemas/ directory mirrors the packaged schemas."""

from importlib import resources
from pathlib import Path

import pytest

TOP = Path(__file__).parents[1] / "schemas"
NAMES = ["request.schema.json", "report.schema.json",
         "sample.schema.json", "map.schema.json"]


@pytest.mark.parametrize("name", NAMES)
def test_top_level_schema_matches_packaged(name):
    packaged = resources.files("picklab.schemas").joinpath(name).read_bytes()
    assert (TOP / name).read_bytes() == packaged
