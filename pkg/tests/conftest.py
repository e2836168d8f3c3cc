import json
import pathlib

import pytest

from pirlab.graphs import Graph
from pirlab.scheme import DeterministicScheme

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


def load_json(name):
    return json.loads((FIXTURES / name).read_text())


def load_scheme(name):
    return DeterministicScheme.from_json(load_json(name))


@pytest.fixture
def k3_scheme():
    return load_scheme("k3_scheme.json")


@pytest.fixture
def star4_scheme():
    return load_scheme("star4_scheme.json")


@pytest.fixture
def center_heavy_scheme():
    return load_scheme("star_center_heavy.json")


@pytest.fixture
def two_per_server_scheme():
    return load_scheme("two_per_server.json")


@pytest.fixture
def pendant_triangle():
    return Graph.from_json(load_json("pendant_triangle.json"))
