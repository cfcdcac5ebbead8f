from fractions import Fraction

import pytest

from wpgraph.graph import complete_graph, cycle_graph, grid_graph, path_graph, shortest_path_matrix
from wpgraph.measure import Measure

F = Fraction

FIXTURES = {
    "P3": path_graph(3),
    "P4": path_graph(4),
    "C4": cycle_graph(4),
    "K3": complete_graph(3),
    "grid3x3": grid_graph(3, 3),
}


def m(**weights) -> Measure:
    """Measure from keyword weights on vertices named v0, v1, ...: m(v0="1/2", v2="1/2")."""
    return Measure({int(k[1:]): Fraction(v) for k, v in weights.items()})


@pytest.fixture(params=sorted(FIXTURES))
def fixture_graph(request):
    return FIXTURES[request.param]


@pytest.fixture
def p3():
    return shortest_path_matrix(FIXTURES["P3"])


@pytest.fixture
def p4():
    return shortest_path_matrix(FIXTURES["P4"])


@pytest.fixture
def c4():
    return shortest_path_matrix(FIXTURES["C4"])
