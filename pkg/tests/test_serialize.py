from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from wpgraph.errors import (
    MassNotOneError,
    ParseError,
    UnknownVertexError,
    WPGraphError,
    ZeroDenominatorError,
)
from wpgraph.graph import shortest_path_matrix
from wpgraph.groups import symmetric_group
from wpgraph.serialize import (
    format_rational,
    graph_from_json,
    graph_to_json,
    group_from_json,
    group_to_json,
    measure_from_json,
    measure_to_json,
    parse_rational,
    plan_from_json,
    plan_to_json,
)
from wpgraph.transport import solve_ot

from conftest import FIXTURES, m


@pytest.mark.parametrize("text, value", [("1/2", F(1, 2)), ("3", F(3)), ("-4/6", F(-2, 3)), (2, F(2))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


def test_parse_rational_errors():
    with pytest.raises(ZeroDenominatorError):
        parse_rational("1/0")
    for bad in ("1.5", "a/b", "1/-2", "", True):
        with pytest.raises(ParseError):
            parse_rational(bad)


@given(st.fractions())
def test_rational_round_trip(x):
    text = format_rational(x)
    assert parse_rational(text) == x
    assert format_rational(parse_rational(text)) == text


def test_format_is_canonical():
    assert format_rational(F(2, 4)) == "1/2"
    assert format_rational(F(6, 3)) == "2"


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_graph_round_trip(name):
    g = FIXTURES[name]
    assert graph_from_json(graph_to_json(g)) == g
    assert graph_to_json(graph_from_json(graph_to_json(g))) == graph_to_json(g)


def test_measure_round_trip():
    g = FIXTURES["P4"]
    mu = m(v0="1/2", v2="1/4", v3="1/4")
    obj = measure_to_json(mu, g)
    assert obj == {"mass": {"v0": "1/2", "v2": "1/4", "v3": "1/4"}}
    assert measure_from_json(obj, g) == mu
    assert measure_from_json({"mass": {"v1": "2/2"}}, g) == m(v1=1)


def test_measure_json_errors():
    g = FIXTURES["P3"]
    with pytest.raises(UnknownVertexError):
        measure_from_json({"mass": {"x": "1"}}, g)
    with pytest.raises(MassNotOneError):
        measure_from_json({"mass": {"v0": "1/2"}}, g)
    with pytest.raises(ParseError):
        measure_from_json({"weights": {}}, g)


def test_group_round_trip():
    h = symmetric_group(3)
    assert group_from_json(group_to_json(h)) == h


def test_group_order_mismatch():
    with pytest.raises(WPGraphError):
        group_from_json({"order": 4, "table": [[0, 1], [1, 0]]})


def test_plan_round_trip():
    g = FIXTURES["P4"]
    d = shortest_path_matrix(g)
    mu, nu = m(v0="1/2", v2="1/2"), m(v1="1/2", v3="1/2")
    res = solve_ot(mu, nu, d, 1)
    obj = plan_to_json(res.plan, g, res.cost_p)
    assert obj == {"entries": [["v0", "v1", "1/2"], ["v2", "v3", "1/2"]], "cost_p": "1"}
    assert plan_from_json(obj, g, mu, nu) == res.plan
