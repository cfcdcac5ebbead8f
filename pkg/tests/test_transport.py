import itertools
import random
from decimal import Decimal
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from wpgraph.errors import BadParameterError, GraphMismatchError, TooLargeError
from wpgraph.graph import grid_graph, shortest_path_matrix
from wpgraph.measure import Measure, dirac, random_measure
from wpgraph.transport import (
    Coupling,
    coupling_cost,
    diagonal_coupling,
    marginal_violation,
    oracle_ot,
    product_coupling,
    render_root,
    solve_ot,
    transport_cost,
    validate_coupling,
    wasserstein_distance,
)

from conftest import FIXTURES, m


def test_diagonal_coupling():
    assert diagonal_coupling(dirac(0)).entries == {(0, 0): 1}
    mu = m(v0="1/2", v2="1/2")
    pi = diagonal_coupling(mu)
    assert pi.entries == {(0, 0): F(1, 2), (2, 2): F(1, 2)}
    assert validate_coupling(pi)


def test_validate_coupling_cases(p3):
    mu, nu = m(v0="1/2", v2="1/2"), m(v1="1/4", v2="3/4")
    assert validate_coupling(product_coupling(mu, nu))
    bad = Coupling(diagonal_coupling(mu).entries, mu, nu)
    assert not validate_coupling(bad)
    assert "target" in marginal_violation(bad) or "column" in marginal_violation(bad)


def test_coupling_cost_examples(p3, p4):
    assert coupling_cost(diagonal_coupling(m(v0="1/3", v1="2/3")), p3, 3) == 0
    mu, nu = m(v0="1/2", v2="1/2"), m(v1="1/2", v3="1/2")
    pi = Coupling({(0, 1): F(1, 2), (2, 3): F(1, 2)}, mu, nu)
    assert coupling_cost(pi, p4, 1) == 1
    mu, nu = m(v0="1/4", v1="3/4"), m(v2="1/4", v1="3/4")
    pi = Coupling({(0, 2): F(1, 4), (1, 1): F(3, 4)}, mu, nu)
    assert coupling_cost(pi, p3, 2) == 1


def test_solve_examples(c4, p4):
    uniform = Measure({i: F(1, 4) for i in range(4)})
    assert solve_ot(dirac(0), uniform, c4, 2).cost_p == F(3, 2)
    res = solve_ot(m(v0="1/2", v2="1/2"), m(v1="1/2", v3="1/2"), p4, 1)
    assert res.cost_p == 1
    assert validate_coupling(res.plan) and coupling_cost(res.plan, p4, 1) == 1


@pytest.mark.parametrize("p", [1, 2, 3])
def test_dirac_embedding(fixture_graph, p):
    d = shortest_path_matrix(fixture_graph)
    for x in range(fixture_graph.n):
        for y in range(fixture_graph.n):
            assert solve_ot(dirac(x), dirac(y), d, p).cost_p == int(d[x, y]) ** p


def test_wasserstein_distance_rendering(p3):
    cost, dist = wasserstein_distance(m(v0="1/2", v1="1/2"), dirac(1), p3, 2)
    assert cost == F(1, 2)
    assert dist == Decimal("0.707106781187")
    assert wasserstein_distance(dirac(0), dirac(0), p3, 2) == (0, Decimal("0E-12"))
    assert wasserstein_distance(dirac(0), dirac(2), p3, 3) == (8, Decimal("2.000000000000"))


def test_render_root_half_even():
    assert render_root(F(1, 8), 1, 2) == Decimal("0.12")
    assert render_root(F(3, 8), 1, 2) == Decimal("0.38")
    assert render_root(F(1, 4), 2, 3) == Decimal("0.500")


def _quarter_measures(n):
    out = set()
    for q in range(1, 5):
        for parts in itertools.product(range(q + 1), repeat=n):
            if sum(parts) == q:
                out.add(Measure({i: F(k, q) for i, k in enumerate(parts)}))
    return sorted(out, key=repr)


@pytest.mark.parametrize("p", [1, 2])
def test_oracle_agrees_on_all_small_p4_measures(p4, p):
    measures = _quarter_measures(4)
    for mu in measures:
        for nu in measures:
            assert solve_ot(mu, nu, p4, p).cost_p == oracle_ot(mu, nu, p4, p)


def test_oracle_trivial_cases(p3):
    assert oracle_ot(dirac(0), dirac(2), p3, 3) == 8
    mu = m(v0="1/3", v1="1/3", v2="1/3")
    assert oracle_ot(mu, mu, p3, 2) == 0


def test_oracle_size_limit():
    d = shortest_path_matrix(grid_graph(3, 3))
    big = Measure({i: F(1, 5) for i in range(5)})
    with pytest.raises(TooLargeError):
        oracle_ot(big, big, d)


def test_exponent_validation(p3):
    with pytest.raises(BadParameterError):
        solve_ot(dirac(0), dirac(1), p3, 2.5)
    with pytest.raises(BadParameterError):
        solve_ot(dirac(0), dirac(1), p3, 0)
    with pytest.raises(BadParameterError):
        solve_ot(dirac(0), dirac(1), p3, True)


def test_graph_mismatch(p3):
    with pytest.raises(GraphMismatchError):
        solve_ot(dirac(0), dirac(5), p3)


def test_float_mode_matches_exact_and_oracle():
    d = shortest_path_matrix(grid_graph(3, 3))
    rng = random.Random(4)
    for _ in range(100):
        mu, nu = random_measure(rng, 9, 4), random_measure(rng, 9, 4)
        exact = float(solve_ot(mu, nu, d, 2).cost_p)
        assert abs(solve_ot(mu, nu, d, 2.0, float_mode=True).cost_p - exact) <= 1e-9
        approx = solve_ot(mu, nu, d, 2.5, float_mode=True).cost_p
        assert abs(approx - oracle_ot(mu, nu, d, 2.5, float_mode=True)) <= 1e-9


graph_names = st.sampled_from(sorted(FIXTURES))


@settings(max_examples=150, deadline=None)
@given(graph_names, st.integers(0, 2**32), st.integers(1, 3))
def test_metric_and_bound_properties(name, seed, p):
    g = FIXTURES[name]
    d = shortest_path_matrix(g)
    rng = random.Random(seed)
    mu, nu = random_measure(rng, g.n, 4), random_measure(rng, g.n, 4)
    c = transport_cost(mu, nu, d, p)
    assert c == transport_cost(nu, mu, d, p)
    assert (c == 0) == (mu == nu)
    for x in range(g.n):
        assert c >= abs(mu[x] - nu[x])
    assert c == oracle_ot(mu, nu, d, p)
