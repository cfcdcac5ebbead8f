"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Fixtures are P3, P4, C4, K3 and the 3x3 grid with p in {1, 2, 3}, seed 0 and
200 sampled measure pairs per graph. The property suites run once per
(graph, p) and are shared by the criteria that read them.
"""

import json
import time
from fractions import Fraction as F

import pytest

from wpgraph.cli import main
from wpgraph.graph import shortest_path_matrix
from wpgraph.groups import (
    cyclic_group,
    direct_product,
    frucht_graph,
    prescribed_isometry_space,
    symmetric_group,
    trivial_group,
)
from wpgraph.automorphisms import isometries_equal_automorphisms
from wpgraph.measure import interpolate
from wpgraph.neighbouring import bs_witness, check_neighbouring
from wpgraph.rigidity import run_rigidity_suite
from wpgraph.serialize import graph_to_json
from wpgraph.transport import solve_ot

from conftest import FIXTURES, m

EXPONENTS = (1, 2, 3)
SEED = 0
SAMPLES = 200
GENERICITY_RUNS = 50
TOTAL_BUDGET_S = 60.0
GROUP_BUDGET_S = 10.0

_elapsed = {"suite": 0.0}


@pytest.fixture(scope="module")
def reports():
    start = time.perf_counter()
    out = {}
    for name, g in FIXTURES.items():
        for p in EXPONENTS:
            rep = run_rigidity_suite(g, p, SEED, SAMPLES, genericity_runs=GENERICITY_RUNS)
            out[name, p] = {row["name"]: row for row in rep["properties"]}
    _elapsed["suite"] = time.perf_counter() - start
    return out


def _verdict(capsys, number, title: str, ok: bool, detail: str) -> None:
    label = f"criterion {number:>2}" if isinstance(number, int) else number
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} {label}: {title} | {detail}")
    assert ok, f"{label} failed: {detail}"


def _tally(reports, *names):
    checked = failed = 0
    examples = []
    for rows in reports.values():
        for name in names:
            checked += rows[name]["checked"]
            failed += rows[name]["failed"]
            examples += rows[name]["counterexamples"][:1]
    return checked, failed, examples


def _property_verdict(capsys, reports, number, title, *names):
    checked, failed, examples = _tally(reports, *names)
    detail = f"{checked - failed}/{checked} checks exact"
    if examples:
        detail += f"; first counterexample {json.dumps(examples[0], sort_keys=True)}"
    _verdict(capsys, number, title, checked > 0 and failed == 0, detail)


def test_criterion_01_dirac_embedding(reports, capsys):
    _property_verdict(capsys, reports, 1, "Dirac embedding cost_p = rho^p", "dirac_embedding")


def test_criterion_02_oracle_equivalence(reports, capsys):
    _property_verdict(capsys, reports, 2, "solver equals brute-force oracle", "oracle_agreement")


def test_criterion_03_interpolation_membership(reports, capsys):
    _property_verdict(capsys, reports, 3, "interpolation lies in B_s for s in {1/4,1/2,3/4}",
                      "interpolation_membership")


def test_criterion_04_neighbouring_distance(reports, capsys):
    checked, failed, _ = _tally(reports, "neighbouring_distance", "certificate_soundness")
    d = shortest_path_matrix(FIXTURES["P3"])
    mu, nu = m(v1="1/2", v0="1/2"), m(v1=1)
    cert = check_neighbouring(mu, nu, d)
    example = cert is not None and cert.alpha == F(1, 2) and all(
        solve_ot(mu, nu, d, p).cost_p == F(1, 2) for p in EXPONENTS)
    _verdict(capsys, 4, "certified pairs have cost_p = alpha",
             checked > 0 and failed == 0 and example,
             f"{checked - failed}/{checked} sampled; P3 alpha=1/2 example for p=1,2,3: {example}")


def test_criterion_05_witnesses(reports, capsys):
    checked, failed, _ = _tally(reports, "witness_completeness")
    half = F(1, 2)

    d4 = shortest_path_matrix(FIXTURES["P4"])
    mu, nu = m(v0="1/2", v2="1/2"), m(v1="1/2", v3="1/2")
    expected_p4 = m(v0="3/8", v1="3/8", v2="1/8", v3="1/8")
    xi = bs_witness(mu, nu, d4, 1)
    budgets_p4 = (solve_ot(mu, expected_p4, d4, 1).cost_p, solve_ot(expected_p4, nu, d4, 1).cost_p)
    p4_ok = xi == expected_p4 and budgets_p4 == (half, half)

    d3 = shortest_path_matrix(FIXTURES["P3"])
    mu, nu = m(v1="3/4", v0="1/4"), m(v1="3/4", v2="1/4")
    expected_p3 = m(v0="1/16", v1="7/8", v2="1/16")
    xi3 = bs_witness(mu, nu, d3, 1)
    budgets_p3 = (solve_ot(mu, xi3, d3, 1).cost_p, solve_ot(xi3, nu, d3, 1).cost_p)
    p3_ok = xi3 == expected_p3 and xi3 != interpolate(mu, nu, half) and budgets_p3 == (F(1, 4), F(1, 4))

    detail = (f"{checked - failed}/{checked} sampled witnesses verified; "
              f"P3 path example {'reproduced' if p3_ok else 'NOT reproduced'}; "
              f"P4 example {'reproduced' if p4_ok else 'NOT reproduced'} "
              f"(produced {xi}, stated member has costs {budgets_p4[0]}, {budgets_p4[1]} "
              f"against budgets 1/2, 1/2)")
    _verdict(capsys, 5, "bs_witness gives verified non-midpoint members of B_1/2",
             checked > 0 and failed == 0 and p3_ok and p4_ok, detail)


def test_criterion_06_neighbouring_preservation(reports, capsys):
    _property_verdict(capsys, reports, 6, "automorphisms preserve alpha-neighbouring",
                      "neighbouring_preservation")


def test_criterion_07_teleport(reports, capsys):
    _property_verdict(capsys, reports, 7, "teleport endpoints, round trip and curve certificates",
                      "teleport_frame", "teleport_round_trip", "teleport_neighbouring")


def test_criterion_08_genericity(reports, capsys):
    checked, failed, examples = _tally(reports, "genericity")
    per_run = min(row["genericity"]["checked"] for row in reports.values())
    detail = f"{checked - failed}/{checked} runs sound, {per_run} per fixture and exponent"
    if examples:
        detail += f"; first failure {json.dumps(examples[0], sort_keys=True)}"
    _verdict(capsys, 8, "genericize gives distinct, sum-free weights with certified bound below epsilon^p",
             failed == 0 and per_run >= GENERICITY_RUNS, detail)


GROUPS = {
    "trivial": trivial_group(),
    "Z2": cyclic_group(2),
    "Z3": cyclic_group(3),
    "Z2xZ2": direct_product(cyclic_group(2), cyclic_group(2)),
    "S3": symmetric_group(3),
    "Z6": cyclic_group(6),
}


@pytest.fixture(scope="module")
def prescribed():
    out = {}
    for name, h in GROUPS.items():
        start = time.perf_counter()
        rep = prescribed_isometry_space(h, 1, seed=SEED)
        out[name] = (rep, time.perf_counter() - start)
    return out


def test_criterion_09_isometries_equal_automorphisms(prescribed, capsys):
    results = {name: isometries_equal_automorphisms(g) for name, g in FIXTURES.items()}
    results.update({f"frucht({name})": rep.isometries_equal_automorphisms
                    for name, (rep, _) in prescribed.items()})
    results["frucht(Z3, all generators)"] = isometries_equal_automorphisms(
        frucht_graph(GROUPS["Z3"]))
    bad = [name for name, ok in results.items() if not ok]
    _verdict(capsys, 9, "Isom(X, rho) = Aut(G)", not bad,
             f"{len(results) - len(bad)}/{len(results)} graphs agree" + (f"; differ: {bad}" if bad else ""))


def test_criterion_10_prescribed_isometry_group(prescribed, capsys):
    parts, ok = [], True
    for name, (rep, seconds) in prescribed.items():
        good = rep.passed and rep.aut_order == GROUPS[name].order and seconds < GROUP_BUDGET_S
        ok &= good
        parts.append(f"{name}: |Aut|={rep.aut_order} iso={'yes' if rep.isomorphism else 'no'} "
                     f"{seconds:.2f}s")
    _verdict(capsys, 10, "Frucht graphs realize the prescribed group", ok, "; ".join(parts))


def test_criterion_11_determinism(tmp_path, capsys):
    graph = tmp_path / "p4.json"
    graph.write_text(json.dumps(graph_to_json(FIXTURES["P4"])))
    report = tmp_path / "report.json"
    argv = ["suite", "--graph", str(graph), "--p", "1", "--seed", str(SEED),
            "--samples", str(SAMPLES), "--json", str(report)]
    runs, codes = [], []
    for _ in range(2):
        codes.append(main(argv))
        runs.append(report.read_bytes())
    capsys.readouterr()
    ok = runs[0] == runs[1] and codes == [0, 0]
    _verdict(capsys, 11, "identical suite invocations give identical report bytes", ok,
             f"exit codes {codes}, {len(runs[0])} bytes, identical={runs[0] == runs[1]}")


def test_runtime_budget(reports, capsys):
    seconds = _elapsed["suite"]
    _verdict(capsys, "runtime budget", "property suites within the one-minute budget", seconds < TOTAL_BUDGET_S,
             f"{len(reports)} (graph, p) suites in {seconds:.1f}s")
