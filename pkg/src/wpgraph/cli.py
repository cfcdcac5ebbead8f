"""Command-line front end.

Every subcommand prints a short human-readable summary and, with
``--json PATH``, writes a RunReport: the command echo, sha256 digests of the
input files, results, per-check pass/fail entries, seed and version. Reports
are serialized with sorted keys so identical invocations give identical bytes.

Exit codes: 0 success, 1 a check failed, 2 bad input or usage.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path

from ._version import __version__
from .automorphisms import enumerate_automorphisms, isometries_equal_automorphisms
from .errors import WPGraphError
from .graph import Graph, shortest_path_matrix
from .groups import FiniteGroup, frucht_graph, prescribed_isometry_space
from .neighbouring import check_neighbouring, classify_pair
from .rigidity import (
    curve_neighbouring_profile,
    check_genericity_report,
    genericize,
    run_rigidity_suite,
    teleport_curve,
    teleport_extremes,
)
from .serialize import (
    format_rational,
    graph_from_json,
    graph_to_json,
    group_from_json,
    measure_from_json,
    measure_to_json,
    parse_rational,
    plan_to_json,
)
from .transport import marginal_violation, solve_ot

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    """Bad file, flag value or content; maps to exit code 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_help(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# input helpers


class _Inputs:
    """Loads JSON files and remembers their digests for the report."""

    def __init__(self):
        self.digests: dict[str, str] = {}

    def load(self, role: str, path: str):
        try:
            raw = Path(path).read_bytes()
        except OSError as exc:
            raise InputError(f"cannot read {role} file {path}: {exc.strerror}") from None
        self.digests[role] = hashlib.sha256(raw).hexdigest()
        try:
            return json.loads(raw)
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise InputError(f"{role} file {path} is not valid JSON: {exc}") from None

    def graph(self, path: str) -> Graph:
        return graph_from_json(self.load("graph", path))

    def measure(self, role: str, path: str, g: Graph):
        return measure_from_json(self.load(role, path), g)

    def group(self, path: str) -> FiniteGroup:
        return group_from_json(self.load("group", path))


def _exponent(args, *, allow_float: bool = False):
    text = args.p
    if args.float_mode:
        if not allow_float:
            raise InputError(f"--float-mode is not supported by '{args.command}'")
        try:
            value = float(text)
        except ValueError:
            raise InputError(f"--p must be a number, got {text!r}") from None
        if not value >= 1:
            raise InputError(f"--p must be >= 1, got {text}")
        return value
    try:
        value = int(text)
    except ValueError:
        raise InputError(f"--p must be an integer >= 1 without --float-mode, got {text!r}") from None
    if value < 1:
        raise InputError(f"--p must be >= 1, got {value}")
    return value


def _num(x):
    return format_rational(x) if isinstance(x, (int, Fraction)) else repr(float(x))


def _check(name: str, passed: bool, **detail) -> dict:
    return {"name": name, "passed": bool(passed), **detail}


def _write_json(path: str, obj) -> None:
    Path(path).write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n")


# ---------------------------------------------------------------------------
# subcommands; each returns (summary lines, results, checks)


def cmd_distance(args, inp: _Inputs):
    g = inp.graph(args.graph)
    mu, nu = inp.measure("mu", args.mu, g), inp.measure("nu", args.nu, g)
    p = _exponent(args, allow_float=True)
    res = solve_ot(mu, nu, shortest_path_matrix(g), p, float_mode=args.float_mode)
    plan = plan_to_json(res.plan, g, res.cost_p) if not args.float_mode else {
        "entries": [[g.vertices[x], g.vertices[y], format_rational(w)]
                    for (x, y), w in res.plan.entries.items()],
        "cost_p": _num(res.cost_p),
    }
    if args.plan:
        _write_json(args.plan, plan)
    problem = marginal_violation(res.plan)
    lines = [f"cost_p = {_num(res.cost_p)}", f"distance = {res.distance}"]
    results = {"cost_p": _num(res.cost_p), "distance": str(res.distance), "p": _num(p),
               "plan": plan}
    return lines, results, [_check("plan_marginals", problem is None, detail=problem)]


def _certificate_json(cert, g: Graph):
    if cert is None:
        return None
    return {"u": g.vertices[cert.u], "v": g.vertices[cert.v], "alpha": format_rational(cert.alpha),
            "eta": measure_to_json(cert.eta, g)["mass"]}


def cmd_neighbouring(args, inp: _Inputs):
    g = inp.graph(args.graph)
    mu, nu = inp.measure("mu", args.mu, g), inp.measure("nu", args.nu, g)
    p = _exponent(args)
    d = shortest_path_matrix(g)
    cert = check_neighbouring(mu, nu, d)
    checks = []
    if cert is None:
        lines = ["none"]
    else:
        cost = solve_ot(mu, nu, d, p).cost_p
        lines = [f"certificate: u={g.vertices[cert.u]} v={g.vertices[cert.v]} "
                 f"alpha={format_rational(cert.alpha)}",
                 f"cost_p = {format_rational(cost)}"]
        checks.append(_check("reconstructs_pair", cert.reconstruct() == (mu, nu)))
        checks.append(_check("cost_p_equals_alpha", cost == cert.alpha, cost_p=format_rational(cost)))
    return lines, {"certificate": _certificate_json(cert, g)}, checks


def cmd_bs_witness(args, inp: _Inputs):
    g = inp.graph(args.graph)
    mu, nu = inp.measure("mu", args.mu, g), inp.measure("nu", args.nu, g)
    p = _exponent(args)
    if parse_rational(args.s) != Fraction(1, 2):
        raise InputError("witnesses are constructed for s = 1/2 only")
    rep = classify_pair(mu, nu, shortest_path_matrix(g), p)
    xi = measure_to_json(rep.witness, g) if rep.witness is not None else None
    if args.out and xi is not None:
        _write_json(args.out, xi)
    lines = [f"cost_p = {format_rational(rep.cost_p)}", f"verdict: {rep.verdict}"]
    if xi is not None:
        lines.append(f"witness ({rep.witness_kind}): " + json.dumps(xi["mass"], sort_keys=True))
    else:
        lines.append("witness: none")
    results = {"cost_p": format_rational(rep.cost_p), "verdict": rep.verdict,
               "certificate": _certificate_json(rep.certificate, g), "witness": xi,
               "witness_kind": rep.witness_kind}
    return lines, results, [_check("classification_consistent", rep.consistent)]


def cmd_teleport(args, inp: _Inputs):
    g = inp.graph(args.graph)
    mu = inp.measure("mu", args.mu, g)
    u, w = g.index(args.u), g.index(args.w)
    d = shortest_path_matrix(g)
    frame = teleport_extremes(mu, u, w, d)
    gamma = teleport_curve(frame, parse_rational(args.t))
    profile = curve_neighbouring_profile(frame, mu, [parse_rational(args.t)], d)
    t, status, alpha = profile.entries[0]
    lines = [f"c = {format_rational(frame.c)}",
             "mu_star = " + json.dumps(measure_to_json(frame.mu_star, g)["mass"], sort_keys=True),
             "mu_low = " + json.dumps(measure_to_json(frame.mu_low, g)["mass"], sort_keys=True),
             f"gamma({format_rational(t)}) = "
             + json.dumps(measure_to_json(gamma, g)["mass"], sort_keys=True),
             f"neighbouring to mu: {status}" + (f" (alpha = {format_rational(alpha)})" if alpha else "")]
    checks = [_check("gamma_neighbouring", status != "failed", status=status)]
    if profile.extremes_neighbouring is not None:
        checks.append(_check("extremes_neighbouring", profile.extremes_neighbouring))
    results = {"c": format_rational(frame.c), "mu_star": measure_to_json(frame.mu_star, g),
               "mu_low": measure_to_json(frame.mu_low, g), "t": format_rational(t),
               "gamma": measure_to_json(gamma, g), "status": status}
    return lines, results, checks


def cmd_genericize(args, inp: _Inputs):
    g = inp.graph(args.graph)
    nu = inp.measure("nu", args.nu, g)
    p = _exponent(args)
    eps = parse_rational(args.epsilon)
    d = shortest_path_matrix(g)
    rep = genericize(nu, eps, args.seed, d, p)
    out = measure_to_json(rep.output, g)
    if args.out:
        _write_json(args.out, out)
    problems = check_genericity_report(rep, d, p)
    below = rep.bound < eps**p
    lines = ["nu' = " + json.dumps(out["mass"], sort_keys=True),
             f"epsilon_used = {format_rational(rep.epsilon_used)}, K = {rep.K}",
             f"cost bound = {format_rational(rep.bound)} < epsilon^p: {below}"]
    results = {"output": out, "K": rep.K, "epsilon_used": format_rational(rep.epsilon_used),
               "half_width": format_rational(rep.half_width), "bound": format_rational(rep.bound),
               "retries": rep.retries}
    checks = [_check("distinct_weights", rep.distinct), _check("no_pairwise_sums", rep.no_sum),
              _check("report_sound", not problems, problems=problems),
              _check("bound_below_epsilon_p", below)]
    return lines, results, checks


def cmd_suite(args, inp: _Inputs):
    g = inp.graph(args.graph)
    p = _exponent(args)
    if args.samples < 1:
        raise InputError("--samples must be positive")
    report = run_rigidity_suite(g, p, args.seed, args.samples)
    lines = [f"{'PASS' if row['passed'] else 'FAIL'} {row['name']} "
             f"({row['checked'] - row['failed']}/{row['checked']})"
             for row in report["properties"]]
    checks = [_check(row["name"], row["passed"], checked=row["checked"], failed=row["failed"],
                     counterexamples=row["counterexamples"]) for row in report["properties"]]
    results = {k: v for k, v in report.items() if k != "properties"}
    return lines, results, checks


def cmd_automorphisms(args, inp: _Inputs):
    g = inp.graph(args.graph)
    auts = enumerate_automorphisms(g)
    same = isometries_equal_automorphisms(g)
    perms = [[g.vertices[i] for i in psi] for psi in auts]
    lines = [f"|Aut| = {len(auts)}", f"Isom = Aut: {same}"]
    lines += [" ".join(f"{g.vertices[i]}->{img}" for i, img in enumerate(row)) for row in perms[:20]]
    if len(perms) > 20:
        lines.append(f"... {len(perms) - 20} more")
    results = {"order": len(auts), "automorphisms": perms}
    return lines, results, [_check("isometries_equal_automorphisms", same)]


def _generators(text):
    if text is None:
        return None
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise InputError(f"--generators must be comma-separated integers, got {text!r}") from None


def cmd_frucht(args, inp: _Inputs):
    h = inp.group(args.group)
    g = frucht_graph(h, _generators(args.generators))
    if args.out:
        _write_json(args.out, graph_to_json(g))
    order = len(enumerate_automorphisms(g))
    lines = [f"graph: {g.n} vertices, {len(g.edges)} edges",
             f"|Aut| = {order}, |H| = {h.order}"]
    results = {"vertices": g.n, "edges": len(g.edges), "aut_order": order, "group_order": h.order}
    return lines, results, [_check("aut_order_matches", order == h.order)]


def cmd_prescribe(args, inp: _Inputs):
    h = inp.group(args.group)
    p = _exponent(args)
    rep = prescribed_isometry_space(h, p, generators=_generators(args.generators), seed=args.seed)
    lines = [f"graph: {rep.graph.n} vertices, generators {rep.generators}",
             f"|Aut| = {rep.aut_order}, |H| = {rep.group_order}",
             f"Isom = Aut: {rep.isometries_equal_automorphisms}",
             f"isomorphism Aut -> H: {list(rep.isomorphism) if rep.isomorphism else None}",
             f"push-forward isometry checks: {rep.pushforward_checked - len(rep.pushforward_failures)}"
             f"/{rep.pushforward_checked}"]
    results = {"vertices": rep.graph.n, "generators": rep.generators, "aut_order": rep.aut_order,
               "group_order": rep.group_order,
               "isomorphism": list(rep.isomorphism) if rep.isomorphism else None}
    checks = [_check("aut_order_matches", rep.aut_order == rep.group_order),
              _check("isometries_equal_automorphisms", rep.isometries_equal_automorphisms),
              _check("isomorphism_found", rep.isomorphism is not None),
              _check("pushforward_isometry", not rep.pushforward_failures,
                     checked=rep.pushforward_checked)]
    return lines, results, checks


COMMANDS = {
    "distance": cmd_distance,
    "neighbouring": cmd_neighbouring,
    "bs-witness": cmd_bs_witness,
    "teleport": cmd_teleport,
    "genericize": cmd_genericize,
    "suite": cmd_suite,
    "automorphisms": cmd_automorphisms,
    "frucht": cmd_frucht,
    "prescribe": cmd_prescribe,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", default="1", help="exponent: integer >= 1, or real >= 1 with --float-mode")
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--json", metavar="PATH", help="write the full run report here")
    common.add_argument("--float-mode", action="store_true", help="floating point costs (distance only)")

    parser = _Parser(prog="wpgraph", description="Wasserstein spaces over graph metrics.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text, description=help_text)

    s = add("distance", "optimal transport cost between two measures")
    s.add_argument("--graph", required=True)
    s.add_argument("--mu", required=True)
    s.add_argument("--nu", required=True)
    s.add_argument("--plan", help="write the optimal plan JSON here")

    s = add("neighbouring", "decide the alpha-neighbouring relation")
    s.add_argument("--graph", required=True)
    s.add_argument("--mu", required=True)
    s.add_argument("--nu", required=True)

    s = add("bs-witness", "classify a pair and build a B_1/2 witness")
    s.add_argument("--graph", required=True)
    s.add_argument("--mu", required=True)
    s.add_argument("--nu", required=True)
    s.add_argument("--s", default="1/2")
    s.add_argument("--out", help="write the witness measure here")

    s = add("teleport", "teleport frame of an edge and a point on its curve")
    s.add_argument("--graph", required=True)
    s.add_argument("--mu", required=True)
    s.add_argument("--u", required=True)
    s.add_argument("--w", required=True)
    s.add_argument("--t", required=True)

    s = add("genericize", "generic perturbation of a measure")
    s.add_argument("--graph", required=True)
    s.add_argument("--nu", required=True)
    s.add_argument("--epsilon", required=True)
    s.add_argument("--out", help="write the perturbed measure here")

    s = add("suite", "seeded property suite on a graph")
    s.add_argument("--graph", required=True)
    s.add_argument("--samples", type=int, default=200)

    s = add("automorphisms", "automorphism group of a graph")
    s.add_argument("--graph", required=True)

    s = add("frucht", "graph realizing a finite group")
    s.add_argument("--group", required=True)
    s.add_argument("--generators", help="comma-separated element indices")
    s.add_argument("--out", help="write the graph JSON here")

    s = add("prescribe", "certify a Wasserstein space with prescribed isometry group")
    s.add_argument("--group", required=True)
    s.add_argument("--generators", help="comma-separated element indices")
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    inp = _Inputs()
    try:
        lines, results, checks = COMMANDS[args.command](args, inp)
    except (WPGraphError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    for line in lines:
        print(line)
    failed = [c["name"] for c in checks if not c["passed"]]
    if failed:
        print("FAILED: " + ", ".join(failed))
    if args.json:
        report = {"command": argv, "inputs": inp.digests, "results": results, "checks": checks,
                  "seed": args.seed, "version": __version__}
        _write_json(args.json, report)
    return EXIT_FAIL if failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
