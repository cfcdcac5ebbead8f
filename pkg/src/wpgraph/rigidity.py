"""Constructive pieces of the rigidity argument and the property suite.

* teleport frames and curves: sliding the mass of one edge from one endpoint
  to the other, which keeps every point of the curve neighbouring the start;
* genericize: a nearby measure with the same support whose weights are
  pairwise distinct and never the sum of two others, with an explicit
  coupling bounding how far it moved;
* verify_pushforward_isometry and run_rigidity_suite.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from itertools import combinations
from typing import Callable, Sequence

from ._version import __version__
from .automorphisms import compose, enumerate_automorphisms, is_automorphism
from .errors import (
    BadParameterError,
    EpsilonTooSmallError,
    GenericityExhaustedError,
    IncompatibleMeasureError,
    NotAdjacentError,
    NotAutomorphismError,
    WPGraphError,
    ZeroContestedMassError,
)
from .graph import Graph, shortest_path_matrix
from .measure import Measure, check_on_graph, dirac, interpolate, pushforward, random_measure
from .neighbouring import BsQuery, bs_membership, bs_witness, check_neighbouring
from .transport import (
    Coupling,
    check_exponent,
    coupling_cost,
    oracle_ot,
    solve_ot,
    validate_coupling,
    ORACLE_MAX_CELLS,
)

RETRY_CAP = 1000
PERTURBATION_GRID = 1000
INTERPOLATION_POINTS = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))
CURVE_SAMPLES = 8
COUNTEREXAMPLE_LIMIT = 5
VERSION = __version__


# ---------------------------------------------------------------------------
# teleport curve


@dataclass(frozen=True)
class TeleportFrame:
    """mu_star holds all contested mass at ``u``, mu_low all of it at ``w``."""

    mu_star: Measure
    mu_low: Measure
    u: int
    w: int
    c: Fraction


def teleport_extremes(mu: Measure, u: int, w: int, d) -> TeleportFrame:
    check_on_graph(mu, d.shape[0])
    if d[u, w] != 1:
        raise NotAdjacentError(f"vertices {u} and {w} are at distance {d[u, w]}")
    c = mu[u] + mu[w]
    if c == 0:
        raise ZeroContestedMassError(f"no mass on the edge ({u}, {w})")
    mu_star = mu.plus((w, -mu[w]), (u, mu[w]))
    mu_low = mu.plus((u, -mu[u]), (w, mu[u]))
    return TeleportFrame(mu_star, mu_low, u, w, c)


def teleport_curve(frame: TeleportFrame, t) -> Measure:
    """gamma(t) = mu_star + t*delta_w - t*delta_u for 0 <= t <= c."""
    t = Fraction(t)
    if not 0 <= t <= frame.c:
        raise BadParameterError(f"t = {t} outside [0, {frame.c}]")
    return frame.mu_star.plus((frame.w, t), (frame.u, -t))


@dataclass
class CurveProfile:
    extremes_neighbouring: bool | None  # None when c > 1 and the relation is undefined
    entries: list = field(default_factory=list)  # (t, status, alpha)

    @property
    def failures(self) -> list:
        return [e for e in self.entries if e[1] == "failed"]


def curve_neighbouring_profile(frame: TeleportFrame, mu: Measure, samples: Sequence, d
                               ) -> CurveProfile:
    """Check gamma(t) is |t - mu(w)|-neighbouring to mu at each sampled t."""
    if mu[frame.u] + mu[frame.w] != frame.c or teleport_curve(frame, mu[frame.w]) != mu:
        raise IncompatibleMeasureError("the teleport curve does not pass through mu")
    extremes = None
    if frame.c <= 1:
        cert = check_neighbouring(frame.mu_star, frame.mu_low, d)
        extremes = cert is not None and cert.alpha == frame.c
    profile = CurveProfile(extremes)
    for t in samples:
        t = Fraction(t)
        gap = abs(t - mu[frame.w])
        if gap == 0 or gap > 1:
            profile.entries.append((t, "skipped", None))
            continue
        cert = check_neighbouring(teleport_curve(frame, t), mu, d)
        ok = (cert is not None and cert.alpha == gap
              and {cert.u, cert.v} == {frame.u, frame.w})
        profile.entries.append((t, "certified" if ok else "failed", gap))
    return profile


def curve_samples(c: Fraction, k: int = CURVE_SAMPLES) -> list[Fraction]:
    """``k`` evenly spaced parameters covering [0, c], endpoints included."""
    return [c * i / (k - 1) for i in range(k)]


# ---------------------------------------------------------------------------
# genericity


def satisfies_distinct(mu: Measure) -> bool:
    values = [w for _, w in mu.items()]
    return len(set(values)) == len(values)


def satisfies_no_sum(mu: Measure) -> bool:
    # weights are positive, so a sum of two never equals one of its summands
    values = [w for _, w in mu.items()]
    present = set(values)
    return not any(a + b in present for a, b in combinations(values, 2))


@dataclass
class GenericityReport:
    source: Measure
    output: Measure
    K: int
    epsilon: Fraction
    epsilon_used: Fraction
    half_width: Fraction
    distinct: bool
    no_sum: bool
    coupling: Coupling
    bound: Fraction
    retries: int

    @property
    def ok(self) -> bool:
        return (self.distinct and self.no_sum and self.output.support == self.source.support
                and validate_coupling(self.coupling))


def shared_mass_coupling(nu: Measure, nu2: Measure) -> Coupling:
    """Coupling that keeps min(nu, nu2) in place and spreads the rest as a product.

    The excess parts zeta = nu - m and zeta' = nu2 - m have disjoint supports and
    equal total 1 - M; the off-diagonal block is zeta x zeta' / (1 - M).
    """
    keys = sorted(set(nu.support) | set(nu2.support))
    shared = {x: min(nu[x], nu2[x]) for x in keys}
    excess = 1 - sum(shared.values())
    entries = {(x, x): m for x, m in shared.items() if m}
    if excess:
        zeta = {x: nu[x] - shared[x] for x in keys}
        zeta2 = {x: nu2[x] - shared[x] for x in keys}
        for x in keys:
            for y in keys:
                if x != y and zeta[x] and zeta2[y]:
                    entries[(x, y)] = zeta[x] * zeta2[y] / excess
    return Coupling(entries, nu, nu2)


def genericize(nu: Measure, epsilon, seed: int, d, p=1) -> GenericityReport:
    """Perturb ``nu`` on its own support until its weights are generic.

    The perturbation lives on the hyperplane of unit total mass inside a cube
    of half-width eps~**p / (K**p L**2) around the weights, where K is the
    largest distance within the support and L its size; eps~ <= epsilon is
    halved until every perturbed weight stays positive. Candidates are drawn
    from a seeded rational grid and rejected while a coincidence remains.
    """
    p = check_exponent(p)
    eps = Fraction(epsilon)
    if eps <= 0:
        raise EpsilonTooSmallError(f"epsilon must be positive, got {eps}")
    check_on_graph(nu, d.shape[0])
    support = nu.support
    L = len(support)
    K = max((int(d[x, y]) for x in support for y in support), default=0)
    if L == 1 or (satisfies_distinct(nu) and satisfies_no_sum(nu)):
        coupling = shared_mass_coupling(nu, nu)
        return GenericityReport(nu, nu, K, eps, eps, Fraction(0), True, True, coupling,
                                Fraction(0), 0)

    lightest = min(w for _, w in nu.items())
    eps_used = eps
    for _ in range(256):
        half_width = eps_used**p / (K**p * L * L)
        if half_width < lightest:
            break
        eps_used /= 2
    else:
        raise EpsilonTooSmallError("could not shrink epsilon below the positivity margin")

    rng = random.Random(seed)
    step = half_width / (L * PERTURBATION_GRID)
    for attempt in range(RETRY_CAP):
        shifts = [rng.randint(-PERTURBATION_GRID, PERTURBATION_GRID) * step for _ in range(L - 1)]
        shifts.append(-sum(shifts))
        out = Measure({x: nu[x] + s for x, s in zip(support, shifts)})
        if satisfies_distinct(out) and satisfies_no_sum(out):
            break
    else:
        raise GenericityExhaustedError(f"no generic perturbation after {RETRY_CAP} draws")

    coupling = shared_mass_coupling(nu, out)
    bound = coupling_cost(coupling, d, p)
    return GenericityReport(nu, out, K, eps, eps_used, half_width, True, True, coupling,
                            bound, attempt)


def check_genericity_report(rep: GenericityReport, d, p) -> list[str]:
    """Every reason ``rep`` fails its contract; empty when it is sound."""
    problems = []
    if not (satisfies_distinct(rep.output) and satisfies_no_sum(rep.output)):
        problems.append("output not generic")
    if rep.output.support != rep.source.support:
        problems.append("support changed")
    if rep.output.total() != 1:
        problems.append("mass not one")
    if any(abs(rep.output[x] - rep.source[x]) > rep.half_width for x in rep.source.support):
        problems.append("coordinate left the cube")
    if not validate_coupling(rep.coupling) or rep.coupling.source != rep.source \
            or rep.coupling.target != rep.output:
        problems.append("shared-mass coupling invalid")
    if any(w > rep.half_width for (x, y), w in rep.coupling.off_diagonal()):
        problems.append("off-diagonal coupling entry exceeds the cube half-width")
    if coupling_cost(rep.coupling, d, p) != rep.bound:
        problems.append("bound is not the coupling cost")
    if rep.output != rep.source and not rep.bound < rep.epsilon_used**p:
        problems.append("bound not below eps_used**p")
    if rep.epsilon_used > rep.epsilon:
        problems.append("eps_used exceeds epsilon")
    if solve_ot(rep.source, rep.output, d, p).cost_p > rep.bound:
        problems.append("optimal cost exceeds the coupling bound")
    return problems


# ---------------------------------------------------------------------------
# push-forward isometries


@dataclass
class IsometryReport:
    checked: int
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def verify_pushforward_isometry(g: Graph, psi: Sequence[int], pairs, p=1, *, d=None
                                ) -> IsometryReport:
    """Check cost_p(psi_# mu, psi_# nu) == cost_p(mu, nu) on every pair."""
    if not is_automorphism(g, psi):
        raise NotAutomorphismError(f"{tuple(psi)} is not an automorphism of the graph")
    if d is None:
        d = shortest_path_matrix(g)
    rep = IsometryReport(0)
    for mu, nu in pairs:
        before = solve_ot(mu, nu, d, p).cost_p
        after = solve_ot(pushforward(psi, mu, g.n), pushforward(psi, nu, g.n), d, p).cost_p
        rep.checked += 1
        if before != after:
            rep.failures.append((tuple(psi), mu, nu, before, after))
    return rep


# ---------------------------------------------------------------------------
# property suite


class _Tally:
    """Ordered per-property pass/fail accumulator with a few counterexamples."""

    def __init__(self, names: Sequence[str]):
        self.rows = {name: {"checked": 0, "failed": 0, "counterexamples": []} for name in names}

    def record(self, name: str, ok: bool, detail=None) -> None:
        row = self.rows[name]
        row["checked"] += 1
        if not ok:
            row["failed"] += 1
            if len(row["counterexamples"]) < COUNTEREXAMPLE_LIMIT:
                row["counterexamples"].append(detail)

    def as_list(self) -> list[dict]:
        return [
            {"name": name, "passed": row["failed"] == 0, **row}
            for name, row in self.rows.items()
        ]


PROPERTIES = (
    "dirac_embedding",
    "plan_valid",
    "oracle_agreement",
    "symmetry",
    "zero_iff_equal",
    "triangle_inequality",
    "lower_bound",
    "interpolation_membership",
    "pushforward_isometry",
    "pushforward_homomorphism",
    "certificate_soundness",
    "neighbouring_distance",
    "witness_absence",
    "witness_completeness",
    "neighbouring_preservation",
    "teleport_frame",
    "teleport_round_trip",
    "teleport_neighbouring",
    "extremes_neighbouring",
    "genericity",
)


def _fmt(g: Graph, mu) -> dict:
    return {g.vertices[x]: str(w) for x, w in mu.items()}


def _root_leq(a: Fraction, b: Fraction, c: Fraction, p: int) -> bool:
    """a**(1/p) <= b**(1/p) + c**(1/p), exactly when a sufficient test applies."""
    if p == 1 or a <= b + c:
        return a <= b + c or p != 1 and _root_leq_decimal(a, b, c, p)
    return _root_leq_decimal(a, b, c, p)


def _root_leq_decimal(a, b, c, p) -> bool:
    with localcontext() as ctx:
        ctx.prec = 60

        def root(x):
            if x == 0:
                return Decimal(0)
            return (Decimal(x.numerator) / Decimal(x.denominator)) ** (Decimal(1) / Decimal(p))

        return root(a) <= root(b) + root(c) + Decimal("1e-40")


def neighbouring_pair(rng: random.Random, mu: Measure, g: Graph) -> tuple[Measure, Measure]:
    """Move a random share of the mass at a support vertex across one edge."""
    u = rng.choice(mu.support)
    v = rng.choice(g.adjacency[u]) if g.adjacency[u] else u
    share = Fraction(rng.randint(1, 8), 8)
    alpha = mu[u] * share
    return mu, mu.plus((u, -alpha), (v, alpha))


def local_pair(rng: random.Random, mu: Measure, g: Graph, d) -> tuple[Measure, Measure]:
    """Move shares of mass from up to two support vertices to vertices 1 or 2 steps away."""
    nu = mu
    for _ in range(rng.randint(1, 2)):
        x = rng.choice(nu.support)
        near = [y for y in range(g.n) if 1 <= d[x, y] <= 2]
        if not near:
            continue
        y = rng.choice(near)
        amount = nu[x] * Fraction(rng.randint(1, 4), 4)
        nu = nu.plus((x, -amount), (y, amount))
    return mu, nu


def run_rigidity_suite(g: Graph, p=1, seed: int = 0, n_samples: int = 200, *,
                       solver: Callable | None = None, genericity_runs: int = 50,
                       epsilon=Fraction(1, 10)) -> dict:
    """Seeded property checks over random rational measures on ``g``.

    ``solver`` replaces :func:`solve_ot` on the solver-facing checks (for fault
    injection). The returned report is plain JSON data and depends only on the
    arguments.
    """
    p = check_exponent(p)
    solve = solver or solve_ot
    d = shortest_path_matrix(g)
    auts = enumerate_automorphisms(g)
    rng = random.Random(seed)
    tally = _Tally(PROPERTIES)
    mid = Fraction(1, 2)

    def cost(a, b):
        return solve(a, b, d, p).cost_p

    for x in range(g.n):
        for y in range(g.n):
            got = cost(dirac(x), dirac(y))
            tally.record("dirac_embedding", got == int(d[x, y]) ** p,
                         {"x": g.vertices[x], "y": g.vertices[y], "cost_p": str(got)})

    samples = [random_measure(rng, g.n) for _ in range(n_samples + 1)]
    for k in range(n_samples):
        mu, other, third = samples[k], random_measure(rng, g.n), samples[k + 1]
        pairs = [(mu, other), local_pair(rng, mu, g, d), neighbouring_pair(rng, mu, g)]
        for a, b in pairs:
            detail = {"mu": _fmt(g, a), "nu": _fmt(g, b)}
            res = solve(a, b, d, p)
            c_ab = res.cost_p
            tally.record("plan_valid", res.plan.source == a and res.plan.target == b
                         and validate_coupling(res.plan) and coupling_cost(res.plan, d, p) == c_ab,
                         detail)
            if len(a) * len(b) <= ORACLE_MAX_CELLS:
                ref = oracle_ot(a, b, d, p)
                tally.record("oracle_agreement", c_ab == ref,
                             {**detail, "solver": str(c_ab), "oracle": str(ref)})
            c_ba = cost(b, a)
            tally.record("symmetry", c_ab == c_ba, detail)
            tally.record("zero_iff_equal", (c_ab == 0) == (a == b) and cost(a, a) == 0, detail)
            lower = max(abs(a[x] - b[x]) for x in set(a.support) | set(b.support))
            tally.record("lower_bound", lower <= c_ab, detail)
            for s in INTERPOLATION_POINTS:
                if a != b:
                    query = BsQuery.build(a, b, s, d, p, cost_p=c_ab)
                    tally.record("interpolation_membership",
                                 query.contains(interpolate(a, b, s), d, p),
                                 {**detail, "s": str(s)})
            cert = check_neighbouring(a, b, d)
            for psi in auts:
                pa, pb = pushforward(psi, a), pushforward(psi, b)
                tally.record("pushforward_isometry", cost(pa, pb) == c_ab,
                             {**detail, "psi": list(psi)})
                pcert = check_neighbouring(pa, pb, d)
                same = (cert is None) == (pcert is None) and (
                    cert is None or cert.alpha == pcert.alpha)
                tally.record("neighbouring_preservation", same, {**detail, "psi": list(psi)})
            if cert is not None:
                tally.record("certificate_soundness", cert.reconstruct() == (a, b), detail)
                tally.record("neighbouring_distance", c_ab == cert.alpha,
                             {**detail, "alpha": str(cert.alpha)})
                tally.record("witness_absence", bs_witness(a, b, d, p) is None, detail)
            elif 0 < c_ab <= 1:
                try:
                    xi = bs_witness(a, b, d, p)
                    ok = (xi is not None and xi != interpolate(a, b, mid)
                          and bs_membership(xi, a, b, mid, d, p))
                except WPGraphError as exc:
                    ok, detail = False, {**detail, "error": str(exc)}
                tally.record("witness_completeness", ok, detail)
        c_mo, c_ot, c_mt = cost(mu, other), cost(other, third), cost(mu, third)
        tally.record("triangle_inequality", _root_leq(c_mt, c_mo, c_ot, p),
                     {"mu": _fmt(g, mu), "nu": _fmt(g, other), "xi": _fmt(g, third)})
        if len(auts) > 1:
            psi, chi = rng.choice(auts), rng.choice(auts)
            tally.record("pushforward_homomorphism",
                         pushforward(compose(psi, chi), mu) == pushforward(psi, pushforward(chi, mu)),
                         {"mu": _fmt(g, mu), "psi": list(psi), "chi": list(chi)})
        _teleport_checks(tally, rng, mu, g, d)

    for run in range(min(genericity_runs, n_samples)):
        nu = samples[run]
        rep = genericize(nu, epsilon, seed * 1_000_003 + run, d, p)
        problems = check_genericity_report(rep, d, p)
        problems += [] if rep.bound < Fraction(epsilon) ** p else ["bound not below epsilon**p"]
        tally.record("genericity", not problems, {"nu": _fmt(g, nu), "problems": problems})

    props = tally.as_list()
    return {
        "graph": {"vertices": list(g.vertices),
                  "edges": [[g.vertices[i], g.vertices[j]] for i, j in g.sorted_edges()]},
        "p": p,
        "seed": seed,
        "samples": n_samples,
        "automorphisms": len(auts),
        "properties": props,
        "passed": all(row["passed"] for row in props),
        "version": VERSION,
    }


def _teleport_checks(tally: _Tally, rng: random.Random, mu: Measure, g: Graph, d) -> None:
    u = rng.choice(mu.support)
    if not g.adjacency[u]:
        return
    w = rng.choice(g.adjacency[u])
    if rng.random() < 0.5:
        u, w = w, u
    frame = teleport_extremes(mu, u, w, d)
    detail = {"mu": _fmt(g, mu), "u": g.vertices[u], "w": g.vertices[w]}
    star, low = frame.mu_star, frame.mu_low
    tally.record("teleport_frame",
                 frame.c == mu[u] + mu[w] and star[w] == 0 == low[u] and star[u] == frame.c == low[w]
                 and teleport_curve(frame, 0) == star and teleport_curve(frame, frame.c) == low,
                 detail)
    tally.record("teleport_round_trip", teleport_curve(frame, mu[w]) == mu, detail)
    profile = curve_neighbouring_profile(frame, mu, curve_samples(frame.c), d)
    for t, status, _ in profile.entries:
        if status != "skipped":
            tally.record("teleport_neighbouring", status == "certified", {**detail, "t": str(t)})
    if profile.extremes_neighbouring is not None:
        tally.record("extremes_neighbouring", profile.extremes_neighbouring, detail)
