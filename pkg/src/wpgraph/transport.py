"""Exact discrete optimal transport on a graph metric.

The solver is successive shortest augmenting paths (Dijkstra with node
potentials) on the bipartite transportation network supp(mu) x supp(nu).
Masses are scaled by the common denominator so the flow runs on integers; the
plan and cost are converted back to ``Fraction`` at the end.

``oracle_ot`` is an independent brute-force check: it enumerates every basis
(spanning tree of the complete bipartite support graph) of the transportation
polytope and takes the cheapest feasible basic solution.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from numbers import Real

from .errors import BadParameterError, GraphMismatchError, TooLargeError
from .measure import Measure, check_on_graph

DEFAULT_DIGITS = 12
FLOAT_TOLERANCE = 1e-9
ORACLE_MAX_CELLS = 16


def check_exponent(p, float_mode: bool = False):
    """Validate ``p``: an integer >= 1, or any real >= 1 in float mode."""
    if isinstance(p, bool):
        raise BadParameterError("exponent must be a number")
    if float_mode:
        if not isinstance(p, Real) or not p >= 1:
            raise BadParameterError(f"exponent {p!r} must be a real number >= 1")
        return float(p)
    if not isinstance(p, int) or p < 1:
        raise BadParameterError(f"exact mode needs an integer exponent >= 1, got {p!r}")
    return p


def _is_exact(p) -> bool:
    return isinstance(p, int)


def ground_cost(d, x: int, y: int, p):
    """rho(x, y) ** p; an ``int`` for integer p, a ``float`` otherwise."""
    r = int(d[x, y])
    return r**p if _is_exact(p) else float(r) ** p


@dataclass(frozen=True)
class Coupling:
    """A transport plan: entries (x, y) -> positive weight, with its declared marginals."""

    entries: dict
    source: Measure
    target: Measure

    def __post_init__(self):
        clean = {(int(x), int(y)): Fraction(w) for (x, y), w in sorted(self.entries.items())}
        object.__setattr__(self, "entries", {k: w for k, w in clean.items() if w != 0})

    def __getitem__(self, xy) -> Fraction:
        return self.entries.get(xy, Fraction(0))

    def off_diagonal(self) -> list[tuple[tuple[int, int], Fraction]]:
        return [(xy, w) for xy, w in self.entries.items() if xy[0] != xy[1]]


def diagonal_coupling(mu: Measure) -> Coupling:
    return Coupling({(x, x): w for x, w in mu.items()}, mu, mu)


def product_coupling(mu: Measure, nu: Measure) -> Coupling:
    return Coupling({(x, y): a * b for x, a in mu.items() for y, b in nu.items()}, mu, nu)


def marginal_violation(pi: Coupling) -> str | None:
    """Describe the first violated marginal condition, or None if pi is a coupling."""
    for w in pi.entries.values():
        if w < 0:
            return "negative entry"
    rows: dict[int, Fraction] = {}
    cols: dict[int, Fraction] = {}
    for (x, y), w in pi.entries.items():
        rows[x] = rows.get(x, Fraction(0)) + w
        cols[y] = cols.get(y, Fraction(0)) + w
    for x in sorted(set(rows) | set(pi.source.support)):
        if rows.get(x, 0) != pi.source[x]:
            return f"row {x} sums to {rows.get(x, 0)}, source has {pi.source[x]}"
    for y in sorted(set(cols) | set(pi.target.support)):
        if cols.get(y, 0) != pi.target[y]:
            return f"column {y} sums to {cols.get(y, 0)}, target has {pi.target[y]}"
    return None


def validate_coupling(pi: Coupling) -> bool:
    return marginal_violation(pi) is None


def coupling_cost(pi: Coupling, d, p):
    """sum rho(x, y)**p * pi(x, y); exact Fraction for integer p."""
    if _is_exact(p):
        return sum((ground_cost(d, x, y, p) * w for (x, y), w in pi.entries.items()), Fraction(0))
    return math.fsum(ground_cost(d, x, y, p) * float(w) for (x, y), w in pi.entries.items())


def render_root(cost, p, digits: int = DEFAULT_DIGITS) -> Decimal:
    """cost ** (1/p) rounded half-even to ``digits`` decimal places."""
    quantum = Decimal(1).scaleb(-digits)
    with localcontext() as ctx:
        ctx.prec = digits + 30
        if cost == 0:
            return Decimal(0).quantize(quantum)
        if isinstance(cost, Fraction):
            value = Decimal(cost.numerator) / Decimal(cost.denominator)
        else:
            value = Decimal(cost)
        if p == 1:
            root = value
        else:
            root = value ** (Decimal(1) / Decimal(p))
        return root.quantize(quantum, rounding=ROUND_HALF_EVEN)


@dataclass(frozen=True)
class TransportResult:
    cost_p: object  # Fraction in exact mode, float otherwise
    plan: Coupling
    p: object
    digits: int = DEFAULT_DIGITS

    @property
    def distance(self) -> Decimal:
        """The p-th root of ``cost_p``, rendered on demand."""
        return render_root(self.cost_p, self.p, self.digits)


def _check_pair(mu: Measure, nu: Measure, d) -> None:
    n = d.shape[0]
    check_on_graph(mu, n, GraphMismatchError)
    check_on_graph(nu, n, GraphMismatchError)


def _scale(mu: Measure, nu: Measure) -> tuple[int, list[int], list[int]]:
    denom = 1
    for w in itertools.chain((w for _, w in mu.items()), (w for _, w in nu.items())):
        denom = denom * w.denominator // math.gcd(denom, w.denominator)
    a = [int(w * denom) for _, w in mu.items()]
    b = [int(w * denom) for _, w in nu.items()]
    return denom, a, b


def _successive_shortest_paths(supply: list[int], demand: list[int], cost) -> list[list[int]]:
    """Min-cost transportation flow with integer supplies; returns flow[i][j]."""
    m, n = len(supply), len(demand)
    src, snk = m + n, m + n + 1
    size = m + n + 2
    total = sum(supply)
    head: list[list[int]] = [[] for _ in range(size)]
    to: list[int] = []
    cap: list[int] = []
    arc_cost: list = []

    def add(u, v, c, w):
        head[u].append(len(to))
        to.append(v)
        cap.append(c)
        arc_cost.append(w)
        head[v].append(len(to))
        to.append(u)
        cap.append(0)
        arc_cost.append(-w)

    for i in range(m):
        add(src, i, supply[i], 0)
    cell_arc = [[0] * n for _ in range(m)]
    for i in range(m):
        for j in range(n):
            cell_arc[i][j] = len(to)
            # total supply is an effectively infinite capacity here
            add(i, m + j, total, cost[i][j])
    for j in range(n):
        add(m + j, snk, demand[j], 0)

    inf = float("inf")
    potential = [0] * size
    remaining = total
    while remaining > 0:
        dist = [inf] * size
        prev = [-1] * size
        done = [False] * size
        dist[src] = 0
        heap = [(0, src)]
        while heap:
            du, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            for e in head[u]:
                v = to[e]
                # finalized nodes stay put; float rounding can make reduced costs
                # slightly negative, and relaxing them would corrupt prev
                if cap[e] > 0 and not done[v]:
                    nd = du + arc_cost[e] + potential[u] - potential[v]
                    if nd < dist[v]:
                        dist[v] = nd
                        prev[v] = e
                        heapq.heappush(heap, (nd, v))
        if not done[snk]:
            raise RuntimeError("transport network disconnected; marginals unbalanced")
        reach = max(dist[v] for v in range(size) if done[v])
        for v in range(size):
            potential[v] += dist[v] if done[v] else reach
        push = remaining
        v = snk
        while v != src:
            e = prev[v]
            push = min(push, cap[e])
            v = to[e ^ 1]
        v = snk
        while v != src:
            e = prev[v]
            cap[e] -= push
            cap[e ^ 1] += push
            v = to[e ^ 1]
        remaining -= push
    return [[cap[cell_arc[i][j] ^ 1] for j in range(n)] for i in range(m)]


def solve_ot(mu: Measure, nu: Measure, d, p=1, *, float_mode: bool = False,
             digits: int = DEFAULT_DIGITS) -> TransportResult:
    """Exactly optimal transport plan between ``mu`` and ``nu`` for cost rho**p."""
    p = check_exponent(p, float_mode)
    _check_pair(mu, nu, d)
    xs, ys = mu.support, nu.support
    if len(xs) == 1 or len(ys) == 1:
        # the only coupling is the product
        plan = product_coupling(mu, nu)
    elif mu == nu:
        plan = diagonal_coupling(mu)
    else:
        denom, a, b = _scale(mu, nu)
        cost = [[ground_cost(d, x, y, p) for y in ys] for x in xs]
        flow = _successive_shortest_paths(a, b, cost)
        entries = {
            (x, y): Fraction(flow[i][j], denom)
            for i, x in enumerate(xs)
            for j, y in enumerate(ys)
            if flow[i][j]
        }
        plan = Coupling(entries, mu, nu)
    total = coupling_cost(plan, d, p)
    return TransportResult(total, plan, p, digits)


def wasserstein_distance(mu: Measure, nu: Measure, d, p=1, *, float_mode: bool = False,
                         digits: int = DEFAULT_DIGITS):
    """(cost_p, distance) where cost_p = d_p**p exactly and distance is its p-th root."""
    res = solve_ot(mu, nu, d, p, float_mode=float_mode, digits=digits)
    return res.cost_p, res.distance


def transport_cost(mu: Measure, nu: Measure, d, p=1, *, float_mode: bool = False):
    return solve_ot(mu, nu, d, p, float_mode=float_mode).cost_p


# ---------------------------------------------------------------------------
# brute-force oracle


@lru_cache(maxsize=None)
def _bases(m: int, n: int) -> tuple[tuple[tuple[int, int, bool], ...], ...]:
    """Every spanning tree of K_{m,n}, as a leaf-peeling schedule.

    A schedule step ``(i, j, row_leaf)`` assigns cell (i, j) the residual of
    row i (if ``row_leaf``) or column j, then removes the cell.
    """
    cells = [(i, j) for i in range(m) for j in range(n)]
    schedules = []
    for tree in itertools.combinations(cells, m + n - 1):
        parent = list(range(m + n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        acyclic = True
        for i, j in tree:
            ri, rj = find(i), find(m + j)
            if ri == rj:
                acyclic = False
                break
            parent[ri] = rj
        if not acyclic:
            continue
        live = set(tree)
        steps = []
        while live:
            degree = [0] * (m + n)
            for i, j in live:
                degree[i] += 1
                degree[m + j] += 1
            leaf = next(k for k in range(m + n) if degree[k] == 1)
            if leaf < m:
                cell = next(c for c in sorted(live) if c[0] == leaf)
                steps.append((cell[0], cell[1], True))
            else:
                cell = next(c for c in sorted(live) if c[1] == leaf - m)
                steps.append((cell[0], cell[1], False))
            live.remove(cell)
        schedules.append(tuple(steps))
    return tuple(schedules)


def oracle_ot(mu: Measure, nu: Measure, d, p=1, *, float_mode: bool = False):
    """Minimum transport cost by enumerating all basic feasible solutions.

    Limited to ``|supp mu| * |supp nu| <= 16``.
    """
    p = check_exponent(p, float_mode)
    _check_pair(mu, nu, d)
    xs, ys = mu.support, nu.support
    m, n = len(xs), len(ys)
    if m * n > ORACLE_MAX_CELLS:
        raise TooLargeError(f"oracle limited to {ORACLE_MAX_CELLS} cells, got {m}x{n}")
    denom = math.lcm(*(w.denominator for w in itertools.chain(mu.as_dict().values(),
                                                           nu.as_dict().values())))
    row0 = [int(mu[x] * denom) for x in xs]
    col0 = [int(nu[y] * denom) for y in ys]
    cost = [[ground_cost(d, x, y, p) for y in ys] for x in xs]
    best = None
    for schedule in _bases(m, n):
        row, col = list(row0), list(col0)
        total = 0
        feasible = True
        for i, j, row_leaf in schedule:
            if row_leaf:
                val = row[i]
                col[j] -= val
                row[i] = 0
            else:
                val = col[j]
                row[i] -= val
                col[j] = 0
            if val < 0:
                feasible = False
                break
            total += cost[i][j] * val
        if feasible and (best is None or total < best):
            best = total
    if not _is_exact(p):
        return best / denom
    return Fraction(best, denom)
