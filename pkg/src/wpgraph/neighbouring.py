"""The alpha-neighbouring relation, B_s membership, and B_{1/2} witnesses.

Two measures are alpha-neighbouring when they share a common part ``eta`` and
differ only by a mass ``alpha`` sitting on the two endpoints of one edge. For
such pairs the set B_s(mu, nu) collapses to the single convex combination;
for every other pair with transport cost in (0, 1], :func:`bs_witness` builds
a second member of B_{1/2} out of an optimal plan.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BadParameterError,
    GraphMismatchError,
    PreconditionViolatedError,
    WitnessRejectedError,
)
from .graph import shortest_path
from .measure import Measure, SignedMass, check_on_graph, difference, interpolate
from .transport import FLOAT_TOLERANCE, solve_ot, transport_cost

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class NeighbouringCertificate:
    """Witnesses ``mu = eta + alpha*delta_u`` and ``nu = eta + alpha*delta_v``."""

    u: int
    v: int
    alpha: Fraction
    eta: SignedMass

    def reconstruct(self) -> tuple[Measure, Measure]:
        return (
            Measure(self.eta.plus((self.u, self.alpha)).as_dict()),
            Measure(self.eta.plus((self.v, self.alpha)).as_dict()),
        )


def check_neighbouring(mu: Measure, nu: Measure, d) -> NeighbouringCertificate | None:
    n = d.shape[0]
    check_on_graph(mu, n, GraphMismatchError)
    check_on_graph(nu, n, GraphMismatchError)
    diff = difference(mu, nu)
    if len(diff) != 2:
        return None
    (a, wa), (b, wb) = diff.items()
    if wa + wb != 0:
        return None
    u, v = (a, b) if wa > 0 else (b, a)
    alpha = abs(wa)
    if not 0 < alpha <= 1 or d[u, v] != 1:
        return None
    eta = SignedMass({x: min(mu[x], nu[x]) for x in set(mu.support) | set(nu.support)})
    return NeighbouringCertificate(u, v, alpha, eta)


@dataclass(frozen=True)
class BsQuery:
    """Budgets of B_s(mu, nu) as p-th powers: s*cost and (1 - s)*cost."""

    mu: Measure
    nu: Measure
    s: Fraction
    cost_p: object
    budget_from_mu: object
    budget_to_nu: object

    @classmethod
    def build(cls, mu, nu, s, d, p, *, float_mode=False, cost_p=None) -> BsQuery:
        s = Fraction(s)
        if not 0 < s < 1:
            raise BadParameterError(f"s = {s} must lie strictly between 0 and 1")
        if cost_p is None:
            cost_p = transport_cost(mu, nu, d, p, float_mode=float_mode)
        if float_mode:
            return cls(mu, nu, s, cost_p, float(s) * cost_p, float(1 - s) * cost_p)
        return cls(mu, nu, s, cost_p, s * cost_p, (1 - s) * cost_p)

    def contains(self, xi: Measure, d, p, *, float_mode=False) -> bool:
        to_xi = transport_cost(self.mu, xi, d, p, float_mode=float_mode)
        from_xi = transport_cost(xi, self.nu, d, p, float_mode=float_mode)
        if float_mode:
            return (to_xi <= self.budget_from_mu + FLOAT_TOLERANCE
                    and from_xi <= self.budget_to_nu + FLOAT_TOLERANCE)
        return to_xi <= self.budget_from_mu and from_xi <= self.budget_to_nu


def bs_membership(xi: Measure, mu: Measure, nu: Measure, s, d, p, *,
                  float_mode: bool = False) -> bool:
    """Is ``xi`` in B_s(mu, nu)? Compared on p-th powers, exactly unless float mode."""
    return BsQuery.build(mu, nu, s, d, p, float_mode=float_mode).contains(
        xi, d, p, float_mode=float_mode)


def _witness_candidates(mu, nu, d, plan):
    """Yield (kind, xi) candidates built from the optimal plan, in trial order."""
    mid = interpolate(mu, nu, HALF)
    off = plan.off_diagonal()
    for (x, y), w in off:
        if d[x, y] > 1:
            path = shortest_path(d, x, y)
            c = w / 4
            yield "path", mid.plus((path[0], -c), (path[1], c), (path[-2], c), (path[-1], -c))
            return
    if len(off) < 2:
        return
    ((x1, y1), w1), ((x2, y2), w2) = off[0], off[1]
    c = min(w1, w2) / 4
    # Two-pair perturbation in both labellings; when the two edges are far
    # apart neither stays in B_{1/2}, so fall back to sliding mass along both.
    yield "pair", mid.plus((x1, c), (y1, c), (x2, -c), (y2, -c))
    yield "pair", mid.plus((x2, c), (y2, c), (x1, -c), (y1, -c))
    yield "pair-shift", mid.plus((x1, -c), (y1, c), (x2, c), (y2, -c))


def bs_witness(mu: Measure, nu: Measure, d, p, *, with_kind: bool = False):
    """A member of B_{1/2}(mu, nu) other than the midpoint, or None if neighbouring.

    Requires ``0 < cost_p(mu, nu) <= 1``. Each candidate is checked by exact
    transport solves before it is returned; ``WitnessRejectedError`` if none
    passes. With ``with_kind`` returns ``(kind, xi)``.
    """
    result = solve_ot(mu, nu, d, p)
    alpha = result.cost_p
    if not 0 < alpha <= 1:
        raise PreconditionViolatedError(f"cost_p = {alpha} is not in (0, 1]")
    if check_neighbouring(mu, nu, d) is not None:
        return None
    query = BsQuery.build(mu, nu, HALF, d, p, cost_p=alpha)
    mid = interpolate(mu, nu, HALF)
    tried = []
    for kind, xi in _witness_candidates(mu, nu, d, result.plan):
        tried.append(kind)
        if xi != mid and query.contains(xi, d, p):
            return (kind, xi) if with_kind else xi
    raise WitnessRejectedError(
        f"no verified B_1/2 witness for non-neighbouring pair (tried {tried or 'nothing'})")


@dataclass(frozen=True)
class PairReport:
    cost_p: object
    certificate: NeighbouringCertificate | None
    witness: Measure | None
    witness_kind: str | None
    verdict: str
    consistent: bool


def classify_pair(mu: Measure, nu: Measure, d, p) -> PairReport:
    cost = transport_cost(mu, nu, d, p)
    if not 0 < cost <= 1:
        return PairReport(cost, None, None, None, "out of alpha range", True)
    cert = check_neighbouring(mu, nu, d)
    found = bs_witness(mu, nu, d, p, with_kind=True)
    kind, witness = found if found is not None else (None, None)
    if cert is not None:
        ok = witness is None and cost == cert.alpha
        verdict = "neighbouring: cost_p equals alpha" if ok else "inconsistent"
    else:
        ok = witness is not None
        verdict = "witness produced: B_1/2 not a singleton" if ok else "inconsistent"
    return PairReport(cost, cert, witness, kind, verdict, ok)
