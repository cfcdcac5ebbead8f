"""Finite groups as Cayley tables, and graphs with a prescribed automorphism group.

Elements are indices ``0..n-1`` with 0 the identity and ``table[i][j]`` the
index of ``g_i * g_j``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Sequence

from .automorphisms import (
    DEFAULT_CAP,
    Permutation,
    compose,
    enumerate_automorphisms,
    isometries_equal_automorphisms,
)
from .errors import (
    BadParameterError,
    NoIdentityError,
    NoInverseError,
    NotAssociativeError,
    NotGeneratingError,
    NotLatinSquareError,
    TooLargeError,
)
from .graph import Graph, build_graph, shortest_path_matrix
from .measure import random_measure

ISOMORPHISM_MAX_ORDER = 24

# Smallest asymmetric connected graph (6 vertices); realizes the trivial group.
ASYMMETRIC_EDGES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 4), (3, 5))


@dataclass(frozen=True)
class FiniteGroup:
    table: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        return self.table[a].index(0)

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    def is_abelian(self) -> bool:
        n = self.order
        return all(self.table[i][j] == self.table[j][i] for i in range(n) for j in range(n))


def validate_group(table: Sequence[Sequence[int]]) -> FiniteGroup:
    """Check the group axioms on a Cayley table and wrap it.

    Checks run in the order Latin square, associativity, identity at index 0,
    inverses; the first failure raises the matching error.
    """
    rows = [list(r) for r in table]
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise NotLatinSquareError("table must be a nonempty square array")
    full = list(range(n))
    for i, r in enumerate(rows):
        if any(not isinstance(x, int) or isinstance(x, bool) for x in r):
            raise NotLatinSquareError(f"row {i} has non-integer entries")
        if sorted(r) != full:
            raise NotLatinSquareError(f"row {i} is not a permutation of 0..{n - 1}")
    for j in range(n):
        if sorted(r[j] for r in rows) != full:
            raise NotLatinSquareError(f"column {j} is not a permutation of 0..{n - 1}")
    for a, b, c in itertools.product(range(n), repeat=3):
        if rows[rows[a][b]][c] != rows[a][rows[b][c]]:
            raise NotAssociativeError(f"({a}*{b})*{c} != {a}*({b}*{c})")
    if rows[0] != full or [r[0] for r in rows] != full:
        raise NoIdentityError("element 0 is not a two-sided identity")
    for a in range(n):
        if not any(rows[a][b] == 0 and rows[b][a] == 0 for b in range(n)):
            raise NoInverseError(f"element {a} has no inverse")
    return FiniteGroup(tuple(tuple(r) for r in rows))


# ---------------------------------------------------------------------------
# standard groups


def cyclic_group(n: int) -> FiniteGroup:
    return validate_group([[(i + j) % n for j in range(n)] for i in range(n)])


def trivial_group() -> FiniteGroup:
    return cyclic_group(1)


def direct_product(a: FiniteGroup, b: FiniteGroup) -> FiniteGroup:
    """Pairs (x, y) indexed as x * |b| + y."""
    m = b.order
    n = a.order * m
    return validate_group([
        [a.mul(i // m, j // m) * m + b.mul(i % m, j % m) for j in range(n)] for i in range(n)
    ])


def group_from_permutations(perms: Sequence[Permutation]) -> FiniteGroup:
    """Cayley table of a permutation group under composition (identity must be first)."""
    index = {p: k for k, p in enumerate(perms)}
    return validate_group([[index[compose(p, q)] for q in perms] for p in perms])


def symmetric_group(k: int) -> FiniteGroup:
    return group_from_permutations(sorted(itertools.permutations(range(k))))


# ---------------------------------------------------------------------------
# generation


def generated_subgroup(h: FiniteGroup, generators: Sequence[int]) -> set[int]:
    seen = {0}
    frontier = [0]
    while frontier:
        x = frontier.pop()
        for s in generators:
            y = h.mul(x, s)
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return seen


def small_generating_set(h: FiniteGroup) -> list[int]:
    """Greedy generating set: repeatedly add the smallest element not yet generated."""
    gens: list[int] = []
    span = {0}
    while len(span) < h.order:
        gens.append(min(set(range(h.order)) - span))
        span = generated_subgroup(h, gens)
    return gens


# ---------------------------------------------------------------------------
# automorphism group of a graph


def automorphism_group(g: Graph, cap: int = DEFAULT_CAP) -> FiniteGroup:
    return group_from_permutations(enumerate_automorphisms(g, cap))


# ---------------------------------------------------------------------------
# Frucht construction


def frucht_graph(h: FiniteGroup, generators: Sequence[int] | None = None) -> Graph:
    """A simple graph whose automorphism group is isomorphic to ``h``.

    Each arc g -> g*s_i of the Cayley digraph becomes a path g - a - b - g*s_i,
    with a pendant path of 2i+1 vertices hanging off ``a`` and one of 2i+2
    vertices off ``b`` (i is the 1-based generator index). The tails encode
    arc direction and generator. Orders 1 and 2 are special-cased.
    """
    n = h.order
    if generators is None:
        gens = list(range(1, n))
    else:
        gens = list(dict.fromkeys(int(s) for s in generators))
        if any(not 0 <= s < n for s in gens):
            raise BadParameterError(f"generator indices must lie in 0..{n - 1}")
        if 0 in gens:
            raise BadParameterError("the identity cannot be a generator")
    if len(generated_subgroup(h, gens)) != n:
        raise NotGeneratingError(f"elements {gens} do not generate the group")

    if n == 1:
        names = [f"f{i}" for i in range(6)]
        return build_graph(names, [(names[i], names[j]) for i, j in ASYMMETRIC_EDGES])
    if n == 2:
        return build_graph(["g0", "g1"], [("g0", "g1")])

    vertices = [f"g{x}" for x in range(n)]
    edges = []
    for i, s in enumerate(gens, 1):
        for x in range(n):
            a, b = f"a{i}.{x}", f"b{i}.{x}"
            vertices += [a, b]
            edges += [(f"g{x}", a), (a, b), (b, f"g{h.mul(x, s)}")]
            for root, length in ((a, 2 * i + 1), (b, 2 * i + 2)):
                prev = root
                for k in range(1, length + 1):
                    t = f"{root}.t{k}"
                    vertices.append(t)
                    edges.append((prev, t))
                    prev = t
    return build_graph(vertices, edges)


# ---------------------------------------------------------------------------
# group isomorphism


def groups_isomorphic(a: FiniteGroup, b: FiniteGroup) -> Permutation | None:
    """An explicit isomorphism ``phi`` (phi[x] in b for x in a), or None.

    Backtracks over images of a greedy generating set of ``a``, restricted to
    elements of ``b`` with matching order, and extends along words.
    """
    n = a.order
    if max(n, b.order) > ISOMORPHISM_MAX_ORDER:
        raise TooLargeError(f"isomorphism search limited to order {ISOMORPHISM_MAX_ORDER}")
    if n != b.order:
        return None
    orders_a = [a.element_order(x) for x in range(n)]
    orders_b = [b.element_order(x) for x in range(n)]
    if sorted(orders_a) != sorted(orders_b):
        return None
    gens = small_generating_set(a)
    options = [[y for y in range(n) if orders_b[y] == orders_a[s]] for s in gens]
    for images in itertools.product(*options):
        if len(set(images)) != len(images):
            continue
        phi = _extend_homomorphism(a, b, gens, images)
        if phi is not None:
            return phi
    return None


def _extend_homomorphism(a, b, gens, images):
    n = a.order
    phi = [-1] * n
    phi[0] = 0
    frontier = [0]
    while frontier:
        x = frontier.pop()
        for s, t in zip(gens, images):
            y, val = a.mul(x, s), b.mul(phi[x], t)
            if phi[y] < 0:
                phi[y] = val
                frontier.append(y)
            elif phi[y] != val:
                return None
    if sorted(phi) != list(range(n)):
        return None
    for x in range(n):
        for y in range(n):
            if phi[a.mul(x, y)] != b.mul(phi[x], phi[y]):
                return None
    return tuple(phi)


# ---------------------------------------------------------------------------
# Wasserstein space with a prescribed isometry group


@dataclass
class PrescribedReport:
    group_order: int
    generators: list[int]
    graph: Graph
    aut_order: int
    isometries_equal_automorphisms: bool
    isomorphism: Permutation | None
    pushforward_checked: int
    pushforward_failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (self.aut_order == self.group_order
                and self.isometries_equal_automorphisms
                and self.isomorphism is not None
                and not self.pushforward_failures)


def prescribed_isometry_space(h: FiniteGroup, p=1, *, generators: Sequence[int] | None = None,
                              seed: int = 0, n_pairs: int = 8) -> PrescribedReport:
    """Build a graph realizing ``h`` and certify it.

    Certificates: Isom(X, rho) = Aut(G) by two independent searches, an explicit
    isomorphism Aut(G) -> h, and exact invariance of transport cost under the
    push-forward of every automorphism on seeded random measure pairs.
    Without explicit ``generators`` a greedy small generating set keeps the
    graph small.
    """
    from .rigidity import verify_pushforward_isometry

    if h.order > ISOMORPHISM_MAX_ORDER:
        raise TooLargeError(f"verification limited to order {ISOMORPHISM_MAX_ORDER}")
    gens = list(generators) if generators is not None else small_generating_set(h)
    g = frucht_graph(h, gens)
    same = isometries_equal_automorphisms(g)
    auts = enumerate_automorphisms(g)
    iso = groups_isomorphic(group_from_permutations(auts), h)
    rng = random.Random(seed)
    pairs = [(random_measure(rng, g.n), random_measure(rng, g.n)) for _ in range(n_pairs)]
    d = shortest_path_matrix(g)
    checked = 0
    failures = []
    for psi in auts:
        rep = verify_pushforward_isometry(g, psi, pairs, p, d=d)
        checked += rep.checked
        failures += rep.failures
    return PrescribedReport(h.order, gens, g, len(auts), same, iso, checked, failures)
