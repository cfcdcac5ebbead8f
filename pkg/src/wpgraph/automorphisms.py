"""Vertex permutations, graph automorphisms and metric isometries.

A permutation is a tuple ``perm`` with ``perm[i]`` the image of vertex ``i``.
Two independent searches live here: :func:`enumerate_automorphisms` only looks
at adjacency, :func:`enumerate_isometries` only at the distance matrix.
"""

from __future__ import annotations

import sys
from collections import Counter
from typing import Sequence

import numpy as np

from .errors import TooLargeError
from .graph import Graph, bfs_order, shortest_path_matrix

DEFAULT_CAP = 512

Permutation = tuple


def identity(n: int) -> Permutation:
    return tuple(range(n))


def compose(psi: Sequence[int], chi: Sequence[int]) -> Permutation:
    """psi o chi: apply chi first."""
    return tuple(psi[c] for c in chi)


def inverse(psi: Sequence[int]) -> Permutation:
    out = [0] * len(psi)
    for i, j in enumerate(psi):
        out[j] = i
    return tuple(out)


def is_permutation(psi: Sequence[int], n: int) -> bool:
    return len(psi) == n and sorted(psi) == list(range(n))


def is_automorphism(g: Graph, psi: Sequence[int]) -> bool:
    if not is_permutation(psi, g.n):
        return False
    mapped = {(min(psi[i], psi[j]), max(psi[i], psi[j])) for i, j in g.edges}
    return mapped == g.edges


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise TooLargeError(f"{n} vertices exceeds the enumeration cap of {cap}")
    # the backtracking recurses once per vertex
    if sys.getrecursionlimit() < n + 200:
        sys.setrecursionlimit(n + 200)


def enumerate_automorphisms(g: Graph, cap: int = DEFAULT_CAP, *,
                            distance_profile: bool = True) -> list[Permutation]:
    """All adjacency-preserving bijections, identity first.

    Backtracks over vertices in BFS order; each vertex after the first must go
    to a neighbour of its BFS parent's image. Candidates are pruned by degree
    and, unless disabled, by the multiset of distances to all other vertices.
    """
    n = g.n
    _check_cap(n, cap)
    if distance_profile:
        d = shortest_path_matrix(g)
        label = [(g.degree(v), tuple(np.bincount(d[v]))) for v in range(n)]
    else:
        label = [g.degree(v) for v in range(n)]
    classes = Counter(label)
    start = min(range(n), key=lambda v: (classes[label[v]], v))
    order = bfs_order(g, start)
    rank = {v: k for k, v in enumerate(order)}
    anchor = {v: min(g.adjacency[v], key=rank.__getitem__) for v in order[1:]}
    adj = [set(a) for a in g.adjacency]

    image = [-1] * n
    used = [False] * n
    found: list[Permutation] = []

    def extend(k: int) -> None:
        if k == n:
            found.append(tuple(image))
            return
        v = order[k]
        if k == 0:
            candidates = [w for w in range(n) if label[w] == label[v]]
        else:
            candidates = g.adjacency[image[anchor[v]]]
        placed = [image[u] for u in g.adjacency[v] if image[u] >= 0]
        for w in candidates:
            if used[w] or label[w] != label[v]:
                continue
            if any(x not in adj[w] for x in placed):
                continue
            # no edge from w to an image whose preimage is not adjacent to v
            if sum(used[x] for x in g.adjacency[w]) != len(placed):
                continue
            image[v] = w
            used[w] = True
            extend(k + 1)
            image[v] = -1
            used[w] = False

    extend(0)
    found.sort()
    return found


def enumerate_isometries(d, cap: int = DEFAULT_CAP) -> list[Permutation]:
    """All permutations preserving the full distance matrix, identity first.

    Uses nothing but ``d``: the first vertex is matched by its sorted distance
    row, later vertices by their distances to every vertex already placed.
    """
    dist = np.asarray(d, dtype=np.int64)
    n = dist.shape[0]
    _check_cap(n, cap)
    rows = [tuple(sorted(r)) for r in dist.tolist()]
    classes = Counter(rows)
    start = min(range(n), key=lambda v: (classes[rows[v]], v))
    order = sorted(range(n), key=lambda v: (dist[start, v], v))
    # in a graph metric, a vertex at distance r from start has an earlier
    # vertex at distance 1; otherwise fall back to trying every vertex
    anchor = {}
    for k, v in enumerate(order[1:], 1):
        anchor[v] = next((u for u in order[:k] if dist[u, v] == 1), None)

    placed_src: list[int] = []
    placed_img: list[int] = []
    used = np.zeros(n, dtype=bool)
    found: list[Permutation] = []
    image = [-1] * n

    def extend(k: int) -> None:
        if k == n:
            found.append(tuple(image))
            return
        v = order[k]
        if k == 0:
            candidates = [w for w in range(n) if rows[w] == rows[v]]
        elif anchor[v] is None:
            candidates = range(n)
        else:
            candidates = np.flatnonzero(dist[image[anchor[v]]] == 1).tolist()
        src = dist[v, placed_src]
        for w in candidates:
            if used[w] or not np.array_equal(dist[w, placed_img], src):
                continue
            image[v] = w
            used[w] = True
            placed_src.append(v)
            placed_img.append(w)
            extend(k + 1)
            placed_src.pop()
            placed_img.pop()
            used[w] = False
            image[v] = -1

    extend(0)
    found.sort()
    return found


def isometries_equal_automorphisms(g: Graph, cap: int = DEFAULT_CAP) -> bool:
    """Compare Aut(G) with Isom(X, rho) as sets, each found by its own search."""
    auts = enumerate_automorphisms(g, cap, distance_profile=False)
    isos = enumerate_isometries(shortest_path_matrix(g), cap)
    return set(auts) == set(isos)
