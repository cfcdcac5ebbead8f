"""Finite simple connected graphs and their shortest-path metric."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DisconnectedError,
    MalformedMatrixError,
    SelfLoopError,
    UnknownVertexError,
    WPGraphError,
)


@dataclass(frozen=True)
class Graph:
    """A finite simple connected graph.

    ``vertices`` fixes the vertex order; every matrix, measure and permutation
    in the package is indexed by position in this tuple. ``edges`` holds index
    pairs ``(i, j)`` with ``i < j``.
    """

    vertices: tuple[str, ...]
    edges: frozenset[tuple[int, int]]
    adjacency: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        nbrs: list[list[int]] = [[] for _ in self.vertices]
        for i, j in self.edges:
            nbrs[i].append(j)
            nbrs[j].append(i)
        object.__setattr__(self, "adjacency", tuple(tuple(sorted(n)) for n in nbrs))

    @property
    def n(self) -> int:
        return len(self.vertices)

    def index(self, name: str) -> int:
        try:
            return self.vertices.index(name)
        except ValueError:
            raise UnknownVertexError(f"unknown vertex {name!r}") from None

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def degree(self, i: int) -> int:
        return len(self.adjacency[i])

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


def build_graph(vertex_list: Sequence[str], edge_list: Iterable[Sequence[str]]) -> Graph:
    """Validate and build a :class:`Graph`.

    Duplicate edges (in either orientation) are merged. Raises
    ``SelfLoopError``, ``UnknownVertexError`` or ``DisconnectedError``.
    """
    vertices = tuple(str(v) for v in vertex_list)
    if len(set(vertices)) != len(vertices):
        raise WPGraphError("vertex identifiers must be distinct")
    if not vertices:
        raise WPGraphError("graph needs at least one vertex")
    pos = {v: i for i, v in enumerate(vertices)}
    edges = set()
    for edge in edge_list:
        a, b = (str(x) for x in edge)
        for x in (a, b):
            if x not in pos:
                raise UnknownVertexError(f"edge ({a}, {b}) references unknown vertex {x!r}")
        if a == b:
            raise SelfLoopError(f"self-loop at {a!r}")
        i, j = pos[a], pos[b]
        edges.add((min(i, j), max(i, j)))
    g = Graph(vertices, frozenset(edges))
    reached = _bfs_distances(g.adjacency, 0)
    if any(r < 0 for r in reached):
        missing = [vertices[i] for i, r in enumerate(reached) if r < 0]
        raise DisconnectedError(f"vertices unreachable from {vertices[0]!r}: {missing}")
    return g


def _bfs_distances(adjacency: Sequence[Sequence[int]], source: int) -> list[int]:
    dist = [-1] * len(adjacency)
    dist[source] = 0
    queue = deque([source])
    while queue:
        x = queue.popleft()
        for y in adjacency[x]:
            if dist[y] < 0:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def shortest_path_matrix(g: Graph) -> np.ndarray:
    """All-pairs edge-count distances by one BFS per vertex.

    Returns a read-only ``int64`` array.
    """
    d = np.array([_bfs_distances(g.adjacency, s) for s in range(g.n)], dtype=np.int64)
    d.setflags(write=False)
    return d


def verify_graph_metric(d) -> bool:
    """Decide whether a symmetric zero-diagonal matrix is a graph metric.

    True iff every entry is an integer and every pair at distance at least 2
    has a point strictly between them that saturates the triangle inequality.
    """
    m = [[Fraction(x) for x in row] for row in d]
    n = len(m)
    if any(len(row) != n for row in m):
        raise MalformedMatrixError("matrix is not square")
    for i in range(n):
        if m[i][i] != 0:
            raise MalformedMatrixError(f"nonzero diagonal entry at {i}")
        for j in range(i + 1, n):
            if m[i][j] != m[j][i]:
                raise MalformedMatrixError(f"asymmetric entries at ({i}, {j})")
    for i in range(n):
        for j in range(n):
            if m[i][j].denominator != 1 or (i != j and m[i][j] <= 0):
                return False
    for a in range(n):
        for b in range(a + 1, n):
            if m[a][b] < 2:
                continue
            if not any(
                m[a][x] > 0 and m[x][b] > 0 and m[a][b] == m[a][x] + m[x][b] for x in range(n)
            ):
                return False
    return True


def bfs_order(g: Graph, start: int = 0) -> list[int]:
    """Vertex enumeration in which each vertex after the first has a neighbour earlier on."""
    seen = [False] * g.n
    seen[start] = True
    order = [start]
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in g.adjacency[x]:
            if not seen[y]:
                seen[y] = True
                order.append(y)
                queue.append(y)
    return order


def shortest_path(d: np.ndarray, a: int, b: int) -> list[int]:
    """A shortest vertex path from ``a`` to ``b`` using only the distance matrix.

    BFS parent tree from ``a`` with neighbours scanned in index order, so the
    lowest-index predecessor wins ties.
    """
    n = d.shape[0]
    parent = [-1] * n
    parent[a] = a
    queue = deque([a])
    while queue:
        x = queue.popleft()
        if x == b:
            break
        for y in range(n):
            if d[x, y] == 1 and parent[y] < 0:
                parent[y] = x
                queue.append(y)
    path = [b]
    while path[-1] != a:
        path.append(parent[path[-1]])
    return path[::-1]


# Standard fixtures. Vertex names are "v0", "v1", ...


def path_graph(n: int) -> Graph:
    names = [f"v{i}" for i in range(n)]
    return build_graph(names, [(names[i], names[i + 1]) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    names = [f"v{i}" for i in range(n)]
    return build_graph(names, [(names[i], names[(i + 1) % n]) for i in range(n)])


def complete_graph(n: int) -> Graph:
    names = [f"v{i}" for i in range(n)]
    return build_graph(names, [(names[i], names[j]) for i in range(n) for j in range(i + 1, n)])


def grid_graph(rows: int, cols: int) -> Graph:
    """Rectangular grid; vertex ``v{r*cols + c}`` sits at row r, column c."""
    names = [f"v{i}" for i in range(rows * cols)]
    edges = []
    for r in range(rows):
        for c in range(cols):
            k = r * cols + c
            if c + 1 < cols:
                edges.append((names[k], names[k + 1]))
            if r + 1 < rows:
                edges.append((names[k], names[k + cols]))
    return build_graph(names, edges)
