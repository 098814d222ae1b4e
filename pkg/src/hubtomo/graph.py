"""Undirected networks, line graphs and the traversal primitives built on them.

Edge ids are dense integers assigned in creation order.  Every other module
indexes delay vectors and matrix columns by edge id, so the order of
``Network.edges`` is part of the public contract.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Protocol, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import DisconnectedError, GraphFormatError, ParameterError


class _Graph(Protocol):
    @property
    def num_vertices(self) -> int: ...

    def neighbors(self, v: int) -> Sequence[int]: ...


class Network:
    """Simple undirected graph with stable edge ids.

    Instances are immutable; :meth:`with_edge` and :meth:`without_edge`
    return new networks.
    """

    __slots__ = ("_n", "_edges", "_index", "_incident", "_adj", "_nbrs")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 0:
            raise ParameterError(f"vertex count must be non-negative, got {n}")
        norm: list[tuple[int, int]] = []
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise ParameterError(f"edge ({u}, {v}) has an endpoint outside [0, {n})")
            if u == v:
                raise ParameterError(f"self-loop at vertex {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise ParameterError(f"parallel edge {key}")
            seen.add(key)
            norm.append(key)
        self._init(n, tuple(norm))

    @classmethod
    def _trusted(cls, n: int, edges: tuple[tuple[int, int], ...]) -> "Network":
        g = cls.__new__(cls)
        g._init(n, edges)
        return g

    def _init(self, n: int, edges: tuple[tuple[int, int], ...]) -> None:
        incident: list[list[int]] = [[] for _ in range(n)]
        adj: list[list[int]] = [[] for _ in range(n)]
        for eid, (u, v) in enumerate(edges):
            incident[u].append(eid)
            incident[v].append(eid)
            adj[u].append(v)
            adj[v].append(u)
        self._n = n
        self._edges = edges
        self._index = dict(zip(edges, range(len(edges))))
        self._incident = incident
        self._adj = adj
        self._nbrs: Optional[list[tuple[int, ...]]] = None

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return len(self._edges)

    @property
    def num_vertices(self) -> int:
        return self._n

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """Edges as ``(u, v)`` with ``u < v``, position = edge id."""
        return self._edges

    def neighbors(self, v: int) -> tuple[int, ...]:
        """Neighbours of ``v`` in ascending order."""
        if self._nbrs is None:
            self._nbrs = [tuple(sorted(row)) for row in self._adj]
        return self._nbrs[v]

    def incident(self, v: int) -> Sequence[int]:
        """Ids of the edges incident to ``v``, in creation order."""
        return self._incident[v]

    def degree(self, v: int) -> int:
        return len(self._incident[v])

    def degrees(self) -> np.ndarray:
        return np.fromiter((len(r) for r in self._incident), dtype=np.int64, count=self._n)

    def average_degree(self) -> float:
        return 2.0 * self.m / self._n if self._n else 0.0

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._index

    def edge_id(self, u: int, v: int) -> int:
        """Id of edge ``{u, v}``; raises ``KeyError`` if absent."""
        return self._index[(u, v) if u < v else (v, u)]

    def with_edge(self, u: int, v: int) -> "Network":
        """Copy with ``{u, v}`` appended as edge id ``m``."""
        u, v = int(u), int(v)
        if u == v or not (0 <= u < self._n and 0 <= v < self._n):
            raise ParameterError(f"cannot add edge ({u}, {v}) to a network on {self._n} vertices")
        if self.has_edge(u, v):
            raise ParameterError(f"parallel edge ({u}, {v})")
        return Network._trusted(self._n, self._edges + ((min(u, v), max(u, v)),))

    def without_edge(self, u: int, v: int) -> "Network":
        """Copy with ``{u, v}`` removed; later edge ids shift down by one."""
        eid = self.edge_id(u, v)
        return Network._trusted(self._n, self._edges[:eid] + self._edges[eid + 1:])

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges

    def __hash__(self):
        return hash((self._n, self._edges))

    def __repr__(self):
        return f"Network(n={self._n}, m={self.m})"


@dataclass(frozen=True)
class LineGraph:
    """Line graph of a :class:`Network`.

    Line-graph vertex ``i`` is edge ``node_for_edge[i]`` of the source network;
    with dense edge ids the mapping is the identity.
    """

    node_for_edge: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[int, ...], ...]

    @property
    def num_vertices(self) -> int:
        return len(self.node_for_edge)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def average_degree(self) -> float:
        k = self.num_vertices
        return 2.0 * len(self.edges) / k if k else 0.0

    def to_csr(self) -> csr_matrix:
        k = self.num_vertices
        if not self.edges:
            return csr_matrix((k, k), dtype=np.int8)
        e = np.asarray(self.edges, dtype=np.int64)
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        data = np.ones(rows.size, dtype=np.int8)
        return csr_matrix((data, (rows, cols)), shape=(k, k))


@dataclass(frozen=True)
class BFSTree:
    root: int
    parent: tuple[int, ...]  # -1 for the root
    depth: tuple[int, ...]
    order: tuple[int, ...]
    has_children: tuple[bool, ...]

    @property
    def height(self) -> int:
        return max(self.depth) if self.depth else 0

    def non_leaves(self) -> list[int]:
        return [v for v, c in enumerate(self.has_children) if c]

    def tree_edges(self) -> set[tuple[int, int]]:
        return {(min(v, p), max(v, p)) for v, p in enumerate(self.parent) if p >= 0}


def generate_ba(n: int, d: int, seed: int, m0: Optional[int] = None) -> Network:
    """Barabasi-Albert preferential-attachment network.

    Starts from a clique on ``m0`` vertices (default ``d // 2 + 1``); every
    later vertex attaches to ``d // 2`` distinct existing vertices drawn with
    probability proportional to their current degree.

    Parameters
    ----------
    n : int
        Number of vertices.
    d : int
        Target average degree; must be even and at least 2.
    seed : int
        Seed for ``numpy.random.default_rng``.
    m0 : int, optional
        Size of the initial clique, at least ``d // 2 + 1``.
    """
    if d < 2 or d % 2:
        raise ParameterError(f"target average degree must be even and >= 2, got {d}")
    per_vertex = d // 2
    if m0 is None:
        m0 = per_vertex + 1
    if m0 < per_vertex + 1:
        raise ParameterError(f"initial clique of {m0} vertices cannot supply {per_vertex} targets")
    if n <= m0:
        raise ParameterError(f"need n > {m0} vertices for d={d}, got n={n}")

    rng = np.random.default_rng(seed)
    edges = [(u, v) for u in range(m0) for v in range(u + 1, m0)]
    # one entry per edge endpoint, so uniform draws are degree-proportional
    ends = np.empty(2 * (len(edges) + (n - m0) * per_vertex), dtype=np.int64)
    fill = 0
    for u, v in edges:
        ends[fill], ends[fill + 1] = u, v
        fill += 2
    for v in range(m0, n):
        targets: set[int] = set()
        while len(targets) < per_vertex:
            targets.add(int(ends[rng.integers(fill)]))
        for u in sorted(targets):
            edges.append((u, v))
            ends[fill], ends[fill + 1] = u, v
            fill += 2
    return Network(n, edges)


def line_graph(g: Network) -> LineGraph:
    """Line graph: one vertex per edge, adjacent iff the edges share an endpoint."""
    pairs = []
    adj: list[list[int]] = [[] for _ in range(g.m)]
    for v in range(g.n):
        inc = g.incident(v)
        for i in range(len(inc)):
            a = inc[i]
            for j in range(i + 1, len(inc)):
                b = inc[j]
                pairs.append((a, b) if a < b else (b, a))
                adj[a].append(b)
                adj[b].append(a)
    return LineGraph(
        node_for_edge=tuple(range(g.m)),
        edges=tuple(pairs),
        adjacency=tuple(tuple(sorted(row)) for row in adj),
    )


def _reach(graph: _Graph, start: int, allowed=None) -> list[bool]:
    seen = [False] * graph.num_vertices
    seen[start] = True
    queue = deque([start])
    # traversal order is irrelevant here, so skip the sorted neighbour view
    nbrs = graph._adj.__getitem__ if isinstance(graph, Network) else graph.neighbors
    while queue:
        u = queue.popleft()
        for w in nbrs(u):
            if not seen[w] and (allowed is None or w in allowed):
                seen[w] = True
                queue.append(w)
    return seen


def is_connected(graph: _Graph, restrict_to: Optional[Iterable[int]] = None) -> bool:
    """Whether ``graph`` (or the subgraph induced by ``restrict_to``) is connected.

    The empty graph counts as connected; an empty ``restrict_to`` is an error.
    """
    if restrict_to is None:
        if graph.num_vertices == 0:
            return True
        return all(_reach(graph, 0))
    subset = set(restrict_to)
    if not subset:
        raise ParameterError("restrict_to must be a non-empty vertex set")
    start = min(subset)
    seen = _reach(graph, start, subset)
    return all(seen[v] for v in subset)


def unreachable_vertex(graph: _Graph, start: int = 0) -> Optional[int]:
    """Smallest vertex not reachable from ``start``, or None."""
    if graph.num_vertices == 0:
        return None
    seen = _reach(graph, start)
    for v, s in enumerate(seen):
        if not s:
            return v
    return None


def bfs_tree(graph: _Graph, root: int) -> BFSTree:
    """Breadth-first spanning tree; neighbours are scanned in ascending order."""
    k = graph.num_vertices
    if not 0 <= root < k:
        raise ParameterError(f"root {root} outside [0, {k})")
    parent = [-1] * k
    depth = [-1] * k
    has_children = [False] * k
    depth[root] = 0
    order = [root]
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in graph.neighbors(u):
            if depth[w] < 0:
                depth[w] = depth[u] + 1
                parent[w] = u
                has_children[u] = True
                order.append(w)
                queue.append(w)
    if len(order) < k:
        missing = depth.index(-1)
        raise DisconnectedError(f"vertex {missing} is unreachable from root {root}", vertex=missing)
    return BFSTree(root, tuple(parent), tuple(depth), tuple(order), tuple(has_children))


def eccentricities(lg: LineGraph, deadline: Optional[float] = None, chunk: int = 256) -> np.ndarray:
    """Eccentricity of every line-graph vertex via all-pairs BFS.

    ``deadline`` is a ``time.monotonic()`` value; ``TimeoutError`` is raised
    between source chunks once it has passed.
    """
    k = lg.num_vertices
    if k == 0:
        return np.zeros(0, dtype=np.int64)
    csr = lg.to_csr()
    ecc = np.empty(k, dtype=np.int64)
    for lo in range(0, k, chunk):
        if deadline is not None and time.monotonic() > deadline:
            raise TimeoutError("eccentricity computation exceeded its deadline")
        idx = np.arange(lo, min(lo + chunk, k))
        dist = shortest_path(csr, method="D", unweighted=True, indices=idx)
        if np.isinf(dist).any():
            bad = int(np.argwhere(np.isinf(dist))[0, 1])
            raise DisconnectedError(f"line-graph vertex {bad} is unreachable", vertex=bad)
        ecc[lo:lo + idx.size] = dist.max(axis=1).astype(np.int64)
    return ecc


def eccentricity_center(lg: LineGraph, deadline: Optional[float] = None) -> int:
    """A vertex of minimum eccentricity, smallest id on ties."""
    if lg.num_vertices == 0:
        raise ParameterError("line graph has no vertices")
    return int(np.argmin(eccentricities(lg, deadline=deadline)))


def write_edge_list(g: Network, path) -> None:
    lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_edge_list(path) -> Network:
    """Parse the ``n m`` header + ``u v`` lines format.

    Errors carry the 1-based line number of the offending line.
    """
    text = Path(path).read_text(encoding="utf-8")
    return parse_edge_list(text.splitlines())


def parse_edge_list(lines: Sequence[str]) -> Network:
    if not lines:
        raise GraphFormatError("missing 'n m' header", line=1)
    try:
        n, m = (int(tok) for tok in lines[0].split())
    except ValueError:
        raise GraphFormatError(f"bad header {lines[0]!r}", line=1) from None
    edges = []
    seen = set()
    body = lines[1:]
    while body and not body[-1].strip():
        body = body[:-1]
    for lineno, raw in enumerate(body, start=2):
        parts = raw.split()
        if len(parts) != 2:
            raise GraphFormatError(f"expected 'u v', got {raw!r}", line=lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"non-integer vertex id in {raw!r}", line=lineno) from None
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"vertex id out of range [0, {n})", line=lineno)
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", line=lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"duplicate edge {key}", line=lineno)
        seen.add(key)
        edges.append((u, v))
    if len(edges) != m:
        raise GraphFormatError(f"header declares {m} edges, found {len(edges)}", line=1)
    return Network(n, edges)
