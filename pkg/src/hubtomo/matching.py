"""Maximum-cardinality matching in general graphs (Edmonds' blossom algorithm).

The search routine grows one alternating tree from a single exposed root,
contracting odd cycles (blossoms) by relabelling their base.  A search that
fails from a root stays failed for every later matching obtained by
augmentation, so one pass over the exposed vertices yields a maximum matching.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import StructureError
from .graph import Network


@dataclass(frozen=True)
class Matching:
    """Vertex-disjoint edge set, stored as a symmetric mate table."""

    mate: tuple[Optional[int], ...]

    @classmethod
    def empty(cls, n: int) -> "Matching":
        return cls((None,) * n)

    @classmethod
    def from_pairs(cls, n: int, pairs) -> "Matching":
        mate: list[Optional[int]] = [None] * n
        for u, v in pairs:
            if u == v or mate[u] is not None or mate[v] is not None:
                raise StructureError(f"pair ({u}, {v}) overlaps another matched pair")
            mate[u], mate[v] = v, u
        return cls(tuple(mate))

    @property
    def cardinality(self) -> int:
        return sum(1 for v, w in enumerate(self.mate) if w is not None and v < w)

    def pairs(self) -> list[tuple[int, int]]:
        return [(v, w) for v, w in enumerate(self.mate) if w is not None and v < w]

    def edge_ids(self, g: Network) -> frozenset[int]:
        return frozenset(g.edge_id(u, v) for u, v in self.pairs())

    def is_exposed(self, v: int) -> bool:
        return self.mate[v] is None

    def contains(self, u: int, v: int) -> bool:
        return self.mate[u] == v

    def without(self, u: int, v: int) -> "Matching":
        if self.mate[u] != v:
            raise StructureError(f"({u}, {v}) is not a matched pair")
        mate = list(self.mate)
        mate[u] = mate[v] = None
        return Matching(tuple(mate))

    def validate(self, g: Network) -> None:
        """Raise ``StructureError`` unless this is a matching of ``g``."""
        if len(self.mate) != g.n:
            raise StructureError(f"mate table has {len(self.mate)} entries for {g.n} vertices")
        for v, w in enumerate(self.mate):
            if w is None:
                continue
            if self.mate[w] != v:
                raise StructureError(f"asymmetric mate entries at {v} and {w}")
            if not g.has_edge(v, w):
                raise StructureError(f"matched pair ({v}, {w}) is not an edge")


def _search(nbrs: Sequence[Sequence[int]], mate: list[int], root: int) -> Optional[list[int]]:
    """Augmenting path from exposed ``root`` (root first), or None.

    ``mate`` uses -1 for exposed vertices and is not modified.
    """
    n = len(mate)
    used = [False] * n
    parent = [-1] * n
    base = list(range(n))

    def lca(a: int, b: int) -> int:
        seen = [False] * n
        while True:
            a = base[a]
            seen[a] = True
            if mate[a] == -1:
                break
            a = parent[mate[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = parent[mate[b]]

    def mark(v: int, b: int, child: int, blossom: list[bool]) -> None:
        while base[v] != b:
            blossom[base[v]] = blossom[base[mate[v]]] = True
            parent[v] = child
            child = mate[v]
            v = parent[mate[v]]

    used[root] = True
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for to in nbrs[v]:
            if base[v] == base[to] or mate[v] == to:
                continue
            if to == root or (mate[to] != -1 and parent[mate[to]] != -1):
                b = lca(v, to)
                blossom = [False] * n
                mark(v, b, to, blossom)
                mark(to, b, v, blossom)
                for i in range(n):
                    if blossom[base[i]]:
                        base[i] = b
                        if not used[i]:
                            used[i] = True
                            queue.append(i)
            elif parent[to] == -1:
                parent[to] = v
                if mate[to] == -1:
                    path = [to]
                    u = to
                    while True:
                        pu = parent[u]
                        path.append(pu)
                        if mate[pu] == -1:
                            break
                        u = mate[pu]
                        path.append(u)
                    path.reverse()
                    return path
                used[mate[to]] = True
                queue.append(mate[to])
    return None


def _mate_list(m: Matching) -> list[int]:
    return [-1 if w is None else w for w in m.mate]


def _nbrs(g: Network) -> list[tuple[int, ...]]:
    return [g.neighbors(v) for v in range(g.n)]


def augment(m: Matching, path: Sequence[int], g: Optional[Network] = None) -> Matching:
    """Flip matched/unmatched status along an augmenting path.

    ``path`` lists vertices from one exposed endpoint to the other.  When ``g``
    is given, every consecutive pair must also be an edge of ``g``.
    """
    k = len(path)
    if k < 2 or k % 2:
        raise StructureError(f"augmenting path needs an even number of vertices >= 2, got {k}")
    if len(set(path)) != k:
        raise StructureError("augmenting path repeats a vertex")
    mate = list(m.mate)
    if mate[path[0]] is not None or mate[path[-1]] is not None:
        raise StructureError("augmenting path endpoints must be exposed")
    for i in range(k - 1):
        a, b = path[i], path[i + 1]
        if g is not None and not g.has_edge(a, b):
            raise StructureError(f"({a}, {b}) is not an edge")
        if i % 2 and mate[a] != b:
            raise StructureError(f"({a}, {b}) should be matched but is not")
    for i in range(0, k, 2):
        a, b = path[i], path[i + 1]
        mate[a], mate[b] = b, a
    return Matching(tuple(mate))


def augmenting_path(g: Network, m: Matching, hint: Optional[tuple[int, int]] = None) -> Optional[list[int]]:
    """Find one M-alternating path between two exposed vertices.

    ``hint = (i, j)`` names an edge just inserted into a graph whose matching
    was maximum.  Any new augmenting path then uses that edge, so if ``i`` or
    ``j`` is exposed the search from it is conclusive.  When both are matched
    the search falls back to every exposed vertex in ascending order.
    """
    mate = _mate_list(m)
    nbrs = _nbrs(g)
    if hint is not None:
        roots = [v for v in dict.fromkeys(hint) if mate[v] == -1]
        if roots:
            for v in roots:
                path = _search(nbrs, mate, v)
                if path is not None:
                    return path
            return None
    for v in range(g.n):
        if mate[v] == -1 and nbrs[v]:
            path = _search(nbrs, mate, v)
            if path is not None:
                return path
    return None


def augmenting_path_from(g: Network, m: Matching, roots: Sequence[int]) -> Optional[list[int]]:
    """Search only from the exposed vertices in ``roots``.

    Complete when every augmenting path is known to end in ``roots``, e.g. after
    deleting a matched edge from a graph whose matching was maximum.
    """
    mate = _mate_list(m)
    nbrs = _nbrs(g)
    for v in dict.fromkeys(roots):
        if mate[v] == -1:
            path = _search(nbrs, mate, v)
            if path is not None:
                return path
    return None


def greedy_matching(g: Network) -> Matching:
    """Maximal matching: each exposed vertex takes its smallest exposed neighbour."""
    mate: list[Optional[int]] = [None] * g.n
    for u in range(g.n):
        if mate[u] is not None:
            continue
        for w in g.neighbors(u):
            if mate[w] is None:
                mate[u], mate[w] = w, u
                break
    return Matching(tuple(mate))


def max_matching(g: Network) -> Matching:
    """Maximum-cardinality matching of ``g``.

    Seeds with :func:`greedy_matching`, then runs one blossom search per
    exposed vertex in ascending order.  Runs in O(n^3) time.
    """
    mate = _mate_list(greedy_matching(g))
    nbrs = _nbrs(g)
    for v in range(g.n):
        if mate[v] != -1 or not nbrs[v]:
            continue
        path = _search(nbrs, mate, v)
        if path is None:
            continue
        for i in range(0, len(path), 2):
            a, b = path[i], path[i + 1]
            mate[a], mate[b] = b, a
    return Matching(tuple(None if w == -1 else w for w in mate))


def is_maximum(g: Network, m: Matching) -> bool:
    """Berge certificate: no augmenting path exists."""
    return augmenting_path(g, m) is None
