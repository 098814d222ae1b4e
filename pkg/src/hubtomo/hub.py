"""Hub selection: connected edge sets of G that are connected dominating sets of L_G.

Two selectors are provided.  :func:`connect_matching` grows a maximum
matching into a connected edge set; :func:`bfs_baseline_hub` takes the
non-leaf vertices of a BFS tree of the line graph rooted at its center.
:func:`cds_certify` is the single validity check both must pass.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import DisconnectedError, DominationError, GraphFormatError
from .graph import LineGraph, Network, bfs_tree, eccentricity_center, is_connected, unreachable_vertex
from .matching import Matching, max_matching

MATCHING_BASED = "matching_based"
BFS_BASELINE = "bfs_baseline"


@dataclass(frozen=True)
class HubSet:
    """Hub edge ids (C*), equal to the line-graph vertex ids of C.

    ``connector_edges`` are the hub edges that are not matching edges; the
    baseline selector has none.
    """

    hub_edges: frozenset[int]
    connector_edges: frozenset[int]
    origin: str

    @property
    def hub_nodes(self) -> frozenset[int]:
        return self.hub_edges

    def __len__(self):
        return len(self.hub_edges)

    def sorted_edges(self) -> list[int]:
        return sorted(self.hub_edges)

    def remap_after_delete(self, deleted: int) -> "HubSet":
        """Shift ids above ``deleted`` down by one; ``deleted`` must not be a hub edge."""
        shift = lambda ids: frozenset(e - 1 if e > deleted else e for e in ids)  # noqa: E731
        return HubSet(shift(self.hub_edges), shift(self.connector_edges), self.origin)

    def serialize(self) -> str:
        return (
            f"origin {self.origin}\n"
            f"hub {' '.join(map(str, sorted(self.hub_edges)))}\n"
            f"connectors {' '.join(map(str, sorted(self.connector_edges)))}\n"
        )

    def sha256(self) -> str:
        return hashlib.sha256(self.serialize().encode("utf-8")).hexdigest()

    @classmethod
    def parse(cls, text: str) -> "HubSet":
        fields = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            key, _, rest = line.partition(" ")
            if key not in ("origin", "hub", "connectors"):
                raise GraphFormatError(f"unknown hub field {key!r}", line=lineno)
            fields[key] = rest.strip()
        try:
            return cls(
                hub_edges=frozenset(int(t) for t in fields["hub"].split()),
                connector_edges=frozenset(int(t) for t in fields["connectors"].split()),
                origin=fields["origin"],
            )
        except KeyError as exc:
            raise GraphFormatError(f"missing hub field {exc.args[0]!r}") from None


@dataclass(frozen=True)
class Certificate:
    ok: bool
    reason: str = ""
    witness: Optional[int] = None

    def __bool__(self):
        return self.ok


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if ra < rb:
            ra, rb = rb, ra
        self.parent[ra] = rb
        return True


def connect_matching(g: Network, m: Matching) -> HubSet:
    """Grow a maximal matching into a connected edge set.

    Edges joining two matched vertices of different components are added first,
    scanning edge ids in ascending order.  Components that no single edge can
    join are then bridged through an unmatched vertex ``w``: for each such
    ``w`` in ascending order whose neighbours span two or more components, the
    edges from ``w`` to one neighbour per component are added.  Maximality
    means every neighbour of an unmatched vertex is matched, so in a connected
    graph these two passes leave a single component.

    Raises
    ------
    DisconnectedError
        If ``g`` is not connected.
    DominationError
        If some edge has two exposed endpoints (``m`` is not maximal).
    """
    bad = unreachable_vertex(g)
    if bad is not None:
        raise DisconnectedError(f"network is disconnected: vertex {bad} unreachable from 0", vertex=bad)
    mate = m.mate
    for eid, (u, v) in enumerate(g.edges):
        if mate[u] is None and mate[v] is None:
            raise DominationError(f"edge {eid} = ({u}, {v}) has no matched endpoint", edge=eid)

    matched = m.edge_ids(g)
    hub = set(matched)
    connectors = set()
    uf = _UnionFind(g.n)
    for u, v in m.pairs():
        uf.union(u, v)
    for eid, (u, v) in enumerate(g.edges):
        if mate[u] is not None and mate[v] is not None and uf.union(u, v):
            hub.add(eid)
            connectors.add(eid)
    for w in range(g.n):
        if mate[w] is not None:
            continue
        nbrs = g.neighbors(w)
        if len({uf.find(x) for x in nbrs}) < 2:
            continue
        for x in nbrs:
            if uf.union(w, x):
                eid = g.edge_id(w, x)
                hub.add(eid)
                connectors.add(eid)
    return HubSet(frozenset(hub), frozenset(connectors), MATCHING_BASED)


def cds_certify(hub: HubSet, lg: LineGraph) -> Certificate:
    """Check that the hub nodes form a connected dominating set of ``lg``.

    On failure the certificate names a witness: a hub node outside the
    component of the smallest hub node, or a line-graph vertex with no hub
    neighbour.
    """
    nodes = hub.hub_nodes
    k = lg.num_vertices
    for v in nodes:
        if not 0 <= v < k:
            return Certificate(False, f"hub node {v} is not a line-graph vertex", v)
    if not nodes:
        if k == 0:
            return Certificate(True)
        return Certificate(False, "empty hub dominates nothing", 0)
    if not is_connected(lg, restrict_to=nodes):
        start = min(nodes)
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in lg.neighbors(u):
                if w in nodes and w not in seen:
                    seen.add(w)
                    stack.append(w)
        witness = min(nodes - seen)
        return Certificate(False, f"hub node {witness} is not connected to hub node {start}", witness)
    for v in range(k):
        if v in nodes:
            continue
        if not any(w in nodes for w in lg.neighbors(v)):
            return Certificate(False, f"line-graph vertex {v} is not dominated", v)
    return Certificate(True)


def independent_set_check(edge_ids: Iterable[int], lg: LineGraph) -> bool:
    """True iff no two of the given line-graph vertices are adjacent.

    Pass ``matching.edge_ids(g)`` to check a :class:`Matching`.
    """
    ids = set(edge_ids)
    return not any(w in ids for v in ids for w in lg.neighbors(v))


def bfs_baseline_hub(lg: LineGraph, deadline: Optional[float] = None) -> HubSet:
    """Non-leaf vertices of the BFS tree rooted at a minimum-eccentricity vertex.

    ``deadline`` (a ``time.monotonic()`` value) bounds the all-pairs BFS.
    """
    root = eccentricity_center(lg, deadline=deadline)
    tree = bfs_tree(lg, root)
    nodes = tree.non_leaves() or [root]
    return HubSet(frozenset(nodes), frozenset(), BFS_BASELINE)


def matching_hub(g: Network) -> HubSet:
    """Maximum matching followed by :func:`connect_matching`."""
    return connect_matching(g, max_matching(g))
