"""Maintaining the maximum matching and hub under single-link updates.

An inserted or deleted link changes the maximum matching cardinality by at
most one, so a single augmenting-path search restores optimality.  The hub is
rebuilt with :func:`~hubtomo.hub.connect_matching` only when the matching
changed or a hub link disappeared.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from .errors import EventError, GraphFormatError, StructureError
from .graph import Network, is_connected, line_graph, read_edge_list, write_edge_list
from .hub import HubSet, cds_certify, connect_matching
from .matching import Matching, augment, augmenting_path, augmenting_path_from, is_maximum, max_matching

INSERT = "insert"
DELETE = "delete"


@dataclass(frozen=True)
class DynamicState:
    g: Network
    m: Matching
    hub: HubSet
    epoch: int = 0
    branch: str = "init"  # which update rule produced this state


@dataclass(frozen=True)
class DynamicEvent:
    kind: str
    i: int
    j: int
    epoch: int

    def to_line(self) -> str:
        return f"{self.epoch} {self.kind} {self.i} {self.j}"


def initial_state(g: Network) -> DynamicState:
    m = max_matching(g)
    return DynamicState(g, m, connect_matching(g, m), 0, "init")


def rerun_baseline(state: DynamicState) -> DynamicState:
    """Recompute matching and hub from scratch on the current graph."""
    m = max_matching(state.g)
    return DynamicState(state.g, m, connect_matching(state.g, m), state.epoch, "rerun")


def apply_insert(state: DynamicState, i: int, j: int) -> DynamicState:
    """Add link ``{i, j}`` and restore a maximum matching and valid hub."""
    g = state.g
    if i == j or not (0 <= i < g.n and 0 <= j < g.n):
        raise EventError(f"cannot insert ({i}, {j}) into a network on {g.n} vertices")
    if g.has_edge(i, j):
        raise EventError(f"edge ({i}, {j}) already present")
    g2 = g.with_edge(i, j)
    path = augmenting_path(g2, state.m, hint=(i, j))
    if path is not None:
        m2 = augment(state.m, path, g2)
        return DynamicState(g2, m2, connect_matching(g2, m2), state.epoch + 1, "insert-augment")
    # no augmenting path means an endpoint is matched, and its matching edge
    # (a hub edge) dominates the new line-graph vertex
    if state.m.is_exposed(i) and state.m.is_exposed(j):
        raise StructureError(f"new edge ({i}, {j}) joins two exposed vertices but was not augmenting")
    return DynamicState(g2, state.m, state.hub, state.epoch + 1, "insert-unchanged")


def apply_delete(state: DynamicState, i: int, j: int) -> DynamicState:
    """Remove link ``{i, j}``; the network must stay connected."""
    g = state.g
    if not (0 <= i < g.n and 0 <= j < g.n) or not g.has_edge(i, j):
        raise EventError(f"edge ({i}, {j}) is not present")
    eid = g.edge_id(i, j)
    g2 = g.without_edge(i, j)
    if not is_connected(g2):
        raise EventError(f"deleting ({i}, {j}) disconnects the network")
    if state.m.contains(i, j):
        m2 = state.m.without(i, j)
        # every augmenting path of M - (i, j) ends at i or j
        path = augmenting_path_from(g2, m2, (i, j))
        branch = "delete-matched"
        if path is not None:
            m2 = augment(m2, path, g2)
            branch = "delete-augment"
        return DynamicState(g2, m2, connect_matching(g2, m2), state.epoch + 1, branch)
    if eid in state.hub.hub_edges:
        return DynamicState(g2, state.m, connect_matching(g2, state.m), state.epoch + 1, "delete-connector")
    return DynamicState(g2, state.m, state.hub.remap_after_delete(eid), state.epoch + 1, "delete-unchanged")


def apply_event(state: DynamicState, event: DynamicEvent) -> DynamicState:
    if event.kind == INSERT:
        return apply_insert(state, event.i, event.j)
    if event.kind == DELETE:
        return apply_delete(state, event.i, event.j)
    raise EventError(f"unknown event kind {event.kind!r}")


def check_state(state: DynamicState) -> list[str]:
    """Invariant violations of ``state``; empty when it is consistent."""
    problems = []
    try:
        state.m.validate(state.g)
    except StructureError as exc:
        problems.append(f"matching: {exc}")
        return problems
    if not is_maximum(state.g, state.m):
        problems.append("matching is not maximum")
    cert = cds_certify(state.hub, line_graph(state.g))
    if not cert:
        problems.append(f"hub: {cert.reason}")
    return problems


def parse_event_log(lines: Iterable[str]) -> list[tuple[int, DynamicEvent]]:
    """Parse ``epoch kind i j`` lines; returns ``(line number, event)`` pairs."""
    events = []
    for lineno, raw in enumerate(lines, start=1):
        if not raw.strip():
            continue
        parts = raw.split()
        if len(parts) != 4 or parts[1] not in (INSERT, DELETE):
            raise GraphFormatError(f"expected 'epoch insert|delete i j', got {raw!r}", line=lineno)
        try:
            epoch, i, j = int(parts[0]), int(parts[2]), int(parts[3])
        except ValueError:
            raise GraphFormatError(f"non-integer field in {raw!r}", line=lineno) from None
        events.append((lineno, DynamicEvent(parts[1], i, j, epoch)))
    return events


def read_event_log(path) -> list[tuple[int, DynamicEvent]]:
    return parse_event_log(Path(path).read_text(encoding="utf-8").splitlines())


def write_event_log(events: Iterable[DynamicEvent], path) -> None:
    Path(path).write_text("".join(e.to_line() + "\n" for e in events), encoding="utf-8")


def replay(state: DynamicState, events: Iterable[tuple[int, DynamicEvent]]) -> DynamicState:
    """Apply logged events in order; errors name the offending log line."""
    for lineno, event in events:
        if event.epoch != state.epoch + 1:
            raise EventError(f"line {lineno}: expected epoch {state.epoch + 1}, got {event.epoch}")
        try:
            state = apply_event(state, event)
        except EventError as exc:
            raise EventError(f"line {lineno}: {exc}") from None
    return state


def save_state(state: DynamicState, directory) -> None:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    write_edge_list(state.g, d / "network.edgelist")
    (d / "matching.txt").write_text("".join(f"{u} {v}\n" for u, v in state.m.pairs()), encoding="utf-8")
    (d / "hub.txt").write_text(state.hub.serialize(), encoding="utf-8")
    (d / "epoch.txt").write_text(f"{state.epoch}\n", encoding="utf-8")


def load_state(directory) -> DynamicState:
    d = Path(directory)
    g = read_edge_list(d / "network.edgelist")
    pairs = []
    for lineno, line in enumerate((d / "matching.txt").read_text(encoding="utf-8").splitlines(), start=1):
        if line.strip():
            try:
                u, v = (int(t) for t in line.split())
            except ValueError:
                raise GraphFormatError(f"bad matching line {line!r}", line=lineno) from None
            pairs.append((u, v))
    m = Matching.from_pairs(g.n, pairs)
    m.validate(g)
    hub = HubSet.parse((d / "hub.txt").read_text(encoding="utf-8"))
    epoch_file = d / "epoch.txt"
    epoch = int(epoch_file.read_text().strip()) if epoch_file.exists() else 0
    return DynamicState(g, m, hub, epoch, "loaded")


def random_deletion(state: DynamicState, rng, attempts: int = 100) -> Optional[tuple[int, int]]:
    """A uniformly drawn link whose removal keeps the network connected."""
    g = state.g
    if g.m == 0:
        return None
    for _ in range(attempts):
        u, v = g.edges[int(rng.integers(g.m))]
        if is_connected(g.without_edge(u, v)):
            return (u, v)
    return None


def random_insertion(state: DynamicState, rng, attempts: int = 1000) -> Optional[tuple[int, int]]:
    """A uniformly drawn vertex pair that is not yet a link."""
    g = state.g
    if g.n < 2:
        return None
    for _ in range(attempts):
        u, v = (int(t) for t in rng.choice(g.n, size=2, replace=False))
        if not g.has_edge(u, v):
            return (min(u, v), max(u, v))
    return None

