import itertools
import random
from collections import deque

import pytest

from hubtomo.graph import Network, is_connected

ACCEPTANCE_LINES: list[str] = []


def brute_force_matching_size(g: Network) -> int:
    """Largest set of pairwise disjoint edges, by exhaustive enumeration."""
    edges = g.edges
    for size in range(min(len(edges), g.n // 2), 0, -1):
        for combo in itertools.combinations(edges, size):
            ends = [v for e in combo for v in e]
            if len(set(ends)) == len(ends):
                return size
    return 0


def bfs_distances(adjacency, root):
    dist = {root: 0}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in adjacency[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def random_graph(rng: random.Random, n: int, p: float) -> Network:
    return Network(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def random_connected_graph(rng: random.Random, n: int, p: float) -> Network:
    """Random spanning tree plus independent extra edges with probability p."""
    edges = set()
    for v in range(1, n):
        u = rng.randrange(v)
        edges.add((u, v))
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.add((u, v))
    g = Network(n, sorted(edges))
    assert is_connected(g)
    return g


def path_graph(k: int) -> Network:
    return Network(k, [(i, i + 1) for i in range(k - 1)])


def cycle_graph(k: int) -> Network:
    return Network(k, [(i, (i + 1) % k) for i in range(k)])


def star_graph(leaves: int) -> Network:
    return Network(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_graph(k: int) -> Network:
    return Network(k, [(u, v) for u in range(k) for v in range(u + 1, k)])


@pytest.fixture
def record_criterion():
    def record(number: int, name: str, passed: bool, detail: str = ""):
        status = "PASS" if passed else "FAIL"
        ACCEPTANCE_LINES.append(f"[{status}] criterion {number:2d}: {name}" + (f" ({detail})" if detail else ""))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
