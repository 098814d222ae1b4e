import random
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hubtomo.errors import DisconnectedError, GraphFormatError, ParameterError
from hubtomo.graph import (
    Network,
    bfs_tree,
    eccentricities,
    eccentricity_center,
    generate_ba,
    is_connected,
    line_graph,
    parse_edge_list,
    read_edge_list,
    write_edge_list,
)

from conftest import bfs_distances, complete_graph, path_graph, random_graph, star_graph


def expected_ba_edges(n, d, m0=None):
    m0 = d // 2 + 1 if m0 is None else m0
    return comb(m0, 2) + (n - m0) * (d // 2)


class TestNetwork:
    def test_rejects_self_loops_and_parallel_edges(self):
        with pytest.raises(ParameterError):
            Network(3, [(0, 0)])
        with pytest.raises(ParameterError):
            Network(3, [(0, 1), (1, 0)])
        with pytest.raises(ParameterError):
            Network(2, [(0, 2)])

    def test_edge_ids_follow_creation_order(self):
        g = Network(4, [(2, 3), (0, 1), (1, 2)])
        assert g.edges == ((2, 3), (0, 1), (1, 2))
        assert g.edge_id(3, 2) == 0
        assert g.edge_id(1, 2) == 2
        assert g.neighbors(1) == (0, 2)

    def test_adjacency_consistent_with_edge_list(self):
        g = generate_ba(60, 6, seed=3)
        rows = [set(g.incident(v)) for v in range(g.n)]
        for eid, (u, v) in enumerate(g.edges):
            assert sum(eid in row for row in rows) == 2
            assert eid in rows[u] and eid in rows[v]

    def test_with_and_without_edge(self):
        g = path_graph(4)
        h = g.with_edge(0, 3)
        assert h.m == 4 and h.edge_id(0, 3) == 3
        k = h.without_edge(1, 2)
        assert k.edges == ((0, 1), (2, 3), (0, 3))
        assert g.m == 3  # original untouched
        with pytest.raises(ParameterError):
            g.with_edge(0, 1)


class TestGenerateBA:
    def test_n500_d10_edge_count(self):
        g = generate_ba(500, 10, seed=11)
        # clique on 6 vertices plus 5 edges for each of the remaining 494
        assert g.m == expected_ba_edges(500, 10) == 2485
        assert 9 <= 2 * g.m / g.n <= 11

    @pytest.mark.parametrize("seed", range(5))
    def test_n6_d2_is_a_tree(self, seed):
        g = generate_ba(6, 2, seed)
        assert g.n == 6 and g.m == expected_ba_edges(6, 2) == 5
        assert is_connected(g)

    def test_parameter_errors(self):
        with pytest.raises(ParameterError):
            generate_ba(3, 4, seed=0)
        with pytest.raises(ParameterError):
            generate_ba(10, 3, seed=0)
        with pytest.raises(ParameterError):
            generate_ba(10, 0, seed=0)

    def test_deterministic_per_seed(self):
        assert generate_ba(80, 6, 5) == generate_ba(80, 6, 5)
        assert generate_ba(80, 6, 5) != generate_ba(80, 6, 6)

    def test_initial_clique_knob(self):
        g = generate_ba(50, 4, seed=2, m0=5)
        assert g.m == expected_ba_edges(50, 4, m0=5)
        with pytest.raises(ParameterError):
            generate_ba(50, 4, seed=2, m0=2)

    @pytest.mark.parametrize("n,d", [(100, 4), (100, 10), (200, 20), (300, 6)])
    def test_average_degree_within_ten_percent(self, n, d):
        for seed in range(3):
            g = generate_ba(n, d, seed)
            assert abs(g.average_degree() - d) <= 0.1 * d

    @settings(max_examples=40, deadline=None)
    @given(n=st.integers(8, 120), half=st.integers(1, 4), seed=st.integers(0, 2**32 - 1))
    def test_connected_degree_sum_and_count(self, n, half, seed):
        d = 2 * half
        if n <= half + 1:
            return
        g = generate_ba(n, d, seed)
        assert is_connected(g)
        assert int(g.degrees().sum()) == 2 * g.m
        assert g.m == expected_ba_edges(n, d)

    def test_hub_vertices_get_heavy_degree(self):
        g = generate_ba(2000, 4, seed=1)
        deg = g.degrees()
        # preferential attachment gives a heavy tail, far above the mean
        assert deg.max() > 8 * deg.mean()


class TestLineGraph:
    def test_path(self):
        lg = line_graph(path_graph(3))
        assert lg.num_vertices == 2 and lg.edges == ((0, 1),)

    def test_triangle(self):
        lg = line_graph(complete_graph(3))
        assert sorted(lg.edges) == [(0, 1), (0, 2), (1, 2)]

    def test_star(self):
        g = star_graph(4)
        lg = line_graph(g)
        deg = g.degrees()
        assert len(lg.edges) == 6 == (int((deg**2).sum()) - 2 * g.m) // 2

    def test_matches_pairwise_incidence(self):
        rng = random.Random(7)
        for _ in range(20):
            g = random_graph(rng, rng.randint(2, 12), 0.4)
            lg = line_graph(g)
            expected = {
                (a, b)
                for a in range(g.m)
                for b in range(a + 1, g.m)
                if set(g.edges[a]) & set(g.edges[b])
            }
            assert set(lg.edges) == expected
            for v in range(lg.num_vertices):
                assert set(lg.neighbors(v)) == {b for a, b in expected if a == v} | {a for a, b in expected if b == v}

    def test_degree_identity_on_fifty_graphs(self):
        rng = random.Random(2024)
        for i in range(50):
            if i % 2:
                g = generate_ba(rng.randint(10, 150), 2 * rng.randint(1, 5), seed=i)
            else:
                g = random_graph(rng, rng.randint(2, 40), rng.random())
            deg = g.degrees()
            assert 2 * len(line_graph(g).edges) == int((deg**2).sum()) - 2 * g.m


class TestConnectivity:
    def test_whole_graph(self):
        assert is_connected(generate_ba(40, 4, 0))
        assert not is_connected(Network(3, [(0, 1)]))

    def test_single_vertex_subset(self):
        assert is_connected(path_graph(3), restrict_to=[2])

    def test_path_endpoints_subset(self):
        assert not is_connected(path_graph(3), restrict_to={0, 2})

    def test_empty_subset_rejected(self):
        with pytest.raises(ParameterError):
            is_connected(path_graph(3), restrict_to=[])

    def test_line_graph_subset(self):
        lg = line_graph(path_graph(5))
        assert is_connected(lg, restrict_to=[1, 2])
        assert not is_connected(lg, restrict_to=[0, 3])


class TestBFSTree:
    def test_complete_graph(self):
        lg = line_graph(star_graph(4))  # K4
        tree = bfs_tree(lg, 0)
        assert tree.height == 1 and tree.non_leaves() == [0]

    def test_path_from_end(self):
        lg = line_graph(path_graph(6))  # path on 5 line-graph nodes
        tree = bfs_tree(lg, 0)
        assert tree.height == 4 and len(tree.non_leaves()) == 4

    def test_tree_input_is_reproduced(self):
        rng = random.Random(3)
        for _ in range(10):
            n = rng.randint(2, 30)
            edges = [(rng.randrange(v), v) for v in range(1, n)]
            g = Network(n, edges)
            tree = bfs_tree(g, rng.randrange(n))
            assert tree.tree_edges() == set(g.edges)

    def test_depth_labels(self):
        g = generate_ba(50, 4, 1)
        tree = bfs_tree(g, 7)
        dist = bfs_distances([g.neighbors(v) for v in range(g.n)], 7)
        assert list(tree.depth) == [dist[v] for v in range(g.n)]
        for v, p in enumerate(tree.parent):
            if p >= 0:
                assert tree.depth[p] + 1 == tree.depth[v]

    def test_disconnected_names_vertex(self):
        with pytest.raises(DisconnectedError) as info:
            bfs_tree(Network(4, [(0, 1), (2, 3)]), 0)
        assert info.value.vertex == 2


class TestEccentricityCenter:
    def test_path_middle(self):
        assert eccentricity_center(line_graph(path_graph(6))) == 2

    def test_complete_graph_tie_break(self):
        assert eccentricity_center(line_graph(star_graph(5))) == 0

    def test_star_shaped_line_graph(self):
        # spider with four two-edge legs: the line graph is K4 on the inner
        # edges with one pendant per inner edge; inner edges have eccentricity 2
        g = Network(9, [(0, 1), (0, 2), (0, 3), (0, 4), (1, 5), (2, 6), (3, 7), (4, 8)])
        assert eccentricity_center(line_graph(g)) == 0

    def test_star_line_graph_center(self):
        # star K(1,4) as a line graph: the claw-free construction is the line
        # graph of a path with a pendant triangle; brute force picks the hub
        lg = line_graph(Network(5, [(0, 1), (1, 2), (1, 3), (3, 4), (2, 3)]))
        ecc = [max(bfs_distances(lg.adjacency, v).values()) for v in range(lg.num_vertices)]
        assert eccentricity_center(lg) == ecc.index(min(ecc))

    def test_against_pure_python_bfs(self):
        for seed in range(5):
            lg = line_graph(generate_ba(40, 4, seed))
            ecc = [max(bfs_distances(lg.adjacency, v).values()) for v in range(lg.num_vertices)]
            assert eccentricities(lg).tolist() == ecc
            center = eccentricity_center(lg)
            assert ecc[center] == min(ecc) and center == ecc.index(min(ecc))

    def test_disconnected(self):
        lg = line_graph(Network(4, [(0, 1), (2, 3)]))
        with pytest.raises(DisconnectedError):
            eccentricity_center(lg)

    def test_deadline(self):
        lg = line_graph(generate_ba(60, 4, 0))
        with pytest.raises(TimeoutError):
            eccentricities(lg, deadline=0.0)


class TestEdgeListFormat:
    def test_roundtrip(self, tmp_path):
        g = generate_ba(30, 4, 9)
        path = tmp_path / "g.txt"
        write_edge_list(g, path)
        raw = path.read_bytes()
        assert raw.startswith(b"30 57\n") and b"\r" not in raw
        assert read_edge_list(path) == g

    @pytest.mark.parametrize(
        "text,line",
        [
            ("3 2\n0 1\n1 1\n", 3),
            ("3 2\n0 1\n1 0\n", 3),
            ("3 1\n0 x\n", 2),
            ("3 1\n0 5\n", 2),
            ("oops\n", 1),
            ("3 2\n0 1\n", 1),
        ],
    )
    def test_errors_carry_line_numbers(self, text, line):
        with pytest.raises(GraphFormatError) as info:
            parse_edge_list(text.splitlines())
        assert info.value.line == line

    def test_numpy_degrees(self):
        g = star_graph(3)
        assert isinstance(g.degrees(), np.ndarray)
        assert g.degrees().tolist() == [3, 1, 1, 1]
