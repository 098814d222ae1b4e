import numpy as np
import pytest

from hubtomo.dynamic import (
    DELETE,
    INSERT,
    DynamicEvent,
    apply_delete,
    apply_event,
    apply_insert,
    check_state,
    initial_state,
    load_state,
    parse_event_log,
    random_deletion,
    random_insertion,
    read_event_log,
    replay,
    rerun_baseline,
    save_state,
    write_event_log,
)
from hubtomo.errors import EventError, GraphFormatError
from hubtomo.graph import Network, generate_ba, line_graph
from hubtomo.hub import cds_certify
from hubtomo.matching import max_matching

from conftest import cycle_graph, path_graph


def assert_consistent(state):
    assert check_state(state) == []
    assert state.m.cardinality == max_matching(state.g).cardinality


class TestInsert:
    def test_between_exposed_vertices(self):
        g = Network(4, [(0, 1), (0, 2), (0, 3)])
        state = initial_state(g)
        assert state.m.is_exposed(2) and state.m.is_exposed(3)
        after = apply_insert(state, 2, 3)
        assert after.branch == "insert-augment"
        assert after.m.cardinality == state.m.cardinality + 1
        assert_consistent(after)

    def test_between_matched_vertices(self):
        state = initial_state(cycle_graph(6))
        after = apply_insert(state, 0, 3)
        assert after.branch == "insert-unchanged"
        assert after.m == state.m and after.hub == state.hub
        assert cds_certify(after.hub, line_graph(after.g))

    def test_duplicate_and_bad_endpoints(self):
        state = initial_state(path_graph(4))
        for i, j in [(0, 1), (2, 2), (0, 9)]:
            with pytest.raises(EventError):
                apply_insert(state, i, j)

    def test_hundred_random_inserts(self):
        rng = np.random.default_rng(0)
        state = initial_state(generate_ba(100, 6, 1))
        for _ in range(100):
            before = state.m.cardinality
            state = apply_insert(state, *random_insertion(state, rng))
            assert_consistent(state)
            assert state.m.cardinality - before in (0, 1)


class TestDelete:
    def test_plain_edge(self):
        g = generate_ba(60, 6, 2)
        state = initial_state(g)
        rng = np.random.default_rng(3)
        while True:
            u, v = random_deletion(state, rng)
            if g.edge_id(u, v) not in state.hub.hub_edges:
                break
        after = apply_delete(state, u, v)
        assert after.branch == "delete-unchanged"
        assert after.m == state.m
        assert len(after.hub) == len(state.hub)
        assert_consistent(after)

    def test_connector_edge(self):
        g = cycle_graph(4)
        state = initial_state(g)
        (eid,) = state.hub.connector_edges
        after = apply_delete(state, *g.edges[eid])
        assert after.branch == "delete-connector"
        assert after.m == state.m
        assert_consistent(after)

    def test_matched_edge_with_augmenting_path(self):
        g = cycle_graph(6)
        state = initial_state(g)
        u, v = state.m.pairs()[0]
        after = apply_delete(state, u, v)
        assert after.branch == "delete-augment"
        assert after.m.cardinality == 3
        assert_consistent(after)

    def test_matched_edge_without_augmenting_path(self):
        # triangle 0-1-2 with pendant 3: removing (0, 1) leaves a star on 2
        g = Network(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
        state = initial_state(g)
        assert state.m.contains(0, 1)
        after = apply_delete(state, 0, 1)
        assert after.branch == "delete-matched"
        assert after.m.cardinality == 1
        assert_consistent(after)

    def test_errors(self):
        state = initial_state(path_graph(4))
        with pytest.raises(EventError):
            apply_delete(state, 0, 2)
        with pytest.raises(EventError, match="disconnects"):
            apply_delete(state, 1, 2)

    def test_hundred_random_deletes(self):
        rng = np.random.default_rng(1)
        state = initial_state(generate_ba(100, 10, 4))
        for _ in range(100):
            before = state.m.cardinality
            state = apply_delete(state, *random_deletion(state, rng))
            assert_consistent(state)
            assert before - state.m.cardinality in (0, 1)


def test_rerun_agrees_with_update():
    rng = np.random.default_rng(7)
    state = initial_state(generate_ba(80, 6, 0))
    for step in range(20):
        if step % 2:
            state = apply_insert(state, *random_insertion(state, rng))
        else:
            state = apply_delete(state, *random_deletion(state, rng))
        fresh = rerun_baseline(state)
        assert fresh.m.cardinality == state.m.cardinality
        assert rerun_baseline(fresh).hub == fresh.hub


class TestEventLog:
    def make_log(self, state, rng, count):
        events = []
        for _ in range(count):
            if rng.random() < 0.5:
                kind, (i, j) = INSERT, random_insertion(state, rng)
            else:
                kind, (i, j) = DELETE, random_deletion(state, rng)
            event = DynamicEvent(kind, i, j, state.epoch + 1)
            state = apply_event(state, event)
            events.append(event)
        return events, state

    def test_replay_reproduces_final_state(self, tmp_path):
        start = initial_state(generate_ba(50, 4, 3))
        events, final = self.make_log(start, np.random.default_rng(2), 30)
        write_event_log(events, tmp_path / "events.log")
        save_state(start, tmp_path / "start")
        again = replay(load_state(tmp_path / "start"), read_event_log(tmp_path / "events.log"))
        assert again.g == final.g and again.m == final.m
        assert again.hub.sha256() == final.hub.sha256()
        assert again.epoch == 30

    def test_state_roundtrip(self, tmp_path):
        state = initial_state(generate_ba(40, 6, 1))
        save_state(state, tmp_path)
        back = load_state(tmp_path)
        assert (back.g, back.m, back.hub, back.epoch) == (state.g, state.m, state.hub, state.epoch)

    @pytest.mark.parametrize(
        "line",
        ["1 insert 0", "1 upsert 0 1", "x insert 0 1", "1 delete 0 y"],
    )
    def test_malformed_lines(self, line):
        with pytest.raises(GraphFormatError) as info:
            parse_event_log(["1 insert 0 2", line])
        assert info.value.line == 2

    def test_epoch_gap_names_line(self):
        state = initial_state(path_graph(4))
        with pytest.raises(EventError, match="line 2"):
            replay(state, parse_event_log(["1 insert 0 2", "3 insert 0 3"]))

    def test_bad_event_names_line(self):
        state = initial_state(path_graph(4))
        with pytest.raises(EventError, match="line 1"):
            replay(state, parse_event_log(["1 delete 0 3"]))

    def test_blank_lines_skipped(self):
        assert len(parse_event_log(["", "1 insert 0 2", "  "])) == 1
