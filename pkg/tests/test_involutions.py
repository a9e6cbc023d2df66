import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIXTURES
from rhp.enumeration import enumerate_set
from rhp.errors import MalformedState, NonTermination, PrecondViolation, ShapeMismatch
from rhp.forest import ForestTuple, SetName, classify, in_set, weight_multiset
from rhp.involutions import (
    CrabwalkContext,
    TraceLog,
    crabwalk,
    crabwalk_context,
    crabwalk_detail,
    garsia_milne_backward,
    garsia_milne_forward,
    phi0,
    phi1,
    phi1_detail,
    phi1_step,
    phi2,
    select_phi2_cycle,
    step_bound_from_env,
    to_dot,
)
from rhp.suites import bijection_suite, involution_suite


def is_subsequence(needles, haystack):
    it = iter(haystack)
    return all(any(x == y for y in it) for x in needles)


class TestWorkedExample:
    def test_reaches_final_tuple(self, worked_initial, worked_final):
        out, _ = garsia_milne_forward(worked_initial)
        assert out == worked_final

    def test_every_figure_appears_in_order(self, worked_states):
        _, log = garsia_milne_forward(worked_states[0])
        assert is_subsequence(worked_states, log.changed_snapshots())

    def test_manifest_matches_golden_bytes(self, worked_initial):
        _, log = garsia_milne_forward(worked_initial)
        assert log.manifest_json() == (FIXTURES / "worked_example_trace.json").read_text()

    def test_backward_recovers_initial(self, worked_initial, worked_final):
        back, _ = garsia_milne_backward(worked_final)
        assert back == worked_initial

    def test_replay_reproduces_snapshots(self, worked_initial):
        _, log = garsia_milne_forward(worked_initial)
        assert log.replay() == log.snapshots()

    def test_crabwalk_goes_back_into_3_then_forward_out_of_4(self, worked_states):
        t = worked_states[4]
        ctx = crabwalk_context(t, 0, 1)
        assert (ctx.m, ctx.v, ctx.A_index, ctx.F_index) == (1, 3, 1, 0)
        res = crabwalk_detail(t, ctx)
        assert [(m.edge.pair, m.from_graph) for m in res.moves] == [((4, 3), 1), ((4, 1), 0)]
        # ends in pi, so phi1 turns around and runs phi1^2 forward again
        assert res.end_index == 0
        assert res.tuple == worked_states[5]

    def test_phi2_picks_middle_graph_cycle_through_1(self, worked_states):
        # after the walk above and one more forward step the tuple has two red cycles;
        # the one recolored first is owned by the graph holding node 1
        t = worked_states[6]
        c = select_phi2_cycle(t)
        assert c.graph_indices == {1} and 1 in c.nodes

    def test_write_emits_numbered_dot_and_manifest(self, worked_initial, tmp_path):
        _, log = garsia_milne_forward(worked_initial)
        paths = log.write(tmp_path)
        names = sorted(p.name for p in paths)
        assert names[0] == "step_000.dot" and names[-1] == "trace.json"
        assert len(names) == len(log.steps) + 2
        manifest = json.loads((tmp_path / "trace.json").read_text())
        assert [s["involution"] for s in manifest["steps"]][:3] == ["phi0", "phi1", "phi1"]
        assert "color=red style=dashed" in (tmp_path / "step_004.dot").read_text()


class TestToggles:
    def test_phi0_fixes_s0(self, worked_initial):
        assert phi0(worked_initial) == worked_initial

    def test_phi2_fixes_s3(self, worked_final):
        assert phi2(worked_final) == worked_final

    def test_phi0_rejects_s2_shape(self, worked_final):
        with pytest.raises(ShapeMismatch):
            phi0(worked_final)

    def test_phi2_rejects_s1_shape(self, worked_initial):
        with pytest.raises(ShapeMismatch):
            phi2(worked_initial)

    def test_phi0_toggles_largest_cycle_in_first_graph(self):
        t = ForestTuple.from_edges(5, 2, [[(1, 2), (2, 1), (3, 0), (4, 5), (5, 4)], [(3, 0), (4, 0), (5, 0)]])
        u = phi0(t)
        red = {e.pair for _, e in u.edges() if e.color.value == "red"}
        assert red == {(4, 5), (5, 4)}
        assert phi0(u) == t


class TestPhi1:
    def test_k1_is_identity(self):
        t = ForestTuple.from_edges(2, 1, [[(1, 0), (2, 1)]])
        assert phi1(t) == t
        assert garsia_milne_forward(t)[0] == t
        assert garsia_milne_backward(t)[0] == t

    def test_black_pivot_moves_one_edge(self, worked_initial):
        out, info = phi1_step(worked_initial, 0, 1)
        assert info.pivot == 1 and info.moved and info.ended_in_A
        assert [m.edge.pair for m in info.moves] == [(1, 5)]

    def test_needs_shape(self):
        t = ForestTuple.from_edges(3, 2, [[(1, 0), (3, 0)], [(2, 0), (3, 0)]])
        with pytest.raises(ShapeMismatch):
            phi1(ForestTuple.from_edges(3, 2, [[(3, 0)], [(3, 0)]]))
        with pytest.raises(PrecondViolation):
            crabwalk_context(t, 0, 1)

    def test_crabwalk_needs_red_pivot(self, worked_initial):
        with pytest.raises(PrecondViolation):
            crabwalk(worked_initial, CrabwalkContext(0, 1, 0, 1, 1, None))

    def test_two_red_edges_into_a_node_is_malformed(self):
        t = ForestTuple.from_edges(4, 2, [
            [(1, 3, "red"), (2, 0), (3, 1, "red"), (4, 3, "red")],
            [(3, 4, "red"), (4, 3, "red")],
        ])
        with pytest.raises(MalformedState):
            phi1(t)

    @pytest.mark.parametrize("n,k", [(2, 2), (3, 1), (3, 2), (3, 3)])
    def test_suite_small(self, n, k):
        report = involution_suite(n, k)
        assert report.ok, report.failures

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_sampled_s2_elements_at_4_3(self, data):
        pool = _pool(4, 3, "S2")
        t = pool[data.draw(st.integers(0, len(pool) - 1))]
        u, infos = phi1_detail(t)
        assert classify(u).set is not SetName.INVALID
        assert phi1(u) == t
        assert weight_multiset(u) == weight_multiset(t)


_pools: dict = {}


def _pool(n, k, which):
    key = (n, k, which)
    if key not in _pools:
        _pools[key] = list(enumerate_set(n, k, which))
    return _pools[key]


class TestDriver:
    @pytest.mark.parametrize("n,k", [(2, 2), (3, 1), (3, 2), (3, 3), (4, 4)])
    def test_bijection_small(self, n, k):
        report = bijection_suite(n, k)
        assert report.ok, report.failures
        assert report.counts["images"] == report.counts["S3"]

    @settings(max_examples=40, deadline=None)
    @given(st.data())
    def test_sampled_round_trips_at_5_2(self, data):
        pool = _pool(5, 2, "S0")
        t = pool[data.draw(st.integers(0, len(pool) - 1))]
        u, _ = garsia_milne_forward(t)
        assert in_set(u, "S3") and weight_multiset(u) == weight_multiset(t)
        assert garsia_milne_backward(u)[0] == t

    def test_inputs_checked(self, worked_initial, worked_final):
        with pytest.raises(ShapeMismatch):
            garsia_milne_forward(worked_final)
        with pytest.raises(ShapeMismatch):
            garsia_milne_backward(worked_initial)

    def test_step_bound(self, worked_initial, monkeypatch):
        with pytest.raises(NonTermination):
            garsia_milne_forward(worked_initial, step_bound=2)
        monkeypatch.setenv("RHP_STEP_BOUND", "3")
        assert step_bound_from_env() == 3
        with pytest.raises(NonTermination):
            garsia_milne_forward(worked_initial)
        monkeypatch.setenv("RHP_STEP_BOUND", "100")
        assert garsia_milne_forward(worked_initial)[0].k == 3


def test_dot_output():
    t = ForestTuple.from_edges(2, 2, [[(1, 2, "red"), (2, 1, "red")], []])
    text = to_dot(t, name="x", label="demo")
    assert text.startswith("digraph x") and text.count("color=red style=dashed") == 2


def test_trace_log_records_copies(worked_initial):
    log = TraceLog(worked_initial.copy())
    t = worked_initial.copy()
    log.record("phi0", "identity", t)
    t.graphs[0].pop(1)
    assert log.snapshots()[0] == worked_initial
