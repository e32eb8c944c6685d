import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from recolor.errors import ParameterError, ParseError
from recolor.graph_core import Coloring, Graph, complete_graph, cycle_graph, is_proper, path_graph
from recolor.pipeline import parallel_2delta2
from recolor.schedule import (
    IMPROPER,
    NO_OP,
    NOT_INDEPENDENT,
    WRONG_FINAL,
    RestrictedSchedule,
    Schedule,
    SlotBuilder,
    check_vertex_schedule,
    per_vertex_schedules,
    random_step_orders,
    replay,
    restrict,
    reverse,
    schedule_from_json,
    schedule_to_json,
    verify_restricted,
    verify_schedule,
    vertex_schedule_to_json,
)

from strategies import instances

TRIANGLE = complete_graph(3)


class TestVerify:
    def test_empty_identity(self):
        c = Coloring((0, 1, 2), 3)
        assert verify_schedule(TRIANGLE, c, Schedule(), c).ok

    def test_no_op_reported_first(self):
        g = path_graph(3)
        c = Coloring((0, 1, 0), 3)
        rep = verify_schedule(g, c, Schedule((((0, 2), (2, 0)),)))
        assert not rep.ok
        assert (rep.step, rep.reason) == (0, NO_OP)

    def test_single_proper_move(self):
        src = Coloring((0, 1, 2), 4)
        rep = verify_schedule(TRIANGLE, src, Schedule((((0, 3),),)), Coloring((3, 1, 2), 4))
        assert rep.ok and rep.final == (3, 1, 2)

    def test_not_independent(self):
        g = path_graph(3)
        rep = verify_schedule(g, Coloring((0, 1, 0), 3), Schedule((((0, 2), (1, 0)),)))
        assert rep.reason == NOT_INDEPENDENT

    def test_improper_result(self):
        g = path_graph(3)
        rep = verify_schedule(g, Coloring((0, 1, 0), 3), Schedule((((0, 1),),)))
        assert (rep.step, rep.reason) == (0, IMPROPER)

    def test_wrong_final(self):
        c = Coloring((0, 1, 2), 4)
        rep = verify_schedule(TRIANGLE, c, Schedule(), Coloring((3, 1, 2), 4))
        assert rep.reason == WRONG_FINAL
        assert "vertex 0" in rep.summary()

    def test_earliest_violation_only(self):
        g = path_graph(3)
        s = Schedule((((0, 2),), ((1, 2),), ((1, 1),)))
        rep = verify_schedule(g, Coloring((0, 1, 0), 3), s)
        assert rep.step == 1


class TestRestrict:
    def test_single_class(self):
        g = path_graph(3)
        rs = restrict(g, Coloring((0, 1, 0), 3), Schedule((((0, 2), (2, 2)),)))
        assert rs.steps == ((0, 2, frozenset({0, 2})),)

    def test_two_classes_ascending(self):
        g = Graph.from_edges(3, [])
        rs = restrict(g, Coloring((0, 0, 1), 2), Schedule((((0, 1), (2, 0)),)))
        assert rs.steps == ((0, 1, frozenset({0})), (1, 0, frozenset({2})))

    def test_empty(self):
        assert restrict(TRIANGLE, Coloring((0, 1, 2), 3), Schedule()).steps == ()

    def test_invalid_rejected(self):
        with pytest.raises(ParameterError):
            restrict(path_graph(2), Coloring((0, 1), 2), Schedule((((0, 1),),)))

    def test_restricted_rejects_a_equals_b(self):
        with pytest.raises(ParameterError):
            RestrictedSchedule(((1, 1, frozenset({0})),))


class TestReverse:
    def test_empty(self):
        assert reverse(Schedule(), TRIANGLE, Coloring((0, 1, 2), 3)) == Schedule()

    def test_single_step(self):
        g = Graph.from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
        src = Coloring((0, 0, 1, 2), 4)
        assert reverse(Schedule((((0, 3),),)), g, src) == Schedule((((0, 0),),))

    def test_invalid_rejected(self):
        with pytest.raises(ParameterError):
            reverse(Schedule((((0, 1),),)), path_graph(2), Coloring((0, 1), 2))


class TestPerVertex:
    def test_empty(self):
        vs = per_vertex_schedules(Schedule(), Coloring((0, 1, 2), 3))
        assert vs.trajectories == ((0,), (1,), (2,))

    def test_one_step_k4(self):
        g = complete_graph(4)
        src = Coloring((0, 1, 2, 3), 5)
        vs = per_vertex_schedules(Schedule((((0, 4),),)), src)
        assert vs.trajectories == ((0, 4), (1, 1), (2, 2), (3, 3))
        assert check_vertex_schedule(g, vs, src)

    def test_algorithm_one_on_c4(self):
        g = cycle_graph(4)
        src, dst = Coloring((0, 1, 0, 1), 6), Coloring((1, 0, 1, 0), 6)
        vs = per_vertex_schedules(parallel_2delta2(g, src, dst), src)
        assert all(len(t) == 13 for t in vs.trajectories)
        assert check_vertex_schedule(g, vs, src, dst)


class TestJson:
    def test_schedule_round_trip(self):
        s = Schedule((((2, 1), (0, 3)), ()))
        text = schedule_to_json(s)
        assert text == '{"steps":[[{"v":0,"to":3},{"v":2,"to":1}],[]]}'
        assert schedule_from_json(text) == s

    def test_malformed(self):
        with pytest.raises(ParseError):
            schedule_from_json('{"steps":[[{"v":0}]]}')

    def test_vertex_schedule_keys(self):
        vs = per_vertex_schedules(Schedule((((0, 2),),)), Coloring((0, 1), 3))
        assert json.loads(vertex_schedule_to_json(vs)) == {"0": [0, 2], "1": [1, 1]}


class TestSlots:
    def test_prune_and_keep(self):
        b = SlotBuilder()
        b.add(0, 1, 2)
        b.add(3, 0, 1)
        assert b.to_schedule().length == 2
        assert b.to_schedule(prune=False).length == 4


@settings(max_examples=300, deadline=None)
@given(instances())
def test_restrict_round_trip(inst):
    g, src, s = inst
    rs = restrict(g, src, s)
    assert verify_restricted(g, src, rs, replay(src, s)).ok
    assert rs.length <= s.length * src.k * (src.k - 1)
    assert all(vs for _, _, vs in rs.steps)


@settings(max_examples=300, deadline=None)
@given(instances())
def test_reverse_involution(inst):
    g, src, s = inst
    end = replay(src, s)
    back = reverse(s, g, src)
    assert verify_schedule(g, end, back, src).ok
    assert back.total_recolorings == s.total_recolorings
    assert reverse(back, g, end) == s


@settings(max_examples=300, deadline=None)
@given(instances(), st.integers(min_value=0, max_value=2**32 - 1))
def test_sequentialization(inst, seed):
    g, src, s = inst
    flat = random_step_orders(s, random.Random(seed))
    assert verify_schedule(g, src, flat, replay(src, s)).ok


@settings(max_examples=200, deadline=None)
@given(instances())
def test_prefixes_proper(inst):
    g, src, s = inst
    assert verify_schedule(g, src, s).ok
    colors = list(src.colors)
    for step in s.steps:
        for v, c in step:
            colors[v] = c
        assert is_proper(g, colors)
