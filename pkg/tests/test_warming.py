import random

import pytest

from recolor.corpus import is_non_frozen, prism, random_cubic, seamed_prism_coloring, tiled_prism_coloring
from recolor.errors import ParameterError
from recolor.graph_core import (
    Coloring,
    bfs_distances,
    distance_d_mis,
    is_frozen_at,
    local_nonfrozen_radius,
    nonfrozen_distances,
)
from recolor.local_sim import RoundTrace
from recolor.schedule import verify_schedule
from recolor.warming import build_aux_graph, unfreeze_centralized, unfreeze_distributed


def seamed(m, rng):
    g = prism(m)
    while True:
        c = seamed_prism_coloring(m, 4, rng)
        if is_non_frozen(g, c.colors, 4):
            return g, c


def assert_members_stay_warm(g, c, res, members):
    """Once a member is non-frozen it stays non-frozen at every later member checkpoint."""
    colors = list(c.colors)
    marks = set(res.stats.get("checkpoints", [0]))
    warm = None
    for i, step in enumerate(res.schedule.steps + ((),)):
        if i in marks:
            now = {m for m in members if not is_frozen_at(g, colors, m, c.k)}
            if warm is not None:
                assert warm <= now
            warm = now
        for v, x in step:
            colors[v] = x


class TestAuxGraph:
    def test_prism_connected(self):
        g = prism(40)
        I = distance_d_mis(g, 15)
        aux = build_aux_graph(g, I, 15)
        assert aux.is_connected()
        for (a, b), path in aux.witness.items():
            assert len(path) - 1 <= 30

    def test_single_member(self):
        g = prism(10)
        aux = build_aux_graph(g, distance_d_mis(g, 15), 15)
        assert aux.members == (0,) and aux.adj == {0: ()}

    def test_corridor_edge(self):
        # members 0 and 40 on a prism of 80 columns, with 40 - 2*7 = 26 columns of corridor
        g = prism(80)
        aux = build_aux_graph(g, [0, 40], 15)
        assert aux.adj[0] == (40,)
        path = aux.path(0, 40)
        d0, d40 = bfs_distances(g, 0, limit=7), bfs_distances(g, 40, limit=7)
        assert path[0] in d0 and path[-1] in d40
        assert all(x not in d0 and x not in d40 for x in path[1:-1])
        assert aux.path(40, 0) == list(reversed(path))

    def test_needs_d15(self):
        with pytest.raises(ParameterError):
            build_aux_graph(prism(40), [0], 14)


class TestCentralized:
    def test_already_warm(self):
        g = prism(40)
        rng = random.Random(0)
        colors = [0] * g.n
        for v in range(g.n):
            colors[v] = min(x for x in range(4) if all(colors[u] != x for u in g.adj[v] if u < v))
        c = Coloring(tuple(colors), 4)
        I = [m for m in distance_d_mis(g, 15).members]
        assert all(not is_frozen_at(g, colors, m, 4) for m in I)
        res = unfreeze_centralized(g, c, I, 15)
        assert res.schedule.length == 0

    def test_one_member_short_ladder(self):
        g, c = seamed(20, random.Random(7))
        dist = nonfrozen_distances(g, c)
        m = min(v for v in range(g.n) if dist[v] == 3)
        res = unfreeze_centralized(g, c, [m], 15)
        # the ladder stops at the member's predecessor: three recolorings along one geodesic
        assert res.total == 3
        assert not is_frozen_at(g, res.coloring.colors, m, 4)
        assert verify_schedule(g, c, res.schedule, res.coloring).ok
        touched = [s[0][0] for s in res.schedule.steps]
        assert all(g.adjacent(a, b) for a, b in zip(touched, touched[1:]))

    def test_prism_120(self):
        rng = random.Random(11)
        for _ in range(3):
            g, c = seamed(120, rng)
            I = distance_d_mis(g, 15)
            res = unfreeze_centralized(g, c, I, 15)
            assert verify_schedule(g, c, res.schedule, res.coloring).ok
            assert all(not is_frozen_at(g, res.coloring.colors, m, 4) for m in I.members)
            assert res.total <= res.bound
            assert_members_stay_warm(g, c, res, I.members)

    def test_random_cubic(self):
        rng = random.Random(12)
        for n in (60, 100):
            g = random_cubic(n, rng)
            c = seamed_like_cubic(g, rng)
            I = distance_d_mis(g, 15)
            res = unfreeze_centralized(g, c, I, 15)
            assert verify_schedule(g, c, res.schedule, res.coloring).ok
            assert_members_stay_warm(g, c, res, I.members)

    def test_per_vertex_constant_across_n(self):
        rng = random.Random(13)
        worst = {}
        for m in (40, 80, 160, 320):
            worst[m] = max(unfreeze_centralized(*seamed(m, rng), distance_d_mis(prism(m), 15), 15).per_vertex_max for _ in range(3))
        assert max(worst.values()) <= 4

    def test_frozen_rejected(self):
        g = prism(4)
        c = Coloring((0, 1, 2, 3, 2, 3, 0, 1), 4)
        assert all(is_frozen_at(g, c.colors, v, 4) for v in range(g.n))
        with pytest.raises(ParameterError, match="isolated"):
            unfreeze_centralized(g, c, [0], 15)


def seamed_like_cubic(g, rng):
    """Random proper 4-coloring of a cubic graph with at least one non-frozen vertex."""
    while True:
        colors = [-1] * g.n
        for v in rng.sample(range(g.n), g.n):
            colors[v] = rng.choice([x for x in range(4) if all(colors[u] != x for u in g.adj[v])])
        if is_non_frozen(g, colors, 4):
            return Coloring(tuple(colors), 4)


class TestDistributed:
    def test_already_warm_is_noop(self):
        g = prism(40)
        colors = [0] * g.n
        for v in range(g.n):
            colors[v] = min(x for x in range(4) if all(colors[u] != x for u in g.adj[v] if u < v))
        c = Coloring(tuple(colors), 4)
        res = unfreeze_distributed(g, c, distance_d_mis(g, 15), 15, 20)
        assert res.schedule.length == 0
        assert res.potentials == [0]

    def test_tiled_prism(self):
        rng = random.Random(3)
        g = prism(120)
        c = tiled_prism_coloring(120, 4, 20, 4, rng)
        I = distance_d_mis(g, 15)
        trace = RoundTrace()
        res = unfreeze_distributed(g, c, I, 15, 20, trace)
        assert verify_schedule(g, c, res.schedule, res.coloring).ok
        assert all(not is_frozen_at(g, res.coloring.colors, m, 4) for m in I.members)
        assert trace.phases["warming"] > 0

    @pytest.mark.parametrize("m", [80, 160, 240])
    def test_potential_strictly_decreases(self, m):
        g, c = seamed(m, random.Random(m))
        I = distance_d_mis(g, 15)
        r = local_nonfrozen_radius(g, c)
        res = unfreeze_distributed(g, c, I, 15, r)
        pots = res.potentials
        assert pots[-1] == 0
        assert all(a > b for a, b in zip(pots, pots[1:]))
        assert res.iterations <= r + 15
        assert verify_schedule(g, c, res.schedule, res.coloring).ok

    def test_rounds_independent_of_n(self):
        rng = random.Random(5)
        rounds = set()
        for m in (60, 120, 240):
            g = prism(m)
            c = tiled_prism_coloring(m, 4, 20, 4, rng)
            trace = RoundTrace()
            unfreeze_distributed(g, c, distance_d_mis(g, 15), 15, 20, trace)
            rounds.add(trace.phases["warming"])
        assert len(rounds) == 1

    def test_locality_precondition(self):
        g, c = seamed(120, random.Random(1))
        with pytest.raises(ParameterError, match="locally"):
            unfreeze_distributed(g, c, distance_d_mis(g, 15), 15, 3)
