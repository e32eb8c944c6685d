import json
import random
from pathlib import Path

import pytest

from recolor.corpus import prism, random_cubic, random_nonfrozen_coloring, seamed_prism_coloring
from recolor.errors import LadderError, ParameterError
from recolor.graph_core import Coloring, Graph, bfs_distances, is_frozen_at, path_graph
from recolor.safeness import LadderPath, ladder, nice_sequence, truncate_to_last_nonfrozen

from nice_oracle import assert_nice

DATA = Path(__file__).parent / "data"


class TestLadder:
    def test_shift_rule(self):
        g = path_graph(4)
        s, out = ladder(g, Coloring((0, 1, 2, 0), 3), LadderPath((0, 1, 2)))
        assert out.colors == (2, 0, 1, 0)
        assert s.steps == (((0, 2),), ((1, 0),), ((2, 1),))

    def test_single_vertex(self):
        g = path_graph(3)
        _, out = ladder(g, Coloring((0, 1, 0), 3), [0])
        assert out.colors == (2, 1, 0)

    def test_start_frozen(self):
        g = path_graph(3)
        with pytest.raises(LadderError, match="ladder start frozen"):
            ladder(g, Coloring((0, 1, 2), 3), [1, 2])

    def test_blocked(self):
        # 0-1-2 path plus edge 2-3: vertex 2 cannot take 1's old color 1 when 3 holds it
        g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
        with pytest.raises(LadderError) as info:
            ladder(g, Coloring((0, 2, 0, 2), 4), [1, 2])
        assert info.value.index == 1

    def test_chord_rejected(self):
        g = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
        with pytest.raises(ParameterError):
            ladder(g, Coloring((0, 1, 2), 4), [0, 1, 2])

    def test_shift_law_on_random_paths(self, rng):
        # each vertex after the first takes its predecessor's old color
        for _ in range(200):
            m = rng.randint(4, 30)
            g = prism(m)
            c = random_nonfrozen_coloring(g, 4, rng)
            starts = [v for v in range(g.n) if not is_frozen_at(g, c.colors, v, 4)]
            v = rng.choice(starts)
            length = rng.randint(1, m // 2)
            w = rng.choice([x for x, d in bfs_distances(g, v, limit=length).items() if d == length])
            from recolor.graph_core import geodesic

            path = geodesic(g, v, w)
            try:
                _, out = ladder(g, c, path)
            except LadderError:
                continue
            for a, b in zip(path, path[1:]):
                assert out.colors[b] == c.colors[a]


class TestTruncate:
    COLORS = Coloring((0, 1, 2, 0, 1, 2), 3)

    def test_toward_five(self):
        assert truncate_to_last_nonfrozen(path_graph(6), self.COLORS, list(range(6))) == [5]

    def test_toward_zero(self):
        assert truncate_to_last_nonfrozen(path_graph(6), self.COLORS, [5, 4, 3, 2, 1, 0]) == [0]

    def test_only_start(self):
        assert truncate_to_last_nonfrozen(path_graph(6), self.COLORS, [0, 1, 2, 3, 4]) == [0, 1, 2, 3, 4]

    def test_all_nonfrozen(self):
        c = Coloring((0, 1, 0, 1), 3)
        assert truncate_to_last_nonfrozen(path_graph(4), c, [0, 1, 2, 3]) == [3]

    def test_single(self):
        assert truncate_to_last_nonfrozen(path_graph(2), Coloring((0, 1), 3), [1]) == [1]

    def test_none(self):
        with pytest.raises(LadderError):
            truncate_to_last_nonfrozen(path_graph(6), self.COLORS, [1, 2, 3, 4])


def _triples(g, c, r=7):
    for v in range(g.n):
        if is_frozen_at(g, c.colors, v, c.k):
            continue
        for w, d in sorted(bfs_distances(g, v, limit=r).items()):
            if d == r:
                yield v, w


class TestNiceSequence:
    def test_preconditions(self):
        g = prism(20)
        c = seamed_prism_coloring(20, 4, random.Random(0))
        with pytest.raises(ParameterError):
            nice_sequence(g, c, 0, 1, 7)
        with pytest.raises(ParameterError):
            nice_sequence(g, c, 0, 7, 6)
        with pytest.raises(ParameterError):
            nice_sequence(path_graph(10), Coloring((0, 1) * 5, 4), 0, 7, 7)

    def test_frozen_center_rejected(self):
        g = prism(20)
        c = seamed_prism_coloring(20, 4, random.Random(0))
        v = next(x for x in range(g.n) if is_frozen_at(g, c.colors, x, 4))
        w = next(x for x, d in bfs_distances(g, v, limit=7).items() if d == 7)
        with pytest.raises(ParameterError, match="frozen"):
            nice_sequence(g, c, v, w, 7)

    def test_single_ladder_when_predecessor_nonfrozen(self):
        # a non-frozen predecessor of w gives a one-edge ladder that leaves v alone
        rng = random.Random(3)
        hits = 0
        for _ in range(30):
            g = prism(24)
            c = random_nonfrozen_coloring(g, 4, rng)
            for v, w in _triples(g, c):
                ns = nice_sequence(g, c, v, w, 7)
                if ns.case == "path" and ns.schedule.length <= 2:
                    assert v not in ns.schedule.recolored_vertices()
                    assert_nice(g, c, ns)
                    hits += 1
        assert hits > 0

    def test_seamed_prisms(self):
        rng = random.Random(5)
        cases = set()
        for m in (14, 16, 20, 30):
            g = prism(m)
            for _ in range(4):
                c = seamed_prism_coloring(m, 4, rng)
                for v, w in _triples(g, c):
                    ns = nice_sequence(g, c, v, w, 7)
                    assert_nice(g, c, ns)
                    cases.add(ns.case)
        assert {"path", "neighbor", "aperiodic"} <= cases

    def test_random_cubic(self):
        rng = random.Random(9)
        done = 0
        while done < 150:
            g = random_cubic(60, rng)
            c = random_nonfrozen_coloring(g, 4, rng)
            for v, w in list(_triples(g, c))[:10]:
                assert_nice(g, c, nice_sequence(g, c, v, w, 7))
                done += 1

    def test_deterministic(self):
        g = prism(30)
        c = seamed_prism_coloring(30, 4, random.Random(1))
        v, w = next(_triples(g, c))
        assert nice_sequence(g, c, v, w, 7) == nice_sequence(g, c, v, w, 7)


def diamond_chain(blocks):
    """Path ``0..3L-1`` with a vertex of color 3 glued to every triple; the path is 3-periodic."""
    n = 4 * blocks
    edges = [(i, i + 1) for i in range(3 * blocks - 1)]
    for j in range(blocks):
        z = 3 * blocks + j
        edges += [(3 * j, z), (3 * j + 1, z), (3 * j + 2, z)]
    colors = [i % 3 for i in range(3 * blocks)] + [3] * blocks
    return Graph.from_edges(n, edges), Coloring(tuple(colors), 4)


def test_periodic_path_on_diamond_chain():
    g, c = diamond_chain(8)
    cases = set()
    for v, w in _triples(g, c):
        ns = nice_sequence(g, c, v, w, 7)
        assert_nice(g, c, ns)
        cases.add(ns.case)
    assert "periodic-direct" in cases


def _stored():
    doc = json.loads((DATA / "periodic_instances.json").read_text())
    return sorted(doc.items())


@pytest.mark.parametrize("case,inst", _stored(), ids=[k for k, _ in _stored()])
def test_periodic_endgames(case, inst):
    """Cubic instances found by planting a frozen 3-periodic path (plus, for the last
    endgame, a vertex adjacent to three consecutive path vertices); each hits one endgame."""
    g = Graph.from_edges(inst["n"], [tuple(e) for e in inst["edges"]])
    c = Coloring(tuple(inst["colors"]), 4)
    ns = nice_sequence(g, c, inst["v"], inst["w"], 7)
    assert ns.case == case
    assert_nice(g, c, ns)
