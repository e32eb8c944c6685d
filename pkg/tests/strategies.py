"""Random valid schedules on random small graphs, shared by property tests."""

import random

from hypothesis import strategies as st

from recolor.degeneracy import ordering_from_blocks
from recolor.graph_core import Coloring, Graph, free_colors
from recolor.schedule import Schedule


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def greedy_random_coloring(g: Graph, k: int, rng: random.Random) -> Coloring:
    colors = [0] * g.n
    for v in range(g.n):
        used = {colors[u] for u in g.adj[v] if u < v}
        colors[v] = rng.choice([c for c in range(k) if c not in used])
    return Coloring(tuple(colors), k)


def random_valid_schedule(g: Graph, source: Coloring, steps: int, rng: random.Random) -> Schedule:
    """Each step recolors a random independent set of movable vertices."""
    colors = list(source.colors)
    out = []
    for _ in range(steps):
        order = list(range(g.n))
        rng.shuffle(order)
        chosen = []
        blocked = set()
        for v in order:
            if v in blocked or rng.random() < 0.5:
                continue
            free = free_colors(g, colors, v, source.k)
            if not free:
                continue
            chosen.append((v, rng.choice(free)))
            blocked.add(v)
            blocked.update(g.adj[v])
        for v, c in chosen:
            colors[v] = c
        out.append(chosen)
    return Schedule(tuple(out))


@st.composite
def instances(draw, max_n=9, max_steps=8):
    """``(graph, source, schedule)`` with the schedule valid from ``source``."""
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    rng = random.Random(seed)
    n = draw(st.integers(min_value=1, max_value=max_n))
    g = random_graph(rng, n, draw(st.sampled_from([0.2, 0.35, 0.5])))
    k = g.max_degree + 1 + draw(st.integers(min_value=0, max_value=2))
    source = greedy_random_coloring(g, k, rng)
    s = random_valid_schedule(g, source, draw(st.integers(min_value=0, max_value=max_steps)), rng)
    return g, source, s


def replay_lists(g, rs, sigma, lists):
    """Replay a restricted schedule checking list membership at every boundary."""
    col = dict(sigma)
    for a, b, X in rs.steps:
        for v in X:
            assert col[v] == a
            col[v] = b
        for v in X:
            assert b in lists[v]
            assert all(col.get(u) != b for u in g.adj[v])
    return col


def random_instance(rng, g, t_max, k_max=5, tries=1000):
    """Random ordering of all of ``g`` into at most ``t_max`` blocks plus safe lists."""
    for _ in range(tries):
        t = rng.randint(1, t_max)
        block_of = {}
        blocks = [[] for _ in range(t)]
        ok = True
        for v in rng.sample(range(g.n), g.n):
            opts = [i for i in range(t) if not any(block_of.get(u) == i for u in g.adj[v])]
            if not opts:
                ok = False
                break
            block_of[v] = rng.choice(opts)
            blocks[block_of[v]].append(v)
        if not ok:
            continue
        order = ordering_from_blocks(g, blocks)
        top = max(order.max_d_plus + 2, 2)
        if top > k_max:
            continue
        K = rng.randint(top, k_max)
        lists = {v: set(rng.sample(range(K), rng.randint(order.d_plus[v] + 2, K))) for v in range(g.n)}
        sigma = _list_coloring(g, lists, rng)
        eta = _list_coloring(g, lists, rng)
        if sigma is None or eta is None:
            continue
        return order, lists, sigma, eta
    return None


def _list_coloring(g, lists, rng, tries=50):
    for _ in range(tries):
        col = [None] * g.n
        for v in rng.sample(range(g.n), g.n):
            opts = [c for c in lists[v] if all(col[u] != c for u in g.adj[v])]
            if not opts:
                break
            col[v] = rng.choice(opts)
        else:
            return tuple(col)
    return None
