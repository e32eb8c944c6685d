"""Instance generators: prisms, random cubic graphs, small exhaustive families."""

from __future__ import annotations

import random

from .errors import ParameterError
from .graph_core import Coloring, Graph, is_connected, is_frozen_at, is_proper


def prism(m: int) -> Graph:
    """``C_m x K_2``: outer cycle ``0..m-1``, inner cycle ``m..2m-1``, spokes ``i -- m+i``."""
    if m < 3:
        raise ParameterError("prism needs m >= 3")
    edges = []
    for i in range(m):
        j = (i + 1) % m
        edges += [(i, j), (m + i, m + j), (i, m + i)]
    return Graph.from_edges(2 * m, edges)


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def random_cubic(n: int, rng: random.Random, tries: int = 10000) -> Graph:
    """Connected simple cubic graph from the pairing model with rejection."""
    if n % 2 or n < 4:
        raise ParameterError("cubic graphs need an even n >= 4")
    for _ in range(tries):
        points = [v for v in range(n) for _ in range(3)]
        rng.shuffle(points)
        edges = set()
        ok = True
        for i in range(0, len(points), 2):
            a, b = points[i], points[i + 1]
            if a == b or (min(a, b), max(a, b)) in edges:
                ok = False
                break
            edges.add((min(a, b), max(a, b)))
        if not ok:
            continue
        g = Graph.from_edges(n, sorted(edges))
        if is_connected(g):
            return g
    raise ParameterError(f"no connected cubic graph on {n} vertices after {tries} tries")


def periodic_prism_coloring(m: int, k: int = 4) -> Coloring:
    """Proper coloring of the prism with period 4 on the outer cycle (m divisible by 4)."""
    if m % 4:
        raise ParameterError("periodic prism coloring needs m divisible by 4")
    outer = [(i % 4) % k for i in range(m)]
    inner = [((i + 2) % 4) % k for i in range(m)]
    return Coloring(tuple(outer + inner), k)


def is_non_frozen(g: Graph, colors, k: int) -> bool:
    return any(not is_frozen_at(g, colors, v, k) for v in range(g.n))


def random_coloring(g: Graph, k: int, rng: random.Random, sweeps: int = 20) -> Coloring:
    """Greedy start followed by Glauber moves; the result is proper."""
    colors = [-1] * g.n
    order = list(range(g.n))
    rng.shuffle(order)
    for v in order:
        used = {colors[u] for u in g.adj[v]}
        free = [c for c in range(k) if c not in used]
        if not free:
            raise ParameterError(f"greedy start failed with {k} colors")
        colors[v] = rng.choice(free)
    for _ in range(sweeps * g.n):
        v = rng.randrange(g.n)
        used = {colors[u] for u in g.adj[v]}
        free = [c for c in range(k) if c not in used]
        colors[v] = rng.choice(free)
    assert is_proper(g, colors)
    return Coloring(tuple(colors), k)


def random_nonfrozen_coloring(g: Graph, k: int, rng: random.Random) -> Coloring:
    for _ in range(100):
        c = random_coloring(g, k, rng)
        if is_non_frozen(g, c.colors, k):
            return c
    raise ParameterError("could not sample a non-frozen coloring")


def small_connected_max3(n_max: int = 8) -> list[Graph]:
    """Every connected graph with maximum degree exactly 3 on at most ``n_max`` vertices,
    up to isomorphism.

    Graphs on up to 7 vertices come from the networkx atlas. Larger ones are
    grown by attaching a new vertex to every admissible neighbor set of a
    smaller graph (every connected graph has a non-cut vertex, so this
    reaches all of them), then deduplicated by isomorphism.
    """
    import itertools

    import networkx as nx
    from networkx.generators.atlas import graph_atlas_g

    def ok(h):
        return h.number_of_nodes() >= 1 and nx.is_connected(h) and max(d for _, d in h.degree()) <= 3

    level = {n: [] for n in range(1, n_max + 1)}
    for h in graph_atlas_g():
        if 1 <= h.number_of_nodes() <= min(7, n_max) and ok(h):
            level[h.number_of_nodes()].append(h)
    for n in range(8, n_max + 1):
        found = []
        buckets = {}
        for h in level[n - 1]:
            low = [v for v in h if h.degree(v) < 3]
            for size in (1, 2, 3):
                for nbrs in itertools.combinations(low, size):
                    h2 = h.copy()
                    h2.add_node(n - 1 + 1000)
                    h2.add_edges_from((n - 1 + 1000, u) for u in nbrs)
                    h2 = nx.convert_node_labels_to_integers(h2)
                    key = (tuple(sorted(d for _, d in h2.degree())), h2.number_of_edges())
                    same = buckets.setdefault(key, [])
                    if any(nx.is_isomorphic(h2, x) for x in same):
                        continue
                    same.append(h2)
                    found.append(h2)
        level[n] = found
    out = []
    for n in range(1, n_max + 1):
        for h in level[n]:
            if max(d for _, d in h.degree()) == 3:
                h = nx.convert_node_labels_to_integers(h, ordering="sorted")
                out.append(Graph.from_edges(h.number_of_nodes(), [tuple(sorted(e)) for e in h.edges()]))
    return out


def seamed_prism_coloring(m: int, k: int, rng: random.Random) -> Coloring:
    """Frozen period-4 pattern on most columns plus a randomly filled seam.

    Only vertices near the seam can be non-frozen, which makes these the
    hard inputs for ladders and warming.
    """
    q = m // 4 - 1
    if q < 1:
        raise ParameterError("seamed coloring needs m >= 8")
    g = prism(m)
    base = 4 * q
    colors = [-1] * (2 * m)
    for i in range(base):
        colors[i] = i % 4
        colors[m + i] = (i + 2) % 4
    free_cols = list(range(base, m))
    slots = [i for i in free_cols] + [m + i for i in free_cols]
    slots.sort(key=lambda v: (v % m, v))

    def rec(j):
        if j == len(slots):
            return True
        v = slots[j]
        opts = list(range(k))
        rng.shuffle(opts)
        for c in opts:
            if all(colors[u] != c for u in g.adj[v]):
                colors[v] = c
                if rec(j + 1):
                    return True
        colors[v] = -1
        return False

    if not rec(0):
        raise ParameterError("seam could not be completed")
    return Coloring(tuple(colors), k)


def tiled_prism_coloring(m: int, k: int, period: int, width: int, rng: random.Random) -> Coloring:
    """Column-periodic prism coloring: a frozen stretch and a random seam, tiled.

    One tile of ``period`` columns is solved as a prism of its own (the seam
    of ``width`` columns filled by random backtracking) and repeated, so any
    two prisms whose sizes are multiples of ``period`` look the same locally.
    Every vertex is within about ``period`` of a non-frozen vertex.
    """
    if m % period or period % 4 or not 0 < width < period:
        raise ParameterError("need period | m, 4 | period and 0 < width < period")
    for _ in range(100):
        tile = seamed_tile(period, width, k, rng)
        if is_non_frozen(prism(period), tile, k):
            break
    else:
        raise ParameterError("no non-frozen tile found")
    outer = [tile[i % period] for i in range(m)]
    inner = [tile[period + i % period] for i in range(m)]
    return Coloring(tuple(outer + inner), k)


def seamed_tile(period: int, width: int, k: int, rng: random.Random) -> list[int]:
    g = prism(period)
    colors = [-1] * (2 * period)
    for i in range(period - width):
        colors[i] = i % 4
        colors[period + i] = (i + 2) % 4
    slots = sorted((v for v in range(2 * period) if colors[v] < 0), key=lambda v: (v % period, v))

    def rec(j):
        if j == len(slots):
            return True
        v = slots[j]
        opts = list(range(k))
        rng.shuffle(opts)
        for c in opts:
            if all(colors[u] != c for u in g.adj[v]):
                colors[v] = c
                if rec(j + 1):
                    return True
        colors[v] = -1
        return False

    if not rec(0):
        raise ParameterError("tile seam could not be completed")
    return colors


def periodic_three_coloring(m: int) -> Coloring:
    """Proper 3-coloring of the prism when ``3 | m``."""
    if m % 3:
        raise ParameterError("periodic 3-coloring needs 3 | m")
    return Coloring(tuple([i % 3 for i in range(m)] + [(i + 1) % 3 for i in range(m)]), 3)
