"""Brute-force configuration graph for small instances.

Vertices are proper k-colorings (labelled, no symmetry quotient); two are
adjacent when they differ on exactly one vertex.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator

from .errors import BudgetExceeded, ParameterError
from .graph_core import Coloring, Graph, find_conflict

DEFAULT_BUDGET = 10**8


@dataclass(frozen=True)
class ConfigComponent:
    representative: tuple[int, ...]
    size: int
    is_isolated: bool
    diameter: int | None = None
    members: frozenset | None = None


def _check_budget(g: Graph, k: int, budget: int):
    required = k**g.n
    if required > budget:
        raise BudgetExceeded(required, budget)


def enumerate_colorings(g: Graph, k: int, budget: int = DEFAULT_BUDGET) -> Iterator[tuple[int, ...]]:
    """All proper k-colorings in lexicographic order."""
    _check_budget(g, k, budget)
    n = g.n
    if n == 0:
        yield ()
        return
    earlier = [[u for u in g.adj[v] if u < v] for v in range(n)]
    colors = [0] * n

    def rec(v):
        if v == n:
            yield tuple(colors)
            return
        for c in range(k):
            if all(colors[u] != c for u in earlier[v]):
                colors[v] = c
                yield from rec(v + 1)

    yield from rec(0)


def moves(g: Graph, coloring: tuple[int, ...], k: int) -> Iterator[tuple[int, ...]]:
    """Colorings one single-vertex recoloring away."""
    for v in range(g.n):
        blocked = {coloring[u] for u in g.adj[v]}
        blocked.add(coloring[v])
        for c in range(k):
            if c not in blocked:
                yield coloring[:v] + (c,) + coloring[v + 1 :]


def _bfs(g, k, start):
    dist = {start: 0}
    q = deque([start])
    while q:
        x = q.popleft()
        dx = dist[x] + 1
        for y in moves(g, x, k):
            if y not in dist:
                dist[y] = dx
                q.append(y)
    return dist


def component_of(g: Graph, k: int, coloring, budget: int = DEFAULT_BUDGET) -> frozenset:
    _check_budget(g, k, budget)
    return frozenset(_bfs(g, k, tuple(coloring)))


def component_structure(g: Graph, k: int, budget: int = DEFAULT_BUDGET, diameters: bool = False) -> list[ConfigComponent]:
    """Connected components of the configuration graph, by representative order."""
    seen = set()
    out = []
    for col in enumerate_colorings(g, k, budget):
        if col in seen:
            continue
        members = frozenset(_bfs(g, k, col))
        seen.update(members)
        diam = None
        if diameters:
            diam = max(max(_bfs(g, k, m).values()) for m in members)
        out.append(ConfigComponent(col, len(members), len(members) == 1, diam, members))
    return out


def distance(g: Graph, k: int, sigma, eta, budget: int = DEFAULT_BUDGET):
    """Exact single-move distance by bidirectional BFS; ``None`` if unreachable."""
    _check_budget(g, k, budget)
    a = tuple(sigma.colors if isinstance(sigma, Coloring) else sigma)
    b = tuple(eta.colors if isinstance(eta, Coloring) else eta)
    for col in (a, b):
        if len(col) != g.n or find_conflict(g, col) is not None:
            raise ParameterError("distance needs proper colorings of the graph")
    if a == b:
        return 0
    da, db = {a: 0}, {b: 0}
    qa, qb = deque([a]), deque([b])
    while qa and qb:
        # expand the smaller frontier by one full layer
        if len(qa) <= len(qb):
            q, mine, other = qa, da, db
        else:
            q, mine, other = qb, db, da
        best = None
        for _ in range(len(q)):
            x = q.popleft()
            for y in moves(g, x, k):
                if y in other:
                    cand = mine[x] + 1 + other[y]
                    best = cand if best is None else min(best, cand)
                if y not in mine:
                    mine[y] = mine[x] + 1
                    q.append(y)
        if best is not None:
            return best
    return None


def reachable(g: Graph, k: int, sigma, eta, budget: int = DEFAULT_BUDGET) -> bool:
    return distance(g, k, sigma, eta, budget) is not None


def oracle_path(g: Graph, k: int, sigma, eta, budget: int = DEFAULT_BUDGET):
    """A shortest sequence of single moves ``[(v, color), ...]``, or ``None``."""
    _check_budget(g, k, budget)
    a = tuple(sigma)
    b = tuple(eta)
    parent = {a: None}
    q = deque([a])
    while q:
        x = q.popleft()
        if x == b:
            break
        for y in moves(g, x, k):
            if y not in parent:
                parent[y] = x
                q.append(y)
    if b not in parent:
        return None
    path = []
    y = b
    while parent[y] is not None:
        x = parent[y]
        v = next(i for i in range(g.n) if x[i] != y[i])
        path.append((v, y[v]))
        y = x
    path.reverse()
    return path
