"""Graphs, colorings, BFS machinery and distance-d independent sets."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ImproperColoring, ParameterError, ParseError

INF = float("inf")


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple undirected graph on vertices ``0..n-1``."""

    n: int
    adj: tuple[tuple[int, ...], ...]
    max_degree: int = field(init=False)
    _nbr_sets: tuple[frozenset, ...] = field(init=False, repr=False)

    def __post_init__(self):
        if len(self.adj) != self.n:
            raise ParameterError("adjacency length differs from n")
        for v, nbrs in enumerate(self.adj):
            for u in nbrs:
                if not 0 <= u < self.n:
                    raise ParameterError(f"neighbor {u} of {v} out of range")
                if u == v:
                    raise ParameterError(f"self-loop at {v}")
            if len(set(nbrs)) != len(nbrs):
                raise ParameterError(f"duplicate edge at {v}")
        sets = tuple(frozenset(nbrs) for nbrs in self.adj)
        for v, nbrs in enumerate(self.adj):
            for u in nbrs:
                if v not in sets[u]:
                    raise ParameterError(f"asymmetric adjacency between {v} and {u}")
        object.__setattr__(self, "_nbr_sets", sets)
        object.__setattr__(self, "max_degree", max((len(a) for a in self.adj), default=0))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        nbrs = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ParameterError(f"self-loop at {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs))

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def adjacent(self, u: int, v: int) -> bool:
        return v in self._nbr_sets[u]

    def neighbor_set(self, v: int) -> frozenset:
        return self._nbr_sets[v]

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph, relabelled; returns it with the new-to-old map."""
        old = sorted(set(vertices))
        index = {v: i for i, v in enumerate(old)}
        adj = tuple(tuple(sorted(index[u] for u in self.adj[v] if u in index)) for v in old)
        return Graph(len(old), adj), old

    def __eq__(self, other):
        return isinstance(other, Graph) and self.adj == other.adj

    def __hash__(self):
        return hash(self.adj)


@dataclass(frozen=True)
class Coloring:
    """Total assignment of colors in ``[0, k)``; properness is checked separately."""

    colors: tuple[int, ...]
    k: int

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(self.colors))
        for v, c in enumerate(self.colors):
            if not 0 <= c < self.k:
                raise ParameterError(f"color {c} of vertex {v} outside [0, {self.k})")

    def __len__(self):
        return len(self.colors)

    def __getitem__(self, v):
        return self.colors[v]

    def with_colors(self, colors: Sequence[int]) -> "Coloring":
        return Coloring(tuple(colors), self.k)


@dataclass(frozen=True)
class DistanceMIS:
    """Maximal set whose members are pairwise more than ``d`` apart.

    ``dist_to_set[v]`` is the distance from ``v`` to the nearest member, so
    maximality reads ``max(dist_to_set) <= d``.
    """

    members: tuple[int, ...]
    d: int
    dist_to_set: tuple[int, ...]


# -- parsing -----------------------------------------------------------------


def _int_tokens(line, lineno, count):
    parts = line.split()
    if len(parts) != count:
        raise ParseError(f"expected {count} integers, got {line.strip()!r}", lineno)
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise ParseError(f"non-integer token in {line.strip()!r}", lineno) from None


def _content_lines(text):
    return [(i + 1, ln) for i, ln in enumerate(text.splitlines()) if ln.strip()]


def load_graph(text: str) -> Graph:
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty graph document", 1)
    lineno, header = lines[0]
    n, m = _int_tokens(header, lineno, 2)
    header_line = lineno
    if n < 0 or m < 0:
        raise ParseError("negative header value", lineno)
    edges = []
    for lineno, line in lines[1:]:
        u, v = _int_tokens(line, lineno, 2)
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"vertex id out of range [0, {n})", lineno)
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", lineno)
        edges.append((u, v))
    # duplicate lines collapse, so the header may count either lines or distinct edges
    distinct = len({(min(u, v), max(u, v)) for u, v in edges})
    if m not in (len(edges), distinct):
        raise ParseError(f"header announces {m} edges, found {len(edges)}", header_line)
    return Graph.from_edges(n, edges)


def dump_graph(g: Graph) -> str:
    edges = g.edges()
    return "\n".join([f"{g.n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]) + "\n"


def load_coloring(text: str) -> Coloring:
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty coloring document", 1)
    lineno, header = lines[0]
    n, k = _int_tokens(header, lineno, 2)
    if len(lines) - 1 != n:
        raise ParseError(f"header announces {n} vertices, found {len(lines) - 1}", lineno)
    colors = []
    for lineno, line in lines[1:]:
        (c,) = _int_tokens(line, lineno, 1)
        if not 0 <= c < k:
            raise ParseError(f"color {c} outside [0, {k})", lineno)
        colors.append(c)
    return Coloring(tuple(colors), k)


def dump_coloring(c: Coloring) -> str:
    return "\n".join([f"{len(c)} {c.k}"] + [str(x) for x in c.colors]) + "\n"


# -- BFS ---------------------------------------------------------------------


def bfs_distances(g: Graph, sources, limit=None, allowed=None) -> dict[int, int]:
    """Distances from a source set, optionally capped and restricted to ``allowed``."""
    if isinstance(sources, int):
        sources = (sources,)
    dist = {s: 0 for s in sources}
    frontier = list(dist)
    depth = 0
    adj = g.adj
    while frontier and (limit is None or depth < limit):
        depth += 1
        nxt = []
        for x in frontier:
            for y in adj[x]:
                if y not in dist and (allowed is None or y in allowed):
                    dist[y] = depth
                    nxt.append(y)
        frontier = nxt
    return dist


def distance_array(g: Graph, sources) -> list:
    """Full distance array (``INF`` when unreachable) from a source set."""
    if isinstance(sources, int):
        sources = (sources,)
    dist = [INF] * g.n
    q = deque()
    for s in sources:
        if dist[s] != 0:
            dist[s] = 0
            q.append(s)
    adj = g.adj
    while q:
        x = q.popleft()
        dx = dist[x] + 1
        for y in adj[x]:
            if dist[y] == INF:
                dist[y] = dx
                q.append(y)
    return dist


def distance(g: Graph, u: int, v: int):
    return distance_array(g, u)[v]


def ball(g: Graph, v: int, r: int) -> set[int]:
    if r < 0:
        raise ParameterError("radius must be non-negative")
    return set(bfs_distances(g, v, limit=r))


def boundary(g: Graph, v: int, r: int) -> set[int]:
    return {x for x, dx in bfs_distances(g, v, limit=r).items() if dx == r}


def shortest_path(g: Graph, u: int, v: int):
    """Deterministic shortest path, or ``None`` when ``v`` is unreachable.

    Walks back from ``v`` taking the lowest-ID predecessor at each layer.
    """
    dist = bfs_distances(g, u)
    if v not in dist:
        return None
    path = [v]
    x = v
    while x != u:
        dx = dist[x]
        x = min(y for y in g.adj[x] if dist.get(y) == dx - 1)
        path.append(x)
    path.reverse()
    return path


def geodesic(g: Graph, v: int, w: int, dist_v=None, dist_w=None) -> list[int]:
    """Shortest ``v``-``w`` path built forward from ``v``.

    Each next vertex is the lowest-ID neighbor one step closer to ``w``.
    Shortest paths are always induced; the chord check is kept as a guard.
    """
    if dist_w is None:
        dist_w = bfs_distances(g, w)
    if v not in dist_w:
        raise ParameterError(f"{w} unreachable from {v}")
    path = [v]
    x = v
    while x != w:
        dx = dist_w[x]
        x = min(y for y in g.adj[x] if dist_w.get(y) == dx - 1)
        path.append(x)
    assert_induced(g, path)
    return path


def assert_induced(g: Graph, path: Sequence[int]):
    pos = {x: i for i, x in enumerate(path)}
    if len(pos) != len(path):
        raise ParameterError("path repeats a vertex")
    for i, x in enumerate(path):
        for y in g.adj[x]:
            j = pos.get(y)
            if j is not None and abs(i - j) != 1:
                raise ParameterError(f"path has chord ({x}, {y})")


def induced_subpath(g: Graph, walk: Sequence[int]) -> list[int]:
    """Shortest path from ``walk[0]`` to ``walk[-1]`` inside ``G[walk]``; it is induced."""
    allowed = set(walk)
    start, end = walk[0], walk[-1]
    dist = bfs_distances(g, end, allowed=allowed)
    return geodesic_in(g, start, end, dist)


def geodesic_in(g, start, end, dist_end):
    path = [start]
    x = start
    while x != end:
        dx = dist_end[x]
        x = min(y for y in g.adj[x] if dist_end.get(y) == dx - 1)
        path.append(x)
    return path


def is_connected(g: Graph) -> bool:
    return g.n == 0 or len(bfs_distances(g, 0)) == g.n


def components(g: Graph, vertices: Iterable[int]) -> list[list[int]]:
    """Connected components of ``G[vertices]``, each sorted, ordered by minimum."""
    left = set(vertices)
    out = []
    for s in sorted(left):
        if s not in left:
            continue
        comp = bfs_distances(g, s, allowed=left)
        left.difference_update(comp)
        out.append(sorted(comp))
    return out


# -- coloring predicates -----------------------------------------------------


def find_conflict(g: Graph, colors: Sequence[int]):
    for u in range(g.n):
        cu = colors[u]
        for v in g.adj[u]:
            if u < v and colors[v] == cu:
                return (u, v)
    return None


def is_proper(g: Graph, colors: Sequence[int]) -> bool:
    return find_conflict(g, colors) is None


def check_proper(g: Graph, c) -> None:
    colors = c.colors if isinstance(c, Coloring) else c
    if len(colors) != g.n:
        raise ParameterError(f"coloring has {len(colors)} entries for {g.n} vertices")
    bad = find_conflict(g, colors)
    if bad is not None:
        raise ImproperColoring(bad[0], bad[1], colors[bad[0]])


def is_frozen_at(g: Graph, colors: Sequence[int], v: int, k: int) -> bool:
    nbrs = g.adj[v]
    if len(nbrs) < k - 1:
        return False
    seen = {colors[u] for u in nbrs}
    seen.add(colors[v])
    return len(seen) == k


def free_colors(g: Graph, colors: Sequence[int], v: int, k: int) -> list[int]:
    """Colors ``v`` could move to: not its own, not on any neighbor."""
    used = {colors[u] for u in g.adj[v]}
    used.add(colors[v])
    return [c for c in range(k) if c not in used]


def frozen_vertices(g: Graph, c: Coloring) -> set[int]:
    check_proper(g, c)
    return {v for v in range(g.n) if is_frozen_at(g, c.colors, v, c.k)}


def frozen_mask(g: Graph, colors: Sequence[int], k: int) -> list[bool]:
    return [is_frozen_at(g, colors, v, k) for v in range(g.n)]


def nonfrozen_distances(g: Graph, c: Coloring) -> list:
    """Per-vertex distance to the nearest non-frozen vertex (``INF`` if none)."""
    nf = [v for v in range(g.n) if not is_frozen_at(g, c.colors, v, c.k)]
    return distance_array(g, nf)


def is_r_locally_nonfrozen(g: Graph, c: Coloring, r: int) -> bool:
    check_proper(g, c)
    return all(x <= r for x in nonfrozen_distances(g, c))


def local_nonfrozen_radius(g: Graph, c: Coloring):
    """Smallest ``r`` for which ``c`` is r-locally non-frozen (``INF`` if frozen)."""
    dist = nonfrozen_distances(g, c)
    return max(dist) if dist else 0


# -- distance-d independent sets ---------------------------------------------


def distance_d_mis(g: Graph, d: int) -> DistanceMIS:
    """Greedy by ascending ID: keep ``v`` unless a member lies within distance ``d``."""
    if d < 1:
        raise ParameterError("d must be at least 1")
    blocked = [False] * g.n
    members = []
    for v in range(g.n):
        if blocked[v]:
            continue
        members.append(v)
        for x in bfs_distances(g, v, limit=d):
            blocked[x] = True
    dist = distance_array(g, members)
    return DistanceMIS(tuple(members), d, tuple(dist))


def check_distance_mis(g: Graph, mis: DistanceMIS) -> None:
    members = set(mis.members)
    for m in mis.members:
        near = bfs_distances(g, m, limit=mis.d)
        clash = [x for x in near if x in members and x != m]
        if clash:
            raise ParameterError(f"members {m} and {clash[0]} are within distance {mis.d}")
    dist = distance_array(g, list(mis.members))
    if list(dist) != list(mis.dist_to_set):
        raise ParameterError("dist_to_set annotations are stale")
    if dist and max(dist) > mis.d:
        raise ParameterError("set is not maximal")


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])
