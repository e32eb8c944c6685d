"""Ladders and nice recoloring sequences inside a ball.

A nice sequence recolors a boundary vertex ``w`` of ``B(v, r)`` while only
touching the interior of the ball, recoloring each vertex at most twice and
leaving the center ``v`` non-frozen. The in-place variants work on any
mutable color store (a list, or an :class:`Overlay` over one) so callers can
chain many of them without copying the whole coloring.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InvariantViolation, LadderError, ParameterError
from .graph_core import (
    Coloring,
    Graph,
    assert_induced,
    bfs_distances,
    check_proper,
    free_colors,
    geodesic,
    is_frozen_at,
)
from .schedule import Schedule, singletons


class Overlay:
    """Sparse copy-on-write view of a color vector."""

    def __init__(self, base):
        self.base = base
        self.changes = {}

    def __getitem__(self, v):
        return self.changes.get(v, self.base[v])

    def __setitem__(self, v, c):
        self.changes[v] = c

    def __len__(self):
        return len(self.base)

    def to_tuple(self):
        return tuple(self[v] for v in range(len(self.base)))


@dataclass(frozen=True)
class LadderPath:
    vertices: tuple[int, ...]


@dataclass(frozen=True)
class NiceSequence:
    schedule: Schedule
    center: int
    target: int
    radius: int
    # path, neighbor, aperiodic, or periodic-{direct,single-contact,double-contact,swap}
    case: str
    final: Coloring | None = None


def _lowest_free(g, colors, v, k):
    used = {colors[u] for u in g.adj[v]}
    used.add(colors[v])
    for c in range(k):
        if c not in used:
            return c
    return None


def ladder_inplace(g: Graph, colors, k: int, path: Sequence[int], changes: list | None = None) -> list:
    """Recolor ``path`` one vertex at a time with the shift rule.

    The first vertex takes its lowest free color, every later vertex takes
    the color its predecessor held before the ladder. Appends
    ``(vertex, old, new)`` triples to ``changes`` and returns it.
    """
    if changes is None:
        changes = []
    if not path:
        return changes
    start = path[0]
    c = _lowest_free(g, colors, start, k)
    if c is None:
        raise LadderError("ladder start frozen", 0)
    prev_old = colors[start]
    colors[start] = c
    changes.append((start, prev_old, c))
    for i in range(1, len(path)):
        x = path[i]
        want = prev_old
        if colors[x] == want or any(colors[u] == want for u in g.adj[x]):
            raise LadderError(f"ladder blocked at {i}", i)
        prev_old = colors[x]
        colors[x] = want
        changes.append((x, prev_old, want))
    return changes


def undo_inplace(colors, changes: list, upto: int = 0):
    while len(changes) > upto:
        v, old, _ = changes.pop()
        colors[v] = old


def ladder(g: Graph, c: Coloring, p) -> tuple[Schedule, Coloring]:
    path = list(p.vertices if isinstance(p, LadderPath) else p)
    assert_induced(g, path)
    colors = list(c.colors)
    ch = ladder_inplace(g, colors, c.k, path)
    return singletons((v, new) for v, _, new in ch), Coloring(tuple(colors), c.k)


def truncate_to_last_nonfrozen(g: Graph, c, path: Sequence[int], k: int | None = None) -> list[int]:
    """Suffix of ``path`` starting at its non-frozen vertex nearest the far end."""
    if isinstance(c, Coloring):
        k, colors = c.k, c.colors
    else:
        colors = c
    for i in range(len(path) - 1, -1, -1):
        if not is_frozen_at(g, colors, path[i], k):
            return list(path[i:])
    raise LadderError("no non-frozen vertex on path")


def unfreeze_toward(g: Graph, colors, k: int, path: Sequence[int], changes: list) -> bool:
    """Unfreeze the last vertex of ``path`` with a ladder that stops one short.

    Ladders from the non-frozen vertex closest to the end and recolors up to
    the end's predecessor. For ``k = Δ+1`` that last recoloring frees the
    predecessor's old color at the (frozen) end vertex. Returns ``False``
    when no vertex before the end is non-frozen.
    """
    end = path[-1]
    if not is_frozen_at(g, colors, end, k):
        return True
    body = path[:-1]
    for i in range(len(body) - 1, -1, -1):
        if not is_frozen_at(g, colors, body[i], k):
            ladder_inplace(g, colors, k, body[i:], changes)
            return not is_frozen_at(g, colors, end, k)
    return False


# -- nice sequences ----------------------------------------------------------


def _period_break_index(colors, P, r):
    for i in range(2, r - 2):
        if colors[P[i]] != colors[P[i + 3]]:
            return i
    return None


def _first_ladder(g, colors, k, P, changes):
    """Ladder along all of ``P`` from ``v`` or from ``v_1`` when that is non-frozen."""
    start = 1 if not is_frozen_at(g, colors, P[1], k) else 0
    ladder_inplace(g, colors, k, P[start:], changes)


def _finish_center(g, colors, k, P, changes, back_from):
    """After the first ladder, make ``v`` non-frozen again using ``P[back_from..1]``."""
    v = P[0]
    if not is_frozen_at(g, colors, v, k):
        return True
    back = [P[j] for j in range(back_from, -1, -1)]
    return unfreeze_toward(g, colors, k, back, changes)


def _aperiodic_ladder(g, colors, k, P, r, changes):
    i = _period_break_index(colors, P, r)
    if i is None:
        return False
    _first_ladder(g, colors, k, P, changes)
    if not _finish_center(g, colors, k, P, changes, i + 2):
        raise InvariantViolation(f"vertex at index {i + 2} stayed frozen after the first ladder")
    return True


def nice_sequence_inplace(g: Graph, colors, k: int, v: int, w: int, r: int, dist_v=None) -> tuple[list, str]:
    """Core of :func:`nice_sequence`; mutates ``colors``, returns (changes, case)."""
    changes: list = []
    dist_w = bfs_distances(g, w, limit=r)
    if dist_w.get(v) != r:
        raise ParameterError(f"distance between {v} and {w} is not {r}")
    if is_frozen_at(g, colors, v, k):
        raise ParameterError(f"center {v} is frozen")
    P = geodesic(g, v, w, dist_w=dist_w)

    # a non-frozen path vertex outside N[v]
    for i in range(r, 1, -1):
        if not is_frozen_at(g, colors, P[i], k):
            ladder_inplace(g, colors, k, P[i:], changes)
            return changes, "path"

    if dist_v is None:
        dist_v = bfs_distances(g, v, limit=r)
    on_path = {x: i for i, x in enumerate(P)}

    # a non-frozen neighbor of the path strictly inside the ball
    best = None
    for x in P:
        for z in g.adj[x]:
            if z in on_path or not 3 <= dist_v.get(z, r + 1) <= r - 1:
                continue
            if is_frozen_at(g, colors, z, k):
                continue
            key = (dist_w.get(z, r + 2), z)
            if best is None or key < best:
                best = key
    if best is not None:
        z = best[1]
        j = max(on_path[y] for y in g.adj[z] if y in on_path)
        ladder_inplace(g, colors, k, [z] + P[j:], changes)
        return changes, "neighbor"

    if _aperiodic_ladder(g, colors, k, P, r, changes):
        return changes, "aperiodic"

    # periodic colors along P from index 2
    _first_ladder(g, colors, k, P, changes)
    if _finish_center(g, colors, k, P, changes, 1):
        return changes, "periodic-direct"
    z = min(y for y in g.adj[P[5]] if y not in on_path)
    nbr_idx = sorted(on_path[y] for y in g.adj[z] if y in on_path)
    if len(nbr_idx) <= 2:
        back = [z] + [P[j] for j in range(nbr_idx[0], -1, -1)]
        if not is_frozen_at(g, colors, z, k) and unfreeze_toward(g, colors, k, back, changes):
            return changes, "periodic-single-contact" if len(nbr_idx) == 1 else "periodic-double-contact"
        raise InvariantViolation(f"off-path vertex {z} did not unfreeze after the first ladder")
    if len(nbr_idx) != 3 or nbr_idx[2] - nbr_idx[0] != 2:
        raise InvariantViolation(f"off-path vertex {z} has non-consecutive path neighbors {nbr_idx}")
    undo_inplace(colors, changes)
    P2 = list(P)
    P2[nbr_idx[1]] = z
    assert_induced(g, P2)
    if not _aperiodic_ladder(g, colors, k, P2, r, changes):
        raise InvariantViolation("swapped path is still periodic")
    return changes, "periodic-swap"


def check_nice(g: Graph, before, after, k: int, v: int, w: int, r: int, changes) -> None:
    """Raise :class:`InvariantViolation` unless ``changes`` form a nice sequence."""
    interior = bfs_distances(g, v, limit=r - 1)
    counts = {}
    for x, _, _ in changes:
        counts[x] = counts.get(x, 0) + 1
        if x != w and x not in interior:
            raise InvariantViolation(f"vertex {x} outside the interior was recolored")
    if counts.get(w, 0) < 1:
        raise InvariantViolation(f"target {w} was not recolored")
    if any(c > 2 for c in counts.values()):
        raise InvariantViolation("a vertex was recolored more than twice")
    if len(changes) > 2 * r:
        raise InvariantViolation(f"{len(changes)} recolorings exceed 2r = {2 * r}")
    if is_frozen_at(g, after, v, k):
        raise InvariantViolation(f"center {v} ends frozen")


def nice_sequence(g: Graph, c: Coloring, v: int, w: int, r: int) -> NiceSequence:
    if r < 7:
        raise ParameterError("nice sequences need r >= 7")
    if g.max_degree < 3:
        raise ParameterError("nice sequences need maximum degree at least 3")
    check_proper(g, c)
    colors = list(c.colors)
    changes, case = nice_sequence_inplace(g, colors, c.k, v, w, r)
    check_nice(g, c.colors, colors, c.k, v, w, r, changes)
    sched = singletons((x, new) for x, _, new in changes)
    return NiceSequence(sched, v, w, r, case, Coloring(tuple(colors), c.k))
