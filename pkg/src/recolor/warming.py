"""Unfreezing every member of a distance-d maximal independent set.

Both routines grow the set of non-frozen members along an auxiliary graph
whose edges are short corridors between the radius-7 balls of members. A
frozen member is reached from a non-frozen parent by pushing a ladder down
the corridor; when the corridor is entirely frozen, a nice sequence inside
the parent's ball first recolors the corridor's entry vertex.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from .errors import InvariantViolation, ParameterError
from .graph_core import (
    Coloring,
    DistanceMIS,
    Graph,
    bfs_distances,
    check_proper,
    distance_array,
    geodesic,
    induced_subpath,
    is_connected,
    is_frozen_at,
)
from .safeness import nice_sequence_inplace, unfreeze_toward
from .schedule import Schedule, SlotBuilder, singletons

BALL = 7


@dataclass(frozen=True)
class AuxGraph:
    members: tuple[int, ...]
    adj: dict
    witness: dict  # (a, b) with a < b -> path from B(a,7) to B(b,7)

    def path(self, a: int, b: int) -> list[int]:
        """Witness oriented from ``a``'s ball to ``b``'s ball."""
        if a < b:
            return list(self.witness[(a, b)])
        return list(reversed(self.witness[(b, a)]))

    def is_connected(self) -> bool:
        if not self.members:
            return True
        seen = {self.members[0]}
        q = deque(seen)
        while q:
            x = q.popleft()
            for y in self.adj[x]:
                if y not in seen:
                    seen.add(y)
                    q.append(y)
        return len(seen) == len(self.members)


def ball_owners(g: Graph, members, radius: int = BALL) -> dict:
    owner = {}
    for m in members:
        for x in bfs_distances(g, m, limit=radius):
            if x in owner:
                raise ParameterError(f"balls of {owner[x]} and {m} overlap")
            owner[x] = m
    return owner


def build_aux_graph(g: Graph, I, d: int, allowed=None, owner=None, check_connected: bool = True) -> AuxGraph:
    """Members are adjacent when a path of length at most ``2d`` joins their balls
    without entering any other member's ball.

    ``allowed`` restricts the corridor vertices (used by localized warming).
    """
    members = tuple(I.members if isinstance(I, DistanceMIS) else sorted(I))
    if d < 15:
        raise ParameterError("auxiliary graph needs d >= 15")
    if owner is None:
        owner = ball_owners(g, members)
    balls = {m: [] for m in members}
    for x, m in owner.items():
        if m in balls:
            balls[m].append(x)
    adj = {m: set() for m in members}
    witness = {}
    limit = 2 * d
    mset = set(members)
    for i in members:
        src = [x for x in sorted(balls[i]) if allowed is None or x in allowed]
        parent = {x: None for x in src}
        depth = {x: 0 for x in src}
        frontier = src
        level = 0
        while frontier and level < limit:
            level += 1
            nxt = []
            for x in frontier:
                for y in g.adj[x]:
                    if y in depth:
                        continue
                    o = owner.get(y)
                    if o is not None and o != i:
                        if o in mset and o not in adj[i]:
                            path = [y]
                            z = x
                            while z is not None:
                                path.append(z)
                                z = parent[z]
                            path.reverse()
                            adj[i].add(o)
                            adj[o].add(i)
                            key = (min(i, o), max(i, o))
                            if key not in witness:
                                witness[key] = tuple(path if i < o else reversed(path))
                        continue
                    if o == i or (allowed is not None and y not in allowed):
                        continue
                    depth[y] = level
                    parent[y] = x
                    nxt.append(y)
            frontier = nxt
    aux = AuxGraph(members, {m: tuple(sorted(adj[m])) for m in members}, witness)
    if check_connected and is_connected(g) and not aux.is_connected():
        raise InvariantViolation("auxiliary graph of a connected graph is disconnected")
    return aux


def approach_path(g: Graph, aux: AuxGraph, parent: int, child: int) -> list[int]:
    """Induced path from the parent's ball boundary to the child member."""
    w = aux.path(parent, child)
    tail = geodesic(g, w[-1], child, dist_w=bfs_distances(g, child, limit=BALL))
    walk = w + tail[1:]
    return induced_subpath(g, walk)


def _tree_order(aux: AuxGraph, root: int, usable=None):
    parent = {root: None}
    order = [root]
    q = deque([root])
    while q:
        x = q.popleft()
        for y in aux.adj[x]:
            if y not in parent and (usable is None or usable(x, y)):
                parent[y] = x
                order.append(y)
                q.append(y)
    return order, parent


def _unfreeze_along_tree(g, colors, k, aux, root, changes, can_recolor=None, usable=None, monitor=True, checkpoints=None):
    """Unfreeze members in BFS order of a spanning tree of ``aux``.

    Returns the members that could not be reached (only possible when
    ``can_recolor`` or ``usable`` restrict the moves). ``checkpoints``
    collects ``len(changes)`` after each member is handled; earlier members
    are non-frozen at every checkpoint, though a nice sequence may freeze
    its own center for a few steps in between.
    """
    order, parent = _tree_order(aux, root, usable)
    done = [root]
    skipped = [m for m in aux.members if m not in parent]
    for i in order[1:]:
        if not is_frozen_at(g, colors, i, k):
            done.append(i)
            continue
        p = parent[i]
        if p in skipped or is_frozen_at(g, colors, p, k):
            skipped.append(i)
            continue
        Q = approach_path(g, aux, p, i)
        if can_recolor is not None and not all(can_recolor(x) for x in Q[:-1]):
            skipped.append(i)
            continue
        if not unfreeze_toward(g, colors, k, Q[1:], changes):
            if can_recolor is not None and not all(can_recolor(x) for x in bfs_distances(g, p, limit=BALL - 1)):
                skipped.append(i)
                continue
            ch, _ = nice_sequence_inplace(g, colors, k, p, Q[0], BALL)
            changes.extend(ch)
            if not unfreeze_toward(g, colors, k, Q[1:], changes):
                raise InvariantViolation(f"member {i} stayed frozen after the corridor ladder")
        if monitor:
            refrozen = [m for m in done if is_frozen_at(g, colors, m, k)]
            if refrozen:
                raise InvariantViolation(f"member {refrozen[0]} was refrozen")
        done.append(i)
        if checkpoints is not None:
            checkpoints.append(len(changes))
    return skipped


@dataclass
class WarmingResult:
    schedule: Schedule
    coloring: Coloring
    total: int
    per_vertex_max: int
    bound: int
    root: int | None = None
    stats: dict = field(default_factory=dict)


def _changes_stats(changes, n):
    counts = {}
    for v, _, _ in changes:
        counts[v] = counts.get(v, 0) + 1
    return max(counts.values(), default=0)


def unfreeze_centralized(g: Graph, c: Coloring, I, d: int) -> WarmingResult:
    members = tuple(I.members if isinstance(I, DistanceMIS) else sorted(I))
    check_proper(g, c)
    if g.max_degree < 3:
        raise ParameterError("warming needs maximum degree at least 3")
    if not is_connected(g):
        raise ParameterError("warming needs a connected graph")
    k = c.k
    colors = list(c.colors)
    nonfrozen = [v for v in range(g.n) if not is_frozen_at(g, colors, v, k)]
    if not nonfrozen:
        raise ParameterError("frozen coloring is isolated")
    changes: list = []
    bound = (2 * d + 14) * len(members)
    if all(not is_frozen_at(g, colors, m, k) for m in members):
        return WarmingResult(Schedule(), c, 0, 0, bound, members[0] if members else None)
    dist = distance_array(g, nonfrozen)
    root = min(members, key=lambda m: (dist[m], m))
    if dist[root] > 0:
        dist_root = bfs_distances(g, root)
        u = min((v for v in nonfrozen if dist_root.get(v) == dist[root]))
        path = geodesic(g, u, root, dist_w=dist_root)
        if not unfreeze_toward(g, colors, k, path, changes):
            raise InvariantViolation("initial ladder did not unfreeze the root member")
    aux = build_aux_graph(g, members, d)
    checkpoints = [len(changes)]
    skipped = _unfreeze_along_tree(g, colors, k, aux, root, changes, checkpoints=checkpoints)
    if skipped:
        raise InvariantViolation(f"members {skipped[:5]} unreachable in the auxiliary graph")
    frozen_left = [m for m in members if is_frozen_at(g, colors, m, k)]
    if frozen_left:
        raise InvariantViolation(f"members {frozen_left[:5]} still frozen")
    sched = singletons((v, new) for v, _, new in changes)
    return WarmingResult(
        sched,
        Coloring(tuple(colors), k),
        len(changes),
        _changes_stats(changes, g.n),
        bound,
        root,
        {"aux_edges": sum(len(a) for a in aux.adj.values()) // 2, "checkpoints": checkpoints},
    )


# -- distributed ---------------------------------------------------------------


def moore_bound(delta: int, radius: int) -> int:
    """Largest possible ball of the given radius at maximum degree ``delta``."""
    if delta <= 2:
        return 1 + 2 * radius
    return 1 + delta * ((delta - 1) ** radius - 1) // (delta - 2)


def class_budget(delta: int, d: int, p: int) -> int:
    """Palette size of the auxiliary member coloring at distance ``p``.

    Members are more than ``d`` apart, so radius ``d // 2`` balls around them
    are disjoint; this caps the degree of the distance-``p`` member graph by
    a function of ``delta``, ``d`` and ``p`` alone.
    """
    h = d // 2
    return moore_bound(delta, p + h) // (h + 1) + 1


def member_bound(delta: int, d: int, radius: int) -> int:
    h = d // 2
    return moore_bound(delta, radius + h) // (h + 1)


def greedy_member_coloring(g: Graph, members, p: int) -> dict:
    """Greedy by ascending ID on the graph joining members at distance <= ``p``."""
    mset = set(members)
    color = {}
    for m in sorted(members):
        near = bfs_distances(g, m, limit=p)
        used = {color[x] for x in near if x in mset and x in color}
        c = 0
        while c in used:
            c += 1
        color[m] = c
    return color


def member_potential(g: Graph, colors, k: int, members) -> float:
    """Max over members of the distance to the nearest non-frozen member."""
    nf = [m for m in members if not is_frozen_at(g, colors, m, k)]
    if not nf:
        return math.inf
    dist = distance_array(g, nf)
    return max(dist[m] for m in members)


@dataclass
class DistributedWarming:
    schedule: Schedule
    coloring: Coloring
    trace: object
    potentials: list
    slots: SlotBuilder
    span: int
    iterations: int
    phase1_skips: int = 0


def warming_span(delta: int, d: int, r: int) -> tuple[int, int, int, int]:
    """Fixed slot layout of distributed warming: (phase-1 span, per-X span, C1, C2)."""
    c1 = class_budget(delta, d, 2 * d + 2)
    c2 = class_budget(delta, d, 4 * d + 10)
    per_x = member_bound(delta, d, 2 * d + 5) * (2 * BALL + 2 * d + 12)
    return c1 * (d + 1), per_x, c1, c2


def unfreeze_distributed(g: Graph, c: Coloring, I, d: int, r: int, trace=None, aux1=None, aux2=None) -> DistributedWarming:
    """Phase 1 moves non-frozenness onto members, phase 2 spreads it across members.

    ``aux1`` / ``aux2`` are member colorings at distances ``2d+2`` and
    ``4d+10``; they default to the greedy oracle. Rounds are charged to the
    ``warming`` bucket of ``trace`` from the fixed layout, so they depend on
    ``(Δ, d, r)`` only.
    """
    from .local_sim import RoundTrace

    members = tuple(I.members if isinstance(I, DistanceMIS) else sorted(I))
    if d < 15:
        raise ParameterError("distributed warming needs d >= 15")
    check_proper(g, c)
    k = c.k
    delta = g.max_degree
    colors = list(c.colors)
    nf0 = [v for v in range(g.n) if not is_frozen_at(g, colors, v, k)]
    if not nf0:
        raise ParameterError("frozen coloring is isolated")
    if max(distance_array(g, nf0)) > r:
        raise ParameterError(f"coloring is not {r}-locally non-frozen")
    if trace is None:
        trace = RoundTrace()
    span1, per_x, c1, c2 = warming_span(delta, d, r)
    if aux1 is None:
        aux1 = greedy_member_coloring(g, members, 2 * d + 2)
    if aux2 is None:
        aux2 = greedy_member_coloring(g, members, 4 * d + 10)
    slots = SlotBuilder()
    initial_nf = set(nf0)
    skips = 0

    # phase 1
    for cls in sorted(set(aux1.values())):
        base = cls * (d + 1)
        plans = []
        for u in sorted(m for m in members if aux1[m] == cls):
            if not is_frozen_at(g, colors, u, k):
                continue
            du = bfs_distances(g, u, limit=d)
            cands = [x for x in du if x in initial_nf and not is_frozen_at(g, colors, x, k)]
            if not cands:
                continue
            x = min(cands, key=lambda y: (du[y], y))
            path = geodesic(g, x, u, dist_w=du)
            body = path[:-1]
            start = max(i for i, y in enumerate(body) if not is_frozen_at(g, colors, y, k))
            body = body[start:]
            # the twist: never recolor next to another non-frozen member
            clash = any(
                m != u and m in aux1 and not is_frozen_at(g, colors, m, k)
                for y in body
                for m in (y,) + g.adj[y]
            )
            if clash:
                skips += 1
                continue
            plans.append((u, body))
        for u, body in plans:
            ch = []
            if not unfreeze_toward(g, colors, k, body + [u], ch):
                raise InvariantViolation(f"phase-1 ladder did not unfreeze {u}")
            for j, (v, _, new) in enumerate(ch):
                slots.add(base + j, v, new)
    trace.add("warming", c1 * (2 * (d + 1) + 1))

    # phase 2
    potentials = [member_potential(g, colors, k, members)]
    iterations = r + d
    owner = ball_owners(g, members)
    mset = set(members)
    done_at = None
    for it in range(iterations):
        if potentials[-1] == 0:
            done_at = it
            break
        for cls in sorted(set(aux2.values())):
            base = span1 + (it * c2 + cls) * per_x
            active = [u for u in sorted(m for m in members if aux2[m] == cls) if not is_frozen_at(g, colors, u, k)]
            for u in active:
                ch = _localized_warm(g, colors, k, u, d, mset, owner)
                if len(ch) > per_x:
                    raise InvariantViolation("localized warming exceeded its slot span")
                for j, (v, _, new) in enumerate(ch):
                    slots.add(base + j, v, new)
        potentials.append(member_potential(g, colors, k, members))
    else:
        done_at = iterations
    trace.add("warming", iterations * c2 * (2 * (2 * d + 5) + 1))
    frozen_left = [m for m in members if is_frozen_at(g, colors, m, k)]
    if frozen_left:
        raise InvariantViolation(f"members {frozen_left[:5]} still frozen after {iterations} iterations")
    span = span1 + iterations * c2 * per_x
    return DistributedWarming(
        slots.to_schedule(), Coloring(tuple(colors), k), trace, potentials, slots, span, done_at, skips
    )


def _localized_warm(g, colors, k, u, d, mset, owner):
    """Unfreeze the members of ``X_u`` from the non-frozen member ``u``."""
    du = bfs_distances(g, u, limit=2 * d + 5)
    inner = {x for x, dx in du.items() if dx <= 2 * d + 4}
    local_members = sorted(m for m in du if m in mset)
    allowed = inner
    aux = build_aux_graph(g, local_members, d, allowed=allowed, owner=owner, check_connected=False)

    def usable(a, b):
        # the parent's ball interior must stay inside B(u, 2d+4)
        return du.get(a, 10**9) <= 2 * d + 4 - BALL + 1

    changes: list = []
    _unfreeze_along_tree(g, colors, k, aux, u, changes, can_recolor=inner.__contains__, usable=usable)
    return changes
