"""Full transformations: outside the balls, inside the balls, and the drivers.

Every phase is laid out in numbered slots whose count depends only on
``(Δ, k, r, r')``. A slot is a parallel step; most slots are empty and only
the non-empty ones are stored. Flattening sorted slots gives the pruned
schedule, and the slot index itself is the round-free "time" used when
comparing per-vertex schedules across instances.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .degeneracy import layered_ordering, list_recolor_slotted, source_ordering, unpruned_length
from .errors import InvariantViolation, ParameterError
from .graph_core import (
    Coloring,
    DistanceMIS,
    Graph,
    bfs_distances,
    check_distance_mis,
    check_proper,
    components,
    distance_array,
    distance_d_mis,
    geodesic,
    is_connected,
    is_frozen_at,
)
from .safeness import nice_sequence_inplace, unfreeze_toward
from .schedule import Schedule, reverse
from .warming import ball_owners, unfreeze_centralized, unfreeze_distributed

R_BALL = 7
R_MIS = 28
EXTENSION = 6


# -- slotted phases ------------------------------------------------------------


@dataclass
class Phase:
    """Changes ``(v, old, new)`` keyed by slot, within ``[0, span)``."""

    span: int
    slots: dict = field(default_factory=dict)

    def add(self, slot: int, v: int, old: int, new: int):
        if not 0 <= slot < self.span:
            raise InvariantViolation(f"slot {slot} outside the phase span {self.span}")
        self.slots.setdefault(slot, []).append((v, old, new))

    def schedule(self) -> Schedule:
        return Schedule(tuple(tuple((v, new) for v, _, new in self.slots[s]) for s in sorted(self.slots)))

    def reversed(self) -> "Phase":
        out = Phase(self.span)
        for s, ch in self.slots.items():
            out.slots[self.span - 1 - s] = [(v, new, old) for v, old, new in ch]
        return out

    @property
    def total(self) -> int:
        return sum(len(ch) for ch in self.slots.values())


def phase_from_slots(slot_changes: dict, span: int, start) -> Phase:
    """Attach old colors to ``{slot: [(v, new), ...]}`` by replaying from ``start``."""
    colors = list(start)
    ph = Phase(span)
    for s in sorted(slot_changes):
        for v, new in slot_changes[s]:
            ph.add(s, v, colors[v], new)
        for v, new in slot_changes[s]:
            colors[v] = new
    return ph


def concat_phases(phases) -> tuple[Schedule, dict]:
    """Place phases back to back; returns the pruned schedule and global slots."""
    merged = {}
    offset = 0
    for ph in phases:
        for s, ch in ph.slots.items():
            merged[offset + s] = ch
        offset += ph.span
    sched = Schedule(tuple(tuple((v, new) for v, _, new in merged[s]) for s in sorted(merged)))
    return sched, merged


def vertex_events(merged: dict, vertices=None) -> dict:
    """Per-vertex list of ``(slot, new color)`` in slot order."""
    out = {}
    for s in sorted(merged):
        for v, _, new in merged[s]:
            if vertices is None or v in vertices:
                out.setdefault(v, []).append((s, new))
    return out


# -- simple colorings ------------------------------------------------------------


def greedy_coloring(g: Graph, q: int) -> Coloring:
    """Greedy by ascending vertex ID; needs ``q >= Δ + 1``."""
    if q < g.max_degree + 1:
        raise ParameterError(f"greedy coloring needs at least {g.max_degree + 1} colors")
    colors = [-1] * g.n
    for v in range(g.n):
        used = {colors[u] for u in g.adj[v]}
        colors[v] = next(c for c in range(q) if c not in used)
    return Coloring(tuple(colors), q)


def _greedy_in_order(g, order, q, colors):
    for v in order:
        used = {colors[u] for u in g.adj[v] if colors[u] >= 0}
        free = [c for c in range(q) if c not in used]
        if not free:
            return False
        colors[v] = free[0]
    return True


def _bfs_layers_order(g, root, removed=()):
    dist = bfs_distances(g, root, allowed=set(range(g.n)) - set(removed))
    return sorted(dist, key=lambda v: (-dist[v], v)), dist


def _backtrack_coloring(g, q, limit=10**6):
    """DSatur backtracking; returns a color list or ``None``."""
    colors = [-1] * g.n
    counter = [0]

    def pick():
        best = None
        for v in range(g.n):
            if colors[v] >= 0:
                continue
            sat = len({colors[u] for u in g.adj[v] if colors[u] >= 0})
            key = (-sat, -g.degree(v), v)
            if best is None or key < best[0]:
                best = (key, v)
        return None if best is None else best[1]

    def rec():
        v = pick()
        if v is None:
            return True
        counter[0] += 1
        if counter[0] > limit:
            return False
        used = {colors[u] for u in g.adj[v]}
        for c in range(q):
            if c not in used:
                colors[v] = c
                if rec():
                    return True
        colors[v] = -1
        return False

    return colors if rec() else None


def delta_coloring(g: Graph) -> Coloring:
    """A proper coloring with Δ colors (which exists by Brooks' theorem).

    A vertex of degree below Δ, or a vertex with two non-adjacent neighbors
    whose removal keeps the graph connected, can be colored last by greedy
    along decreasing BFS distance. Otherwise DSatur backtracking decides.
    """
    delta = g.max_degree
    if delta < 3:
        raise ParameterError("delta_coloring needs maximum degree at least 3")
    if not is_connected(g):
        raise ParameterError("delta_coloring needs a connected graph")
    if g.n == delta + 1 and all(g.degree(v) == delta for v in range(g.n)):
        raise ParameterError("complete graphs have no Δ-coloring")
    colors = [-1] * g.n
    low = [v for v in range(g.n) if g.degree(v) < delta]
    if low:
        order, _ = _bfs_layers_order(g, low[0])
        if _greedy_in_order(g, order, delta, colors):
            return Coloring(tuple(colors), delta)
    for x in range(g.n):
        nb = g.adj[x]
        for a, b in itertools.combinations(nb, 2):
            if g.adjacent(a, b):
                continue
            order, dist = _bfs_layers_order(g, x, removed=(a, b))
            if len(dist) != g.n - 2:
                continue
            colors = [-1] * g.n
            colors[a] = colors[b] = 0
            if _greedy_in_order(g, order, delta, colors):
                return Coloring(tuple(colors), delta)
    found = _backtrack_coloring(g, delta)
    if found is None:
        raise ParameterError("no Δ-coloring found")
    return Coloring(tuple(found), delta)


def demote_top_color(g: Graph, c: Coloring) -> tuple[Schedule, Coloring]:
    """Move every vertex of color ``k-1`` to its lowest free color (needs ``k >= Δ+2``)."""
    k = c.k
    if k < g.max_degree + 2:
        raise ParameterError("demotion needs k >= Δ + 2")
    colors = list(c.colors)
    step = []
    for v in range(g.n):
        if colors[v] == k - 1:
            used = {colors[u] for u in g.adj[v]}
            step.append((v, next(x for x in range(k - 1) if x not in used)))
    for v, x in step:
        colors[v] = x
    return Schedule((tuple(step),) if step else ()), Coloring(tuple(colors), k)


# -- the 2Δ+2 schedule ---------------------------------------------------------


def parallel_2delta2(g: Graph, sigma: Coloring, eta: Coloring) -> Schedule:
    """Fixed ``4(Δ+1)``-step schedule using palettes ``A=[0,Δ+1)`` and ``B=[Δ+1,2Δ+2)``.

    Empty steps are kept; the length is part of the contract.
    """
    delta = g.max_degree
    m = delta + 1
    k = 2 * m
    for c in (sigma, eta):
        if c.k != k or len(c.colors) != g.n:
            raise ParameterError(f"palette must be [0, {k}) for Δ = {delta}")
    check_proper(g, sigma)
    check_proper(g, eta)
    colors = list(sigma.colors)
    steps = []

    def lowest(v, palette):
        used = {colors[u] for u in g.adj[v]}
        return next(c for c in palette if c not in used)

    def run(members, choose):
        step = [(v, choose(v)) for v in members]
        step = [(v, c) for v, c in step if c != colors[v]]
        for v, c in step:
            colors[v] = c
        steps.append(tuple(step))

    A = range(m)
    B = range(m, k)
    for b in B:
        run([v for v in range(g.n) if sigma.colors[v] == b], lambda v: lowest(v, A))
    for b in B:
        run([v for v in range(g.n) if eta.colors[v] == b], lambda v: eta.colors[v])
    for a in A:
        run([v for v in range(g.n) if eta.colors[v] == a], lambda v: lowest(v, B))
    for a in A:
        run([v for v in range(g.n) if eta.colors[v] == a], lambda v: eta.colors[v])
    assert len(steps) == 4 * m
    return Schedule(tuple(steps))


# -- outside the balls -----------------------------------------------------------


def _members(S):
    return tuple(S.members if isinstance(S, DistanceMIS) else sorted(S))


def boundary_bound(delta: int, r: int) -> int:
    return delta * (delta - 1) ** (r - 1)


@dataclass(frozen=True)
class OutsideLayout:
    r: int
    r_prime: int
    k: int
    delta: int
    layers: int
    blocks: int
    restricted_span: int
    evac: int  # sub-slots reserved for evacuations before each restricted step

    @property
    def pre(self) -> int:
        return self.r + 1

    @property
    def span(self) -> int:
        return self.pre + self.restricted_span * (self.evac + 1)

    @property
    def rounds(self) -> int:
        # knowledge radius: pre-processing ladder, layer index, the list
        # recoloring recursion and nice sequences inside one ball
        return self.r + (self.r_prime + self.r) + self.blocks + 2 * self.r + 1


def outside_layout(delta: int, k: int, r: int, r_prime: int) -> OutsideLayout:
    layers = r_prime - r
    blocks = layers * k
    return OutsideLayout(
        r, r_prime, k, delta, layers, blocks, unpruned_length(k, blocks), 2 * r * boundary_bound(delta, r)
    )


@dataclass
class OutsideResult:
    phase: Phase
    coloring: Coloring
    layout: OutsideLayout
    evacuations: int
    restricted_steps: int


def _preprocess_members(g, colors, k, members, r, phase):
    for u in members:
        if not is_frozen_at(g, colors, u, k):
            continue
        du = bfs_distances(g, u, limit=r)
        cands = [x for x in du if not is_frozen_at(g, colors, x, k)]
        if not cands:
            raise ParameterError(f"no non-frozen vertex within distance {r} of member {u}")
        x = min(cands, key=lambda y: (du[y], y))
        ch = []
        if not unfreeze_toward(g, colors, k, geodesic(g, x, u, dist_w=du), ch):
            raise InvariantViolation(f"pre-processing ladder did not unfreeze member {u}")
        for j, (v, old, new) in enumerate(ch):
            phase.add(j, v, old, new)


def recolor_outside_balls(g: Graph, sigma: Coloring, eta: Coloring, S, r: int = R_BALL, r_prime: int | None = None) -> OutsideResult:
    """Reach a coloring that agrees with ``eta`` off the radius-``r`` balls around ``S``.

    Members are first made non-frozen, then a list recoloring of the outside
    graph runs step by step; before each ``a -> b`` step every ball boundary
    vertex colored ``b`` and adjacent to a mover is recolored by a nice
    sequence from the ball's center.
    """
    members = _members(S)
    if r_prime is None:
        r_prime = S.d if isinstance(S, DistanceMIS) else 2 * r + 2
    if r < 7:
        raise ParameterError("outside recoloring needs r >= 7")
    if r_prime < 2 * r + 2:
        raise ParameterError("members must be at distance at least 2r+2")
    delta = g.max_degree
    if delta < 3:
        raise ParameterError("outside recoloring needs maximum degree at least 3")
    k = sigma.k
    if k < delta + 1:
        raise ParameterError("outside recoloring needs k >= Δ + 1")
    if max(eta.colors, default=0) >= k:
        raise ParameterError("target uses colors outside the palette")
    check_proper(g, sigma)
    check_proper(g, eta)
    layout = outside_layout(delta, k, r, r_prime)
    phase = Phase(layout.span)
    colors = list(sigma.colors)
    _preprocess_members(g, colors, k, members, r, phase)
    owner = ball_owners(g, members, r)
    outside = [v for v in range(g.n) if v not in owner]
    if not outside or not members:
        if not members:
            raise ParameterError("member set is empty")
        return OutsideResult(phase, Coloring(tuple(colors), k), layout, 0, 0)
    order = layered_ordering(g, set(owner), eta.colors, limit=layout.layers, pad=k)
    lists = {v: range(k) for v in outside}
    sparse = list_recolor_slotted(g, order, lists, colors, eta.colors)
    stride = layout.evac + 1
    evacuations = 0
    adj = g.adj
    for slot, a, b, X in sparse.steps:
        base = layout.pre + slot * stride
        hit = {}
        for x in X:
            for y in adj[x]:
                u = owner.get(y)
                if u is not None and colors[y] == b:
                    hit.setdefault(u, set()).add(y)
        for u in sorted(hit):
            for q, y in enumerate(sorted(hit[u])):
                ch, _ = nice_sequence_inplace(g, colors, k, u, y, r)
                if len(ch) > 2 * r:
                    raise InvariantViolation("nice sequence longer than 2r")
                for j, (v, old, new) in enumerate(ch):
                    phase.add(base + q * 2 * r + j, v, old, new)
                evacuations += 1
        for x in sorted(X):
            if colors[x] != a:
                raise InvariantViolation(f"vertex {x} is not at color {a} before its step")
            phase.add(base + layout.evac, x, a, b)
            colors[x] = b
    for v in outside:
        if colors[v] != eta.colors[v]:
            raise InvariantViolation(f"vertex {v} did not reach its target outside the balls")
    return OutsideResult(phase, Coloring(tuple(colors), k), layout, evacuations, len(sparse.steps))


# -- inside the balls ------------------------------------------------------------


def unlock_vertex(g: Graph, colors, component, X, k: int):
    """First vertex of ``component`` whose list is large enough to start the recursion."""
    for x in sorted(component):
        if g.degree(x) <= k - 2:
            return x, "low-degree vertex"
        seen = set()
        for u in g.adj[x]:
            if u not in X:
                if colors[u] in seen:
                    return x, "same-colored external pair"
                seen.add(colors[u])
    return None


def _components_ok(g, colors, X, k):
    return all(unlock_vertex(g, colors, C, X, k) is not None for C in components(g, X))


def easy_slots(g: Graph, sigma, eta, X, k: int) -> tuple[dict, int]:
    """Sparse list recoloring of ``X`` against its fixed outside: ``({slot: [(v, a, b)]}, span)``."""
    X = set(X)
    out = {}
    span = 0
    for C in components(g, X):
        found = unlock_vertex(g, sigma, C, X, k)
        if found is None:
            raise ParameterError(f"no unlocking vertex in the component of {min(C)}")
        x, _ = found
        Cset = set(C)
        lists = {}
        for v in C:
            Z = {sigma[u] for u in g.adj[v] if u not in X}
            lists[v] = [c for c in range(k) if c not in Z]
        order = source_ordering(g, Cset, x, sigma)
        sparse = list_recolor_slotted(g, order, lists, sigma, eta)
        span = max(span, sparse.span)
        for slot, a, b, S in sparse.steps:
            out.setdefault(slot, []).extend((v, a, b) for v in sorted(S))
    return out, span


def recolor_ball_easy(g: Graph, sigma: Coloring, eta: Coloring, X, k: int | None = None) -> Schedule:
    """Recolor ``X`` from ``sigma`` to ``eta``; both must agree outside ``X``."""
    k = sigma.k if k is None else k
    if k < g.max_degree + 1:
        raise ParameterError("ball recoloring needs k >= Δ + 1")
    X = set(X)
    check_proper(g, sigma)
    check_proper(g, eta)
    for v in range(g.n):
        if v not in X and sigma.colors[v] != eta.colors[v]:
            raise ParameterError(f"colorings differ at {v} outside X")
    slots, _ = easy_slots(g, sigma.colors, eta.colors, X, k)
    return Schedule(tuple(tuple((v, b) for v, _, b in slots[s]) for s in sorted(slots)))


@dataclass(frozen=True)
class BallPlan:
    center: int
    core: frozenset
    extension: frozenset
    helper_recolors: tuple  # ((vertex, color), ...)
    unlock_witness: str


def extension_path(g: Graph, core) -> list[int] | None:
    """``[None, v_1, ..., v_6]`` with ``v_i`` at distance ``i`` from ``core``, or ``None``."""
    dist = bfs_distances(g, set(core), limit=EXTENSION)
    far = sorted(x for x, dx in dist.items() if dx == EXTENSION)
    if not far:
        return None
    path = [far[0]]
    for i in range(EXTENSION - 1, 0, -1):
        path.append(min(u for u in g.adj[path[-1]] if dist.get(u) == i))
    return [None] + list(reversed(path)), dist


def extend_ball(g: Graph, colors, core, center: int, k: int) -> BallPlan:
    """Grow the ball by a short path until some vertex can start the list recoloring.

    Raises :class:`ParameterError` ``"ball extension infeasible"`` when the
    graph does not reach distance 6 beyond the ball.
    """
    core = frozenset(core)
    colors = colors.colors if isinstance(colors, Coloring) else colors
    found = unlock_vertex(g, colors, core, core, k)
    if found is not None and _components_ok(g, colors, core, k):
        return BallPlan(center, core, core, (), found[1])
    got = extension_path(g, core)
    if got is None:
        raise ParameterError("ball extension infeasible")
    path, dist = got
    delta = g.max_degree
    for i in (3, 4, 5):
        vi = path[i]
        ext = core | frozenset(path[1 : i + 1])
        if g.degree(vi) < delta:
            return BallPlan(center, core, ext, (), "low-degree vertex")
        nb = sorted(u for u in g.adj[vi] if u != path[i - 1])
        for a, b in itertools.combinations(nb, 2):
            if g.adjacent(a, b):
                continue
            if dist[a] < 2 or dist[b] < 2:
                raise InvariantViolation("helper vertex too close to the ball")
            for h in (a, b):
                if any(colors[u] == k - 1 for u in g.adj[h]):
                    raise InvariantViolation(f"color {k - 1} already used next to helper {h}")
            return BallPlan(center, core, ext, ((a, k - 1), (b, k - 1)), "helper pair")
    raise InvariantViolation("no extension found along v_3, v_4, v_5")


@dataclass(frozen=True)
class InsideLayout:
    k: int
    r: int
    stage: int

    @property
    def span(self) -> int:
        # helpers | stage 1 | two single steps | stage 2 | final
        return 4 + 2 * self.stage

    @property
    def rounds(self) -> int:
        return self.r + EXTENSION + 1 + 2 * (2 * self.r + 2 * EXTENSION + 1) * self.k + 3


def inside_layout(k: int, r: int) -> InsideLayout:
    # an extended ball has radius at most r+5 around its center, so layers
    # from any vertex number at most 2(r+5)+1, each split into at most k blocks
    return InsideLayout(k, r, unpruned_length(k, (2 * r + 2 * EXTENSION - 1) * k))


def _pivot_candidates(g, colors, B, pair_color):
    """``(x, a, b)`` with ``a, b`` non-adjacent neighbors of ``x`` inside ``B`` and ``pair_color(a) == pair_color(b)``."""
    for x in sorted(B):
        nb = sorted(u for u in g.adj[x] if u in B)
        for a, b in itertools.combinations(nb, 2):
            if not g.adjacent(a, b) and pair_color[a] == pair_color[b]:
                yield x, a, b


def _ball_pivot(g, colors, gamma, B, k, lay, phase, base):
    """Recolor ``B`` to ``gamma`` through a temporary recoloring of the whole ball.

    First drive ``B - {a, b}`` to ``gamma`` with the roles of colors
    ``colors[a]`` and ``k-1`` swapped, keeping the same-colored pair
    ``a, b`` fixed; then either retarget ``a, b`` directly or run a second
    pass keeping a pair of equal-target vertices fixed. Candidates are tried
    in order (direct retargeting first); nothing is committed until one
    succeeds.
    """
    cands = []
    for x, a, b in _pivot_candidates(g, colors, B, colors):
        if _components_ok(g, colors, B - {a, b}, k):
            cands.append((0 if gamma[a] == gamma[b] else 1, x, a, b))
    cands.sort()
    for _, x, a, b in cands:
        trial = list(colors)
        tphase = Phase(phase.span)
        try:
            witness = _pivot_attempt(g, trial, gamma, B, k, lay, tphase, base, a, b)
        except (ParameterError, InvariantViolation):
            continue
        colors[:] = trial
        for s, ch in tphase.slots.items():
            for v, old, new in ch:
                phase.add(s, v, old, new)
        return BallPlan(x, frozenset(B), frozenset(B), (), witness)
    raise ParameterError("ball extension infeasible")


def _pivot_attempt(g, colors, gamma, B, k, lay, phase, base, a, b):
    alpha = colors[a]
    rho = {alpha: k - 1, k - 1: alpha}
    X = B - {a, b}
    target1 = list(colors)
    for v in X:
        target1[v] = rho.get(gamma[v], gamma[v])
    slots, span = easy_slots(g, colors, target1, X, k)
    if span > lay.stage:
        raise InvariantViolation("pivot pass longer than the inside layout")
    _apply(slots, colors, phase, base + 1)
    if gamma[a] == gamma[b]:
        c = gamma[a]
        t = base + 1 + lay.stage
        for h in (a, b):
            if colors[h] != c:
                phase.add(t, h, colors[h], c)
                colors[h] = c
        for v in sorted(X):
            if colors[v] == k - 1:
                phase.add(t + 1, v, k - 1, alpha)
                colors[v] = alpha
        return "pivot pair"
    for _, a2, b2 in _pivot_candidates(g, colors, X, gamma):
        X2 = B - {a2, b2}
        if colors[a2] != colors[b2] or not _components_ok(g, colors, X2, k):
            continue
        target2 = list(colors)
        for v in X2:
            target2[v] = gamma[v]
        slots, span = easy_slots(g, colors, target2, X2, k)
        if span > lay.stage:
            continue
        _apply(slots, colors, phase, base + 3 + lay.stage)
        t = base + 3 + 2 * lay.stage
        for h in (a2, b2):
            if colors[h] != gamma[h]:
                phase.add(t, h, colors[h], gamma[h])
                colors[h] = gamma[h]
        return "pivot pair, two passes"
    raise ParameterError("no second pivot pair")


def _apply(slots, colors, phase, offset):
    for s in sorted(slots):
        for v, a, b in slots[s]:
            if colors[v] != a:
                raise InvariantViolation(f"vertex {v} expected at color {a}")
            phase.add(offset + s, v, a, b)
        for v, _, b in slots[s]:
            colors[v] = b


@dataclass
class TargetResult:
    phase: Phase
    coloring: Coloring
    outside: OutsideResult
    plans: list
    used_oracle: bool = False

    @property
    def span(self) -> int:
        return self.phase.span


def mis_for_target(g: Graph) -> DistanceMIS:
    return distance_d_mis(g, R_MIS)


def recolor_to_target(g: Graph, mu: Coloring, gamma: Coloring, k: int | None = None, I=None, oracle_budget: int = 0) -> TargetResult:
    """Drive ``mu`` to ``gamma``, where ``gamma`` leaves color ``k-1`` unused.

    Members of ``I`` (a maximal set at distance 28) must be non-frozen in
    ``mu``. With ``oracle_budget > 0`` a ball that cannot be handled is
    solved by exhaustive search when ``k^n`` fits the budget.
    """
    k = mu.k if k is None else k
    r, r_prime = R_BALL, R_MIS
    if I is None:
        I = mis_for_target(g)
    gamma_k = Coloring(tuple(gamma.colors), k)
    if max(gamma.colors, default=0) >= k - 1:
        raise ParameterError("target must leave color k-1 unused")
    out = recolor_outside_balls(g, mu, gamma_k, I, r, r_prime)
    colors = list(out.coloring.colors)
    gcol = gamma.colors
    lay = inside_layout(k, r)
    phase = Phase(lay.span)
    plans = []
    members = _members(I)
    # helpers first, in one shared slot, so every ball sees the others' helpers
    balls = {}
    for v in members:
        B = frozenset(bfs_distances(g, v, limit=r))
        try:
            plan = extend_ball(g, colors, B, v, k)
        except ParameterError as exc:
            if "infeasible" not in str(exc):
                raise
            plan = None
        balls[v] = (B, plan)
    for v in members:
        B, plan = balls[v]
        if plan is None:
            continue
        for h, c in plan.helper_recolors:
            phase.add(0, h, colors[h], c)
        for h, c in plan.helper_recolors:
            colors[h] = c
    used_oracle = False
    for v in members:
        B, plan = balls[v]
        if plan is None:
            try:
                plan = _ball_pivot(g, colors, gcol, set(B), k, lay, phase, 0)
            except ParameterError:
                if oracle_budget and k ** g.n <= oracle_budget and len(members) == 1:
                    plan = _oracle_ball(g, colors, gcol, k, phase, oracle_budget)
                    used_oracle = True
                else:
                    raise
            plans.append(plan)
            continue
        target = list(colors)
        for x in plan.extension:
            target[x] = gcol[x]
        slots, _ = easy_slots(g, colors, target, plan.extension, k)
        _apply(slots, colors, phase, 1)
        plans.append(plan)
    final_slot = lay.span - 1
    for v in members:
        B, plan = balls[v]
        if plan is None:
            continue
        for h, _ in plan.helper_recolors:
            phase.add(final_slot, h, colors[h], gcol[h])
        for h, _ in plan.helper_recolors:
            colors[h] = gcol[h]
    if tuple(colors) != tuple(gcol):
        bad = next(v for v in range(g.n) if colors[v] != gcol[v])
        raise InvariantViolation(f"vertex {bad} did not reach its target")
    whole = Phase(out.phase.span + phase.span)
    whole.slots = dict(out.phase.slots)
    for s, ch in phase.slots.items():
        whole.slots[out.phase.span + s] = ch
    return TargetResult(whole, Coloring(tuple(colors), k), out, plans, used_oracle)


def _oracle_ball(g, colors, gcol, k, phase, budget):
    from .oracle import oracle_path

    path = oracle_path(g, k, tuple(colors), tuple(gcol), budget)
    if path is None:
        raise ParameterError("ball extension infeasible and the target is unreachable")
    if len(path) > phase.span - 2:
        raise InvariantViolation("oracle path longer than the inside layout")
    for i, (v, c) in enumerate(path):
        phase.add(1 + i, v, colors[v], c)
        colors[v] = c
    return BallPlan(None, frozenset(range(g.n)), frozenset(range(g.n)), (), "exhaustive search")


# -- drivers -------------------------------------------------------------------


@dataclass
class GlobalResult:
    schedule: Schedule
    gamma: Coloring
    members: tuple
    legs: tuple  # (forward leg from sigma, forward leg from eta)
    stats: dict


def global_leg(g: Graph, c: Coloring, I: DistanceMIS, gamma: Coloring, oracle_budget: int = 0) -> tuple[Schedule, dict]:
    """Sequential schedule from ``c`` to ``gamma``: warming, then the target recoloring."""
    warm = unfreeze_centralized(g, c, I, I.d)
    tr = recolor_to_target(g, warm.coloring, gamma, c.k, I, oracle_budget)
    sched = (warm.schedule + tr.phase.schedule()).flattened()
    return sched, {"warming": warm.total, "target": tr.phase.total, "oracle": tr.used_oracle}


def transform_global(g: Graph, sigma: Coloring, eta: Coloring, gamma: Coloring | None = None, oracle_budget: int = 0) -> GlobalResult:
    """Single-vertex schedule from ``sigma`` to ``eta`` through a fixed Δ-coloring."""
    if sigma.k != eta.k:
        raise ParameterError("source and target use different palettes")
    k = sigma.k
    delta = g.max_degree
    if delta < 3:
        raise ParameterError("global recoloring needs maximum degree at least 3")
    if k < delta + 1:
        raise ParameterError("global recoloring needs k >= Δ + 1")
    if not is_connected(g):
        raise ParameterError("global recoloring needs a connected graph")
    check_proper(g, sigma)
    check_proper(g, eta)
    for c in (sigma, eta):
        if all(is_frozen_at(g, c.colors, v, k) for v in range(g.n)):
            raise ParameterError("frozen coloring is isolated")
    I = mis_for_target(g)
    if gamma is None:
        gamma = delta_coloring(g)
    a, sa = global_leg(g, sigma, I, gamma, oracle_budget)
    b, sb = global_leg(g, eta, I, gamma, oracle_budget)
    back = reverse(b, g, eta)
    sched = a + back
    stats = {
        "total_recolorings": sched.total_recolorings,
        "warming": sa["warming"] + sb["warming"],
        "oracle_fallback": sa["oracle"] or sb["oracle"],
    }
    return GlobalResult(sched, gamma, I.members, (a, b), stats)


@dataclass
class LocalResult:
    schedule: Schedule
    trace: object
    slots: dict
    span: int
    gamma: Coloring
    members: tuple
    phases: list


def distance_labels(g: Graph, c: Coloring) -> list:
    nf = [v for v in range(g.n) if not is_frozen_at(g, c.colors, v, c.k)]
    return distance_array(g, nf)


def transform_local(
    g: Graph,
    sigma: Coloring,
    eta: Coloring,
    r: int,
    k: int | None = None,
    labels=None,
    gamma: Coloring | None = None,
    d: int = R_MIS,
) -> LocalResult:
    """Parallel schedule for ``r``-locally non-frozen colorings, laid out in fixed slots.

    ``labels`` are the per-vertex distance annotations ``(src, dst)``; they
    default to the true distances and are checked in one simulated round.
    ``gamma`` overrides the Δ-coloring oracle.
    """
    from .local_sim import RoundTrace, check_inputs_locally, symmetry_oracle

    k = sigma.k if k is None else k
    delta = g.max_degree
    if delta < 3:
        raise ParameterError("local recoloring needs maximum degree at least 3")
    if k < delta + 1 or sigma.k != k or eta.k != k:
        raise ParameterError("local recoloring needs k >= Δ + 1 on both colorings")
    if d < R_MIS:
        raise ParameterError(f"member distance must be at least {R_MIS}")
    if labels is None:
        labels = (distance_labels(g, sigma), distance_labels(g, eta))
    bad = check_inputs_locally(g, sigma.colors, eta.colors, labels[0], labels[1], k)
    if bad:
        raise ParameterError(f"input validity check failed at vertices {bad[:10]}")
    if max(max(labels[0]), max(labels[1])) > r:
        raise ParameterError(f"colorings are not {r}-locally non-frozen")
    trace = RoundTrace()
    I = symmetry_oracle(("mis", d), g, trace=trace)
    check_distance_mis(g, I)
    w1 = unfreeze_distributed(g, sigma, I, d, r, trace)
    w2 = unfreeze_distributed(g, eta, I, d, r, RoundTrace())
    # both sides run in the same rounds; only one is charged
    wspan = w1.span
    p1 = phase_from_slots(w1.slots.slots, wspan, sigma.colors)
    p4 = phase_from_slots(w2.slots.slots, wspan, eta.colors).reversed()
    lay_out = outside_layout(delta, k, R_BALL, R_MIS)
    lay_in = inside_layout(k, R_BALL)
    if k >= delta + 2:
        dem, gamma = demote_top_color(g, w1.coloring)
        p2 = Phase(1)
        for v, c in dem.steps[0] if dem.steps else ():
            p2.add(0, v, w1.coloring.colors[v], c)
        t2 = recolor_to_target(g, w2.coloring, gamma, k, I)
        p3 = t2.phase.reversed()
        trace.add("inside", 1)
    else:
        if gamma is None:
            gamma = symmetry_oracle(("coloring", delta), g, trace=trace)
        t1 = recolor_to_target(g, w1.coloring, gamma, k, I)
        t2 = recolor_to_target(g, w2.coloring, gamma, k, I)
        p2 = t1.phase
        p3 = t2.phase.reversed()
    trace.add("outside", lay_out.rounds)
    trace.add("inside", lay_in.rounds)
    phases = [p1, p2, p3, p4]
    sched, merged = concat_phases(phases)
    span = sum(p.span for p in phases)
    trace.knowledge_radius = trace.total
    return LocalResult(sched, trace, merged, span, gamma, I.members, phases)
