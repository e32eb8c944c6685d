"""Layered degeneracy orderings and list recoloring along them.

An ordering is stored as consecutive independent blocks in processing
order ``I_t, ..., I_1``: ``blocks[0]`` comes first, and ``d_plus[v]`` counts
the neighbors of ``v`` in later blocks.

The list recoloring works by induction on ``G_i = G[I_1 + ... + I_i]``. Its
un-pruned length grows like ``K^(t+1)``, so steps are produced sparsely:
every step carries its slot index in the full layout and empty slots are
never materialized unless asked for.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import InvariantViolation, ParameterError
from .graph_core import Graph, bfs_distances
from .schedule import RestrictedSchedule


@dataclass(frozen=True)
class LayerOrdering:
    blocks: tuple[frozenset, ...]
    d_plus: Mapping[int, int]

    @property
    def t(self) -> int:
        return len(self.blocks)

    @property
    def max_d_plus(self) -> int:
        return max(self.d_plus.values(), default=0)

    @property
    def vertices(self) -> frozenset:
        return frozenset().union(*self.blocks) if self.blocks else frozenset()


def ordering_from_blocks(g: Graph, blocks: Sequence, keep_empty: bool = False) -> LayerOrdering:
    blocks = tuple(frozenset(b) for b in blocks if b or keep_empty)
    pos = {}
    for i, b in enumerate(blocks):
        for v in b:
            if v in pos:
                raise ParameterError(f"vertex {v} appears in two blocks")
            pos[v] = i
    for i, b in enumerate(blocks):
        for v in b:
            if any(pos.get(u) == i for u in g.adj[v]):
                raise ParameterError(f"block {i} is not independent")
    d_plus = {v: sum(1 for u in g.adj[v] if pos.get(u, -1) > pos[v]) for v in pos}
    return LayerOrdering(blocks, d_plus)


def _split_layers(layers, colors, palette=None):
    blocks = []
    for layer in layers:
        by_color = {}
        for v in layer:
            by_color.setdefault(colors[v], []).append(v)
        for c in (sorted(by_color) if palette is None else range(palette)):
            blocks.append(by_color.get(c, []))
    return blocks


def layered_ordering(g: Graph, B_S, c, limit: int | None = None, pad: int | None = None) -> LayerOrdering:
    """Layers by distance from ``B_S``, each split by color class, ascending.

    ``c`` is a color vector; only its entries outside ``B_S`` are read. Every
    vertex has a neighbor one layer closer, so later neighbors number at most
    ``Δ-1``; that is asserted.

    With ``pad`` set (requires ``limit``) the ordering has exactly
    ``limit * pad`` blocks: layer ``i`` and color ``c`` always land in block
    ``(i-1) * pad + c``, empty or not.
    """
    colors = c.colors if hasattr(c, "colors") else c
    B_S = set(B_S)
    if not B_S:
        raise ParameterError("B_S must be non-empty")
    dist = bfs_distances(g, B_S)
    layers = {}
    for v, dv in dist.items():
        if dv > 0:
            layers.setdefault(dv, []).append(v)
    if len(dist) != g.n:
        raise ParameterError("graph is not connected")
    ordered = [sorted(layers[i]) for i in sorted(layers)]
    if limit is not None and len(ordered) > limit:
        raise InvariantViolation(f"{len(ordered)} layers exceed the bound {limit}")
    for layer in ordered:
        for v in layer:
            for u in g.adj[v]:
                if u not in B_S and colors[u] == colors[v]:
                    raise ParameterError(f"coloring of G' is improper at edge ({u}, {v})")
    if pad is not None:
        if limit is None:
            raise ParameterError("padding needs a layer limit")
        ordered += [[] for _ in range(limit - len(ordered))]
        order = ordering_from_blocks(g, _split_layers(ordered, colors, pad), keep_empty=True)
    else:
        order = ordering_from_blocks(g, _split_layers(ordered, colors))
    if order.max_d_plus > g.max_degree - 1:
        raise InvariantViolation("layered ordering has a vertex with Δ later neighbors")
    return order


def source_ordering(g: Graph, vertices, x: int, colors) -> LayerOrdering:
    """Layers of ``G[vertices]`` by distance from ``x``, split by color class."""
    allowed = set(vertices)
    dist = bfs_distances(g, x, allowed=allowed)
    if len(dist) != len(allowed):
        raise ParameterError("vertex set is not connected")
    layers = {}
    for v, dv in dist.items():
        layers.setdefault(dv, []).append(v)
    ordered = [sorted(layers[i]) for i in sorted(layers)]
    return ordering_from_blocks(g, _split_layers(ordered, colors))


def unpruned_length(K: int, t: int) -> int:
    """Length of the full layout: ``L(1) = K(K-1)``, ``L(i) = (K-1) L(i-1) + K(K-1)``."""
    if t == 0:
        return 0
    length = K * (K - 1)
    for _ in range(t - 1):
        length = (K - 1) * length + K * (K - 1)
    return length


@dataclass
class SlottedSteps:
    """Non-empty restricted steps tagged with their slot in the full layout."""

    span: int
    steps: list  # (slot, a, b, frozenset)

    def restricted(self) -> RestrictedSchedule:
        return RestrictedSchedule(tuple((a, b, X) for _, a, b, X in self.steps))


def _normalize_lists(order, lists):
    out = {}
    for v in order.vertices:
        out[v] = frozenset(lists[v])
    return out


def list_recolor_slotted(g: Graph, order: LayerOrdering, lists, sigma, eta) -> SlottedSteps:
    """Sparse form of :func:`list_recolor`."""
    L = _normalize_lists(order, lists)
    verts = order.vertices
    for v in verts:
        if len(L[v]) < order.d_plus[v] + 2:
            raise ParameterError(f"lists not safe at vertex {v}: |L| = {len(L[v])}, d+ = {order.d_plus[v]}")
        if sigma[v] not in L[v] or eta[v] not in L[v]:
            raise ParameterError(f"coloring not compatible with the list of vertex {v}")
    for v in verts:
        for u in g.adj[v]:
            if u in verts and (sigma[u] == sigma[v] or eta[u] == eta[v]):
                raise ParameterError(f"coloring improper at edge ({u}, {v})")
    t = order.t
    if t == 0:
        return SlottedSteps(0, [])
    U = sorted(set().union(*L.values()))
    K = len(U)
    pairs = [(a, b) for a in U for b in U if a != b]
    others = {(a, b): [c for c in U if c != a and c != b] for a, b in pairs}
    adj = g.adj

    def finals(block, col, base):
        out = []
        for p, (a, b) in enumerate(pairs):
            X = frozenset(v for v in block if col[v] == a and eta[v] == b)
            if X:
                out.append((base + p, a, b, X))
                for v in X:
                    col[v] = b
        return out

    first = order.blocks[t - 1]
    steps = finals(first, {v: sigma[v] for v in first}, 0)
    span = K * (K - 1)
    members = set(first)
    for i in range(2, t + 1):
        block = order.blocks[t - i]
        members |= block
        col = {v: sigma[v] for v in members}
        new = []
        for slot, a, b, X in steps:
            cand = sorted({u for x in X for u in adj[x] if u in block and col[u] == b})
            if cand:
                for q, c in enumerate(others[(a, b)]):
                    movers = [
                        u
                        for u in cand
                        if col[u] == b and c in L[u] and all(col.get(w) != c for w in adj[u])
                    ]
                    if movers:
                        new.append((slot * (K - 1) + q, b, c, frozenset(movers)))
                        for u in movers:
                            col[u] = c
                stuck = [u for u in cand if col[u] == b]
                if stuck:
                    raise InvariantViolation(f"vertex {stuck[0]} could not leave color {b}")
            new.append((slot * (K - 1) + K - 2, a, b, X))
            for x in X:
                col[x] = b
        new.extend(finals(block, col, span * (K - 1)))
        span = span * (K - 1) + K * (K - 1)
        steps = new
    return SlottedSteps(span, steps)


def list_recolor(g: Graph, order: LayerOrdering, lists, sigma, eta, prune: bool = True) -> RestrictedSchedule:
    """Restricted schedule driving the ordered vertices from ``sigma`` to ``eta``.

    With ``prune=False`` the full layout is materialized, empty steps
    included; the ``(a, b)`` label of an empty slot is still well defined.
    """
    sparse = list_recolor_slotted(g, order, lists, sigma, eta)
    if prune:
        return sparse.restricted()
    labels = _slot_labels(order, lists)
    by_slot = {slot: X for slot, _, _, X in sparse.steps}
    return RestrictedSchedule(tuple((a, b, by_slot.get(s, frozenset())) for s, (a, b) in enumerate(labels)))


def _slot_labels(order, lists):
    L = _normalize_lists(order, lists)
    U = sorted(set().union(*L.values())) if L else []
    K = len(U)
    pairs = [(a, b) for a in U for b in U if a != b]
    labels = list(pairs) if order.t else []
    for _ in range(order.t - 1):
        nxt = []
        for a, b in labels:
            nxt.extend((b, c) for c in U if c != a and c != b)
            nxt.append((a, b))
        nxt.extend(pairs)
        labels = nxt
    assert len(labels) == unpruned_length(K, order.t)
    return labels


def recolor_degenerate(g: Graph, order: LayerOrdering, k: int, sigma, eta, prune: bool = True) -> RestrictedSchedule:
    if k < order.max_d_plus + 2:
        raise ParameterError(f"k = {k} is below max d+ + 2 = {order.max_d_plus + 2}")
    lists = {v: range(k) for v in order.vertices}
    return list_recolor(g, order, lists, sigma, eta, prune)
