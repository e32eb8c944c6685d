"""Schedules (parallel, restricted, per-vertex) and the verifier."""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ParameterError, ParseError
from .graph_core import Coloring, Graph, find_conflict

NOT_INDEPENDENT = "not-independent"
NO_OP = "no-op-change"
IMPROPER = "improper-result"
WRONG_FINAL = "wrong-final-coloring"


def _norm_step(changes) -> tuple[tuple[int, int], ...]:
    return tuple(sorted((int(v), int(c)) for v, c in changes))


@dataclass(frozen=True)
class Schedule:
    """Ordered parallel steps; each step is a sorted tuple of ``(vertex, new color)``."""

    steps: tuple[tuple[tuple[int, int], ...], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(_norm_step(s) for s in self.steps))

    @property
    def length(self) -> int:
        return len(self.steps)

    @property
    def total_recolorings(self) -> int:
        return sum(len(s) for s in self.steps)

    def __add__(self, other: "Schedule") -> "Schedule":
        return Schedule(self.steps + other.steps)

    def pruned(self) -> "Schedule":
        return Schedule(tuple(s for s in self.steps if s))

    def flattened(self) -> "Schedule":
        """One vertex per step, in ascending vertex order inside each step."""
        return Schedule(tuple((ch,) for s in self.steps for ch in s))

    def recolored_vertices(self) -> set[int]:
        return {v for s in self.steps for v, _ in s}


def singletons(changes: Iterable[tuple[int, int]]) -> Schedule:
    return Schedule(tuple(((v, c),) for v, c in changes))


class SlotBuilder:
    """Collects changes into numbered slots; slots become parallel steps.

    Used to lay out independent sub-schedules (one per ball, say) side by
    side so that their k-th steps coincide.
    """

    def __init__(self):
        self.slots = defaultdict(list)

    def add(self, slot: int, v: int, color: int):
        self.slots[slot].append((v, color))

    def add_schedule(self, offset: int, s: Schedule, stride: int = 1):
        for i, step in enumerate(s.steps):
            for v, c in step:
                self.add(offset + i * stride, v, c)

    def to_schedule(self, prune: bool = True) -> Schedule:
        if not self.slots:
            return Schedule()
        if prune:
            return Schedule(tuple(self.slots[k] for k in sorted(self.slots) if self.slots[k]))
        top = max(self.slots)
        return Schedule(tuple(self.slots.get(k, ()) for k in range(top + 1)))


@dataclass(frozen=True)
class RestrictedSchedule:
    """Steps ``(a, b, vertices)``: every listed vertex goes from ``a`` to ``b``."""

    steps: tuple[tuple[int, int, frozenset], ...] = ()

    def __post_init__(self):
        steps = []
        for a, b, vs in self.steps:
            if a == b:
                raise ParameterError(f"restricted step with a == b == {a}")
            steps.append((int(a), int(b), frozenset(vs)))
        object.__setattr__(self, "steps", tuple(steps))

    @property
    def length(self) -> int:
        return len(self.steps)

    def pruned(self) -> "RestrictedSchedule":
        return RestrictedSchedule(tuple(s for s in self.steps if s[2]))

    def to_schedule(self) -> Schedule:
        return Schedule(tuple(tuple((v, b) for v in vs) for _, b, vs in self.steps))


@dataclass(frozen=True)
class VertexSchedule:
    """Color trajectory of every vertex, one entry per step boundary."""

    trajectories: tuple[tuple[int, ...], ...]

    @property
    def length(self) -> int:
        return len(self.trajectories[0]) - 1 if self.trajectories else 0


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    step: int | None = None
    reason: str | None = None
    detail: str = ""
    final: tuple[int, ...] | None = None

    def __bool__(self):
        return self.ok

    def summary(self) -> str:
        if self.ok:
            return "schedule valid"
        where = f"step {self.step}" if self.step is not None else "end"
        return f"{self.reason} at {where}: {self.detail}"


# -- replay ------------------------------------------------------------------


def check_step(g: Graph, colors: list[int], step, k: int):
    """Return ``(reason, detail)`` for the first violation of one step, or ``None``.

    Checks in order: independence, no-op changes, properness after the step.
    """
    seen = set()
    for v, c in step:
        if not 0 <= v < g.n:
            return NOT_INDEPENDENT, f"vertex {v} out of range"
        if v in seen:
            return NOT_INDEPENDENT, f"vertex {v} listed twice"
        seen.add(v)
    for v, _ in step:
        for u in g.adj[v]:
            if u in seen and u < v:
                return NOT_INDEPENDENT, f"adjacent vertices {u} and {v} change together"
    for v, c in step:
        if colors[v] == c:
            return NO_OP, f"vertex {v} already has color {c}"
    for v, c in step:
        if not 0 <= c < k:
            return IMPROPER, f"color {c} of vertex {v} outside [0, {k})"
        for u in g.adj[v]:
            if colors[u] == c:
                return IMPROPER, f"edge ({min(u, v)}, {max(u, v)}) colored {c}"
    return None


def apply_step(colors: list[int], step) -> None:
    for v, c in step:
        colors[v] = c


def verify_schedule(g: Graph, source: Coloring, s: Schedule, target: Coloring | None = None) -> VerificationReport:
    if len(source) != g.n:
        raise ParameterError("source coloring length differs from n")
    bad = find_conflict(g, source.colors)
    if bad is not None:
        return VerificationReport(False, None, IMPROPER, f"source has monochromatic edge {bad}")
    colors = list(source.colors)
    k = source.k
    for i, step in enumerate(s.steps):
        err = check_step(g, colors, step, k)
        if err is not None:
            return VerificationReport(False, i, err[0], err[1], tuple(colors))
        apply_step(colors, step)
    if target is not None and tuple(colors) != tuple(target.colors):
        diff = next(v for v in range(g.n) if colors[v] != target.colors[v])
        return VerificationReport(
            False, None, WRONG_FINAL, f"vertex {diff} ends at {colors[diff]}, target {target.colors[diff]}", tuple(colors)
        )
    return VerificationReport(True, final=tuple(colors))


def require_valid(g, source, s, target=None) -> tuple[int, ...]:
    rep = verify_schedule(g, source, s, target)
    if not rep.ok:
        raise ParameterError(f"invalid schedule: {rep.summary()}")
    return rep.final


def replay(source: Coloring, s: Schedule) -> Coloring:
    """Apply steps without checking anything."""
    colors = list(source.colors)
    for step in s.steps:
        apply_step(colors, step)
    return Coloring(tuple(colors), source.k)


def verify_restricted(g: Graph, source: Coloring, rs: RestrictedSchedule, target: Coloring | None = None) -> VerificationReport:
    colors = list(source.colors)
    for i, (a, b, vs) in enumerate(rs.steps):
        for v in sorted(vs):
            if colors[v] != a:
                return VerificationReport(False, i, "wrong-source-color", f"vertex {v} has {colors[v]}, step expects {a}")
        err = check_step(g, colors, [(v, b) for v in vs], source.k)
        if err is not None:
            return VerificationReport(False, i, err[0], err[1], tuple(colors))
        apply_step(colors, [(v, b) for v in vs])
    if target is not None and tuple(colors) != tuple(target.colors):
        return VerificationReport(False, None, WRONG_FINAL, "final coloring differs from target", tuple(colors))
    return VerificationReport(True, final=tuple(colors))


# -- transformations ---------------------------------------------------------


def restrict(g: Graph, source: Coloring, s: Schedule) -> RestrictedSchedule:
    """Split each step into one ``a -> b`` step per color pair, ``(a, b)`` ascending."""
    require_valid(g, source, s)
    colors = list(source.colors)
    out = []
    for step in s.steps:
        groups = defaultdict(list)
        for v, c in step:
            groups[(colors[v], c)].append(v)
        for a, b in sorted(groups):
            out.append((a, b, frozenset(groups[(a, b)])))
        apply_step(colors, step)
    return RestrictedSchedule(tuple(out))


def reverse(s: Schedule, g: Graph, source: Coloring) -> Schedule:
    """Schedule from the final coloring of ``s`` back to ``source``."""
    require_valid(g, source, s)
    colors = list(source.colors)
    undo = []
    for step in s.steps:
        undo.append(tuple((v, colors[v]) for v, _ in step))
        apply_step(colors, step)
    return Schedule(tuple(reversed(undo)))


def per_vertex_schedules(s: Schedule, source: Coloring) -> VertexSchedule:
    colors = list(source.colors)
    traj = [[c] for c in colors]
    for step in s.steps:
        apply_step(colors, step)
        for v, c in enumerate(colors):
            traj[v].append(c)
    return VertexSchedule(tuple(tuple(t) for t in traj))


def check_vertex_schedule(g: Graph, vs: VertexSchedule, source=None, target=None) -> bool:
    t = vs.trajectories
    if not t:
        return True
    length = len(t[0])
    if any(len(x) != length for x in t):
        return False
    if source is not None and tuple(x[0] for x in t) != tuple(source.colors):
        return False
    if target is not None and tuple(x[-1] for x in t) != tuple(target.colors):
        return False
    for i in range(1, length):
        changed = {v for v in range(g.n) if t[v][i] != t[v][i - 1]}
        if any(u in changed for v in changed for u in g.adj[v]):
            return False
        if find_conflict(g, [x[i] for x in t]) is not None:
            return False
    return True


# -- JSON --------------------------------------------------------------------


def schedule_to_json(s: Schedule) -> str:
    doc = {"steps": [[{"v": v, "to": c} for v, c in step] for step in s.steps]}
    return json.dumps(doc, separators=(",", ":"))


def schedule_from_json(text: str) -> Schedule:
    try:
        doc = json.loads(text)
        steps = [[(int(ch["v"]), int(ch["to"])) for ch in step] for step in doc["steps"]]
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"malformed schedule JSON: {exc}") from None
    # duplicates survive normalization, so the verifier still sees them
    return Schedule(tuple(steps))


def vertex_schedule_to_json(vs: VertexSchedule) -> str:
    doc = {str(v): list(t) for v, t in enumerate(vs.trajectories)}
    return json.dumps(doc, separators=(",", ":"))


def random_step_orders(s: Schedule, rng) -> Schedule:
    """Flatten with a random order inside each parallel step."""
    out = []
    for step in s.steps:
        step = list(step)
        rng.shuffle(step)
        out.extend((ch,) for ch in step)
    return Schedule(tuple(out))


def total_per_vertex(s: Schedule, n: int) -> list[int]:
    counts = [0] * n
    for step in s.steps:
        for v, _ in step:
            counts[v] += 1
    return counts


def changed_between(a: Sequence[int], b: Sequence[int]) -> list[int]:
    return [v for v in range(len(a)) if a[v] != b[v]]
