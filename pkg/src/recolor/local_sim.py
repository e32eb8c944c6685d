"""Synchronous LOCAL-model simulator.

Node programs only ever see their own identifier, degree and inputs, plus
the messages arriving on their ports; the simulator owns the graph. After
``t`` rounds a node's state is therefore a function of its radius-``t``
neighborhood, which is what :func:`locality_probe` tests.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

from .errors import ParameterError, ProbeInconclusive, SimulationTimeout
from .graph_core import Graph, ball, distance_d_mis

PHASES = ("symmetry_breaking_oracle", "warming", "outside", "inside")


@dataclass
class RoundTrace:
    phases: dict = field(default_factory=lambda: {p: 0 for p in PHASES})
    messages: list = field(default_factory=list)
    state_sizes: list = field(default_factory=list)
    knowledge_radius: int = 0

    def add(self, phase: str, rounds: int):
        if phase not in self.phases:
            raise ParameterError(f"unknown phase {phase!r}")
        self.phases[phase] += rounds

    @property
    def total(self) -> int:
        return sum(self.phases.values())

    @property
    def recoloring_rounds(self) -> int:
        return self.total - self.phases["symmetry_breaking_oracle"]

    def merge(self, other: "RoundTrace"):
        for p, r in other.phases.items():
            self.phases[p] += r
        self.messages.extend(other.messages)
        self.state_sizes.extend(other.state_sizes)
        self.knowledge_radius = max(self.knowledge_radius, other.knowledge_radius)

    def to_json(self) -> str:
        doc = {p: self.phases[p] for p in PHASES}
        doc["total"] = self.total
        doc["knowledge_radius"] = self.knowledge_radius
        doc["messages_per_round"] = self.messages
        return json.dumps(doc, separators=(",", ":"))


@dataclass(frozen=True)
class Instance:
    graph: Graph
    inputs: tuple
    ids: tuple

    @classmethod
    def build(cls, g: Graph, inputs: Sequence[dict] | None = None, ids: Sequence[int] | None = None):
        if inputs is None:
            inputs = [{} for _ in range(g.n)]
        if ids is None:
            ids = [v + 1 for v in range(g.n)]
        if len(set(ids)) != g.n:
            raise ParameterError("node identifiers must be unique")
        if g.n and not all(1 <= i <= max(1, g.n * g.n) for i in ids):
            raise ParameterError("node identifiers must lie in [1, n^2]")
        return cls(g, tuple(dict(x) for x in inputs), tuple(ids))

    def restrict(self, vertices) -> tuple["Instance", list[int]]:
        sub, old = self.graph.induced(vertices)
        return Instance(sub, tuple(self.inputs[v] for v in old), tuple(self.ids[v] for v in old)), old


class NodeProgram:
    """Override ``init``, ``message``, ``update`` and ``output``.

    ``output`` returning anything but ``None`` halts the node.
    """

    def init(self, ident: int, degree: int, inputs: dict) -> Any:
        raise NotImplementedError

    def message(self, state, rnd: int):
        return state

    def update(self, state, inbox: list, rnd: int):
        return state

    def output(self, state):
        return None

    def validate(self, instance: Instance) -> bool:
        return True


def run(instance: Instance, program: NodeProgram, max_rounds: int):
    g = instance.graph
    states = [program.init(instance.ids[v], g.degree(v), instance.inputs[v]) for v in range(g.n)]
    outputs = [program.output(s) for s in states]
    trace = RoundTrace()
    rnd = 0
    while any(o is None for o in outputs):
        if rnd >= max_rounds:
            raise SimulationTimeout(max_rounds, trace)
        rnd += 1
        msgs = [program.message(states[v], rnd) for v in range(g.n)]
        trace.messages.append(sum(g.degree(v) for v in range(g.n) if msgs[v] is not None))
        new = []
        for v in range(g.n):
            if outputs[v] is not None:
                new.append(states[v])
                continue
            inbox = [msgs[u] for u in g.adj[v]]
            new.append(program.update(states[v], inbox, rnd))
        states = new
        trace.state_sizes.append(max((len(repr(s)) for s in states), default=0))
        for v in range(g.n):
            if outputs[v] is None:
                outputs[v] = program.output(states[v])
    trace.knowledge_radius = rnd
    return outputs, trace


def _canon(x) -> str:
    return json.dumps(x, sort_keys=True, default=list)


def locality_probe(instance: Instance, program: NodeProgram, v: int, radius: int, max_rounds: int = 10**6) -> bool:
    """Does ``v`` produce the same output on ``B(v, radius)`` alone?"""
    full, _ = run(instance, program, max_rounds)
    sub, old = instance.restrict(ball(instance.graph, v, radius))
    if not program.validate(sub):
        raise ProbeInconclusive("truncated instance fails input validation")
    part, _ = run(sub, program, max_rounds)
    return _canon(full[v]) == _canon(part[old.index(v)])


# -- node programs -------------------------------------------------------------


class Echo(NodeProgram):
    """Zero rounds: output the input color."""

    def init(self, ident, degree, inputs):
        return inputs.get("color")

    def output(self, state):
        return state


class ScheduleCheck(NodeProgram):
    """One round: every node checks its own trajectory against its neighbors'.

    Input ``trajectory`` is the node's color list ``c_0..c_l``.
    """

    def init(self, ident, degree, inputs):
        return {"traj": tuple(inputs["trajectory"]), "verdict": None}

    def message(self, state, rnd):
        return state["traj"]

    def update(self, state, inbox, rnd):
        mine = state["traj"]
        ok = True
        for other in inbox:
            if len(other) != len(mine):
                ok = False
                break
            for i in range(len(mine)):
                if mine[i] == other[i]:
                    ok = False
                if i and mine[i] != mine[i - 1] and other[i] != other[i - 1]:
                    ok = False
        return {"traj": mine, "verdict": ok}

    def output(self, state):
        return state["verdict"]


class InputCheck(NodeProgram):
    """One round: both colorings locally proper and distance labels consistent.

    A label 0 requires the node to be non-frozen; a positive label requires
    a neighbor with a smaller label.
    """

    def __init__(self, k: int):
        self.k = k

    def init(self, ident, degree, inputs):
        return {"in": inputs, "verdict": None}

    def message(self, state, rnd):
        x = state["in"]
        return (x["src"], x["dst"], x["dist_src"], x["dist_dst"])

    def update(self, state, inbox, rnd):
        x = state["in"]
        ok = True
        for col, lab, j in (("src", "dist_src", 0), ("dst", "dist_dst", 1)):
            mine = x[col]
            nbr = [m[j] for m in inbox]
            if mine in nbr or not 0 <= mine < self.k:
                ok = False
            label = x[lab]
            if label == 0:
                if len(set(nbr) | {mine}) == self.k:
                    ok = False
            elif label < 0 or not any(m[2 + j] < label for m in inbox):
                ok = False
        return {"in": x, "verdict": ok}

    def output(self, state):
        return state["verdict"]


class TwoPalettes(NodeProgram):
    """The 2Δ+2-color schedule, one step per round.

    Palette A is ``[0, Δ+1)``, palette B is ``[Δ+1, 2Δ+2)``. Output is the
    node's trajectory of length ``4(Δ+1) + 1``.
    """

    def __init__(self, delta: int):
        self.delta = delta
        self.steps = 4 * (delta + 1)

    def init(self, ident, degree, inputs):
        return {"src": inputs["src"], "dst": inputs["dst"], "traj": [inputs["src"]]}

    def message(self, state, rnd):
        return state["traj"][-1]

    def update(self, state, inbox, rnd):
        cur = state["traj"][-1]
        new = two_palette_move(self.delta, rnd - 1, cur, state["src"], state["dst"], set(inbox))
        return {**state, "traj": state["traj"] + [cur if new is None else new]}

    def output(self, state):
        if len(state["traj"]) == self.steps + 1:
            return tuple(state["traj"])
        return None


def two_palette_move(delta: int, step: int, cur: int, src: int, dst: int, nbr_colors) -> int | None:
    """New color of one vertex at ``step`` (0-based) of the 2Δ+2 schedule, or ``None``."""
    m = delta + 1
    stage, i = divmod(step, m)
    A = range(0, m)
    B = range(m, 2 * m)
    if stage == 0 and src == m + i:
        return next(c for c in A if c not in nbr_colors)
    if stage == 1 and dst == m + i:
        return dst
    if stage == 2 and dst == i:
        return next(c for c in B if c not in nbr_colors)
    if stage == 3 and dst == i:
        return dst
    return None


class MaxId(NodeProgram):
    """Negative control: floods for ``rounds`` rounds and outputs the largest ID seen."""

    def __init__(self, rounds: int):
        self.rounds = rounds

    def init(self, ident, degree, inputs):
        return (ident, 0)

    def message(self, state, rnd):
        return state[0]

    def update(self, state, inbox, rnd):
        return (max([state[0]] + list(inbox)), rnd)

    def output(self, state):
        return state[0] if state[1] >= self.rounds else None


# -- symmetry-breaking oracles ---------------------------------------------------


def log_star(n: int) -> int:
    s = 0
    x = float(max(n, 1))
    while x > 1:
        x = math.log2(x)
        s += 1
    return s


def symmetry_oracle(kind, g: Graph, members=None, trace: RoundTrace | None = None):
    """Centralized stand-ins for distributed symmetry breaking.

    Kinds: ``("mis", d)``, ``("coloring", q)``, ``("member_coloring", p)``.
    Each call charges a declared placeholder of ``radius * (1 + log* n)``
    rounds to the oracle bucket only.
    """
    name, param = kind
    if name == "mis":
        result = distance_d_mis(g, param)
        radius = param
    elif name == "coloring":
        from .pipeline import delta_coloring, greedy_coloring

        if param == g.max_degree:
            result = delta_coloring(g)
        elif param >= g.max_degree + 1:
            result = greedy_coloring(g, param)
        else:
            raise ParameterError(f"no proper coloring oracle with {param} colors")
        radius = 1
    elif name == "member_coloring":
        from .warming import greedy_member_coloring

        if members is None:
            raise ParameterError("member_coloring needs the member set")
        result = greedy_member_coloring(g, members, param)
        radius = param
    else:
        raise ParameterError(f"unknown oracle kind {name!r}")
    if trace is not None:
        trace.add("symmetry_breaking_oracle", radius * (1 + log_star(g.n)))
    return result


def input_instance(g: Graph, src, dst, dist_src, dist_dst) -> Instance:
    inputs = [
        {"src": src[v], "dst": dst[v], "dist_src": dist_src[v], "dist_dst": dist_dst[v]} for v in range(g.n)
    ]
    return Instance.build(g, inputs)


def check_inputs_locally(g: Graph, src, dst, dist_src, dist_dst, k: int) -> list[int]:
    """Run the one-round input check; returns the nodes that reject."""
    out, _ = run(input_instance(g, src, dst, dist_src, dist_dst), InputCheck(k), 1)
    return [v for v, ok in enumerate(out) if not ok]
