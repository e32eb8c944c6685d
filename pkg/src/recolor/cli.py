"""Command-line entry point.

Exit codes: 0 success, 1 verification failure, 2 parameter or input error,
3 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import random
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__
from .errors import BudgetExceeded, InvariantViolation, ParameterError, ParseError, RecolorError
from .graph_core import (
    INF,
    Coloring,
    find_conflict,
    frozen_vertices,
    is_r_locally_nonfrozen,
    load_coloring,
    load_graph,
    local_nonfrozen_radius,
)
from .schedule import schedule_from_json, schedule_to_json, verify_schedule

EXIT_OK, EXIT_FAIL, EXIT_PARAM, EXIT_BUDGET = 0, 1, 2, 3

BENCH_COLUMNS = [
    "family",
    "n",
    "delta",
    "k",
    "total_recolorings",
    "parallel_steps",
    "rounds_warming",
    "rounds_outside",
    "rounds_inside",
]


@dataclass
class RunManifest:
    command: str
    argv: list
    inputs: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)
    version: str = __version__

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2) + "\n"


def _digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _write_manifest(args, argv, outputs):
    inputs = {}
    for name in ("graph", "colors_src", "colors_dst", "schedule", "labels_src", "labels_dst"):
        p = getattr(args, name, None)
        if p:
            inputs[name] = {"path": p, "sha256": _digest(p)}
    params = {name: getattr(args, name, None) for name in ("k", "mode", "r", "d", "seed", "budget")}
    m = RunManifest(args.cmd, list(argv), inputs, params, list(outputs))
    Path(str(outputs[0]) + ".manifest.json").write_text(m.to_json())


def _read_graph(path):
    return load_graph(Path(path).read_text())


def _read_coloring(path, k=None, g=None):
    c = load_coloring(Path(path).read_text())
    if k is not None:
        c = Coloring(c.colors, k)
    if g is not None and len(c.colors) != g.n:
        raise ParameterError(f"{path}: coloring has {len(c.colors)} entries, graph has {g.n} vertices")
    return c


def _read_labels(path):
    vals = []
    for i, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            vals.append(int(line))
        except ValueError:
            raise ParseError(f"expected an integer, got {line!r}", i) from None
    return vals


# -- commands --------------------------------------------------------------------


def cmd_check(args) -> int:
    g = _read_graph(args.graph)
    c = _read_coloring(args.colors_src, args.k, g)
    bad = find_conflict(g, c.colors)
    if bad is not None:
        u, v = bad
        print(f"proper: no (edge ({u}, {v}) colored {c.colors[u]})")
        return EXIT_FAIL
    frozen = sorted(frozen_vertices(g, c))
    print("proper: yes")
    print(f"frozen: {frozen}")
    radius = local_nonfrozen_radius(g, c)
    print(f"local non-frozen radius: {'none' if radius == INF else radius}")
    if args.r is not None:
        print(f"{args.r}-locally non-frozen: {'yes' if is_r_locally_nonfrozen(g, c, args.r) else 'no'}")
    return EXIT_OK


def cmd_schedule(args, argv) -> int:
    from . import pipeline

    g = _read_graph(args.graph)
    src = _read_coloring(args.colors_src, args.k, g)
    dst = _read_coloring(args.colors_dst, args.k or src.k, g)
    rounds = None
    if args.mode == "alg1":
        sched = pipeline.parallel_2delta2(g, src, dst)
    elif args.mode == "global":
        sched = pipeline.transform_global(g, src, dst, oracle_budget=args.budget or 0).schedule
    else:
        labels = None
        if args.labels_src or args.labels_dst:
            if not (args.labels_src and args.labels_dst):
                raise ParameterError("give both --labels-src and --labels-dst")
            labels = (_read_labels(args.labels_src), _read_labels(args.labels_dst))
            if len(labels[0]) != g.n or len(labels[1]) != g.n:
                raise ParameterError("distance annotations need one integer per vertex")
        r = args.r
        if r is None:
            radii = [local_nonfrozen_radius(g, c) for c in (src, dst)]
            if INF in radii:
                raise ParameterError("frozen coloring is isolated")
            r = max(radii)
        res = pipeline.transform_local(g, src, dst, r, labels=labels, d=args.d or pipeline.R_MIS)
        sched = res.schedule
        rounds = res.trace
    out = Path(args.out)
    out.write_text(schedule_to_json(sched) + "\n")
    outputs = [str(out)]
    if rounds is not None:
        tpath = Path(str(out) + ".trace.json")
        tpath.write_text(rounds.to_json() + "\n")
        outputs.append(str(tpath))
    _write_manifest(args, argv, outputs)
    line = f"steps={sched.length} total_recolorings={sched.total_recolorings} per_vertex={sched.total_recolorings / max(g.n, 1):.3f}"
    if rounds is not None:
        line += f" rounds={rounds.total} recoloring_rounds={rounds.recoloring_rounds}"
    print(line)
    return EXIT_OK


def cmd_verify(args) -> int:
    g = _read_graph(args.graph)
    src = _read_coloring(args.colors_src, args.k, g)
    dst = _read_coloring(args.colors_dst, args.k or src.k, g) if args.colors_dst else None
    sched = schedule_from_json(Path(args.schedule).read_text())
    rep = verify_schedule(g, src, sched, dst)
    print(rep.summary())
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_oracle(args) -> int:
    from . import oracle

    g = _read_graph(args.graph)
    if args.k is None:
        raise ParameterError("--k is required")
    budget = args.budget or oracle.DEFAULT_BUDGET
    doc = {"n": g.n, "k": args.k}
    if args.colors_src and args.colors_dst:
        a = _read_coloring(args.colors_src, args.k, g)
        b = _read_coloring(args.colors_dst, args.k, g)
        doc["distance"] = oracle.distance(g, args.k, a, b, budget)
    else:
        comps = oracle.component_structure(g, args.k, budget)
        doc["colorings"] = sum(c.size for c in comps)
        doc["components"] = len(comps)
        doc["isolated"] = sum(1 for c in comps if c.is_isolated)
        doc["sizes"] = sorted((c.size for c in comps if not c.is_isolated), reverse=True)
    print(json.dumps(doc, sort_keys=True))
    return EXIT_OK


def bench_rows(family: str, sizes, seed: int, k: int):
    from . import corpus, pipeline
    from .graph_core import local_nonfrozen_radius as radius

    for n in sizes:
        rng = random.Random(f"{seed}:{family}:{n}")
        if family == "prism":
            if n % 2:
                raise ParameterError("prism sizes must be even")
            g = corpus.prism(n // 2)
        elif family == "cubic":
            g = corpus.random_cubic(n, rng)
        else:
            raise ParameterError(f"unknown family {family!r}")
        src = corpus.random_nonfrozen_coloring(g, k, rng)
        dst = corpus.random_nonfrozen_coloring(g, k, rng)
        glob = pipeline.transform_global(g, src, dst)
        r = max(radius(g, src), radius(g, dst))
        if r == INF:
            raise ParameterError("frozen coloring is isolated")
        loc = pipeline.transform_local(g, src, dst, r)
        ph = loc.trace.phases
        yield {
            "family": family,
            "n": g.n,
            "delta": g.max_degree,
            "k": k,
            "total_recolorings": glob.schedule.total_recolorings,
            "parallel_steps": loc.schedule.length,
            "rounds_warming": ph["warming"],
            "rounds_outside": ph["outside"],
            "rounds_inside": ph["inside"],
        }


def cmd_bench(args, argv) -> int:
    sizes = [int(x) for x in args.sizes.split(",") if x.strip()]
    k = args.k or 4
    out = Path(args.out) if args.out else None
    fh = out.open("w", newline="") if out else sys.stdout
    try:
        w = csv.DictWriter(fh, fieldnames=BENCH_COLUMNS, lineterminator="\n")
        w.writeheader()
        for row in bench_rows(args.family, sizes, args.seed, k):
            w.writerow(row)
    finally:
        if out:
            fh.close()
    if out:
        _write_manifest(args, argv, [str(out)])
    return EXIT_OK


def cmd_simulate(args) -> int:
    """Run the 2Δ+2 schedule as a node program and print per-node trajectories."""
    from .local_sim import Instance, TwoPalettes, run

    g = _read_graph(args.graph)
    src = _read_coloring(args.colors_src, args.k, g)
    dst = _read_coloring(args.colors_dst, args.k or src.k, g)
    inst = Instance.build(g, [{"src": src.colors[v], "dst": dst.colors[v]} for v in range(g.n)])
    prog = TwoPalettes(g.max_degree)
    outputs, trace = run(inst, prog, prog.steps + 1)
    print(json.dumps({"rounds": trace.knowledge_radius, "trajectories": {str(v): list(o) for v, o in enumerate(outputs)}}))
    return EXIT_OK


def cmd_rerun(args) -> int:
    doc = json.loads(Path(args.manifest).read_text())
    for name, info in doc.get("inputs", {}).items():
        if _digest(info["path"]) != info["sha256"]:
            raise ParameterError(f"input {info['path']} changed since the manifest was written")
    return main(doc["argv"])


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="recolor", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp, src=True, dst=False):
        sp.add_argument("--graph", required=True, help="edge list: 'n m' header then one edge per line")
        if src:
            sp.add_argument("--colors-src", required=True, help="coloring file: 'n k' header then one color per line")
        if dst:
            sp.add_argument("--colors-dst", required=dst == "required")
        sp.add_argument("--k", type=int, help="palette size (overrides the coloring header)")

    sp = sub.add_parser("check", help="properness, frozen set, local non-frozenness")
    common(sp)
    sp.add_argument("--r", type=int)

    sp = sub.add_parser("schedule", help="compute a recoloring schedule")
    common(sp, dst="required")
    sp.add_argument("--mode", choices=["global", "local", "alg1"], default="global")
    sp.add_argument("--r", type=int, help="local mode: locality radius of the inputs")
    sp.add_argument("--d", type=int, help="local mode: distance of the member set (default 28)")
    sp.add_argument("--labels-src", help="local mode: distance annotations for the source")
    sp.add_argument("--labels-dst", help="local mode: distance annotations for the target")
    sp.add_argument("--budget", type=int, help="global mode: exhaustive fallback budget for tiny graphs")
    sp.add_argument("--seed", type=int, default=0, help="recorded only; algorithms are deterministic")
    sp.add_argument("--out", required=True)

    sp = sub.add_parser("verify", help="replay a schedule and report the first violation")
    common(sp, dst=True)
    sp.add_argument("--schedule", required=True)

    sp = sub.add_parser("oracle", help="configuration-graph structure or exact distance")
    common(sp, src=False)
    sp.add_argument("--colors-src")
    sp.add_argument("--colors-dst")
    sp.add_argument("--budget", type=int)

    sp = sub.add_parser("bench", help="CSV table over a family of generated instances")
    sp.add_argument("--family", choices=["prism", "cubic"], default="prism")
    sp.add_argument("--sizes", default="60,120,240,480")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--k", type=int)
    sp.add_argument("--out")

    sp = sub.add_parser("simulate", help="run the 2Δ+2 node program in the simulator")
    common(sp, dst="required")

    sp = sub.add_parser("rerun", help="re-execute a run manifest")
    sp.add_argument("manifest")
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    try:
        if args.cmd == "check":
            return cmd_check(args)
        if args.cmd == "schedule":
            return cmd_schedule(args, argv)
        if args.cmd == "verify":
            return cmd_verify(args)
        if args.cmd == "oracle":
            return cmd_oracle(args)
        if args.cmd == "bench":
            return cmd_bench(args, argv)
        if args.cmd == "simulate":
            return cmd_simulate(args)
        return cmd_rerun(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ParameterError, ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except (InvariantViolation, RecolorError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
