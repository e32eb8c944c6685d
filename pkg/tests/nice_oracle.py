"""Replay-based check of the nice-sequence contract, independent of safeness.check_nice."""

from recolor.graph_core import ball, is_frozen_at
from recolor.schedule import verify_schedule


def assert_nice(g, c, ns):
    v, w, r = ns.center, ns.target, ns.radius
    rep = verify_schedule(g, c, ns.schedule)
    assert rep.ok, rep.summary()
    interior = ball(g, v, r - 1)
    seen = {}
    for step in ns.schedule.steps:
        assert len(step) == 1
        x = step[0][0]
        seen[x] = seen.get(x, 0) + 1
    assert set(seen) <= interior | {w}
    assert seen.get(w, 0) >= 1
    assert max(seen.values()) <= 2
    assert ns.schedule.total_recolorings <= 2 * r
    assert not is_frozen_at(g, rep.final, v, c.k)
    assert rep.final == ns.final.colors
    return rep.final
