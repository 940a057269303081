"""Exhaustive optimum for tiny scheduling instances, used to check the heuristic."""

from __future__ import annotations

from typing import Optional

from .rects import RectSet, build_rectangles
from .soc_model import Number, SocSpec

MAX_CORES = 4
MAX_RECTS = 6


def brute_force_rects(sets: list[RectSet], w_max: int, p_max: Optional[Number] = None,
                      powers: Optional[dict] = None) -> int:
    """Minimum makespan over every rectangle choice and every non-preemptive
    placement whose start times are 0 or the finish time of another test.

    Tests are enumerated in order of start time, so a candidate start only has
    to be checked against the tests already placed.
    """
    if len(sets) > MAX_CORES or any(len(s.rects) > MAX_RECTS for s in sets):
        raise ValueError(f"instance too large for brute force (max {MAX_CORES} cores, "
                         f"{MAX_RECTS} rectangles each)")
    powers = powers or {}
    if p_max is not None and any(powers.get(s.core_id, 0) > p_max for s in sets):
        raise ValueError("a core exceeds the power limit on its own")
    best = [sum(max(r.width_cycles for r in s.rects) for s in sets)]  # all in series
    n = len(sets)

    def feasible(placed, start, end, width, power):
        # usage only rises at starts, so checking the start points inside [start, end) suffices
        points = [start] + [p[0] for p in placed if start < p[0] < end]
        for t in points:
            wires, load = width, power
            for s, f, w, pw in placed:
                if s <= t < f:
                    wires += w
                    load += pw
            if wires > w_max or (p_max is not None and load > p_max):
                return False
        return True

    def search(remaining, placed, last_start, makespan):
        if makespan >= best[0]:
            return
        if not remaining:
            best[0] = makespan
            return
        starts = sorted({0} | {p[1] for p in placed})
        for k in remaining:
            s_set = sets[k]
            pw = powers.get(s_set.core_id, 0) if p_max is not None else 0
            rest = remaining - {k}
            for r in s_set.rects:
                if r.height > w_max:
                    continue
                for t in starts:
                    if t < last_start:
                        continue
                    end = t + r.width_cycles
                    if end >= best[0]:
                        break
                    if feasible(placed, t, end, r.height, pw):
                        placed.append((t, end, r.height, pw))
                        search(rest, placed, t, max(makespan, end))
                        placed.pop()

    search(frozenset(range(n)), [], 0, 0)
    return best[0]


def brute_force_schedule(soc: SocSpec, w_max: int, p_max: Optional[Number] = None) -> int:
    if len(soc.cores) > MAX_CORES:
        raise ValueError(f"instance too large for brute force (max {MAX_CORES} cores)")
    sets = [build_rectangles(c, w_max) for c in soc.cores]
    if p_max is None:
        p_max = soc.default_power_limit
    return brute_force_rects(sets, w_max, p_max, {c.id: c.power for c in soc.cores})

