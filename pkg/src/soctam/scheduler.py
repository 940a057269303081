"""Power-constrained test scheduling by packing core rectangles into the TAM.

The bin has height ``w_max`` (TAM wires) and grows along the time axis. Cores
are taken in descending diagonal order; a core that cannot get at least half
of its peak width is deferred to a FIFO and retried only at full peak width.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .rects import RectSet, build_rectangles, compute_tmin, order_initial
from .soc_model import Number, SocSpec, validate_soc


class SchedulingError(ValueError):
    pass


@dataclass(frozen=True)
class ScheduleEntry:
    core_id: int
    start: int
    finish: int
    width: int
    power: Number = 0


@dataclass(frozen=True)
class Schedule:
    soc: str
    w_max: int
    p_max: Optional[Number]
    entries: tuple[ScheduleEntry, ...]
    t_min: Optional[int] = None

    @property
    def makespan(self) -> int:
        return max((e.finish for e in self.entries), default=0)

    @property
    def idle_area(self) -> int:
        busy = sum(e.width * (e.finish - e.start) for e in self.entries)
        return self.w_max * self.makespan - busy

    def entry(self, core_id: int) -> ScheduleEntry:
        for e in self.entries:
            if e.core_id == core_id:
                return e
        raise KeyError(core_id)


@dataclass
class SchedulerState:
    w_max: int
    wavail: int
    initial: deque
    pending: deque = field(default_factory=deque)
    current_time: int = 0
    next_schedule_time: int = 0
    idle_flag: bool = False
    width: dict = field(default_factory=dict)
    start: dict = field(default_factory=dict)
    finish: dict = field(default_factory=dict)
    scheduled: dict = field(default_factory=dict)
    complete: dict = field(default_factory=dict)
    peak_tam: dict = field(default_factory=dict)

    def running(self) -> list[int]:
        return [
            c for c, on in self.scheduled.items()
            if on and not self.complete[c] and self.finish[c] > self.current_time
        ]


def update(state: SchedulerState, core_id: int, w: int, rects: RectSet) -> None:
    """Start ``core_id`` now on ``w`` wires."""
    assert 0 < w <= state.wavail, (core_id, w, state.wavail)
    assert not state.scheduled.get(core_id), core_id
    state.start[core_id] = state.current_time
    state.scheduled[core_id] = True
    state.finish[core_id] = state.current_time + rects.time_at(w)
    state.width[core_id] = w
    state.wavail -= w


def power_admissible(state: SchedulerState, powers: dict, core_id: int,
                     p_max: Optional[Number]) -> bool:
    if p_max is None:
        return True
    if powers.get(core_id) is None:
        raise SchedulingError(f"core {core_id} has no power value but a power limit is set")
    load = sum(powers[c] for c in state.running())
    return load + powers[core_id] <= p_max


def _advance(state: SchedulerState) -> None:
    later = [state.finish[c] for c in state.running()]
    assert later, "no running test to wait for"
    state.next_schedule_time = min(later)
    state.current_time = state.next_schedule_time
    for c, on in state.scheduled.items():
        if on and not state.complete[c] and state.finish[c] == state.current_time:
            state.wavail += state.width[c]
            state.complete[c] = True
    state.idle_flag = False


def schedule_rects(sets: list[RectSet], order: list[int], w_max: int,
                   p_max: Optional[Number] = None, powers: Optional[dict] = None,
                   name: str = "soc", t_min: Optional[int] = None) -> Schedule:
    """Run the scheduling loop over prepared rectangle sets in ``order``."""
    if w_max < 1:
        raise SchedulingError(f"w_max must be >= 1, got {w_max}")
    powers = dict(powers or {})
    by_id = {s.core_id: s for s in sets}
    for s in sets:
        assert s.peak_tam <= w_max, (s.core_id, s.peak_tam, w_max)
        if p_max is not None:
            p = powers.get(s.core_id)
            if p is None:
                raise SchedulingError(f"core {s.core_id} has no power value but a power limit is set")
            if p > p_max:
                raise SchedulingError(f"core {s.core_id} power {p} exceeds the limit {p_max}")

    st = SchedulerState(w_max=w_max, wavail=w_max, initial=deque(order))
    for c in order:
        st.scheduled[c] = False
        st.complete[c] = False
        st.peak_tam[c] = by_id[c].peak_tam

    def fits_at_peak(c):
        return st.peak_tam[c] <= st.wavail and power_admissible(st, powers, c, p_max)

    while st.initial or st.pending:
        if st.wavail > 0 and not st.idle_flag:
            if st.initial:
                c = st.initial.popleft()
                if fits_at_peak(c):
                    update(st, c, st.peak_tam[c], by_id[c])
                else:
                    r = by_id[c].best_fit(st.wavail)
                    if (r is not None and r.height >= math.ceil(0.5 * st.peak_tam[c])
                            and power_admissible(st, powers, c, p_max)):
                        update(st, c, r.height, by_id[c])
                    else:
                        st.pending.append(c)
                if st.pending and fits_at_peak(st.pending[0]):
                    p = st.pending.popleft()
                    update(st, p, st.peak_tam[p], by_id[p])
            elif fits_at_peak(st.pending[0]):
                p = st.pending.popleft()
                update(st, p, st.peak_tam[p], by_id[p])
            else:
                st.idle_flag = True
        else:
            _advance(st)

    entries = tuple(
        ScheduleEntry(c, st.start[c], st.finish[c], st.width[c], powers.get(c) or 0)
        for c in sorted(by_id)
    )
    return Schedule(name, w_max, p_max, entries, t_min)


def prepare(soc: SocSpec, w_max: int) -> tuple[list[RectSet], int, list[int]]:
    """Rectangle sets, T_min and the descending-diagonal order for ``soc``."""
    sets = [build_rectangles(c, w_max) for c in soc.cores]
    t_min = compute_tmin(sets)
    return sets, t_min, order_initial(sets, t_min)


def schedule(soc: SocSpec, w_max: int, p_max: Optional[Number] = None) -> Schedule:
    """Wrapper design, rectangle construction and scheduling for a whole SOC.

    ``p_max`` falls back to the SOC's own power limit when not given.
    """
    if w_max < 1:
        raise SchedulingError(f"w_max must be >= 1, got {w_max}")
    if p_max is None:
        p_max = soc.default_power_limit
    problems = validate_soc(soc, p_max)
    if problems:
        raise SchedulingError("; ".join(problems))
    sets, t_min, order = prepare(soc, w_max)
    powers = {c.id: c.power for c in soc.cores}
    return schedule_rects(sets, order, w_max, p_max, powers, soc.name, t_min)


def verify_rects(sched: Schedule, sets: list[RectSet], powers: Optional[dict] = None) -> list[str]:
    """Check a schedule against explicit rectangle sets; returns violations."""
    problems = []
    by_id = {s.core_id: s for s in sets}
    seen: dict[int, int] = {}
    for e in sched.entries:
        seen[e.core_id] = seen.get(e.core_id, 0) + 1
    for c in sorted(set(by_id) | set(seen)):
        n = seen.get(c, 0)
        if c not in by_id:
            problems.append(f"core {c}: not part of the SOC")
        elif n != 1:
            problems.append(f"core {c}: scheduled {n} times, expected exactly once")

    for e in sched.entries:
        if e.start < 0 or e.finish < e.start:
            problems.append(f"core {e.core_id}: bad interval [{e.start}, {e.finish})")
        if e.width < 1 or e.width > sched.w_max:
            problems.append(f"core {e.core_id}: width {e.width} outside 1..{sched.w_max}")
        rs = by_id.get(e.core_id)
        if rs is None:
            continue
        if e.width not in rs.heights:
            problems.append(f"core {e.core_id}: width {e.width} is not one of its rectangles {rs.heights}")
        elif e.finish - e.start != rs.time_at(e.width):
            problems.append(
                f"core {e.core_id}: duration {e.finish - e.start} does not match the "
                f"rectangle time {rs.time_at(e.width)} at width {e.width}"
            )
        if powers is not None and sched.p_max is not None:
            p = powers.get(e.core_id)
            if p is not None and e.power != p:
                problems.append(f"core {e.core_id}: power {e.power} differs from the SOC value {p}")

    def power_of(e):
        if powers is not None and powers.get(e.core_id) is not None:
            return powers[e.core_id]
        return e.power

    times = sorted({e.start for e in sched.entries} | {e.finish for e in sched.entries})
    for t in times:
        active = [e for e in sched.entries if e.start <= t < e.finish]
        wires = sum(e.width for e in active)
        if wires > sched.w_max:
            ids = ",".join(str(e.core_id) for e in active)
            problems.append(f"t={t}: {wires} TAM wires in use by cores {ids} exceeds {sched.w_max}")
        if sched.p_max is not None:
            load = sum(power_of(e) for e in active)
            if load > sched.p_max:
                ids = ",".join(str(e.core_id) for e in active)
                problems.append(f"t={t}: power {load} mW by cores {ids} exceeds {sched.p_max}")
    return problems


def verify_schedule(sched: Schedule, soc: SocSpec) -> list[str]:
    sets = [build_rectangles(c, sched.w_max) for c in soc.cores]
    return verify_rects(sched, sets, {c.id: c.power for c in soc.cores})
