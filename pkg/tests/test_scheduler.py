import math
from collections import deque

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import D695_POWER, socs
from soctam.oracle import brute_force_rects, brute_force_schedule
from soctam.rects import Rectangle, RectSet, build_rectangles
from soctam.scheduler import (Schedule, ScheduleEntry, SchedulerState, SchedulingError, power_admissible,
                              prepare, schedule, schedule_rects, update, verify_rects, verify_schedule)
from soctam.soc_model import CoreSpec, SocSpec


def rect_set(core_id, *pairs):
    rects = tuple(Rectangle(core_id, h, t) for h, t in pairs)
    return RectSet(core_id, rects, rects[0].height, rects[0].width_cycles)


def lower_bounds(soc, w_max):
    sets = [build_rectangles(c, w_max) for c in soc.cores]
    longest = max(s.peak_time_cycles for s in sets)
    area = math.ceil(sum(s.min_area() for s in sets) / w_max)
    return longest, area


def state_with(running, w_max=24):
    st_ = SchedulerState(w_max=w_max, wavail=w_max, initial=deque())
    for c in running:
        st_.scheduled[c] = True
        st_.complete[c] = False
        st_.finish[c] = 1000
    return st_


def test_update_arithmetic():
    st_ = SchedulerState(w_max=24, wavail=24, initial=deque([1]))
    st_.current_time = 100
    update(st_, 1, 16, rect_set(1, (16, 87), (8, 150)))
    assert st_.wavail == 8
    assert (st_.start[1], st_.finish[1], st_.width[1]) == (100, 187, 16)
    assert st_.scheduled[1]


def test_update_rejects_overcommit():
    st_ = SchedulerState(w_max=8, wavail=4, initial=deque())
    with pytest.raises(AssertionError):
        update(st_, 1, 8, rect_set(1, (8, 10)))


def test_power_admissible_examples():
    powers = dict(enumerate(D695_POWER, start=1))
    assert not power_admissible(state_with([1, 2]), powers, 4, 1500)  # 660 + 602 + 275 = 1537
    assert power_admissible(state_with([1]), powers, 2, 1500)  # 1262
    assert power_admissible(state_with([1, 2, 3]), powers, 10, None)


def test_power_admissible_ignores_finished_cores():
    st_ = state_with([1, 2])
    st_.complete[1] = True
    assert power_admissible(st_, {1: 1000, 2: 400, 3: 1000}, 3, 1500)


def test_power_missing_raises():
    with pytest.raises(SchedulingError):
        power_admissible(state_with([]), {}, 1, 100)


def test_single_core(tiny_core):
    soc = SocSpec("one", (tiny_core,))
    sched = schedule(soc, 8)
    (e,) = sched.entries
    s = build_rectangles(tiny_core, 8)
    assert (e.start, e.width, e.finish) == (0, s.peak_tam, s.peak_time_cycles)
    assert sched.makespan == s.peak_time_cycles == brute_force_schedule(soc, 8)


def test_power_forces_sequential():
    a = CoreSpec(1, "a", 2, 2, 0, 10, (4, 3, 3), 800)
    b = CoreSpec(2, "b", 3, 1, 0, 12, (5, 5), 800)
    soc = SocSpec("pair", (a, b))
    free = schedule(soc, 16)
    assert free.entry(1).start == free.entry(2).start == 0  # they fit side by side
    capped = schedule(soc, 16, 1500)
    t1 = build_rectangles(a, 16).peak_time_cycles
    t2 = build_rectangles(b, 16).peak_time_cycles
    assert capped.makespan == t1 + t2 == brute_force_schedule(soc, 16, 1500)
    assert verify_schedule(capped, soc) == []


def test_default_power_limit_applies(tiny_core):
    soc = SocSpec("s", (tiny_core, CoreSpec(2, "b", 1, 1, 0, 5, (6,), 100)), default_power_limit=150)
    assert schedule(soc, 8).p_max == 150
    assert schedule(soc, 8, 1000).p_max == 1000


def test_core_over_power_limit_is_an_error(tiny_core):
    with pytest.raises(SchedulingError):
        schedule(SocSpec("s", (tiny_core,)), 8, 50)
    with pytest.raises(SchedulingError):
        schedule(SocSpec("s", (tiny_core,)), 0)


def test_half_peak_rule():
    # core 2 wants 8 wires; with 6 free it takes its 6-wire rectangle (6 >= 4)
    sets = [rect_set(1, (2, 100)), rect_set(2, (8, 50), (6, 60), (3, 90))]
    sched = schedule_rects(sets, [1, 2], 8)
    assert sched.entry(2).start == 0 and sched.entry(2).width == 6
    # with only 3 free, 3 < ceil(8 / 2) so it waits in PENDING for its full peak
    sets = [rect_set(1, (5, 100)), rect_set(2, (8, 50), (6, 60), (3, 90))]
    sched = schedule_rects(sets, [1, 2], 8)
    assert (sched.entry(2).start, sched.entry(2).width) == (100, 8)


def test_pending_front_blocks_queue():
    # core 2 is deferred; core 3 is deferred behind it; both get their peak when core 1 ends
    sets = [rect_set(1, (3, 40)), rect_set(2, (4, 10)), rect_set(3, (2, 10))]
    sched = schedule_rects(sets, [1, 2, 3], 4)
    assert [sched.entry(c).start for c in (1, 2, 3)] == [0, 40, 50]
    assert verify_rects(sched, sets) == []


def test_simultaneous_finishes_are_all_reclaimed():
    sets = [rect_set(1, (2, 30)), rect_set(2, (2, 30)), rect_set(3, (4, 5))]
    sched = schedule_rects(sets, [1, 2, 3], 4)
    assert sched.entry(3).start == 30 and sched.entry(3).width == 4


def test_verify_detects_width_overlap():
    sets = [rect_set(1, (4, 10)), rect_set(2, (4, 10))]
    bad = Schedule("x", 4, None, (ScheduleEntry(1, 0, 10, 4), ScheduleEntry(2, 5, 15, 4)))
    problems = verify_rects(bad, sets)
    assert problems == ["t=5: 8 TAM wires in use by cores 1,2 exceeds 4"]


def test_verify_detects_duration_mismatch():
    sets = [rect_set(1, (4, 10), (2, 18))]
    bad = Schedule("x", 4, None, (ScheduleEntry(1, 0, 12, 2),))
    (problem,) = verify_rects(bad, sets)
    assert "duration 12" in problem and "18" in problem


def test_verify_detects_power_at_zero():
    sets = [rect_set(1, (1, 10)), rect_set(2, (1, 10))]
    bad = Schedule("x", 4, 1000, (ScheduleEntry(1, 0, 10, 1, 600), ScheduleEntry(2, 0, 10, 1, 600)))
    problems = verify_rects(bad, sets, {1: 600, 2: 600})
    assert problems == ["t=0: power 1200 mW by cores 1,2 exceeds 1000"]


def test_verify_detects_missing_and_duplicate():
    sets = [rect_set(1, (1, 10)), rect_set(2, (1, 10))]
    bad = Schedule("x", 4, None, (ScheduleEntry(1, 0, 10, 1), ScheduleEntry(1, 10, 20, 1)))
    problems = verify_rects(bad, sets)
    assert "core 1: scheduled 2 times, expected exactly once" in problems
    assert "core 2: scheduled 0 times, expected exactly once" in problems


def test_verify_without_limit_reports_no_power(d695):
    sched = schedule(d695, 16)
    assert sched.p_max is None
    assert verify_schedule(sched, d695) == []


@pytest.mark.parametrize("w", [16, 24, 32, 40, 48, 64])
def test_d695_feasible_and_bounded(d695, w):
    sched = schedule(d695, w)
    assert verify_schedule(sched, d695) == []
    longest, area = lower_bounds(d695, w)
    assert sched.makespan >= max(longest, area)
    assert sched.idle_area >= 0


@pytest.mark.parametrize("p, w", [(1500, 16), (1800, 24), (2000, 32), (1500, 64)])
def test_d695_power_cap_respected(d695, p, w):
    sched = schedule(d695, w, p)
    assert verify_schedule(sched, d695) == []


def test_prepare_order_covers_all_cores(d695):
    sets, t_min, order = prepare(d695, 24)
    assert sorted(order) == d695.ids
    assert t_min == min(s.peak_time_cycles for s in sets)


@settings(max_examples=120, deadline=None)
@given(socs(max_cores=6, max_chains=5, max_len=60), st.integers(1, 32), st.booleans())
def test_random_schedules_are_sound(soc, w, capped):
    p_max = max(c.power for c in soc.cores) + 300 if capped else None
    sched = schedule(soc, w, p_max)
    assert verify_schedule(sched, soc) == []
    longest, area = lower_bounds(soc, w)
    assert sched.makespan >= max(longest, area)
    sets = {s.core_id: s for s in prepare(soc, w)[0]}
    for e in sched.entries:
        assert 2 * e.width >= sets[e.core_id].peak_tam
        assert e.width in sets[e.core_id].heights
    assert schedule(soc, w, p_max) == sched


@settings(max_examples=60, deadline=None)
@given(socs(max_cores=3, max_chains=3, max_len=30, max_io=10), st.integers(1, 6), st.booleans())
def test_oracle_never_beats_heuristic_upward(soc, w, capped):
    p_max = max(c.power for c in soc.cores) + 200 if capped else None
    sched = schedule(soc, w, p_max)
    best = brute_force_schedule(soc, w, p_max)
    assert best <= sched.makespan
    assert best >= max(lower_bounds(soc, w))


def test_oracle_examples():
    assert brute_force_rects([rect_set(1, (4, 10), (2, 19))], 4) == 10
    full = [rect_set(1, (4, 10)), rect_set(2, (4, 7))]
    assert brute_force_rects(full, 4) == 17
    # a narrower rectangle lets both run at once
    both = [rect_set(1, (4, 10), (2, 12)), rect_set(2, (4, 7), (2, 11))]
    assert brute_force_rects(both, 4) == 12
    assert brute_force_rects(both, 4, 100, {1: 60, 2: 60}) == 17


def test_oracle_guards_size():
    sets = [rect_set(k, (1, 5)) for k in range(1, 6)]
    with pytest.raises(ValueError):
        brute_force_rects(sets, 4)
    with pytest.raises(ValueError):
        brute_force_rects([rect_set(1, (1, 5))], 4, 10, {1: 20})
