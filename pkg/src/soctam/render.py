"""Text, JSON, CSV and SVG renderings of schedules and TAM tables."""

from __future__ import annotations

import json
from html import escape

from .scheduler import Schedule, ScheduleEntry
from .wrapper import TamTableEntry


def _num(v):
    if v is None:
        return "none"
    return repr(v) if isinstance(v, float) else str(v)


def schedule_text(sched: Schedule) -> str:
    lines = [
        f"SOC {sched.soc}  TAM width {sched.w_max}  power limit {_num(sched.p_max)}",
        f"T_min {_num(sched.t_min)}  makespan {sched.makespan}  idle area {sched.idle_area}",
        f"{'core':>4} {'start':>9} {'finish':>9} {'width':>5} {'power':>7}",
    ]
    for e in sorted(sched.entries, key=lambda e: (e.start, e.core_id)):
        lines.append(f"{e.core_id:>4} {e.start:>9} {e.finish:>9} {e.width:>5} {_num(e.power):>7}")
    return "\n".join(lines) + "\n"


def schedule_payload(sched: Schedule) -> dict:
    return {
        "soc": sched.soc,
        "w_max": sched.w_max,
        "p_max": sched.p_max,
        "t_min": sched.t_min,
        "makespan": sched.makespan,
        "idle_area": sched.idle_area,
        "entries": [
            {"core": e.core_id, "start": e.start, "finish": e.finish, "width": e.width, "power": e.power}
            for e in sched.entries
        ],
    }


def schedule_json(sched: Schedule) -> str:
    return json.dumps(schedule_payload(sched), indent=2) + "\n"


def schedule_from_json(text: str) -> Schedule:
    """Inverse of :func:`schedule_json`; raises ValueError on malformed input."""
    try:
        data = json.loads(text)
        entries = tuple(
            ScheduleEntry(int(e["core"]), int(e["start"]), int(e["finish"]), int(e["width"]),
                          e.get("power", 0) or 0)
            for e in data["entries"]
        )
        return Schedule(str(data["soc"]), int(data["w_max"]), data.get("p_max"), entries, data.get("t_min"))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed schedule file: {exc}") from exc


def schedule_csv(sched: Schedule) -> str:
    lines = ["core,start,finish,width,power"]
    for e in sched.entries:
        lines.append(f"{e.core_id},{e.start},{e.finish},{e.width},{_num(e.power)}")
    return "\n".join(lines) + "\n"


def tam_table_text(core_id: int, entries: list[TamTableEntry]) -> str:
    lines = [f"core {core_id}", f"{'TAM size':>9} {'TAM_u':>6} {'test time':>10} {'longest':>8}"]
    for e in entries:
        span = str(e.width_lo) if e.width_lo == e.width_hi else f"{e.width_lo}-{e.width_hi}"
        lines.append(f"{span:>9} {e.tam_u:>6} {e.test_time:>10} {e.longest_chain:>8}")
    return "\n".join(lines) + "\n"


def assign_lanes(sched: Schedule) -> dict[int, list[int]]:
    """Give each test concrete wire lanes, lowest free lanes first at each start."""
    free_at = [0] * sched.w_max
    lanes = {}
    for e in sorted(sched.entries, key=lambda e: (e.start, e.core_id)):
        picked = [k for k in range(sched.w_max) if free_at[k] <= e.start][: e.width]
        if len(picked) < e.width:
            raise ValueError(f"core {e.core_id}: only {len(picked)} free lanes at t={e.start}")
        for k in picked:
            free_at[k] = e.finish
        lanes[e.core_id] = picked
    return lanes


def _runs(lanes):
    runs = []
    for k in lanes:
        if runs and runs[-1][1] == k:
            runs[-1][1] = k + 1
        else:
            runs.append([k, k + 1])
    return runs


_PALETTE = ["#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
            "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"]


def schedule_svg(sched: Schedule, normalize: bool = False, plot_width: int = 800,
                 lane_height: int = 12) -> str:
    """Gantt-style packing chart: x is time, y is TAM wire lanes."""
    left, top, bottom, right = 60, 30, 40, 20
    plot_h = lane_height * sched.w_max
    span = sched.makespan or 1
    scale = plot_width / span
    unit = sched.t_min if normalize and sched.t_min else 1
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{left + plot_width + right}" '
        f'height="{top + plot_h + bottom}" font-family="sans-serif" font-size="10">',
        f'<text x="{left}" y="18">{escape(sched.soc)}: W_max={sched.w_max}, '
        f'P_max={_num(sched.p_max)}, makespan={sched.makespan}</text>',
        f'<rect x="{left}" y="{top}" width="{plot_width}" height="{plot_h}" fill="#f4f4f4" stroke="#333"/>',
    ]
    lanes = assign_lanes(sched)
    for e in sorted(sched.entries, key=lambda e: e.core_id):
        color = _PALETTE[(e.core_id - 1) % len(_PALETTE)]
        # round both edges, not the width, so touching bars share one coordinate
        x = round(left + e.start * scale, 2)
        w = round(left + e.finish * scale, 2) - x
        for lo, hi in _runs(lanes[e.core_id]):
            y = top + plot_h - hi * lane_height
            out.append(
                f'<rect x="{x:.2f}" y="{y}" width="{w:.2f}" height="{(hi - lo) * lane_height}" '
                f'fill="{color}" stroke="#222" stroke-width="0.5">'
                f"<title>core {e.core_id}: [{e.start}, {e.finish}) width {e.width}</title></rect>"
            )
        lo = lanes[e.core_id][0]
        out.append(
            f'<text x="{x + 2:.2f}" y="{top + plot_h - lo * lane_height - 2}">{e.core_id}</text>'
        )
    for k in range(5):
        t = span * k / 4
        x = left + t * scale
        label = f"{t / unit:.2f}" if normalize else f"{round(t)}"
        out.append(f'<line x1="{x:.2f}" y1="{top + plot_h}" x2="{x:.2f}" y2="{top + plot_h + 4}" stroke="#333"/>')
        out.append(f'<text x="{x:.2f}" y="{top + plot_h + 16}" text-anchor="middle">{label}</text>')
    axis = "time / T_min" if normalize else "time (cycles)"
    out.append(f'<text x="{left + plot_width / 2:.2f}" y="{top + plot_h + 32}" text-anchor="middle">{axis}</text>')
    out.append(f'<text x="12" y="{top + plot_h / 2:.2f}" transform="rotate(-90 12 {top + plot_h / 2:.2f})" '
               f'text-anchor="middle">TAM wires</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
