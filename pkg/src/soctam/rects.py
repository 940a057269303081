"""Per-core (TAM width x test time) rectangles and diagonal-length ordering."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from typing import Optional

from .soc_model import CoreSpec
from .wrapper import tam_table


@dataclass(frozen=True)
class Rectangle:
    core_id: int
    height: int
    width_cycles: int
    width_norm: Optional[float] = None


@dataclass(frozen=True)
class RectSet:
    core_id: int
    rects: tuple[Rectangle, ...]
    peak_tam: int
    peak_time_cycles: int
    diagonal: Optional[float] = None

    @property
    def heights(self) -> list[int]:
        return [r.height for r in self.rects]

    def time_at(self, height: int) -> int:
        for r in self.rects:
            if r.height == height:
                return r.width_cycles
        raise KeyError(f"core {self.core_id} has no rectangle of height {height}")

    def best_fit(self, wires: int) -> Optional[Rectangle]:
        """Tallest rectangle no taller than ``wires``."""
        for r in self.rects:
            if r.height <= wires:
                return r
        return None

    def min_area(self) -> int:
        return min(r.height * r.width_cycles for r in self.rects)


def pareto_rects(core_id: int, options) -> tuple[Rectangle, ...]:
    """Keep, for each test time, the narrowest option; drop taller-and-not-faster ones.

    ``options`` is an iterable of (height, width_cycles). The result is sorted
    by descending height with strictly increasing times.
    """
    kept: list[Rectangle] = []
    best_time = None
    for h, t in sorted(set(options)):
        if best_time is None or t < best_time:
            kept.append(Rectangle(core_id, h, t))
            best_time = t
    return tuple(reversed(kept))


def build_rectangles(core: CoreSpec, w_max: int) -> RectSet:
    if w_max < 1:
        raise ValueError(f"w_max must be >= 1, got {w_max}")
    rows = tam_table(core, w_max)
    rects = pareto_rects(core.id, ((r.tam_u, r.test_time) for r in rows))
    return RectSet(core.id, rects, rects[0].height, rects[0].width_cycles)


def compute_tmin(sets) -> int:
    if not sets:
        raise ValueError("compute_tmin needs at least one rectangle set")
    return min(s.peak_time_cycles for s in sets)


def diagonal_length(height: float, width_norm: float) -> float:
    return math.hypot(height, width_norm)


def normalize(sets, t_min) -> list[RectSet]:
    """Attach normalized widths and the peak-rectangle diagonal to every set."""
    out = []
    for s in sets:
        rects = tuple(replace(r, width_norm=r.width_cycles / t_min) for r in s.rects)
        dl = diagonal_length(s.peak_tam, s.peak_time_cycles / t_min)
        out.append(replace(s, rects=rects, diagonal=dl))
    return out


def order_initial(sets, t_min) -> list[int]:
    """Core ids by descending diagonal; taller peak first, then lower id, on ties."""
    ranked = normalize(sets, t_min)
    ranked.sort(key=lambda s: (-s.diagonal, -s.peak_tam, s.core_id))
    return [s.core_id for s in ranked]


def rects_payload(sets, t_min) -> dict:
    ranked = normalize(sets, t_min)
    return {
        "t_min": t_min,
        "initial_order": order_initial(sets, t_min),
        "cores": [
            {
                "core": s.core_id,
                "peak_tam": s.peak_tam,
                "peak_time": s.peak_time_cycles,
                "diagonal": round(s.diagonal, 6),
                "rects": [{"height": r.height, "width_cycles": r.width_cycles} for r in s.rects],
            }
            for s in ranked
        ],
    }


def rects_json(sets, t_min) -> str:
    return json.dumps(rects_payload(sets, t_min), indent=2) + "\n"


def rects_csv(sets, t_min) -> str:
    lines = ["core,height,width_cycles,width_norm,peak_tam,diagonal,initial_rank"]
    order = order_initial(sets, t_min)
    for s in normalize(sets, t_min):
        rank = order.index(s.core_id) + 1
        for r in s.rects:
            lines.append(
                f"{s.core_id},{r.height},{r.width_cycles},{r.width_norm:.6f},"
                f"{s.peak_tam},{s.diagonal:.6f},{rank}"
            )
    return "\n".join(lines) + "\n"
