"""Balanced wrapper scan-chain design and per-width TAM tables."""

from __future__ import annotations

import csv
import heapq
import io
from dataclasses import dataclass, field

from .soc_model import CoreSpec


@dataclass
class WrapperChain:
    scan_chain_ids: list[int] = field(default_factory=list)
    input_cells: int = 0
    output_cells: int = 0
    scan_length: int = 0

    @property
    def input_length(self) -> int:
        return self.scan_length + self.input_cells

    @property
    def output_length(self) -> int:
        return self.scan_length + self.output_cells

    @property
    def length(self) -> int:
        return max(self.input_length, self.output_length)


@dataclass
class WrapperConfig:
    core_id: int
    w_max_given: int
    chains: list[WrapperChain]
    s_i: int
    s_o: int
    tam_u: int
    test_time: int
    upper_bound: int | None = None

    @property
    def longest_chain(self) -> int:
        return max(self.s_i, self.s_o)


@dataclass(frozen=True)
class TamTableEntry:
    width_lo: int
    width_hi: int
    tam_u: int
    test_time: int
    longest_chain: int


def scan_test_time(patterns: int, s_i: int, s_o: int) -> int:
    """Cycles to apply ``patterns`` vectors with overlapped scan-in/scan-out."""
    return patterns * (1 + max(s_i, s_o)) + min(s_i, s_o)


def test_time(core: CoreSpec, config: WrapperConfig) -> int:
    return scan_test_time(core.patterns, config.s_i, config.s_o)


test_time.__test__ = False  # keep pytest from collecting the imported name


def upper_bound(core: CoreSpec, w_max: int) -> int:
    """Per-chain length bound used when packing scan chains at width ``w_max``."""
    mid_lines = max(1, w_max // 2)
    return -(-core.total_scan_elements // mid_lines)


def _pack_scan_chains(lengths, bound: int) -> list[WrapperChain]:
    # Best fit decreasing: the chain left with the least slack wins, lowest index on ties.
    order = sorted(range(len(lengths)), key=lambda k: (-lengths[k], k))
    chains: list[WrapperChain] = []
    for k in order:
        length = lengths[k]
        best, best_slack = None, None
        for idx, ch in enumerate(chains):
            slack = bound - (ch.scan_length + length)
            if slack >= 0 and (best_slack is None or slack < best_slack):
                best, best_slack = idx, slack
        if best is None:
            # also covers a chain longer than the bound: it gets its own wrapper chain
            chains.append(WrapperChain())
            best = len(chains) - 1
        chains[best].scan_chain_ids.append(k)
        chains[best].scan_length += length
    return chains


def _add_cells(chains: list[WrapperChain], count: int, side: str, w_max: int) -> None:
    """Place ``count`` wrapper cells on ``side`` ("input" or "output").

    Each cell goes to the chain with the shortest length on that side. When
    that would lengthen the longest chain and a TAM wire is still free, a new
    chain is opened for it instead.
    """
    if count == 0:
        return
    attr = "input_cells" if side == "input" else "output_cells"
    side_len = (lambda ch: ch.input_length) if side == "input" else (lambda ch: ch.output_length)
    ceiling = max((ch.length for ch in chains), default=0)
    heap = [(side_len(ch), idx) for idx, ch in enumerate(chains)]
    heapq.heapify(heap)
    for _ in range(count):
        if heap and (heap[0][0] + 1 <= ceiling or len(chains) >= w_max):
            length, idx = heapq.heappop(heap)
        else:
            chains.append(WrapperChain())
            length, idx = 0, len(chains) - 1
        setattr(chains[idx], attr, getattr(chains[idx], attr) + 1)
        ceiling = max(ceiling, length + 1)
        heapq.heappush(heap, (length + 1, idx))


def _finish(core: CoreSpec, w_max: int, chains: list[WrapperChain], bound=None) -> WrapperConfig:
    if not chains:
        chains = [WrapperChain()]  # a core with no cells still occupies one wire
    s_i = max((ch.input_length for ch in chains), default=0)
    s_o = max((ch.output_length for ch in chains), default=0)
    tam_u = len(chains)
    assert tam_u <= w_max, (core.id, w_max, tam_u)
    return WrapperConfig(core.id, w_max, chains, s_i, s_o, tam_u,
                         scan_test_time(core.patterns, s_i, s_o), bound)


def design_wrapper(core: CoreSpec, w_max: int) -> WrapperConfig:
    """Build wrapper chains for ``core`` when ``w_max`` TAM wires are offered."""
    if w_max < 1:
        raise ValueError(f"w_max must be >= 1, got {w_max}")

    n_in, n_out = core.input_cells, core.output_cells
    if core.is_combinational:
        if n_in + n_out <= w_max:
            chains = [WrapperChain(input_cells=1) for _ in range(n_in)]
            chains += [WrapperChain(output_cells=1) for _ in range(n_out)]
            return _finish(core, w_max, chains)
        chains = [WrapperChain() for _ in range(w_max)]
        for k in range(n_in):
            chains[k % w_max].input_cells += 1
        for k in range(n_out):
            chains[k % w_max].output_cells += 1
        return _finish(core, w_max, chains)

    bound = upper_bound(core, w_max)
    chains = _pack_scan_chains(core.scan_chain_lengths, bound)
    _add_cells(chains, n_in, "input", w_max)
    _add_cells(chains, n_out, "output", w_max)
    return _finish(core, w_max, chains, bound)


def tam_table(core: CoreSpec, w_max_global: int) -> list[TamTableEntry]:
    """Wrapper results for widths 1..w_max_global, merged into plateaus.

    Rows come back ordered from the widest range down.
    """
    if w_max_global < 1:
        raise ValueError(f"w_max_global must be >= 1, got {w_max_global}")
    rows: list[list[int]] = []
    for w in range(1, w_max_global + 1):
        cfg = design_wrapper(core, w)
        key = [cfg.tam_u, cfg.test_time, cfg.longest_chain]
        if rows and rows[-1][2:4] == key[:2]:
            rows[-1][1] = w
        else:
            rows.append([w, w] + key)
    return [TamTableEntry(*r) for r in reversed(rows)]


def tam_table_csv(entries: list[TamTableEntry]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["width_lo", "width_hi", "tam_u", "test_time", "longest_chain"])
    for e in entries:
        writer.writerow([e.width_lo, e.width_hi, e.tam_u, e.test_time, e.longest_chain])
    return buf.getvalue()
