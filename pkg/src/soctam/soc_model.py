"""SOC and core descriptions plus the line-oriented benchmark file format.

File format (one directive per line, ``#`` starts a comment)::

    soc <name>
    powerlimit <mW>                       # optional
    core <id> inputs <I> outputs <O> bidirs <B> patterns <p> [power <mW>] scanchains <n> lengths <l1> ... <ln>

``lengths`` is omitted when ``n`` is 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

Number = Union[int, float]


class SocFormatError(ValueError):
    """Raised for malformed or invalid benchmark text."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


@dataclass(frozen=True)
class CoreSpec:
    id: int
    name: str
    inputs: int
    outputs: int
    bidirs: int
    patterns: int
    scan_chain_lengths: tuple[int, ...] = ()
    power: Optional[Number] = None

    def __post_init__(self):
        # accept any sequence, store a tuple so specs stay hashable
        object.__setattr__(self, "scan_chain_lengths", tuple(self.scan_chain_lengths))

    @property
    def is_combinational(self) -> bool:
        return not self.scan_chain_lengths

    @property
    def scan_cells(self) -> int:
        return sum(self.scan_chain_lengths)

    @property
    def input_cells(self) -> int:
        """Wrapper cells on the stimulus side; a bidir needs one."""
        return self.inputs + self.bidirs

    @property
    def output_cells(self) -> int:
        """Wrapper cells on the response side; a bidir needs one."""
        return self.outputs + self.bidirs

    @property
    def io_cells(self) -> int:
        return self.input_cells + self.output_cells

    @property
    def total_scan_elements(self) -> int:
        """Scan flip-flops plus one wrapper cell per input and output cell."""
        return self.scan_cells + self.io_cells


@dataclass(frozen=True)
class SocSpec:
    name: str
    cores: tuple[CoreSpec, ...] = field(default_factory=tuple)
    default_power_limit: Optional[Number] = None

    def __post_init__(self):
        object.__setattr__(self, "cores", tuple(self.cores))
        if not self.cores:
            raise ValueError(f"SOC {self.name!r} has no cores")

    def core(self, core_id: int) -> CoreSpec:
        for c in self.cores:
            if c.id == core_id:
                return c
        raise KeyError(core_id)

    @property
    def ids(self) -> list[int]:
        return [c.id for c in self.cores]


def validate_soc(spec: SocSpec, p_max: Optional[Number] = None) -> list[str]:
    """Return one message per violated invariant; an empty list means valid.

    When a power limit is in force (``p_max`` or the SOC default), every core
    must carry a power value.
    """
    limit = p_max if p_max is not None else spec.default_power_limit
    return _violations(spec, limit)


def _violations(spec: SocSpec, limit: Optional[Number]) -> list[str]:
    problems = []
    seen = set()
    for c in spec.cores:
        tag = f"core {c.id}"
        if c.id in seen:
            problems.append(f"{tag}: duplicate id")
        seen.add(c.id)
        if c.patterns < 1:
            problems.append(f"{tag}: patterns must be >= 1 (got {c.patterns})")
        for fname in ("inputs", "outputs", "bidirs"):
            if getattr(c, fname) < 0:
                problems.append(f"{tag}: {fname} must be >= 0 (got {getattr(c, fname)})")
        for k, length in enumerate(c.scan_chain_lengths):
            if length < 1:
                problems.append(f"{tag}: scan_chain_lengths[{k}] must be >= 1 (got {length})")
        if c.power is not None and c.power < 0:
            problems.append(f"{tag}: power must be >= 0 (got {c.power})")
        if limit is not None and c.power is None:
            problems.append(f"{tag}: power missing while a power limit is set")
        if limit is not None and c.power is not None and c.power > limit:
            problems.append(f"{tag}: power {c.power} exceeds power limit {limit}")
    if sorted(seen) != list(range(1, len(spec.cores) + 1)):
        problems.append(f"soc {spec.name}: core ids must be contiguous from 1 (got {spec.ids})")
    if spec.default_power_limit is not None and spec.default_power_limit < 0:
        problems.append(f"soc {spec.name}: powerlimit must be >= 0")
    return problems


def _number(tok: str, lineno: int) -> Number:
    try:
        return int(tok)
    except ValueError:
        pass
    try:
        return float(tok)
    except ValueError:
        raise SocFormatError(f"expected a number, got {tok!r}", lineno) from None


def _integer(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise SocFormatError(f"expected an integer, got {tok!r}", lineno) from None


def _parse_core(tokens: list[str], lineno: int) -> CoreSpec:
    pos = 0

    def keyword(word):
        nonlocal pos
        if pos >= len(tokens) or tokens[pos] != word:
            found = tokens[pos] if pos < len(tokens) else "end of line"
            raise SocFormatError(f"expected {word!r}, found {found!r}", lineno)
        pos += 1

    def value(conv=_integer):
        nonlocal pos
        if pos >= len(tokens):
            raise SocFormatError("unexpected end of line", lineno)
        pos += 1
        return conv(tokens[pos - 1], lineno)

    keyword("core")
    core_id = value()
    keyword("inputs")
    inputs = value()
    keyword("outputs")
    outputs = value()
    keyword("bidirs")
    bidirs = value()
    keyword("patterns")
    patterns = value()
    power = None
    if pos < len(tokens) and tokens[pos] == "power":
        pos += 1
        power = value(_number)
    keyword("scanchains")
    n = value()
    if n < 0:
        raise SocFormatError(f"negative scan chain count {n}", lineno)
    lengths: list[int] = []
    if n > 0:
        keyword("lengths")
        lengths = [value() for _ in range(n)]
    if pos != len(tokens):
        raise SocFormatError(f"unexpected token {tokens[pos]!r}", lineno)

    if core_id < 1:
        raise SocFormatError(f"core id must be positive, got {core_id}", lineno)
    if patterns < 1:
        raise SocFormatError(f"core {core_id}: non-positive pattern count {patterns}", lineno)
    for fname, v in (("inputs", inputs), ("outputs", outputs), ("bidirs", bidirs)):
        if v < 0:
            raise SocFormatError(f"core {core_id}: negative {fname} count {v}", lineno)
    if any(length < 1 for length in lengths):
        raise SocFormatError(f"core {core_id}: scan chain lengths must be >= 1", lineno)
    if power is not None and power < 0:
        raise SocFormatError(f"core {core_id}: negative power {power}", lineno)
    return CoreSpec(core_id, f"core{core_id}", inputs, outputs, bidirs, patterns, tuple(lengths), power)


def parse_soc(text: str) -> SocSpec:
    """Parse benchmark text into a validated :class:`SocSpec`."""
    name = None
    limit = None
    cores: list[CoreSpec] = []
    where: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        head = tokens[0]
        if name is None:
            if head != "soc" or len(tokens) != 2:
                raise SocFormatError("first directive must be 'soc <name>'", lineno)
            name = tokens[1]
        elif head == "powerlimit":
            if len(tokens) != 2 or limit is not None or cores:
                raise SocFormatError("'powerlimit <mW>' must appear once, before any core", lineno)
            limit = _number(tokens[1], lineno)
            if limit < 0:
                raise SocFormatError(f"negative power limit {limit}", lineno)
        elif head == "core":
            core = _parse_core(tokens, lineno)
            if core.id in where:
                raise SocFormatError(
                    f"duplicate core id {core.id} (first defined on line {where[core.id]})", lineno
                )
            where[core.id] = lineno
            cores.append(core)
        else:
            raise SocFormatError(f"unknown directive {head!r}", lineno)
    if name is None:
        raise SocFormatError("missing 'soc <name>' directive")
    if not cores:
        raise SocFormatError(f"soc {name} declares no cores")
    spec = SocSpec(name, tuple(cores), limit)
    problems = _violations(spec, None)
    if problems:
        raise SocFormatError("; ".join(problems))
    return spec


def _fmt(v: Number) -> str:
    return repr(v) if isinstance(v, float) else str(v)


def serialize_soc(spec: SocSpec) -> str:
    lines = [f"soc {spec.name}"]
    if spec.default_power_limit is not None:
        lines.append(f"powerlimit {_fmt(spec.default_power_limit)}")
    for c in spec.cores:
        parts = [
            f"core {c.id} inputs {c.inputs} outputs {c.outputs} bidirs {c.bidirs} patterns {c.patterns}"
        ]
        if c.power is not None:
            parts.append(f"power {_fmt(c.power)}")
        parts.append(f"scanchains {len(c.scan_chain_lengths)}")
        if c.scan_chain_lengths:
            parts.append("lengths " + " ".join(map(str, c.scan_chain_lengths)))
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def load_soc(path) -> SocSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_soc(fh.read())
