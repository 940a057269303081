"""Command-line front end.

Exit codes: 0 success, 1 constraint or verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional

from . import render
from .rects import rects_csv, rects_json
from .scheduler import SchedulingError, prepare, schedule, verify_schedule
from .soc_model import SocFormatError, load_soc
from .wrapper import tam_table, tam_table_csv

FORMATS = ("text", "json", "csv", "svg")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    soc: str
    w_max: Optional[int] = None
    p_max: Optional[float] = None
    core: Optional[int] = None
    fmt: str = "text"
    out: Optional[str] = None
    normalize: bool = False
    schedule_file: Optional[str] = None


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _power(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return int(v) if v.is_integer() else v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="soctam", description="SOC wrapper/TAM design and test scheduling")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats):
        p.add_argument("--soc", required=True, help="benchmark description file")
        p.add_argument("--format", dest="fmt", choices=formats, default=formats[0])
        p.add_argument("--out", help="write here instead of standard output")

    p = sub.add_parser("wrapper", help="TAM width table for one core")
    common(p, ("text", "json", "csv"))
    p.add_argument("--core", type=int, required=True)
    p.add_argument("--max-width", dest="w_max", type=_positive, default=64)

    p = sub.add_parser("rects", help="rectangle sets, diagonals and initial order")
    common(p, ("json", "csv"))
    p.add_argument("--tam-width", dest="w_max", type=_positive, required=True)

    p = sub.add_parser("schedule", help="wrapper design, TAM assignment and test schedule")
    common(p, FORMATS)
    p.add_argument("--tam-width", dest="w_max", type=_positive, required=True)
    p.add_argument("--power-limit", dest="p_max", type=_power)
    p.add_argument("--normalize", action="store_true", help="SVG time axis in units of T_min")

    p = sub.add_parser("verify", help="check a schedule JSON file against an SOC")
    common(p, ("text", "json"))
    p.add_argument("schedule_file", help="schedule JSON written by 'schedule --format json'")
    return parser


def _load(path):
    try:
        return load_soc(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except SocFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


def cmd_wrapper(cfg: RunConfig) -> tuple[str, int]:
    soc = _load(cfg.soc)
    try:
        core = soc.core(cfg.core)
    except KeyError:
        raise UsageError(f"unknown core {cfg.core} (SOC {soc.name} has cores {soc.ids})") from None
    rows = tam_table(core, cfg.w_max)
    if cfg.fmt == "csv":
        return tam_table_csv(rows), 0
    if cfg.fmt == "json":
        payload = {"core": core.id, "rows": [vars(r) for r in rows]}
        return json.dumps(payload, indent=2) + "\n", 0
    return render.tam_table_text(core.id, rows), 0


def cmd_rects(cfg: RunConfig) -> tuple[str, int]:
    soc = _load(cfg.soc)
    sets, t_min, _ = prepare(soc, cfg.w_max)
    if cfg.fmt == "csv":
        return rects_csv(sets, t_min), 0
    return rects_json(sets, t_min), 0


def cmd_schedule(cfg: RunConfig) -> tuple[str, int]:
    soc = _load(cfg.soc)
    try:
        sched = schedule(soc, cfg.w_max, cfg.p_max)
    except SchedulingError as exc:
        return f"error: {exc}\n", 1
    problems = verify_schedule(sched, soc)
    if problems:
        msg = "internal error: schedule failed verification\n" + "".join(f"  {p}\n" for p in problems)
        return msg, 1
    if cfg.fmt == "json":
        return render.schedule_json(sched), 0
    if cfg.fmt == "csv":
        return render.schedule_csv(sched), 0
    if cfg.fmt == "svg":
        return render.schedule_svg(sched, normalize=cfg.normalize), 0
    return render.schedule_text(sched), 0


def cmd_verify(cfg: RunConfig) -> tuple[str, int]:
    soc = _load(cfg.soc)
    try:
        with open(cfg.schedule_file, encoding="utf-8") as fh:
            sched = render.schedule_from_json(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {cfg.schedule_file}: {exc.strerror}") from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    problems = verify_schedule(sched, soc)
    if cfg.fmt == "json":
        text = json.dumps({"ok": not problems, "violations": problems}, indent=2) + "\n"
    else:
        text = "OK\n" if not problems else "".join(f"{p}\n" for p in problems)
    return text, 1 if problems else 0


COMMANDS = {"wrapper": cmd_wrapper, "rects": cmd_rects, "schedule": cmd_schedule, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        soc=args.soc,
        w_max=getattr(args, "w_max", None),
        p_max=getattr(args, "p_max", None),
        core=getattr(args, "core", None),
        fmt=args.fmt,
        out=args.out,
        normalize=getattr(args, "normalize", False),
        schedule_file=getattr(args, "schedule_file", None),
    )
    try:
        text, code = COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"{parser.prog} {cfg.command}: error: {exc}", file=sys.stderr)
        return 2
    stream = sys.stderr if code and cfg.command == "schedule" else None
    if stream is not None:
        stream.write(text)
    elif cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
