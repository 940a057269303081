"""Wrapper/TAM co-optimization and power-constrained test scheduling for SOCs."""

from importlib import resources

from .rects import (Rectangle, RectSet, build_rectangles, compute_tmin, diagonal_length,
                    order_initial)
from .scheduler import (Schedule, ScheduleEntry, SchedulerState, SchedulingError,
                        power_admissible, schedule, update, verify_schedule)
from .soc_model import CoreSpec, SocFormatError, SocSpec, parse_soc, serialize_soc, validate_soc
from .wrapper import TamTableEntry, WrapperChain, WrapperConfig, design_wrapper, tam_table, test_time
from .oracle import brute_force_schedule

__version__ = "0.1.0"


def benchmark_path(name: str):
    """Path of a bundled benchmark file, e.g. ``benchmark_path("d695")``."""
    return resources.files(__name__) / "data" / f"{name}.soc"
