from .config import Caps, ConfigError, RunConfig, from_dict, load
from .presets import ALL_SECTIONS, PRESETS
from .report import ANCHORS, Entry, Report, Section, render_text
from .runner import EXIT_CONFIG, EXIT_MISMATCH, EXIT_PASS, exit_code, run

__all__ = [
    "ALL_SECTIONS",
    "ANCHORS",
    "Caps",
    "ConfigError",
    "EXIT_CONFIG",
    "EXIT_MISMATCH",
    "EXIT_PASS",
    "Entry",
    "PRESETS",
    "Report",
    "RunConfig",
    "Section",
    "exit_code",
    "from_dict",
    "load",
    "render_text",
    "run",
]
