"""Run the selected sections and turn the report into an exit code."""
from __future__ import annotations

import logging
import time

from ..errors import InputError, PrecisionError, ResourceLimitError
from .config import RunConfig
from .report import Report, Section, jsonable
from .sections import SECTIONS, Context, NotApplicable

log = logging.getLogger(__name__)

EXIT_PASS, EXIT_MISMATCH, EXIT_CONFIG = 0, 1, 2


def run(cfg: RunConfig, clock=time.perf_counter) -> Report:
    group = cfg.build_group()
    ctx = Context(group, cfg.caps, cfg.expect, cfg.group.get("relator"))
    report = Report(cfg.to_dict())
    for name in cfg.sections:
        log.info("section %s", name)
        start = clock()
        try:
            section = Section(name, SECTIONS[name](ctx))
        except NotApplicable as exc:
            section = Section(name, [], diagnostic=f"not applicable: {exc}")
        except (ResourceLimitError, PrecisionError) as exc:
            section = Section(name, [], diagnostic=f"resource limit: {exc}")
        _apply_expected_values(section, cfg.expect_values)
        report.sections.append(section)
        report.durations[name] = clock() - start
    return report


def _apply_expected_values(section: Section, wanted: dict):
    """Pin exact values from the config; a mismatch fails the entry."""
    for e in section.entries:
        want = wanted.get(e.name)
        if not want or e.status == "skipped":
            continue
        got = jsonable(e.data)
        diff = {k: {"expected": v, "found": got.get(k)} for k, v in want.items() if got.get(k) != jsonable(v)}
        e.data["expected values"] = {"checked": sorted(want), "mismatches": diff}
        if diff:
            e.status = "fail"


def exit_code(report: Report | None) -> int:
    """0 when every section matches its expectation, 1 otherwise; a missing
    report means the configuration never loaded (2)."""
    if report is None:
        return EXIT_CONFIG
    return EXIT_PASS if report.verdict == "pass" else EXIT_MISMATCH


__all__ = ["run", "exit_code", "EXIT_PASS", "EXIT_MISMATCH", "EXIT_CONFIG", "InputError"]
