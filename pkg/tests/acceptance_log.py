"""Collects one PASS/FAIL line per acceptance criterion for the run summary."""
from __future__ import annotations

RESULTS: dict[int, tuple[bool, str]] = {}


def record(criterion: int, passed: bool, detail: str) -> str:
    RESULTS[criterion] = (passed, detail)
    line = format_line(criterion)
    print(line)
    return line


def format_line(criterion: int) -> str:
    passed, detail = RESULTS[criterion]
    return f"criterion {criterion}: {'PASS' if passed else 'FAIL'} ({detail})"
