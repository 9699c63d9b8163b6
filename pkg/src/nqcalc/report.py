"""Command results and their text/json renderings.

Both renderings are deterministic: commands keep manifest order, checks keep
the order their report declares, and timings are only printed on request.
"""
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from nqcalc.checks import CheckResult

__all__ = [
    "PASS",
    "FAIL",
    "ERROR",
    "CommandResult",
    "Report",
    "render_text",
    "render_json",
    "render",
    "FORMATS",
]

PASS = "pass"
FAIL = "fail"
ERROR = "error"


@dataclass(frozen=True)
class CommandResult:
    name: str
    operation: str
    blocks: Tuple[str, ...]
    status: str
    checks: Tuple[CheckResult, ...] = ()
    extras: Dict[str, Any] = field(default_factory=dict)
    error: Optional[str] = None
    elapsed: float = field(default=0.0, compare=False)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self, timings: bool = False) -> Dict[str, Any]:
        result: Dict[str, Any] = {
            "name": self.name,
            "operation": self.operation,
            "blocks": list(self.blocks),
            "status": self.status,
            "checks": [check.to_dict() for check in self.checks],
        }
        if self.extras:
            result["extras"] = self.extras
        if self.error is not None:
            result["error"] = self.error
        if timings:
            result["elapsed"] = round(self.elapsed, 6)
        return result


@dataclass
class Report:
    source: str
    results: List[CommandResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    def count(self, status: str) -> int:
        return sum(1 for result in self.results if result.status == status)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def to_dict(self, timings: bool = False) -> Dict[str, Any]:
        return {
            "source": self.source,
            "passed": self.passed,
            "summary": {status: self.count(status) for status in (PASS, FAIL, ERROR)},
            "commands": [result.to_dict(timings) for result in self.results],
        }


def _extra_lines(key: str, value: Any) -> List[str]:
    if isinstance(value, dict):
        return [f"    {key} {name} = {item}" for name, item in value.items()]
    if isinstance(value, (list, tuple)):
        lines = []
        for item in value:
            if isinstance(item, (list, tuple)) and len(item) == 2:
                lines.append(f"    {key} {item[0]} = {item[1]}")
            else:
                lines.append(f"    {key}: {item}")
        return lines
    return [f"    {key}: {value}"]


def render_text(report: Report, timings: bool = False) -> str:
    lines = [f"nqcalc report for {report.source}"]
    for result in report.results:
        head = f"[{result.status}] {result.name} = {result.operation} {' '.join(result.blocks)}"
        if timings:
            head += f" ({result.elapsed:.3f}s)"
        lines.append(head.rstrip())
        if result.error is not None:
            lines.append(f"    error: {result.error}")
        for check in result.checks:
            lines.append(f"    {check}")
        for key, value in result.extras.items():
            lines.extend(_extra_lines(key, value))
    lines.append(
        f"summary: {report.count(PASS)} passed, {report.count(FAIL)} failed, "
        f"{report.count(ERROR)} errors"
    )
    return "\n".join(lines) + "\n"


def render_json(report: Report, timings: bool = False) -> str:
    return json.dumps(report.to_dict(timings), indent=2, sort_keys=True) + "\n"


FORMATS = {"text": render_text, "json": render_json}


def render(report: Report, fmt: str = "text", timings: bool = False) -> str:
    return FORMATS[fmt](report, timings)

