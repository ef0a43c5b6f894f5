"""
Reporter
Renders check results and analysis verdicts as JSON or plain text
"""

import json
from typing import Any, Dict, List, Sequence

from pydantic import BaseModel

from models.validation import VERDICT_SCHEMA, CheckStatus, ValidationResult, VerdictFormat


class Reporter:
    """
    Reporter

    Generates reports in two formats:
    - JSON (machine readable, versioned by the "schema" field)
    - Text (one line per check or verdict field)

    Output is deterministic: no timestamps, stable key order.
    """

    STATUS_SYMBOLS = {
        CheckStatus.PASS: "✓",
        CheckStatus.FAIL: "✗",
        CheckStatus.WARNING: "!",
        CheckStatus.SKIPPED: "-",
    }

    def __init__(self, fmt: VerdictFormat = VerdictFormat.JSON, indent: int = 2):
        self.fmt = VerdictFormat(fmt)
        self.indent = indent

    # ------------------------------------------------------------------
    # Static checks

    def check_payload(self, validation_result: ValidationResult) -> Dict[str, Any]:
        report: Dict[str, Any] = {
            "schema": VERDICT_SCHEMA,
            "subject": validation_result.subject,
            "overall_status": validation_result.overall_status,
            "passed_checks": validation_result.passed_checks,
            "failed_checks": validation_result.failed_checks,
            "warnings": validation_result.warnings,
            "categories": {},
        }
        for category_id in sorted(validation_result.category_results):
            category_result = validation_result.category_results[category_id]
            report["categories"][category_id] = {
                "name": category_result.category_name,
                "passed": category_result.passed_count,
                "failed": category_result.failed_count,
                "warnings": category_result.warning_count,
                "checks": [
                    {
                        "id": check.check_id,
                        "name": check.check_name,
                        "status": check.status.value,
                        "severity": check.severity.value,
                        "reasoning": check.reasoning,
                        **({"details": check.details} if check.details else {}),
                    }
                    for check in category_result.checks
                ],
            }
        return report

    def generate_check_report(self, validation_result: ValidationResult) -> str:
        if self.fmt == VerdictFormat.JSON:
            return self._json(self.check_payload(validation_result))

        lines = [
            f"{validation_result.subject}: {validation_result.overall_status}",
            f"  passed {validation_result.passed_checks}, failed {validation_result.failed_checks}, "
            f"warnings {validation_result.warnings}",
        ]
        for category_id in sorted(validation_result.category_results):
            category_result = validation_result.category_results[category_id]
            lines.append(f"Category {category_id}: {category_result.category_name}")
            for check in category_result.checks:
                symbol = self.STATUS_SYMBOLS[check.status]
                lines.append(f"  {symbol} {check.check_id} {check.check_name}: {check.reasoning}")
        return "\n".join(lines)

    # ------------------------------------------------------------------
    # Verdicts

    def verdict_payload(self, command: str, body: Dict[str, Any]) -> Dict[str, Any]:
        payload: Dict[str, Any] = {"schema": VERDICT_SCHEMA, "command": command}
        payload.update({key: _plain(value) for key, value in body.items()})
        return payload

    def generate_verdict_report(self, command: str, body: Dict[str, Any]) -> str:
        payload = self.verdict_payload(command, body)
        if self.fmt == VerdictFormat.JSON:
            return self._json(payload)
        return "\n".join(_text_lines(payload, 0))

    def _json(self, data: Dict[str, Any]) -> str:
        return json.dumps(data, indent=self.indent, ensure_ascii=False)


def _plain(value: Any) -> Any:
    if isinstance(value, BaseModel):
        return value.model_dump(mode="json", exclude_none=True)
    if isinstance(value, dict):
        return {key: _plain(v) for key, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def _text_lines(value: Any, depth: int) -> List[str]:
    pad = "  " * depth
    lines: List[str] = []
    if isinstance(value, dict):
        for key, item in value.items():
            if isinstance(item, (dict, list)) and item:
                lines.append(f"{pad}{key}:")
                lines.extend(_text_lines(item, depth + 1))
            else:
                lines.append(f"{pad}{key}: {_scalar(item)}")
    elif isinstance(value, Sequence) and not isinstance(value, str):
        for item in value:
            if isinstance(item, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_text_lines(item, depth + 1))
            else:
                lines.append(f"{pad}- {_scalar(item)}")
    else:
        lines.append(f"{pad}{_scalar(value)}")
    return lines


def _scalar(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (dict, list)):
        return "{}" if isinstance(value, dict) else "[]"
    return str(value)
