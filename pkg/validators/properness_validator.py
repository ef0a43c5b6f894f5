"""
Instance Properness Validator (Category P)
One check per relation: the pairs must form a proper object description
"""

from typing import Optional

import structlog

from models.objects import is_proper
from models.terms import Instance
from models.validation import CategoryResult, CheckResult, CheckStatus, Severity

logger = structlog.get_logger(__name__)


class PropernessValidator:
    """
    Category P: Properness

    Validates, for every relation R of the instance:
    - P.R: no path carries two values and no path is a proper prefix of another
    """

    def __init__(self, config: dict = None):
        self.config = config or {}

    async def validate(self, instance: Instance, state: Optional[dict] = None) -> CategoryResult:
        checks = [self._check_relation(instance, name) for name in sorted(instance.names)]
        return CategoryResult(category="P", category_name="Properness", checks=checks)

    def _check_relation(self, instance: Instance, name: str) -> CheckResult:
        report = is_proper(instance.pairs(name))
        if report:
            return CheckResult(
                check_id=f"P.{name}",
                check_name=f"Relation {name}",
                status=CheckStatus.PASS,
                reasoning=f"{len(instance.pairs(name))} pair(s) form a proper description",
                severity=Severity.LOW,
            )

        logger.info("improper_relation", relation=name, violations=len(report.violations))
        return CheckResult(
            check_id=f"P.{name}",
            check_name=f"Relation {name}",
            status=CheckStatus.FAIL,
            reasoning=report.errors[0] + (f" and {len(report.errors) - 1} more" if len(report.errors) > 1 else ""),
            severity=Severity.HIGH,
            details={
                "violations": [
                    {"kind": v.kind.value, "description": v.describe()} for v in report.violations
                ]
            },
        )
