"""
Rule Safety Validator (Category A)
Checks sugar placement and that every variable is limited
"""

from typing import List, Optional

from language.desugar import desugar_rule
from language.safety import check_safety
from models.errors import IllegalSugar
from models.program import Program, Rule
from models.validation import CategoryResult, CheckResult, CheckStatus, Severity


class SafetyValidator:
    """
    Category A: Rule Safety

    Validates:
    - A1: Sugar variables used where they can be expanded
    - A2: Every variable of every rule is limited
    """

    def __init__(self, config: dict = None):
        self.config = config or {}

    async def validate(self, program: Program, state: Optional[dict] = None) -> CategoryResult:
        """Execute all safety checks"""

        checks = []

        # A1: Sugar placement; A2 works on the expanded rules
        sugar_check, expanded = self._check_a1_sugar(program)
        checks.append(sugar_check)

        # A2: Limited variables
        checks.append(self._check_a2_limited(expanded))

        return CategoryResult(category="A", category_name="Rule Safety", checks=checks)

    def _check_a1_sugar(self, program: Program):
        expanded: List[Rule] = []
        problems = []
        for rule in program.rules:
            try:
                expanded.extend(desugar_rule(rule))
            except IllegalSugar as e:
                problems.append(str(e))

        if problems:
            return CheckResult(
                check_id="A1",
                check_name="Sugar Placement",
                status=CheckStatus.FAIL,
                reasoning=f"{len(problems)} rule(s) use sugar variables illegally",
                severity=Severity.HIGH,
                details={"errors": problems},
            ), expanded

        return CheckResult(
            check_id="A1",
            check_name="Sugar Placement",
            status=CheckStatus.PASS,
            reasoning=f"{len(program.rules)} rule(s) expand to {len(expanded)} plain rule(s)",
            severity=Severity.LOW,
        ), expanded

    def _check_a2_limited(self, rules: List[Rule]) -> CheckResult:
        unsafe = {}
        for rule in rules:
            report = check_safety(rule)
            if not report:
                unsafe[str(rule)] = [str(v) for v in report.unlimited]

        if unsafe:
            return CheckResult(
                check_id="A2",
                check_name="Limited Variables",
                status=CheckStatus.FAIL,
                reasoning=f"{len(unsafe)} rule(s) have variables that are not limited",
                severity=Severity.CRITICAL,
                details={"unsafe": unsafe},
            )

        return CheckResult(
            check_id="A2",
            check_name="Limited Variables",
            status=CheckStatus.PASS,
            reasoning="All variables are limited",
            severity=Severity.LOW,
        )
