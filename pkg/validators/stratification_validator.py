"""
Stratification Validator (Category B)
Checks negation placement, recursion and declared vocabularies
"""

from typing import Optional

from language.dependencies import check_vocabulary, is_recursive, stratify
from models.errors import NotStratifiable, VocabMismatch
from models.program import Program
from models.validation import CategoryResult, CheckResult, CheckStatus, Severity


class StratificationValidator:
    """
    Category B: Stratification

    Validates:
    - B1: No negation on a dependency cycle
    - B2: Recursion (evaluation may not terminate)
    - B3: Input and output vocabularies agree with the rules
    """

    def __init__(self, config: dict = None):
        self.config = config or {}

    async def validate(self, program: Program, state: Optional[dict] = None) -> CategoryResult:
        """Execute all stratification checks"""

        checks = [
            self._check_b1_stratifiable(program),
            self._check_b2_recursion(program),
            self._check_b3_vocabulary(program),
        ]
        return CategoryResult(category="B", category_name="Stratification", checks=checks)

    def _check_b1_stratifiable(self, program: Program) -> CheckResult:
        try:
            strata = stratify(program)
        except NotStratifiable as e:
            return CheckResult(
                check_id="B1",
                check_name="Stratified Negation",
                status=CheckStatus.FAIL,
                reasoning=str(e),
                severity=Severity.CRITICAL,
                details={"cycle": e.cycle},
            )

        return CheckResult(
            check_id="B1",
            check_name="Stratified Negation",
            status=CheckStatus.PASS,
            reasoning=f"{len(strata)} stratum/strata",
            severity=Severity.LOW,
            details={"strata": [sorted({r.head.relation for r in stratum}) for stratum in strata]},
        )

    def _check_b2_recursion(self, program: Program) -> CheckResult:
        if is_recursive(program):
            return CheckResult(
                check_id="B2",
                check_name="Recursion",
                status=CheckStatus.WARNING,
                reasoning="Program is recursive; evaluation is bounded by the configured limits",
                severity=Severity.MEDIUM,
            )

        return CheckResult(
            check_id="B2",
            check_name="Recursion",
            status=CheckStatus.PASS,
            reasoning="Program is nonrecursive and always terminates",
            severity=Severity.LOW,
        )

    def _check_b3_vocabulary(self, program: Program) -> CheckResult:
        try:
            check_vocabulary(program)
        except VocabMismatch as e:
            return CheckResult(
                check_id="B3",
                check_name="Vocabularies",
                status=CheckStatus.FAIL,
                reasoning=str(e),
                severity=Severity.HIGH,
            )

        return CheckResult(
            check_id="B3",
            check_name="Vocabularies",
            status=CheckStatus.PASS,
            reasoning=(
                f"inputs: {', '.join(sorted(program.input_names)) or '-'}; "
                f"outputs: {', '.join(sorted(program.output_names)) or '-'}"
            ),
            severity=Severity.LOW,
        )
