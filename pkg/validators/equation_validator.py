"""
Equation Validator (Category C)
Checks the equalities of every rule body against the classes the
unifier enumeration handles
"""

from typing import List, Optional

from language.desugar import desugar
from language.equations import is_equationally_acyclic, is_linear
from models.errors import IllegalSugar
from models.program import Program, Rule
from models.validation import CategoryResult, CheckResult, CheckStatus, Severity
from unification.mgu import is_solvable


class EquationValidator:
    """
    Category C: Equations

    Validates:
    - C1: Rule bodies are equationally acyclic
    - C2: Every positive equality is linear or has a ground side
    """

    def __init__(self, config: dict = None):
        self.config = config or {}

    async def validate(self, program: Program, state: Optional[dict] = None) -> CategoryResult:
        """Execute all equation checks"""

        try:
            rules = list(desugar(program).rules)
        except IllegalSugar:
            rules = list(program.rules)

        checks = [
            self._check_c1_acyclic(rules),
            self._check_c2_solvable(rules),
        ]
        return CategoryResult(category="C", category_name="Equations", checks=checks)

    def _check_c1_acyclic(self, rules: List[Rule]) -> CheckResult:
        cyclic = [r for r in rules if not is_equationally_acyclic(r)]
        if not cyclic:
            return CheckResult(
                check_id="C1",
                check_name="Equational Acyclicity",
                status=CheckStatus.PASS,
                reasoning="Every rule body is equationally acyclic",
                severity=Severity.LOW,
            )

        # cyclic graphs made only of linear equalities still eliminate
        linear_only = all(
            is_linear(lit.atom)
            for rule in cyclic
            for lit in rule.body
            if lit.positive and lit.is_equality
        )
        return CheckResult(
            check_id="C1",
            check_name="Equational Acyclicity",
            status=CheckStatus.WARNING,
            reasoning=(
                f"{len(cyclic)} rule(s) have cyclic equation graphs"
                + ("; all their equalities are linear" if linear_only else "")
            ),
            severity=Severity.LOW if linear_only else Severity.MEDIUM,
            details={"rules": [str(r) for r in cyclic]},
        )

    def _check_c2_solvable(self, rules: List[Rule]) -> CheckResult:
        blocked = []
        for rule in rules:
            for lit in rule.body:
                if lit.positive and lit.is_equality and not is_solvable(lit.atom):
                    blocked.append(str(lit.atom))

        if blocked:
            return CheckResult(
                check_id="C2",
                check_name="Equality Elimination",
                status=CheckStatus.FAIL,
                reasoning=f"{len(blocked)} equality(ies) are neither linear nor have a ground side",
                severity=Severity.HIGH,
                details={"equalities": blocked},
            )

        return CheckResult(
            check_id="C2",
            check_name="Equality Elimination",
            status=CheckStatus.PASS,
            reasoning="All positive equalities can be eliminated",
            severity=Severity.LOW,
        )
