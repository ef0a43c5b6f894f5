"""
Fragment Validator (Category D)
Reports which analyses accept the program
"""

from typing import Optional

from language.dependencies import is_recursive
from language.desugar import desugar
from models.errors import IllegalSugar
from models.program import Predicate, Program, contains_pack
from models.validation import CategoryResult, CheckResult, CheckStatus, Severity


class FragmentValidator:
    """
    Category D: Analysis Fragment

    Validates:
    - D1: Positive (no negated literals)
    - D2: Nonrecursive
    - D3: Flat (no packing in any rule)

    Every failed condition is a WARNING: the program still evaluates, only
    the static analyses decline it.
    """

    def __init__(self, config: dict = None):
        self.config = config or {}

    async def validate(self, program: Program, state: Optional[dict] = None) -> CategoryResult:
        """Execute all fragment checks"""

        try:
            program = desugar(program)
        except IllegalSugar:
            pass

        checks = [
            self._check_d1_positive(program),
            self._check_d2_nonrecursive(program),
            self._check_d3_flat(program),
        ]
        return CategoryResult(category="D", category_name="Analysis Fragment", checks=checks)

    def _check_d1_positive(self, program: Program) -> CheckResult:
        negated = [str(r) for r in program.rules if not r.is_positive]
        if negated:
            return CheckResult(
                check_id="D1",
                check_name="Positive",
                status=CheckStatus.WARNING,
                reasoning=f"{len(negated)} rule(s) use negation; containment and object-object checks decline them",
                severity=Severity.LOW,
                details={"rules": negated},
            )
        return CheckResult(
            check_id="D1",
            check_name="Positive",
            status=CheckStatus.PASS,
            reasoning="No negated literals",
            severity=Severity.LOW,
        )

    def _check_d2_nonrecursive(self, program: Program) -> CheckResult:
        if is_recursive(program):
            return CheckResult(
                check_id="D2",
                check_name="Nonrecursive",
                status=CheckStatus.WARNING,
                reasoning="Recursive programs cannot be unfolded for static analysis",
                severity=Severity.LOW,
            )
        return CheckResult(
            check_id="D2",
            check_name="Nonrecursive",
            status=CheckStatus.PASS,
            reasoning="Program unfolds into rules over the input relations",
            severity=Severity.LOW,
        )

    def _check_d3_flat(self, program: Program) -> CheckResult:
        packed = []
        for rule in program.rules:
            atoms = [rule.head] + [lit.atom for lit in rule.body if isinstance(lit.atom, Predicate)]
            if any(contains_pack(atom.path) for atom in atoms):
                packed.append(str(rule))
            elif any(contains_pack(side) for lit in rule.body if lit.is_equality for side in (lit.atom.left, lit.atom.right)):
                packed.append(str(rule))

        if packed:
            return CheckResult(
                check_id="D3",
                check_name="Flat",
                status=CheckStatus.WARNING,
                reasoning=f"{len(packed)} rule(s) use packing; containment is decided for flat rules only",
                severity=Severity.LOW,
                details={"rules": packed},
            )
        return CheckResult(
            check_id="D3",
            check_name="Flat",
            status=CheckStatus.PASS,
            reasoning="No packing",
            severity=Severity.LOW,
        )
