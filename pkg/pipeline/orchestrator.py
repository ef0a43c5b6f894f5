"""
Check Orchestrator
Runs the validator categories concurrently and aggregates their results
"""

import asyncio
from typing import Dict, List, Optional

import structlog

from models.program import Program
from models.terms import Instance
from models.validation import CheckStatus, ValidationResult
from validators.equation_validator import EquationValidator
from validators.fragment_validator import FragmentValidator
from validators.properness_validator import PropernessValidator
from validators.safety_validator import SafetyValidator
from validators.stratification_validator import StratificationValidator

logger = structlog.get_logger(__name__)


class CheckOrchestrator:
    """
    Check Orchestrator

    Coordinates static checks:
    1. Run the program categories (A-D) in parallel
    2. Collect results, logging categories that raised
    3. Compute overall statistics
    """

    def __init__(self, config: dict = None):
        self.config = config or {}

        self.safety_validator = SafetyValidator(config)
        self.stratification_validator = StratificationValidator(config)
        self.equation_validator = EquationValidator(config)
        self.fragment_validator = FragmentValidator(config)
        self.properness_validator = PropernessValidator(config)

    async def check_program(self, program: Program, subject: str = "program") -> ValidationResult:
        validation_result = ValidationResult(subject=subject)
        state: Dict = {"program": program}

        results = await asyncio.gather(
            self.safety_validator.validate(program, state),
            self.stratification_validator.validate(program, state),
            self.equation_validator.validate(program, state),
            self.fragment_validator.validate(program, state),
            return_exceptions=True,
        )
        self._collect(validation_result, results, ["A", "B", "C", "D"])
        return self._calculate_overall_stats(validation_result)

    async def check_instance(self, instance: Instance, subject: str = "instance") -> ValidationResult:
        validation_result = ValidationResult(subject=subject)
        results = await asyncio.gather(
            self.properness_validator.validate(instance),
            return_exceptions=True,
        )
        self._collect(validation_result, results, ["P"])
        return self._calculate_overall_stats(validation_result)

    async def check_batch(self, programs: Dict[str, Program]) -> List[ValidationResult]:
        """Check several programs; results keep the input order"""
        return list(await asyncio.gather(*(self.check_program(p, name) for name, p in programs.items())))

    def _collect(self, validation_result: ValidationResult, results: list, categories: List[str]):
        for category, result in zip(categories, results):
            if isinstance(result, Exception):
                logger.error("category_failed", category=category, error=str(result))
                continue
            validation_result.category_results[result.category] = result

    def _calculate_overall_stats(self, validation_result: ValidationResult) -> ValidationResult:
        """Calculate overall statistics across all categories"""

        all_checks = []
        for category_result in validation_result.category_results.values():
            all_checks.extend(category_result.checks)

        if not all_checks:
            validation_result.overall_status = "ERROR"
            return validation_result

        validation_result.passed_checks = len([c for c in all_checks if c.status == CheckStatus.PASS])
        validation_result.failed_checks = len([c for c in all_checks if c.status == CheckStatus.FAIL])
        validation_result.warnings = len([c for c in all_checks if c.status == CheckStatus.WARNING])

        if validation_result.failed_checks:
            validation_result.overall_status = "FAIL"
        elif validation_result.warnings:
            validation_result.overall_status = "PASS_WITH_WARNINGS"
        else:
            validation_result.overall_status = "PASS"

        logger.info(
            "checks_completed",
            subject=validation_result.subject,
            status=validation_result.overall_status,
            failed=validation_result.failed_checks,
        )
        return validation_result


def run_checks(program: Optional[Program] = None, instance: Optional[Instance] = None, subject: str = "") -> ValidationResult:
    """Synchronous entry point for the CLI"""
    orchestrator = CheckOrchestrator()
    if program is not None:
        return asyncio.run(orchestrator.check_program(program, subject or "program"))
    return asyncio.run(orchestrator.check_instance(instance, subject or "instance"))
