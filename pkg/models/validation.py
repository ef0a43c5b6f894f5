"""
Validation and verdict result models
"""

from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, PositiveInt

VERDICT_SCHEMA = "jlogic-verdict/1"


class CheckStatus(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    WARNING = "WARNING"
    SKIPPED = "SKIPPED"


class Severity(str, Enum):
    LOW = "LOW"
    MEDIUM = "MEDIUM"
    HIGH = "HIGH"
    CRITICAL = "CRITICAL"


class CheckResult(BaseModel):
    """Result of a single static check"""
    check_id: str
    check_name: str
    status: CheckStatus
    reasoning: str
    severity: Severity = Severity.MEDIUM
    details: Optional[Dict[str, Any]] = None


class CategoryResult(BaseModel):
    """Result of one check category"""
    category: str
    category_name: str
    checks: List[CheckResult]
    passed_count: int = 0
    failed_count: int = 0
    warning_count: int = 0

    def __init__(self, **data):
        super().__init__(**data)
        self._calculate_stats()

    def _calculate_stats(self):
        self.passed_count = len([c for c in self.checks if c.status == CheckStatus.PASS])
        self.failed_count = len([c for c in self.checks if c.status == CheckStatus.FAIL])
        self.warning_count = len([c for c in self.checks if c.status == CheckStatus.WARNING])


class ValidationResult(BaseModel):
    """All categories for one program or instance"""
    subject: str
    category_results: Dict[str, CategoryResult] = {}
    passed_checks: int = 0
    failed_checks: int = 0
    warnings: int = 0
    overall_status: str = "PENDING"

    def get_failures(self) -> List[CheckResult]:
        failures = []
        for category in self.category_results.values():
            for check in category.checks:
                if check.status == CheckStatus.FAIL:
                    failures.append(check)
        return failures


# ---------------------------------------------------------------------------
# Configuration models

class EvalLimits(BaseModel):
    """Guards against nonterminating or exploding evaluation"""
    max_derived_facts: PositiveInt = 1_000_000
    max_path_length: PositiveInt = 10_000
    max_pack_depth: PositiveInt = 64


class OutputMode(str, Enum):
    PAIRS = "pairs"
    TREE = "tree"
    FRESHENED = "freshened"


class VerdictFormat(str, Enum):
    JSON = "json"
    TEXT = "text"


class TransformSymbols(BaseModel):
    pack_markers: List[str] = Field(default_factory=lambda: ["a", "b"], min_length=2, max_length=2)
    cursor_symbols: List[str] = Field(default_factory=lambda: ["c", "d"], min_length=2, max_length=2)
    properize_marker: str = "b"


class Config(BaseModel):
    limits: EvalLimits = Field(default_factory=EvalLimits)
    output_mode: OutputMode = OutputMode.PAIRS
    verdict_format: VerdictFormat = VerdictFormat.JSON
    freshen_prefix: str = "k"
    indent: int = 2
    transform: TransformSymbols = Field(default_factory=TransformSymbols)
    containment_extra_lengths: int = 0
    log_level: str = "WARNING"
    log_json: bool = False
    seed: int = 20240611


# ---------------------------------------------------------------------------
# Verdicts

class ImplicationKind(str, Enum):
    IMPLIED = "Implied"
    NOT_IMPLIED = "NotImpliedByChase"
    AMBIGUOUS = "Ambiguous"


class ChaseKind(str, Enum):
    FAILED = "Failed"
    SUCCEEDED = "Succeeded"


class ImplicationVerdict(BaseModel):
    kind: ImplicationKind
    chase: ChaseKind
    sigma: str
    result: Optional[str] = None
    trivial_consequent: bool = False
    witness: Optional[Dict[str, str]] = None
    steps: int = 0

    @property
    def implied(self) -> bool:
        return self.kind == ImplicationKind.IMPLIED


class ContainmentKind(str, Enum):
    CONTAINED = "Contained"
    NOT_CONTAINED = "NotContained"
    PRECONDITION_FAILED = "PreconditionFailed"


class ContainmentWitness(BaseModel):
    rule: str
    chosen_lengths: Dict[str, int]
    variant: str
    counterexample: List[str]
    missing_fact: str


class ContainmentVerdict(BaseModel):
    kind: ContainmentKind
    rule: Optional[str] = None
    witness: Optional[ContainmentWitness] = None
    reasons: List[str] = []
    chase_failed: bool = False

    @property
    def contained(self) -> bool:
        return self.kind == ContainmentKind.CONTAINED


class ObjectObjectKind(str, Enum):
    YES = "yes"
    NO = "no"
    UNSUPPORTED = "unsupported"


class ObjectObjectWitness(BaseModel):
    delta: int
    relation: str
    first_rule: str
    second_rule: str
    jaegd: str


class ObjectObjectVerdict(BaseModel):
    kind: ObjectObjectKind
    witness: Optional[ObjectObjectWitness] = None
    reasons: List[str] = []
    checked: int = 0
