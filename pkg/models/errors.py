"""
Exception hierarchy
"""

from typing import List, Optional, Sequence


class JLogicError(Exception):
    """Base class for every error raised by the engine"""


class ImproperDescription(JLogicError):
    """An object description violates the FD or prefix-freeness"""

    def __init__(self, message: str, violations: Sequence = ()):
        super().__init__(message)
        self.violations = list(violations)


class NotInjectiveOnSupport(JLogicError):
    """A permutation maps two distinct atomic keys of an instance to one key"""


class ProgramSyntaxError(JLogicError):
    """Program text does not follow the grammar"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        location = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{location}")
        self.line = line
        self.column = column


class IllegalSugar(JLogicError):
    """A sugar variable is used where its expansion is undefined"""


class UnsafeRule(JLogicError):
    """A rule has variables that are not limited"""

    def __init__(self, message: str, variables: Sequence = ()):
        super().__init__(message)
        self.variables = list(variables)


class NotStratifiable(JLogicError):
    """Negation occurs on a dependency cycle"""

    def __init__(self, message: str, cycle: Sequence[str] = ()):
        super().__init__(message)
        self.cycle = list(cycle)


class LimitExceeded(JLogicError):
    """Evaluation crossed one of the configured limits"""

    def __init__(self, kind: str, limit: int, detail: str = ""):
        message = f"{kind} limit {limit} exceeded"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)
        self.kind = kind
        self.limit = limit


class VocabMismatch(JLogicError):
    """Declared vocabularies disagree with the program or the instance"""


class CyclicEquality(JLogicError):
    """Equalities outside the class the unifier enumeration handles"""


class InstanceFormatError(JLogicError):
    """Instance JSON does not follow the interchange format"""


class PreconditionFailed(JLogicError):
    """An analysis was asked about input outside its supported fragment"""

    def __init__(self, reasons: List[str]):
        super().__init__("; ".join(reasons))
        self.reasons = list(reasons)
