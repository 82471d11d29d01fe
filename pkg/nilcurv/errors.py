"""Exceções do domínio nilcurv."""
from __future__ import annotations

from typing import Any, List, Optional


class NilcurvError(ValueError):
    """Base de todas as falhas semânticas da biblioteca."""


class InvalidSignatureError(NilcurvError):
    pass


class DimensionMismatchError(NilcurvError):
    pass


class NotSkewError(NilcurvError):
    pass


class RepresentationError(NilcurvError):
    """Bloco A ou B de uma representação fora da forma exigida."""


class SingularMatrixError(NilcurvError):
    pass


class InvalidAlgebraError(NilcurvError):
    def __init__(self, violations: List[str]) -> None:
        self.violations = list(violations)
        super().__init__("; ".join(self.violations) or "invalid algebra")


class ConstraintViolation(NilcurvError):
    """Parâmetros de família violando uma restrição nomeada."""

    def __init__(self, constraint: str, detail: str = "") -> None:
        self.constraint = constraint
        self.detail = detail
        message = constraint if not detail else f"{constraint} ({detail})"
        super().__init__(message)


class ConsistencyError(NilcurvError):
    """Duas computações do mesmo objeto discordam além da tolerância."""

    def __init__(self, what: str, deviation: Any) -> None:
        self.what = what
        self.deviation = deviation
        super().__init__(f"{what}: deviation {deviation}")


class VerificationError(NilcurvError):
    def __init__(self, message: str, report: Optional[Any] = None) -> None:
        self.report = report
        super().__init__(message)


class MalformedFileError(NilcurvError):
    pass
