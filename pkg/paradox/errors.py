from contextlib import contextmanager
from typing import Iterator, List, Optional


class ParadoxError(Exception):
    """Base error. ``exit_code`` is what the command line returns for it."""

    exit_code = 1

    def __init__(self, message: str, provenance: Optional[List[str]] = None):
        super().__init__(message)
        self.message = message
        self.provenance = list(provenance or [])

    def to_dict(self) -> dict:
        return {
            "type": type(self).__name__,
            "message": self.message,
            "exit_code": self.exit_code,
            "provenance": self.provenance,
        }


class UsageError(ParadoxError):
    exit_code = 2


class ConvergenceError(ParadoxError):
    exit_code = 3


class NonConvergenceError(ConvergenceError):
    """Quadrature budget or root iteration cap exhausted."""

    def __init__(self, message: str, best_estimate: float, provenance: Optional[List[str]] = None):
        super().__init__(message, provenance)
        self.best_estimate = best_estimate

    def to_dict(self) -> dict:
        out = super().to_dict()
        out["best_estimate"] = self.best_estimate
        return out


class BracketError(ConvergenceError):
    pass


class CappedSearchError(ConvergenceError):
    pass


class DomainError(ParadoxError, ValueError):
    exit_code = 4


@contextmanager
def provenance(stage: str) -> Iterator[None]:
    """Tag any ParadoxError raised inside the block with the failing stage."""
    try:
        yield
    except ParadoxError as exc:
        exc.provenance.insert(0, stage)
        raise
