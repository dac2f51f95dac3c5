"""Exception hierarchy shared by every module."""

from __future__ import annotations


class DynMsoError(Exception):
    """Base class for all errors raised by the package."""


class FormatError(DynMsoError):
    """A text input file could not be parsed."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


# graph
class EdgeNotInMaximal(DynMsoError):
    pass


# treedec
class NoContainingBag(DynMsoError):
    pass


class WidthCapExceeded(DynMsoError):
    pass


class LabelBudgetExceeded(DynMsoError):
    pass


class InvalidDecomposition(DynMsoError):
    def __init__(self, violations: list[str]) -> None:
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


# automaton
class UnknownLabel(DynMsoError):
    pass


class DomainMismatch(DynMsoError):
    pass


class AlphabetMismatch(DynMsoError):
    pass


class NondeterministicComplement(DynMsoError):
    pass


class IncompleteTransitions(DynMsoError):
    pass


# mso
class MsoSyntaxError(DynMsoError):
    def __init__(self, message: str, line: int, column: int) -> None:
        self.lineno = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}")


class UnboundVariable(DynMsoError):
    pass


class TooLarge(DynMsoError):
    pass


class StateBudgetExceeded(DynMsoError):
    pass


# dyckgraph / dyckreach
class SizeBudgetExceeded(DynMsoError):
    pass


class UnknownEdge(DynMsoError):
    pass


class NotFunnelShaped(DynMsoError):
    pass


class NotAFunnelSwap(DynMsoError):
    pass


class UnknownVertex(DynMsoError):
    pass


# engine
class EngineError(DynMsoError):
    """Failure inside the precomputation pipeline, tagged with the step number."""

    def __init__(self, step: int, cause: Exception) -> None:
        self.step = step
        self.cause = cause
        super().__init__(f"step {step}: {type(cause).__name__}: {cause}")


class OracleDisagreement(DynMsoError):
    def __init__(self, message: str, instance: dict) -> None:
        self.instance = instance
        super().__init__(message)
