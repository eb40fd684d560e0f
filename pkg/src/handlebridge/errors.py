"""Exception hierarchy.

Every domain error carries a stable ``name`` which the CLI prints verbatim.
Slice and step numbers in messages are 1-based.
"""


class CalculusError(Exception):
    name = "CalculusError"

    def __init__(self, message: str = ""):
        super().__init__(message or self.name)


class WordSyntaxError(CalculusError):
    name = "SyntaxError"

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class UnknownEvent(WordSyntaxError):
    name = "UnknownEvent"


class StrandUnderflow(CalculusError):
    name = "StrandUnderflow"

    def __init__(self, slice_number: int):
        super().__init__(f"StrandUnderflow({slice_number})")
        self.slice_number = slice_number


class PositionOutOfRange(CalculusError):
    name = "PositionOutOfRange"

    def __init__(self, slice_number: int):
        super().__init__(f"PositionOutOfRange({slice_number})")
        self.slice_number = slice_number


class NonzeroBoundary(CalculusError):
    name = "NonzeroBoundary"

    def __init__(self, which: str):
        super().__init__(f"NonzeroBoundary({which})")
        self.which = which


class WidthUndefined(CalculusError):
    name = "WidthUndefined"


class NotBridge(CalculusError):
    name = "NotBridge"


class NotPlatNormal(CalculusError):
    name = "NotPlatNormal"


class SiteMismatch(CalculusError):
    name = "SiteMismatch"


class InvalidSite(CalculusError):
    name = "InvalidSite"


class FingerprintMismatch(CalculusError):
    name = "FingerprintMismatch"


class StepFailed(CalculusError):
    name = "StepFailed"

    def __init__(self, step_number: int, reason: str):
        super().__init__(f"StepFailed({step_number}, {reason})")
        self.step_number = step_number
        self.reason = reason


class EndMismatch(CalculusError):
    name = "EndMismatch"


class DiagramsDiffer(CalculusError):
    name = "DiagramsDiffer"


class RSeqInvalid(CalculusError):
    name = "RSeqInvalid"

    def __init__(self, index: int, reason: str = ""):
        super().__init__(f"RSeqInvalid({index})" + (f": {reason}" if reason else ""))
        self.index = index


class CompileFailed(CalculusError):
    """Raised when the bounded search inside a procedure exhausts its budget."""

    name = "CompileFailed"


class DepthExhausted(CalculusError):
    """A bounded search stopped at its depth limit without reaching the goal."""

    name = "DepthExhausted"


class Unreachable(CalculusError):
    """The goal lies outside the closed reachable set of the chosen moves."""

    name = "Unreachable"
