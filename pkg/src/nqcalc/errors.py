from typing import Any, Optional

__all__ = [
    "NQCalcError",
    "ContextError",
    "UnknownGenerator",
    "ContextMismatch",
    "DegreeError",
    "DegreeZero",
    "WrongDegree",
    "NonFlatConnection",
    "NotClosed",
    "InvalidSpencerData",
    "FrameMismatch",
    "ArityMismatch",
    "NotHomological",
    "NotSymplectic",
    "NotCompatible",
    "NotNondegenerate",
    "NonClosedConnectionForm",
    "RankDrop",
    "AntisymmetryError",
    "ExpressionSyntaxError",
    "ManifestError",
    "UnresolvedReference",
    "ConfigError",
]


class NQCalcError(Exception):
    """Marker base of every error raised by nqcalc."""


class ContextError(NQCalcError, ValueError):
    pass


class UnknownGenerator(NQCalcError, LookupError):
    def __init__(self, name: str, context: Any = None) -> None:
        self.name = name
        if context is None:
            super().__init__(f"Unknown generator {name!r}")
        else:
            super().__init__(f"Unknown generator {name!r} in {context}")

    def __str__(self) -> str:
        return str(self.args[0])


class ContextMismatch(NQCalcError, ValueError):
    def __init__(self, left: Any, right: Any) -> None:
        super().__init__(f"Operands live in different contexts: {left} and {right}")


class DegreeError(NQCalcError, ValueError):
    pass


class DegreeZero(DegreeError):
    def __init__(self) -> None:
        super().__init__("Degree zero forms have no Spencer description")


class WrongDegree(DegreeError):
    def __init__(self, expected: int, actual: Any) -> None:
        self.expected = expected
        self.actual = actual
        super().__init__(f"Expected a derivation of degree {expected}, got {actual}")


class NonFlatConnection(NQCalcError, ValueError):
    def __init__(self, witness: str) -> None:
        self.witness = witness
        super().__init__(f"Connection is not flat: {witness}")


class NotClosed(NQCalcError, ValueError):
    def __init__(self, witness: str) -> None:
        self.witness = witness
        super().__init__(f"Form is not closed: {witness}")


class InvalidSpencerData(NQCalcError, ValueError):
    def __init__(self, report: Any) -> None:
        self.report = report
        failed = ", ".join(
            f"{check.name} ({check.witness})" for check in report.failed_checks()
        )
        super().__init__(f"Spencer data violate: {failed}")


class FrameMismatch(NQCalcError, ValueError):
    pass


class ArityMismatch(NQCalcError, ValueError):
    pass


class NotHomological(NQCalcError, ValueError):
    def __init__(self, witness: Optional[str]) -> None:
        self.witness = witness
        super().__init__(f"Derivation is not homological: {witness}")


class NotSymplectic(NQCalcError, ValueError):
    pass


class NotCompatible(NQCalcError, ValueError):
    pass


class NotNondegenerate(NQCalcError, ValueError):
    pass


class NonClosedConnectionForm(NQCalcError, ValueError):
    def __init__(self, witness: str) -> None:
        self.witness = witness
        super().__init__(f"Connection 1-form is not closed: {witness}")


class RankDrop(NQCalcError, ValueError):
    pass


class ExpressionSyntaxError(NQCalcError, SyntaxError):
    def __init__(self, message: str, text: str, column: int, line: int = 1) -> None:
        super().__init__(message, ("<expression>", line, column, text))
        self.message = message
        self.line = line
        self.column = column

    def __str__(self) -> str:
        return f"{self.message} at line {self.line}, column {self.column}"


class ManifestError(NQCalcError, ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0) -> None:
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class UnresolvedReference(ManifestError):
    def __init__(self, name: str, line: int = 0, column: int = 0) -> None:
        self.name = name
        super().__init__(f"unresolved reference {name!r}", line, column)


class AntisymmetryError(NQCalcError, ValueError):
    def __init__(self, what: str, key: Any) -> None:
        self.key = key
        super().__init__(f"{what} is not antisymmetric at {key}")


class ConfigError(NQCalcError, ValueError):
    def __init__(self, variable: str, value: str, expected: str) -> None:
        self.variable = variable
        super().__init__(f"{variable}={value!r}: expected {expected}")
