from abc import ABCMeta, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

__all__ = ["CheckResult", "CheckSuite", "first_failure", "check_zero"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    witness: Optional[str] = None
    detail: Optional[str] = None

    @classmethod
    def ok(cls, name: str, detail: Optional[str] = None) -> "CheckResult":
        return cls(name, True, None, detail)

    @classmethod
    def failure(cls, name: str, witness: str, detail: Optional[str] = None) -> "CheckResult":
        return cls(name, False, witness, detail)

    def to_dict(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {"name": self.name, "passed": self.passed}
        if self.witness is not None:
            result["witness"] = self.witness
        if self.detail is not None:
            result["detail"] = self.detail
        return result

    def __str__(self) -> str:
        status = "pass" if self.passed else "FAIL"
        text = f"{self.name}: {status}"
        if self.witness:
            text += f" [{self.witness}]"
        if self.detail:
            text += f" ({self.detail})"
        return text


class CheckSuite(metaclass=ABCMeta):
    """Common behaviour of every verdict-bearing report."""

    @abstractmethod
    def all_checks(self) -> Sequence[CheckResult]:
        pass

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.all_checks())

    def failed_checks(self) -> List[CheckResult]:
        return [check for check in self.all_checks() if not check.passed]

    def check(self, name: str) -> CheckResult:
        for check in self.all_checks():
            if check.name == name:
                return check
        raise KeyError(name)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "checks": [check.to_dict() for check in self.all_checks()],
        }

    def __bool__(self) -> bool:
        return self.passed


def first_failure(name: str, cases: Iterable[Tuple[str, Any]], detail: Optional[str] = None) -> CheckResult:
    """Pass unless some case value is nonzero; the first one becomes the witness."""
    for label, value in cases:
        if value:
            return CheckResult.failure(name, f"{label}: {value}", detail)
    return CheckResult.ok(name, detail)


def check_zero(name: str, label: str, value: Any) -> CheckResult:
    return first_failure(name, [(label, value)])
