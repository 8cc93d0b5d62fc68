from dataclasses import dataclass, field
from typing import Any

import numpy as np

import quiverflow
from quiverflow.utils.json_io import document, fixed_digits


@dataclass(frozen=True)
class CheckResult:
    """One residual of a suite compared against its bound."""

    suite: str
    check: str
    value: float
    bound: float
    passed: bool
    skipped: bool = False

    @classmethod
    def at_most(cls, suite: str, check: str, value: float, bound: float):
        value = float(value)
        passed = bool(np.isfinite(value) and value <= bound)
        return cls(suite, check, value, bound, passed)

    @classmethod
    def at_least(cls, suite: str, check: str, value: float, bound: float):
        value = float(value)
        return cls(suite, check, value, bound, bool(value >= bound))

    @classmethod
    def skip(cls, suite: str, check: str, value: float, bound: float):
        """Recorded but not judged: the value is below what the check can resolve."""
        return cls(suite, check, float(value), bound, True, skipped=True)

    @classmethod
    def exact(cls, suite: str, check: str, found, expected):
        """Integer or tuple equality; value is 0 on agreement, 1 otherwise."""
        agree = found == expected
        return cls(suite, check, 0.0 if agree else 1.0, 0.0, bool(agree))

    def to_dict(self) -> dict[str, Any]:
        item = {
            "suite": self.suite,
            "check": self.check,
            "value": fixed_digits(self.value),
            "bound": fixed_digits(self.bound),
            "passed": self.passed,
        }
        if self.skipped:
            item["skipped"] = True
        return item


@dataclass
class VerifyReport:
    seed: int
    quick: bool
    items: list[CheckResult] = field(default_factory=list)
    version: str = quiverflow.__version__

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    @property
    def skipped(self) -> list[CheckResult]:
        return [item for item in self.items if item.skipped]

    @property
    def failures(self) -> list[CheckResult]:
        return [item for item in self.items if not item.passed]

    def suites(self) -> list[str]:
        return sorted({item.suite for item in self.items})

    def to_document(self) -> dict[str, Any]:
        return document(
            "report",
            {
                "seed": self.seed,
                "quick": self.quick,
                "version": self.version,
                "passed": self.passed,
                "items": [item.to_dict() for item in self.items],
            },
        )
