"""Base types for verification checks and suites."""

import time
import logging
from abc import ABC, abstractmethod
from contextlib import contextmanager
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, Iterator, List, Optional

import numpy as np

logger = logging.getLogger(__name__)


class CheckStatus(Enum):
    """Outcome of a check."""
    PASSED = "passed"
    FAILED = "failed"
    ERROR = "error"
    INFO = "info"


@dataclass
class Table:
    """Per-check tabular artifact, written as CSV."""
    columns: List[str]
    rows: List[List[Any]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {"columns": self.columns, "rows": self.rows}


@dataclass
class CheckReport:
    """
    Result of one numerical check.

    Attributes:
        name: Check identifier (suite/case for suite entries)
        inputs: Bodies, exponents and weights the check ran on
        quantities: Computed values (constants, distances, ...)
        margins: Signed margins; each must be >= -tolerances[key]
        tolerances: Allowed negative slack per margin
        passed: True iff every margin is within its tolerance
        informational: Data-gathering check without pass/fail semantics
        wall_time: Seconds spent
        tables: CSV artifacts keyed by file stem
        error: Structured error when the check could not run
    """
    name: str
    inputs: Dict[str, Any] = field(default_factory=dict)
    quantities: Dict[str, Any] = field(default_factory=dict)
    margins: Dict[str, float] = field(default_factory=dict)
    tolerances: Dict[str, float] = field(default_factory=dict)
    passed: bool = False
    informational: bool = False
    wall_time: float = 0.0
    tables: Dict[str, Table] = field(default_factory=dict)
    error: Optional[Dict[str, Any]] = None

    @classmethod
    @contextmanager
    def timed(cls, name: str) -> Iterator["CheckReport"]:
        """Yield a report whose wall_time covers the with-block."""
        report = cls(name=name)
        start = time.perf_counter()
        try:
            yield report
        finally:
            report.wall_time = time.perf_counter() - start

    @classmethod
    def from_error(cls, name: str, error: Dict[str, Any], inputs: Optional[Dict[str, Any]] = None) -> "CheckReport":
        return cls(name=name, inputs=inputs or {}, error=error)

    def judge(self) -> bool:
        """Set passed from margins and tolerances."""
        missing = set(self.margins) - set(self.tolerances)
        if missing:
            raise ValueError(f"Margins without declared tolerance: {', '.join(sorted(missing))}")
        self.passed = all(self.margins[k] >= -self.tolerances[k] for k in self.margins)
        return self.passed

    @property
    def status(self) -> CheckStatus:
        if self.error is not None:
            return CheckStatus.ERROR
        if self.informational:
            return CheckStatus.INFO
        return CheckStatus.PASSED if self.passed else CheckStatus.FAILED

    @property
    def ok(self) -> bool:
        """True unless the check failed or errored."""
        return self.status in (CheckStatus.PASSED, CheckStatus.INFO)

    def margin_rows(self) -> List[List[Any]]:
        """Rows for the margin,value,tolerance,within_tolerance CSV schema."""
        rows = []
        for key in sorted(self.margins):
            tol = self.tolerances.get(key, float("nan"))
            rows.append([key, self.margins[key], tol, int(self.margins[key] >= -tol)])
        return rows

    def quantity_rows(self) -> List[List[Any]]:
        """Scalar numeric quantities as quantity,value rows (flags as 0/1)."""
        rows = []
        for key in sorted(self.quantities):
            value = self.quantities[key]
            if isinstance(value, (bool, np.bool_)):
                rows.append([key, int(value)])
            elif isinstance(value, (int, float, np.integer, np.floating)):
                rows.append([key, value])
        return rows

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "status": self.status.value,
            "passed": self.passed,
            "inputs": self.inputs,
            "quantities": self.quantities,
            "margins": self.margins,
            "tolerances": self.tolerances,
            "wall_time": self.wall_time,
            "tables": sorted(self.tables),
            "error": self.error,
        }


@dataclass
class SuiteCase:
    """One runnable entry of a suite."""
    name: str
    run: Callable[[], CheckReport]
    inputs: Dict[str, Any] = field(default_factory=dict)


class BaseSuite(ABC):
    """
    Base class for named verification suites.

    A suite turns an optional configuration document into a list of
    independent cases; the registry runs them and collects reports.
    """

    @property
    @abstractmethod
    def name(self) -> str:
        """Suite name used on the command line."""
        pass

    @property
    @abstractmethod
    def description(self) -> str:
        pass

    @abstractmethod
    def cases(self, config: Dict[str, Any], settings) -> List[SuiteCase]:
        """Build the cases for this run; an empty config selects the defaults."""
        pass
