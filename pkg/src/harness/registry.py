"""Suite registry and concurrent case runner."""

import asyncio
import logging
from typing import Any, Dict, List, Optional, Sequence

from .base import BaseSuite, CheckReport, SuiteCase
from ..errors import BernoulliLabError

logger = logging.getLogger(__name__)


class SuiteRegistry:
    """
    Registry of named verification suites.

    The registry:
    1. Stores all registered suites
    2. Expands suite names into independent cases
    3. Runs cases concurrently in worker threads
    4. Turns case exceptions into ERROR reports so a batch never aborts
    """

    def __init__(self):
        self._suites: Dict[str, BaseSuite] = {}

    def register(self, suite: BaseSuite) -> None:
        if suite.name in self._suites:
            logger.warning(f"Suite '{suite.name}' is already registered, replacing...")
        self._suites[suite.name] = suite
        logger.debug(f"Registered suite: {suite.name}")

    def get(self, name: str) -> Optional[BaseSuite]:
        return self._suites.get(name)

    def names(self) -> List[str]:
        return sorted(self._suites)

    def list_suites(self) -> List[BaseSuite]:
        return [self._suites[name] for name in self.names()]

    def expand(self, names: Sequence[str], config: Dict[str, Any], settings) -> List[SuiteCase]:
        """Cases for the requested suites; 'all' selects every suite."""
        if "all" in names:
            names = self.names()
        cases: List[SuiteCase] = []
        for name in names:
            suite = self._suites.get(name)
            if suite is None:
                raise KeyError(f"Unknown suite '{name}'. Available: {', '.join(self.names())}")
            cases.extend(suite.cases(config.get(name, {}), settings))
        return cases

    @staticmethod
    def run_case(case: SuiteCase) -> CheckReport:
        """Run one case; failures become ERROR reports."""
        try:
            report = case.run()
            report.name = case.name
            if not report.inputs:
                report.inputs = case.inputs
        except BernoulliLabError as e:
            logger.error(f"Case {case.name} failed: {e.kind}: {e.detail}")
            report = CheckReport.from_error(case.name, e.to_dict(), case.inputs)
        except Exception as e:
            logger.exception(f"Unexpected error in case {case.name}")
            report = CheckReport.from_error(
                case.name, {"kind": "internal_error", "detail": str(e), "context": {}}, case.inputs
            )
        logger.info(f"{case.name}: {report.status.value} ({report.wall_time:.1f}s)")
        return report

    async def run_cases(self, cases: Sequence[SuiteCase], jobs: int = 1) -> List[CheckReport]:
        """Run cases with at most `jobs` in flight; reports are sorted by name."""
        semaphore = asyncio.Semaphore(max(1, jobs))

        async def _run(case: SuiteCase) -> CheckReport:
            async with semaphore:
                return await asyncio.to_thread(self.run_case, case)

        reports = await asyncio.gather(*(_run(case) for case in cases))
        return sorted(reports, key=lambda r: r.name)

    def run(self, names: Sequence[str], config: Dict[str, Any], settings, jobs: int = 1) -> List[CheckReport]:
        cases = self.expand(names, config, settings)
        logger.info(f"Running {len(cases)} cases from suites {', '.join(names)} with {jobs} job(s)")
        return asyncio.run(self.run_cases(cases, jobs))


# Global registry instance
_registry: Optional[SuiteRegistry] = None


def get_registry() -> SuiteRegistry:
    """Get the global suite registry, registering the built-in suites on first use."""
    global _registry
    if _registry is None:
        _registry = SuiteRegistry()
        from .suites import register_default_suites
        register_default_suites(_registry)
    return _registry


def register_suite(suite: BaseSuite) -> None:
    """Convenience function to register a suite with the global registry."""
    get_registry().register(suite)
