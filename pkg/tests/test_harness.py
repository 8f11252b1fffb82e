import asyncio

import numpy.testing as npt
import pytest

from src.convex_geometry import Disk, Ellipse
from src.errors import ConvexityLoss, InfeasibleTau
from src.harness.base import BaseSuite, CheckReport, CheckStatus, SuiteCase
from src.harness.checks import (
    bm_check,
    combination_certificate_check,
    flucher_rumpf_probe,
    gradient_monotonicity_check,
    hadwiger_sequence,
    homogeneity_check,
    largest_set_inclusion_check,
    solve_ring_pair,
    urysohn_check,
)
from src.harness.registry import SuiteRegistry, get_registry
from src.settings import LabSettings


def _passing(name="ok"):
    report = CheckReport(name=name, margins={"m": -1e-9}, tolerances={"m": 1e-8})
    report.judge()
    return report


def _raise_lab_error():
    raise ConvexityLoss("projection could not restore convexity", {"iteration": 3})


def _raise_bug():
    raise RuntimeError("boom")


class _StubSuite(BaseSuite):
    name = "stub"
    description = "stub suite"

    def cases(self, config, settings):
        return [
            SuiteCase("stub/002", _raise_bug),
            SuiteCase("stub/000", _passing, {"x": 1}),
            SuiteCase("stub/001", _raise_lab_error),
        ]


def test_report_judgement():
    assert _passing().status == CheckStatus.PASSED
    failing = CheckReport(name="bad", margins={"m": -1.0}, tolerances={"m": 0.5})
    assert not failing.judge()
    assert failing.status == CheckStatus.FAILED
    assert not failing.ok
    with pytest.raises(ValueError):
        CheckReport(name="loose", margins={"m": 0.0}).judge()


def test_report_statuses():
    info = CheckReport(name="probe", informational=True)
    assert info.status == CheckStatus.INFO
    assert info.ok
    error = CheckReport.from_error("broken", {"kind": "newton_divergence", "detail": "x", "context": {}})
    assert error.status == CheckStatus.ERROR
    assert error.to_dict()["status"] == "error"


def test_registry_runs_cases_and_captures_errors():
    registry = SuiteRegistry()
    registry.register(_StubSuite())
    reports = registry.run(["stub"], {}, LabSettings(), jobs=2)
    assert [r.name for r in reports] == ["stub/000", "stub/001", "stub/002"]
    assert reports[0].status == CheckStatus.PASSED
    assert reports[0].inputs == {"x": 1}
    assert reports[1].error["kind"] == "convexity_loss"
    assert reports[1].error["context"] == {"iteration": 3}
    assert reports[2].error["kind"] == "internal_error"


def test_registry_expansion():
    registry = SuiteRegistry()
    registry.register(_StubSuite())
    assert len(registry.expand(["all"], {}, LabSettings())) == 3
    with pytest.raises(KeyError):
        registry.expand(["nope"], {}, LabSettings())


def test_run_cases_is_awaitable():
    registry = SuiteRegistry()
    cases = [SuiteCase(f"c/{i}", _passing) for i in (1, 0)]
    reports = asyncio.run(registry.run_cases(cases, jobs=1))
    assert [r.name for r in reports] == ["c/0", "c/1"]


def test_default_suites():
    registry = get_registry()
    assert registry.names() == sorted([
        "bm", "urysohn", "hadwiger", "exterior-inclusion", "interior-inclusion",
        "uniqueness", "monotonicity", "homogeneity", "subsolution", "flucher-rumpf",
    ])
    cases = registry.expand(["bm"], {}, LabSettings())
    assert len(cases) == 9
    assert cases[0].name == "bm/000"
    assert cases[0].inputs["lambda"] == 0.25
    with pytest.raises(ValueError):
        registry.expand(["bm"], {"bm": {"weights": [0.5]}}, LabSettings())


def test_suite_config_overrides_defaults():
    cases = get_registry().expand(["urysohn"], {"urysohn": {"bodies": [{"disk": {"R": 3.0}}]}}, LabSettings())
    assert [c.name for c in cases] == ["urysohn/000"]
    assert cases[0].inputs["omega"] == {"disk": {"R": 3.0}}


def test_hadwiger_means_approach_the_ball():
    settings = LabSettings(M=64, L=24, bisect_tol=1e-3)
    report = hadwiger_sequence(Ellipse(2.0, 1.0), 2.0, 6, settings, compute_lambda=False)
    assert report.passed
    assert report.quantities["symmetry_order"] == 2
    table = report.tables["hadwiger"]
    assert [row[0] for row in table.rows] == list(range(1, 7))
    distances = [row[3] for row in table.rows]
    assert all(a > b for a, b in zip(distances, distances[1:]))


def test_hadwiger_disk_is_a_fixed_point(settings):
    report = hadwiger_sequence(Disk(1.0), 2.0, 3, settings, compute_lambda=False)
    assert report.passed
    with pytest.raises(ValueError):
        hadwiger_sequence(Disk(1.0), 2.0, 1, settings)


def test_monotonicity_on_annulus(settings):
    report = gradient_monotonicity_check(solve_ring_pair(Disk(1.0), Disk(0.5), 2.0, settings))
    assert report.passed
    assert report.quantities["max_gradient"] > report.quantities["min_gradient"]


def test_combination_certificate(settings):
    rings = [
        solve_ring_pair(Disk(1.0), Disk(0.5), 2.0, settings),
        solve_ring_pair(Ellipse(2.0, 1.0), Ellipse(1.0, 0.5), 2.0, settings),
    ]
    report = combination_certificate_check(rings, [0.5, 0.5], settings)
    assert report.passed
    assert report.quantities["subsolution"]["passed"]
    assert report.tolerances["harmonic_mean"] == settings.hm_tol
    tight = combination_certificate_check(rings, [0.5, 0.5], settings.with_overrides(hm_tol=1e-9))
    assert tight.tolerances["harmonic_mean"] == 1e-9
    assert tight.quantities["harmonic_mean_error"] <= 1e-9


def test_interior_inclusion_requires_feasible_tau(settings):
    with pytest.raises(InfeasibleTau):
        largest_set_inclusion_check(Disk(1.0), Disk(1.0), 2.0, 4.0, 0.5, 2.0, settings)


def test_bm_endpoint_is_an_equality(settings):
    report = bm_check(Disk(1.0), Disk(2.0), 0.0, 2.0, settings)
    assert report.passed
    assert report.margins["brunn_minkowski"] == 0.0
    assert report.quantities["homothetic_within_tolerance"]
    assert report.quantities["equality_matches_homothety"]
    with pytest.raises(ValueError):
        bm_check(Disk(1.0), Disk(2.0), 1.5, 2.0, settings)


def test_flucher_rumpf_is_informational(settings):
    report = flucher_rumpf_probe(Disk(1.0), 2.0, settings)
    assert report.status == CheckStatus.INFO
    assert report.quantities["ratio"] == pytest.approx(1.0, rel=2e-2)


def test_bm_midpoint_for_disk_and_ellipse(settings):
    report = bm_check(Disk(1.0), Ellipse(2.0, 1.0), 0.5, 2.0, settings)
    assert report.passed
    assert report.quantities["lambda_mix"] <= report.quantities["harmonic_mean"] + report.tolerances["brunn_minkowski"]
    assert not report.quantities["homothetic_within_tolerance"]


def test_urysohn_is_strict_for_ellipse(settings):
    report = urysohn_check(Ellipse(2.0, 1.0), 2.0, settings)
    assert report.passed
    assert report.quantities["strict"]
    assert report.quantities["urysohn_area_gap"] > 0


def test_urysohn_is_tight_for_disk(settings):
    report = urysohn_check(Disk(1.0), 2.0, settings)
    assert report.passed
    assert abs(report.margins["urysohn"]) <= 0.01 * report.quantities["lambda"]


def test_homogeneity(settings):
    report = homogeneity_check(Ellipse(2.0, 1.0), 3.0, 2.0, settings)
    assert report.passed
    npt.assert_allclose(3.0 * report.quantities["lambda_scaled"], report.quantities["lambda"], rtol=2e-3)
    with pytest.raises(ValueError):
        homogeneity_check(Disk(1.0), 0.0, 2.0, settings)


def test_interior_inclusion_for_disk_and_ellipse(settings):
    report = largest_set_inclusion_check(Disk(1.0), Ellipse(2.0, 1.0), 4.0, 4.0, 0.5, 2.0, settings)
    assert report.passed
    assert report.margins["inclusion"] > report.tolerances["inclusion"]
