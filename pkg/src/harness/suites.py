"""
Built-in verification suites.

Every suite reads an optional configuration block (keys override the
defaults below) and expands it into independent cases named
"<suite>/<index>". Bodies are given in their JSON form, see
convex_geometry.parse_body_spec.
"""

import logging
from functools import partial
from typing import Any, Dict, List

from ..convex_geometry import parse_body_spec, sample_support
from ..exterior_fbp import exterior_inclusion_check
from ..interior_fbp import uniqueness_probe
from ..settings import LabSettings
from .base import BaseSuite, CheckReport, SuiteCase
from .checks import (
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

logger = logging.getLogger(__name__)

DISK = {"disk": {"R": 1.0}}
DISK_2 = {"disk": {"R": 2.0}}
ELLIPSE = {"ellipse": {"a": 2.0, "b": 1.0}}
ROUNDED_SQUARE = {"regular_ngon": {"n": 4, "circumradius": 1.0, "eps": 0.05}}


class ConfiguredSuite(BaseSuite):
    """Suite whose configuration block is merged over class defaults."""

    defaults: Dict[str, Any] = {}

    def merged(self, config: Dict[str, Any]) -> Dict[str, Any]:
        unknown = set(config) - set(self.defaults)
        if unknown:
            raise ValueError(f"Unknown keys for suite '{self.name}': {', '.join(sorted(unknown))}")
        return {**self.defaults, **config}

    def case(self, index: int, run, inputs: Dict[str, Any]) -> SuiteCase:
        return SuiteCase(name=f"{self.name}/{index:03d}", run=run, inputs=inputs)


class BrunnMinkowskiSuite(ConfiguredSuite):
    name = "bm"
    description = "Brunn-Minkowski inequality for the Bernoulli constant"
    defaults = {
        "p": 2.0,
        "pairs": [[DISK, ELLIPSE], [ELLIPSE, ROUNDED_SQUARE], [DISK, DISK_2]],
        "lambdas": [0.25, 0.5, 0.75],
    }

    def cases(self, config: Dict[str, Any], settings: LabSettings) -> List[SuiteCase]:
        cfg = self.merged(config)
        cases = []
        for omega0, omega1 in cfg["pairs"]:
            for lam in cfg["lambdas"]:
                inputs = {"omega0": omega0, "omega1": omega1, "lambda": lam, "p": cfg["p"]}
                run = partial(bm_check, parse_body_spec(omega0), parse_body_spec(omega1), lam, cfg["p"], settings)
                cases.append(self.case(len(cases), run, inputs))
        return cases


class UrysohnSuite(ConfiguredSuite):
    name = "urysohn"
    description = "Mean-width lower bound Lambda(Omega) >= Lambda(B_{b/2})"
    defaults = {"p": 2.0, "bodies": [DISK, ELLIPSE, ROUNDED_SQUARE]}

    def cases(self, config: Dict[str, Any], settings: LabSettings) -> List[SuiteCase]:
        cfg = self.merged(config)
        return [
            self.case(i, partial(urysohn_check, parse_body_spec(body), cfg["p"], settings),
                      {"omega": body, "p": cfg["p"]})
            for i, body in enumerate(cfg["bodies"])
        ]


class HadwigerSuite(ConfiguredSuite):
    name = "hadwiger"
    description = "Rotation means: fixed mean width, nonincreasing Lambda, convergence to the ball"
    defaults = {"p": 2.0, "bodies": [ELLIPSE], "n_max": 8, "compute_lambda": True}

    def cases(self, config: Dict[str, Any], settings: LabSettings) -> List[SuiteCase]:
        cfg = self.merged(config)
        return [
            self.case(i, partial(hadwiger_sequence, parse_body_spec(body), cfg["p"], int(cfg["n_max"]),
                                 settings, bool(cfg["compute_lambda"])),
                      {"omega": body, "p": cfg["p"], "n_max": cfg["n_max"]})
            for i, body in enumerate(cfg["bodies"])
        ]


class ExteriorInclusionSuite(ConfiguredSuite):
    name = "exterior-inclusion"
    description = "Minkowski combination of exterior free domains lies inside the combined solution"
    defaults = {
        "p": 2.0,
        "cases": [
            {"K0": DISK, "K1": DISK, "tau0": 1.0, "tau1": 1.0, "lambda": 0.5},
            {"K0": DISK, "K1": DISK_2, "tau0": 1.0, "tau1": 0.5, "lambda": 0.5},
            {"K0": DISK, "K1": ELLIPSE, "tau0": 1.0, "tau1": 1.0, "lambda": 0.5},
        ],
    }

    def cases(self, config: Dict[str, Any], settings: LabSettings) -> List[SuiteCase]:
        cfg = self.merged(config)
        params = settings.plaplace(cfg["p"])
        cases = []
        for entry in cfg["cases"]:
            run = partial(exterior_inclusion_check, parse_body_spec(entry["K0"]), parse_body_spec(entry["K1"]),
                          entry["tau0"], entry["tau1"], entry["lambda"], params, settings)
            cases.append(self.case(len(cases), run, {**entry, "p": cfg["p"]}))
        return cases


class InteriorInclusionSuite(ConfiguredSuite):
    name = "interior-inclusion"
    description = "Minkowski combination of largest interior sets lies inside the combined one"
    defaults = {
        "p": 2.0,
        "cases": [
            {"omega0": DISK, "omega1": DISK, "tau0": 4.0, "tau1": 4.0, "lambda": 0.5},
            {"omega0": DISK, "omega1": DISK_2, "tau0": 4.0, "tau1": 2.0, "lambda": 0.5},
            {"omega0": DISK, "omega1": ELLIPSE, "tau0": 4.0, "tau1": 4.0, "lambda": 0.5},
        ],
    }

    def cases(self, config: Dict[str, Any], settings: LabSettings) -> List[SuiteCase]:
        cfg = self.merged(config)
        cases = []
        for entry in cfg["cases"]:
            run = partial(largest_set_inclusion_check, parse_body_spec(entry["omega0"]),
                          parse_body_spec(entry["omega1"]), entry["tau0"], entry["tau1"],
                          entry["lambda"], cfg["p"], settings)
            cases.append(self.case(len(cases), run, {**entry, "p": cfg["p"]}))
        return cases


def _uniqueness(body: Dict[str, Any], p: float, settings: LabSettings) -> CheckReport:
    h = sample_support(parse_body_spec(body), settings.grid())
    return uniqueness_probe(h, p, settings=settings)


class UniquenessSuite(ConfiguredSuite):
    name = "uniqueness"
    description = "Solutions at the Bernoulli constant agree across initializations"
    defaults = {"bodies": [DISK, ELLIPSE], "p_values": [2.0, 3.0]}

    def cases(self, config: Dict[str, Any], settings: LabSettings) -> List[SuiteCase]:
        cfg = self.merged(config)
        cases = []
        for body in cfg["bodies"]:
            for p in cfg["p_values"]:
                cases.append(self.case(len(cases), partial(_uniqueness, body, p, settings),
                                       {"omega": body, "p": p}))
        return cases


def _monotonicity(outer: Dict[str, Any], inner: Dict[str, Any], p: float,
                  settings: LabSettings) -> CheckReport:
    sol = solve_ring_pair(parse_body_spec(outer), parse_body_spec(inner), p, settings)
    return gradient_monotonicity_check(sol, settings.mono_tol_rel)


class MonotonicitySuite(ConfiguredSuite):
    name = "monotonicity"
    description = "|Du| is nondecreasing from the outer to the inner boundary along matched normals"
    defaults = {
        "rings": [
            {"outer": DISK, "inner": {"disk": {"R": 0.5}}, "p": 2.0},
            {"outer": ELLIPSE, "inner": {"disk": {"R": 0.5}}, "p": 2.0},
            {"outer": ELLIPSE, "inner": {"disk": {"R": 0.5}}, "p": 3.0},
        ],
    }

    def cases(self, config: Dict[str, Any], settings: LabSettings) -> List[SuiteCase]:
        cfg = self.merged(config)
        return [
            self.case(i, partial(_monotonicity, ring["outer"], ring["inner"], ring["p"], settings), ring)
            for i, ring in enumerate(cfg["rings"])
        ]


class HomogeneitySuite(ConfiguredSuite):
    name = "homogeneity"
    description = "Lambda(alpha Omega) = Lambda(Omega)/alpha"
    defaults = {"p": 2.0, "cases": [{"body": DISK, "alpha": 2.0}, {"body": ELLIPSE, "alpha": 3.0}]}

    def cases(self, config: Dict[str, Any], settings: LabSettings) -> List[SuiteCase]:
        cfg = self.merged(config)
        return [
            self.case(i, partial(homogeneity_check, parse_body_spec(entry["body"]), entry["alpha"],
                                 cfg["p"], settings),
                      {**entry, "p": cfg["p"]})
            for i, entry in enumerate(cfg["cases"])
        ]


def _combination(pair: List[Dict[str, Any]], lam: float, p: float, settings: LabSettings) -> CheckReport:
    rings = [solve_ring_pair(parse_body_spec(r["outer"]), parse_body_spec(r["inner"]), p, settings) for r in pair]
    return combination_certificate_check(rings, [1.0 - lam, lam], settings)


class SubsolutionSuite(ConfiguredSuite):
    name = "subsolution"
    description = "Levelwise combinations of ring solutions are subsolutions with harmonic-mean gradients"
    defaults = {
        "p_values": [2.0, 3.0],
        "lambda": 0.5,
        "pairs": [
            [{"outer": DISK, "inner": {"disk": {"R": 0.5}}},
             {"outer": ELLIPSE, "inner": {"ellipse": {"a": 1.0, "b": 0.5}}}],
        ],
    }

    def cases(self, config: Dict[str, Any], settings: LabSettings) -> List[SuiteCase]:
        cfg = self.merged(config)
        cases = []
        for pair in cfg["pairs"]:
            for p in cfg["p_values"]:
                run = partial(_combination, pair, cfg["lambda"], p, settings)
                cases.append(self.case(len(cases), run, {"rings": pair, "lambda": cfg["lambda"], "p": p}))
        return cases


class FlucherRumpfSuite(ConfiguredSuite):
    name = "flucher-rumpf"
    description = "Informational: Lambda(Omega) against the equal-area disk"
    defaults = {"p": 2.0, "bodies": [ELLIPSE, ROUNDED_SQUARE]}

    def cases(self, config: Dict[str, Any], settings: LabSettings) -> List[SuiteCase]:
        cfg = self.merged(config)
        return [
            self.case(i, partial(flucher_rumpf_probe, parse_body_spec(body), cfg["p"], settings),
                      {"omega": body, "p": cfg["p"]})
            for i, body in enumerate(cfg["bodies"])
        ]


DEFAULT_SUITES = (
    BrunnMinkowskiSuite,
    UrysohnSuite,
    HadwigerSuite,
    ExteriorInclusionSuite,
    InteriorInclusionSuite,
    UniquenessSuite,
    MonotonicitySuite,
    HomogeneitySuite,
    SubsolutionSuite,
    FlucherRumpfSuite,
)


def register_default_suites(registry) -> None:
    """Register every built-in suite with `registry`."""
    for suite_cls in DEFAULT_SUITES:
        registry.register(suite_cls())
