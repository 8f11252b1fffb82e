"""Numerical verification harness."""

from .base import BaseSuite, CheckReport, CheckStatus, SuiteCase, Table
from .registry import SuiteRegistry, get_registry, register_suite

__all__ = [
    "BaseSuite",
    "CheckReport",
    "CheckStatus",
    "SuiteCase",
    "Table",
    "SuiteRegistry",
    "get_registry",
    "register_suite",
]
