"""Acceptance suites with machine-readable pass/fail reports."""

from quiverflow.verify._report import CheckResult, VerifyReport
from quiverflow.verify._runner import run_suites
from quiverflow.verify._suites import SUITES, associativity_gap

__all__ = ["SUITES", "CheckResult", "VerifyReport", "associativity_gap", "run_suites"]
