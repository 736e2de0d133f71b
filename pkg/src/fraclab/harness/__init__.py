"""Verification suites, reports and the command line interface."""

from .config import ExperimentConfig, load_config, parse_config_text
from .report import CheckRecord, VerificationReport
from .suites import choose_r_report, verify_oracles, verify_thm11, verify_thm12, verify_thm13

__all__ = [
    "ExperimentConfig", "load_config", "parse_config_text", "CheckRecord", "VerificationReport",
    "verify_oracles", "verify_thm11", "verify_thm12", "verify_thm13", "choose_r_report",
]
